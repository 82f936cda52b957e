"""Cross-module couplings: pair tracking, second-class embedding, grid TASEP."""

import numpy as np
import pytest

from lppsim import (
    Seed,
    passage_times,
    position_of,
    sample_field,
    simulate,
    tagged_pairs,
    three_type_from_tagged,
    three_type_initial,
    two_pair_tasep,
    verify_three_type_coupling,
)
from lppsim.experiments import (
    check_coupling_trial,
    check_psi_trial,
    check_rost_border_trial,
    run_psi_suite,
    verify_couplings,
)


class TestEmbeddedTrajectory:
    def test_initial_state(self):
        for m in (0, 1, 2):
            trajectory = simulate(two_pair_tasep(m, (-15, m + 16)), 2.0, Seed(20, m))
            embedded = three_type_from_tagged(trajectory)
            assert embedded.initial == three_type_initial(m, (-14, m + 15))

    def test_embedded_swaps_are_legal(self):
        for t in range(25):
            trajectory = simulate(two_pair_tasep(1, (-20, 22)), 5.0, Seed(21, t))
            embedded = three_type_from_tagged(trajectory)
            cells = embedded.initial.cells.copy()
            lo = embedded.initial.lo
            for i in range(embedded.event_count):
                b = int(embedded.bonds[i]) - lo
                left, right = cells[b], cells[b + 1]
                assert left == embedded.left_labels[i]
                assert right == embedded.right_labels[i]
                assert bool(embedded.swapped[i]) == (left < right)
                if embedded.swapped[i]:
                    cells[b], cells[b + 1] = right, left

    def test_stops_at_collision_with_merged_labels(self):
        found = 0
        for t in range(60):
            trajectory = simulate(two_pair_tasep(0, (-25, 25)), 8.0, Seed(22, t))
            track = tagged_pairs(trajectory)
            if track.t_col is None:
                continue
            found += 1
            embedded = three_type_from_tagged(trajectory, track)
            assert embedded.horizon == track.t_col
            final = embedded.state_at(track.t_col)
            h = track.plus_at(track.t_col)
            assert position_of(final, 3) == h
            assert position_of(final, 2) == h + 1
        assert found > 20

    def test_direct_three_type_equals_the_embedding(self):
        # same-noise equivalence through the time-varying bond map
        for t in range(100):
            trajectory = simulate(two_pair_tasep(0, (-20, 20)), 6.0, Seed(23, t))
            assert verify_three_type_coupling(trajectory) == []

    @pytest.mark.parametrize("m", [0, 1, 2])
    def test_psi_suite_trials(self, m):
        for t in range(50):
            assert check_psi_trial(m, 12.0, Seed(24 + m, t)) == []


class TestSecondClassAgainstMulti:
    def test_label_zero_tracks_the_second_class_particle(self):
        """Replay the embedded stream on the fully labeled start.

        Until the 2 passes the 3, the position of the 2 in the embedded
        process equals the position of the 0 label in the fully labeled
        process driven by the same mapped rings, and the passing event is
        the moment 0 has just overtaken all of 1..m+1.
        """
        checked_pass = 0
        for m in (0, 1):
            for t in range(60):
                trajectory = simulate(two_pair_tasep(m, (-26, m + 27)), 7.0, Seed(26 + m, t))
                track = tagged_pairs(trajectory)
                if track.censored:
                    continue
                embedded = three_type_from_tagged(trajectory, track)
                window = embedded.initial.window
                multi = np.arange(window[0], window[1] + 1, dtype=np.int64)
                lo = window[0]
                pos2 = 0 - lo
                pos0 = 0 - lo
                tracked = np.arange(0, m + 2) - lo
                passed_at = None
                for i in range(embedded.event_count):
                    b = int(embedded.bonds[i]) - lo
                    if embedded.swapped[i]:
                        left3 = int(embedded.left_labels[i])
                        right3 = int(embedded.right_labels[i])
                        if left3 == 2:
                            pos2 = b + 1
                        elif right3 == 2:
                            pos2 = b
                        if left3 == 2 and right3 == 3:
                            passed_at = i
                    lm, rm = multi[b], multi[b + 1]
                    if lm < rm:
                        multi[b], multi[b + 1] = rm, lm
                        for lab in range(0, m + 2):
                            if tracked[lab] == b and multi[b + 1] == lab:
                                tracked[lab] = b + 1
                            elif tracked[lab] == b + 1 and multi[b] == lab:
                                tracked[lab] = b
                    pos0 = tracked[0]
                    if passed_at is not None:
                        # 0 has just overtaken every one of 1..m+1
                        assert all(tracked[0] > tracked[k] for k in range(1, m + 2))
                        checked_pass += 1
                        break
                    assert pos2 == pos0, f"m={m} trial={t} event={i}"
        assert checked_pass > 30


class TestCouplingIdentitySuite:
    def test_small_run_passes(self):
        report = verify_couplings(60, 32, None, 4242, threads=1)
        assert report.passed, report.summary()
        assert report.checked > 15

    def test_corrupted_weight_is_detected(self):
        field = sample_field(Seed(4242, 1), 33, 33)
        grid = passage_times(field)
        field.weights[3, 2] += 0.5  # tamper after the grid was built
        ran, failures = check_coupling_trial(field, 32, grid=grid)
        assert ran
        assert failures and "recurrence" in failures[0]

    def test_skips_zero_head_start(self):
        for t in range(50):
            field = sample_field(Seed(4242, t), 17, 17)
            from lppsim import compute_N

            ran, failures = check_coupling_trial(field, 16)
            assert failures == []
            assert ran == (compute_N(field) >= 1)


class TestRostBorder:
    def test_ten_grids(self):
        for t in range(10):
            field = sample_field(Seed(515, t), 12, 12)
            assert check_rost_border_trial(field) == []
