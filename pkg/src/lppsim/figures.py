"""Report figures rendered next to the delimited output.

These plots summarize estimator output for humans; the CSV stays the
machine-readable artifact and the only byte-deterministic one.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .experiments import Estimate, NLawResult  # noqa: E402

__all__ = [
    "coexistence_figure",
    "conditional_figure",
    "n_law_figure",
    "overtake_figure",
]


def _errorbar(ax, xs, estimates: list[Estimate], label: str) -> None:
    ys = [e.point for e in estimates]
    err = [e.half_width_95 for e in estimates]
    ax.errorbar(xs, ys, yerr=err, fmt="o-", capsize=3, label=label)


def coexistence_figure(path, estimates: list[Estimate], target: float) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    _errorbar(ax, [e.horizon_or_nmax for e in estimates], estimates, "alive at level n")
    ax.axhline(target, color="crimson", ls="--", label=f"limit {target:.4f}")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("horizon n")
    ax.set_ylabel("survival estimate")
    ax.set_title("Center-cluster survival vs horizon")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def conditional_figure(path, ms: list[int], estimates: list[Estimate]) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    _errorbar(ax, ms, estimates, "conditioned estimate")
    ax.plot(ms, [1.0 - 2.0 / (m + 3.0) for m in ms], "x--", color="crimson", label="1 - 2/(m+3)")
    ax.set_xlabel("m (head start m + 1)")
    ax.set_ylabel("survival estimate")
    ax.set_title("Conditional survival")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def n_law_figure(path, result: NLawResult, max_n: int = 8) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ns = list(range(0, max_n + 1))
    ax.bar(ns, [result.mass(n) for n in ns], width=0.7, label="empirical mass")
    ax.plot(
        ns,
        [0.5 if n == 0 else 2.0 ** -(n + 1) for n in ns],
        "x--",
        color="crimson",
        label="geometric target",
    )
    ax.set_xlabel("head start value")
    ax.set_ylabel("probability")
    ax.set_title("Law of the head start")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def overtake_figure(path, m: int, estimates: list[Estimate]) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    _errorbar(ax, [e.horizon_or_nmax for e in estimates], estimates, "overtaken by horizon")
    ax.axhline(2.0 / (m + 3.0), color="crimson", ls="--", label=f"limit 2/(m+3) = {2.0 / (m + 3.0):.4f}")
    ax.set_xlabel("horizon")
    ax.set_ylabel("overtake estimate")
    ax.set_title(f"Label 0 passing labels 1..{m + 1}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
