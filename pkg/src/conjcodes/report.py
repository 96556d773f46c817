"""Delimited result files, and the figures rendered next to them.

CSV is the contract; every row carries the config hash so a file can be
traced to the exact run that produced it.  Figures are a convenience layer
over the same data and can be switched off wholesale.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .concat import ConcatenatedPair
from .errors import ConfigError
from .infotheory import ChannelModel, entropy, random_coding_exponent
from .simulate import ErrorEstimate, exponent_target

RESULT_COLUMNS = ("N_o", "rate", "j", "W_spec", "trials", "failures",
                  "estimate", "wilson_lo", "wilson_hi", "union_bound",
                  "exponent_target", "config_hash")

EXPONENT_COLUMNS = ("r", "E_r")


def channel_spec(channel: ChannelModel) -> str:
    """Compact display form of a channel, slash-separated probabilities."""
    return "/".join(f"{p:g}" for p in channel.probs)


@dataclass(frozen=True)
class ResultRow:
    """One simulated (system, side, channel) with its comparison values."""
    length: int
    rate: float
    side: int
    w_spec: str
    trials: int
    failures: int
    estimate: float
    wilson_lo: float
    wilson_hi: float
    union_bound: float | None
    exponent_target: float
    config_hash: str


def result_row(system: ConcatenatedPair, side: int, channel: ChannelModel,
               est: ErrorEstimate, config_hash: str) -> ResultRow:
    im = system.inners[0]
    inner_rate = (im.k1 if side == 1 else im.k2) / im.n
    outer = system.outer.code1 if side == 1 else system.outer.code2
    outer_rate = outer.linear.k / outer.linear.n
    return ResultRow(
        length=system.length,
        rate=float(system.overall_rate),
        side=side,
        w_spec=channel_spec(channel),
        trials=est.trials,
        failures=est.failures,
        estimate=est.estimate,
        wilson_lo=est.wilson_low,
        wilson_hi=est.wilson_high,
        union_bound=est.bound,
        exponent_target=exponent_target(system.code1.field.order, inner_rate,
                                        outer_rate, channel),
        config_hash=config_hash)


def write_results(path, rows) -> None:
    """Result rows as CSV under the fixed column set."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULT_COLUMNS)
        for r in rows:
            writer.writerow([
                r.length, repr(r.rate), r.side, r.w_spec, r.trials,
                r.failures, repr(r.estimate), repr(r.wilson_lo),
                repr(r.wilson_hi),
                "" if r.union_bound is None else repr(r.union_bound),
                repr(r.exponent_target), r.config_hash])


def exponent_sweep(channel: ChannelModel, rates, bits: bool = False):
    """(rate, exponent) pairs, optionally rescaled from base-q to bits."""
    scale = math.log2(channel.q) if bits else 1.0
    return tuple((float(r), scale * random_coding_exponent(channel, float(r)))
                 for r in rates)


def write_exponent_sweep(path, channel: ChannelModel, rates,
                         bits: bool = False, config_hash=None) -> None:
    """Exponent sweep as a two-column CSV, tagged with the config hash."""
    with open(path, "w", newline="") as fh:
        if config_hash is not None:
            fh.write(f"# config {config_hash}\n")
        writer = csv.writer(fh)
        writer.writerow(EXPONENT_COLUMNS)
        for r, e in exponent_sweep(channel, rates, bits):
            writer.writerow([repr(r), repr(e)])


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------

def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def exponent_figure(path, channels, rates, bits: bool = False) -> None:
    """Exponent curves with their capacity thresholds marked.

    `channels` maps a label to a ChannelModel; one curve per entry."""
    if not channels:
        raise ConfigError("no channels to draw")
    plt = _pyplot()
    unit = "bits" if bits else "base-q units"
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, ch in channels.items():
        sweep = exponent_sweep(ch, rates, bits)
        xs = [r for r, _ in sweep]
        ys = [e for _, e in sweep]
        line, = ax.plot(xs, ys, label=f"W = {channel_spec(ch)} ({label})")
        threshold = 1.0 - entropy(ch)
        ax.axvline(threshold, color=line.get_color(), linestyle=":",
                   linewidth=1.0)
    ax.set_xlabel("rate r")
    ax.set_ylabel(f"random-coding exponent ({unit})")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def results_figure(path, rows) -> None:
    """Estimates with score intervals next to their union bounds.

    Zero-failure estimates are drawn at the interval's upper edge with an
    open marker, since the point estimate itself carries no resolution."""
    rows = list(rows)
    if not rows:
        raise ConfigError("no result rows to draw")
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for r in rows:
        x = r.length + (0.4 if r.side == 2 else -0.4)
        color = "tab:blue" if r.side == 1 else "tab:orange"
        if r.failures:
            ax.errorbar([x], [r.estimate],
                        yerr=[[r.estimate - r.wilson_lo],
                              [r.wilson_hi - r.estimate]],
                        fmt="o", color=color, capsize=3)
        else:
            ax.plot([x], [r.wilson_hi], marker="v", fillstyle="none",
                    color=color)
        if r.union_bound is not None and r.union_bound <= 1:
            ax.plot([x], [r.union_bound], marker="_", markersize=14,
                    color=color)
    handles = [plt.Line2D([], [], marker="o", linestyle="", color="tab:blue",
                          label="side 1"),
               plt.Line2D([], [], marker="o", linestyle="", color="tab:orange",
                          label="side 2"),
               plt.Line2D([], [], marker="_", linestyle="", color="gray",
                          label="union bound")]
    ax.legend(handles=handles, fontsize=8)
    ax.set_xlabel("total length")
    ax.set_ylabel("decoding error probability")
    ax.set_ylim(bottom=0)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
