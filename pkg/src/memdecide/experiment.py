"""Monte Carlo harness: accuracy estimation, parameter sweeps, traces, oracles.

Accuracy is the fraction of correct choices over independent seeded trials,
reported with a Wilson 95% confidence interval (well behaved both near chance
and near saturation, the two regimes of interest). Sweep cells and trials get
their random streams from :func:`memdecide.seeding.derive_seed`, so a report
is a pure function of its grid (master seed included), and cells may be
evaluated concurrently without changing a single byte of the output.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .calibration import ParamDeck, default_deck, device_params
from .device import DeviceParams, RetentionDistribution
from .network import TwoAfcConfig, run_trial
from .seeding import derive_seed, spawn_rng
from .stream import PulseStream, StreamSpec
from .synapse import Synapse, Trace

__all__ = [
    "SweepGrid",
    "AccuracyPoint",
    "wilson_interval",
    "estimate_accuracy",
    "sweep",
    "invert_p_on",
    "expected_on_count_no_decay",
    "run_trace_experiment",
]

# Two-sided 95% normal quantile, pinned so reports never depend on library
# rounding differences.
_Z95 = 1.959963984540054


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Always contains the point estimate and stays inside [0, 1].
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    p_hat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p_hat + z2 / (2.0 * trials)) / denom
    half = (z / denom) * math.sqrt(p_hat * (1.0 - p_hat) / trials + z2 / (4.0 * trials * trials))
    # The interval brackets the point estimate in exact arithmetic; the
    # min/max guards only absorb float rounding at the 0 and 1 endpoints.
    return max(0.0, min(center - half, p_hat)), min(1.0, max(center + half, p_hat))


@dataclass(frozen=True)
class SweepGrid:
    """Cartesian sweep axes plus the Monte Carlo budget and master seed."""

    durations_s: Sequence[float]
    ratios: Sequence[tuple[int, int]]
    device_counts: Sequence[int]
    i_cc_values_uA: Sequence[float]
    p_on_values: Sequence[float]
    trials_per_point: int = 1000
    master_seed: int = 0

    def __post_init__(self):
        for name in ("durations_s", "ratios", "device_counts", "i_cc_values_uA", "p_on_values"):
            if not list(getattr(self, name)):
                raise ValueError(f"{name} must not be empty")
        if self.trials_per_point < 1:
            raise ValueError("trials_per_point must be >= 1")


@dataclass(frozen=True)
class AccuracyPoint:
    """One sweep cell: its grid coordinates and the accuracy estimate."""

    duration_s: float
    n_a: int
    n_b: int
    n_devices: int
    i_cc_uA: float
    p_on: float
    accuracy: float
    ci_low: float
    ci_high: float
    n_trials: int
    n_ties: int


def invert_p_on(curve, p_target: float) -> float:
    """Pulse amplitude that realizes a target switching probability.

    Uses the curve's own quantile when available (exact for the normal-CDF
    family), otherwise bisects the probability function; either way the
    returned amplitude reproduces ``p_target`` to within 1e-9.
    """
    if not 0.0 < p_target < 1.0:
        raise ValueError(f"p_target must lie in (0, 1), got {p_target}")
    quantile = getattr(curve, "quantile", None)
    if quantile is not None:
        return float(quantile(p_target))
    lo, hi = -1.0, 1.0
    while curve.probability(lo) > p_target:
        lo *= 2.0
    while curve.probability(hi) < p_target:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        p_mid = float(curve.probability(mid))
        if abs(p_mid - p_target) < 1e-12 or hi - lo < 1e-15 * max(1.0, abs(mid)):
            return mid
        if p_mid < p_target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def expected_on_count_no_decay(n: int, p: float, k: int) -> float:
    """Mean ON count after ``k`` pulses with relaxation disabled.

    Each of the ``n`` cells is ON independently with probability
    ``1 - (1-p)^k``, so the expectation is ``n * (1 - (1-p)^k)``. This is the
    closed-form oracle the synapse simulation is verified against.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    return n * (1.0 - (1.0 - p) ** k)


def estimate_accuracy(
    cfg: TwoAfcConfig,
    trials: int,
    master_seed: int,
    trial_offset: int = 0,
) -> AccuracyPoint:
    """Run independent seeded trials and report accuracy with a Wilson CI.

    Trial ``i`` draws from the stream seeded by
    ``derive_seed(master_seed, "trial", trial_offset + i)``, so batches can be
    split, extended, or parallelized without disturbing each other.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n_correct = 0
    n_ties = 0
    for i in range(trials):
        rng = spawn_rng(master_seed, "trial", trial_offset + i)
        result = run_trial(cfg, rng)
        n_correct += result.correct
        n_ties += result.tie
    accuracy = n_correct / trials
    ci_low, ci_high = wilson_interval(n_correct, trials)
    return AccuracyPoint(
        duration_s=cfg.duration_s,
        n_a=cfg.spec_a.n_pulses,
        n_b=cfg.spec_b.n_pulses,
        n_devices=cfg.n_devices,
        i_cc_uA=cfg.params.i_cc_uA,
        p_on=float(cfg.params.switching.probability(cfg.v_pulse)),
        accuracy=accuracy,
        ci_low=ci_low,
        ci_high=ci_high,
        n_trials=trials,
        n_ties=n_ties,
    )


def _cell_config(
    deck: ParamDeck,
    duration_s: float,
    ratio: tuple[int, int],
    n_devices: int,
    i_cc_uA: float,
    p_on: float,
    retention: RetentionDistribution | None,
    i_off_uA: float,
) -> TwoAfcConfig:
    params = device_params(deck, i_cc_uA, i_off_uA=i_off_uA, retention=retention)
    return TwoAfcConfig(
        n_devices=n_devices,
        params=params,
        v_pulse=invert_p_on(deck.switching, p_on),
        spec_a=StreamSpec(n_pulses=ratio[0], duration_s=duration_s),
        spec_b=StreamSpec(n_pulses=ratio[1], duration_s=duration_s),
    )


def sweep(
    grid: SweepGrid,
    deck: ParamDeck | None = None,
    retention: RetentionDistribution | None = None,
    i_off_uA: float = 0.0,
    max_workers: int | None = None,
) -> list[AccuracyPoint]:
    """Evaluate every cell of the grid's Cartesian product.

    Device parameters at each cell come from the deck (retention interpolated
    at the cell's compliance current) unless a fixed ``retention`` override is
    given. Cell order is the deterministic product order of the axes
    regardless of ``max_workers``; every cell derives its own seed from the
    master seed and its coordinates, so results are reproducible bit for bit.
    """
    if deck is None:
        deck = default_deck()

    cells = list(
        itertools.product(
            grid.durations_s, grid.ratios, grid.device_counts,
            grid.i_cc_values_uA, grid.p_on_values,
        )
    )

    def run_cell(cell):
        duration_s, ratio, n_devices, i_cc_uA, p_on = cell
        n_a, n_b = int(ratio[0]), int(ratio[1])
        cfg = _cell_config(
            deck, float(duration_s), (n_a, n_b), int(n_devices),
            float(i_cc_uA), float(p_on), retention, i_off_uA,
        )
        cell_seed = derive_seed(
            grid.master_seed, float(duration_s), n_a, n_b,
            int(n_devices), float(i_cc_uA), float(p_on),
        )
        return estimate_accuracy(cfg, grid.trials_per_point, cell_seed)

    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(run_cell, cells))
    return [run_cell(cell) for cell in cells]


def run_trace_experiment(
    n: int,
    stream: PulseStream,
    p_on: float,
    params: DeviceParams,
    sample_rate_hz: float,
    repeats: int,
    master_seed: int,
    tail_s: float = 0.0,
) -> Trace:
    """Average ``repeats`` independent synapse traces pointwise.

    Samples run at ``sample_rate_hz`` from 0 through the stream window plus
    ``tail_s`` (the tail shows the relaxation after the last pulse). With
    ``repeats=1`` this is exactly one synapse trace under the derived seed.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    if not (sample_rate_hz > 0.0):
        raise ValueError("sample_rate_hz must be > 0")
    t_end = stream.duration_s + tail_s
    n_samples = int(np.floor(t_end * sample_rate_hz)) + 1
    sample_times = np.arange(n_samples, dtype=float) / sample_rate_hz
    v_pulse = invert_p_on(params.switching, p_on)

    count_sum = np.zeros(n_samples)
    current_sum = np.zeros(n_samples)
    for r in range(repeats):
        rng = spawn_rng(master_seed, "trace", r)
        trace = Synapse(n, params).trace(stream, v_pulse, sample_times, rng)
        count_sum += trace.count_on
        current_sum += trace.current_uA
    return Trace(
        times=sample_times,
        count_on=count_sum / repeats,
        current_uA=current_sum / repeats,
    )
