"""Two-alternative forced-choice decision network.

Two input channels drive two equally sized synapses. Each channel emits a
random pulse stream with a fixed pulse count; the channel with strictly more
pulses is the ground-truth answer. At the end of the trial window both
synaptic currents are read and an ideal sign comparator picks the larger one.
An exact tie is broken uniformly at random and flagged, which keeps the
no-evidence baseline at chance level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .device import DeviceParams
from .stream import StreamSpec, generate_random
from .synapse import Synapse

__all__ = ["TwoAfcConfig", "TrialResult", "decide", "run_trial"]


@dataclass(frozen=True)
class TwoAfcConfig:
    """One trial's configuration: two stream specs over a common window."""

    n_devices: int
    params: DeviceParams
    v_pulse: float
    spec_a: StreamSpec
    spec_b: StreamSpec

    def __post_init__(self):
        if self.n_devices < 1:
            raise ValueError(f"n_devices must be >= 1, got {self.n_devices}")
        if self.spec_a.duration_s != self.spec_b.duration_s:
            raise ValueError(
                "both streams must share one trial window: "
                f"{self.spec_a.duration_s} != {self.spec_b.duration_s}"
            )

    @property
    def duration_s(self) -> float:
        return self.spec_a.duration_s


@dataclass(frozen=True)
class TrialResult:
    """Outcome of one trial.

    ``correct`` is defined against the stream with strictly more pulses; when
    the pulse counts are equal either choice counts as correct (the task has
    no ground truth at ratio 1).
    """

    decision: str  # "A" or "B"
    correct: bool
    i1_uA: float
    i2_uA: float
    count1: int
    count2: int
    tie: bool


def decide(i1: float, i2: float, rng: np.random.Generator) -> tuple[str, bool]:
    """Sign comparator on the current difference; ties broken uniformly."""
    if i1 > i2:
        return "A", False
    if i2 > i1:
        return "B", False
    return ("A" if rng.random() < 0.5 else "B"), True


def run_trial(cfg: TwoAfcConfig, rng: np.random.Generator) -> TrialResult:
    """Generate both streams, drive both synapses, and decide at window end.

    The merged event timeline is processed chronologically with each pulse
    routed to its own synapse; at equal timestamps channel A's event is
    applied first (a fixed convention for reproducibility). Both synapses are
    then read at exactly ``t = duration_s``.
    """
    stream_a = generate_random(cfg.spec_a, rng)
    stream_b = generate_random(cfg.spec_b, rng)
    syn_a = Synapse(cfg.n_devices, cfg.params)
    syn_b = Synapse(cfg.n_devices, cfg.params)

    ta, tb = stream_a.times, stream_b.times
    ia = ib = 0
    while ia < ta.size or ib < tb.size:
        if ib >= tb.size or (ia < ta.size and ta[ia] <= tb[ib]):
            syn_a.stimulate(ta[ia], cfg.v_pulse, rng)
            ia += 1
        else:
            syn_b.stimulate(tb[ib], cfg.v_pulse, rng)
            ib += 1

    count1, i1 = syn_a.read(cfg.duration_s)
    count2, i2 = syn_b.read(cfg.duration_s)
    decision, tie = decide(i1, i2, rng)

    n_a, n_b = cfg.spec_a.n_pulses, cfg.spec_b.n_pulses
    if n_a == n_b:
        correct = True
    else:
        correct = (decision == "A") == (n_a > n_b)
    return TrialResult(
        decision=decision,
        correct=correct,
        i1_uA=i1,
        i2_uA=i2,
        count1=count1,
        count2=count2,
        tie=tie,
    )
