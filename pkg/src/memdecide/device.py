"""Stochastic compact model of a single volatile 1T1R resistive-switching cell.

The cell is binary. OFF means the conductive filament is absent and the cell
carries only leakage; ON means the filament bridges the oxide and the current
is clamped at the compliance level set by the series transistor. Two random
mechanisms drive the dynamics:

* **Switching.** A voltage pulse turns an OFF cell ON with a probability that
  rises with the pulse amplitude. The probability is the CDF of the cell's
  set-voltage distribution, modeled as a normal CDF with median ``v_median``
  and spread ``v_spread``. The switching curve is deliberately independent of
  the compliance current: filament formation has no memory of the current
  limit that will apply once the cell conducts.

* **Relaxation.** An ON cell spontaneously returns to OFF after a random
  retention time, lognormal with a given median and log-domain spread. The
  retention median is the knob that the compliance current controls, from
  milliseconds up to seconds. The only hidden state of an ON cell is the
  absolute time at which its filament dissolves.

A pulse delivered to a cell that is already ON rebuilds the filament: the
expiry is resampled from the retention distribution (refresh, not stacking).
All operations are pure functions of their inputs plus an explicitly passed
``numpy.random.Generator``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

__all__ = [
    "SwitchingCurve",
    "RetentionDistribution",
    "DeviceParams",
    "DeviceState",
    "OFF",
    "switching_probability",
    "sample_retention",
    "apply_pulse",
    "relax",
    "read_current",
]


@dataclass(frozen=True)
class SwitchingCurve:
    """Normal-CDF switching-probability curve.

    ``v_median`` is the pulse amplitude at which switching probability is 0.5;
    ``v_spread`` (> 0) is the standard deviation of the underlying set-voltage
    distribution. Any object exposing the same ``probability``/``quantile``
    methods can stand in for this class, e.g. an empirical curve produced by
    calibration.
    """

    v_median: float
    v_spread: float

    def __post_init__(self):
        if not (self.v_spread > 0.0):
            raise ValueError(f"v_spread must be > 0, got {self.v_spread}")

    def probability(self, v_pulse):
        """P(switch ON) for a pulse of amplitude ``v_pulse`` (vectorizes)."""
        return ndtr((np.asarray(v_pulse, dtype=float) - self.v_median) / self.v_spread)

    def quantile(self, p: float) -> float:
        """Pulse amplitude at which the switching probability equals ``p``."""
        if not 0.0 < p < 1.0:
            raise ValueError(f"quantile requires 0 < p < 1, got {p}")
        return self.v_median + self.v_spread * float(ndtri(p))


@dataclass(frozen=True)
class RetentionDistribution:
    """Lognormal retention-time law, parameterized by median and log-spread.

    ``sigma_log`` is the standard deviation of the natural log of the retention
    time; 0 degenerates to a deterministic retention of exactly ``median_s``.
    Samples are strictly positive.
    """

    median_s: float
    sigma_log: float = 0.0

    def __post_init__(self):
        if not (self.median_s > 0.0):
            raise ValueError(f"median_s must be > 0, got {self.median_s}")
        if self.sigma_log < 0.0:
            raise ValueError(f"sigma_log must be >= 0, got {self.sigma_log}")

    def sample(self, rng: np.random.Generator, size=None):
        """Draw retention time(s) in seconds."""
        z = rng.standard_normal(size)
        return self.median_s * np.exp(self.sigma_log * z)


@dataclass(frozen=True)
class DeviceParams:
    """Full parameter set of one cell.

    ``i_on_uA`` defaults to the compliance current ``i_cc_uA`` (the ON current
    clamps at compliance); ``i_off_uA`` defaults to 0 because the OFF-state
    resistance is several orders of magnitude above ON and is negligible at
    microampere scale. The switching curve is shared freely across parameter
    sets with different compliance currents.
    """

    i_cc_uA: float
    switching: SwitchingCurve
    retention: RetentionDistribution
    i_on_uA: float | None = None
    i_off_uA: float = 0.0

    def __post_init__(self):
        if not (self.i_cc_uA > 0.0):
            raise ValueError(f"i_cc_uA must be > 0, got {self.i_cc_uA}")
        if self.i_on_uA is None:
            object.__setattr__(self, "i_on_uA", float(self.i_cc_uA))
        if self.i_off_uA < 0.0:
            raise ValueError(f"i_off_uA must be >= 0, got {self.i_off_uA}")
        if not (self.i_on_uA > self.i_off_uA):
            raise ValueError(
                f"i_on_uA ({self.i_on_uA}) must exceed i_off_uA ({self.i_off_uA})"
            )


@dataclass(frozen=True)
class DeviceState:
    """State of one cell: OFF, or ON until an absolute expiry time.

    ``expiry`` is ``None`` for an OFF cell, otherwise the simulation time in
    seconds at which the filament dissolves. States change only through
    :func:`apply_pulse` and :func:`relax`.
    """

    expiry: float | None = None

    @property
    def is_on(self) -> bool:
        return self.expiry is not None


#: Canonical OFF state (shared; DeviceState is immutable).
OFF = DeviceState()


def switching_probability(curve, v_pulse: float) -> float:
    """Probability that a pulse of amplitude ``v_pulse`` switches an OFF cell.

    Pure and monotone non-decreasing in ``v_pulse``, with limits 0 and 1 at
    minus/plus infinity. ``curve`` may be any object with a ``probability``
    method.
    """
    return float(curve.probability(v_pulse))


def sample_retention(dist: RetentionDistribution, rng: np.random.Generator, size=None):
    """Draw retention time(s) from ``dist``; strictly positive."""
    return dist.sample(rng, size)


def apply_pulse(
    state: DeviceState,
    params: DeviceParams,
    v_pulse: float,
    t: float,
    rng: np.random.Generator,
) -> DeviceState:
    """Outcome of a voltage pulse at time ``t``.

    The caller must have relaxed ``state`` to time ``t`` already (pulses and
    reads are processed in chronological order). An OFF cell switches ON with
    ``switching_probability(params.switching, v_pulse)``; an ON cell stays ON
    with its expiry refreshed. Either way a fresh retention time is drawn for
    the new ON state.
    """
    if state.is_on:
        return DeviceState(expiry=t + float(sample_retention(params.retention, rng)))
    p_on = switching_probability(params.switching, v_pulse)
    if rng.random() < p_on:
        return DeviceState(expiry=t + float(sample_retention(params.retention, rng)))
    return OFF


def relax(state: DeviceState, t: float) -> DeviceState:
    """Spontaneous relaxation up to time ``t``.

    An ON cell whose expiry is at or before ``t`` becomes OFF (the boundary is
    inclusive: at ``t == expiry`` the filament has dissolved). Idempotent, and
    OFF is absorbing in the absence of pulses.
    """
    if state.is_on and t >= state.expiry:
        return OFF
    return state


def read_current(state: DeviceState, params: DeviceParams) -> float:
    """Readout current in microamperes; non-destructive.

    The caller must have relaxed ``state`` to the read time.
    """
    return params.i_on_uA if state.is_on else params.i_off_uA
