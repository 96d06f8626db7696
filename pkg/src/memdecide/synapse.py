"""Multi-device parallel synapse.

N cells share their electrodes, so every pulse reaches all of them at once
and each OFF cell switches independently with the pulse's switching
probability. The synaptic weight is the number of cells currently ON; the
summed current is ``count_on * i_on + (N - count_on) * i_off``. Between
pulses the weight only decays, as individual filaments dissolve.

Internally the cell states are a single vector of filament-expiry times with
``-inf`` meaning OFF, which keeps the per-pulse cost at one vectorized update
and makes Monte Carlo sweeps over thousands of trials practical. The scalar
per-cell semantics live in :mod:`memdecide.device`; the vector update applies
the same rules to all cells of the synapse.

A ``Synapse`` is a self-contained mutable value. It is not safe for
concurrent mutation, but distinct instances may be driven in parallel.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .device import DeviceParams, DeviceState, switching_probability
from .errors import TimeOrderError
from .stream import PulseStream

__all__ = ["Synapse", "Trace"]


class Trace(NamedTuple):
    """Sampled time series of a synapse: times, ON counts, currents (µA)."""

    times: np.ndarray
    count_on: np.ndarray
    current_uA: np.ndarray


class Synapse:
    """N identically parameterized cells driven and read as one unit."""

    def __init__(self, n: int, params: DeviceParams):
        if n < 1:
            raise ValueError(f"a synapse needs at least one device, got n={n}")
        self.params = params
        self._expiry = np.full(n, -np.inf)
        self.last_event_time = 0.0

    @property
    def n(self) -> int:
        return int(self._expiry.size)

    @property
    def states(self) -> list[DeviceState]:
        """Per-cell states, materialized from the expiry vector."""
        return [
            DeviceState(expiry=float(e)) if np.isfinite(e) else DeviceState()
            for e in self._expiry
        ]

    def count_on(self) -> int:
        """Cells ON as of the last processed event."""
        return int(np.count_nonzero(self._expiry > self.last_event_time))

    def _check_time(self, t: float) -> None:
        if t < self.last_event_time:
            raise TimeOrderError(
                f"event at t={t} precedes last event time {self.last_event_time}"
            )

    def stimulate(self, t: float, v_pulse: float, rng: np.random.Generator) -> "Synapse":
        """Deliver one pulse at time ``t`` to all cells.

        Cells are first relaxed to ``t`` (expiry at or before ``t`` means OFF),
        then every OFF cell switches independently with the pulse's switching
        probability and every ON cell has its expiry refreshed.
        """
        self._check_time(t)
        p_on = switching_probability(self.params.switching, v_pulse)
        on = self._expiry > t
        switched = ~on & (rng.random(self.n) < p_on)
        lit = on | switched
        k = int(np.count_nonzero(lit))
        if k:
            self._expiry[lit] = t + self.params.retention.sample(rng, k)
        self._expiry[~lit] = -np.inf
        self.last_event_time = t
        return self

    def read(self, t: float) -> tuple[int, float]:
        """Relax to ``t`` and return ``(count_on, current_uA)``."""
        self._check_time(t)
        self._expiry[self._expiry <= t] = -np.inf
        self.last_event_time = t
        count = int(np.count_nonzero(self._expiry > t))
        current = count * self.params.i_on_uA + (self.n - count) * self.params.i_off_uA
        return count, current

    def trace(
        self,
        stream: PulseStream,
        v_pulse: float,
        sample_times,
        rng: np.random.Generator,
    ) -> Trace:
        """Drive the synapse with ``stream`` and sample it at ``sample_times``.

        Pulses and samples are processed in merged chronological order, with a
        pulse applied before a sample at equal times (a read at the moment of
        a spike sees its effect). Returns one record per sample time.
        """
        samples = np.asarray(sample_times, dtype=float)
        if samples.size and np.any(np.diff(samples) < 0.0):
            raise ValueError("sample_times must be sorted ascending")
        pulses = stream.times
        counts = np.empty(samples.size, dtype=np.int64)
        currents = np.empty(samples.size, dtype=float)
        pi = 0
        for si, t_sample in enumerate(samples):
            while pi < pulses.size and pulses[pi] <= t_sample:
                self.stimulate(pulses[pi], v_pulse, rng)
                pi += 1
            counts[si], currents[si] = self.read(t_sample)
        while pi < pulses.size:
            self.stimulate(pulses[pi], v_pulse, rng)
            pi += 1
        return Trace(times=samples, count_on=counts, current_uA=currents)
