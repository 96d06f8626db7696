"""Stimulus generators: random pulse streams and periodic trains.

A pulse stream is a sorted list of event times inside a trial window. Pulses
are instantaneous events carrying only an amplitude (applied later, at the
synapse); pulse width and shape are abstracted away.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "StreamSpec",
    "PulseStream",
    "generate_random",
    "generate_periodic",
    "write_stream_csv",
    "read_stream_csv",
]


@dataclass(frozen=True)
class StreamSpec:
    """Pulse count and trial window for one stimulus stream."""

    n_pulses: int
    duration_s: float

    def __post_init__(self):
        if self.n_pulses < 0:
            raise ValueError(f"n_pulses must be >= 0, got {self.n_pulses}")
        if not (self.duration_s > 0.0):
            raise ValueError(f"duration_s must be > 0, got {self.duration_s}")


@dataclass(frozen=True)
class PulseStream:
    """Strictly sorted pulse times, each in [0, duration_s)."""

    times: np.ndarray
    duration_s: float

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        object.__setattr__(self, "times", times)
        if times.size:
            if np.any(np.diff(times) <= 0.0):
                raise ValueError("pulse times must be strictly increasing")
            if times[0] < 0.0 or times[-1] >= self.duration_s:
                raise ValueError("pulse times must lie in [0, duration_s)")

    @property
    def n_pulses(self) -> int:
        return int(self.times.size)


def _break_ties(times: np.ndarray) -> np.ndarray:
    # Exact collisions of uniform draws are measure-zero but representable in
    # binary64; nudge duplicates up by one ulp so the stream stays strict.
    if times.size > 1 and np.any(np.diff(times) <= 0.0):
        for i in range(1, times.size):
            if times[i] <= times[i - 1]:
                times[i] = np.nextafter(times[i - 1], np.inf)
    return times


def generate_random(spec: StreamSpec, rng: np.random.Generator) -> PulseStream:
    """``spec.n_pulses`` times drawn i.i.d. uniform on [0, duration), sorted.

    The pulse count is deterministic; only the placement is random.
    """
    times = np.sort(rng.random(spec.n_pulses) * spec.duration_s)
    return PulseStream(times=_break_ties(times), duration_s=spec.duration_s)


def generate_periodic(n_pulses: int, rate_hz: float, start_s: float = 0.0) -> PulseStream:
    """Regular train: ``start_s + k / rate_hz`` for k = 0 .. n_pulses-1.

    The window extends one period past the last pulse so the final event lies
    strictly inside it.
    """
    if not (rate_hz > 0.0):
        raise ValueError(f"rate_hz must be > 0, got {rate_hz}")
    if n_pulses < 0:
        raise ValueError(f"n_pulses must be >= 0, got {n_pulses}")
    times = start_s + np.arange(n_pulses, dtype=float) / rate_hz
    duration = start_s + n_pulses / rate_hz
    if duration <= 0.0:
        duration = 1.0 / rate_hz
    return PulseStream(times=times, duration_s=duration)


def write_stream_csv(stream: PulseStream, path) -> None:
    """Serialize a stream for replay: one ``t_s`` column plus the window."""
    lines = [f"# duration_s={stream.duration_s!r}", "t_s"]
    lines.extend(repr(float(t)) for t in stream.times)
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_stream_csv(path, duration_s: float | None = None) -> PulseStream:
    """Read a replay file written by :func:`write_stream_csv`.

    The window comes from the ``# duration_s=`` comment unless overridden.
    """
    times = []
    file_duration = None
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line.lstrip("# ").partition("=")
                if key.strip() == "duration_s":
                    file_duration = float(value)
                continue
            if line == "t_s":
                continue
            times.append(float(line))
    duration = duration_s if duration_s is not None else file_duration
    if duration is None:
        raise ValueError(f"{path}: no duration_s comment and no override given")
    return PulseStream(times=np.asarray(times, dtype=float), duration_s=duration)
