"""Telemetry replay, windowed features, and initiating-event identification.

Telemetry arrives as CSV with a TIME column (10 ms ticks, strictly
increasing) followed by one column per plant parameter. Features are
computed per parameter over a trailing window: the window mean and the
least-squares slope per tick, both normalized against configured nominal
statistics. The default detector is nearest-centroid over event
signatures; it sits behind a plain callable contract (features -> optional
label) so a learned classifier can replace it.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    InsufficientFramesError,
    MissingColumnError,
    NonMonotonicTimeError,
    UnparseableNumberError,
)

TIME_COLUMN = "TIME"
DEFAULT_WINDOW_LEN = 50


@dataclass(frozen=True)
class TelemetryFrame:
    time: int
    values: dict[str, float]


@dataclass(frozen=True)
class EventSignature:
    event_id: str
    name: str
    centroid: tuple[float, ...]
    threshold: float


@dataclass(frozen=True)
class EventLabel:
    event_id: str
    name: str
    distance: float
    detected_at: int


@dataclass(frozen=True)
class NominalStats:
    """Per-parameter calibration (mean, std) used to normalize features."""

    means: dict[str, float]
    stds: dict[str, float]

    def __post_init__(self) -> None:
        for name, std in self.stds.items():
            if std <= 0:
                raise ValueError(f"nominal std for {name!r} must be > 0")

    @classmethod
    def from_dict(cls, data: dict) -> "NominalStats":
        means = {name: float(entry["mean"]) for name, entry in data.items()}
        stds = {name: float(entry["std"]) for name, entry in data.items()}
        return cls(means=means, stds=stds)


def ingest(stream: io.TextIOBase | str) -> list[TelemetryFrame]:
    """Read a telemetry CSV into frames, validating time monotonicity."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise MissingColumnError("telemetry stream has no header row") from None
    header = [h.strip() for h in header]
    if not header or header[0] != TIME_COLUMN:
        raise MissingColumnError(f"first column must be {TIME_COLUMN!r}, got {header[:1]}")
    params = header[1:]
    if not params:
        raise MissingColumnError("telemetry header names no parameters")
    frames: list[TelemetryFrame] = []
    last_time: int | None = None
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise MissingColumnError(
                f"line {lineno}: expected {len(header)} columns, got {len(row)}"
            )
        try:
            time = int(row[0])
            values = {name: float(cell) for name, cell in zip(params, row[1:])}
        except ValueError as exc:
            raise UnparseableNumberError(f"line {lineno}: {exc}") from None
        if last_time is not None and time <= last_time:
            raise NonMonotonicTimeError(
                f"line {lineno}: TIME {time} not after previous {last_time}"
            )
        if any(not math.isfinite(v) for v in values.values()):
            raise UnparseableNumberError(f"line {lineno}: non-finite value")
        last_time = time
        frames.append(TelemetryFrame(time=time, values=values))
    return frames


def load_telemetry(path) -> list[TelemetryFrame]:
    with open(path, newline="", encoding="utf-8") as fh:
        return ingest(fh)


def window_features(
    frames: list[TelemetryFrame],
    window_len: int,
    stats: NominalStats,
) -> np.ndarray:
    """Feature vector over the trailing window of frames.

    Per parameter (in first-frame order): normalized window mean and
    least-squares slope per tick, scaled by the nominal std. Shifting all
    tick indices by a constant leaves the features unchanged.
    """
    if window_len < 2:
        raise InsufficientFramesError(f"window_len must be >= 2, got {window_len}")
    if len(frames) < window_len:
        raise InsufficientFramesError(
            f"need {window_len} frames, have {len(frames)}"
        )
    window = frames[-window_len:]
    params = list(window[0].values)
    missing = [p for p in params if p not in stats.means]
    if missing:
        raise MissingColumnError(f"no nominal stats for parameters: {missing}")
    times = np.array([f.time for f in window], dtype=float)
    times -= times.mean()  # centering makes the slope shift-invariant
    denom = float(np.dot(times, times))
    features: list[float] = []
    for param in params:
        series = np.array([f.values[param] for f in window], dtype=float)
        mean = float(series.mean())
        slope = float(np.dot(times, series - series.mean()) / denom)
        std = stats.stds[param]
        features.append((mean - stats.means[param]) / std)
        features.append(slope / std)
    return np.asarray(features)


def detect(
    features: np.ndarray, signatures: list[EventSignature], detected_at: int = 0
) -> EventLabel | None:
    """Nearest signature within its own distance threshold, else None.

    Equidistant candidates resolve to the smallest event_id so detection
    is reproducible regardless of signature file ordering.
    """
    if not signatures:
        raise ValueError("signatures must be non-empty")
    best: tuple[float, str, EventSignature] | None = None
    for sig in signatures:
        centroid = np.asarray(sig.centroid, dtype=float)
        if centroid.shape != features.shape:
            raise DimensionMismatchError(
                f"signature {sig.event_id!r} dimension {centroid.shape[0]} "
                f"!= feature dimension {features.shape[0]}"
            )
        distance = float(np.linalg.norm(features - centroid))
        key = (distance, sig.event_id, sig)
        if best is None or key[:2] < best[:2]:
            best = key
    distance, _, sig = best
    if distance > sig.threshold:
        return None
    return EventLabel(
        event_id=sig.event_id, name=sig.name, distance=distance, detected_at=detected_at
    )


def load_signatures(data: dict) -> list[EventSignature]:
    return [
        EventSignature(
            event_id=raw["event_id"],
            name=raw["name"],
            centroid=tuple(float(v) for v in raw["centroid"]),
            threshold=float(raw["threshold"]),
        )
        for raw in data["signatures"]
    ]


class SlidingDetector:
    """Feeds frames one at a time and fires on the first signature match."""

    def __init__(
        self,
        signatures: list[EventSignature],
        stats: NominalStats,
        window_len: int = DEFAULT_WINDOW_LEN,
    ) -> None:
        self.signatures = signatures
        self.stats = stats
        self.window_len = window_len
        self._buffer: list[TelemetryFrame] = []

    def push(self, frame: TelemetryFrame) -> EventLabel | None:
        self._buffer.append(frame)
        if len(self._buffer) < self.window_len:
            return None
        if len(self._buffer) > self.window_len:
            self._buffer.pop(0)
        features = window_features(self._buffer, self.window_len, self.stats)
        return detect(features, self.signatures, detected_at=frame.time)


def scan_stream(
    frames: list[TelemetryFrame],
    signatures: list[EventSignature],
    stats: NominalStats,
    window_len: int = DEFAULT_WINDOW_LEN,
) -> EventLabel | None:
    """First detection over a full replayed stream, or None."""
    detector = SlidingDetector(signatures, stats, window_len)
    for frame in frames:
        label = detector.push(frame)
        if label is not None:
            return label
    return None
