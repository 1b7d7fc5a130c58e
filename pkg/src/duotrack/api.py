"""Contracts for trackers and verifiers, plus the replay adapter for recorded runs.

The fusion controller only talks to these interfaces, so scripted trackers,
replayed dumps of real trackers, and user-supplied implementations are all
interchangeable. Distinct instances share no mutable state and may be stepped
concurrently; a single instance is stepped by one caller at a time.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path

from .geometry import BBox


@dataclass(frozen=True, slots=True)
class FrameHandle:
    """One observation step: a frame index plus an opaque payload.

    The payload is interpreted only by tracker/verifier implementations. The
    simulator passes its hidden per-frame world state; replay adapters ignore
    it entirely.
    """

    index: int
    payload: object | None = None

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"frame index must be >= 0, got {self.index}")


@dataclass(frozen=True, slots=True)
class TrackerOutput:
    """Per-frame result of one tracker: a box and a presence confidence in [0, 1]."""

    box: BBox
    confidence: float

    def __post_init__(self):
        if not (math.isfinite(self.confidence) and 0.0 <= self.confidence <= 1.0):
            raise ValueError(f"confidence must lie in [0, 1], got {self.confidence}")


@dataclass(frozen=True, slots=True)
class TrackerCapabilities:
    """What optional hooks a tracker honors. Fixed for the instance lifetime."""

    supports_state_override: bool = False
    supports_search_scale: bool = False


class TrackerProtocolError(RuntimeError):
    """init/step called out of contract: bad frame order, missing init, re-init."""


class FormatError(ValueError):
    """A data file is malformed; the message carries the path and line number."""


class Tracker(ABC):
    """Base tracker contract: init on frame 0, then step frames in order.

    Subclasses implement ``_do_init`` / ``_do_step`` and may override the
    optional hooks. Frame-order bookkeeping lives here so every adapter
    enforces the same protocol.
    """

    capabilities = TrackerCapabilities()

    def __init__(self):
        self._initialized = False
        self._next_index = 0
        self.denied_overrides = 0
        self.denied_scale_changes = 0

    def init(self, frame: FrameHandle, box0: BBox) -> None:
        """Initialize on the first frame with the ground-truth box."""
        if self._initialized:
            raise TrackerProtocolError("tracker already initialized; call reset() first")
        if frame.index != 0:
            raise TrackerProtocolError(f"init requires frame index 0, got {frame.index}")
        self._do_init(frame, box0)
        self._initialized = True
        self._next_index = 1

    def step(self, frame: FrameHandle) -> TrackerOutput:
        """Process the next frame and return a box plus confidence."""
        if not self._initialized:
            raise TrackerProtocolError("tracker stepped before init")
        if frame.index != self._next_index:
            raise TrackerProtocolError(
                f"out-of-order frame: expected {self._next_index}, got {frame.index}"
            )
        out = self._do_step(frame)
        self._next_index += 1
        return out

    def reset(self) -> None:
        self._initialized = False
        self._next_index = 0
        self.denied_overrides = 0
        self.denied_scale_changes = 0
        self._do_reset()

    def override_state(self, box: BBox) -> bool:
        """Recenter the region searched on the next step onto ``box``.

        Returns True when the tracker honored the correction. Trackers without
        the capability record a flagged no-op and return False, never raise.
        """
        if not self.capabilities.supports_state_override:
            self.denied_overrides += 1
            return False
        self._do_override(box)
        return True

    def set_search_scale(self, factor: float) -> bool:
        """Set the linear search-area factor used by subsequent steps."""
        if not (math.isfinite(factor) and factor > 0.0):
            raise ValueError(f"search scale must be a positive real, got {factor}")
        if not self.capabilities.supports_search_scale:
            self.denied_scale_changes += 1
            return False
        self._do_set_search_scale(factor)
        return True

    def search_scale_baseline(self) -> float | None:
        """Baseline search-area factor, for trackers that expose one."""
        return None

    @abstractmethod
    def _do_init(self, frame: FrameHandle, box0: BBox) -> None: ...

    @abstractmethod
    def _do_step(self, frame: FrameHandle) -> TrackerOutput: ...

    def _do_reset(self) -> None:
        pass

    def _do_override(self, box: BBox) -> None:
        pass

    def _do_set_search_scale(self, factor: float) -> None:
        pass


class Verifier(ABC):
    """Scores how likely the target appears inside a given box of a frame."""

    @abstractmethod
    def score(self, frame: FrameHandle, box: BBox) -> float:
        """Probability estimate in [0, 1] that the target is inside ``box``."""

    def update(self, frame: FrameHandle, box: BBox) -> None:
        """Online adaptation hook; stateless verifiers ignore it."""


# ---------------------------------------------------------------------------
# Replay adapter
#
# Log format, one file per tracker per sequence, UTF-8, one line per frame:
#   t,x,y,w,h,confidence[,verifier_score]
# comma-separated decimals, t 0-based; lines starting with '#' are skipped.
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ReplayRecord:
    box: BBox
    confidence: float
    verifier_score: float | None = None


def parse_replay_log(path: str | Path) -> list[ReplayRecord]:
    """Parse a recorded tracker run, one record per frame starting at t=0."""
    path = Path(path)
    records: list[ReplayRecord] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) not in (6, 7):
                raise FormatError(f"{path}:{lineno}: expected 6 or 7 fields, got {len(parts)}")
            try:
                t = int(parts[0])
                x, y, w, h, conf = (float(p) for p in parts[1:6])
                vscore = float(parts[6]) if len(parts) == 7 else None
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from exc
            if t != len(records):
                raise FormatError(f"{path}:{lineno}: frame index {t}, expected {len(records)}")
            try:
                records.append(ReplayRecord(BBox(x, y, w, h), conf, vscore))
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from exc
    if not records:
        raise FormatError(f"{path}: no records")
    return records


class ReplayTracker(Tracker):
    """Deterministically replays per-frame outputs recorded from a real tracker.

    Corrections cannot be honored on a recording, so override_state is a
    recorded no-op (see Tracker.override_state).
    """

    capabilities = TrackerCapabilities(supports_state_override=False, supports_search_scale=False)

    def __init__(self, records: list[ReplayRecord] | str | Path):
        super().__init__()
        if isinstance(records, (str, Path)):
            records = parse_replay_log(records)
        self._records = list(records)

    def _do_init(self, frame: FrameHandle, box0: BBox) -> None:
        pass

    def _do_step(self, frame: FrameHandle) -> TrackerOutput:
        if frame.index >= len(self._records):
            raise TrackerProtocolError(f"replay log has no record for frame {frame.index}")
        rec = self._records[frame.index]
        return TrackerOutput(rec.box, rec.confidence)

    def record_for(self, index: int) -> ReplayRecord:
        return self._records[index]

    def __len__(self) -> int:
        return len(self._records)


class ReplayVerifier(Verifier):
    """Serves precomputed verifier scores carried by replay logs.

    A score request is matched against the logged boxes for that frame. When
    a log line carries no verifier column the tracker's own confidence is
    served instead, which leaves the combined estimate equal to the raw
    confidence. Unmatched boxes (e.g. a fused box) fall back to 0.5.
    """

    def __init__(self, logs: list[list[ReplayRecord]]):
        self._logs = [list(log) for log in logs]
        self.unmatched = 0

    def score(self, frame: FrameHandle, box: BBox) -> float:
        for log in self._logs:
            if frame.index >= len(log):
                continue
            rec = log[frame.index]
            if (
                abs(rec.box.x - box.x) < 1e-9
                and abs(rec.box.y - box.y) < 1e-9
                and abs(rec.box.w - box.w) < 1e-9
                and abs(rec.box.h - box.h) < 1e-9
            ):
                return rec.verifier_score if rec.verifier_score is not None else rec.confidence
        self.unmatched += 1
        return 0.5

    def update(self, frame: FrameHandle, box: BBox) -> None:
        pass
