"""Per-sequence record containers: ground truth and prediction traces."""

from __future__ import annotations

from dataclasses import dataclass, field

from .api import TrackerOutput
from .geometry import BBox


@dataclass(frozen=True)
class SequenceGroundTruth:
    """Per-frame annotation: a box when the target is visible, None otherwise.

    frame_size is carried when known (simulated sequences); annotation files
    parsed from disk leave it as None.
    """

    frames: tuple[BBox | None, ...]
    sequence_id: str = ""
    frame_size: tuple[float, float] | None = None

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def present_count(self) -> int:
        return sum(1 for f in self.frames if f is not None)


@dataclass(frozen=True)
class PredictionTrace:
    """Per-frame tracker (or fused) outputs for a whole sequence.

    Entry 0 belongs to the initialization frame and is excluded from scoring;
    every later frame must carry a prediction.
    """

    entries: tuple[TrackerOutput, ...]
    sequence_id: str = ""

    def __len__(self) -> int:
        return len(self.entries)

    def translated(self, dx: float, dy: float) -> "PredictionTrace":
        return PredictionTrace(
            tuple(TrackerOutput(e.box.translated(dx, dy), e.confidence) for e in self.entries),
            self.sequence_id,
        )
