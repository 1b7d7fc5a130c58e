"""Evaluation-and-correction fusion of two complementary long-term trackers.

Per frame the controller runs both trackers (optionally in parallel), scores
each box with an independent verifier, averages verifier score and tracker
confidence into a per-tracker visibility estimate, binarizes it at 0.5, votes
over a short rolling window, selects one box via a fixed four-case policy, and
feeds the selected box back into the lagging tracker as a correction. The
reference baseline strategies (coordinate averaging, confidence argmax) live
here too so experiments can compare against them on equal footing.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from typing import Sequence

from .api import FrameHandle, Tracker, TrackerOutput, Verifier
from .geometry import BBox, aspect_ratio

COMBINATION_MODES = ("verifier_only", "combined", "windowed")


def parse_kv_text(text: str) -> dict[str, str]:
    """Parse a flat line-oriented ``key = value`` document. '#' starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ValueError(f"line {lineno}: empty key")
        if key in out:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def format_kv(mapping: dict[str, object]) -> str:
    return "".join(f"{k} = {v}\n" for k, v in mapping.items())


def _parse_bool(value: str) -> bool:
    if value == "true":
        return True
    if value == "false":
        return False
    raise ValueError(f"expected 'true' or 'false', got {value!r}")


@dataclass(frozen=True)
class ControllerConfig:
    """Tunables of the fusion controller.

    window_size is the vote window length (per-frame decisions at 1);
    combination_mode selects how far the visibility estimation goes:
    'verifier_only' picks the tracker with the larger verifier score,
    'combined' binarizes the mean of confidence and verifier score frame by
    frame, 'windowed' additionally votes over the last window_size bits.
    """

    window_size: int = 5
    vote_fraction: float = 0.75
    binarize_threshold: float = 0.5
    enable_correction: bool = True
    enable_search_scale_heuristic: bool = False
    enable_aspect_penalty: bool = False
    aspect_band_low: float = 0.5
    aspect_band_high: float = 2.0
    verifier_update_interval: int = 10
    combination_mode: str = "windowed"

    def __post_init__(self):
        if self.window_size < 1:
            raise ValueError(f"window_size must be >= 1, got {self.window_size}")
        if not 0.0 < self.vote_fraction < 1.0:
            raise ValueError(f"vote_fraction must lie in (0, 1), got {self.vote_fraction}")
        if not 0.0 <= self.binarize_threshold <= 1.0:
            raise ValueError(f"binarize_threshold must lie in [0, 1], got {self.binarize_threshold}")
        if not 0.0 < self.aspect_band_low < 1.0 < self.aspect_band_high:
            raise ValueError(
                f"aspect band must satisfy 0 < low < 1 < high, got "
                f"({self.aspect_band_low}, {self.aspect_band_high})"
            )
        if self.verifier_update_interval < 1:
            raise ValueError(
                f"verifier_update_interval must be >= 1, got {self.verifier_update_interval}"
            )
        if self.combination_mode not in COMBINATION_MODES:
            raise ValueError(
                f"combination_mode must be one of {COMBINATION_MODES}, got {self.combination_mode!r}"
            )

    def to_text(self) -> str:
        """Serialize as the flat key = value document used by config files and reports."""
        items: dict[str, object] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool):
                value = "true" if value else "false"
            items[f.name] = value
        return format_kv(items)

    @classmethod
    def from_mapping(cls, mapping: dict[str, str]) -> "ControllerConfig":
        """Build a config from string key/value pairs; unknown keys are rejected."""
        kwargs: dict[str, object] = {}
        by_name = {f.name: f for f in fields(cls)}
        for key, value in mapping.items():
            if key not in by_name:
                raise ValueError(f"unknown controller config key {key!r}")
            typ = by_name[key].type
            if typ == "int":
                kwargs[key] = int(value)
            elif typ == "float":
                kwargs[key] = float(value)
            elif typ == "bool":
                kwargs[key] = _parse_bool(value)
            else:
                kwargs[key] = value
        return cls(**kwargs)

    @classmethod
    def from_text(cls, text: str) -> "ControllerConfig":
        return cls.from_mapping(parse_kv_text(text))


# ---------------------------------------------------------------------------
# Per-frame decision primitives
# ---------------------------------------------------------------------------


def combine_confidence(confidence: float, verifier_score: float) -> float:
    """Mean of the tracker's confidence and the independent verifier score."""
    if not (0.0 <= confidence <= 1.0):
        raise ValueError(f"confidence must lie in [0, 1], got {confidence}")
    if not (0.0 <= verifier_score <= 1.0):
        raise ValueError(f"verifier score must lie in [0, 1], got {verifier_score}")
    return (confidence + verifier_score) / 2.0


def binarize(value: float, threshold: float = 0.5) -> int:
    """1 iff value exceeds the threshold. Strict: a tie counts as absence."""
    return 1 if value > threshold else 0


def window_presence(bits: Sequence[int], fraction: float = 0.75) -> int:
    """Vote over the recent visibility bits: 1 iff sum(bits) > floor(fraction * len).

    During warm-up the available (shorter) history is used with the same
    fraction, so a single-frame history degenerates to the per-frame decision.
    """
    n = len(bits)
    if n == 0:
        raise ValueError("presence vote needs at least one bit of history")
    return 1 if sum(bits) > math.floor(fraction * n) else 0


def select_box(p1: int, p2: int, out1: TrackerOutput, out2: TrackerOutput) -> tuple[BBox, int]:
    """Four-case selection on the per-tracker presence bits.

    Tracker 1 wins every case except (0, 1): it produces the tighter boxes
    when both agree the target is visible, and re-detects better when both
    report it gone.
    """
    if (p1, p2) == (0, 1):
        return out2.box, 2
    return out1.box, 1


def aspect_change_outside_band(
    prev_box: BBox, new_box: BBox, low: float, high: float
) -> bool:
    """True when the frame-to-frame aspect-ratio ratio leaves [low, high]."""
    ratio = aspect_ratio(prev_box) / aspect_ratio(new_box)
    return not (low <= ratio <= high)


# ---------------------------------------------------------------------------
# Fused outputs
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class TrackerDiagnostics:
    """Per-tracker values behind one fused decision."""

    confidence: float  # tracker confidence after any aspect penalty
    verifier_score: float
    combined: float
    frame_bit: int
    presence: int


@dataclass(frozen=True, slots=True)
class FusedOutput:
    """One fused frame: output box, confidence, and the decision trail.

    The fusion controller emits its presence estimate as the confidence, so
    confidence is 0.0 or 1.0 there; baseline strategies emit real-valued
    confidences and threshold them at 0.5 for the presence field.
    """

    box: BBox
    confidence: float
    presence: int
    selected_tracker: int  # 1 or 2; 0 when the box blends both trackers
    diagnostics: tuple[TrackerDiagnostics, TrackerDiagnostics] | None = None


class FusionController:
    """Runs two trackers plus a verifier and fuses them frame by frame.

    The controller owns all fusion state and is stepped by exactly one caller
    at a time. With parallel=True the two tracker steps of a frame execute
    concurrently and are joined before any decision logic; verifier calls stay
    sequential after the join.
    """

    def __init__(
        self,
        tracker1: Tracker,
        tracker2: Tracker,
        verifier: Verifier,
        config: ControllerConfig | None = None,
        parallel: bool = False,
    ):
        self.tracker1 = tracker1
        self.tracker2 = tracker2
        self.verifier = verifier
        self.config = config if config is not None else ControllerConfig()
        self._pool = ThreadPoolExecutor(max_workers=2) if parallel else None
        self._history1: deque[int] = deque(maxlen=self.config.window_size)
        self._history2: deque[int] = deque(maxlen=self.config.window_size)
        self._last_fused_box: BBox | None = None
        self._frames_since_update = 0
        self._next_index: int | None = None
        self.overrides_applied = 0
        self.overrides_denied = 0
        self.scale_changes_denied = 0
        self.verifier_updates = 0

    def init(self, frame: FrameHandle, box0: BBox) -> None:
        if frame.index != 0:
            raise ValueError(f"controller init requires frame index 0, got {frame.index}")
        self.tracker1.init(frame, box0)
        self.tracker2.init(frame, box0)
        self._history1.clear()
        self._history2.clear()
        self._last_fused_box = box0
        self._frames_since_update = 0
        self._next_index = 1

    def step(self, frame: FrameHandle) -> FusedOutput:
        cfg = self.config
        if self._next_index is None:
            raise ValueError("controller stepped before init")
        if frame.index != self._next_index:
            raise ValueError(f"out-of-order frame: expected {self._next_index}, got {frame.index}")

        out1, out2 = self._step_trackers(frame)

        c1 = out1.confidence
        c2 = out2.confidence
        if cfg.enable_aspect_penalty and self._last_fused_box is not None:
            if aspect_change_outside_band(
                self._last_fused_box, out1.box, cfg.aspect_band_low, cfg.aspect_band_high
            ):
                c1 = 0.0

        try:
            v1 = self.verifier.score(frame, out1.box)
            v2 = self.verifier.score(frame, out2.box)
        except Exception as exc:
            raise RuntimeError(f"verifier failed at frame {frame.index}") from exc

        if cfg.combination_mode == "verifier_only":
            comb1, comb2 = v1, v2
        else:
            comb1 = combine_confidence(c1, v1)
            comb2 = combine_confidence(c2, v2)
        bit1 = binarize(comb1, cfg.binarize_threshold)
        bit2 = binarize(comb2, cfg.binarize_threshold)
        self._history1.append(bit1)
        self._history2.append(bit2)

        if cfg.combination_mode == "windowed":
            p1 = window_presence(self._history1, cfg.vote_fraction)
            p2 = window_presence(self._history2, cfg.vote_fraction)
        else:
            p1, p2 = bit1, bit2

        if cfg.combination_mode == "verifier_only":
            selected = 1 if v1 >= v2 else 2
            box = out1.box if selected == 1 else out2.box
        else:
            box, selected = select_box(p1, p2, out1, out2)
        presence = p1 if selected == 1 else p2

        if cfg.enable_correction and presence == 1:
            other = self.tracker2 if selected == 1 else self.tracker1
            if other.override_state(box):
                self.overrides_applied += 1
            else:
                self.overrides_denied += 1

        if cfg.enable_search_scale_heuristic:
            baseline = self.tracker1.search_scale_baseline()
            if self.tracker1.capabilities.supports_search_scale and baseline is not None:
                self.tracker1.set_search_scale(baseline / 2.0 if presence == 1 else baseline)
            else:
                self.scale_changes_denied += 1

        self._frames_since_update += 1
        if presence == 1 and self._frames_since_update >= cfg.verifier_update_interval:
            self.verifier.update(frame, box)
            self.verifier_updates += 1
            self._frames_since_update = 0

        self._last_fused_box = box
        self._next_index += 1
        diagnostics = (
            TrackerDiagnostics(c1, v1, comb1, bit1, p1),
            TrackerDiagnostics(c2, v2, comb2, bit2, p2),
        )
        return FusedOutput(box, float(presence), presence, selected, diagnostics)

    def _step_trackers(self, frame: FrameHandle) -> tuple[TrackerOutput, TrackerOutput]:
        try:
            if self._pool is not None:
                f1 = self._pool.submit(self.tracker1.step, frame)
                f2 = self._pool.submit(self.tracker2.step, frame)
                return f1.result(), f2.result()
            return self.tracker1.step(frame), self.tracker2.step(frame)
        except Exception as exc:
            raise RuntimeError(f"tracker step failed at frame {frame.index}") from exc

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True)


# ---------------------------------------------------------------------------
# Baseline fusion strategies
# ---------------------------------------------------------------------------

_PRESENCE_CONFIDENCE = 0.5  # absence is confidence < 0.5, matching the scoring rule


def baseline_average(out1: TrackerOutput, out2: TrackerOutput) -> FusedOutput:
    """Coordinate-wise mean of the boxes and mean of the confidences."""
    a, b = out1.box, out2.box
    box = BBox((a.x + b.x) / 2.0, (a.y + b.y) / 2.0, (a.w + b.w) / 2.0, (a.h + b.h) / 2.0)
    conf = (out1.confidence + out2.confidence) / 2.0
    return FusedOutput(box, conf, 1 if conf >= _PRESENCE_CONFIDENCE else 0, 0)


def baseline_max_confidence(out1: TrackerOutput, out2: TrackerOutput) -> FusedOutput:
    """Box of the tracker with the larger raw confidence; ties go to tracker 1."""
    if out1.confidence >= out2.confidence:
        out, selected = out1, 1
    else:
        out, selected = out2, 2
    presence = 1 if out.confidence >= _PRESENCE_CONFIDENCE else 0
    return FusedOutput(out.box, out.confidence, presence, selected)


class BaselineFusion:
    """Reference strategies on top of two trackers, with optional correction.

    strategy 'average': both boxes and confidences are averaged; with
    correct=True both trackers are overridden to the averaged box each frame.
    strategy 'max_confidence': the more confident tracker wins; with
    correct=True the loser is overridden to the winner's box each frame.
    """

    STRATEGIES = ("average", "max_confidence")

    def __init__(
        self,
        tracker1: Tracker,
        tracker2: Tracker,
        strategy: str,
        correct: bool = False,
        parallel: bool = False,
    ):
        if strategy not in self.STRATEGIES:
            raise ValueError(f"unknown baseline strategy {strategy!r}")
        self.tracker1 = tracker1
        self.tracker2 = tracker2
        self.strategy = strategy
        self.correct = correct
        self._pool = ThreadPoolExecutor(max_workers=2) if parallel else None
        self._next_index: int | None = None
        self.overrides_applied = 0
        self.overrides_denied = 0

    def init(self, frame: FrameHandle, box0: BBox) -> None:
        if frame.index != 0:
            raise ValueError(f"init requires frame index 0, got {frame.index}")
        self.tracker1.init(frame, box0)
        self.tracker2.init(frame, box0)
        self._next_index = 1

    def step(self, frame: FrameHandle) -> FusedOutput:
        if self._next_index is None:
            raise ValueError("stepped before init")
        if frame.index != self._next_index:
            raise ValueError(f"out-of-order frame: expected {self._next_index}, got {frame.index}")
        try:
            if self._pool is not None:
                f1 = self._pool.submit(self.tracker1.step, frame)
                f2 = self._pool.submit(self.tracker2.step, frame)
                out1, out2 = f1.result(), f2.result()
            else:
                out1, out2 = self.tracker1.step(frame), self.tracker2.step(frame)
        except Exception as exc:
            raise RuntimeError(f"tracker step failed at frame {frame.index}") from exc

        if self.strategy == "average":
            fused = baseline_average(out1, out2)
            targets = (self.tracker1, self.tracker2) if self.correct else ()
        else:
            fused = baseline_max_confidence(out1, out2)
            loser = self.tracker2 if fused.selected_tracker == 1 else self.tracker1
            targets = (loser,) if self.correct else ()
        for tracker in targets:
            if tracker.override_state(fused.box):
                self.overrides_applied += 1
            else:
                self.overrides_denied += 1

        self._next_index += 1
        return fused

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True)
