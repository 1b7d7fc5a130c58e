"""Deterministic synthetic long-term tracking worlds and scripted agents.

No pixels anywhere: scripted trackers and verifiers observe the hidden world
state carried by each frame's payload, so runs exercise the decision logic at
desk scale while staying bit-reproducible. Ground truth disappears over
configurable intervals, moving distractors give confident trackers something
to latch onto, and the two shipped tracker profiles fail in complementary
ways (tight boxes with unreliable confidence vs. coarse boxes with calibrated
confidence).
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, replace

import numpy as np

from .api import FrameHandle, Tracker, TrackerCapabilities, TrackerOutput, Verifier
from .geometry import BBox, iou
from .sequence import SequenceGroundTruth

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class RandomStream:
    """Named stream over a counter-based generator, with block-buffered draws.

    Each consumer (world generator, tracker instance, verifier) owns its own
    stream keyed by (seed, run_seed, name), so concurrent stepping of
    independent instances cannot perturb anyone's draw order.
    """

    _BLOCK = 4096

    def __init__(self, seed: int, name: str, run_seed: int = 0):
        key_hi = (seed * _GOLDEN + run_seed) & _MASK64
        key_lo = zlib.crc32(name.encode("utf-8"))
        self._gen = np.random.Generator(np.random.Philox(key=(key_hi << 64) | key_lo))
        self._normals = np.empty(0)
        self._uniforms = np.empty(0)
        self._ni = 0
        self._ui = 0

    def normal(self) -> float:
        if self._ni >= self._normals.shape[0]:
            self._normals = self._gen.standard_normal(self._BLOCK)
            self._ni = 0
        value = self._normals[self._ni]
        self._ni += 1
        return float(value)

    def uniform(self) -> float:
        if self._ui >= self._uniforms.shape[0]:
            self._uniforms = self._gen.random(self._BLOCK)
            self._ui = 0
        value = self._uniforms[self._ui]
        self._ui += 1
        return float(value)


# ---------------------------------------------------------------------------
# World specification and generation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DistractorSpec:
    """Moving target-like boxes that confuse susceptible trackers."""

    count: int = 0
    spawn_distance: tuple[float, float] = (150.0, 300.0)  # pixels from the target
    lifetime: tuple[int, int] = (150, 400)  # frames before respawning

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("distractor count must be >= 0")
        if self.spawn_distance[0] <= 0 or self.spawn_distance[1] < self.spawn_distance[0]:
            raise ValueError(f"bad spawn_distance range {self.spawn_distance}")
        if self.lifetime[0] < 1 or self.lifetime[1] < self.lifetime[0]:
            raise ValueError(f"bad lifetime range {self.lifetime}")


@dataclass(frozen=True)
class SequenceSpec:
    """Everything needed to generate one synthetic sequence deterministically."""

    sequence_id: str
    length: int
    frame_size: tuple[float, float] = (1280.0, 720.0)
    motion: str = "random-walk"  # or "linear"
    speed: float = 3.0  # pixels per frame
    base_size: tuple[float, float] = (60.0, 60.0)
    scale_drift_rate: float = 0.0  # per-frame multiplicative drift, reflected in [0.6, 1.8]
    disappearances: tuple[tuple[int, int], ...] = ()  # (start frame, duration)
    distractors: DistractorSpec = DistractorSpec()
    seed: int = 0

    def __post_init__(self):
        if self.length < 2:
            raise ValueError("sequence needs at least an init frame and one step")
        if self.motion not in ("random-walk", "linear"):
            raise ValueError(f"unknown motion model {self.motion!r}")
        if self.speed < 0:
            raise ValueError("speed must be >= 0")
        if self.base_size[0] <= 0 or self.base_size[1] <= 0:
            raise ValueError("base_size must be positive")
        prev_end = 1  # frame 0 must stay visible for initialization
        for start, duration in sorted(self.disappearances):
            if duration < 1:
                raise ValueError(f"disappearance duration must be >= 1, got {duration}")
            if start < prev_end:
                raise ValueError("disappearance intervals overlap or start at frame 0")
            if start + duration > self.length:
                raise ValueError("disappearance interval exceeds sequence length")
            prev_end = start + duration


@dataclass(frozen=True, slots=True)
class Distractor:
    ident: int
    box: BBox


@dataclass(frozen=True, slots=True)
class WorldFrame:
    """Hidden state of one frame: the target box (None while absent) and distractors."""

    target: BBox | None
    distractors: tuple[Distractor, ...] = ()


@dataclass(frozen=True)
class World:
    spec: SequenceSpec
    frames: tuple[WorldFrame, ...]

    def ground_truth(self) -> SequenceGroundTruth:
        return SequenceGroundTruth(
            tuple(f.target for f in self.frames),
            sequence_id=self.spec.sequence_id,
            frame_size=self.spec.frame_size,
        )

    def frame_handles(self) -> list[FrameHandle]:
        return [FrameHandle(t, frame) for t, frame in enumerate(self.frames)]


def _clamp(value: float, lo: float, hi: float) -> float:
    return lo if value < lo else hi if value > hi else value


class _MovingBox:
    """Shared motion integrator: bounces off frame bounds, stays fully inside."""

    __slots__ = ("cx", "cy", "vx", "vy", "w", "h")

    def __init__(self, cx, cy, vx, vy, w, h):
        self.cx, self.cy, self.vx, self.vy, self.w, self.h = cx, cy, vx, vy, w, h

    def advance(self, frame_w: float, frame_h: float) -> None:
        self.cx += self.vx
        self.cy += self.vy
        lo_x, hi_x = self.w / 2.0, frame_w - self.w / 2.0
        lo_y, hi_y = self.h / 2.0, frame_h - self.h / 2.0
        if self.cx < lo_x or self.cx > hi_x:
            self.vx = -self.vx
            self.cx = _clamp(self.cx, lo_x, hi_x)
        if self.cy < lo_y or self.cy > hi_y:
            self.vy = -self.vy
            self.cy = _clamp(self.cy, lo_y, hi_y)

    def box(self) -> BBox:
        return BBox(self.cx - self.w / 2.0, self.cy - self.h / 2.0, self.w, self.h)


def generate_world(spec: SequenceSpec) -> World:
    """Generate the full hidden state for a spec; deterministic in spec.seed."""
    rng = RandomStream(spec.seed, "world")
    frame_w, frame_h = spec.frame_size
    base_w, base_h = spec.base_size

    absent = np.zeros(spec.length, dtype=bool)
    for start, duration in spec.disappearances:
        absent[start : start + duration] = True

    # Hidden target trajectory; it keeps moving while invisible so the target
    # reappears away from where it vanished.
    cx = frame_w / 2.0 + (rng.uniform() - 0.5) * frame_w / 2.0
    cy = frame_h / 2.0 + (rng.uniform() - 0.5) * frame_h / 2.0
    heading = rng.uniform() * 2.0 * math.pi
    vx, vy = math.cos(heading) * spec.speed, math.sin(heading) * spec.speed
    scale, scale_dir = 1.0, 1.0

    distractor_spec = spec.distractors
    distractors: list[list] = []  # [ident, _MovingBox, expires_at]
    next_ident = 0

    def spawn(ref_x: float, ref_y: float, t: int, stagger: bool) -> list:
        nonlocal next_ident
        angle = rng.uniform() * 2.0 * math.pi
        lo, hi = distractor_spec.spawn_distance
        dist = lo + rng.uniform() * (hi - lo)
        w = base_w * (0.8 + rng.uniform() * 0.4)
        h = base_h * (0.8 + rng.uniform() * 0.4)
        dcx = _clamp(ref_x + math.cos(angle) * dist, w / 2.0, frame_w - w / 2.0)
        dcy = _clamp(ref_y + math.sin(angle) * dist, h / 2.0, frame_h - h / 2.0)
        dheading = rng.uniform() * 2.0 * math.pi
        dspeed = spec.speed * (0.7 + rng.uniform() * 0.6)
        life_lo, life_hi = distractor_spec.lifetime
        life = life_lo + rng.uniform() * (life_hi - life_lo)
        if stagger:
            life *= rng.uniform()
        mover = _MovingBox(dcx, dcy, math.cos(dheading) * dspeed, math.sin(dheading) * dspeed, w, h)
        ident = next_ident
        next_ident += 1
        return [ident, mover, t + max(1, int(life))]

    for _ in range(distractor_spec.count):
        distractors.append(spawn(cx, cy, 0, stagger=True))

    frames: list[WorldFrame] = []
    for t in range(spec.length):
        if t > 0:
            if spec.motion == "random-walk":
                vx = rng.normal() * spec.speed
                vy = rng.normal() * spec.speed
            if spec.scale_drift_rate > 0.0:
                scale *= 1.0 + spec.scale_drift_rate * scale_dir
                if scale > 1.8 or scale < 0.6:
                    scale_dir = -scale_dir
                    scale = _clamp(scale, 0.6, 1.8)
            w, h = base_w * scale, base_h * scale
            mover = _MovingBox(cx, cy, vx, vy, w, h)
            mover.advance(frame_w, frame_h)
            cx, cy, vx, vy = mover.cx, mover.cy, mover.vx, mover.vy
        w, h = base_w * scale, base_h * scale
        cx = _clamp(cx, w / 2.0, frame_w - w / 2.0)
        cy = _clamp(cy, h / 2.0, frame_h - h / 2.0)

        snapshot = []
        for entry in distractors:
            ident, mover, expires = entry
            if t >= expires:
                entry[:] = spawn(cx, cy, t, stagger=False)
                ident, mover, expires = entry
            elif t > 0:
                mover.advance(frame_w, frame_h)
            snapshot.append(Distractor(ident, mover.box()))

        target = None if absent[t] else BBox(cx - w / 2.0, cy - h / 2.0, w, h)
        frames.append(WorldFrame(target, tuple(snapshot)))

    return World(spec, tuple(frames))


def generate_sequence(spec: SequenceSpec) -> SequenceGroundTruth:
    """Ground-truth view of the generated world (boxes on visible frames only)."""
    return generate_world(spec).ground_truth()


# ---------------------------------------------------------------------------
# Scripted trackers
# ---------------------------------------------------------------------------

CALIBRATIONS = ("well-calibrated", "overconfident", "underconfident")


@dataclass(frozen=True)
class ScriptedTrackerProfile:
    """Failure characteristics of a scripted tracker.

    Confidence is self-assessed overlap plus a calibration bias and uniform
    noise; with probability garbage_confidence_rate a frame's confidence is an
    uninformative uniform draw instead. While locked on a distractor the
    tracker believes it is tracking well and reports captured_confidence as
    its base value regardless of calibration.
    """

    name: str = "custom"
    sigma: float = 2.0  # center jitter, pixels
    scale_jitter: float = 0.02  # fractional size jitter
    drift_onset_prob: float = 0.0
    drift_rate: float = 6.0  # pixels per frame while adrift
    redetect_latency: int = 0  # frames after reappearance before re-lock
    global_redetect_prob: float = 0.0  # per-frame recovery chance while adrift
    calibration: str = "well-calibrated"
    confidence_bias: float = 0.0
    confidence_noise: float = 0.05  # half-width of the uniform confidence noise
    garbage_confidence_rate: float = 0.0
    distractor_susceptibility: float = 0.0
    captured_confidence: float = 0.85
    search_scale: float = 4.0  # linear search-window factor
    size_glitch_prob: float = 0.0  # onset of size-estimation failure episodes
    size_glitch_factor: float = 1.45  # aspect distortion applied during an episode
    size_glitch_duration: int = 20

    def __post_init__(self):
        for prob in (
            self.drift_onset_prob,
            self.global_redetect_prob,
            self.garbage_confidence_rate,
            self.distractor_susceptibility,
            self.size_glitch_prob,
        ):
            if not 0.0 <= prob <= 1.0:
                raise ValueError(f"probabilities must lie in [0, 1], got {prob}")
        if self.sigma < 0 or self.scale_jitter < 0 or self.confidence_noise < 0:
            raise ValueError("noise magnitudes must be >= 0")
        if self.redetect_latency < 0:
            raise ValueError("redetect_latency must be >= 0")
        if self.calibration not in CALIBRATIONS:
            raise ValueError(f"calibration must be one of {CALIBRATIONS}")
        if self.search_scale <= 0:
            raise ValueError("search_scale must be positive")
        if not 0.0 <= self.captured_confidence <= 1.0:
            raise ValueError("captured_confidence must lie in [0, 1]")

    @property
    def signed_bias(self) -> float:
        if self.calibration == "overconfident":
            return self.confidence_bias
        if self.calibration == "underconfident":
            return -self.confidence_bias
        return 0.0


# Shipped presets with complementary failure modes: the first produces tight
# boxes and recovers fast but its confidence is noisy, inflated, and it chases
# distractors; the second is coarse and slow to re-detect but rarely fails and
# its confidence can be trusted.
PROFILE_ACCURATE_OVERCONFIDENT = ScriptedTrackerProfile(
    name="accurate-overconfident",
    sigma=1.5,
    scale_jitter=0.03,
    drift_onset_prob=0.002,
    drift_rate=7.0,
    redetect_latency=3,
    global_redetect_prob=0.12,
    calibration="overconfident",
    confidence_bias=0.3,
    confidence_noise=0.2,
    garbage_confidence_rate=0.15,
    distractor_susceptibility=0.03,
    captured_confidence=0.9,
    size_glitch_prob=0.003,
    size_glitch_duration=18,
)

PROFILE_ROBUST_CALIBRATED = ScriptedTrackerProfile(
    name="robust-calibrated",
    sigma=6.0,
    scale_jitter=0.06,
    drift_onset_prob=0.0005,
    drift_rate=5.0,
    redetect_latency=15,
    global_redetect_prob=0.03,
    calibration="well-calibrated",
    confidence_noise=0.08,
    distractor_susceptibility=0.005,
)


@dataclass(frozen=True, slots=True)
class TrackerEvent:
    """State transition logged by a scripted tracker."""

    frame: int
    kind: str  # drift_onset | capture | capture_end | relock | lost_absence | lost_window | glitch_onset
    detail: str = ""


_LOCKED = "locked"
_SEARCHING = "searching"
_DRIFTING = "drifting"
_CAPTURED = "captured"


class ScriptedTracker(Tracker):
    """Deterministic tracker over hidden world state, driven by a profile.

    The internal reference box tracks the target exactly while locked; output
    noise is applied on top, so two runs differing only in noise magnitude
    share the same state trajectory. Per step the tracker consumes a fixed
    number of draws from each of its two streams, keeping runs with equal
    seeds aligned draw-for-draw regardless of profile or world.
    """

    capabilities = TrackerCapabilities(supports_state_override=True, supports_search_scale=True)

    def __init__(
        self,
        profile: ScriptedTrackerProfile,
        seed: int,
        name: str = "tracker",
        run_seed: int = 0,
    ):
        super().__init__()
        self.profile = profile
        self._seed = seed
        self._name = name
        self._run_seed = run_seed
        self.events: list[TrackerEvent] = []
        self._setup()

    def _setup(self) -> None:
        self._events_rng = RandomStream(self._seed, self._name + "/events", self._run_seed)
        self._noise_rng = RandomStream(self._seed, self._name + "/noise", self._run_seed)
        self._state = _LOCKED
        self._ref: BBox | None = None
        self._scale = self.profile.search_scale
        self._drift_vec = (0.0, 0.0)
        self._captured_id: int | None = None
        self._visible_since: int | None = None
        self._glitch_until = -1
        self.events = []

    def _do_init(self, frame: FrameHandle, box0: BBox) -> None:
        self._setup()
        self._ref = box0

    def _do_reset(self) -> None:
        self._setup()
        self._ref = None

    def _do_override(self, box: BBox) -> None:
        # The correction recenters the search region; a tracker that was
        # following a false trajectory drops it and scans the new region.
        self._ref = box
        if self._state in (_DRIFTING, _CAPTURED):
            self._state = _SEARCHING
            self._captured_id = None
            self._visible_since = None

    def _do_set_search_scale(self, factor: float) -> None:
        self._scale = factor

    def search_scale_baseline(self) -> float | None:
        return self.profile.search_scale

    @property
    def search_center(self) -> tuple[float, float]:
        """Center of the region the next step will search; exposed for tests."""
        assert self._ref is not None
        return (self._ref.cx, self._ref.cy)

    @property
    def search_window(self) -> tuple[float, float, float, float]:
        """Search region as (cx, cy, half_w, half_h) for the current scale."""
        assert self._ref is not None
        ref = self._ref
        return (ref.cx, ref.cy, self._scale * ref.w / 2.0, self._scale * ref.h / 2.0)

    def _in_window(self, x: float, y: float) -> bool:
        cx, cy, half_w, half_h = self.search_window
        return abs(x - cx) <= half_w and abs(y - cy) <= half_h

    def _log(self, frame: int, kind: str, detail: str = "") -> None:
        self.events.append(TrackerEvent(frame, kind, detail))

    def _do_step(self, frame: FrameHandle) -> TrackerOutput:
        world = frame.payload
        if not isinstance(world, WorldFrame):
            raise TypeError("scripted trackers need WorldFrame payloads")
        profile = self.profile
        t = frame.index

        # Fixed draw schedule: 5 event uniforms, 3 noise normals, 2 noise uniforms.
        e_drift = self._events_rng.uniform()
        e_angle = self._events_rng.uniform()
        e_capture = self._events_rng.uniform()
        e_redetect = self._events_rng.uniform()
        e_glitch = self._events_rng.uniform()
        n_jx = self._noise_rng.normal()
        n_jy = self._noise_rng.normal()
        n_scale = self._noise_rng.normal()
        n_conf = self._noise_rng.uniform()
        n_garbage = self._noise_rng.uniform()

        target = world.target
        visible = target is not None

        if self._state == _LOCKED:
            if not visible:
                self._state = _SEARCHING
                self._visible_since = None
                self._log(t, "lost_absence")
            elif not self._in_window(target.cx, target.cy):
                self._state = _SEARCHING
                self._visible_since = t
                self._log(t, "lost_window")
            else:
                hazard = self._nearest_distractor_in_window(world)
                if hazard is not None and e_capture < profile.distractor_susceptibility:
                    self._state = _CAPTURED
                    self._captured_id = hazard.ident
                    self._ref = hazard.box
                    self._log(t, "capture", f"distractor {hazard.ident}")
                elif e_drift < profile.drift_onset_prob:
                    angle = e_angle * 2.0 * math.pi
                    self._drift_vec = (math.cos(angle), math.sin(angle))
                    self._state = _DRIFTING
                    self._log(t, "drift_onset")
                    self._advance_drift()
                else:
                    self._ref = target
        elif self._state == _DRIFTING:
            if not visible:
                self._state = _SEARCHING
                self._visible_since = None
                self._log(t, "lost_absence")
            elif e_redetect < profile.global_redetect_prob:
                self._state = _LOCKED
                self._ref = target
                self._log(t, "relock", "global")
            else:
                self._advance_drift()
        elif self._state == _CAPTURED:
            found = None
            for d in world.distractors:
                if d.ident == self._captured_id:
                    found = d
                    break
            if found is None:
                self._state = _SEARCHING
                self._captured_id = None
                self._visible_since = t if visible else None
                self._log(t, "capture_end", "distractor expired")
            else:
                self._ref = found.box

        if self._state == _SEARCHING:
            if not visible:
                self._visible_since = None
            elif self._visible_since is None:
                self._visible_since = t
            hazard = self._nearest_distractor_in_window(world)
            target_in_window = visible and self._in_window(target.cx, target.cy)
            hazard_closer = hazard is not None and (
                not target_in_window
                or self._distance_to_center(hazard.box.cx, hazard.box.cy)
                < self._distance_to_center(target.cx, target.cy)
            )
            if hazard_closer and e_capture < profile.distractor_susceptibility:
                self._state = _CAPTURED
                self._captured_id = hazard.ident
                self._ref = hazard.box
                self._log(t, "capture", f"distractor {hazard.ident}")
            elif target_in_window:
                self._state = _LOCKED
                self._ref = target
                self._log(t, "relock", "local")
            elif (
                visible
                and self._visible_since is not None
                and t - self._visible_since >= profile.redetect_latency
            ):
                self._state = _LOCKED
                self._ref = target
                self._log(t, "relock", "global")

        # Size-estimation failure episodes start only while tracking normally.
        if (
            self._state == _LOCKED
            and t >= self._glitch_until
            and e_glitch < profile.size_glitch_prob
        ):
            self._glitch_until = t + profile.size_glitch_duration
            self._log(t, "glitch_onset")

        # Output: internal reference plus measurement noise.
        ref = self._ref
        w = max(1.0, ref.w * (1.0 + n_scale * profile.scale_jitter))
        h = max(1.0, ref.h * (1.0 + n_scale * profile.scale_jitter))
        if t < self._glitch_until:
            w *= profile.size_glitch_factor
            h /= profile.size_glitch_factor
        cx = ref.cx + n_jx * profile.sigma
        cy = ref.cy + n_jy * profile.sigma
        out_box = BBox(cx - w / 2.0, cy - h / 2.0, w, h)

        if self._state == _CAPTURED:
            base_conf = profile.captured_confidence
        elif visible:
            base_conf = iou(out_box, target)
        else:
            base_conf = 0.0
        if n_garbage < profile.garbage_confidence_rate:
            confidence = n_conf
        else:
            noise = (n_conf * 2.0 - 1.0) * profile.confidence_noise
            confidence = _clamp(base_conf + profile.signed_bias + noise, 0.0, 1.0)
        return TrackerOutput(out_box, confidence)

    def _advance_drift(self) -> None:
        ref = self._ref
        rate = self.profile.drift_rate
        self._ref = BBox(
            ref.x + self._drift_vec[0] * rate, ref.y + self._drift_vec[1] * rate, ref.w, ref.h
        )

    def _distance_to_center(self, x: float, y: float) -> float:
        cx, cy, _, _ = self.search_window
        return math.hypot(x - cx, y - cy)

    def _nearest_distractor_in_window(self, world: WorldFrame) -> Distractor | None:
        best = None
        best_dist = math.inf
        for d in world.distractors:
            if self._in_window(d.box.cx, d.box.cy):
                dist = self._distance_to_center(d.box.cx, d.box.cy)
                if dist < best_dist:
                    best, best_dist = d, dist
        return best


# ---------------------------------------------------------------------------
# Scripted verifiers
# ---------------------------------------------------------------------------

_LOGISTIC_STEEPNESS = 10.0


@dataclass(frozen=True)
class ScriptedVerifierProfile:
    """Stand-in for the online verification model.

    The ideal answer is whether the queried box overlaps the visible target
    with IoU >= iou_threshold; with probability 1 - accuracy the answer is
    flipped. 'logistic' smoothing reports a sigmoid of the overlap instead of
    a hard 0/1.
    """

    iou_threshold: float = 0.5
    accuracy: float = 1.0
    smoothing: str = "hard"  # or "logistic"

    def __post_init__(self):
        if not 0.0 <= self.accuracy <= 1.0:
            raise ValueError(f"accuracy must lie in [0, 1], got {self.accuracy}")
        if not 0.0 < self.iou_threshold <= 1.0:
            raise ValueError(f"iou_threshold must lie in (0, 1], got {self.iou_threshold}")
        if self.smoothing not in ("hard", "logistic"):
            raise ValueError(f"unknown smoothing {self.smoothing!r}")


IDEAL_VERIFIER = ScriptedVerifierProfile()


class ScriptedVerifier(Verifier):
    """Scores boxes against the hidden target; one uniform draw per call."""

    def __init__(
        self,
        profile: ScriptedVerifierProfile = IDEAL_VERIFIER,
        seed: int = 0,
        name: str = "verifier",
        run_seed: int = 0,
    ):
        self.profile = profile
        self._rng = RandomStream(seed, name, run_seed)
        self.update_calls: list[int] = []

    def score(self, frame: FrameHandle, box: BBox) -> float:
        world = frame.payload
        if not isinstance(world, WorldFrame):
            raise TypeError("scripted verifiers need WorldFrame payloads")
        u = self._rng.uniform()
        target = world.target
        overlap = iou(box, target) if target is not None else 0.0
        if self.profile.smoothing == "hard":
            value = 1.0 if (target is not None and overlap >= self.profile.iou_threshold) else 0.0
        else:
            value = 1.0 / (
                1.0 + math.exp(-_LOGISTIC_STEEPNESS * (overlap - self.profile.iou_threshold))
            )
        if u >= self.profile.accuracy:
            return 1.0 - value
        return value

    def update(self, frame: FrameHandle, box: BBox) -> None:
        # Adaptation is out of scope for scripted profiles; calls are recorded
        # so controller cadence contracts stay testable.
        self.update_calls.append(frame.index)


# ---------------------------------------------------------------------------
# Suite presets
# ---------------------------------------------------------------------------

SUITE_NAMES = ("complementary", "overconfidence", "no-absence")
_SUITE_VERSION = "v1"
_SUITE_BASE_SEED = {"complementary": 11_000, "overconfidence": 22_000, "no-absence": 33_000}


def _spread_disappearances(
    rng: RandomStream, length: int, count: int, dur_lo: int, dur_hi: int
) -> tuple[tuple[int, int], ...]:
    # One interval per equal-width segment keeps intervals apart without
    # rejection sampling.
    usable_lo, usable_hi = 60, length - 80
    segment = (usable_hi - usable_lo) / count
    intervals = []
    for k in range(count):
        duration = dur_lo + int(rng.uniform() * (dur_hi - dur_lo + 1))
        slack = max(1.0, segment - duration - 10)
        start = usable_lo + int(k * segment + rng.uniform() * slack)
        intervals.append((start, duration))
    return tuple(intervals)


def suite(name: str) -> list[SequenceSpec]:
    """Fixed, versioned sequence specs for a named suite; deterministic."""
    if name == "complementary":
        return _complementary_suite()
    if name == "overconfidence":
        return _overconfidence_suite()
    if name == "no-absence":
        return _no_absence_suite()
    raise ValueError(f"unknown suite {name!r} (known: {', '.join(SUITE_NAMES)})")


def suite_profiles(name: str) -> tuple[ScriptedTrackerProfile, ScriptedTrackerProfile]:
    """Tracker profile pair a suite is designed to stress."""
    if name == "overconfidence":
        strong_over = replace(
            PROFILE_ACCURATE_OVERCONFIDENT,
            name="accurate-overconfident-extreme",
            confidence_bias=0.45,
            confidence_noise=0.1,
            garbage_confidence_rate=0.05,
            distractor_susceptibility=0.25,
            captured_confidence=0.95,
            global_redetect_prob=0.1,
            size_glitch_prob=0.0,
        )
        steady = replace(
            PROFILE_ROBUST_CALIBRATED,
            name="robust-calibrated-steady",
            distractor_susceptibility=0.0,
            redetect_latency=10,
        )
        return strong_over, steady
    if name in SUITE_NAMES:
        return PROFILE_ACCURATE_OVERCONFIDENT, PROFILE_ROBUST_CALIBRATED
    raise ValueError(f"unknown suite {name!r}")


def suite_verifier_profile(name: str) -> ScriptedVerifierProfile:
    if name == "no-absence":
        return ScriptedVerifierProfile(accuracy=1.0)
    if name in SUITE_NAMES:
        return ScriptedVerifierProfile(accuracy=0.97)
    raise ValueError(f"unknown suite {name!r}")


def _complementary_suite() -> list[SequenceSpec]:
    # Long sequences with many long disappearances and wandering distractors.
    rng = RandomStream(_SUITE_BASE_SEED["complementary"], "suite/complementary")
    specs = []
    for i in range(50):
        length = 2000 + int(rng.uniform() * 1001)
        count = 8 + int(rng.uniform() * 5)
        intervals = _spread_disappearances(rng, length, count, 40, 65)
        specs.append(
            SequenceSpec(
                sequence_id=f"complementary-{_SUITE_VERSION}-{i:03d}",
                length=length,
                motion="linear" if i % 5 == 4 else "random-walk",
                speed=2.0 + rng.uniform() * 3.0,
                base_size=(40.0 + rng.uniform() * 40.0, 40.0 + rng.uniform() * 40.0),
                scale_drift_rate=rng.uniform() * 0.002,
                disappearances=intervals,
                distractors=DistractorSpec(count=2, spawn_distance=(140.0, 320.0), lifetime=(120, 360)),
                seed=_SUITE_BASE_SEED["complementary"] + i,
            )
        )
    return specs


def _overconfidence_suite() -> list[SequenceSpec]:
    # Distractors spawn beyond the search window so a bad correction strands
    # the corrected tracker; captures are the dominant failure mode here.
    rng = RandomStream(_SUITE_BASE_SEED["overconfidence"], "suite/overconfidence")
    specs = []
    for i in range(25):
        length = 1000 + int(rng.uniform() * 401)
        intervals = _spread_disappearances(rng, length, 3, 30, 50)
        specs.append(
            SequenceSpec(
                sequence_id=f"overconfidence-{_SUITE_VERSION}-{i:03d}",
                length=length,
                motion="random-walk",
                speed=2.0 + rng.uniform() * 2.0,
                base_size=(45.0 + rng.uniform() * 25.0, 45.0 + rng.uniform() * 25.0),
                disappearances=intervals,
                distractors=DistractorSpec(count=3, spawn_distance=(240.0, 380.0), lifetime=(100, 220)),
                seed=_SUITE_BASE_SEED["overconfidence"] + i,
            )
        )
    return specs


def _no_absence_suite() -> list[SequenceSpec]:
    rng = RandomStream(_SUITE_BASE_SEED["no-absence"], "suite/no-absence")
    specs = []
    for i in range(10):
        length = 600 + int(rng.uniform() * 301)
        specs.append(
            SequenceSpec(
                sequence_id=f"no-absence-{_SUITE_VERSION}-{i:03d}",
                length=length,
                speed=2.0 + rng.uniform() * 2.0,
                base_size=(50.0 + rng.uniform() * 20.0, 50.0 + rng.uniform() * 20.0),
                distractors=DistractorSpec(count=1, spawn_distance=(150.0, 300.0), lifetime=(100, 250)),
                seed=_SUITE_BASE_SEED["no-absence"] + i,
            )
        )
    return specs
