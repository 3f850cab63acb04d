"""Canonical emotion vocabulary, score containers, channel fusion and set similarity.

Everything downstream (channels, recommender, analytics, service) trades in
the five emotions defined here. Scores are kept at full precision; rounding
to two decimals happens only at presentation time via :func:`round2`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping


class Emotion(str, Enum):
    """The closed set of five emotions every channel reports on."""

    HAPPY = "happy"
    ANGRY = "angry"
    SURPRISE = "surprise"
    SAD = "sad"
    FEAR = "fear"


# Canonical key order for serialization and table output.
EMOTIONS: tuple[Emotion, ...] = (
    Emotion.HAPPY,
    Emotion.ANGRY,
    Emotion.SURPRISE,
    Emotion.SAD,
    Emotion.FEAR,
)

EmotionSet = frozenset


def round2(x: float) -> float:
    """Round half-up to 2 decimals with a guard for binary float noise.

    Channel inputs carry two-decimal precision, so genuine ties land exactly
    on .xx5 rationals; the 1e-9 nudge keeps values that the float grid stores
    a hair below the midpoint (e.g. 0.26499999999999996) rounding up.
    """
    return math.floor(x * 100.0 + 0.5 + 1e-9) / 100.0


@dataclass(frozen=True)
class EmotionScores:
    """Score per emotion, each a finite real in [0, 1]. Missing emotion = 0."""

    happy: float = 0.0
    angry: float = 0.0
    surprise: float = 0.0
    sad: float = 0.0
    fear: float = 0.0

    def __post_init__(self):
        for emotion in EMOTIONS:
            value = getattr(self, emotion.value)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"score for {emotion.value!r} is not finite: {value!r}")
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"score for {emotion.value!r} outside [0, 1]: {value!r}")

    def get(self, emotion: Emotion) -> float:
        return getattr(self, emotion.value)

    def as_dict(self) -> dict[str, float]:
        """Full-precision mapping in canonical key order."""
        return {e.value: getattr(self, e.value) for e in EMOTIONS}

    def rounded(self) -> dict[str, float]:
        """Presentation form, two decimals, canonical key order."""
        return {e.value: round2(getattr(self, e.value)) for e in EMOTIONS}

    @classmethod
    def from_mapping(cls, data: Mapping[str, float], where: str = "scores") -> "EmotionScores":
        """Build from a mapping keyed by emotion name; absent keys default to 0.

        ``where`` names the originating channel or file in error messages.
        """
        known = {e.value for e in EMOTIONS}
        extra = set(data) - known
        if extra:
            raise ValueError(f"{where}: unknown emotion keys {sorted(extra)}")
        try:
            return cls(**{k: float(v) for k, v in data.items()})
        except ValueError as exc:
            raise ValueError(f"{where}: {exc}") from None

    @classmethod
    def zero(cls) -> "EmotionScores":
        return cls()


@dataclass(frozen=True)
class ChannelWeights:
    """Relative weights of the three channels in the fused profile.

    The stock configuration weights description text highest and the poster
    lowest; callers can override everywhere these are consumed.
    """

    poster: float = 1.0
    soundtrack: float = 2.0
    description: float = 3.0

    def __post_init__(self):
        for name in ("poster", "soundtrack", "description"):
            w = getattr(self, name)
            if not (isinstance(w, (int, float)) and math.isfinite(w) and w > 0):
                raise ValueError(f"channel weight {name!r} must be strictly positive, got {w!r}")

    @property
    def total(self) -> float:
        return self.poster + self.soundtrack + self.description


DEFAULT_WEIGHTS = ChannelWeights()
DEFAULT_THRESHOLD = 0.05


def _check_channel(scores: EmotionScores, channel: str) -> None:
    for emotion in EMOTIONS:
        value = scores.get(emotion)
        if not math.isfinite(value):
            raise ValueError(f"channel {channel!r}: non-finite score for {emotion.value!r}")


def fuse_channels(
    poster: EmotionScores,
    soundtrack: EmotionScores,
    description: EmotionScores,
    weights: ChannelWeights = DEFAULT_WEIGHTS,
) -> EmotionScores:
    """Weighted per-emotion average of the three channel scores.

    The output for each emotion is a convex combination of the channel
    values, so it stays inside their [min, max] envelope.
    """
    _check_channel(poster, "poster")
    _check_channel(soundtrack, "soundtrack")
    _check_channel(description, "description")
    total = weights.total
    fused = {}
    for emotion in EMOTIONS:
        key = emotion.value
        fused[key] = (
            weights.poster * poster.get(emotion)
            + weights.soundtrack * soundtrack.get(emotion)
            + weights.description * description.get(emotion)
        ) / total
    return EmotionScores(**fused)


def to_emotion_set(scores: EmotionScores, threshold: float = DEFAULT_THRESHOLD) -> EmotionSet:
    """Emotions whose score strictly exceeds ``threshold``.

    The comparison is strict: a score exactly at the threshold is excluded.
    """
    if not 0.0 <= threshold < 1.0:
        raise ValueError(f"threshold must be in [0, 1), got {threshold!r}")
    return frozenset(e for e in EMOTIONS if scores.get(e) > threshold)


def jaccard(a: Iterable[Emotion], b: Iterable[Emotion]) -> float:
    """Set similarity |A n B| / |A u B| in [0, 1].

    Two empty sets score 0.0: an emotionless profile carries no similarity
    evidence, and treating it as a perfect match would rank emotion-free
    movies above everything.
    """
    sa, sb = frozenset(a), frozenset(b)
    union = sa | sb
    if not union:
        return 0.0
    return len(sa & sb) / len(union)
