"""Per-channel emotion scoring: description text, poster image, soundtrack labels.

Each channel turns its raw input into an :class:`EmotionScores` over the five
canonical emotions. The text and soundtrack channels normalize so nonzero
outputs sum to 1; the poster channel scores each emotion by set similarity
between the dominant palette and that emotion's characteristic colors, so its
scores are independent per emotion.

Audio feature extraction and classification live outside this artifact: the
soundtrack channel consumes the integer label sequence an external classifier
produced for the 2-second segments of an excerpt.
"""

from __future__ import annotations

import json
import logging
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .emotion_model import EMOTIONS, Emotion, EmotionScores, jaccard

log = logging.getLogger(__name__)

_TOKEN_SPLIT = re.compile(r"[^0-9a-zA-Z]+")

# Label codes of the external per-segment audio classifier. Codes that do not
# map to one of the five canonical emotions are dropped from scoring.
SEGMENT_LABEL_EMOTIONS: dict[int, Emotion | None] = {
    1: None,  # Neutral
    2: Emotion.HAPPY,
    3: Emotion.SAD,
    4: Emotion.ANGRY,
    5: Emotion.FEAR,
    6: None,  # Calm
    7: Emotion.SURPRISE,
    8: None,  # Disgust
}


def normalize_token(token: str) -> str:
    """Lowercase and strip a plural 's'. No stemming beyond that, no negation."""
    token = token.lower().strip()
    if len(token) > 3 and token.endswith("s") and not token.endswith("ss"):
        token = token[:-1]
    return token


@dataclass(frozen=True)
class EmotionLexicon:
    """Token -> (emotion, weight) table plus a stopword list.

    Tokens are stored pre-normalized; lookups apply the same normalization.
    """

    entries: dict[str, tuple[tuple[Emotion, float], ...]]
    stopwords: frozenset[str] = frozenset()

    def __post_init__(self):
        for token, pairs in self.entries.items():
            for emotion, weight in pairs:
                if emotion not in EMOTIONS:
                    raise ValueError(f"lexicon token {token!r}: unknown emotion {emotion!r}")
                if not weight > 0:
                    raise ValueError(f"lexicon token {token!r}: weight must be positive")

    @classmethod
    def from_file(cls, path: str | Path) -> "EmotionLexicon":
        """Parse a lexicon file: ``token, emotion, weight`` per line, '#' comments.

        A token equal to the literal emotion name with weight omitted is not
        supported; all three fields are required. Lines starting with
        ``!stopword`` declare stopwords instead.
        """
        entries: dict[str, list[tuple[Emotion, float]]] = {}
        stopwords: set[str] = set()
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if line.startswith("!stopword"):
                    word = line.split(None, 1)[1].strip()
                    stopwords.add(normalize_token(word))
                    continue
                parts = [p.strip() for p in line.split(",")]
                if len(parts) != 3:
                    raise ValueError(f"{path}:{lineno}: expected 'token, emotion, weight'")
                token, emotion_name, weight_text = parts
                try:
                    emotion = Emotion(emotion_name.lower())
                except ValueError:
                    raise ValueError(
                        f"{path}:{lineno}: unknown emotion {emotion_name!r}"
                    ) from None
                try:
                    weight = float(weight_text)
                except ValueError:
                    raise ValueError(f"{path}:{lineno}: bad weight {weight_text!r}") from None
                entries.setdefault(normalize_token(token), []).append((emotion, weight))
        return cls(
            entries={token: tuple(pairs) for token, pairs in entries.items()},
            stopwords=frozenset(stopwords),
        )

    @classmethod
    def default(cls) -> "EmotionLexicon":
        with resources.as_file(
            resources.files("film_accord.data").joinpath("emotion_lexicon.csv")
        ) as path:
            return cls.from_file(path)


def text_emotions(text: str, lexicon: EmotionLexicon) -> EmotionScores:
    """Lexicon hit counting over normalized tokens, normalized to sum 1.

    Empty text or a text with no lexicon hits scores all zeros.
    """
    totals = {e: 0.0 for e in EMOTIONS}
    for raw in _TOKEN_SPLIT.split(text):
        if not raw:
            continue
        token = normalize_token(raw)
        if not token or token in lexicon.stopwords:
            continue
        for emotion, weight in lexicon.entries.get(token, ()):
            totals[emotion] += weight
    grand = sum(totals.values())
    if grand == 0.0:
        return EmotionScores.zero()
    return EmotionScores(**{e.value: totals[e] / grand for e in EMOTIONS})


@dataclass(frozen=True)
class PosterImage:
    """Raw RGB buffer: row-major, 3 bytes per pixel."""

    width: int
    height: int
    pixels: bytes

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("poster image must have at least one pixel")
        expected = self.width * self.height * 3
        if len(self.pixels) != expected:
            raise ValueError(
                f"pixel buffer is {len(self.pixels)} bytes, expected {expected} "
                f"for {self.width}x{self.height}"
            )

    @classmethod
    def from_rows(cls, rows) -> "PosterImage":
        """Build from nested [[(r,g,b), ...], ...] rows."""
        height = len(rows)
        width = len(rows[0]) if rows else 0
        buf = bytearray()
        for row in rows:
            if len(row) != width:
                raise ValueError("ragged pixel rows")
            for r, g, b in row:
                buf.extend((r, g, b))
        return cls(width=width, height=height, pixels=bytes(buf))

    def iter_pixels(self):
        data = self.pixels
        for i in range(0, len(data), 3):
            yield data[i], data[i + 1], data[i + 2]


@dataclass(frozen=True)
class KBColor:
    """One reference color with its per-emotion weights in [0, 1]."""

    name: str
    rgb: tuple[int, int, int]
    emotion_weights: dict[Emotion, float]

    def __post_init__(self):
        if len(self.rgb) != 3 or any(not 0 <= v <= 255 for v in self.rgb):
            raise ValueError(f"KB color {self.name!r}: rgb must be three bytes")
        if not any(w > 0 for w in self.emotion_weights.values()):
            raise ValueError(f"KB color {self.name!r}: needs at least one non-zero emotion weight")
        for emotion, w in self.emotion_weights.items():
            if not 0.0 <= w <= 1.0:
                raise ValueError(f"KB color {self.name!r}: weight for {emotion} outside [0, 1]")


@dataclass(frozen=True)
class ColorEmotionKB:
    """Reference colors with fuzzy emotion weights.

    ``alpha_cut`` fixes membership in an emotion's characteristic color set:
    a color belongs to C_e when its weight for e is at least the cut.
    """

    entries: tuple[KBColor, ...]
    palette_size: int = 8
    alpha_cut: float = 0.5

    def __post_init__(self):
        if len(self.entries) < 5:
            raise ValueError(f"color KB needs at least 5 entries, got {len(self.entries)}")
        if self.palette_size < 1:
            raise ValueError("palette_size must be positive")
        if not 0.0 < self.alpha_cut <= 1.0:
            raise ValueError("alpha_cut must be in (0, 1]")

    def characteristic_set(self, emotion: Emotion) -> frozenset[int]:
        """Indices of KB colors characteristic for ``emotion``."""
        return frozenset(
            i
            for i, entry in enumerate(self.entries)
            if entry.emotion_weights.get(emotion, 0.0) >= self.alpha_cut
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "ColorEmotionKB":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: not a valid color KB: {exc}") from None
        return cls.from_definition(raw, where=str(path))

    @classmethod
    def from_definition(cls, raw: dict, where: str = "color KB") -> "ColorEmotionKB":
        known = {e.value for e in EMOTIONS}
        entries = []
        for i, item in enumerate(raw.get("entries", [])):
            weights = {}
            for key, value in item.get("emotion_weights", {}).items():
                if key not in known:
                    log.warning("%s: entry %d: ignoring non-canonical emotion %r", where, i, key)
                    continue
                weights[Emotion(key)] = float(value)
            entries.append(
                KBColor(
                    name=str(item.get("name", f"color-{i}")),
                    rgb=tuple(int(v) for v in item["color"]),
                    emotion_weights=weights,
                )
            )
        return cls(
            entries=tuple(entries),
            palette_size=int(raw.get("palette_size", 8)),
            alpha_cut=float(raw.get("alpha_cut", 0.5)),
        )

    @classmethod
    def default(cls) -> "ColorEmotionKB":
        text = resources.files("film_accord.data").joinpath("color_emotion_kb.json").read_text("utf-8")
        return cls.from_definition(json.loads(text), where="default color KB")


def _nearest_entry(rgb, kb: ColorEmotionKB) -> int:
    r, g, b = rgb
    best_i, best_d = 0, math.inf
    for i, entry in enumerate(kb.entries):
        er, eg, eb = entry.rgb
        d = (r - er) ** 2 + (g - eg) ** 2 + (b - eb) ** 2
        if d < best_d:
            best_i, best_d = i, d
    return best_i


def dominant_palette(img: PosterImage, kb: ColorEmotionKB) -> frozenset[int]:
    """Quantize pixels onto KB colors and keep the K most frequent.

    Frequency ties break on KB entry order, so the palette is deterministic
    and invariant under pixel permutation.
    """
    counts: Counter[int] = Counter()
    for rgb in img.iter_pixels():
        counts[_nearest_entry(rgb, kb)] += 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return frozenset(i for i, _ in ranked[: kb.palette_size])


def poster_emotions(img: PosterImage, kb: ColorEmotionKB) -> EmotionScores:
    """Jaccard similarity between the dominant palette and each emotion's
    characteristic color set, over KB entry identities."""
    palette = dominant_palette(img, kb)
    scores = {}
    for emotion in EMOTIONS:
        scores[emotion.value] = jaccard(palette, kb.characteristic_set(emotion))
    return EmotionScores(**scores)


def validate_segment_labels(labels) -> tuple[int, ...]:
    """Check a label sequence against the classifier vocabulary {1..8}."""
    labels = tuple(labels)
    if not labels:
        raise ValueError("segment label sequence is empty")
    for i, code in enumerate(labels):
        if not isinstance(code, int) or isinstance(code, bool) or code not in SEGMENT_LABEL_EMOTIONS:
            raise ValueError(f"segment {i}: unknown label code {code!r} (expected 1..8)")
    return labels


def soundtrack_emotions(labels) -> EmotionScores:
    """Prevalence of each mapped emotion among the kept segment labels.

    Labels mapping to no canonical emotion are dropped; if every label is
    dropped the output is all zeros.
    """
    labels = validate_segment_labels(labels)
    kept = [SEGMENT_LABEL_EMOTIONS[code] for code in labels if SEGMENT_LABEL_EMOTIONS[code] is not None]
    if not kept:
        return EmotionScores.zero()
    counts = Counter(kept)
    total = len(kept)
    return EmotionScores(**{e.value: counts.get(e, 0) / total for e in EMOTIONS})
