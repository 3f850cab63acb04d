"""Corpus-level emotion analytics: rank series, genre/emotion means,
thresholded emotion distribution, and correlation helpers.

Pearson correlation returns ``None`` (an explicit undefined marker, never a
number) when either input vector is constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .catalog_ingest import Catalog, MovieRecord
from .emotion_model import EMOTIONS, Emotion, EmotionScores
from .recommender import ProfileError, movie_profile


def pearson(x: Sequence[float], y: Sequence[float]) -> Optional[float]:
    """Standard Pearson r; None when undefined (constant input)."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ValueError("need at least 2 points")
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    if sxx == 0.0 or syy == 0.0:
        return None
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def _profile_of(record: MovieRecord) -> EmotionScores:
    # Cached profile, else fusion of cached channel rows; live channel
    # recomputation would need lexicon/KB context the analytics layer
    # deliberately does not carry.
    try:
        return movie_profile(record)
    except ProfileError as exc:
        raise ValueError(f"record {record.id!r}: no emotion profile available ({exc})") from None


@dataclass(frozen=True)
class RankSeries:
    emotion: Emotion
    points: tuple[tuple[int, float], ...]
    mean: float


def rank_series(corpus: Catalog, emotion: Emotion) -> RankSeries:
    """Per-emotion score along the popularity ranking, plus the series mean."""
    rows = []
    for record in corpus:
        if record.popularity_rank is None:
            raise ValueError(f"record {record.id!r}: missing popularity_rank")
        rows.append((record.popularity_rank, _profile_of(record).get(emotion)))
    if not rows:
        raise ValueError("empty corpus")
    rows.sort(key=lambda rv: rv[0])
    mean = sum(v for _, v in rows) / len(rows)
    return RankSeries(emotion=emotion, points=tuple(rows), mean=mean)


def genre_emotion_matrix(corpus: Catalog) -> dict[str, dict[str, float]]:
    """Mean score per (genre, emotion); genres sorted lexicographically.

    A movie contributes to every genre it carries; genres with no movies are
    simply absent.
    """
    sums: dict[str, dict[Emotion, float]] = {}
    counts: dict[str, int] = {}
    for record in corpus:
        profile = _profile_of(record)
        for genre in record.genres:
            row = sums.setdefault(genre, {e: 0.0 for e in EMOTIONS})
            for e in EMOTIONS:
                row[e] += profile.get(e)
            counts[genre] = counts.get(genre, 0) + 1
    return {
        genre: {e.value: sums[genre][e] / counts[genre] for e in EMOTIONS}
        for genre in sorted(sums)
    }


def emotion_distribution(corpus: Catalog, threshold: float = 0.2) -> dict[Emotion, float]:
    """Share of threshold exceedances per emotion.

    Counts (movie, emotion) events with score strictly above the threshold
    and normalizes by the total event count, matching a pie-chart reading.
    Returns an empty mapping when nothing exceeds the threshold.
    """
    counts = {e: 0 for e in EMOTIONS}
    for record in corpus:
        profile = _profile_of(record)
        for e in EMOTIONS:
            if profile.get(e) > threshold:
                counts[e] += 1
    total = sum(counts.values())
    if total == 0:
        return {}
    return {e: counts[e] / total for e in EMOTIONS if counts[e] > 0}


def survey_emotion_correlation(
    responses: Sequence[Sequence[int]],
) -> dict[str, dict[str, Optional[float]]]:
    """Pairwise Pearson correlation of the five 0/1 indicator columns.

    Each row is one respondent's picks in canonical emotion order. Cells for
    constant columns carry the undefined marker; the diagonal is 1.0.
    """
    if len(responses) < 2:
        raise ValueError("need at least 2 response rows")
    for i, row in enumerate(responses):
        if len(row) != len(EMOTIONS):
            raise ValueError(f"response row {i}: expected {len(EMOTIONS)} indicators")
        if any(v not in (0, 1) for v in row):
            raise ValueError(f"response row {i}: indicators must be 0 or 1")
    columns = {e: [row[i] for row in responses] for i, e in enumerate(EMOTIONS)}
    matrix: dict[str, dict[str, Optional[float]]] = {}
    for a in EMOTIONS:
        matrix[a.value] = {}
        for b in EMOTIONS:
            if a is b:
                matrix[a.value][b.value] = 1.0
            else:
                matrix[a.value][b.value] = pearson(columns[a], columns[b])
    return matrix
