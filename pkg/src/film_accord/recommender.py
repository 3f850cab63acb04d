"""End-to-end group recommendation: fused profiles, per-participant set
similarity against favorites, group aggregation and genre-aware ranking.

Genre never filters the pool by default; shared-genre count with the union
of the favorites' genres only breaks ties between equal aggregate scores.
An optional hard filter exists for callers that want it, since a hard filter
can empty the result set.
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog_ingest import MovieRecord, decode_poster
from .channels import (
    ColorEmotionKB,
    EmotionLexicon,
    poster_emotions,
    soundtrack_emotions,
    text_emotions,
)
from .emotion_model import (
    DEFAULT_THRESHOLD,
    DEFAULT_WEIGHTS,
    ChannelWeights,
    EmotionScores,
    fuse_channels,
    jaccard,
    to_emotion_set,
)


class ProfileError(ValueError):
    """A channel is missing with no cached score to fall back on."""


@dataclass(frozen=True)
class GroupRequest:
    """One group decision: participants with favorites, a candidate pool."""

    participants: tuple[tuple[str, MovieRecord], ...]
    candidates: tuple[MovieRecord, ...]
    threshold: float = DEFAULT_THRESHOLD
    weights: ChannelWeights = DEFAULT_WEIGHTS
    genre_filter: bool = False

    def __post_init__(self):
        if not self.participants:
            raise ValueError("group request needs at least one participant")
        if not self.candidates:
            raise ValueError("group request needs at least one candidate")
        ids = [c.id for c in self.candidates]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate candidate ids: {dupes}")


@dataclass(frozen=True)
class RankedMovie:
    movie_id: str
    score: float
    per_participant: tuple[float, ...]
    genre_affinity: int


@dataclass(frozen=True)
class RankedRecommendation:
    """Candidates sorted by (score desc, genre_affinity desc, id asc)."""

    entries: tuple[RankedMovie, ...]

    def top(self) -> RankedMovie:
        return self.entries[0]

    def as_dict(self) -> dict:
        from .emotion_model import round2

        return {
            "ranking": [
                {
                    "movie_id": e.movie_id,
                    "score": round2(e.score),
                    "per_participant": [round2(v) for v in e.per_participant],
                    "genre_affinity": e.genre_affinity,
                }
                for e in self.entries
            ]
        }


def movie_profile(
    movie: MovieRecord,
    weights: ChannelWeights = DEFAULT_WEIGHTS,
    lexicon: EmotionLexicon | None = None,
    kb: ColorEmotionKB | None = None,
) -> EmotionScores:
    """Fused emotion profile for one movie.

    Cached scores take precedence over recomputation so published table rows
    replay bit-exactly without the original media: a cached profile wins
    outright, then cached channel scores, then the live channel pipelines.
    """
    if movie.cached_profile is not None:
        return movie.cached_profile

    cached = movie.cached_channels

    description = cached.description if cached and cached.description is not None else None
    if description is None:
        if lexicon is None:
            raise ProfileError(f"movie {movie.id!r}: no cached description scores and no lexicon")
        description = text_emotions(movie.overview, lexicon)

    soundtrack = cached.soundtrack if cached and cached.soundtrack is not None else None
    if soundtrack is None:
        if movie.soundtrack_labels is None:
            raise ProfileError(f"movie {movie.id!r}: missing soundtrack channel (no labels, no cache)")
        soundtrack = soundtrack_emotions(movie.soundtrack_labels)

    poster = cached.poster if cached and cached.poster is not None else None
    if poster is None:
        image = movie.inline_poster()
        if image is None and movie.poster_path is not None:
            image = decode_poster(movie.poster_path)
        if image is None:
            raise ProfileError(f"movie {movie.id!r}: missing poster channel (no image, no cache)")
        if kb is None:
            raise ProfileError(f"movie {movie.id!r}: poster present but no color KB supplied")
        poster = poster_emotions(image, kb)

    return fuse_channels(poster=poster, soundtrack=soundtrack, description=description, weights=weights)


def recommend(
    req: GroupRequest,
    lexicon: EmotionLexicon | None = None,
    kb: ColorEmotionKB | None = None,
) -> RankedRecommendation:
    """Rank the candidate pool for the group.

    Per candidate i and participant j the score is the Jaccard similarity of
    the thresholded emotion sets of candidate i and participant j's favorite;
    the aggregate is the arithmetic mean over participants.
    """
    favorite_sets = []
    favorite_genres: set[str] = set()
    for participant_id, favorite in req.participants:
        try:
            profile = movie_profile(favorite, req.weights, lexicon, kb)
        except ProfileError as exc:
            raise ProfileError(f"participant {participant_id!r}: {exc}") from None
        favorite_sets.append(to_emotion_set(profile, req.threshold))
        favorite_genres.update(g.lower() for g in favorite.genres)

    candidates = req.candidates
    if req.genre_filter:
        candidates = tuple(
            c for c in candidates if favorite_genres & {g.lower() for g in c.genres}
        )

    entries = []
    for candidate in candidates:
        try:
            profile = movie_profile(candidate, req.weights, lexicon, kb)
        except ProfileError as exc:
            raise ProfileError(f"candidate {candidate.id!r}: {exc}") from None
        candidate_set = to_emotion_set(profile, req.threshold)
        per_participant = tuple(jaccard(candidate_set, fav) for fav in favorite_sets)
        aggregate = sum(per_participant) / len(per_participant)
        affinity = len(favorite_genres & {g.lower() for g in candidate.genres})
        entries.append(
            RankedMovie(
                movie_id=candidate.id,
                score=aggregate,
                per_participant=per_participant,
                genre_affinity=affinity,
            )
        )

    entries.sort(key=lambda e: (-e.score, -e.genre_affinity, e.movie_id))
    return RankedRecommendation(entries=tuple(entries))


def prediction_accuracy(
    predicted: list[EmotionScores],
    human: list[EmotionScores],
    threshold: float = DEFAULT_THRESHOLD,
) -> tuple[list[float], float]:
    """Element-wise set similarity between predicted and human score lists.

    Returns the per-movie Jaccard values and their arithmetic mean.
    """
    if len(predicted) != len(human):
        raise ValueError(
            f"length mismatch: {len(predicted)} predicted vs {len(human)} human score sets"
        )
    if not predicted:
        raise ValueError("need at least one (predicted, human) pair")
    values = [
        jaccard(to_emotion_set(p, threshold), to_emotion_set(h, threshold))
        for p, h in zip(predicted, human)
    ]
    return values, sum(values) / len(values)
