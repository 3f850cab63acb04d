#!/usr/bin/env python3
"""Regenerate the fixture files under fixtures/.

Published table rows are copied verbatim and tagged provenance "file";
every row the source tables elide is reconstructed here and tagged
"synthetic-fixture". The script validates each reconstruction against the
properties the fixtures must exhibit (thresholded set sizes, set-similarity
values, corpus means, survey correlation targets) and refuses to write
fixtures that drift.

Run from the repository root:  python scripts/build_fixtures.py
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from film_accord.analytics import survey_emotion_correlation
from film_accord.emotion_model import (
    EMOTIONS,
    Emotion,
    EmotionScores,
    fuse_channels,
    jaccard,
    to_emotion_set,
)

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

H, A, SU, SA, F = "happy", "angry", "surprise", "sad", "fear"


def s(h=0.0, a=0.0, su=0.0, sa=0.0, f=0.0) -> dict:
    return {H: h, A: a, SU: su, SA: sa, F: f}


def fused_set(channels: dict, threshold=0.05) -> frozenset:
    fused = fuse_channels(
        poster=EmotionScores.from_mapping(channels["poster"]),
        soundtrack=EmotionScores.from_mapping(channels["soundtrack"]),
        description=EmotionScores.from_mapping(channels["description"]),
    )
    return to_emotion_set(fused, threshold)


def names(es) -> set:
    return {e.value for e in es}


# --- candidate pool (published rows + reconstructions) -----------------------

# Published channel rows: Insidious 3, Annabelle: Creation, Me Before You.
PRINTED_CANDIDATES = {
    "insidious-3": {
        "description": s(h=0, a=0.12, su=0.0, sa=0.38, f=0.5),
        "soundtrack": s(h=0.0, a=0.5, su=0.0, sa=0.0, f=0.5),
        "poster": s(h=0.33, a=0.43, su=0.25, sa=0.38, f=0.33),
    },
    "annabelle-creation": {
        "description": s(h=0.16, a=0.05, su=0.21, sa=0.16, f=0.42),
        "soundtrack": s(h=0, a=0.86, su=0, sa=0, f=0.14),
        "poster": s(h=0.5, a=0.3, su=0.3, sa=0.56, f=0.5),
    },
    "me-before-you": {
        "description": s(h=0, a=0.06, su=0.12, sa=0.62, f=0.19),
        "soundtrack": s(h=0.67, a=0.33, su=0.0, sa=0.0, f=0.0),
        "poster": s(h=0.67, a=0.63, su=0.44, sa=0.56, f=0.67),
    },
}

# Reconstructed channel rows. Target fused emotion set per movie is chosen so
# the candidate-vs-survey similarity reproduces the published per-movie value
# and the group scenario keeps its published shape (Passengers strictly last).
SYNTHETIC_CANDIDATES = {
    # target set {H, Su, Sa, F}; survey identical -> similarity 1.0
    "titanic": {
        "description": s(h=0.3, su=0.1, sa=0.4, f=0.2),
        "soundtrack": s(h=0.4, su=0.2, sa=0.4),
        "poster": s(h=0.5, a=0.04, su=0.3, sa=0.4, f=0.3),
    },
    # target set {H, A, Su}; survey all five -> 3/5 = 0.6
    "bride-wars": {
        "description": s(h=0.5, a=0.3, su=0.2),
        "soundtrack": s(h=0.8, su=0.2),
        "poster": s(h=0.6, a=0.3, su=0.4, sa=0.04, f=0.04),
    },
    # target set {H, Su, Sa}; survey {H, Su, A} -> 2/4 = 0.5
    "just-go-with-it": {
        "description": s(h=0.6, su=0.2, sa=0.2),
        "soundtrack": s(h=1.0),
        "poster": s(h=0.7, su=0.4, sa=0.3, a=0.04),
    },
    # target set {H, A, Su, Sa, F} minus... 4 of 5 {A, Su, Sa, F}; survey all five -> 4/5 = 0.8
    "interstellar": {
        "description": s(a=0.1, su=0.3, sa=0.4, f=0.2),
        "soundtrack": s(su=0.4, sa=0.6),
        "poster": s(h=0.04, a=0.3, su=0.4, sa=0.4, f=0.3),
    },
    # target set {A, Su, F}... size 4 {A, Su, Sa, F}; survey identical -> 1.0
    "edge-of-tomorrow": {
        "description": s(a=0.4, su=0.2, f=0.4),
        "soundtrack": s(a=0.5, su=0.25, sa=0.25),
        "poster": s(a=0.4, su=0.3, sa=0.3, f=0.4, h=0.04),
    },
    # target set {H, Sa} (smallest pool entry); survey identical -> 1.0
    "passengers": {
        "description": s(h=0.5, sa=0.5),
        "soundtrack": s(h=1.0),
        "poster": s(h=0.3, sa=0.2, a=0.04, su=0.04),
    },
    # target set {A, Sa, F}; survey identical -> 1.0
    "dont-breathe-2": {
        "description": s(a=0.3, sa=0.2, f=0.5),
        "soundtrack": s(a=0.5, f=0.5),
        "poster": s(a=0.4, sa=0.3, f=0.5, h=0.04),
    },
    # target set {H, Su, Sa}; survey all five -> 0.6
    "the-proposal": {
        "description": s(h=0.6, su=0.3, sa=0.1),
        "soundtrack": s(h=0.7, su=0.3),
        "poster": s(h=0.6, su=0.4, sa=0.3, f=0.04),
    },
    # target set {H, Su, Sa}; survey all five -> 0.6
    "the-holiday": {
        "description": s(h=0.5, su=0.2, sa=0.3),
        "soundtrack": s(h=0.6, sa=0.4),
        "poster": s(h=0.5, su=0.35, sa=0.3, a=0.04),
    },
}

CANDIDATE_META = {
    "titanic": ("Titanic", ["Drama", "Romance"]),
    "bride-wars": ("Bride Wars", ["Comedy", "Romance"]),
    "insidious-3": ("Insidious: Chapter 3", ["Horror", "Thriller"]),
    "annabelle-creation": ("Annabelle: Creation", ["Horror", "Thriller"]),
    "just-go-with-it": ("Just Go With It", ["Comedy", "Romance"]),
    "me-before-you": ("Me Before You", ["Drama", "Romance"]),
    "interstellar": ("Interstellar", ["Science Fiction", "Drama", "Adventure"]),
    "edge-of-tomorrow": ("Edge of Tomorrow", ["Action", "Science Fiction"]),
    "passengers": ("Passengers", ["Science Fiction", "Drama", "Romance"]),
    "dont-breathe-2": ("Don't Breathe 2", ["Horror", "Thriller"]),
    "the-proposal": ("The Proposal", ["Comedy", "Romance"]),
    "the-holiday": ("The Holiday", ["Comedy", "Romance"]),
}

# Table order of the published per-movie similarity row.
TABLE_ORDER = [
    "titanic", "bride-wars", "insidious-3", "annabelle-creation",
    "just-go-with-it", "me-before-you", "interstellar", "edge-of-tomorrow",
    "passengers", "dont-breathe-2", "the-proposal", "the-holiday",
]
PUBLISHED_SIMILARITY = [1.0, 0.6, 0.4, 0.8, 0.5, 0.8, 0.8, 1.0, 1.0, 1.0, 0.6, 0.6]

# Published survey score rows (others reconstructed below).
PRINTED_SURVEY = {
    "insidious-3": s(h=0.05, a=0.09, su=0.23, sa=0.05, f=0.59),
    "annabelle-creation": s(h=0.0, a=0.03, su=0.26, sa=0.06, f=0.65),
    "me-before-you": s(h=0.35, a=0.09, su=0.17, sa=0.3, f=0.09),
}

ALL_FIVE = frozenset(Emotion)


def _survey_from_set(members: frozenset) -> dict:
    """Even split over the member emotions, zero elsewhere."""
    share = round(1.0 / len(members), 2)
    out = s()
    for e in members:
        out[e.value] = share
    return out


SYNTHETIC_SURVEY_SETS = {
    "titanic": frozenset({Emotion.HAPPY, Emotion.SURPRISE, Emotion.SAD, Emotion.FEAR}),
    "bride-wars": ALL_FIVE,
    "just-go-with-it": frozenset({Emotion.HAPPY, Emotion.SURPRISE, Emotion.ANGRY}),
    "interstellar": ALL_FIVE,
    "edge-of-tomorrow": frozenset({Emotion.ANGRY, Emotion.SURPRISE, Emotion.SAD, Emotion.FEAR}),
    "passengers": frozenset({Emotion.HAPPY, Emotion.SAD}),
    "dont-breathe-2": frozenset({Emotion.ANGRY, Emotion.SAD, Emotion.FEAR}),
    "the-proposal": ALL_FIVE,
    "the-holiday": ALL_FIVE,
}

# Published favorite-movie channel rows (all four are printed).
FAVORITES = {
    "the-notebook": {
        "title": "The Notebook",
        "genres": ["Romance", "Drama"],
        "channels": {
            "description": s(h=0.45, a=0.05, su=0.15, sa=0.25, f=0.1),
            "soundtrack": s(h=0.25, a=0.0, su=0, sa=0.5, f=0.25),
            "poster": s(h=0.56, a=0.33, su=0.71, sa=0.44, f=0.56),
        },
    },
    "split": {
        "title": "Split",
        "genres": ["Horror", "Thriller"],
        "channels": {
            "description": s(h=0.0, a=0.22, su=0.11, sa=0.22, f=0.44),
            "soundtrack": s(h=0.5, a=0.25, su=0, sa=0.25, f=0.0),
            "poster": s(h=0.56, a=0.5, su=0.33, sa=0.44, f=0.56),
        },
    },
    "oppenheimer": {
        "title": "Oppenheimer",
        "genres": ["Drama", "History"],
        "channels": {
            "description": s(h=0.25, a=0.0, su=0.25, sa=0.0, f=0.5),
            "soundtrack": s(h=0.0, a=1.0, su=0, sa=0.0, f=0.0),
            "poster": s(h=0.33, a=0.43, su=0.25, sa=0.38, f=0.33),
        },
    },
    "barbie": {
        "title": "Barbie",
        "genres": ["Comedy", "Adventure", "Fantasy"],
        "channels": {
            "description": s(h=0.06, a=0.03, su=0.09, sa=0.41, f=0.41),
            "soundtrack": s(h=0.0, a=0.0, su=1, sa=0.0, f=0.0),
            "poster": s(h=0.36, a=0.3, su=0.3, sa=0.27, f=0.36),
        },
    },
}


def build_paper_catalogs() -> None:
    records = []
    target_sets = {}
    for movie_id in TABLE_ORDER:
        title, genres = CANDIDATE_META[movie_id]
        printed = movie_id in PRINTED_CANDIDATES
        channels = PRINTED_CANDIDATES.get(movie_id) or SYNTHETIC_CANDIDATES[movie_id]
        target_sets[movie_id] = fused_set(channels)
        records.append({
            "id": movie_id,
            "title": title,
            "genres": genres,
            "cached_channels": channels,
            "provenance": "file" if printed else "synthetic-fixture",
        })

    # Published anchor: the Insidious 3 predicted set includes four emotions.
    assert names(target_sets["insidious-3"]) == {H, A, SA, F}, names(target_sets["insidious-3"])
    assert names(target_sets["annabelle-creation"]) == {H, A, SU, SA, F}
    assert names(target_sets["me-before-you"]) == {H, A, SU, SA, F}
    assert len(target_sets["passengers"]) == 2
    assert len(target_sets["titanic"]) == 4

    survey = {}
    for movie_id in TABLE_ORDER:
        if movie_id in PRINTED_SURVEY:
            survey[movie_id] = {"scores": PRINTED_SURVEY[movie_id], "provenance": "file"}
        else:
            survey[movie_id] = {
                "scores": _survey_from_set(SYNTHETIC_SURVEY_SETS[movie_id]),
                "provenance": "synthetic-fixture",
            }

    # The reconstruction must reproduce the published similarity row wherever
    # the source printed both sides; the two rows where the published tables
    # disagree with their own value (annabelle-creation: printed 0.8, computes
    # 0.6; me-before-you: printed 0.8, computes 1.0) are kept as computed.
    expected = dict(zip(TABLE_ORDER, PUBLISHED_SIMILARITY))
    expected["annabelle-creation"] = 0.6
    expected["me-before-you"] = 1.0
    computed = {}
    for movie_id in TABLE_ORDER:
        sv = to_emotion_set(EmotionScores.from_mapping(survey[movie_id]["scores"]), 0.05)
        computed[movie_id] = jaccard(target_sets[movie_id], sv)
        assert abs(computed[movie_id] - expected[movie_id]) < 1e-9, (
            movie_id, computed[movie_id], expected[movie_id])
    mean = sum(computed.values()) / len(computed)
    assert abs(mean - 9.1 / 12) < 1e-9, mean

    (FIXTURES / "paper_12.catalog").write_text(
        json.dumps({"schema": 1, "records": records}, indent=2) + "\n", "utf-8")

    fav_records = []
    for movie_id, spec in FAVORITES.items():
        fused = fuse_channels(
            poster=EmotionScores.from_mapping(spec["channels"]["poster"]),
            soundtrack=EmotionScores.from_mapping(spec["channels"]["soundtrack"]),
            description=EmotionScores.from_mapping(spec["channels"]["description"]),
        )
        # All four published favorite profiles exceed the threshold everywhere.
        assert to_emotion_set(fused, 0.05) == ALL_FIVE, movie_id
        fav_records.append({
            "id": movie_id,
            "title": spec["title"],
            "genres": spec["genres"],
            "cached_channels": spec["channels"],
            "provenance": "file",
        })
    (FIXTURES / "favorites.catalog").write_text(
        json.dumps({"schema": 1, "records": fav_records}, indent=2) + "\n", "utf-8")

    (FIXTURES / "survey_scores.json").write_text(
        json.dumps({"movies": [
            {"id": movie_id, **survey[movie_id]} for movie_id in TABLE_ORDER
        ]}, indent=2) + "\n", "utf-8")


def build_feedback_fixture() -> None:
    rows = [
        {"participant": "participant-1", "agreement": 6, "confidence": 4},
        {"participant": "participant-2", "agreement": 9, "confidence": 6},
        {"participant": "participant-3", "agreement": 5, "confidence": 5},
        {"participant": "participant-4", "agreement": 3, "confidence": 7},
    ]
    (FIXTURES / "table8.feedback").write_text(json.dumps(rows, indent=2) + "\n", "utf-8")

    group = {
        "participants": [
            {"id": "participant-1", "favorite": "the-notebook"},
            {"id": "participant-2", "favorite": "split"},
            {"id": "participant-3", "favorite": "oppenheimer"},
            {"id": "participant-4", "favorite": "barbie"},
        ],
        "candidates": TABLE_ORDER,
        "threshold": 0.05,
    }
    (FIXTURES / "group_request.json").write_text(json.dumps(group, indent=2) + "\n", "utf-8")


GENRE_POOL = [
    "Action", "Adventure", "Animation", "Comedy", "Crime", "Drama", "Family",
    "Fantasy", "History", "Horror", "Music", "Mystery", "Romance",
    "Science Fiction", "Thriller", "War", "Western",
]

# Per-emotion sampling bands for the synthetic popular-movie corpus, shaped to
# the qualitative findings: fear strongest, anger/sadness mid, positive
# emotions weakest with corpus means under 0.2.
EMOTION_BANDS = {
    "fear": (0.15, 0.75),
    "angry": (0.10, 0.55),
    "sad": (0.10, 0.55),
    "happy": (0.02, 0.32),
    "surprise": (0.02, 0.30),
}


def build_top100() -> None:
    rng = random.Random(20240422)
    records = []
    for rank in range(1, 101):
        profile = {}
        for emotion, (lo, hi) in EMOTION_BANDS.items():
            profile[emotion] = round(rng.uniform(lo, hi), 2)
        genres = rng.sample(GENRE_POOL, rng.randint(1, 3))
        records.append({
            "id": f"popular-{rank:03d}",
            "title": f"Popular Movie {rank:03d}",
            "genres": genres,
            "popularity_rank": rank,
            "cached_profile": profile,
            "provenance": "synthetic-fixture",
        })
    means = {
        e: sum(r["cached_profile"][e] for r in records) / len(records)
        for e in EMOTION_BANDS
    }
    assert means["fear"] > means["angry"] > means["happy"], means
    assert means["fear"] > means["sad"] > means["surprise"], means
    assert means["happy"] < 0.2 and means["surprise"] < 0.2, means
    (FIXTURES / "top100.catalog").write_text(
        json.dumps({"schema": 1, "records": records}, indent=2) + "\n", "utf-8")


# Correlation targets from the survey analysis, matched within 0.02.
# Surprise-fear is taken as negative: the source discussion lists the pair
# among the negative correlations, and the positive reading of its magnitude
# together with happy-surprise +0.33 and happy-fear -0.77 forms a matrix
# with negative determinant, which no dataset can realize.
CORRELATION_TARGETS = {
    ("happy", "surprise"): 0.33,
    ("happy", "fear"): -0.77,
    ("happy", "angry"): -0.38,
    ("angry", "fear"): 0.20,
    ("surprise", "fear"): -0.43,
}


def build_survey_responses() -> None:
    import numpy as np

    n = 130
    order = [e.value for e in EMOTIONS]
    index = {name: i for i, name in enumerate(order)}
    pairs = [(index[a], index[b], t) for (a, b), t in CORRELATION_TARGETS.items()]

    def loss(matrix: "np.ndarray") -> float:
        with np.errstate(invalid="ignore"):
            corr = np.corrcoef(matrix.T)
        total = 0.0
        for i, j, target in pairs:
            value = corr[i, j]
            if not np.isfinite(value):
                return float("inf")
            total += (value - target) ** 2
        return total

    # Start from a structured split (happy-leaning vs fear-leaning viewers),
    # then local-search single-bit flips until every target is matched.
    def seeded_start(r) -> "np.ndarray":
        rows = []
        for _ in range(n):
            if r.random() < 0.45:
                happy, fear = 1, (1 if r.random() < 0.08 else 0)
                surprise = 1 if r.random() < 0.55 else 0
                angry = 1 if r.random() < 0.15 else 0
            else:
                happy, fear = 0, (1 if r.random() < 0.85 else 0)
                surprise = 1 if r.random() < 0.30 else 0
                angry = 1 if r.random() < 0.45 else 0
            sad = 1 if r.random() < 0.4 else 0
            rows.append([happy, angry, surprise, sad, fear])
        return np.array(rows, dtype=float)

    best_rows, best = None, float("inf")
    for restart in range(6):
        r = random.Random(100 + restart)
        matrix = seeded_start(r)
        current = loss(matrix)
        for _ in range(40000):
            i = r.randrange(n)
            j = r.randrange(len(order))
            matrix[i, j] = 1.0 - matrix[i, j]
            candidate = loss(matrix)
            if candidate <= current:
                current = candidate
            else:
                matrix[i, j] = 1.0 - matrix[i, j]
            if current < 1e-7:
                break
        if current < best:
            best_rows, best = matrix.copy(), current
        if best < 1e-7:
            break
    rows = [[int(v) for v in row] for row in best_rows]

    # Final check through the library's own correlation path.
    got = survey_emotion_correlation(rows)
    for (a, b), target in CORRELATION_TARGETS.items():
        value = got[a][b]
        assert value is not None and abs(value - target) <= 0.02, ((a, b), value, target)
    (FIXTURES / "survey_responses.json").write_text(json.dumps(rows) + "\n", "utf-8")
    print("survey correlations:",
          {f"{a}-{b}": round(got[a][b], 3) for (a, b) in CORRELATION_TARGETS})


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    build_paper_catalogs()
    build_feedback_fixture()
    build_top100()
    build_survey_responses()
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
