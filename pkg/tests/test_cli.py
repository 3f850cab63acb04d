import json

import pytest

from film_accord.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestConsensusCommand:
    def test_reference_batch_ends_with_level(self, capsys, fixtures_dir):
        code, out, _ = run(capsys, "consensus", "--feedback", str(fixtures_dir / "table8.feedback"))
        assert code == 0
        assert out.rstrip().endswith("level: High")
        assert "iqr: 1.18" in out
        assert "mean: 5.54" in out

    def test_structured_output(self, capsys, fixtures_dir):
        code, out, _ = run(
            capsys, "consensus", "--feedback", str(fixtures_dir / "table8.feedback"),
            "--format", "structured",
        )
        assert code == 0
        body = json.loads(out)
        assert body["level"] == "High"
        assert body["iqr"] == pytest.approx(1.18, abs=0.01)

    def test_missing_file_is_io_error(self, capsys, tmp_path):
        code, _, err = run(capsys, "consensus", "--feedback", str(tmp_path / "nope.json"))
        assert code == 2
        assert "nope.json" in err

    def test_invalid_batch_is_validation_error(self, capsys, tmp_path):
        path = tmp_path / "bad.feedback"
        path.write_text(json.dumps([{"participant": "a", "agreement": 12, "confidence": 3}]))
        code, _, err = run(capsys, "consensus", "--feedback", str(path))
        assert code == 1
        assert "bad.feedback" in err

    def test_custom_fis_flag(self, capsys, fixtures_dir, tmp_path):
        from film_accord.fuzzy_inference import default_definition

        path = tmp_path / "custom_fis.json"
        path.write_text(json.dumps(default_definition()))
        code, out, _ = run(
            capsys, "consensus", "--feedback", str(fixtures_dir / "table8.feedback"),
            "--fis", str(path),
        )
        assert code == 0
        assert "level: High" in out


class TestAccuracyCommand:
    def test_insidious_only_pair(self, capsys, tmp_path, paper_catalog, survey_scores):
        from film_accord.recommender import movie_profile

        predicted_path = tmp_path / "predicted.json"
        human_path = tmp_path / "human.json"
        profile = movie_profile(paper_catalog.get("insidious-3"))
        predicted_path.write_text(json.dumps([{"id": "insidious-3", "scores": profile.as_dict()}]))
        human_path.write_text(json.dumps([
            {"id": "insidious-3", "scores": survey_scores["insidious-3"].as_dict()}
        ]))
        code, out, _ = run(
            capsys, "accuracy", "--predicted", str(predicted_path), "--human", str(human_path)
        )
        assert code == 0
        assert "mean: 0.40" in out

    def test_length_mismatch_is_validation_error(self, capsys, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        a.write_text(json.dumps([{"happy": 0.5}]))
        b.write_text(json.dumps([]))
        code, _, err = run(capsys, "accuracy", "--predicted", str(a), "--human", str(b))
        assert code == 1
        assert "mismatch" in err or "pair" in err


class TestRecommendCommand:
    def test_fixture_group(self, capsys, fixtures_dir):
        code, out, _ = run(
            capsys, "recommend",
            "--group", str(fixtures_dir / "group_request.json"),
            "--catalog", str(fixtures_dir / "paper_12.catalog"),
            "--catalog", str(fixtures_dir / "favorites.catalog"),
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("rank")
        assert "passengers" in lines[-1]
        assert "0.40" in lines[-1]

    def test_structured_round_trips(self, capsys, fixtures_dir):
        code, out, _ = run(
            capsys, "recommend",
            "--group", str(fixtures_dir / "group_request.json"),
            "--catalog", str(fixtures_dir / "paper_12.catalog"),
            "--catalog", str(fixtures_dir / "favorites.catalog"),
            "--format", "structured",
        )
        assert code == 0
        ranking = json.loads(out)["ranking"]
        assert len(ranking) == 12
        assert ranking[0]["score"] >= ranking[-1]["score"]
        assert all(len(entry["per_participant"]) == 4 for entry in ranking)

    def test_unknown_candidate_is_validation_error(self, capsys, tmp_path, fixtures_dir):
        group = {
            "participants": [{"id": "p", "favorite": "the-notebook"}],
            "candidates": ["missing-movie"],
        }
        path = tmp_path / "group.json"
        path.write_text(json.dumps(group))
        code, _, err = run(
            capsys, "recommend", "--group", str(path),
            "--catalog", str(fixtures_dir / "favorites.catalog"),
        )
        assert code == 1
        assert "missing-movie" in err

    def test_group_file_weights_and_inline_favorite(self, capsys, tmp_path, fixtures_dir):
        group = {
            "participants": [{
                "id": "p",
                "favorite": {
                    "id": "inline-fav", "title": "Inline Favorite",
                    "genres": ["Drama"],
                    "cached_profile": {"happy": 0.5, "sad": 0.5},
                },
            }],
            "candidates": ["titanic", "passengers"],
            "weights": [2, 4, 6],
        }
        path = tmp_path / "group.json"
        path.write_text(json.dumps(group))
        code, out, _ = run(
            capsys, "recommend", "--group", str(path),
            "--catalog", str(fixtures_dir / "paper_12.catalog"),
            "--format", "structured",
        )
        assert code == 0
        ranking = json.loads(out)["ranking"]
        assert {entry["movie_id"] for entry in ranking} == {"titanic", "passengers"}


class TestAnalyzeCommand:
    def test_cached_channel_movie(self, capsys, tmp_path):
        movie = {
            "id": "demo", "title": "Demo",
            "cached_channels": {
                "poster": {"happy": 0.33, "angry": 0.43, "surprise": 0.25, "sad": 0.38, "fear": 0.33},
                "soundtrack": {"angry": 0.5, "fear": 0.5},
                "description": {"angry": 0.12, "sad": 0.38, "fear": 0.5},
            },
        }
        path = tmp_path / "movie.json"
        path.write_text(json.dumps(movie))
        code, out, _ = run(capsys, "analyze", str(path))
        assert code == 0
        assert "0.47" in out  # fused fear column

    def test_structured_profile(self, capsys, tmp_path):
        movie = {
            "id": "demo", "title": "Demo",
            "cached_profile": {"happy": 0.5, "sad": 0.5},
        }
        path = tmp_path / "movie.json"
        path.write_text(json.dumps(movie))
        code, out, _ = run(capsys, "analyze", str(path), "--format", "structured")
        assert code == 0
        assert json.loads(out)["profile"]["happy"] == 0.5


class TestCorpusStatsCommand:
    def test_top100_fixture(self, capsys, fixtures_dir):
        code, out, _ = run(
            capsys, "corpus-stats", "--catalog", str(fixtures_dir / "top100.catalog")
        )
        assert code == 0
        assert "emotion means along popularity ranking" in out
        assert "genre x emotion" in out
        assert "emotion distribution" in out

    def test_structured_with_survey(self, capsys, fixtures_dir):
        code, out, _ = run(
            capsys, "corpus-stats",
            "--catalog", str(fixtures_dir / "top100.catalog"),
            "--survey", str(fixtures_dir / "survey_responses.json"),
            "--format", "structured",
        )
        assert code == 0
        body = json.loads(out)
        assert body["survey_correlation"]["happy"]["fear"] == pytest.approx(-0.77, abs=0.02)
        assert sum(body["emotion_distribution"].values()) == pytest.approx(1.0, abs=0.05)

    def test_catalog_without_ranks_is_validation_error(self, capsys, fixtures_dir):
        code, _, err = run(
            capsys, "corpus-stats", "--catalog", str(fixtures_dir / "paper_12.catalog")
        )
        assert code == 1
        assert "popularity_rank" in err
