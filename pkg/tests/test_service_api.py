import pytest
from fastapi.testclient import TestClient

from film_accord.catalog_ingest import Catalog, load_catalog
from film_accord.service_api import ServiceConfig, create_app


@pytest.fixture()
def merged_catalog(fixtures_dir):
    catalog = Catalog()
    catalog.merge(load_catalog(fixtures_dir / "paper_12.catalog"))
    catalog.merge(load_catalog(fixtures_dir / "favorites.catalog"))
    return catalog


@pytest.fixture()
def client(merged_catalog, fis):
    app = create_app(merged_catalog, fis)
    with TestClient(app) as test_client:
        yield test_client


CANDIDATES = [
    "titanic", "bride-wars", "insidious-3", "annabelle-creation",
    "just-go-with-it", "me-before-you", "interstellar", "edge-of-tomorrow",
    "passengers", "dont-breathe-2", "the-proposal", "the-holiday",
]

PARTICIPANTS = [
    ("p1", "the-notebook", 6, 4),
    ("p2", "split", 9, 6),
    ("p3", "oppenheimer", 5, 5),
    ("p4", "barbie", 3, 7),
]


def start_session(client, candidates=None):
    response = client.post("/v1/sessions", json={"candidates": candidates or CANDIDATES})
    assert response.status_code == 201
    return response.json()["id"]


def register_participants(client, session_id):
    for pid, favorite, _, _ in PARTICIPANTS:
        response = client.post(
            f"/v1/sessions/{session_id}/participants",
            json={"id": pid, "name": pid.upper(), "favorite": favorite},
        )
        assert response.status_code == 200, response.text


class TestMovies:
    def test_list_movies(self, client):
        body = client.get("/v1/movies").json()
        ids = {m["id"] for m in body["movies"]}
        assert "titanic" in ids and "barbie" in ids

    def test_movie_emotions(self, client):
        body = client.get("/v1/movies/insidious-3/emotions").json()
        assert body["profile"] == {
            "happy": 0.06, "angry": 0.30, "surprise": 0.04, "sad": 0.25, "fear": 0.47
        }

    def test_unknown_movie_404(self, client):
        assert client.get("/v1/movies/nope/emotions").status_code == 404


class TestSessionFlow:
    def test_full_scenario_returns_reference_consensus(self, client):
        session_id = start_session(client)
        register_participants(client, session_id)

        recommendation = client.post(f"/v1/sessions/{session_id}/recommend")
        assert recommendation.status_code == 200
        ranking = recommendation.json()["ranking"]
        assert len(ranking) == 12
        assert ranking[-1]["movie_id"] == "passengers"

        for pid, _, agreement, confidence in PARTICIPANTS:
            response = client.post(
                f"/v1/sessions/{session_id}/feedback",
                json={"participant": pid, "agreement": agreement, "confidence": confidence},
            )
            assert response.status_code == 200

        body = client.get(f"/v1/sessions/{session_id}/consensus").json()
        assert body["iqr"] == pytest.approx(1.18, abs=0.01)
        assert body["mean"] == pytest.approx(5.54, abs=0.01)
        assert body["level"] == "High"
        assert body["verdict"] == "Accepted"
        assert body["state"] == "ConsensusReached"
        assert len(body["participants"]) == 4

    def test_consensus_before_feedback_409(self, client):
        session_id = start_session(client)
        register_participants(client, session_id)
        client.post(f"/v1/sessions/{session_id}/recommend")
        assert client.get(f"/v1/sessions/{session_id}/consensus").status_code == 409

    def test_feedback_before_recommend_409(self, client):
        session_id = start_session(client)
        register_participants(client, session_id)
        response = client.post(
            f"/v1/sessions/{session_id}/feedback",
            json={"participant": "p1", "agreement": 5, "confidence": 5},
        )
        assert response.status_code == 409

    def test_agreement_out_of_range_422(self, client):
        session_id = start_session(client)
        register_participants(client, session_id)
        client.post(f"/v1/sessions/{session_id}/recommend")
        response = client.post(
            f"/v1/sessions/{session_id}/feedback",
            json={"participant": "p1", "agreement": 11, "confidence": 5},
        )
        assert response.status_code == 422
        detail = response.json()["detail"]
        assert any("agreement" in str(item.get("loc", [])) for item in detail)

    def test_unknown_session_404(self, client):
        assert client.get("/v1/sessions/ghost").status_code == 404
        assert client.post("/v1/sessions/ghost/recommend").status_code == 404

    def test_unknown_favorite_404(self, client):
        session_id = start_session(client)
        response = client.post(
            f"/v1/sessions/{session_id}/participants",
            json={"id": "p1", "favorite": "not-a-movie"},
        )
        assert response.status_code == 404

    def test_recommend_without_participants_409(self, client):
        session_id = start_session(client)
        assert client.post(f"/v1/sessions/{session_id}/recommend").status_code == 409

    def test_session_create_rejects_unknown_candidate(self, client):
        response = client.post("/v1/sessions", json={"candidates": ["nope"]})
        assert response.status_code == 404

    def test_feedback_upsert_is_idempotent(self, client):
        session_id = start_session(client)
        register_participants(client, session_id)
        client.post(f"/v1/sessions/{session_id}/recommend")
        for agreement in (2, 6):
            response = client.post(
                f"/v1/sessions/{session_id}/feedback",
                json={"participant": "p1", "agreement": agreement, "confidence": 4},
            )
        assert response.json()["submitted"] == 1
        view = client.get(f"/v1/sessions/{session_id}").json()
        assert view["feedback_submitted"] == ["p1"]

    def test_partial_consensus_is_effect_free(self, client):
        session_id = start_session(client)
        register_participants(client, session_id)
        client.post(f"/v1/sessions/{session_id}/recommend")
        for pid, _, agreement, confidence in PARTICIPANTS[:2]:
            client.post(
                f"/v1/sessions/{session_id}/feedback",
                json={"participant": pid, "agreement": agreement, "confidence": confidence},
            )
        # Incomplete without the flag: refused.
        assert client.get(f"/v1/sessions/{session_id}/consensus").status_code == 409
        body = client.get(f"/v1/sessions/{session_id}/consensus?partial=true").json()
        assert body["partial"] is True
        assert body["state"] == "Recommended"  # no transition on partial reads
        assert len(body["participants"]) == 2

    def test_reevaluate_loop(self, client):
        session_id = start_session(client)
        register_participants(client, session_id)
        client.post(f"/v1/sessions/{session_id}/recommend")
        # Polarized feedback: high dispersion, verdict ReEvaluate.
        votes = [("p1", 0, 10), ("p2", 0, 10), ("p3", 10, 10), ("p4", 10, 10)]
        for pid, agreement, confidence in votes:
            client.post(
                f"/v1/sessions/{session_id}/feedback",
                json={"participant": pid, "agreement": agreement, "confidence": confidence},
            )
        body = client.get(f"/v1/sessions/{session_id}/consensus").json()
        assert body["verdict"] == "ReEvaluate"
        assert body["state"] == "ReEvaluating"
        # Participants may edit favorites while re-evaluating, then rerun.
        response = client.post(
            f"/v1/sessions/{session_id}/participants",
            json={"id": "p1", "favorite": "split"},
        )
        assert response.status_code == 200
        assert client.post(f"/v1/sessions/{session_id}/recommend").status_code == 200
        view = client.get(f"/v1/sessions/{session_id}").json()
        assert view["state"] == "Recommended"
        assert view["feedback_submitted"] == []  # new round, old feedback cleared

    def test_recommend_after_consensus_409(self, client):
        session_id = start_session(client)
        register_participants(client, session_id)
        client.post(f"/v1/sessions/{session_id}/recommend")
        for pid, _, agreement, confidence in PARTICIPANTS:
            client.post(
                f"/v1/sessions/{session_id}/feedback",
                json={"participant": pid, "agreement": agreement, "confidence": confidence},
            )
        client.get(f"/v1/sessions/{session_id}/consensus")  # settles the round
        assert client.post(f"/v1/sessions/{session_id}/recommend").status_code == 409

    def test_identical_inputs_identical_bodies(self, merged_catalog, fis):
        def run_once():
            app = create_app(merged_catalog, fis)
            with TestClient(app) as client:
                session_id = start_session(client)
                register_participants(client, session_id)
                recommendation = client.post(f"/v1/sessions/{session_id}/recommend").json()
                for pid, _, agreement, confidence in PARTICIPANTS:
                    client.post(
                        f"/v1/sessions/{session_id}/feedback",
                        json={"participant": pid, "agreement": agreement, "confidence": confidence},
                    )
                consensus = client.get(f"/v1/sessions/{session_id}/consensus").json()
                return recommendation, consensus

        first_rec, first_con = run_once()
        second_rec, second_con = run_once()
        assert first_rec == second_rec
        assert first_con == second_con


class TestSnapshotPersistence:
    def test_sessions_survive_restart(self, merged_catalog, fis, tmp_path):
        state_file = str(tmp_path / "sessions.json")
        config = ServiceConfig(state_file=state_file)
        app = create_app(merged_catalog, fis, config=config)
        with TestClient(app) as client:
            session_id = start_session(client)
            register_participants(client, session_id)
        app2 = create_app(merged_catalog, fis, config=config)
        with TestClient(app2) as client:
            view = client.get(f"/v1/sessions/{session_id}")
            assert view.status_code == 200
            assert len(view.json()["participants"]) == 4
