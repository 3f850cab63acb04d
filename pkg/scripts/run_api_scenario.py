#!/usr/bin/env python3
"""Drive the 4-participant reference session against a live server instance.

Boots the HTTP service on a local port with the fixture catalogs, walks the
whole loop (participants -> recommendation -> feedback -> consensus) over
real HTTP, and checks the consensus body against the published group
statistics. Exit code 0 when the body matches.

Run from the repository root:  python scripts/run_api_scenario.py
"""

from __future__ import annotations

import sys
import threading
import time
from pathlib import Path

import requests
import uvicorn

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from film_accord.catalog_ingest import Catalog, load_catalog
from film_accord.service_api import create_app

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
PORT = 8765

PARTICIPANTS = [
    ("participant-1", "the-notebook", 6, 4),
    ("participant-2", "split", 9, 6),
    ("participant-3", "oppenheimer", 5, 5),
    ("participant-4", "barbie", 3, 7),
]


def main() -> int:
    catalog = Catalog()
    pool = load_catalog(FIXTURES / "paper_12.catalog")
    catalog.merge(pool)
    catalog.merge(load_catalog(FIXTURES / "favorites.catalog"))
    app = create_app(catalog)

    server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=PORT, log_level="warning"))
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{PORT}/v1"
    for _ in range(100):
        try:
            requests.get(f"{base}/movies", timeout=1)
            break
        except requests.RequestException:
            time.sleep(0.05)

    try:
        session = requests.post(f"{base}/sessions", json={
            "candidates": [record.id for record in pool]
        }).json()
        session_id = session["id"]
        print(f"session {session_id} created with {len(pool)} candidates")

        for pid, favorite, _, _ in PARTICIPANTS:
            requests.post(f"{base}/sessions/{session_id}/participants",
                          json={"id": pid, "favorite": favorite}).raise_for_status()
        print("participants registered:", ", ".join(p[0] for p in PARTICIPANTS))

        ranking = requests.post(f"{base}/sessions/{session_id}/recommend").json()["ranking"]
        print("top of ranking:", [(r["movie_id"], r["score"]) for r in ranking[:3]])
        print("bottom of ranking:", (ranking[-1]["movie_id"], ranking[-1]["score"]))

        for pid, _, agreement, confidence in PARTICIPANTS:
            requests.post(f"{base}/sessions/{session_id}/feedback", json={
                "participant": pid, "agreement": agreement, "confidence": confidence,
            }).raise_for_status()

        body = requests.get(f"{base}/sessions/{session_id}/consensus").json()
        print(f"consensus: iqr={body['iqr']} mean={body['mean']} "
              f"level={body['level']} verdict={body['verdict']} state={body['state']}")

        ok = (abs(body["iqr"] - 1.18) <= 0.01 and abs(body["mean"] - 5.54) <= 0.01
              and body["level"] == "High")
        print("MATCH" if ok else "MISMATCH", "against the published group statistics")
        return 0 if ok else 1
    finally:
        server.should_exit = True
        thread.join(timeout=5)


if __name__ == "__main__":
    sys.exit(main())
