"""Stand up the HTTP service in-process and play what-if with a draft.

    python demos/04_what_if_service.py

Trains a quick model, boots the API on a free local port, then asks the
same questions a creator would: what does this draft earn, and which of
two titles should I publish?
"""

import json
import socket
import threading
import time
import urllib.request
from pathlib import Path

import uvicorn

from tubepulse.ensemble import BoostParams, TreeParams
from tubepulse.evaluation import train_and_score
from tubepulse.features import POST_UPLOAD, PRE_UPLOAD, build_matrix
from tubepulse.ingest import parse_csv
from tubepulse.server import ServerState, create_app
from tubepulse.trendrank import load_embeddings, load_topics

DATA = Path(__file__).resolve().parents[1] / "data"

DRAFT = {
    "title": "Eurovision 2018 grand final reaction",
    "description": "Watching the grand final live with the fan club.",
    "tags": ["eurovision", "song contest", "reaction"],
    "category_id": 24,
    "published_at": "2018-05-12T20:00:00Z",
    "as_of": "2018-05-14T08:00:00Z",
    "likes": 1800,
    "dislikes": 40,
    "comment_count": 300,
}


def call(port: int, route: str, payload=None) -> dict:
    url = f"http://127.0.0.1:{port}{route}"
    if payload is None:
        req = urllib.request.Request(url)
    else:
        req = urllib.request.Request(
            url, data=json.dumps(payload).encode(),
            headers={"Content-Type": "application/json"},
        )
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read())


def main() -> None:
    records, _ = parse_csv(DATA / "synthetic_200.csv")
    params = BoostParams(n_rounds=40, eta=0.15, tree=TreeParams(max_depth=4))
    state = ServerState(
        embeddings=load_embeddings(DATA / "mini_embeddings.txt"),
        topics=load_topics(DATA / "trending_topics.txt"),
    )
    for profile in (POST_UPLOAD, PRE_UPLOAD):
        matrix = build_matrix(records, profile)
        model, _ = train_and_score("boosted", matrix, params=params,
                                   seed=7, transform="log1p")
        state.register_model(model)
        print(f"trained {profile.name} model ({model.version})")

    # Bind port 0 to find a free port, then hand it to uvicorn.
    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
    server = uvicorn.Server(uvicorn.Config(
        create_app(state), host="127.0.0.1", port=port, log_level="warning"))
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    while not server.started:
        time.sleep(0.02)
    print(f"service listening on port {port}")

    health = call(port, "/api/health")
    print(f"health: {health['status']}, topics loaded: {health['topics_count']}")

    predicted = call(port, "/api/predict", DRAFT)
    print(f"\npredicted views for the draft: {predicted['predicted_views']:,} "
          f"({predicted['profile_used']} profile)")

    # What-if: same draft before upload, so no engagement numbers yet.
    pre = {k: v for k, v in DRAFT.items()
           if k not in ("likes", "dislikes", "comment_count")}
    early = call(port, "/api/predict", pre)
    print(f"same draft scored pre-upload: {early['predicted_views']:,} "
          f"({early['profile_used']} profile)")

    # Which of two titles should go live? Rank both and read the scores.
    variant = dict(DRAFT, title="We watched the song contest final so you don't have to")
    print("\ntitle shoot-out via /api/rank:")
    for candidate in (DRAFT, variant):
        ranked = call(port, "/api/rank", candidate)
        print(f"  {candidate['title']!r}")
        print(f"    predicted {ranked['predicted_views']:>9,}  "
              f"match {ranked['match_score']:.3f}  rank_score {ranked['rank_score']:,.0f}")

    server.should_exit = True
    thread.join(timeout=5)
    print("\nservice stopped")


if __name__ == "__main__":
    main()
