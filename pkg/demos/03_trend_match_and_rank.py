"""Score draft videos against the trending-topics list and rank them.

    python demos/03_trend_match_and_rank.py

Shows the text side of the toolkit: tokenization, phrase embeddings,
cosine match against live topics, and the boosted ranking that blends
predicted views with topical fit.
"""

from pathlib import Path
from types import SimpleNamespace

from tubepulse.trendrank import (
    keyword_text,
    load_embeddings,
    load_topics,
    match_score,
    phrase_vector,
    rank_score,
    tokenize,
)

DATA = Path(__file__).resolve().parents[1] / "data"

DRAFTS = [
    SimpleNamespace(
        title="Eurovision 2018 grand final reaction",
        tags=("eurovision", "song contest"),
        description="",
        predicted=500_000,
    ),
    SimpleNamespace(
        title="Royal wedding highlights and arrivals",
        tags=("royal", "wedding"),
        description="",
        predicted=800_000,
    ),
    SimpleNamespace(
        title="My sourdough starter week 3 update",
        tags=("baking", "bread"),
        description="",
        predicted=2_000_000,
    ),
]


def main() -> None:
    table = load_embeddings(DATA / "mini_embeddings.txt")
    topics = load_topics(DATA / "trending_topics.txt")
    print(f"embeddings: {len(table)} words, {table.dim} dimensions")
    print(f"topics as of {topics.fetched_at.date()}:")
    for t in topics.topics:
        print(f"  - {t}")

    print("\ntokenizer at work:")
    title = DRAFTS[0].title
    print(f"  {title!r} -> {tokenize(title)}")

    print("\nmatch and rank (beta=0.5):")
    ranked = []
    for draft in DRAFTS:
        vec, oov = phrase_vector(keyword_text(draft), table)
        report = match_score(draft, topics, table)
        ranked.append((draft, rank_score(draft.predicted, report, beta=0.5)))
        covered = "none" if vec is None else f"{table.dim}-d phrase vector"
        print(f"  {draft.title!r}")
        print(f"    vector: {covered}, oov: {list(oov)}")

    print(f"\n{'rank':>4}  {'predicted':>10}  {'match':>6}  "
          f"{'rank_score':>12}  best topic")
    ranked.sort(key=lambda pair: -pair[1].rank_score)
    for i, (draft, rr) in enumerate(ranked, start=1):
        best = rr.match.best_topic or "-"
        print(f"{i:>4}  {draft.predicted:>10,}  {rr.match.match_score:>6.3f}  "
              f"{rr.rank_score:>12,.0f}  {best}")
        print(f"      {draft.title}")

    # A draft that matches the moment can outrank one with more raw reach.
    euro = DRAFTS[0]
    report = match_score(euro, topics, table)
    print("\nhow beta changes the story for the Eurovision draft:")
    for beta in (0.0, 0.25, 0.5, 1.0):
        rr = rank_score(euro.predicted, report, beta=beta)
        print(f"  beta={beta:<5} rank_score={rr.rank_score:,.0f}")


if __name__ == "__main__":
    main()
