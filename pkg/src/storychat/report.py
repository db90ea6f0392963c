"""Graph reports: degree tables and histogram figures.

`graph-stats` prints degree histograms for a story's graph and, when an
output directory is given, writes `degrees.csv` plus PNG histograms of
question and paragraph degrees (before and after pruning).
"""

from __future__ import annotations

import csv
from collections import Counter
from pathlib import Path

from .pq_graph import PQGraph, prune


def degree_rows(unpruned: PQGraph, pruned: PQGraph) -> list[dict]:
    rows = []
    for pid in sorted(unpruned.paragraph_ids):
        rows.append(
            {
                "node_id": pid,
                "node_kind": "paragraph",
                "degree_unpruned": unpruned.paragraph_degree(pid),
                "degree_pruned": pruned.paragraph_degree(pid),
            }
        )
    for qid in sorted(unpruned.question_texts):
        rows.append(
            {
                "node_id": qid,
                "node_kind": "question",
                "degree_unpruned": unpruned.question_importance(qid),
                "degree_pruned": (
                    pruned.question_importance(qid) if qid in pruned.q_adj else 0
                ),
            }
        )
    return rows


def _histogram(counts: Counter) -> list[str]:
    lines = []
    for degree in sorted(counts):
        n = counts[degree]
        lines.append(f"  degree {degree}: {'#' * min(n, 60)} {n}")
    return lines


def format_stats(unpruned: PQGraph, pruned: PQGraph) -> str:
    cover = pruned.covering_questions or ()
    lines = [
        f"story {unpruned.story_id}: {len(unpruned.paragraph_ids)} paragraphs, "
        f"{len(unpruned.question_texts)} candidate questions, "
        f"{len(unpruned.edges)} edges, cover of {len(cover)} questions",
        "question degree histogram (pruned graph):",
    ]
    q_counts = Counter(pruned.question_importance(q) for q in pruned.q_adj)
    lines.extend(_histogram(q_counts) or ["  (no questions)"])
    lines.append("paragraph degree histogram (pruned graph):")
    p_counts = Counter(pruned.paragraph_degree(p) for p in pruned.p_adj)
    lines.extend(_histogram(p_counts) or ["  (no paragraphs)"])
    return "\n".join(lines)


def write_report(unpruned: PQGraph, out_dir: str | Path) -> list[Path]:
    """Write degrees.csv and two histogram PNGs; returns the paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    pruned = prune(unpruned)
    written = []

    csv_path = out / "degrees.csv"
    rows = degree_rows(unpruned, pruned)
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["node_id", "node_kind", "degree_unpruned", "degree_pruned"]
        )
        writer.writeheader()
        writer.writerows(rows)
    written.append(csv_path)

    for kind, degrees in (
        ("question", [pruned.question_importance(q) for q in sorted(pruned.q_adj)]),
        ("paragraph", [pruned.paragraph_degree(p) for p in sorted(pruned.p_adj)]),
    ):
        fig, ax = plt.subplots(figsize=(6, 4))
        counts = Counter(degrees)
        xs = sorted(counts)
        ax.bar(xs, [counts[x] for x in xs], color="#3b6ea5")
        ax.set_xlabel(f"{kind} degree (pruned graph)")
        ax.set_ylabel("nodes")
        ax.set_title(f"{unpruned.story_id}: {kind} degrees")
        if xs:
            ax.set_xticks(xs)
        fig.tight_layout()
        path = out / f"{kind}_degree_hist.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written
