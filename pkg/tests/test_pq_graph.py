import itertools
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from storychat.config import EngineConfig
from storychat.errors import NotFoundError, ProviderTransportError
from storychat.pq_graph import PQGraph, build_graph, greedy_set_cover, prune
from storychat.providers.base import QaVerdict
from storychat.providers.reference import ReferenceQuestionAnswerer
from storychat.question_bank import Question, question_id
from storychat.textutil import question_tokens

from conftest import make_graph


# --- independent oracle -------------------------------------------------------


def brute_force_min_cover(sets: dict[str, set[str]], universe: set[str]) -> int | None:
    """Smallest number of sets covering the universe, by exhaustive search."""
    if not universe:
        return 0
    ids = sorted(sets)
    for size in range(1, len(ids) + 1):
        for combo in itertools.combinations(ids, size):
            covered = set()
            for qid in combo:
                covered |= sets[qid]
            if universe <= covered:
                return size
    return None


def harmonic(n: int) -> float:
    return sum(1.0 / i for i in range(1, n + 1))


def random_bipartite(rng: random.Random, max_p=10, max_q=12, edge_prob=0.3):
    n_p = rng.randint(1, max_p)
    n_q = rng.randint(1, max_q)
    edges = {}
    for qi in range(n_q):
        pids = {f"p{pi}" for pi in range(n_p) if rng.random() < edge_prob}
        edges[f"q{qi:02d}"] = pids
    paragraphs = {f"p{pi}" for pi in range(n_p)}
    return edges, paragraphs


# --- worked example, oracle-verified -------------------------------------------


def test_greedy_cover_three_questions():
    # brute force over all 2^3 subsets confirms the minimum cover size is 2
    edges = {"q1": {"p1", "p2"}, "q2": {"p2", "p3"}, "q3": {"p2"}}
    universe = {"p1", "p2", "p3"}
    assert brute_force_min_cover(edges, universe) == 2
    graph = make_graph(edges)
    cover = greedy_set_cover(graph)
    assert set(cover) == {"q1", "q2"}
    assert len(cover) == 2


def test_single_question_covering_everything():
    edges = {"q1": {"p1", "p2", "p3"}, "q2": {"p1"}}
    assert greedy_set_cover(make_graph(edges)) == ("q1",)


def test_edgeless_graph_has_empty_cover():
    graph = make_graph({"q1": set()}, paragraphs={"p1", "p2"})
    assert greedy_set_cover(graph) == ()


def test_cover_tie_breaks_by_summed_confidence_then_id():
    # both questions cover 2 uncovered paragraphs; qb's edges are stronger
    edges = {"qa": {"p1", "p2"}, "qb": {"p3", "p4"}}
    confidences = {
        ("p1", "qa"): 0.6,
        ("p2", "qa"): 0.6,
        ("p3", "qb"): 0.9,
        ("p4", "qb"): 0.9,
    }
    graph = make_graph(edges, confidences=confidences)
    assert greedy_set_cover(graph) == ("qb", "qa")
    # equal confidence -> id ascending
    graph2 = make_graph({"qa": {"p1", "p2"}, "qb": {"p3", "p4"}})
    assert greedy_set_cover(graph2) == ("qa", "qb")


# --- prune ----------------------------------------------------------------------


def test_prune_removes_non_cover_questions_and_their_edges():
    edges = {"q1": {"p1", "p2"}, "q2": {"p2", "p3"}, "q3": {"p2"}}
    graph = make_graph(edges)
    pruned = prune(graph)
    assert pruned.pruned
    assert set(pruned.q_adj) == {"q1", "q2"}
    assert ("p2", "q3") not in pruned.edges
    assert set(pruned.paragraph_ids) == {"p1", "p2", "p3"}


def test_prune_with_full_cover_changes_only_flag():
    edges = {"q1": {"p1"}, "q2": {"p2"}}
    graph = make_graph(edges)
    pruned = prune(graph)
    assert set(pruned.q_adj) == {"q1", "q2"}
    assert pruned.edges == graph.edges
    assert pruned.pruned and not graph.pruned


def test_edgeless_paragraph_survives_prune_as_isolated_node():
    graph = make_graph({"q1": {"p1"}}, paragraphs={"p1", "p-lonely"})
    pruned = prune(graph)
    assert "p-lonely" in pruned.p_adj
    assert pruned.paragraph_degree("p-lonely") == 0


# --- metrics ---------------------------------------------------------------------


def test_question_importance_is_degree():
    pruned = prune(make_graph({"q1": {"p1", "p2"}, "q2": {"p3"}}))
    assert pruned.question_importance("q1") == 2
    assert pruned.question_importance("q2") == 1


def test_question_importance_unknown_id():
    pruned = prune(make_graph({"q1": {"p1"}}))
    with pytest.raises(NotFoundError):
        pruned.question_importance("q404")


def test_related_questions_intersections():
    pruned = prune(make_graph({"q1": {"p1", "p2"}, "q2": {"p2", "p3"}, "q3": {"p4"}}))
    assert pruned.related_questions("q1") == [("q2", 1)]
    assert pruned.related_questions("q3") == []


def test_three_questions_sharing_one_paragraph():
    # enumerate intersections on the fixture: all pairs share exactly p1
    graph = make_graph({"q1": {"p1", "p2"}, "q2": {"p1", "p3"}, "q3": {"p1"}})
    pruned = prune(graph)
    for qid in pruned.q_adj:
        related = dict(pruned.related_questions(qid))
        others = set(pruned.q_adj) - {qid}
        assert set(related) == others
        assert all(count >= 1 for count in related.values())


def test_related_questions_sorted_by_count_then_id():
    graph = make_graph(
        {"q1": {"p1", "p2", "p3"}, "q2": {"p1"}, "q3": {"p1", "p2"}, "q4": {"p3"}}
    )
    assert graph.related_questions("q1") == [("q3", 2), ("q2", 1), ("q4", 1)]


# --- build_graph -----------------------------------------------------------------


class TableAnswerer:
    """Scripted verdicts keyed by (question text, paragraph id)."""

    def __init__(self, table, default=0.0, fail_on=()):
        self.table = table
        self.default = default
        self.fail_on = set(fail_on)
        self.calls = 0

    def answer(self, question, paragraph):
        self.calls += 1
        if (question, paragraph.id) in self.fail_on:
            raise ProviderTransportError("scripted failure")
        confidence = self.table.get((question, paragraph.id), self.default)
        span = paragraph.sentence_spans[0] if confidence > 0 else None
        return QaVerdict(confidence=confidence, answer_span=span)


def bank_question(text, pid):
    return Question(
        id=question_id("story", text),
        text=text,
        tokens=question_tokens(text),
        source_paragraph_id=pid,
        score=1.0,
    )


def test_build_graph_single_confident_pair(built_engine, engine_config):
    story = built_engine.corpus.story("saltmere-fog")
    question = bank_question("What is said about saltmere?", "sf-a1:p0")
    qa = ReferenceQuestionAnswerer()
    graph = build_graph(story, built_engine.corpus, [question], qa, engine_config)
    # reference formula: the only content token appears in both paragraphs
    assert set(graph.edges) == {("sf-a1:p0", question.id), ("sf-a1:p1", question.id)}
    assert all(conf == 1.0 for conf in graph.edges.values())


def test_build_graph_threshold_is_inclusive(built_engine, engine_config):
    story = built_engine.corpus.story("saltmere-fog")
    question = bank_question("What is said about saltmere?", "sf-a1:p0")
    table = {
        ("What is said about saltmere?", "sf-a1:p0"): engine_config.qa_threshold,
        ("What is said about saltmere?", "sf-a1:p1"): engine_config.qa_threshold - 1e-9,
    }
    graph = build_graph(
        story, built_engine.corpus, [question], TableAnswerer(table), engine_config
    )
    assert set(graph.edges) == {("sf-a1:p0", question.id)}


def test_build_graph_cross_paragraph_edges_by_hand_applied_formula(
    built_engine, engine_config
):
    # question content {fog, lifted}: hand-apply the overlap formula to both
    # saltmere paragraphs -> both contain both tokens -> confidence 1.0 twice
    story = built_engine.corpus.story("saltmere-fog")
    question = bank_question("What is said about the fog that lifted?", "sf-a1:p0")
    graph = build_graph(
        story, built_engine.corpus, [question], ReferenceQuestionAnswerer(), engine_config
    )
    assert len(graph.edges) == 2


def test_build_graph_failure_counts_as_no_edge(built_engine, engine_config):
    story = built_engine.corpus.story("saltmere-fog")
    question = bank_question("What is said about saltmere?", "sf-a1:p0")
    qa = TableAnswerer(
        {("What is said about saltmere?", "sf-a1:p1"): 0.9},
        fail_on={("What is said about saltmere?", "sf-a1:p0")},
    )
    graph = build_graph(story, built_engine.corpus, [question], qa, engine_config)
    assert set(graph.edges) == {("sf-a1:p1", question.id)}
    assert graph.qa_failures == 1


def test_build_graph_merges_identical_texts(built_engine, engine_config):
    story = built_engine.corpus.story("saltmere-fog")
    questions = [
        bank_question("What is said about saltmere?", "sf-a1:p0"),
        bank_question("What is said about saltmere?", "sf-a1:p1"),
    ]
    graph = build_graph(
        story, built_engine.corpus, questions, ReferenceQuestionAnswerer(), engine_config
    )
    assert len(graph.question_texts) == 1


def test_edge_monotonicity_in_threshold(built_engine):
    story = built_engine.corpus.story("lakeport-flood")
    bank = built_engine.load_bank(story.id)
    qa = ReferenceQuestionAnswerer()
    edge_sets = []
    for threshold in (0.3, 0.5, 0.7):
        cfg = EngineConfig(qa_threshold=threshold)
        graph = build_graph(story, built_engine.corpus, bank, qa, cfg)
        edge_sets.append(set(graph.edges))
    assert edge_sets[2] <= edge_sets[1] <= edge_sets[0]


def test_build_graph_through_remote_answerer(built_engine, engine_config):
    # a scripted model server drives the same graph build as the reference path
    import httpx

    from storychat.providers.remote import RemoteQuestionAnswerer

    def handler(request):
        payload = json.loads(request.content)
        if "saltmere" in payload["question"].lower():
            if payload["paragraph_text"].startswith("Thick fog"):
                return httpx.Response(200, json={"confidence": 0.9, "span": [0, 10]})
            return httpx.Response(500, text="flaky")
        return httpx.Response(200, json={"confidence": 0.0, "span": None})

    qa = RemoteQuestionAnswerer(
        "http://qa.test/answer", client=httpx.Client(transport=httpx.MockTransport(handler))
    )
    story = built_engine.corpus.story("saltmere-fog")
    questions = [
        bank_question("What is said about saltmere?", "sf-a1:p0"),
        bank_question("What is said about pilots?", "sf-a1:p0"),
    ]
    graph = build_graph(story, built_engine.corpus, questions, qa, engine_config)
    saltmere_id = questions[0].id
    assert set(graph.edges) == {("sf-a1:p0", saltmere_id)}
    assert graph.qa_failures == 1  # the flaky paragraph degraded to no-edge


def test_graph_document_round_trip(built_engine):
    graph = built_engine.load_graph("lakeport-flood")
    doc = graph.to_document()
    again = PQGraph.from_document(doc)
    assert again.to_document() == doc
    assert again.covering_questions == graph.covering_questions


# --- randomized properties --------------------------------------------------------


def test_cover_validity_and_quality_on_random_graphs():
    rng = random.Random(4242)
    for _ in range(100):
        edges, paragraphs = random_bipartite(rng)
        graph = make_graph(edges, paragraphs=paragraphs)
        cover = greedy_set_cover(graph)
        coverable = {p for p, qs in graph.p_adj.items() if qs}
        covered = set()
        for qid in cover:
            covered |= graph.q_adj[qid]
        assert coverable <= covered
        optimal = brute_force_min_cover(edges, coverable)
        d_max = max((len(pids) for pids in edges.values()), default=0)
        assert len(cover) <= harmonic(d_max) * optimal + 1e-9


def test_cover_determinism_on_random_graphs():
    rng = random.Random(7)
    for _ in range(50):
        edges, paragraphs = random_bipartite(rng)
        g1 = make_graph(edges, paragraphs=paragraphs)
        g2 = make_graph(edges, paragraphs=paragraphs)
        assert greedy_set_cover(g1) == greedy_set_cover(g2)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**30))
def test_prune_preserves_paragraph_coverage(seed):
    rng = random.Random(seed)
    edges, paragraphs = random_bipartite(rng)
    graph = make_graph(edges, paragraphs=paragraphs)
    pruned = prune(graph)
    for pid in graph.p_adj:
        if graph.p_adj[pid]:
            assert pruned.p_adj[pid], f"paragraph {pid} lost all edges in prune"
