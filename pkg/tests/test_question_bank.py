import pytest
from hypothesis import given
from hypothesis import strategies as st

from storychat.config import EngineConfig
from storychat.errors import ProviderTransportError
from storychat.providers.base import GeneratedQuestion
from storychat.providers.reference import ReferenceQuestionGenerator
from storychat.question_bank import (
    Question,
    bank_from_document,
    bank_to_document,
    build_question_bank,
    dedup_questions,
    length_filter,
    lexical_distance,
    question_id,
    word_count,
)
from storychat.textutil import question_tokens


def q(text, score=1.0, pid="p0"):
    return Question(
        id=question_id("s", text),
        text=text,
        tokens=question_tokens(text),
        source_paragraph_id=pid,
        score=score,
    )


@pytest.mark.parametrize(
    "text,expected",
    [
        ("When did the fires start?", 5),
        ("Why?", 1),
        ("", 0),
    ],
)
def test_word_count(text, expected):
    assert word_count(text) == expected


def test_length_filter_bounds(engine_config):
    four = q("When did fires start?")  # 4 words
    twelve = q("When did the very large fires start near the town of Lakeport?")  # 12
    thirteen = q("When did the very large fires start near the old town of Lakeport?")  # 13
    assert word_count(four.text) == 4
    assert word_count(twelve.text) == 12
    assert word_count(thirteen.text) == 13
    kept = length_filter([four, twelve, thirteen], engine_config)
    assert kept == [twelve]  # 12 kept (inclusive), 4 and 13 removed


def test_length_filter_preserves_order(engine_config):
    a = q("When did the fires start burning?")
    b = q("How many homes were lost there?")
    assert length_filter([a, b], engine_config) == [a, b]
    assert length_filter([b, a], engine_config) == [b, a]


def test_lexical_distance_identity():
    assert lexical_distance(q("when did the fires start?"), q("when did the fires start?")) == 0


def test_lexical_distance_single_substitution():
    assert (
        lexical_distance(q("when did the fires start"), q("when did the fire start")) == 1
    )


def test_lexical_distance_hand_computed_asymmetric_lengths():
    # multisets: {who, won} vs {how, many, died, in, the, floods};
    # left-only = 2, right-only = 6 -> max = 6
    assert lexical_distance(q("who won"), q("how many died in the floods")) == 6


def test_lexical_distance_counts_multiplicity():
    assert lexical_distance(q("fire fire fire"), q("fire")) == 2


def test_lexical_distance_symmetric():
    a, b = q("when did the fires start"), q("how many died in floods")
    assert lexical_distance(a, b) == lexical_distance(b, a)


def test_dedup_close_pair_keeps_higher_score(engine_config):
    high = q("when did the fires start", score=0.9)
    low = q("when did the fire start", score=0.8)
    assert dedup_questions([high, low], engine_config) == [high]


def test_dedup_keeps_pairs_above_delta(engine_config):
    a = q("when did the fires start", score=0.9)
    b = q("how many people have died", score=0.8)
    assert lexical_distance(a, b) > engine_config.dup_word_delta
    assert dedup_questions([a, b], engine_config) == [a, b]


def test_dedup_chain_is_not_transitive(engine_config):
    # hand-traced greedy sweep: A kept; B within delta of A -> dropped;
    # C within delta of B but not of A -> kept. Result {A, C}.
    a = q("when did fires start", score=0.9)
    b = q("when did homes burn", score=0.8)
    c = q("why more homes burn", score=0.7)
    assert lexical_distance(a, b) == 2
    assert lexical_distance(b, c) == 2
    assert lexical_distance(a, c) == 4
    assert dedup_questions([a, b, c], engine_config) == [a, c]


@given(
    st.lists(
        st.text(alphabet="abcd ", min_size=1, max_size=12).map(
            lambda s: " ".join(s.split()) or "a"
        ),
        min_size=0,
        max_size=12,
    )
)
def test_dedup_result_is_pairwise_distant(texts):
    cfg = EngineConfig()
    candidates = [q(t, score=1.0 / (1 + i)) for i, t in enumerate(texts)]
    kept = dedup_questions(candidates, cfg)
    for i, a in enumerate(kept):
        for b in kept[i + 1 :]:
            assert lexical_distance(a, b) > cfg.dup_word_delta


class ScriptedGenerator:
    """Question provider emitting a fixed script per paragraph id."""

    def __init__(self, script, fail_on=()):
        self.script = script
        self.fail_on = set(fail_on)

    def generate(self, paragraph, k):
        if paragraph.id in self.fail_on:
            raise ProviderTransportError("scripted failure")
        return [
            GeneratedQuestion(text=t, score=1.0 / (1 + i), paragraph_id=paragraph.id)
            for i, t in enumerate(self.script.get(paragraph.id, ()))
        ][:k]


def test_build_bank_composes_filters(built_engine, engine_config):
    story = built_engine.corpus.story("lakeport-flood")
    script = {
        "lf-a1:p0": [
            "How many hours did the heavy rain last?",  # kept
            "Why?",  # too short
            "How many hours did the heavy rainfall last?",  # distance 1 from first
            " ".join(["word"] * 13) + "?",  # too long
            "What did the reservoir above the city do?",  # kept
        ]
    }
    bank = build_question_bank(
        story, built_engine.corpus, ScriptedGenerator(script), engine_config
    )
    from_p0 = [b.text for b in bank if b.source_paragraph_id == "lf-a1:p0"]
    assert from_p0 == [
        "How many hours did the heavy rain last?",
        "What did the reservoir above the city do?",
    ]


def test_build_bank_skips_failing_paragraph(built_engine, engine_config):
    story = built_engine.corpus.story("saltmere-fog")
    script = {
        "sf-a1:p0": ["What closed the Saltmere harbor on Tuesday?"],
        "sf-a1:p1": ["How long did the harbor stay closed?"],
    }
    bank = build_question_bank(
        story,
        built_engine.corpus,
        ScriptedGenerator(script, fail_on={"sf-a1:p0"}),
        engine_config,
    )
    assert [b.source_paragraph_id for b in bank] == ["sf-a1:p1"]


def test_identical_text_from_two_paragraphs_yields_two_records(built_engine, engine_config):
    story = built_engine.corpus.story("saltmere-fog")
    script = {
        "sf-a1:p0": ["What closed the Saltmere harbor on Tuesday?"],
        "sf-a1:p1": ["What closed the Saltmere harbor on Tuesday?"],
    }
    bank = build_question_bank(
        story, built_engine.corpus, ScriptedGenerator(script), engine_config
    )
    assert len(bank) == 2
    assert bank[0].text == bank[1].text
    assert bank[0].id == bank[1].id  # stable text hash
    assert {b.source_paragraph_id for b in bank} == {"sf-a1:p0", "sf-a1:p1"}


def test_build_bank_deterministic_including_ids(built_engine, engine_config):
    story = built_engine.corpus.story("lakeport-flood")
    qg = ReferenceQuestionGenerator()
    one = build_question_bank(story, built_engine.corpus, qg, engine_config)
    two = build_question_bank(story, built_engine.corpus, qg, engine_config)
    assert one == two
    doc1 = bank_to_document(story.id, one, engine_config)
    doc2 = bank_to_document(story.id, two, engine_config)
    assert doc1 == doc2
    assert bank_from_document(doc1) == one


def test_bank_invariants_on_fixture(built_engine, engine_config):
    for summary in built_engine.corpus.list_stories():
        bank = built_engine.load_bank(summary.id)
        assert bank, summary.id
        by_paragraph = {}
        for question in bank:
            assert engine_config.min_words <= word_count(question.text) <= engine_config.max_words
            by_paragraph.setdefault(question.source_paragraph_id, []).append(question)
        for questions in by_paragraph.values():
            for i, a in enumerate(questions):
                for b in questions[i + 1 :]:
                    assert lexical_distance(a, b) > engine_config.dup_word_delta
        # same text + same paragraph never repeats
        seen = set()
        for question in bank:
            key = (question.text, question.source_paragraph_id)
            assert key not in seen
            seen.add(key)
