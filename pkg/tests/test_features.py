import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from devsenti.corpus import document_from_text
from devsenti.dsm import EmbeddingSpace, build_prototypes
from devsenti.features import (
    BOOLEAN_FEATURES, LEXICON_NAMES, MICRO_NAMES, FeatureError, FeatureSchema, SchemaMismatch,
    assemble, build_schema, keyword_features, lexicon_features, micro_features, read_sparse,
    semantic_features, to_matrix, write_sparse,
)
from devsenti.lexicon import Lexicon

WORDS = ["great", "bad", "love", "hate", "fine", "code", "ok", "!", "?!", ":)", ":(", "LOL",
         "GOOD", "@USER", "."]


def test_names():
    assert len(LEXICON_NAMES) == 19 and len(MICRO_NAMES) == 6


def test_empty_document(lexicon, doc):
    f = lexicon_features(doc(""), lexicon)
    assert all(v == 0 for v in f.values())
    assert all(f[k] is False for k in BOOLEAN_FEATURES if k in f)
    m = micro_features(doc(""), lexicon)
    assert all(v == 0 for v in m.values()) and m["EndWith_EXMark"] is False


def test_great_great(doc):
    lex = Lexicon({"great": 3})
    f = lexicon_features(doc("great great"), lex)
    assert (f["Pos_words"], f["Subj_words"], f["Sum_pos"], f["Sum_subj"]) == (2, 2, 6, 6)
    assert (f["Max_pos"], f["Last_pos"], f["End_Pos"]) == (3, 3, True)
    assert f["Neg_words"] == f["Sum_neg"] == f["Max_neg"] == f["Last_neg"] == 0
    assert not f["End_Neg"] and not f["Neg_Emph"]


def test_bad_bang(doc):
    lex = Lexicon({"bad": -3})
    f = lexicon_features(doc("bad !"), lex)
    assert (f["Neg_words"], f["Sum_neg"], f["Max_neg"], f["Last_neg"]) == (1, -3, -3, -3)
    assert f["Neg_Emph"] and f["End_Neg_Emph"] and f["End_Neg"]
    assert micro_features(doc("bad !"))["EndWith_EXMark"]


def test_micro_examples(lexicon, doc):
    m = micro_features(doc("GOOD GOOD lol"), lexicon)
    assert m["Uppercase_words"] == 2 and m["Laughter"] == 1
    m = micro_features(doc("gooooood ?!?!"), lexicon)
    assert m["Elongated_words"] == 1 and m["M_repetitions"] == 1


@given(st.lists(st.sampled_from(WORDS), max_size=15))
def test_lexicon_invariants(lexicon, words):
    f = lexicon_features(document_from_text(" ".join(words)), lexicon)
    assert f["Pos_words"] + f["Neg_words"] == f["Subj_words"]
    assert f["Sum_pos"] >= f["Max_pos"] >= 0
    assert f["Sum_neg"] <= f["Max_neg"] <= 0
    assert f["Sum_subj"] == f["Sum_pos"] + f["Sum_neg"]
    assert not f["End_Pos_Emph"] or f["Pos_Emph"]
    assert not f["End_Neg_Emph"] or f["Neg_Emph"]


@given(st.permutations(["great", "bad", ":)", "love", "code", "hate"]))
def test_count_features_order_free(lexicon, words):
    f = lexicon_features(document_from_text(" ".join(words)), lexicon)
    counts = ("Pos_words", "Neg_words", "Subj_words", "Sum_pos", "Sum_neg", "Sum_subj",
              "Max_pos", "Max_neg", "Pos_emo", "Neg_emo")
    assert [f[k] for k in counts] == [2, 2, 4, 6, -7, -1, 3, -4, 1, 0]


def test_build_schema():
    docs = [document_from_text("a b"), document_from_text("b c")]
    schema = build_schema(docs)
    assert list(schema.unigram_index) == ["a", "b", "c"]
    assert list(schema.bigram_index) == [("a", "b"), ("b", "c")]
    assert schema.total_dim == 34


def test_build_schema_empty_doc():
    assert build_schema([document_from_text("")]).total_dim == 29


def test_bigrams_do_not_cross_sentences_or_documents():
    schema = build_schema([document_from_text("x y"), document_from_text("z")])
    assert ("y", "z") not in schema.bigram_index


@given(st.lists(st.sampled_from(["a", "b", "c", "d"]), max_size=8),
       st.lists(st.sampled_from(["a", "b", "c", "d"]), max_size=8))
def test_ngram_concatenation(a, b):
    schema = build_schema([document_from_text("a b c d a c b d b a d c")])
    grams = lambda words: {k: v for k, v in keyword_features(
        document_from_text(" ".join(words)), schema).items()
        if k < schema.offsets["micro"]}
    whole, left, right = grams(a + b), grams(a), grams(b)
    extra = sum(whole.values()) - sum(left.values()) - sum(right.values())
    assert extra in (0, 1)
    for k, v in left.items():
        assert whole[k] >= v


def test_unseen_ngrams_ignored():
    schema = build_schema([document_from_text("known word")])
    out = keyword_features(document_from_text("totally unknown"), schema)
    assert all(k >= schema.offsets["micro"] for k in out)


@pytest.fixture(scope="module")
def semantic_setup():
    words = ["great", "bad", "fine", "code"]
    vectors = np.array([[1.0, 0.2, 0.0], [0.1, 1.0, 0.0], [0.0, 0.3, 1.0], [0.5, 0.5, 0.5]])
    space = EmbeddingSpace(words, vectors, {})
    lex = Lexicon({"great": 3, "bad": -2, "fine": 1})
    return space, lex, build_prototypes(space, lex)


def test_semantic_identities(semantic_setup):
    space, lex, protos = semantic_setup
    sims = semantic_features(document_from_text("great"), space, protos)
    assert sims["Sim_pos"] == 1.0
    sims = semantic_features(document_from_text("unknown words"), space, protos)
    assert list(sims.values()) == [0.0, 0.0, 0.0, 0.0]
    sims = semantic_features(document_from_text("bad great"), space, protos)
    assert sims["Sim_subj"] == pytest.approx(1.0, abs=1e-12)


def test_schema_mask():
    schema = build_schema([document_from_text("a b")])
    mask = schema.mask("keyword")
    assert not mask[schema.block_slice("lexicon")].any()
    assert mask[schema.block_slice("unigram")].all()
    assert not mask[schema.block_slice("semantic")].any()
    assert schema.mask("full").all()
    with pytest.raises(FeatureError):
        schema.mask(set())
    with pytest.raises(FeatureError):
        schema.mask({"unigram", "pos_tags"})


def test_assemble(lexicon, semantic_setup):
    space, lex, protos = semantic_setup
    schema = build_schema([document_from_text("thank you")])
    empty = assemble(document_from_text(""), lexicon, schema)
    assert empty.entries == {}
    fv = assemble(document_from_text("thank"), lexicon, schema)
    col = {name: j for j, name in enumerate(LEXICON_NAMES)}
    expected = {col["Pos_words"]: 1, col["Subj_words"]: 1, col["Last_pos"]: 2, col["Sum_pos"]: 2,
                col["Sum_subj"]: 2, col["Max_pos"]: 2, col["End_Pos"]: 1,
                schema.offsets["unigram"]: 1}
    assert fv.entries == expected
    one = assemble(document_from_text("great code!"), lex, schema, space, protos)
    two = assemble(document_from_text("great code!"), lex, schema, space, protos)
    assert one == two
    assert list(one.entries) == sorted(one.entries)
    with pytest.raises(SchemaMismatch):
        assemble(document_from_text("x"), lex, schema, schema_id="other")


def test_schema_json_roundtrip(tmp_path):
    schema = build_schema([document_from_text("a b c"), document_from_text("c ü")])
    schema.save(tmp_path / "s.json")
    back = FeatureSchema.load(tmp_path / "s.json")
    assert back == schema and back.schema_id == schema.schema_id
    assert len(schema.column_names()) == schema.total_dim


def test_sparse_roundtrip(tmp_path, lexicon):
    docs = [document_from_text(t) for t in ["great code", "bad bad!", ""]]
    schema = build_schema(docs)
    vectors = [assemble(d, lexicon, schema) for d in docs]
    write_sparse(tmp_path / "f.svm", vectors, ["positive", "negative", "neutral"])
    lines = (tmp_path / "f.svm").read_text().splitlines()
    assert lines[0].startswith("1 ") and lines[1].startswith("-1 ") and lines[2] == "0"
    back, labels = read_sparse(tmp_path / "f.svm", schema.schema_id)
    assert [l.value for l in labels] == ["positive", "negative", "neutral"]
    assert (to_matrix(back, schema) != to_matrix(vectors, schema)).nnz == 0
