import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semmap.corpus import (
    MISSING,
    BinaryTable,
    Cell,
    CorpusTable,
    KeyMode,
    comparison_key,
    parse_binary_table,
    parse_corpus,
    parse_point_cloud,
    swiss_roll,
)
from semmap.dissim import euclidean_distances, geodesic_distances
from semmap.errors import ParseError, ValidationError

HASPELMATH = [
    "specific known", "specific unknown", "irrealis non-specific", "question",
    "conditional", "indirect negation", "comparative", "direct negation", "free choice",
]


def test_parse_binary_minimal():
    t = parse_binary_table("form\tf1\tf2\nA\tY\tN\nB\tN\tY\n")
    assert t.row_labels == ("A", "B")
    assert t.col_labels == ("f1", "f2")
    assert t.cells.tolist() == [[True, False], [False, True]]


def test_parse_binary_accepts_numeric_and_case():
    t = parse_binary_table("# comment\nform\tf1\tf2\nA\ty\t0\nB\tn\t1\n")
    assert t.cells.tolist() == [[True, False], [False, True]]


def test_parse_binary_rejects_illegal_cell():
    with pytest.raises(ParseError, match=r"'maybe'.*'B'.*'f2'") as info:
        parse_binary_table("form\tf1\tf2\nA\tY\tN\nB\tN\tmaybe\n")
    assert info.value.line == 3


def test_parse_binary_ragged_row_line_number():
    with pytest.raises(ParseError) as info:
        parse_binary_table("form\tf1\tf2\nA\tY\tN\nB\tN\n")
    assert info.value.line == 3


def test_parse_binary_duplicate_labels():
    with pytest.raises(ValidationError, match="duplicate"):
        parse_binary_table("form\tf1\tf1\nA\tY\tN\n")


def test_parse_binary_haspelmath_functions():
    rows = ["form\t" + "\t".join(HASPELMATH)]
    r = np.random.default_rng(1)
    for i in range(12):
        vals = r.random(len(HASPELMATH)) < 0.4
        vals[i % len(HASPELMATH)] = True
        rows.append(f"form{i}\t" + "\t".join("Y" if v else "N" for v in vals))
    t = parse_binary_table("\n".join(rows) + "\n")
    assert t.col_labels == tuple(HASPELMATH)
    assert t.cells.shape == (12, 9)


def test_binary_empty_rows_warned_and_dropped():
    text = "form\tf1\tf2\tf3\nA\tY\tN\tN\nB\tN\tN\tN\n"
    with pytest.warns(UserWarning, match="all-N"):
        t = parse_binary_table(text)
    assert t.row_labels == ("A", "B")
    with pytest.warns(UserWarning):
        t = parse_binary_table(text, drop_empty=True)
    assert t.row_labels == ("A",)
    assert t.col_labels == ("f1",)


def test_binary_transpose():
    t = parse_binary_table("form\tf1\tf2\nA\tY\tN\nB\tY\tY\n")
    tt = t.transpose()
    assert tt.row_labels == ("f1", "f2")
    assert tt.cells.tolist() == [[True, True], [False, True]]


def test_parse_corpus_book_example():
    t = parse_corpus("context\ten\tfr\tde\nc1\tbook\tlibre\tBuch\n")
    assert t.context_ids == ("c1",)
    assert t.languages == ("en", "fr", "de")
    assert [c.form for c in t.cells[0]] == ["book", "libre", "Buch"]


def test_parse_corpus_missing_cell():
    t = parse_corpus("context\ten\tfr\tde\nc1\tbook\t\tBuch\n")
    assert t.cells[0][1].form is MISSING


def test_parse_corpus_feature_column():
    t = parse_corpus("context\ten\ten:feature\tfr\nc1\thas gone\tPresPerf\test parti\n")
    assert t.languages == ("en", "fr")
    assert t.cells[0][0] == Cell("has gone", "PresPerf")
    assert t.cells[0][1].feature is None


def test_parse_corpus_orphan_feature_column():
    with pytest.raises(ValidationError, match="nl"):
        parse_corpus("context\ten\tnl:feature\nc1\tx\tPERF\n")


def test_corpus_round_trip_with_features():
    original = CorpusTable.from_forms(
        ["c1", "c2"], ["en", "fr"],
        [["has gone", "est parti"], [None, "partit"]],
        [["PresPerf", "PC"], [None, "PS"]],
    )
    text = original.to_tsv()
    again = parse_corpus(text)
    assert again == original
    assert again.to_tsv() == text


token = st.text(alphabet="abcXYZ ", min_size=1, max_size=5).map(str.strip).filter(bool)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 4), st.data())
def test_corpus_round_trip_property(n_ctx, n_lang, data):
    forms = [[data.draw(st.one_of(st.none(), token)) for _ in range(n_lang)] for _ in range(n_ctx)]
    feats = [[data.draw(st.one_of(st.none(), token)) for _ in range(n_lang)] for _ in range(n_ctx)]
    t = CorpusTable.from_forms([f"c{i}" for i in range(n_ctx)], [f"L{j}" for j in range(n_lang)], forms, feats)
    assert parse_corpus(t.to_tsv()) == t


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_binary_round_trip_property(rows, cols, data):
    cells = np.array(data.draw(st.lists(st.booleans(), min_size=rows * cols, max_size=rows * cols))).reshape(rows, cols)
    t = BinaryTable([f"r{i}" for i in range(rows)], [f"c{j}" for j in range(cols)], cells)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        again = parse_binary_table(t.to_tsv())
    assert again.row_labels == t.row_labels and again.col_labels == t.col_labels
    assert np.array_equal(again.cells, t.cells)


def test_point_cloud_round_trip():
    c = swiss_roll(20, 0.1, seed=4)
    again = parse_point_cloud(c.to_tsv())
    assert np.array_equal(again.points, c.points)
    assert np.array_equal(again.intrinsic, c.intrinsic)
    assert again.labels == c.labels


def tense_table():
    return CorpusTable.from_forms(
        ["c1", "c2", "c3"], ["en"],
        [["went"], ["gone"], ["Went "]],
        [["PAST"], ["PERFECT"], ["PAST"]],
    )


def test_feature_mode_distinguishes_shared_stem():
    tok = comparison_key(tense_table(), KeyMode.FEATURE)
    assert tok.column("en") == ["PAST", "PERFECT", "PAST"]


def test_lexeme_mode_normalizes():
    tok = comparison_key(tense_table(), "lexeme")
    assert tok.column("en") == ["went", "gone", "went"]


def test_same_form_same_token():
    t = CorpusTable.from_forms(["a", "b"], ["en"], [["let"], ["let"]])
    col = comparison_key(t).column("en")
    assert col[0] == col[1]


def test_different_lexemes_same_tense():
    t = CorpusTable.from_forms(["a", "b"], ["en"], [["has said"], ["has gone"]], [["PERF"], ["PERF"]])
    lex = comparison_key(t, KeyMode.LEXEME).column("en")
    feat = comparison_key(t, KeyMode.FEATURE).column("en")
    assert lex[0] != lex[1]
    assert feat[0] == feat[1]


def test_feature_mode_requires_annotation():
    t = CorpusTable.from_forms(["a", "b"], ["en", "fr"], [["x", "y"], ["z", None]], [["P", None], ["P", None]])
    with pytest.raises(ValidationError, match=r"\(a, fr\)"):
        comparison_key(t, KeyMode.FEATURE)


def test_missing_propagates():
    t = CorpusTable.from_forms(["a"], ["en", "fr"], [["x", None]], [["P", None]])
    assert comparison_key(t, KeyMode.FEATURE).tokens[0][1] is MISSING
    assert comparison_key(t, KeyMode.LEXEME).tokens[0][1] is MISSING


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_feature_mode_ignores_form_text(seed):
    r = np.random.default_rng(seed)
    feats = [[str(r.integers(3)) for _ in range(3)] for _ in range(5)]
    forms = [[f"f{r.integers(100)}" for _ in range(3)] for _ in range(5)]
    other = [[f"g{r.integers(100)}" for _ in range(3)] for _ in range(5)]
    ids, langs = [f"c{i}" for i in range(5)], ["a", "b", "c"]
    t1 = CorpusTable.from_forms(ids, langs, forms, feats)
    t2 = CorpusTable.from_forms(ids, langs, other, feats)
    assert comparison_key(t1, "feature").tokens == comparison_key(t2, "feature").tokens


def test_swiss_roll_parametrization():
    c = swiss_roll(200, 0.0, seed=1)
    t = c.intrinsic[:, 0]
    np.testing.assert_allclose(c.points[:, 0] ** 2 + c.points[:, 2] ** 2, t ** 2, rtol=1e-12)
    assert t.min() >= 1.5 * np.pi and t.max() <= 4.5 * np.pi
    assert c.points[:, 1].min() >= 0 and c.points[:, 1].max() <= 21


def test_swiss_roll_deterministic():
    a, b = swiss_roll(100, 0.5, seed=9), swiss_roll(100, 0.5, seed=9)
    assert np.array_equal(a.points, b.points)
    assert not np.array_equal(a.points, swiss_roll(100, 0.5, seed=10).points)


def test_swiss_roll_too_small():
    with pytest.raises(ValidationError):
        swiss_roll(9, 0.0, 0)


def test_swiss_roll_winding_pairs_closer_in_euclid_than_geodesic():
    c = swiss_roll(1000, 0.0, seed=2)
    t, y = c.intrinsic[:, 0], c.intrinsic[:, 1]
    geo = geodesic_distances(c, 10).d
    euc = euclidean_distances(c.points)
    # pairs one winding apart (t differs by about 2 pi) at similar height
    dt = t[None, :] - t[:, None] - 2 * np.pi
    pairs = np.argwhere((np.abs(dt) < 0.2) & (np.abs(y[:, None] - y[None, :]) < 1.0))
    assert len(pairs) >= 20
    for i, j in pairs:
        assert euc[i, j] < geo[i, j]
        assert euc[i, j] < 0.5 * geo[i, j]
