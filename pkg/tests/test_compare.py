from hypothesis import given
from hypothesis import strategies as st
import pytest

from oracles import intersection_count
from overlap_fixtures import PAIR_ROWS, KEYWORD_TRIANGLE, HASHTAG_TRIANGLE, pair_sets, triple_sets
from topiknet.compare import overlap, overlap_matrix, term_key
from topiknet.errors import EmptyNetworkError
from topiknet.terms import HASHTAG, Term


@pytest.mark.parametrize("a, b, count, pct", PAIR_ROWS + [(70, 69, 58, 84.1), (64, 64, 64, 100.0)])
def test_pair_cells(a, b, count, pct):
    A, B = pair_sets(a, b, count)
    r = overlap(A, B)
    assert (r.count, r.size_a, r.size_b, r.denominator) == (count, a, b, min(a, b))
    assert abs(r.pct - pct) <= 0.05
    assert r.pct_text == f"{pct:.1f}"


@pytest.mark.parametrize("table", [KEYWORD_TRIANGLE, HASHTAG_TRIANGLE])
def test_triangle_tables(table):
    sizes, counts, triple, pcts = table
    sets = triple_sets(sizes, counts, triple)
    m = overlap_matrix(list(zip("XYZ", sets)))
    assert m.sizes == sizes
    assert (m.cell(1, 0), m.cell(2, 0), m.cell(2, 1)) == counts
    got = (m.cell(0, 1), m.cell(0, 2), m.cell(1, 2))
    assert all(abs(g - e) <= 0.05 for g, e in zip(got, pcts))


def test_triangle_text_layout():
    sizes, counts, triple, _ = KEYWORD_TRIANGLE
    m = overlap_matrix(list(zip(["all", "tweeted", "news"], triple_sets(sizes, counts, triple))))
    lines = m.to_text().splitlines()
    assert lines[1].split() == ["all", "70", "84.1%", "64.3%"]
    assert lines[2].split() == ["tweeted", "58", "69", "72.5%"]
    assert lines[3].split() == ["news", "45", "50", "70"]
    tsv = m.to_tsv().splitlines()
    assert tsv[1].split("\t") == ["all", "70", "84.1", "64.3"]


def test_identity_and_errors():
    A, _ = pair_sets(10, 10, 3)
    assert overlap(A, A).pct == 100.0
    with pytest.raises(EmptyNetworkError, match="empty network"):
        overlap(A, [])
    with pytest.raises(ValueError):
        overlap_matrix([("only", A)])


def test_kind_and_case_matching():
    assert term_key(Term("Heroin")) != term_key(Term("HEROIN", HASHTAG))
    assert term_key("#pain") == term_key(Term("PAIN", HASHTAG))
    assert overlap([Term("Heroin")], [Term("HEROIN", HASHTAG)]).count == 0
    assert overlap(["Pain"], ["pain"]).count == 1


def test_matrix_order_covariant():
    sizes, counts, triple, _ = HASHTAG_TRIANGLE
    sets = triple_sets(sizes, counts, triple)
    m = overlap_matrix(list(zip("XYZ", sets)))
    order = [2, 0, 1]
    p = overlap_matrix([("XYZ"[i], sets[i]) for i in order])
    for i in range(3):
        for j in range(3):
            assert p.counts[i][j] == m.counts[order[i]][order[j]]
            assert p.pcts[i][j] == m.pcts[order[i]][order[j]]


term_sets = st.sets(st.integers(0, 40), min_size=1, max_size=25).map(
    lambda xs: [Term(f"T{x}") for x in xs])


@given(term_sets, term_sets)
def test_symmetry_bounds_brute_force(a, b):
    ab, ba = overlap(a, b), overlap(b, a)
    assert ab.count == ba.count == intersection_count(a, b)
    assert ab.pct == ba.pct
    assert 0 <= ab.pct <= 100
    small, large = sorted([set(a), set(b)], key=len)
    assert (ab.pct == 100) == (small <= large)


@given(st.integers(1, 30), st.integers(1, 30), st.data())
def test_monotone_in_intersection(a, b, data):
    c = data.draw(st.integers(0, min(a, b) - 1))
    lo = overlap(*pair_sets(a, b, c))
    hi = overlap(*pair_sets(a, b, c + 1))
    assert hi.pct > lo.pct
