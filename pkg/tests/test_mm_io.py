import numpy as np
import pytest

from ciqz.dense_core import frobenius_norm
from ciqz.mm_io import (
    MatrixMarketError,
    SparseTriplets,
    load_matrix_market,
    parse_matrix_market,
    to_dense,
    write_array,
    write_coordinate,
)

from helpers import corpus_path

DIAG = """%%MatrixMarket matrix coordinate real general
% a comment line
2 2 2
1 1 1.0
2 2 2.0
"""

SYMMETRIC = """%%MatrixMarket matrix coordinate real symmetric
2 2 1
2 1 3.0
"""


def test_parse_diagonal_general():
    t = parse_matrix_market(DIAG)
    assert (t.nrows, t.ncols) == (2, 2)
    assert sorted(t.entries) == [(1, 1, 1.0 + 0j), (2, 2, 2.0 + 0j)]
    np.testing.assert_array_equal(to_dense(t), np.diag([1.0, 2.0]))


def test_parse_bytes_and_filelike(tmp_path):
    t = parse_matrix_market(DIAG.encode("ascii"))
    assert len(t.entries) == 2
    p = tmp_path / "m.mtx"
    p.write_text(DIAG)
    assert len(load_matrix_market(p).entries) == 2


def test_symmetric_expansion():
    t = parse_matrix_market(SYMMETRIC)
    assert sorted(t.entries) == [(1, 2, 3.0 + 0j), (2, 1, 3.0 + 0j)]


def test_hermitian_expansion_is_exactly_hermitian():
    text = """%%MatrixMarket matrix coordinate complex hermitian
3 3 4
1 1 2.0 0.0
2 1 1.0 -3.0
3 2 0.5 0.25
3 3 1.0 0.0
"""
    d = to_dense(parse_matrix_market(text))
    assert np.array_equal(d, d.conj().T)


def test_hermitian_complex_diagonal_rejected():
    text = """%%MatrixMarket matrix coordinate complex hermitian
2 2 1
1 1 1.0 0.5
"""
    with pytest.raises(MatrixMarketError, match="diagonal"):
        parse_matrix_market(text)


def test_skew_symmetric_expansion_and_diagonal_rules():
    good = """%%MatrixMarket matrix coordinate real skew-symmetric
2 2 1
2 1 4.0
"""
    t = parse_matrix_market(good)
    assert sorted(t.entries) == [(1, 2, -4.0 + 0j), (2, 1, 4.0 + 0j)]
    zero_diag = """%%MatrixMarket matrix coordinate real skew-symmetric
2 2 2
1 1 0.0
2 1 4.0
"""
    assert len(parse_matrix_market(zero_diag).entries) == 3
    bad = """%%MatrixMarket matrix coordinate real skew-symmetric
2 2 1
1 1 5.0
"""
    with pytest.raises(MatrixMarketError, match="diagonal"):
        parse_matrix_market(bad)


def test_integer_field_promoted():
    text = """%%MatrixMarket matrix coordinate integer general
2 2 1
1 2 7
"""
    t = parse_matrix_market(text)
    assert t.entries == [(1, 2, 7.0 + 0j)]


def test_array_format_general_column_major():
    text = """%%MatrixMarket matrix array real general
2 2
1.0
2.0
3.0
4.0
"""
    d = to_dense(parse_matrix_market(text))
    np.testing.assert_array_equal(d, np.array([[1.0, 3.0], [2.0, 4.0]]))


def test_array_format_symmetric_lower_triangle():
    text = """%%MatrixMarket matrix array real symmetric
2 2
1.0
2.0
3.0
"""
    d = to_dense(parse_matrix_market(text))
    np.testing.assert_array_equal(d, np.array([[1.0, 2.0], [2.0, 3.0]]))


def test_array_format_hermitian_and_skew():
    herm = """%%MatrixMarket matrix array complex hermitian
2 2
1.0 0.0
2.0 -1.0
3.0 0.0
"""
    d = to_dense(parse_matrix_market(herm))
    np.testing.assert_array_equal(d, np.array([[1.0, 2.0 + 1.0j], [2.0 - 1.0j, 3.0]]))
    assert np.array_equal(d, d.conj().T)
    skew = """%%MatrixMarket matrix array real skew-symmetric
2 2
4.0
"""
    d = to_dense(parse_matrix_market(skew))
    np.testing.assert_array_equal(d, np.array([[0.0, -4.0], [4.0, 0.0]]))


@pytest.mark.parametrize(
    "text, match",
    [
        ("junk\n1 1 1\n", "banner"),
        ("%%MatrixMarket matrix coordinate real\n1 1 1\n", "tokens"),
        ("%%MatrixMarket tensor coordinate real general\n1 1 1\n", "object"),
        ("%%MatrixMarket matrix coordinate real lower\n1 1 1\n", "symmetry"),
        ("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 2\n", "pattern"),
        ("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n", "mismatch"),
        (
            "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1.0\n2 2 2.0\n",
            "mismatch",
        ),
        ("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n", "range"),
        ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 nan\n", "finite"),
        (
            "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n1 1 2.0\n",
            "duplicate",
        ),
        (
            "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n2 1 1.0\n1 2 1.0\n",
            "duplicate",
        ),
        ("%%MatrixMarket matrix coordinate real general\n", "size"),
    ],
)
def test_parse_errors(text, match):
    with pytest.raises(MatrixMarketError, match=match):
        parse_matrix_market(text)


def test_to_dense_requires_square():
    t = SparseTriplets(2, 3, [(1, 1, 1.0 + 0j)])
    with pytest.raises(MatrixMarketError, match="square"):
        to_dense(t)


def test_to_dense_empty_entries():
    t = SparseTriplets(3, 3, [])
    np.testing.assert_array_equal(to_dense(t), np.zeros((3, 3)))


def test_coordinate_round_trip_exact():
    rng = np.random.default_rng(5)
    entries = []
    taken = set()
    while len(entries) < 25:
        r, c = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        if (r, c) in taken:
            continue
        taken.add((r, c))
        entries.append((r, c, complex(rng.standard_normal(), rng.standard_normal())))
    t = SparseTriplets(8, 8, entries)
    back = parse_matrix_market(write_coordinate(t))
    assert sorted(back.entries) == sorted(entries)


def test_array_round_trip_exact():
    rng = np.random.default_rng(6)
    m = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
    t = parse_matrix_market(write_array(m))
    dense = np.zeros((4, 3), dtype=complex)
    for r, c, v in t.entries:
        dense[r - 1, c - 1] = v
    assert np.array_equal(dense, m)


def test_frobenius_norm_two_ways_synthetic():
    rng = np.random.default_rng(7)
    entries = [
        (int(i + 1), int(j + 1), complex(rng.standard_normal(), rng.standard_normal()))
        for i in range(6)
        for j in range(6)
        if rng.uniform() < 0.4
    ]
    t = SparseTriplets(6, 6, entries)
    direct = np.sqrt(sum(abs(v) ** 2 for _, _, v in entries))
    assert abs(frobenius_norm(to_dense(t)) - direct) <= 1e-14 * max(direct, 1.0)


# ------------------------------------------------- optional corpus files


def test_bfw398_header_and_counts():
    path = corpus_path("bfw398a.mtx")
    if path is None:
        pytest.skip("bfw398a.mtx not present")
    t = load_matrix_market(path)
    assert t.nrows == t.ncols == 398
    assert len(t.entries) == 3678  # stored entries, unsymmetric matrix
    d = to_dense(t)
    direct = np.sqrt(sum(abs(v) ** 2 for _, _, v in t.entries))
    assert abs(frobenius_norm(d) - direct) <= 1e-14 * direct
