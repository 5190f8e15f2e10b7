import itertools
import json
from math import comb

import numpy as np
import pytest

from asq.errors import BadDivisor, FormatError, IndexOutOfRange, NonSymmetric, SizeCap
from asq.field import make_field
from asq.scheme import (
    AssociationScheme,
    adjacency_matrix,
    all_products_exact,
    cyclotomic_scheme,
    hamming_scheme,
    intersection_numbers,
    load_scheme,
    one_class_scheme,
    save_scheme,
    scheme_from_dict,
    scheme_hash,
    scheme_to_dict,
    verify_axioms,
)

from conftest import small_schemes


def brute_intersection(s):
    """p[i][j][k] from a pure-Python triple loop over one pair per class."""
    m = s.d + 1
    rel = s.relation.tolist()
    p = np.zeros((m, m, m), dtype=np.int64)
    done = set()
    for x, y in itertools.product(range(s.n), repeat=2):
        k = rel[x][y]
        if k in done:
            continue
        done.add(k)
        for z in range(s.n):
            p[rel[x][z], rel[z][y], k] += 1
    return p


def test_paley5_relation_matches_squares():
    s = cyclotomic_scheme(make_field(5), 2)
    squares = {x * x % 5 for x in range(1, 5)}
    assert squares == {1, 4}
    for x, y in itertools.product(range(5), repeat=2):
        expected = 0 if x == y else (1 if (x - y) % 5 in squares else 2)
        assert s.relation[x, y] == expected
    A1 = adjacency_matrix(s, 1)
    assert A1[0].tolist() == [0, 1, 0, 0, 1]
    assert np.array_equal(A1, np.roll(A1, 1, axis=(0, 1)))  # circulant


@pytest.mark.parametrize(
    "scheme,valencies",
    [
        (lambda: cyclotomic_scheme(make_field(13), 3), [1, 4, 4, 4]),
        (lambda: hamming_scheme(1), [1, 1]),
        (lambda: hamming_scheme(2), [1, 2, 1]),
        (lambda: hamming_scheme(4), [comb(4, k) for k in range(5)]),
        (lambda: one_class_scheme(5), [1, 4]),
    ],
)
def test_valencies_by_row_sums(scheme, valencies):
    s = scheme()
    for i, k in enumerate(valencies):
        assert np.all(adjacency_matrix(s, i, dtype=int).sum(axis=1) == k)
    assert s.valencies.tolist() == valencies


def test_one_class_relations():
    assert one_class_scheme(2).relation.tolist() == [[0, 1], [1, 0]]
    J = np.ones((3, 3))
    assert np.array_equal(adjacency_matrix(one_class_scheme(3), 1), J - np.eye(3))
    with pytest.raises(ValueError):
        one_class_scheme(1)


def test_cyclotomic_errors():
    with pytest.raises(NonSymmetric):
        cyclotomic_scheme(make_field(5), 4)
    with pytest.raises(BadDivisor):
        cyclotomic_scheme(make_field(13), 5)
    with pytest.raises(BadDivisor):
        cyclotomic_scheme(make_field(13), 1)


def test_cyclotomic_char2_is_symmetric_with_odd_cosets():
    s = cyclotomic_scheme(make_field(2, 3), 7)  # (q-1)/d = 1 is odd, but -1 = 1
    assert s.is_symmetric and verify_axioms(s).overall


def test_hamming_cap():
    with pytest.raises(SizeCap):
        hamming_scheme(13)
    with pytest.raises(SizeCap):
        hamming_scheme(0)


def test_adjacency_index_error(paley5):
    with pytest.raises(IndexOutOfRange):
        adjacency_matrix(paley5, 3)
    assert np.array_equal(adjacency_matrix(paley5, 0), np.eye(5))


@pytest.mark.parametrize("s", small_schemes(), ids=repr)
def test_generated_schemes_pass_axioms(s):
    rep = verify_axioms(s)
    assert rep.overall, rep.format_table()
    A = s.adjacency_stack(dtype=np.int64)
    assert np.array_equal(A.sum(axis=0), np.ones((s.n, s.n), dtype=np.int64))
    for i, j in itertools.product(range(s.d + 1), repeat=2):
        assert np.array_equal(A[i] @ A[j], A[j] @ A[i])


@pytest.mark.parametrize("s", small_schemes(), ids=repr)
def test_intersection_numbers_match_brute_force(s):
    inter = intersection_numbers(s)
    assert np.array_equal(inter.p, brute_intersection(s))
    assert all_products_exact(s, inter.p)
    m = s.d + 1
    assert np.array_equal(inter.p[0], np.eye(m, dtype=np.int64))
    assert inter.valencies.sum() == s.n


def test_intersection_example_cyc13():
    s = cyclotomic_scheme(make_field(13), 3)
    assert intersection_numbers(s).p[1, 1, 0] == 4


def test_axiom1_violation():
    rel = one_class_scheme(4).relation.copy()
    rel[0, 0] = 1
    rep = verify_axioms(AssociationScheme(4, 1, rel))
    assert not rep["axiom1_identity"].passed
    assert not rep.overall


def test_axiom4_violation_on_path_graph():
    # splitting J - I of K4 into a path and its complement is not a scheme
    rel = np.full((4, 4), 2)
    np.fill_diagonal(rel, 0)
    for a, b in [(0, 1), (1, 2), (2, 3)]:
        rel[a, b] = rel[b, a] = 1
    rep = verify_axioms(AssociationScheme(4, 2, rel))
    assert rep["axiom1_identity"].passed and rep["axiom3_transpose"].passed
    assert not rep["axiom4_products"].passed


def test_axiom3_violation():
    # a tournament on 3 points that is not closed under transposition
    rel = np.array([[0, 1, 2], [2, 0, 1], [1, 1, 0]])
    rep = verify_axioms(AssociationScheme(3, 2, rel))
    assert not rep["axiom3_transpose"].passed


def test_nonsymmetric_scheme_is_still_a_scheme():
    # directed 3-cycle: A_1^T = A_2
    rel = np.array([[(x - y) % 3 for y in range(3)] for x in range(3)])
    s = AssociationScheme(3, 2, rel)
    assert verify_axioms(s).overall
    assert not s.is_symmetric


def test_empty_class_flagged():
    rel = one_class_scheme(3).relation
    rep = verify_axioms(AssociationScheme(3, 2, rel))
    assert not rep["axiom2_partition"].passed


def test_json_round_trip(tmp_path, cyc13_3):
    path = tmp_path / "s.json"
    save_scheme(cyc13_3, path)
    doc = json.loads(path.read_text())
    assert doc["format"] == "asq-scheme" and doc["version"] == 1
    assert doc["n"] == 13 and doc["d"] == 3 and len(doc["relation"]) == 169
    back = load_scheme(path)
    assert back == cyc13_3
    assert scheme_hash(back) == scheme_hash(cyc13_3)
    assert scheme_to_dict(back) == doc


def test_scheme_hash_distinguishes():
    assert scheme_hash(one_class_scheme(4)) != scheme_hash(one_class_scheme(5))
    assert scheme_hash(hamming_scheme(2)) != scheme_hash(one_class_scheme(4))


@pytest.mark.parametrize(
    "doc",
    [
        {"format": "other", "version": 1, "n": 1, "d": 0, "relation": [0]},
        {"format": "asq-scheme", "version": 2, "n": 1, "d": 0, "relation": [0]},
        {"format": "asq-scheme", "version": 1, "n": 2, "d": 1, "relation": [0, 1, 1]},
        {"format": "asq-scheme", "version": 1, "n": 2, "d": 1, "relation": [0, 1.5, 1, 0]},
        {"format": "asq-scheme", "version": 1, "n": 2, "d": 1, "relation": [0, 7, 1, 0]},
        {"format": "asq-scheme", "version": 1, "n": 2},
        [1, 2, 3],
    ],
)
def test_malformed_scheme_documents(doc):
    with pytest.raises(FormatError):
        scheme_from_dict(doc)


def test_load_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(FormatError):
        load_scheme(path)
