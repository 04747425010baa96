from __future__ import annotations

import json
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import el
from dualcox.absolute_order import Interval, interval
from dualcox.complex import (
    AbelianGroup,
    MatrixTooLarge,
    _dense_smith,
    _faces,
    boundary_matrix,
    build_complex,
    compose_boundaries,
    count_chains,
    euler_characteristic,
    group_from_relations,
    homology,
    smith_invariants,
)
from dualcox.signed_perm import GroupType

FACE_VECTORS = {
    ("C", 1): (1, 1),
    ("C", 2): (1, 5, 4),
    ("C", 3): (1, 19, 45, 27),
    ("C", 4): (1, 69, 356, 544, 256),
    ("D", 2): (1, 3, 2),
    ("D", 3): (1, 13, 28, 16),
    ("D", 4): (1, 49, 237, 351, 162),
}

HOMOLOGY = {
    ("C", 1): ("Z", "Z", "0"),
    ("C", 2): ("Z", "Z^2", "Z"),
    ("C", 3): ("Z", "Z^2", "Z^2"),
    ("C", 4): ("Z", "Z^2", "Z^2 + Z/2"),
    ("D", 2): ("Z", "Z^2", "Z"),
    ("D", 3): ("Z", "Z", "Z/2"),
    ("D", 4): ("Z", "Z", "Z/2 + Z/2 + Z/2"),
}


_complexes: dict = {}


def cx_for(tag, n):
    if (tag, n) not in _complexes:
        _complexes[(tag, n)] = build_complex(interval(GroupType(tag, n)))
    return _complexes[(tag, n)]


@pytest.mark.parametrize("case", sorted(FACE_VECTORS))
def test_face_vector(case):
    cx = cx_for(*case)
    assert cx.face_vector == FACE_VECTORS[case]
    assert count_chains(cx.interval) == FACE_VECTORS[case]


@pytest.mark.parametrize("case", sorted(FACE_VECTORS))
def test_euler_characteristic_vanishes(case):
    assert euler_characteristic(cx_for(*case)) == 0


@pytest.mark.parametrize("case", sorted(FACE_VECTORS))
def test_boundary_squares_to_zero(case):
    cx = cx_for(*case)
    for k in range(2, cx.dimension + 1):
        assert compose_boundaries(cx, k) == []


@pytest.mark.parametrize("case", sorted(HOMOLOGY))
def test_homology(case):
    assert tuple(str(h) for h in homology(cx_for(*case))) == HOMOLOGY[case]


def test_top_cells_are_maximal_chains():
    cx = cx_for("C", 3)
    iv = cx.interval
    for chain in cx.cells_by_dim[-1]:
        assert chain[-1] == iv.top
        assert [iv.lengths[w] for w in chain] == [1, 2, 3]


def test_faces_of_an_edge_are_vertices():
    cx = cx_for("C", 2)
    iv = cx.interval
    for chain in cx.cells_by_dim[2]:
        first, second, third = _faces(cx, chain)
        assert iv.lengths[first[0]] == 1
        assert second == (chain[1],) and third == (chain[0],)


def test_one_cells_all_are_cycles():
    # with one vertex, d_1 vanishes
    for case in FACE_VECTORS:
        assert boundary_matrix(cx_for(*case), 1) == []


def test_non_coxeter_square_complex():
    iv = Interval(GroupType("C", 2), el("[1] [2]", 2))
    cx = build_complex(iv)
    assert cx.face_vector == (1, 5, 4)
    assert [str(h) for h in homology(cx)] == ["Z", "Z^3", "Z^2"]


def test_json_export():
    data = json.loads(json.dumps(cx_for("C", 2).to_json()))
    assert data["face_vector"] == [1, 5, 4]
    assert data["euler_characteristic"] == 0
    assert len(data["cells"][1]) == 5
    assert set(data["boundary"]) == {"1", "2"}
    assert all(len(t) == 3 for t in data["boundary"]["2"])


def test_homology_bounds():
    with pytest.raises(ValueError):
        homology(cx_for("C", 2), up_to=3)
    assert [str(h) for h in homology(cx_for("C", 2), up_to=1)] == ["Z", "Z^2"]


# --- Smith normal form ------------------------------------------------------------

def _det(m):
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(len(m)))


def determinantal_invariants(m):
    """Invariant factors from gcds of minors, independent of elimination."""
    n_rows, n_cols = len(m), len(m[0])
    divisors = [1]
    for k in range(1, min(n_rows, n_cols) + 1):
        g = 0
        for rs in combinations(range(n_rows), k):
            for cs in combinations(range(n_cols), k):
                g = gcd(g, _det([[m[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[i + 1] // divisors[i] for i in range(len(divisors) - 1)]


def _triples(m):
    return [(i, j, v) for i, row in enumerate(m) for j, v in enumerate(row) if v]


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=300, deadline=None)
@given(matrices)
def test_smith_matches_determinantal_divisors(m):
    expected = determinantal_invariants(m)
    assert _dense_smith(m) == expected
    assert sorted(smith_invariants(_triples(m), (len(m), len(m[0])))) == sorted(expected)


@pytest.mark.parametrize(
    "m, invariants",
    [([[2, 0], [0, 3]], [1, 6]), ([[2, 4], [6, 8]], [2, 4]), ([[0, 0], [0, 0]], []), ([[1, 1], [1, 1]], [1])],
)
def test_smith_examples(m, invariants):
    assert _dense_smith(m) == invariants


def test_group_from_relations():
    # Z^3 / <(2,0,0), (0,1,1)>
    g = group_from_relations(3, [(0, 0, 2), (1, 1, 1), (1, 2, 1)], 2)
    assert g == AbelianGroup(1, (2,))
    assert str(g) == "Z + Z/2"
    assert str(AbelianGroup(0)) == "0"


def test_matrix_limit(monkeypatch):
    import dualcox.complex as complex_module

    monkeypatch.setattr(complex_module, "MATRIX_LIMIT", 3)
    with pytest.raises(MatrixTooLarge):
        smith_invariants([(0, 0, 2), (0, 1, 2), (1, 0, 2), (1, 1, 4)], (2, 2))
    with pytest.raises(MatrixTooLarge):
        smith_invariants([(0, 0, 2), (0, 1, 4), (1, 0, 6)], (2, 2))
