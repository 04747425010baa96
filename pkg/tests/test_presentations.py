from __future__ import annotations

import pytest

from conftest import el
from dualcox.absolute_order import Interval, interval
from dualcox.complex import AbelianGroup
from dualcox.presentations import (
    GroupPresentation,
    abelianization,
    artin_presentation,
    candidate_images,
    conjugation_closure,
    conjugation_table,
    coxeter_monoid,
    derived_generator_words,
    displayed_chains,
    phi,
    poset_presentation,
    reflection_presentation,
    verify_phi,
    verify_theta_identities,
)
from dualcox.dual_monoid import DualMonoid
from dualcox.signed_perm import GroupType, compose, inverse, parse_element

CASES = [("C", 2), ("C", 3), ("C", 4), ("D", 2), ("D", 3), ("D", 4)]


@pytest.fixture(scope="module")
def square():
    return Interval(GroupType("C", 2), el("[1] [2]", 2))


# --- emitted presentations ------------------------------------------------------

def test_square_poset_presentation(square):
    p = poset_presentation(square)
    rename = {"{[1]}": "a", "{[2]}": "b", "{(1,2)}": "c", "{(1,-2)}": "d", "{[1] [2]}": "x"}
    assert sorted(rename[g] for g in p.generators) == ["a", "b", "c", "d", "x"]
    rels = {("".join(rename[s] for s in lhs), "".join(rename[s] for s in rhs)) for lhs, rhs in p.relators}
    assert rels == {("ab", "x"), ("ba", "x"), ("cd", "x"), ("dc", "x")}


def test_rank_one_poset_presentation():
    p = poset_presentation(interval(GroupType("C", 1)))
    assert p.generators == ("{[1]}",) and p.relators == ()
    assert abelianization(p) == AbelianGroup(1)


def test_coxeter_c2_poset_presentation():
    iv = interval(GroupType("C", 2))
    p = poset_presentation(iv)
    assert len(p.generators) == 5
    assert len(p.relators) == len(DualMonoid(iv).relations) == 4


def test_generators_ordered_by_length_then_name():
    p = poset_presentation(interval(GroupType("C", 3)))
    iv = interval(GroupType("C", 3))
    assert p.generators == tuple("{" + iv.labels[x] + "}" for x in range(1, len(iv)))
    assert p.generators[-1] == "{[1,2,3]}"


def test_square_reflection_presentation(square):
    p = reflection_presentation(square)
    assert len(p.generators) == 4
    words = {p.relators[0][1]} | {lhs for lhs, _ in p.relators}
    assert len(words) == 4 and all(len(w) == 2 for w in words)


def test_reflection_presentation_counts():
    p = reflection_presentation(interval(GroupType("C", 3)))
    assert len(p.generators) == 9
    assert len(p.relators) == 26  # 27 words, each equated to the first
    single = reflection_presentation(Interval(GroupType("C", 2), el("(1,2)", 2)))
    assert single.generators == ("{(1,2)}",) and abelianization(single) == AbelianGroup(1)


def test_artin_texts():
    assert artin_presentation(GroupType("C", 2)).to_text() == "gens: x1, x2\nrels: x1 x2 x1 x2 = x2 x1 x2 x1\n"
    assert artin_presentation(GroupType("D", 2)).to_text() == "gens: x1, x2\nrels: x1 x2 = x2 x1\n"
    assert artin_presentation(GroupType("C", 3)).to_text() == (
        "gens: x1, x2, x3\nrels: x1 x2 x1 x2 = x2 x1 x2 x1\nrels: x2 x3 x2 = x3 x2 x3\nrels: x1 x3 = x3 x1\n"
    )
    d4 = artin_presentation(GroupType("D", 4)).relators
    assert (("x1", "x3", "x1"), ("x3", "x1", "x3")) in d4
    assert (("x1", "x4"), ("x4", "x1")) in d4
    assert (("x2", "x4"), ("x4", "x2")) in d4


@pytest.mark.parametrize("tag, n", [("C", 2), ("C", 5), ("D", 3), ("D", 6)])
def test_artin_relator_counts(tag, n):
    # one relator per pair of generators (Coxeter graph edges and commuting pairs)
    assert len(artin_presentation(GroupType(tag, n)).relators) == n * (n - 1) // 2


def test_artin_rank_too_small():
    with pytest.raises(ValueError):
        artin_presentation(GroupType("C", 1))


def test_undeclared_generator():
    with pytest.raises(ValueError):
        GroupPresentation(("a",), ((("a",), ("b",)),))


# --- abelianizations ------------------------------------------------------------

@pytest.mark.parametrize("n", range(2, 8))
def test_artin_abelianization(n):
    assert abelianization(artin_presentation(GroupType("C", n))) == AbelianGroup(2)
    expected = AbelianGroup(2) if n == 2 else AbelianGroup(1)
    assert abelianization(artin_presentation(GroupType("D", n))) == expected


@pytest.mark.parametrize("tag, n", CASES)
def test_abelianizations_agree(tag, n):
    iv = interval(GroupType(tag, n))
    a = abelianization(poset_presentation(iv))
    assert a == abelianization(reflection_presentation(iv))
    assert a == abelianization(artin_presentation(GroupType(tag, n)))


def test_square_abelianization(square):
    # a + b = c + d, free of rank 3
    assert abelianization(poset_presentation(square)) == AbelianGroup(3)
    assert abelianization(reflection_presentation(square)) == AbelianGroup(3)


# --- phi and derived words --------------------------------------------------------

def test_phi_images():
    gc = GroupType("C", 3)
    m = coxeter_monoid(gc)
    f = phi(gc, m)
    assert m.format_word(f.images["x1"]) == "([1])"
    assert m.format_word(f.images["x2"]) == "((1,2))"
    gd = GroupType("D", 3)
    md = coxeter_monoid(gd)
    g = phi(gd, md)
    assert md.format_word(g.images["x1"]) == "((1,-2))"
    assert md.format_word(g.images["x3"]) == "((2,3))"
    for images in (f.images, g.images):
        assert all(len(w) == 1 for w in images.values())


@pytest.mark.parametrize("tag, n", CASES)
def test_phi_images_are_atoms(tag, n):
    f = phi(GroupType(tag, n))
    iv = f.monoid.interval
    assert all(iv.lengths[w[0]] == 1 for w in f.images.values())
    assert len(set(f.images.values())) == n


def test_derived_words():
    d = derived_generator_words(GroupType("C", 4))
    for i in range(1, 4):
        assert d[f"x({i},{i + 1})"].lhs == (f"x({i},{i + 1})",)
        assert d[f"x({i},{i + 1})"].rhs == (f"x{i + 1}",)
    assert d["X"].lhs == ("X",) and d["X"].rhs == ("x1", "x2", "x3", "x4")
    assert d["y1"].lhs == ("y1",) and d["y1"].rhs == ("x1",)
    assert str(d["z(1,2)"]) == "z(1,2) y1 = y1 x(1,2)"


def test_derived_words_type_d():
    d = derived_generator_words(GroupType("D", 4))
    assert "y1" not in d
    assert str(d["z(1,3)"]) == "z(1,3) x1 = x1 x(2,3)"
    assert {"z(1,2)", "z(3,4)", "X"} <= set(d)


def test_candidate_images():
    gt = GroupType("C", 3)
    c = candidate_images(gt)
    m = c.monoid
    assert m.format_word(c.images["y2"]) == "([2])"
    assert m.format_word(c.images["z(1,3)"]) == "((1,-3))"
    assert m.format_word(c.images["x(1,3)"]) == "((1,3))"
    assert m.format_word(c.images["X"]) == "([1,2,3])"


def test_surjectivity_identity_example():
    # {[1]}{(1,2)} equals {(1,2)}{[2]}
    gt = GroupType("C", 2)
    m = coxeter_monoid(gt)
    iv = m.interval
    w = lambda *ts: tuple(iv.find(parse_element(t, 2)) for t in ts)  # noqa: E731
    assert m.word_problem(w("[1]", "(1,2)"), w("(1,2)", "[2]"))


def test_displayed_chain_c2():
    chains = dict(displayed_chains(GroupType("C", 2)))
    assert any(len(c) >= 3 for c in chains.values())
    first = next(iter(chains.values()))
    assert first[0] == ("[1]", "(1,2)", "[1]", "(1,2)")
    assert first[-1] == ("(1,2)", "[1]", "(1,2)", "[1]")


@pytest.mark.parametrize("tag, n", CASES)
def test_verify_phi(tag, n):
    report = verify_phi(GroupType(tag, n))
    assert report.ok, report.failures
    assert len(report.witnessed) == (n * n if tag == "C" else n * (n - 1))


@pytest.mark.parametrize("tag, n", CASES)
def test_verify_theta(tag, n):
    report = verify_theta_identities(GroupType(tag, n))
    assert report.ok, report.failures
    assert report.passed > 0


def test_conjugation_table_c2():
    m = coxeter_monoid(GroupType("C", 2))
    iv = m.interval
    table = conjugation_table(m)
    one, two = (iv.find(parse_element(t, 2)) for t in ("[1]", "[2]"))
    assert table[one] == two
    top = iv.top
    assert m.word_problem((top, one), (two, top))


@pytest.mark.parametrize("tag", ["C", "D"])
@pytest.mark.parametrize("n", range(2, 7))
def test_conjugation_closure(tag, n):
    report = conjugation_closure(GroupType(tag, n))
    assert report.ok, report.failures


def test_conjugation_table_is_a_permutation_of_atoms():
    m = coxeter_monoid(GroupType("D", 4))
    iv = m.interval
    g = iv.gamma
    table = conjugation_table(m)
    assert sorted(table) == sorted(table.values()) == sorted(iv.atoms)
    for r, s in table.items():
        assert iv.elements[s] == compose(compose(g, iv.elements[r]), inverse(g))
