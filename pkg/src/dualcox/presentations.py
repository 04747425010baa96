"""Group presentations attached to an interval, and positive-word identity checks.

Artin words use the symbols ``x1 .. xn``; the derived symbols ``x(i,j)``,
``y<j>``, ``z(i,j)`` and ``X`` are pinned down by positive identities (for
instance ``z(i,j) y<i> = y<i> x(i,j)``).  Every identity is transported into
the positive monoid of the Coxeter interval by substituting a candidate
element for each symbol, and is then decided by the normal form.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from dualcox.absolute_order import Interval, interval, leq
from dualcox.complex import AbelianGroup, group_from_relations
from dualcox.dual_monoid import DualMonoid, Word, relations
from dualcox.signed_perm import (
    GroupType,
    conjugate,
    coxeter_element,
    parse_element,
    reflection_length,
    reflections,
)

Symbols = tuple[str, ...]


@dataclass(frozen=True)
class GroupPresentation:
    """Generators and relators, each relator an equation ``lhs = rhs``."""

    generators: Symbols
    relators: tuple[tuple[Symbols, Symbols], ...]

    def __post_init__(self) -> None:
        known = set(self.generators)
        for lhs, rhs in self.relators:
            for s in lhs + rhs:
                if s not in known:
                    raise ValueError(f"relator uses undeclared generator {s!r}")

    def to_text(self) -> str:
        lines = ["gens: " + ", ".join(self.generators)]
        for lhs, rhs in self.relators:
            lines.append(f"rels: {' '.join(lhs)} = {' '.join(rhs)}")
        return "\n".join(lines) + "\n"

    def exponent_matrix(self) -> list[tuple[int, int, int]]:
        col = {g: i for i, g in enumerate(self.generators)}
        out = []
        for r, (lhs, rhs) in enumerate(self.relators):
            sums = Counter(lhs)
            sums.subtract(Counter(rhs))
            out.extend((r, col[g], v) for g, v in sums.items() if v)
        return out


@dataclass(frozen=True)
class Identity:
    lhs: Symbols
    rhs: Symbols
    label: str = ""

    def __str__(self) -> str:
        return f"{' '.join(self.lhs)} = {' '.join(self.rhs)}"


@dataclass
class GeneratorMap:
    """Symbol -> positive word in the interval's monoid."""

    monoid: DualMonoid
    images: dict[str, Word]

    def word(self, symbols: Iterable[str]) -> Word:
        return tuple(x for s in symbols for x in self.images[s])

    def describe(self) -> list[str]:
        return [f"{s} -> {self.monoid.format_word(w)}" for s, w in self.images.items()]


@dataclass
class VerificationReport:
    name: str
    passed: int = 0
    failures: list[str] = field(default_factory=list)
    witnessed: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, ok: bool, what: str) -> None:
        if ok:
            self.passed += 1
        else:
            self.failures.append(what)

    def __str__(self) -> str:
        return f"{self.name}: passed={self.passed} failures={len(self.failures)}"


def _name(iv: Interval, x: int) -> str:
    return "{" + iv.labels[x] + "}"


# --- presentations ------------------------------------------------------------

def poset_presentation(iv: Interval) -> GroupPresentation:
    gens = tuple(_name(iv, x) for x in range(1, len(iv)))
    rels = tuple(((_name(iv, r.left[0]), _name(iv, r.left[1])), (_name(iv, r.right),)) for r in relations(iv))
    return GroupPresentation(gens, rels)


def reflection_presentation(iv: Interval) -> GroupPresentation:
    """Reflections below gamma, with every factorization word of gamma equated to the first."""
    monoid = DualMonoid(iv)
    gens = tuple(_name(iv, a) for a in iv.atoms)
    words = [tuple(_name(iv, a) for a in f) for f in monoid.factorizations[iv.top]]
    return GroupPresentation(gens, tuple((w, words[0]) for w in words[1:]))


def _x(*ks: int) -> Symbols:
    return tuple(f"x{k}" for k in ks)


def artin_presentation(gt: GroupType) -> GroupPresentation:
    n = gt.n
    if n < 2:
        raise ValueError("Artin presentations need rank at least 2")
    rels: list[tuple[Symbols, Symbols]] = []
    if gt.tag == "C":
        rels.append((_x(1, 2, 1, 2), _x(2, 1, 2, 1)))
        for i in range(2, n):
            rels.append((_x(i, i + 1, i), _x(i + 1, i, i + 1)))
        for i in range(1, n + 1):
            for j in range(i + 2, n + 1):
                rels.append((_x(i, j), _x(j, i)))
    else:
        rels.append((_x(1, 2), _x(2, 1)))
        if n >= 3:
            rels.append((_x(1, 3, 1), _x(3, 1, 3)))
        for i in range(4, n + 1):
            rels.append((_x(1, i), _x(i, 1)))
        for i in range(2, n):
            rels.append((_x(i, i + 1, i), _x(i + 1, i, i + 1)))
        for i in range(2, n + 1):
            for j in range(i + 2, n + 1):
                rels.append((_x(i, j), _x(j, i)))
    return GroupPresentation(_x(*range(1, n + 1)), tuple(rels))


def abelianization(p: GroupPresentation) -> AbelianGroup:
    return group_from_relations(len(p.generators), p.exponent_matrix(), len(p.relators))


# --- phi and derived symbols --------------------------------------------------

def coxeter_monoid(gt: GroupType) -> DualMonoid:
    return DualMonoid(interval(gt))


def _letter(iv: Interval, text: str) -> int:
    x = iv.find(parse_element(text, iv.group.n))
    if x is None or x == 0:
        raise ValueError(f"{text} is not a non-identity element below gamma")
    return x


def _generator_literal(gt: GroupType, k: int) -> str:
    if k == 1:
        return "[1]" if gt.tag == "C" else "(1,-2)"
    return f"({k - 1},{k})"


def phi(gt: GroupType, monoid: DualMonoid | None = None) -> GeneratorMap:
    monoid = monoid or coxeter_monoid(gt)
    iv = monoid.interval
    images = {f"x{k}": (_letter(iv, _generator_literal(gt, k)),) for k in range(1, gt.n + 1)}
    return GeneratorMap(monoid, images)


def _xx(i: int, j: int) -> str:
    return f"x({i},{j})"


def _z(i: int, j: int) -> str:
    return f"z({i},{j})"


def _y(j: int) -> str:
    return f"y{j}"


def _Y(i: int, j: int) -> Symbols:
    """``Y(i,j) = x_{i+1} ... x_j``."""
    return _x(*range(i + 1, j + 1))


def derived_generator_words(gt: GroupType) -> dict[str, Identity]:
    """One inverse-free defining identity per derived symbol."""
    n = gt.n
    out: dict[str, Identity] = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out[_xx(i, j)] = Identity(_Y(i + 1, j) + (_xx(i, j),), _Y(i, j), "Y(i+1,j) x(i,j) = Y(i,j)")
    if gt.tag == "C":
        out[_y(1)] = Identity((_y(1),), _x(1), "y1 = x1")
        for j in range(2, n + 1):
            out[_y(j)] = Identity(_x(*range(1, j + 1)), _x(*range(2, j + 1)) + (_y(j),), "x1..xj = x2..xj yj")
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                out[_z(i, j)] = Identity((_z(i, j), _y(i)), (_y(i), _xx(i, j)), "z(i,j) yi = yi x(i,j)")
    else:
        out[_z(1, 2)] = Identity((_z(1, 2),), _x(1), "z(1,2) = x1")
        for j in range(3, n + 1):
            out[_z(1, j)] = Identity((_z(1, j), "x1"), ("x1", _xx(2, j)), "z(1,j) x1 = x1 x(2,j)")
            out[_z(2, j)] = Identity((_z(2, j), "x1"), ("x1", _xx(1, j)), "z(2,j) x1 = x1 x(1,j)")
        for i in range(3, n + 1):
            for j in range(i + 1, n + 1):
                out[_z(i, j)] = Identity(
                    (_z(i, j), _xx(1, i), _z(1, i)),
                    (_xx(1, i), _z(1, i), _xx(i, j)),
                    "z(i,j) x(1,i) z(1,i) = x(1,i) z(1,i) x(i,j)",
                )
    out["X"] = Identity(("X",), _x(*range(1, n + 1)), "X = x1..xn")
    return out


def auxiliary_identities(gt: GroupType) -> list[Identity]:
    """Consequences of the defining identities used to compute the X-action."""
    n = gt.n
    out: list[Identity] = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(j + 1, n + 1):
                out.append(Identity((_xx(i, j), _xx(j, k)), (_xx(j, k), _xx(i, k)), "braid triangle"))
                out.append(Identity((_xx(j, k), _xx(i, k)), (_xx(i, k), _xx(i, j)), "braid triangle"))
    X = ("X",)
    if gt.tag == "C":
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                out.append(Identity(_Y(i, j) + (_y(j),), (_y(i),) + _Y(i, j), "Y(i,j) yj = yi Y(i,j)"))
        for j in range(3, n + 1):
            out.append(Identity((_y(j), _z(1, j)), (_xx(1, j), _y(j)), "yj z(1,j) = x(1,j) yj"))
        for i in range(2, n):
            out.append(Identity(X + _x(i), _x(i + 1) + X, "X xi = x(i+1) X"))
        for j in range(1, n):
            out.append(Identity(X + (_y(j),), (_y(j + 1),) + X, "X yj = y(j+1) X"))
        out.append(Identity(X + (_y(n),), _x(1) + X, "X yn = x1 X"))
        for i in range(1, n):
            out.append(Identity(X + (_xx(i, n),), (_z(1, i + 1),) + X, "X x(i,n) = z(1,i+1) X"))
            out.append(Identity(X + (_z(i, n),), (_xx(1, i + 1),) + X, "X z(i,n) = x(1,i+1) X"))
            for j in range(i + 1, n):
                out.append(Identity(X + (_xx(i, j),), (_xx(i + 1, j + 1),) + X, "X x(i,j) = x(i+1,j+1) X"))
                out.append(Identity(X + (_z(i, j),), (_z(i + 1, j + 1),) + X, "X z(i,j) = z(i+1,j+1) X"))
        return out

    for j in range(3, n + 1):
        out.append(Identity((_xx(2, j), _z(1, j)), ("x1", _xx(2, j)), "x(2,j) z(1,j) = x1 x(2,j)"))
        out.append(Identity((_xx(1, j), _z(2, j)), ("x1", _xx(1, j)), "x(1,j) z(2,j) = x1 x(1,j)"))
        out.append(Identity((_xx(1, j), _z(1, j)), (_z(1, j), _xx(1, j)), "x(1,i) z(1,i) = z(1,i) x(1,i)"))
        out.append(Identity((_z(2, j), "x2"), ("x2", _z(1, j)), "z(2,p) x2 = x2 z(1,p)"))
        out.append(Identity((_xx(1, j), _xx(1, 2)), (_xx(1, 2), _xx(2, j)), "x(1,p) x(1,2) = x(1,2) x(2,p)"))
    if n >= 3:
        out.append(Identity(X + _x(1), (_xx(1, 3),) + X, "X x1 = x(1,3) X"))
        out.append(Identity(X + _x(2), (_z(1, 3),) + X, "X x2 = z(1,3) X"))
        out.append(Identity(X + _x(n), (_z(2, n),) + X, "X xn = z(2,n) X"))
    for i in range(3, n):
        out.append(Identity(X + _x(i), _x(i + 1) + X, "X xi = x(i+1) X"))
        for j in range(i + 1, n):
            out.append(Identity(X + (_xx(i, j),), (_xx(i + 1, j + 1),) + X, "X x(i,j) = x(i+1,j+1) X"))
    for j in range(2, n):
        out.append(Identity(X + (_xx(1, j),), (_z(1, j + 1),) + X, "X x(1,j) = z(1,j+1) X"))
    out.append(Identity(X + (_xx(1, n),), _x(2) + X, "X x(1,n) = x2 X"))
    for i in range(2, n):
        out.append(Identity(X + (_xx(i, n),), (_z(2, i + 1),) + X, "X x(i,n) = z(2,i+1) X"))
        out.append(Identity(X + (_z(i, n),), (_xx(2, i + 1),) + X, "X z(i,n) = x(2,i+1) X"))
        for j in range(i + 1, n):
            out.append(Identity(X + (_z(i, j),), (_z(i + 1, j + 1),) + X, "X z(i,j) = z(i+1,j+1) X"))
    for j in range(3, n):
        out.append(Identity(X + (_z(1, j),), (_xx(1, j + 1),) + X, "X z(1,j) = x(1,j+1) X"))
    if n >= 3:
        out.append(Identity(X + (_z(1, n),), _x(1) + X, "X z(1,n) = x1 X"))
    return out


def candidate_images(gt: GroupType, monoid: DualMonoid | None = None) -> GeneratorMap:
    """The element each derived symbol should correspond to under the isomorphism."""
    base = phi(gt, monoid)
    monoid = base.monoid
    iv = monoid.interval
    n = gt.n
    images = dict(base.images)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            images[_xx(i, j)] = (_letter(iv, f"({i},{j})"),)
            images[_z(i, j)] = (_letter(iv, f"({i},-{j})"),)
    if gt.tag == "C":
        for j in range(1, n + 1):
            images[_y(j)] = (_letter(iv, f"[{j}]"),)
    images["X"] = (iv.top,)
    return GeneratorMap(monoid, images)


# --- verification batteries ---------------------------------------------------

def _check_identity(report: VerificationReport, images: GeneratorMap, ident: Identity) -> None:
    m = images.monoid
    a, b = images.word(ident.lhs), images.word(ident.rhs)
    ok = m.word_problem(a, b)
    report.record(ok, f"{ident}  [{ident.label}]: {m.format_word(a)} vs {m.format_word(b)}")


def displayed_chains(gt: GroupType) -> list[tuple[str, list[tuple[str, ...]]]]:
    """Chains of element words, each word positively equal to the next."""
    n = gt.n
    out: list[tuple[str, list[tuple[str, ...]]]] = []
    if gt.tag == "C":
        if n >= 2:
            out.append(("x1x2x1x2 = x2x1x2x1", [
                ("[1]", "(1,2)", "[1]", "(1,2)"),
                ("[1,2]", "[1,2]"),
                ("(1,2)", "[2]", "(1,-2)", "[1]"),
                ("(1,2)", "[1,2]", "[1]"),
                ("(1,2)", "[1]", "(1,2)", "[1]"),
            ]))
        for i in range(2, n):
            out.append((f"x1x{i + 1} = x{i + 1}x1", [("[1]", f"({i},{i + 1})"), (f"({i},{i + 1})", "[1]")]))
        return out
    out.append(("x1x2 = x2x1", [("(1,-2)", "(1,2)"), ("[1] [2]",), ("(1,2)", "(1,-2)")]))
    if n >= 3:
        out.append(("x1x3x1 = x3x1x3", [
            ("(1,-2)", "(2,3)", "(1,-2)"),
            ("(1,-2,-3)", "(1,-2)"),
            ("(2,3)", "(1,-3)", "(1,-2)"),
            ("(2,3)", "(1,-2,-3)"),
            ("(2,3)", "(1,-2)", "(2,3)"),
        ]))
    for i in range(3, n):
        out.append((f"x1x{i + 1} = x{i + 1}x1", [("(1,-2)", f"({i},{i + 1})"), (f"({i},{i + 1})", "(1,-2)")]))
    return out


def _run(seq: Sequence[int]) -> str:
    return ",".join(str(k) for k in seq)


def surjectivity_steps(gt: GroupType) -> list[tuple[str, list[tuple[str, ...]]]]:
    """``(target, chain)``: each chain shows the target lift lies in the image of phi."""
    n = gt.n
    gen = [None] + [_generator_literal(gt, k) for k in range(1, n + 1)]
    steps: list[tuple[str, list[tuple[str, ...]]]] = []
    for span in range(2, n):
        for i in range(1, n - span + 1):
            j = i + span
            steps.append((f"({i},{j})", [
                tuple(gen[k] for k in range(i + 2, j + 1)) + (f"({i},{j})",),
                tuple(gen[k] for k in range(i + 1, j + 1)),
                (f"({_run(range(i, j + 1))})",),
            ]))
    if gt.tag == "C":
        for j in range(2, n + 1):
            steps.append((f"[{j}]", [("[1]", f"(1,{j})"), (f"[1,{j}]",), (f"(1,{j})", f"[{j}]")]))
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                steps.append((f"({i},-{j})", [(f"({i},{j})", f"[{j}]"), (f"[{i},{j}]",), (f"[{j}]", f"({i},-{j})")]))
        return steps
    for j in range(3, n + 1):
        steps.append((f"(1,-{j})", [
            tuple(gen[k] for k in range(1, j + 1)),
            ("(1,-2)", f"({_run(range(1, j + 1))})"),
            (f"[1] [{_run(range(2, j + 1))}]",),
            (f"({_run(range(1, j + 1))})", f"(1,-{j})"),
        ]))
    for j in range(3, n + 1):
        steps.append((f"(2,-{j})", [("(1,-2)", f"(1,{j})"), (f"(1,{j},-2)",), (f"(2,-{j})", "(1,-2)")]))
    for i in range(3, n + 1):
        for j in range(i + 1, n + 1):
            steps.append((f"({i},-{j})", [
                (f"({i},-{j})", f"(1,{i})", f"(1,-{i})"),
                (f"[1] [{i},{j}]",),
                (f"(1,{i})", f"(1,-{i})", f"({i},{j})"),
            ]))
    return steps


def _check_chain(report: VerificationReport, m: DualMonoid, label: str, chain: list[tuple[str, ...]]) -> list[Word] | None:
    iv = m.interval
    try:
        words = [tuple(_letter(iv, t) for t in w) for w in chain]
    except ValueError as exc:
        report.record(False, f"{label}: {exc}")
        return None
    for a, b in zip(words, words[1:]):
        report.record(m.word_problem(a, b), f"{label}: {m.format_word(a)} = {m.format_word(b)}")
    return words


def verify_phi(gt: GroupType, monoid: DualMonoid | None = None) -> VerificationReport:
    """Relators map to equal positive words; every reflection lift is reached."""
    images = phi(gt, monoid)
    m = images.monoid
    iv = m.interval
    report = VerificationReport(f"phi {gt}")
    if gt.n >= 2:
        for lhs, rhs in artin_presentation(gt).relators:
            _check_identity(report, images, Identity(lhs, rhs, "Artin relator"))
    for label, chain in displayed_chains(gt):
        _check_chain(report, m, label, chain)

    facts = m.factorizations
    known = {w[0] for w in images.images.values()}
    report.witnessed.extend(iv.labels[x] for x in sorted(known))

    def reachable(x: int) -> bool:
        return any(all(a in known for a in f) for f in facts[x])

    for target, chain in surjectivity_steps(gt):
        words = _check_chain(report, m, f"lift {target}", chain)
        if words is None:
            continue
        t = _letter(iv, target)
        others = [x for w in words for x in w if x != t]
        present = any(t in w for w in words)
        ok = present and all(reachable(x) for x in others)
        report.record(ok, f"lift {target}: uses letters not yet in the image")
        if ok and t not in known:
            known.add(t)
            report.witnessed.append(iv.labels[t])
    missing = [iv.labels[a] for a in iv.atoms if a not in known]
    report.record(not missing, f"reflection lifts not witnessed: {missing}")
    return report


def conjugation_table(monoid: DualMonoid) -> dict[int, int]:
    iv = monoid.interval
    g = iv.gamma
    return {a: iv.index[conjugate(g, iv.elements[a])] for a in iv.atoms}


def verify_theta_identities(gt: GroupType, monoid: DualMonoid | None = None) -> VerificationReport:
    images = candidate_images(gt, monoid)
    m = images.monoid
    iv = m.interval
    report = VerificationReport(f"theta {gt}")
    # (i) defining identities and their consequences
    for ident in list(derived_generator_words(gt).values()) + auxiliary_identities(gt):
        _check_identity(report, images, ident)
    # (ii) conjugation by gamma, against both {gamma} and phi(X)
    phi_x = images.word(_x(*range(1, gt.n + 1)))
    for r, s in conjugation_table(m).items():
        for top in ((iv.top,), phi_x):
            a, b = top + (r,), (s,) + top
            report.record(m.word_problem(a, b), f"conjugation {m.format_word(a)} = {m.format_word(b)}")
    # (iii) every lift of gamma equals phi(X)
    for f in m.factorizations[iv.top]:
        report.record(m.word_problem(f, phi_x), f"lift {m.format_word(f)} = {m.format_word(phi_x)}")
    return report


def conjugation_closure(gt: GroupType) -> VerificationReport:
    """R -> gamma R gamma^-1 permutes the reflections below gamma (no interval needed)."""
    g = coxeter_element(gt)
    report = VerificationReport(f"conjugation closure {gt}")
    below = {r.perm(gt.n) for r in reflections(gt) if leq(r.perm(gt.n), g)}
    image = set()
    for r in below:
        c = conjugate(g, r)
        image.add(c)
        report.record(c in below and reflection_length(c) == 1, f"{r} conjugates outside the set")
    report.record(image == below, "conjugation is not a bijection")
    return report

