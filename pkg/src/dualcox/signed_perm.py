"""Signed permutations: the hyperoctahedral group C_n and its subgroup D_n.

An element is stored by its images of 1..n; ``a(-i) == -a(i)`` is implied.
Products follow the usual map convention: ``compose(a, b)`` is ``a∘b``, so
``b`` acts first.  With this convention ``[i1,...,ik][ik] == (i1,...,ik)``.

Text grammar (parse and print):

    I               identity
    [i1,...,ik]     balanced cycle  i1 -> i2 -> ... -> ik -> -i1 -> ...
    (i1,...,ik)     paired cycle    (i1,...,ik)(-i1,...,-ik)
    [1] (2,3)       disjoint product, cycles separated by spaces
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Literal, Sequence

MAX_RANK = 16

CycleKind = Literal["paired", "balanced"]


class ParseError(ValueError):
    """Malformed element text; ``column`` is 1-based."""

    def __init__(self, message: str, text: str, column: int, line: int = 1):
        self.text = text
        self.column = column
        self.line = line
        super().__init__(f"line {line}, column {column}: {message} in {text!r}")


@dataclass(frozen=True)
class GroupType:
    tag: Literal["C", "D"]
    n: int

    def __post_init__(self) -> None:
        if self.tag not in ("C", "D"):
            raise ValueError(f"unknown group type {self.tag!r}")
        if not isinstance(self.n, int) or self.n < 1 or self.n > MAX_RANK:
            raise ValueError(f"rank must be in 1..{MAX_RANK}, got {self.n!r}")
        if self.tag == "D" and self.n < 2:
            raise ValueError("type D requires n >= 2")

    def __str__(self) -> str:
        return f"{self.tag}{self.n}"


@dataclass(frozen=True, order=True)
class Cycle:
    """A paired or balanced cycle in canonical form."""

    kind: CycleKind
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("empty cycle")
        if len({abs(e) for e in self.entries}) != len(self.entries) or 0 in self.entries:
            raise ValueError(f"cycle entries must have distinct nonzero absolute values: {self.entries}")
        object.__setattr__(self, "entries", _canonical_entries(self.kind, tuple(self.entries)))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(abs(e) for e in self.entries)

    def orbits(self) -> list[tuple[int, ...]]:
        """The cycles of the underlying permutation of {±1..±n}."""
        if self.kind == "balanced":
            return [self.entries + tuple(-e for e in self.entries)]
        return [self.entries, tuple(-e for e in self.entries)]

    def __str__(self) -> str:
        body = ",".join(str(e) for e in self.entries)
        return f"[{body}]" if self.kind == "balanced" else f"({body})"


def _canonical_entries(kind: CycleKind, entries: tuple[int, ...]) -> tuple[int, ...]:
    k = len(entries)
    if kind == "balanced":
        doubled = entries + tuple(-e for e in entries)
        start = min(range(2 * k), key=lambda p: (abs(doubled[p]), doubled[p] < 0))
        return (doubled + doubled)[start:start + k]
    start = min(range(k), key=lambda p: abs(entries[p]))
    rotated = entries[start:] + entries[:start]
    if rotated[0] < 0:
        rotated = tuple(-e for e in rotated)
    return rotated


@dataclass(frozen=True)
class CycleDecomposition:
    n: int
    paired: tuple[Cycle, ...]
    balanced: tuple[Cycle, ...]

    @property
    def cycles(self) -> tuple[Cycle, ...]:
        return tuple(sorted(self.paired + self.balanced, key=lambda c: abs(c.entries[0])))

    @property
    def nontrivial(self) -> tuple[Cycle, ...]:
        return tuple(c for c in self.cycles if c.kind == "balanced" or len(c.entries) > 1)


@dataclass(frozen=True, order=True)
class SignedPermutation:
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        images = tuple(int(x) for x in self.images)
        n = len(images)
        if n < 1 or n > MAX_RANK:
            raise ValueError(f"rank must be in 1..{MAX_RANK}")
        if sorted(abs(x) for x in images) != list(range(1, n + 1)):
            raise ValueError(f"not a signed permutation: {images}")
        object.__setattr__(self, "images", images)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        v = self.images[abs(i) - 1]
        return v if i > 0 else -v

    def __mul__(self, other: SignedPermutation) -> SignedPermutation:
        return compose(self, other)

    @classmethod
    def identity(cls, n: int) -> SignedPermutation:
        return cls(tuple(range(1, n + 1)))

    @property
    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images, 1))

    @cached_property
    def decomposition(self) -> CycleDecomposition:
        return decompose(self)

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"SignedPermutation({format_element(self)!r})"


@dataclass(frozen=True)
class Reflection:
    """``[i]`` when ``j`` is None, else ``<i,j>`` with ``0 < i < |j|``."""

    i: int
    j: int | None = None

    def __post_init__(self) -> None:
        if self.j is None:
            if self.i == 0:
                raise ValueError("zero index")
            object.__setattr__(self, "i", abs(self.i))
            return
        a, b = self.i, self.j
        if a == 0 or b == 0 or abs(a) == abs(b):
            raise ValueError(f"invalid transposition pair <{a},{b}>")
        if abs(a) > abs(b):
            a, b = b, a
        if a < 0:
            a, b = -a, -b
        object.__setattr__(self, "i", a)
        object.__setattr__(self, "j", b)

    @property
    def is_sign_change(self) -> bool:
        return self.j is None

    def perm(self, n: int) -> SignedPermutation:
        images = list(range(1, n + 1))
        if self.j is None:
            images[self.i - 1] = -self.i
        else:
            j = self.j
            images[self.i - 1] = j
            images[abs(j) - 1] = self.i if j > 0 else -self.i
        return SignedPermutation(tuple(images))

    def sort_key(self) -> tuple:
        # sign changes first, then pairs by (i, |j|, sign)
        if self.j is None:
            return (0, self.i, 0, 0)
        return (1, self.i, abs(self.j), self.j < 0)

    @classmethod
    def from_perm(cls, a: SignedPermutation) -> Reflection:
        moved = [i for i in range(1, a.n + 1) if a(i) != i]
        if len(moved) == 1 and a(moved[0]) == -moved[0]:
            return cls(moved[0])
        if len(moved) == 2:
            i, k = moved
            j = a(i)
            if abs(j) == k and a(k) == (i if j > 0 else -i):
                return cls(i, j)
        raise ValueError(f"{a} is not a reflection")

    def __str__(self) -> str:
        return f"[{self.i}]" if self.j is None else f"({self.i},{self.j})"


# --- group operations -------------------------------------------------------

def _check_rank(a: SignedPermutation, b: SignedPermutation) -> None:
    if a.n != b.n:
        raise ValueError(f"rank mismatch: {a.n} != {b.n}")


def compose(a: SignedPermutation, b: SignedPermutation) -> SignedPermutation:
    """The product ``ab``: ``(ab)(i) = a(b(i))``."""
    _check_rank(a, b)
    return SignedPermutation(tuple(a(x) for x in b.images))


def inverse(a: SignedPermutation) -> SignedPermutation:
    images = [0] * a.n
    for i, v in enumerate(a.images, 1):
        images[abs(v) - 1] = i if v > 0 else -i
    return SignedPermutation(tuple(images))


def conjugate(g: SignedPermutation, a: SignedPermutation) -> SignedPermutation:
    """``g a g^-1``."""
    return compose(compose(g, a), inverse(g))


def decompose(a: SignedPermutation) -> CycleDecomposition:
    seen: set[int] = set()
    paired: list[Cycle] = []
    balanced: list[Cycle] = []
    for start in range(1, a.n + 1):
        if start in seen:
            continue
        orbit = [start]
        x = a(start)
        while x != start:
            orbit.append(x)
            x = a(x)
        if -start in orbit:
            half = len(orbit) // 2
            balanced.append(Cycle("balanced", tuple(orbit[:half])))
            seen.update(abs(x) for x in orbit)
        else:
            paired.append(Cycle("paired", tuple(orbit)))
            seen.update(abs(x) for x in orbit)
    return CycleDecomposition(a.n, tuple(paired), tuple(balanced))


def from_cycles(n: int, cycles: Iterable[Cycle]) -> SignedPermutation:
    images: dict[int, int] = {}
    for c in cycles:
        for orbit in c.orbits():
            for x, y in zip(orbit, orbit[1:] + orbit[:1]):
                if x in images:
                    raise ValueError(f"cycles are not disjoint at {abs(x)}")
                images[x] = y
    out = []
    for i in range(1, n + 1):
        if i in images:
            out.append(images[i])
        elif -i in images:
            out.append(-images[-i])
        else:
            out.append(i)
    return SignedPermutation(tuple(out))


def reflections(gt: GroupType) -> list[Reflection]:
    """All reflections of the group, in canonical order."""
    n = gt.n
    out: list[Reflection] = []
    if gt.tag == "C":
        out.extend(Reflection(i) for i in range(1, n + 1))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out.append(Reflection(i, j))
            out.append(Reflection(i, -j))
    return sorted(out, key=Reflection.sort_key)


def reflection_length(a: SignedPermutation) -> int:
    return a.n - fixed_space_dim(a)


def fixed_space_dim(a: SignedPermutation) -> int:
    return len(a.decomposition.paired)


def transposition_length(a: SignedPermutation) -> int:
    """Length in the symmetric group on {±1..±n} with respect to all transpositions."""
    d = a.decomposition
    return 2 * a.n - (2 * len(d.paired) + len(d.balanced))


def is_member(a: SignedPermutation, gt: GroupType) -> bool:
    if a.n != gt.n:
        raise ValueError(f"rank mismatch: {a.n} != {gt.n}")
    return gt.tag == "C" or len(a.decomposition.balanced) % 2 == 0


def coxeter_element(gt: GroupType) -> SignedPermutation:
    n = gt.n
    if gt.tag == "C":
        return from_cycles(n, [Cycle("balanced", tuple(range(1, n + 1)))])
    cycles = [Cycle("balanced", (1,))]
    cycles.append(Cycle("balanced", tuple(range(2, n + 1))))
    return from_cycles(n, cycles)


def group_elements(gt: GroupType) -> Iterator[SignedPermutation]:
    """Every element of C_n or D_n (2^n n! or half that)."""
    n = gt.n
    for perm in itertools.permutations(range(1, n + 1)):
        for signs in itertools.product((1, -1), repeat=n):
            a = SignedPermutation(tuple(s * p for s, p in zip(signs, perm)))
            if gt.tag == "C" or is_member(a, gt):
                yield a


# --- text grammar -----------------------------------------------------------

def format_element(a: SignedPermutation) -> str:
    parts = [str(c) for c in a.decomposition.nontrivial]
    return " ".join(parts) if parts else "I"


_TOKEN = re.compile(r"\s*(?:(I)|\[([^\[\]()]*)\]|\(([^\[\]()]*)\))")
_ENTRY = re.compile(r"^\s*-?\d+\s*$")


def parse_element(text: str, n: int) -> SignedPermutation:
    """Parse the element grammar; raises :class:`ParseError` with a column."""
    pos = 0
    cycles: list[Cycle] = []
    used: set[int] = set()
    saw_identity = False
    stripped_end = len(text.rstrip())
    if stripped_end == 0:
        raise ParseError("empty element", text, 1)
    while pos < stripped_end:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[col - 1]!r}", text, col)
        if m.group(1):
            saw_identity = True
        else:
            body = m.group(2) if m.group(2) is not None else m.group(3)
            kind: CycleKind = "balanced" if m.group(2) is not None else "paired"
            body_col = m.start(2 if kind == "balanced" else 3) + 1
            fields = body.split(",")
            entries = []
            offset = 0
            for field in fields:
                if not _ENTRY.match(field):
                    raise ParseError(f"bad cycle entry {field.strip()!r}", text, body_col + offset)
                value = int(field)
                if value == 0 or abs(value) > n:
                    raise ParseError(f"entry {value} out of range 1..{n}", text, body_col + offset)
                if abs(value) in used:
                    raise ParseError(f"index {abs(value)} repeated", text, body_col + offset)
                used.add(abs(value))
                entries.append(value)
                offset += len(field) + 1
            cycles.append(Cycle(kind, tuple(entries)))
        pos = m.end()
        if pos < stripped_end and not text[pos].isspace() and cycles and text[pos] not in "[(":
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos + 1)
    if saw_identity and cycles:
        raise ParseError("'I' cannot be combined with cycles", text, text.index("I") + 1)
    return from_cycles(n, cycles)


def parse_reflection(text: str, n: int) -> Reflection:
    return Reflection.from_perm(parse_element(text, n))


def element_sort_key(a: SignedPermutation) -> tuple[int, str]:
    return (reflection_length(a), format_element(a))


def as_perms(seq: Sequence[Reflection], n: int) -> list[SignedPermutation]:
    return [r.perm(n) for r in seq]
