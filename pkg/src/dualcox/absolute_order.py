"""Absolute order on C_n / D_n and the interval below a Coxeter element.

``u <= w`` iff ``l(w) == l(u) + l(u^-1 w)`` for the reflection length ``l``.
Interval elements are addressed by index; index 0 is the identity and the
last index is the top element.  Order relations are kept as integer bitsets
(``down[i]`` has bit ``j`` set iff ``j <= i``).
"""

from __future__ import annotations

import functools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

from dualcox.signed_perm import (
    Cycle,
    GroupType,
    Reflection,
    SignedPermutation,
    compose,
    coxeter_element,
    element_sort_key,
    format_element,
    from_cycles,
    inverse,
    is_member,
    reflection_length,
    reflections,
)

Element = Union[int, SignedPermutation]


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# --- order relation ---------------------------------------------------------

def leq(u: SignedPermutation, w: SignedPermutation) -> bool:
    if u.n != w.n:
        raise ValueError(f"rank mismatch: {u.n} != {w.n}")
    return reflection_length(w) == reflection_length(u) + reflection_length(compose(inverse(u), w))


def _orbit_ids(a: SignedPermutation) -> tuple[dict[int, int], set[int]]:
    """Map each of ±1..±n to the index of its orbit; also return balanced orbit ids."""
    ids: dict[int, int] = {}
    balanced: set[int] = set()
    k = 0
    for cycle in a.decomposition.cycles:
        for orbit in cycle.orbits():
            for x in orbit:
                ids[x] = k
            if cycle.kind == "balanced":
                balanced.add(k)
            k += 1
    return ids, balanced


def reflection_below(r: Reflection | SignedPermutation, a: SignedPermutation) -> bool:
    """Containment / s-containment test for a reflection under ``a``."""
    if isinstance(r, SignedPermutation):
        r = Reflection.from_perm(r)
    ids, balanced = _orbit_ids(a)
    if r.j is None:
        return ids[r.i] in balanced
    if ids[r.i] == ids[r.j]:
        return True
    return ids[r.i] in balanced and ids[r.j] in balanced


# --- noncrossing characterization in type C ---------------------------------

def _position(x: int, n: int) -> int:
    # cyclic order of gamma_C: 1, 2, ..., n, -1, ..., -n
    return x - 1 if x > 0 else n - x - 1


def _oriented(seq: Sequence[int], n: int) -> bool:
    base = _position(seq[0], n)
    prev = 0
    for x in seq[1:]:
        r = (_position(x, n) - base) % (2 * n)
        if r <= prev:
            return False
        prev = r
    return True


def _cycle_oriented(cycle: Cycle, n: int) -> bool:
    e = cycle.entries
    if cycle.kind == "balanced":
        return _oriented(e + tuple(-x for x in e), n)
    # a paired cycle has several written forms; one consistent form suffices
    for s in range(len(e)):
        rot = e[s:] + e[:s]
        if _oriented(rot + tuple(-x for x in rot), n):
            return True
    return False


def is_consistently_oriented(a: SignedPermutation, n: int | None = None) -> bool:
    n = a.n if n is None else n
    return all(_cycle_oriented(c, n) for c in a.decomposition.cycles)


def _contained_reflections(cycle: Cycle) -> list[Reflection]:
    out: set[Reflection] = set()
    for orbit in cycle.orbits():
        for p, x in enumerate(orbit):
            for y in orbit[p + 1:]:
                if x != -y:
                    out.add(Reflection(x, y))
    if cycle.kind == "balanced":
        out.update(Reflection(x) for x in cycle.entries)
    return sorted(out, key=Reflection.sort_key)


def _written_forms(r: Reflection) -> list[tuple[int, int]]:
    i, j = r.i, r.j
    return [(i, j), (j, i), (-i, -j), (-j, -i)]


def crosses(r1: Reflection, r2: Reflection, n: int) -> bool:
    """Crossing test for two disjoint reflections, over every written form."""
    if r1.j is None and r2.j is not None:
        r1, r2 = r2, r1
    if r1.j is None:
        # two sign changes: two diameters of the cyclic order always meet
        i, k = r1.i, r2.i
        return _oriented((i, k, -i, -k), n) or _oriented((i, -k, -i, k), n)
    if r2.j is None:
        k = r2.i
        for i, j in _written_forms(r1):
            for seq in ((i, k, j, -k), (i, -k, j, k), (k, i, -k, j), (-k, i, k, j)):
                if _oriented(seq, n):
                    return True
        return False
    for i, j in _written_forms(r1):
        for k, l in _written_forms(r2):
            for seq in ((i, k, j, l), (i, -k, j, -l), (k, i, l, j), (k, -i, l, -j)):
                if _oriented(seq, n):
                    return True
    return False


def is_noncrossing(a: SignedPermutation) -> bool:
    cycles = a.decomposition.nontrivial
    contained = [_contained_reflections(c) for c in cycles]
    for p in range(len(cycles)):
        for q in range(p + 1, len(cycles)):
            for r1 in contained[p]:
                for r2 in contained[q]:
                    if crosses(r1, r2, a.n):
                        return False
    return True


def below_coxeter_C(a: SignedPermutation) -> bool:
    return is_consistently_oriented(a) and is_noncrossing(a)


def satisfies_precedes(a: SignedPermutation, gt: GroupType) -> bool:
    """Balanced-cycle shape forced on every element below the Coxeter element."""
    balanced = a.decomposition.balanced
    if gt.tag == "C":
        return len(balanced) <= 1
    if not balanced:
        return True
    return len(balanced) == 2 and Cycle("balanced", (1,)) in balanced


# --- intervals --------------------------------------------------------------

class NotALattice(Exception):
    def __init__(
        self, operation: str, a: int, b: int, witnesses: Sequence[int], labels: Sequence[str] = (), names: tuple[str, str] | None = None
    ):
        self.operation = operation
        self.a = a
        self.b = b
        self.witnesses = tuple(witnesses)
        shown = list(labels) if labels else [str(w) for w in self.witnesses]
        left, right = names or (str(a), str(b))
        super().__init__(f"{operation} of {left} and {right} not unique; candidates: {shown}")


@dataclass
class LatticeCertificate:
    certified: bool
    meet: list[list[int]] = field(default_factory=list)
    join: list[list[int]] = field(default_factory=list)
    witness: NotALattice | None = None


class Interval:
    """The interval ``[I, gamma]`` of a group, with order and reflection sets."""

    def __init__(self, gt: GroupType, gamma: SignedPermutation | None = None):
        gamma = coxeter_element(gt) if gamma is None else gamma
        if gamma.n != gt.n or not is_member(gamma, gt):
            raise ValueError(f"{format_element(gamma)} is not an element of {gt}")
        self.group = gt
        self.gamma = gamma
        self.reflections = tuple(reflections(gt))
        self.reflection_perms = tuple(r.perm(gt.n) for r in self.reflections)

        found = {gamma}
        frontier = [gamma]
        while frontier:
            nxt = []
            for w in frontier:
                lw = reflection_length(w)
                for r in self.reflection_perms:
                    u = compose(w, r)
                    if u not in found and reflection_length(u) == lw - 1:
                        found.add(u)
                        nxt.append(u)
            frontier = nxt
        self.elements: tuple[SignedPermutation, ...] = tuple(sorted(found, key=element_sort_key))
        self.lengths = tuple(reflection_length(w) for w in self.elements)
        self.index = {w: i for i, w in enumerate(self.elements)}
        self.labels = tuple(format_element(w) for w in self.elements)
        size = len(self.elements)

        down = [0] * size
        for j, w in enumerate(self.elements):
            for i, u in enumerate(self.elements):
                if self.lengths[i] <= self.lengths[j] and leq(u, w):
                    down[j] |= 1 << i
        up = [0] * size
        for j in range(size):
            for i in iter_bits(down[j]):
                up[i] |= 1 << j
        self.down = tuple(down)
        self.up = tuple(up)
        self.refl_sets = tuple(
            sum(1 << k for k, r in enumerate(self.reflection_perms) if leq(r, w)) for w in self.elements
        )
        self.atoms = tuple(i for i, l in enumerate(self.lengths) if l == 1)
        self._check_order()

    def _check_order(self) -> None:
        size = len(self.elements)
        if not self.elements[0].is_identity or self.elements[-1] != self.gamma:
            raise AssertionError("interval must run from I to gamma")
        for j in range(size):
            if not (self.down[j] >> j) & 1:
                raise AssertionError(f"order not reflexive at {j}")
            for i in iter_bits(self.down[j]):
                if i != j:
                    if (self.down[i] >> j) & 1:
                        raise AssertionError(f"order not antisymmetric at {i},{j}")
                    if self.lengths[i] >= self.lengths[j]:
                        raise AssertionError(f"grading broken at {i} < {j}")
                if self.down[i] & ~self.down[j]:
                    raise AssertionError(f"order not transitive below {j}")
        if self.down[-1] != (1 << size) - 1:
            raise AssertionError("some element is not below gamma")

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"Interval({self.group}, {format_element(self.gamma)!r}, size={len(self)})"

    @property
    def top(self) -> int:
        return len(self.elements) - 1

    @property
    def rank(self) -> int:
        return self.lengths[-1]

    def idx(self, a: Element) -> int:
        if isinstance(a, int):
            if not 0 <= a < len(self.elements):
                raise IndexError(f"no interval element {a}")
            return a
        try:
            return self.index[a]
        except KeyError:
            raise ValueError(f"{format_element(a)} is not below {format_element(self.gamma)}") from None

    def leq_index(self, i: int, j: int) -> bool:
        return bool((self.down[j] >> i) & 1)

    def order_matrix(self) -> list[list[bool]]:
        size = len(self.elements)
        return [[self.leq_index(i, j) for j in range(size)] for i in range(size)]

    def find(self, a: SignedPermutation) -> int | None:
        return self.index.get(a)

    def reflection_bit(self, r: SignedPermutation) -> int:
        return self.reflection_perms.index(r)

    @functools.cached_property
    def lattice(self) -> LatticeCertificate:
        return certify_lattice(self)

    def to_json(self) -> dict:
        cert = self.lattice
        return {
            "type": self.group.tag,
            "n": self.group.n,
            "gamma": format_element(self.gamma),
            "elements": list(self.labels),
            "lengths": list(self.lengths),
            "order": [[int(v) for v in row] for row in self.order_matrix()],
            "reflections": [str(r) for r in self.reflections],
            "certified": cert.certified,
            "meet": cert.meet if cert.certified else None,
            "join": cert.join if cert.certified else None,
        }


@functools.lru_cache(maxsize=64)
def interval(gt: GroupType, gamma: SignedPermutation | None = None) -> Interval:
    return Interval(gt, gamma)


def _bound(iv: Interval, a: int, b: int, below: bool) -> int:
    sets, dual = (iv.down, iv.up) if below else (iv.up, iv.down)
    common = sets[a] & sets[b]
    extremal = [m for m in iter_bits(common) if dual[m] & common == 1 << m]
    if len(extremal) != 1:
        op = "meet" if below else "join"
        raise NotALattice(op, a, b, extremal, [iv.labels[m] for m in extremal], (iv.labels[a], iv.labels[b]))
    return extremal[0]


def meet(iv: Interval, a: Element, b: Element) -> int:
    """Greatest common lower bound (index), or :class:`NotALattice`."""
    return _bound(iv, iv.idx(a), iv.idx(b), below=True)


def join(iv: Interval, a: Element, b: Element) -> int:
    return _bound(iv, iv.idx(a), iv.idx(b), below=False)


def certify_lattice(iv: Interval) -> LatticeCertificate:
    size = len(iv)
    meets = [[0] * size for _ in range(size)]
    joins = [[0] * size for _ in range(size)]
    try:
        for a in range(size):
            for b in range(a, size):
                meets[a][b] = meets[b][a] = _bound(iv, a, b, below=True)
                joins[a][b] = joins[b][a] = _bound(iv, a, b, below=False)
    except NotALattice as exc:
        return LatticeCertificate(False, witness=exc)
    return LatticeCertificate(True, meets, joins)


# --- structured meet in type D ----------------------------------------------

def _restrict_to_tail(a: SignedPermutation) -> SignedPermutation:
    """``a`` fixing ±1 setwise, read as an element of C_{n-1} on 2..n."""
    images = []
    for i in range(2, a.n + 1):
        v = a(i)
        images.append(v - 1 if v > 0 else v + 1)
    return SignedPermutation(tuple(images))


def _extend_from_tail(a: SignedPermutation) -> SignedPermutation:
    return SignedPermutation((1,) + tuple(v + 1 if v > 0 else v - 1 for v in a.images))


def _is_balanced(a: SignedPermutation) -> bool:
    return bool(a.decomposition.balanced)


def meet_d_structured(iv: Interval, a: Element, b: Element) -> int:
    """Meet in ``[I, gamma_D]`` by the balanced/paired case analysis."""
    gt = iv.group
    if gt.tag != "D" or iv.gamma != coxeter_element(gt):
        raise ValueError("structured meet needs the D_n interval below gamma_D")
    ai, bi = iv.idx(a), iv.idx(b)
    alpha, beta = iv.elements[ai], iv.elements[bi]
    n = gt.n
    sign1 = Reflection(1).perm(n)

    if _is_balanced(alpha) and _is_balanced(beta):
        tail = interval(GroupType("C", n - 1))
        a_t = _restrict_to_tail(compose(sign1, alpha))
        b_t = _restrict_to_tail(compose(sign1, beta))
        s_t = tail.elements[meet(tail, a_t, b_t)]
        sigma = _extend_from_tail(s_t)
        if _is_balanced(s_t):
            sigma = compose(sign1, sigma)
        return iv.idx(sigma)

    if _is_balanced(alpha):
        alpha, beta = beta, alpha
    # alpha is paired, so it lies below some paired n-cycle (1,±k) gamma
    tau = None
    for k in range(2, n + 1):
        for s in (1, -1):
            cand = compose(Reflection(1, s * k).perm(n), iv.gamma)
            d = cand.decomposition
            if len(d.nontrivial) == 1 and d.nontrivial[0].kind == "paired" and len(d.nontrivial[0].entries) == n:
                if leq(alpha, cand):
                    tau = cand
                    break
        if tau is not None:
            break
    if tau is None:
        raise AssertionError(f"paired element {format_element(alpha)} lies under no paired n-cycle")
    order = tau.decomposition.nontrivial[0].entries
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in range(n):
        for q in range(p + 1, n):
            r = Reflection(order[p], order[q])
            if reflection_below(r, alpha) and reflection_below(r, beta):
                parent[find(q)] = find(p)
    blocks: dict[int, list[int]] = {}
    for p in range(n):
        blocks.setdefault(find(p), []).append(order[p])
    sigma = from_cycles(n, [Cycle("paired", tuple(block)) for block in blocks.values()])
    return iv.idx(sigma)


# --- noncrossing partitions -------------------------------------------------

@dataclass(frozen=True)
class NoncrossingPartition:
    blocks: frozenset[frozenset[int]]

    @property
    def zero_block(self) -> frozenset[int] | None:
        for b in self.blocks:
            if b == frozenset(-x for x in b):
                return b
        return None

    def refines(self, other: NoncrossingPartition) -> bool:
        return all(any(b <= c for c in other.blocks) for b in self.blocks)

    def __str__(self) -> str:
        ordered = sorted((sorted(b, key=lambda x: (abs(x), x < 0)) for b in self.blocks), key=lambda b: (abs(b[0]), b[0] < 0))
        return " ".join("{" + ",".join(map(str, b)) + "}" for b in ordered)


def to_ncp(iv: Interval, a: Element) -> NoncrossingPartition:
    w = iv.elements[iv.idx(a)]
    blocks = frozenset(frozenset(orbit) for c in w.decomposition.cycles for orbit in c.orbits())
    return NoncrossingPartition(blocks)


# --- factorizations ---------------------------------------------------------

def _factor_from(remainder: SignedPermutation, refls: Sequence[Reflection], perms: Sequence[SignedPermutation]) -> list[tuple[Reflection, ...]]:
    if remainder.is_identity:
        return [()]
    out = []
    l_rem = reflection_length(remainder)
    for r, p in zip(refls, perms):
        rest = compose(p, remainder)
        if reflection_length(rest) == l_rem - 1:
            out.extend((r,) + tail for tail in _factor_from(rest, refls, perms))
    return out


def _factor_branch(args: tuple) -> list[tuple[Reflection, ...]]:
    head, rest, refls, perms = args
    return [(head,) + tail for tail in _factor_from(rest, refls, perms)]


def reduced_factorizations(w: SignedPermutation, gt: GroupType, parallel: bool = False) -> list[tuple[Reflection, ...]]:
    """Every minimal-length reflection factorization of ``w``, in canonical order."""
    if not is_member(w, gt):
        raise ValueError(f"{format_element(w)} is not an element of {gt}")
    refls = reflections(gt)
    perms = [r.perm(gt.n) for r in refls]
    if not parallel or w.is_identity:
        return _factor_from(w, refls, perms)
    l_w = reflection_length(w)
    jobs = []
    for r, p in zip(refls, perms):
        rest = compose(p, w)
        if reflection_length(rest) == l_w - 1:
            jobs.append((r, rest, refls, perms))
    with ProcessPoolExecutor() as pool:
        parts = list(pool.map(_factor_branch, jobs))
    return [f for part in parts for f in part]


class ProfileViolation(ValueError):
    pass


def balanced_cycle_profile(seq: Sequence[Reflection | SignedPermutation], n: int | None = None) -> tuple[int, ...]:
    """Number of balanced cycles in each prefix product of ``seq``.

    When the product is ``gamma_C`` (or ``gamma_D`` with only type-D
    reflections) the profile must be zeros followed by a constant 1 (resp. 2,
    with ``[1]`` present); otherwise :class:`ProfileViolation` is raised.
    """
    if not seq:
        return ()
    if n is None:
        first = seq[0]
        if isinstance(first, Reflection):
            raise ValueError("rank required for Reflection sequences")
        n = first.n
    perms = [r.perm(n) if isinstance(r, Reflection) else r for r in seq]
    prefix = SignedPermutation.identity(n)
    counts = []
    prefixes = []
    for p in perms:
        prefix = compose(prefix, p)
        prefixes.append(prefix)
        counts.append(len(prefix.decomposition.balanced))
    profile = tuple(counts)
    if len(perms) != reflection_length(prefix):
        return profile

    def shape(level: int) -> bool:
        nonzero = [c for c in profile if c]
        first = profile.index(level) if level in profile else len(profile)
        return all(c == 0 for c in profile[:first]) and all(c == level for c in profile[first:]) and bool(nonzero)

    if n >= 1 and prefix == coxeter_element(GroupType("C", n)):
        if not shape(1):
            raise ProfileViolation(f"type C profile {profile} is not 0..0 1..1")
    elif n >= 2 and prefix == coxeter_element(GroupType("D", n)) and all(
        is_member(p, GroupType("D", n)) for p in perms
    ):
        one = Cycle("balanced", (1,))
        if not shape(2) or any(c == 2 and one not in q.decomposition.balanced for c, q in zip(profile, prefixes)):
            raise ProfileViolation(f"type D profile {profile} is not 0..0 2..2 with [1]")
    return profile


def maximal_chain_count(iv: Interval) -> int:
    """Number of maximal chains ``I < w_1 < ... < gamma`` via covers."""
    counts = [0] * len(iv)
    counts[0] = 1
    for j in range(1, len(iv)):
        lj = iv.lengths[j]
        counts[j] = sum(counts[i] for i in iter_bits(iv.down[j]) if iv.lengths[i] == lj - 1)
    return counts[-1]
