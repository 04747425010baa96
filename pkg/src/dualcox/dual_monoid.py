"""Positive words in the poset group of an interval, and their word problem.

Letters are indices of non-identity interval elements.  The defining
relations are ``{w1}{w2} = {w3}`` whenever ``w1 <= w3`` and ``w2 = w1^-1 w3``.
Positive equality is decided two ways: a breadth-first closure over single
relation rewrites (the oracle), and a greedy left-weighted normal form.
"""

from __future__ import annotations

import functools
import random
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from dualcox.absolute_order import Interval, iter_bits
from dualcox.signed_perm import compose, inverse, parse_element

Word = tuple[int, ...]

BFS_LIMIT = 10**6


class ResourceLimitExceeded(RuntimeError):
    pass


class NotCertified(ValueError):
    pass


@dataclass(frozen=True)
class Relation:
    """``{left[0]}{left[1]} = {right}`` as interval indices."""

    left: tuple[int, int]
    right: int


@dataclass(frozen=True)
class NormalForm:
    letters: Word


class DualMonoid:
    """Relation tables and word-problem machinery over one interval."""

    def __init__(self, iv: Interval):
        self.interval = iv
        els = iv.elements
        self.relations: list[Relation] = []
        self.merge: dict[tuple[int, int], int] = {}
        self.splits: list[list[tuple[int, int]]] = [[] for _ in els]
        for w3 in range(1, len(els)):
            for w1 in iter_bits(iv.down[w3]):
                if w1 in (0, w3):
                    continue
                w2 = iv.index[compose(inverse(els[w1]), els[w3])]
                assert iv.lengths[w1] + iv.lengths[w2] == iv.lengths[w3]
                self.relations.append(Relation((w1, w2), w3))
                self.merge[(w1, w2)] = w3
                self.splits[w3].append((w1, w2))
        self.relations.sort(key=lambda r: (r.right, r.left))

        # reflection r's bit -> interval index of r
        self.atom_of_bit = {iv.reflection_bit(els[a]): a for a in iv.atoms}
        # complement[x] = x^-1 gamma
        self.complement = [iv.index[compose(inverse(w), iv.gamma)] for w in els]

    # -- words --------------------------------------------------------------

    def length(self, word: Sequence[int]) -> int:
        return sum(self.interval.lengths[x] for x in word)

    def check_word(self, word: Sequence[int]) -> Word:
        word = tuple(word)
        for x in word:
            if not 0 < x < len(self.interval):
                raise ValueError(f"letter {x} is not a non-identity interval element")
        return word

    def product(self, word: Sequence[int]):
        out = self.interval.elements[0]
        for x in word:
            out = compose(out, self.interval.elements[x])
        return out

    def format_word(self, word: Sequence[int]) -> str:
        return ".".join(f"({self.interval.labels[x]})" for x in word)

    def parse_word(self, text: str) -> Word:
        return parse_word(text, self.interval)

    # -- oracle -------------------------------------------------------------

    def neighbours(self, word: Word) -> Iterable[Word]:
        for p, x in enumerate(word):
            for w1, w2 in self.splits[x]:
                yield word[:p] + (w1, w2) + word[p + 1:]
        for p in range(len(word) - 1):
            w3 = self.merge.get((word[p], word[p + 1]))
            if w3 is not None:
                yield word[:p] + (w3,) + word[p + 2:]

    def closure(self, word: Sequence[int], limit: int = BFS_LIMIT, target: Word | None = None) -> set[Word]:
        """All words positively equal to ``word`` (stops early at ``target``)."""
        start = self.check_word(word)
        length = self.length(start)
        seen = {start}
        queue = deque([start])
        while queue:
            current = queue.popleft()
            for nxt in self.neighbours(current):
                if nxt in seen:
                    continue
                assert self.length(nxt) == length
                if len(seen) >= limit:
                    raise ResourceLimitExceeded(f"closure exceeded {limit} words")
                seen.add(nxt)
                if nxt == target:
                    return seen
                queue.append(nxt)
        return seen

    def positively_equal(
        self, a: Sequence[int], b: Sequence[int], limit: int = BFS_LIMIT, method: str = "words"
    ) -> bool:
        """Decide ``a ≐ b`` by exhaustive closure.

        ``method="words"`` explores split/merge rewrites of arbitrary words;
        ``method="atoms"`` explores reflection-letter expansions, where any
        run of reflections multiplying to an interval element may be swapped
        for another factorization of it.  Both generate the same relation.
        """
        a, b = self.check_word(a), self.check_word(b)
        if a == b:
            return True
        if self.length(a) != self.length(b):
            return False
        if method == "atoms":
            eb = self.expand(b)
            return eb in self.atom_closure(a, limit, target=eb)
        if method != "words":
            raise ValueError(f"unknown closure method {method!r}")
        return b in self.closure(a, limit, target=b)

    # -- reflection-letter closure -------------------------------------------

    @functools.cached_property
    def _extend(self) -> list[list[int]]:
        """``_extend[x][a]`` = index of ``x·a`` when it is one longer and below gamma, else -1."""
        iv = self.interval
        els = iv.elements
        table = [[-1] * len(els) for _ in els]
        for x, w in enumerate(els):
            for a in iv.atoms:
                p = iv.find(compose(w, els[a]))
                if p is not None and iv.lengths[p] == iv.lengths[x] + 1:
                    table[x][a] = p
        return table

    @functools.cached_property
    def factorizations(self) -> list[list[Word]]:
        """Reduced reflection factorizations of every interval element, as atom indices."""
        iv = self.interval
        facts: list[list[Word]] = [[()]]
        for j in range(1, len(iv)):
            out: list[Word] = []
            for a in iv.atoms:
                if iv.leq_index(a, j):
                    rest = self.left_quotient(a, j)
                    out.extend((a,) + t for t in facts[rest])
            facts.append(out)
        return facts

    def expand(self, word: Sequence[int]) -> Word:
        facts = self.factorizations
        return tuple(a for x in word for a in facts[x][0])

    def atom_closure(self, word: Sequence[int], limit: int = BFS_LIMIT, target: Word | None = None) -> set[Word]:
        start = self.expand(self.check_word(word))
        ext = self._extend
        facts = self.factorizations
        size = len(start)
        seen = {start}
        stack = [start]
        while stack:
            w = stack.pop()
            for p in range(size - 1):
                cur = w[p]
                for k in range(p + 1, size):
                    cur = ext[cur][w[k]]
                    if cur < 0:
                        break
                    for f in facts[cur]:
                        nw = w[:p] + f + w[k + 1:]
                        if nw not in seen:
                            if len(seen) >= limit:
                                raise ResourceLimitExceeded(f"closure exceeded {limit} words")
                            seen.add(nw)
                            if nw == target:
                                return seen
                            stack.append(nw)
        return seen

    # -- normal form --------------------------------------------------------

    def _require_lattice(self) -> None:
        if not self.interval.lattice.certified:
            raise NotCertified(f"{self.interval!r} is not a lattice")

    def normal_form(self, word: Sequence[int]) -> NormalForm:
        """Left-weight every adjacent pair until a full pass changes nothing.

        A pair ``(x, y)`` is rewritten to ``(x r, r y)`` for a reflection
        ``r <= y`` with ``x r`` still below gamma and one longer.  Each rewrite
        moves length leftwards, so the vector of prefix lengths increases
        lexicographically and the sweep terminates.
        """
        self._require_lattice()
        iv = self.interval
        els = iv.elements
        letters = list(self.check_word(word))
        changed = True
        while changed:
            changed = False
            p = 0
            while p < len(letters) - 1:
                x, y = letters[p], letters[p + 1]
                common = iv.refl_sets[self.complement[x]] & iv.refl_sets[y]
                if not common:
                    p += 1
                    continue
                bit = (common & -common).bit_length() - 1
                r = els[self.atom_of_bit[bit]]
                x2 = iv.index[compose(els[x], r)]
                y2 = iv.index[compose(r, els[y])]
                assert iv.lengths[x2] == iv.lengths[x] + 1
                letters[p] = x2
                if y2 == 0:
                    del letters[p + 1]
                else:
                    letters[p + 1] = y2
                changed = True
        return NormalForm(tuple(letters))

    def word_problem(self, a: Sequence[int], b: Sequence[int]) -> bool:
        if self.length(a) != self.length(b):
            return False
        return self.normal_form(a) == self.normal_form(b)

    # -- lattice-derived helpers -------------------------------------------

    def meet(self, a: int, b: int) -> int:
        self._require_lattice()
        return self.interval.lattice.meet[a][b]

    def join(self, a: int, b: int) -> int:
        self._require_lattice()
        return self.interval.lattice.join[a][b]

    def left_quotient(self, a: int, b: int) -> int:
        """Index of ``a^-1 b`` for ``a <= b``."""
        els = self.interval.elements
        return self.interval.index[compose(inverse(els[a]), els[b])]

    def random_word(self, rng: random.Random, max_letters: int) -> Word:
        k = rng.randint(1, max_letters)
        return tuple(rng.randrange(1, len(self.interval)) for _ in range(k))

    def random_rewrite(self, word: Word, rng: random.Random, steps: int) -> Word:
        for _ in range(steps):
            options = list(self.neighbours(word))
            if not options:
                break
            word = rng.choice(options)
        return word


_LETTER = re.compile(r"\(((?:[^()]|\([^()]*\))*)\)")


def parse_word(text: str, iv: Interval) -> Word:
    """Parse ``(e1).(e2)...`` where each ``ei`` is an element literal."""
    from dualcox.signed_perm import ParseError

    pos = 0
    letters = []
    text_end = len(text.rstrip())
    while True:
        while pos < text_end and text[pos].isspace():
            pos += 1
        m = _LETTER.match(text, pos)
        if m is None:
            raise ParseError("expected '(' starting a letter", text, pos + 1)
        inner = m.group(1)
        try:
            w = parse_element(inner, iv.group.n)
        except ParseError as exc:
            raise ParseError(str(exc).split(": ", 1)[1].rsplit(" in ", 1)[0], text, m.start(1) + exc.column) from None
        if w.is_identity:
            raise ParseError("identity is not a letter", text, m.start(1) + 1)
        x = iv.find(w)
        if x is None:
            raise ParseError(f"{inner.strip()} is not below gamma", text, m.start(1) + 1)
        letters.append(x)
        pos = m.end()
        while pos < text_end and text[pos].isspace():
            pos += 1
        if pos >= text_end:
            break
        if text[pos] != ".":
            raise ParseError(f"expected '.' between letters, got {text[pos]!r}", text, pos + 1)
        pos += 1
    return tuple(letters)


# --- module-level operations -------------------------------------------------

def relations(iv: Interval) -> list[Relation]:
    return DualMonoid(iv).relations


def positively_equal(
    a: Sequence[int], b: Sequence[int], monoid: DualMonoid, limit: int = BFS_LIMIT, method: str = "words"
) -> bool:
    return monoid.positively_equal(a, b, limit, method)


def greedy_normal_form(a: Sequence[int], monoid: DualMonoid) -> NormalForm:
    return monoid.normal_form(a)


def word_problem(a: Sequence[int], b: Sequence[int], monoid: DualMonoid) -> bool:
    return monoid.word_problem(a, b)


class ClassOracle:
    """Labels words by positive-equality class, running one closure per class."""

    def __init__(self, monoid: DualMonoid, limit: int = BFS_LIMIT, method: str = "atoms"):
        if method not in ("atoms", "words"):
            raise ValueError(f"unknown closure method {method!r}")
        self.monoid = monoid
        self.limit = limit
        self.method = method
        self.label: dict[Word, int] = {}
        self.members: list[set[Word]] = []

    def _key(self, word: Sequence[int]) -> Word:
        return self.monoid.expand(word) if self.method == "atoms" else tuple(word)

    def class_of(self, word: Sequence[int]) -> int:
        key = self._key(word)
        cid = self.label.get(key)
        if cid is None:
            if self.method == "atoms":
                members = self.monoid.atom_closure(word, self.limit)
            else:
                members = self.monoid.closure(word, self.limit)
            cid = len(self.members)
            self.members.append(members)
            for w in members:
                self.label[w] = cid
        return cid

    def equal(self, a: Sequence[int], b: Sequence[int]) -> bool:
        if self.monoid.length(a) != self.monoid.length(b):
            return False
        return self.class_of(a) == self.class_of(b)

    def right_divisors(self, word: Sequence[int]) -> dict[int, Word]:
        """Every ``a`` with ``word ≐ X{a}``, mapped to one such positive ``X``."""
        members = self.members[self.class_of(word)]
        m = self.monoid
        found: dict[int, Word] = {}
        if self.method == "words":
            for w in members:
                found.setdefault(w[-1], w[:-1])
            return found
        iv = m.interval
        els = iv.elements
        for w in members:
            cur = els[0]
            for k in range(len(w) - 1, -1, -1):
                cur = compose(els[w[k]], cur)
                x = iv.index.get(cur)
                if x is None or iv.lengths[x] != len(w) - k:
                    break
                if x not in found:
                    found[x] = w[:k]
        return found


# --- property batteries -------------------------------------------------------

@dataclass
class Report:
    name: str
    checked: int = 0
    nontrivial: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        return f"{self.name}: checked={self.checked} nontrivial={self.nontrivial} violations={len(self.violations)}"


def all_words(monoid: DualMonoid, max_letters: int) -> list[Word]:
    letters = range(1, len(monoid.interval))
    out: list[Word] = [()]
    words: list[Word] = []
    for _ in range(max_letters):
        out = [w + (x,) for w in out for x in letters]
        words.extend(out)
    return words


def check_cancellation(
    monoid: DualMonoid,
    max_letters: int = 2,
    samples: int | None = None,
    rng: random.Random | None = None,
    oracle: bool = False,
) -> Report:
    """Left and right cancellation: ``cA = cB`` or ``Ac = Bc`` implies ``A = B``.

    Exhaustive over words of up to ``max_letters`` letters when ``samples`` is
    None; otherwise random instances in which the hypothesis holds by
    construction (a rewrite walk from ``cA`` that keeps ``c`` as a prefix).
    """
    report = Report("cancellation")
    iv = monoid.interval
    if samples is None:
        equal = ClassOracle(monoid).equal if oracle else monoid.word_problem
        words = all_words(monoid, max_letters)
        by_length: dict[int, list[Word]] = {}
        for w in words:
            by_length.setdefault(monoid.length(w), []).append(w)
        for c in range(1, len(iv)):
            for group in by_length.values():
                for i, a in enumerate(group):
                    for b in group[i:]:
                        report.checked += 1
                        lhs_left = equal((c,) + a, (c,) + b)
                        lhs_right = equal(a + (c,), b + (c,))
                        if lhs_left or lhs_right:
                            report.nontrivial += 1
                            if not equal(a, b):
                                report.violations.append((c, a, b))
        return report

    rng = rng or random.Random(0)
    for _ in range(samples):
        c = rng.randrange(1, len(iv))
        a = monoid.random_word(rng, max_letters)
        left_side = rng.random() < 0.5
        start = (c,) + a if left_side else a + (c,)
        walked = monoid.random_rewrite(start, rng, rng.randint(1, 8))
        b = _strip(monoid, walked, c, left_side)
        report.checked += 1
        if b is None:
            continue
        report.nontrivial += 1
        if not monoid.word_problem(a, b):
            report.violations.append((c, a, b))
    return report


def _strip(monoid: DualMonoid, word: Word, c: int, left: bool) -> Word | None:
    """Remove ``c`` from the left (or right) end of ``word`` if it divides the end letter."""
    iv = monoid.interval
    end = word[0] if left else word[-1]
    if not iv.leq_index(c, end):
        return None
    if left:
        rest = monoid.left_quotient(c, end)
        tail = word[1:]
        return tail if rest == 0 else (rest,) + tail
    els = iv.elements
    rest = iv.index[compose(els[end], inverse(els[c]))]
    head = word[:-1]
    return head if rest == 0 else head + (rest,)


def nine_elements(monoid: DualMonoid, a: int, b: int, c: int) -> dict[str, int]:
    j = monoid.join
    q = monoid.left_quotient
    ab, bc, ca = j(a, b), j(b, c), j(c, a)
    abc = j(ab, c)
    return {
        "d": q(a, ab), "e": q(b, ab),
        "f": q(b, bc), "g": q(c, bc),
        "h": q(c, ca), "k": q(a, ca),
        "l": q(ab, abc), "m": q(bc, abc), "n": q(ca, abc),
    }


def check_nine_element_lemma(
    monoid: DualMonoid,
    samples: int | None = None,
    rng: random.Random | None = None,
) -> Report:
    """Check ``e∨f = el = fm``, ``d∨k = dl = kn``, ``h∨g = hn = gm``."""
    report = Report("nine-element lemma")
    iv = monoid.interval
    size = len(iv)
    if samples is None:
        triples: Iterable[tuple[int, int, int]] = (
            (a, b, c) for a in range(size) for b in range(size) for c in range(size)
        )
    else:
        rng = rng or random.Random(0)
        triples = ((rng.randrange(size), rng.randrange(size), rng.randrange(size)) for _ in range(samples))
    els = iv.elements
    for a, b, c in triples:
        report.checked += 1
        v = nine_elements(monoid, a, b, c)
        for x, y, l1, l2 in (("e", "f", "l", "m"), ("d", "k", "l", "n"), ("h", "g", "n", "m")):
            top = monoid.join(v[x], v[y])
            p1 = compose(els[v[x]], els[v[l1]])
            p2 = compose(els[v[y]], els[v[l2]])
            additive = (
                iv.lengths[top] == iv.lengths[v[x]] + iv.lengths[v[l1]] == iv.lengths[v[y]] + iv.lengths[v[l2]]
            )
            if not (els[top] == p1 == p2 and additive):
                report.violations.append(((a, b, c), x, y))
        if len({a, b, c}) > 1:
            report.nontrivial += 1
    return report


def check_join_lemma(monoid: DualMonoid, words: Iterable[Sequence[int]], oracle: ClassOracle | None = None) -> Report:
    """If ``P ≐ X_i{a_i}`` for all i then ``P ≐ Z{a_1 ∨ ... ∨ a_k}``; ``Z`` is exhibited."""
    report = Report("join lemma")
    oracle = oracle or ClassOracle(monoid)
    done: set[int] = set()
    for p in words:
        cid = oracle.class_of(p)
        if cid in done:
            continue
        done.add(cid)
        divisors = oracle.right_divisors(p)
        report.checked += 1
        if len(divisors) > 1:
            report.nontrivial += 1
        names = sorted(divisors)
        top = names[0]
        for a in names[1:]:
            top = monoid.join(top, a)
        for i, x in enumerate(names):
            for y in names[i + 1:]:
                if monoid.join(x, y) not in divisors:
                    report.violations.append((tuple(p), x, y))
        z = divisors.get(top)
        if z is None or not oracle.equal(tuple(p), z + (top,)):
            report.violations.append((tuple(p), "all", top))
    return report
