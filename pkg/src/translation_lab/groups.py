"""Finitely generated groups with exact normal forms and ball enumeration.

Five context kinds are provided, each solving its word problem by a canonical
form:

* free groups (freely reduced words),
* free abelian groups (integer vectors),
* finite groups (multiplication tables, validated at construction),
* free products with amalgamation over a common finite subgroup
  (alternating coset-transversal syllables with a trailing subgroup part),
* HNN extensions of a base group with stable letter ``t``
  (pinch-free forms with coset-transversal letters after each ``t``-power).

All contexts share the same metric machinery: the word metric of the stated
generating set, enumerated by breadth-first search and ordered shortlex.
Contexts are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

BALL_CAP_ENV = "TRANSLATION_LAB_MAX_BALL"
DEFAULT_BALL_CAP = 2_000_000


class BallCapExceeded(RuntimeError):
    """A ball enumeration would exceed the configured element cap."""


class MalformedWord(ValueError):
    """A raw word used a letter outside the context's alphabet."""


def ball_cap() -> int:
    raw = os.environ.get(BALL_CAP_ENV)
    if raw is None:
        return DEFAULT_BALL_CAP
    try:
        return max(1, int(raw))
    except ValueError:
        return DEFAULT_BALL_CAP


@dataclass(frozen=True)
class GroupElement:
    """A canonical word in its context.  Equality of words is group equality."""

    ctx: "GroupContext"
    word: tuple

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.ctx.multiply(self, other)

    def inverse(self) -> "GroupElement":
        return self.ctx.invert(self)

    @property
    def length(self) -> int:
        return self.ctx.word_length(self)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<{self.ctx.format(self)}>"

    def report_form(self) -> str:
        return self.ctx.format(self)


class GroupContext:
    """Shared metric/enumeration machinery; subclasses fix the arithmetic."""

    kind = "abstract"

    def __init__(self):
        self._layers: list[list[GroupElement]] = []
        self._dist: dict[tuple, int] = {}

    # -- arithmetic, provided by subclasses -------------------------------

    def identity(self) -> GroupElement:
        raise NotImplementedError

    def multiply(self, x: GroupElement, y: GroupElement) -> GroupElement:
        raise NotImplementedError

    def invert(self, x: GroupElement) -> GroupElement:
        raise NotImplementedError

    def generator_elements(self) -> tuple[GroupElement, ...]:
        """Alphabet of the word metric, closed under inversion, config order."""
        raise NotImplementedError

    def structural_key(self, x: GroupElement):
        """Deterministic tie-break among words of equal length."""
        raise NotImplementedError

    def format(self, x: GroupElement) -> str:
        raise NotImplementedError

    def parse(self, text: str) -> GroupElement:
        raise NotImplementedError

    # -- metric -----------------------------------------------------------

    def word_length(self, x: GroupElement) -> int:
        """Length of the shortest generator word equal to ``x``.

        The default implementation grows the cached breadth-first layers until
        ``x`` is seen; subclasses with closed forms override it.
        """
        self._check(x)
        while x.word not in self._dist:
            before = len(self._dist)
            self._grow_layer()
            if len(self._dist) == before:
                raise MalformedWord(f"element {self.format(x)} is not generated")
        return self._dist[x.word]

    def distance(self, x: GroupElement, y: GroupElement) -> int:
        return self.word_length(self.multiply(self.invert(x), y))

    def sort_key(self, x: GroupElement):
        return (self.word_length(x), self.structural_key(x))

    # -- balls --------------------------------------------------------------

    def ball(self, r: int) -> list[GroupElement]:
        """All elements of word length <= r, shortlex ordered, no duplicates."""
        if r < 0:
            raise ValueError("radius must be nonnegative")
        while len(self._layers) <= r:
            if not self._grow_layer():
                break
        out: list[GroupElement] = []
        for layer in self._layers[: r + 1]:
            out.extend(layer)
        return out

    def sphere(self, r: int) -> list[GroupElement]:
        self.ball(r)
        return list(self._layers[r]) if r < len(self._layers) else []

    def _grow_layer(self) -> bool:
        cap = ball_cap()
        if not self._layers:
            e = self.identity()
            self._dist[e.word] = 0
            self._layers.append([e])
            return True
        gens = self.generator_elements()
        depth = len(self._layers)
        fresh: dict[tuple, GroupElement] = {}
        for x in self._layers[-1]:
            for g in gens:
                y = self.multiply(x, g)
                if y.word not in self._dist and y.word not in fresh:
                    fresh[y.word] = y
        if len(self._dist) + len(fresh) > cap:
            raise BallCapExceeded(
                f"ball of radius {depth} needs more than {cap} elements "
                f"(set {BALL_CAP_ENV} to raise the cap)"
            )
        for word in fresh:
            self._dist[word] = depth
        layer = sorted(fresh.values(), key=self.structural_key)
        self._layers.append(layer)
        return bool(layer)

    def _check(self, x: GroupElement) -> GroupElement:
        if x.ctx is not self:
            raise MalformedWord("element belongs to a different group context")
        return x

    def _make(self, word: tuple) -> GroupElement:
        return GroupElement(self, word)


# ---------------------------------------------------------------------------
# Free groups
# ---------------------------------------------------------------------------


class FreeGroupContext(GroupContext):
    """Free group of finite rank; words are tuples of nonzero signed letters."""

    kind = "free"

    def __init__(self, rank: int, names: Sequence[str] | None = None):
        super().__init__()
        if rank < 1:
            raise ValueError("rank must be positive")
        self.rank = rank
        self.names = tuple(names) if names else tuple("abcdefgh"[:rank])
        if len(self.names) != rank:
            raise ValueError("need one name per generator")
        if any(len(n) != 1 or not n.islower() for n in self.names):
            raise ValueError("generator names must be single lowercase letters")

    def identity(self) -> GroupElement:
        return self._make(())

    def generator(self, i: int, power: int = 1) -> GroupElement:
        if not 1 <= i <= self.rank:
            raise MalformedWord(f"no generator {i}")
        return self.from_letters([i if power >= 0 else -i] * abs(power))

    def from_letters(self, letters: Iterable[int]) -> GroupElement:
        stack: list[int] = []
        for l in letters:
            if l == 0 or abs(l) > self.rank:
                raise MalformedWord(f"letter {l} outside alphabet")
            if stack and stack[-1] == -l:
                stack.pop()
            else:
                stack.append(l)
        return self._make(tuple(stack))

    def multiply(self, x: GroupElement, y: GroupElement) -> GroupElement:
        self._check(x)
        self._check(y)
        return self.from_letters(x.word + y.word)

    def invert(self, x: GroupElement) -> GroupElement:
        self._check(x)
        return self._make(tuple(-l for l in reversed(x.word)))

    def word_length(self, x: GroupElement) -> int:
        self._check(x)
        return len(x.word)

    def generator_elements(self) -> tuple[GroupElement, ...]:
        out = []
        for i in range(1, self.rank + 1):
            out.append(self._make((i,)))
            out.append(self._make((-i,)))
        return tuple(out)

    def _letter_rank(self, l: int) -> int:
        return 2 * (l - 1) if l > 0 else 2 * (-l - 1) + 1

    def structural_key(self, x: GroupElement):
        return tuple(self._letter_rank(l) for l in x.word)

    def format(self, x: GroupElement) -> str:
        if not x.word:
            return "e"
        return "".join(
            self.names[l - 1] if l > 0 else self.names[-l - 1].upper() for l in x.word
        )

    def parse(self, text: str) -> GroupElement:
        text = text.strip()
        if text in ("e", ""):
            return self.identity()
        letters = []
        for ch in text:
            low = ch.lower()
            if low not in self.names:
                raise MalformedWord(f"letter {ch!r} outside alphabet")
            i = self.names.index(low) + 1
            letters.append(i if ch.islower() else -i)
        return self.from_letters(letters)


# ---------------------------------------------------------------------------
# Free abelian groups
# ---------------------------------------------------------------------------


class FreeAbelianContext(GroupContext):
    """Z^n; canonical words are the integer vectors themselves.

    Shortlex tie-breaking uses the plain tuple order, so for Z the ball of
    radius 2 enumerates as 0, -1, 1, -2, 2.
    """

    kind = "free-abelian"

    def __init__(self, rank: int, names: Sequence[str] | None = None):
        super().__init__()
        if rank < 1:
            raise ValueError("rank must be positive")
        self.rank = rank
        self.names = tuple(names) if names else None
        if self.names and len(self.names) != rank:
            raise ValueError("need one name per generator")

    def identity(self) -> GroupElement:
        return self._make((0,) * self.rank)

    def vector(self, *coords: int) -> GroupElement:
        if len(coords) != self.rank:
            raise MalformedWord(f"expected {self.rank} coordinates")
        return self._make(tuple(int(c) for c in coords))

    def integer(self, n: int) -> GroupElement:
        if self.rank != 1:
            raise MalformedWord("integer() needs rank 1")
        return self._make((int(n),))

    def multiply(self, x: GroupElement, y: GroupElement) -> GroupElement:
        self._check(x)
        self._check(y)
        return self._make(tuple(a + b for a, b in zip(x.word, y.word)))

    def invert(self, x: GroupElement) -> GroupElement:
        self._check(x)
        return self._make(tuple(-a for a in x.word))

    def word_length(self, x: GroupElement) -> int:
        self._check(x)
        return sum(abs(a) for a in x.word)

    def generator_elements(self) -> tuple[GroupElement, ...]:
        out = []
        for i in range(self.rank):
            for s in (1, -1):
                vec = [0] * self.rank
                vec[i] = s
                out.append(self._make(tuple(vec)))
        return tuple(out)

    def structural_key(self, x: GroupElement):
        return x.word

    def format(self, x: GroupElement) -> str:
        if self.rank == 1:
            n = x.word[0]
            if self.names:
                if n == 0:
                    return "e"
                if n == 1:
                    return self.names[0]
                return f"{self.names[0]}^{n}"
            return str(n)
        return "(" + ",".join(str(a) for a in x.word) + ")"

    def parse(self, text: str) -> GroupElement:
        text = text.strip()
        if text == "e":
            return self.identity()
        if self.rank == 1:
            if self.names and text.startswith(self.names[0]):
                rest = text[len(self.names[0]):]
                if not rest:
                    return self._make((1,))
                return self._make((int(rest.lstrip("^")),))
            return self._make((int(text),))
        body = text.strip("()")
        coords = [int(part) for part in body.split(",")]
        return self.vector(*coords)


# ---------------------------------------------------------------------------
# Finite groups
# ---------------------------------------------------------------------------


class FiniteGroupContext(GroupContext):
    """Finite group from a row-major multiplication table.

    The table is validated exhaustively at construction (unit, inverses,
    associativity); word lengths over the stated generating set are
    precomputed by breadth-first search.
    """

    kind = "finite"

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        names: Sequence[str] | None = None,
        generators: Sequence[int] | None = None,
    ):
        super().__init__()
        n = len(table)
        self.table = tuple(tuple(int(v) for v in row) for row in table)
        if any(len(row) != n for row in self.table):
            raise ValueError("multiplication table must be square")
        self.order = n
        self.names = tuple(names) if names else tuple(f"g{i}" for i in range(n))
        if len(self.names) != n:
            raise ValueError("need one name per element")
        self._identity_index = self._find_identity()
        self._inverse = self._find_inverses()
        self._validate_associativity()
        if generators is None:
            generators = [i for i in range(n) if i != self._identity_index]
        self.generators = tuple(int(g) for g in generators)
        bad = [g for g in self.generators if not 0 <= g < n or g == self._identity_index]
        if bad:
            raise ValueError(f"bad generator indices {bad}")
        self._lengths = self._bfs_lengths()

    def _find_identity(self) -> int:
        for i in range(self.order):
            if all(self.table[i][j] == j and self.table[j][i] == j for j in range(self.order)):
                return i
        raise ValueError("table has no identity element")

    def _find_inverses(self) -> tuple[int, ...]:
        inv = [-1] * self.order
        e = self._identity_index
        for i in range(self.order):
            for j in range(self.order):
                if self.table[i][j] == e and self.table[j][i] == e:
                    inv[i] = j
                    break
            if inv[i] < 0:
                raise ValueError(f"element {i} has no inverse")
        return tuple(inv)

    def _validate_associativity(self):
        rng = range(self.order)
        t = self.table
        for a in rng:
            for b in rng:
                ab = t[a][b]
                row_b = t[b]
                for c in rng:
                    if t[ab][c] != t[a][row_b[c]]:
                        raise ValueError(f"table not associative at ({a},{b},{c})")

    def _bfs_lengths(self) -> tuple[int, ...]:
        closed_gens = set(self.generators) | {self._inverse[g] for g in self.generators}
        dist = {self._identity_index: 0}
        frontier = [self._identity_index]
        while frontier:
            nxt = []
            for x in frontier:
                for g in sorted(closed_gens):
                    y = self.table[x][g]
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
            frontier = nxt
        if len(dist) != self.order:
            raise ValueError("generators do not generate the group")
        return tuple(dist[i] for i in range(self.order))

    def identity(self) -> GroupElement:
        return self._make((self._identity_index,))

    def element(self, index: int) -> GroupElement:
        if not 0 <= index < self.order:
            raise MalformedWord(f"no element {index}")
        return self._make((int(index),))

    def multiply(self, x: GroupElement, y: GroupElement) -> GroupElement:
        self._check(x)
        self._check(y)
        return self._make((self.table[x.word[0]][y.word[0]],))

    def invert(self, x: GroupElement) -> GroupElement:
        self._check(x)
        return self._make((self._inverse[x.word[0]],))

    def word_length(self, x: GroupElement) -> int:
        self._check(x)
        return self._lengths[x.word[0]]

    def generator_elements(self) -> tuple[GroupElement, ...]:
        seen: dict[int, None] = {}
        for g in self.generators:
            seen.setdefault(g)
            seen.setdefault(self._inverse[g])
        return tuple(self._make((g,)) for g in seen)

    def structural_key(self, x: GroupElement):
        return x.word

    def format(self, x: GroupElement) -> str:
        return self.names[x.word[0]]

    def parse(self, text: str) -> GroupElement:
        text = text.strip()
        if text in self.names:
            return self._make((self.names.index(text),))
        raise MalformedWord(f"unknown element name {text!r}")

    def all_elements(self) -> list[GroupElement]:
        return [self._make((i,)) for i in range(self.order)]


def cyclic_group(n: int) -> FiniteGroupContext:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroupContext(table, names=[str(i) for i in range(n)])


# ---------------------------------------------------------------------------
# Free products with amalgamation
# ---------------------------------------------------------------------------


class AmalgamContext(GroupContext):
    """Free product of two factors glued along a common finite subgroup.

    Canonical form: a tuple of syllables, each a nontrivial left-coset
    transversal representative in its factor, factors strictly alternating,
    followed by a trailing subgroup part.  Transversal representatives are the
    shortlex-least members of their cosets; absorption during multiplication
    runs right-to-left one letter at a time.
    """

    kind = "amalgam"

    def __init__(
        self,
        left: GroupContext,
        right: GroupContext,
        pairs: Sequence[tuple[GroupElement, GroupElement]],
        tags: tuple[str, str] = ("G:", "S:"),
    ):
        super().__init__()
        self.factors = (left, right)
        self.tags = tags
        pairs = list(pairs)
        ids = (left.identity(), right.identity())
        if not any(p[0].word == ids[0].word and p[1].word == ids[1].word for p in pairs):
            pairs.append(ids)
        pairs.sort(key=lambda p: (left.sort_key(p[0]), right.sort_key(p[1])))
        if pairs[0][0].word != ids[0].word:
            raise ValueError("identity pair must be shortlex-least in the gluing data")
        self.pairs = tuple((left._check(a), right._check(b)) for a, b in pairs)
        self._h_index = (
            {a.word: i for i, (a, _) in enumerate(self.pairs)},
            {b.word: i for i, (_, b) in enumerate(self.pairs)},
        )
        if len(self._h_index[0]) != len(self.pairs) or len(self._h_index[1]) != len(self.pairs):
            raise ValueError("gluing data is not a bijection")
        self._validate_gluing()
        self._h_lengths = tuple(
            min(left.word_length(a), right.word_length(b)) for a, b in self.pairs
        )
        self._trivial_h = len(self.pairs) == 1
        self._syllable_counts_metric = self._all_factor_elements_generate()

    def _validate_gluing(self):
        """The pairing must be a subgroup isomorphism on both sides."""
        left, right = self.factors
        n = len(self.pairs)
        for i in range(n):
            a_i, b_i = self.pairs[i]
            if left.invert(a_i).word not in self._h_index[0]:
                raise ValueError("gluing subgroup not closed under inverses (left)")
            for j in range(n):
                a_j, b_j = self.pairs[j]
                prod_left = left.multiply(a_i, a_j)
                prod_right = right.multiply(b_i, b_j)
                k = self._h_index[0].get(prod_left.word)
                if k is None:
                    raise ValueError("gluing subgroup not closed under products")
                if self.pairs[k][1].word != prod_right.word:
                    raise ValueError("gluing pairing is not a homomorphism")

    def _all_factor_elements_generate(self) -> bool:
        # Syllable count equals word length only when every nontrivial factor
        # element is a single letter of the metric.
        for f in self.factors:
            if isinstance(f, FiniteGroupContext):
                if any(f.word_length(x) > 1 for x in f.all_elements()):
                    return False
            elif not self._trivial_h:
                return False
        return True

    # -- subgroup helpers ---------------------------------------------------

    def subgroup_size(self) -> int:
        return len(self.pairs)

    def embed_h(self, side: int, h: int) -> GroupElement:
        return self.pairs[h][side]

    def h_element(self, h: int) -> GroupElement:
        """The trailing-part value ``h`` as a canonical element of the amalgam."""
        return self._make(((), h))

    def _h_lookup(self, side: int, x: GroupElement) -> int | None:
        return self._h_index[side].get(x.word)

    def _split(self, side: int, x: GroupElement) -> tuple[GroupElement, int]:
        """Factor ``x = rep * h`` with rep shortlex-least in the coset x*H."""
        f = self.factors[side]
        best = None
        best_h = None
        for h in range(len(self.pairs)):
            cand = f.multiply(x, self.embed_h(side, h))
            key = f.sort_key(cand)
            if best is None or key < f.sort_key(best):
                best = cand
                best_h = h
        leftover = f.multiply(f.invert(best), x)
        h = self._h_lookup(side, leftover)
        if h is None:  # pragma: no cover - guarded by gluing validation
            raise MalformedWord("transversal split left the subgroup")
        return best, h

    # -- canonical-form construction -----------------------------------------

    def identity(self) -> GroupElement:
        return self._make(((), 0))

    def _append_letter(self, state: tuple, side: int, x: GroupElement) -> tuple:
        syllables, h = state
        f = self.factors[side]
        y = f.multiply(self.embed_h(side, h), x)
        hy = self._h_lookup(side, y)
        if hy is not None:
            return syllables, hy
        if syllables and syllables[-1][0] == side:
            prev = GroupElement(f, syllables[-1][1])
            z = f.multiply(prev, y)
            hz = self._h_lookup(side, z)
            if hz is not None:
                return syllables[:-1], hz
            rep, h2 = self._split(side, z)
            return syllables[:-1] + ((side, rep.word),), h2
        rep, h2 = self._split(side, y)
        return syllables + ((side, rep.word),), h2

    def from_letters(self, letters: Iterable[tuple[int, GroupElement]]) -> GroupElement:
        state: tuple = ((), 0)
        for side, x in letters:
            if side not in (0, 1):
                raise MalformedWord(f"factor tag {side} must be 0 or 1")
            self.factors[side]._check(x)
            state = self._append_letter(state, side, x)
        return self._make(state)

    def syllables(self, x: GroupElement) -> list[tuple[int, GroupElement]]:
        return [(side, GroupElement(self.factors[side], w)) for side, w in x.word[0]]

    def trailing_part(self, x: GroupElement) -> int:
        return x.word[1]

    def multiply(self, x: GroupElement, y: GroupElement) -> GroupElement:
        self._check(x)
        self._check(y)
        state = x.word
        for side, w in y.word[0]:
            state = self._append_letter(state, side, GroupElement(self.factors[side], w))
        h = y.word[1]
        if h:
            state = self._append_letter(state, 0, self.embed_h(0, h))
        return self._make(state)

    def invert(self, x: GroupElement) -> GroupElement:
        self._check(x)
        letters: list[tuple[int, GroupElement]] = []
        h = x.word[1]
        if h:
            letters.append((0, self.factors[0].invert(self.embed_h(0, h))))
        for side, w in reversed(x.word[0]):
            f = self.factors[side]
            letters.append((side, f.invert(GroupElement(f, w))))
        return self.from_letters(letters)

    # -- metric and order ----------------------------------------------------

    def word_length(self, x: GroupElement) -> int:
        self._check(x)
        syllables, h = x.word
        if not syllables:
            return 0 if h == 0 else self._h_lengths[h]
        if self._trivial_h:
            return sum(
                self.factors[side].word_length(GroupElement(self.factors[side], w))
                for side, w in syllables
            )
        if self._syllable_counts_metric:
            return len(syllables)
        return super().word_length(x)

    def generator_elements(self) -> tuple[GroupElement, ...]:
        seen: dict[tuple, GroupElement] = {}
        for side in (0, 1):
            for g in self.factors[side].generator_elements():
                el = self.from_letters([(side, g)])
                seen.setdefault(el.word, el)
        return tuple(seen.values())

    def structural_key(self, x: GroupElement):
        syllables, h = x.word
        body = tuple(
            (side, self.factors[side].sort_key(GroupElement(self.factors[side], w)))
            for side, w in syllables
        )
        return (len(syllables), body, h)

    def format(self, x: GroupElement) -> str:
        syllables, h = x.word
        parts = [
            self.tags[side] + self.factors[side].format(GroupElement(self.factors[side], w))
            for side, w in syllables
        ]
        if h:
            parts.append("h[" + self.factors[0].format(self.embed_h(0, h)) + "]")
        return "*".join(parts) if parts else "e"

    def parse(self, text: str) -> GroupElement:
        text = text.strip()
        if text == "e":
            return self.identity()
        letters = []
        for token in text.split("*"):
            token = token.strip()
            if token.startswith("h[") and token.endswith("]"):
                letters.append((0, self.factors[0].parse(token[2:-1])))
                continue
            for side in (0, 1):
                tag = self.tags[side]
                if tag and token.startswith(tag):
                    letters.append((side, self.factors[side].parse(token[len(tag):])))
                    break
            else:
                # untagged: try each factor in order
                for side in (0, 1):
                    try:
                        letters.append((side, self.factors[side].parse(token)))
                        break
                    except (MalformedWord, ValueError):
                        continue
                else:
                    raise MalformedWord(f"cannot place token {token!r} in either factor")
        return self.from_letters(letters)


# ---------------------------------------------------------------------------
# HNN extensions
# ---------------------------------------------------------------------------


class HnnSubgroupData:
    """Associated-subgroup data: membership, the twisting map, transversals."""

    def in_h(self, g: GroupElement) -> bool:
        raise NotImplementedError

    def in_k(self, g: GroupElement) -> bool:
        raise NotImplementedError

    def twist(self, h: GroupElement) -> GroupElement:
        raise NotImplementedError

    def untwist(self, k: GroupElement) -> GroupElement:
        raise NotImplementedError

    def split_h(self, g: GroupElement) -> tuple[GroupElement, GroupElement]:
        """g = h * rep with h in the subgroup, rep shortlex-least in its coset."""
        raise NotImplementedError

    def split_k(self, g: GroupElement) -> tuple[GroupElement, GroupElement]:
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError


class IntegerScaledSubgroup(HnnSubgroupData):
    """Subgroups m*Z and n*Z of Z with the twist m*j -> n*j.

    ``h_step = 0`` encodes the trivial subgroup (so ``(0, 0)`` builds a free
    product of the base with the stable letter).
    """

    def __init__(self, base: FreeAbelianContext, h_step: int, k_step: int):
        if base.rank != 1:
            raise ValueError("integer subgroup data needs a rank-1 base")
        if (h_step == 0) != (k_step == 0):
            raise ValueError("steps must be both zero or both nonzero")
        self.base = base
        self.h_step = abs(int(h_step))
        self.k_step = abs(int(k_step))

    def _value(self, g: GroupElement) -> int:
        return g.word[0]

    def in_h(self, g: GroupElement) -> bool:
        v = self._value(g)
        return v == 0 if self.h_step == 0 else v % self.h_step == 0

    def in_k(self, g: GroupElement) -> bool:
        v = self._value(g)
        return v == 0 if self.k_step == 0 else v % self.k_step == 0

    def twist(self, h: GroupElement) -> GroupElement:
        v = self._value(h)
        if self.h_step == 0:
            return self.base.integer(0)
        return self.base.integer(v // self.h_step * self.k_step)

    def untwist(self, k: GroupElement) -> GroupElement:
        v = self._value(k)
        if self.k_step == 0:
            return self.base.integer(0)
        return self.base.integer(v // self.k_step * self.h_step)

    def _split(self, g: GroupElement, step: int) -> tuple[GroupElement, GroupElement]:
        v = self._value(g)
        if step == 0:
            return self.base.integer(0), g
        r = v % step
        rep = min((r, r - step), key=lambda c: (abs(c), c))
        return self.base.integer(v - rep), self.base.integer(rep)

    def split_h(self, g: GroupElement) -> tuple[GroupElement, GroupElement]:
        return self._split(g, self.h_step)

    def split_k(self, g: GroupElement) -> tuple[GroupElement, GroupElement]:
        return self._split(g, self.k_step)

    def describe(self) -> dict:
        return {"model": "integer-scaled", "h_step": self.h_step, "k_step": self.k_step}


class FiniteHnnSubgroup(HnnSubgroupData):
    """Explicit finite subgroup lists with the twist given as a table."""

    def __init__(self, base: GroupContext, twist_pairs: Sequence[tuple[GroupElement, GroupElement]]):
        self.base = base
        pairs = list(twist_pairs)
        e = base.identity()
        if not any(a.word == e.word for a, _ in pairs):
            pairs.append((e, e))
        self._twist = {a.word: b for a, b in pairs}
        self._untwist = {b.word: a for a, b in pairs}
        if len(self._twist) != len(pairs) or len(self._untwist) != len(pairs):
            raise ValueError("twist table must be a bijection")
        self.h_elements = tuple(base._check(a) for a, _ in pairs)
        self.k_elements = tuple(base._check(b) for _, b in pairs)
        for a1, b1 in pairs:  # homomorphism check
            for a2, b2 in pairs:
                pa = base.multiply(a1, a2)
                pb = base.multiply(b1, b2)
                img = self._twist.get(pa.word)
                if img is None or img.word != pb.word:
                    raise ValueError("twist table is not an injective homomorphism")

    def in_h(self, g: GroupElement) -> bool:
        return g.word in self._twist

    def in_k(self, g: GroupElement) -> bool:
        return g.word in self._untwist

    def twist(self, h: GroupElement) -> GroupElement:
        return self._twist[h.word]

    def untwist(self, k: GroupElement) -> GroupElement:
        return self._untwist[k.word]

    def _split(self, g: GroupElement, members: tuple[GroupElement, ...]):
        base = self.base
        best = None
        best_h = None
        for h in members:
            cand = base.multiply(base.invert(h), g)
            if best is None or base.sort_key(cand) < base.sort_key(best):
                best = cand
                best_h = h
        return best_h, best

    def split_h(self, g: GroupElement) -> tuple[GroupElement, GroupElement]:
        return self._split(g, self.h_elements)

    def split_k(self, g: GroupElement) -> tuple[GroupElement, GroupElement]:
        return self._split(g, self.k_elements)

    def describe(self) -> dict:
        return {
            "model": "finite",
            "pairs": [
                [self.base.format(a), self.base.format(b)]
                for a, b in zip(self.h_elements, self.k_elements)
            ],
        }


class HnnContext(GroupContext):
    """HNN extension of a base group: one stable letter, pinches eliminated.

    Canonical form ``g0 t^(e1) g1 ... t^(en) gn`` where each ``g_i`` for
    ``i >= 1`` is the chosen transversal representative of its right coset
    (subgroup coset after ``t``, twisted-image coset after ``t^-1``) and no
    pinch ``t g t^-1``/``t^-1 g t`` with trivial representative remains; the
    leading ``g0`` absorbs the leftover subgroup parts.
    """

    kind = "hnn"

    def __init__(self, base: GroupContext, data: HnnSubgroupData, t_name: str = "t"):
        super().__init__()
        self.base = base
        self.data = data
        self.t_name = t_name

    # payload: (g0_word, ((sign, g_word), ...))

    def identity(self) -> GroupElement:
        return self._make((self.base.identity().word, ()))

    def from_base(self, g: GroupElement) -> GroupElement:
        self.base._check(g)
        return self._make((g.word, ()))

    def stable_letter(self, power: int = 1) -> GroupElement:
        letters = [("t", 1 if power > 0 else -1)] * abs(power)
        return self.from_letters(letters)

    def from_letters(self, letters: Iterable[tuple[str, object]]) -> GroupElement:
        """Build from ("g", base_element) and ("t", +1/-1) letters."""
        base = self.base
        head = base.identity()
        blocks: list[list] = []  # [sign, base element]
        for tag, val in letters:
            if tag == "g":
                g = base._check(val)  # type: ignore[arg-type]
                if blocks:
                    blocks[-1][1] = base.multiply(blocks[-1][1], g)
                else:
                    head = base.multiply(head, g)
            elif tag == "t":
                sign = int(val)  # type: ignore[arg-type]
                if sign not in (1, -1):
                    raise MalformedWord("stable-letter power must be +1 or -1")
                if blocks:
                    prev_sign, g = blocks[-1]
                    if prev_sign == -sign:
                        pinch = None
                        if prev_sign == 1 and self.data.in_h(g):
                            pinch = self.data.twist(g)
                        elif prev_sign == -1 and self.data.in_k(g):
                            pinch = self.data.untwist(g)
                        if pinch is not None:
                            blocks.pop()
                            if blocks:
                                blocks[-1][1] = base.multiply(blocks[-1][1], pinch)
                            else:
                                head = base.multiply(head, pinch)
                            continue
                blocks.append([sign, base.identity()])
            else:
                raise MalformedWord(f"unknown letter tag {tag!r}")
        # transversal normalization, pushing subgroup parts left
        for i in range(len(blocks) - 1, -1, -1):
            sign, g = blocks[i]
            if sign == 1:
                h, rep = self.data.split_h(g)
                carry = self.data.twist(h)
            else:
                k, rep = self.data.split_k(g)
                carry = self.data.untwist(k)
            blocks[i][1] = rep
            if i > 0:
                blocks[i - 1][1] = base.multiply(blocks[i - 1][1], carry)
            else:
                head = base.multiply(head, carry)
        return self._make((head.word, tuple((s, g.word) for s, g in blocks)))

    def letters_of(self, x: GroupElement) -> list[tuple[str, object]]:
        base = self.base
        out: list[tuple[str, object]] = [("g", GroupElement(base, x.word[0]))]
        for sign, w in x.word[1]:
            out.append(("t", sign))
            out.append(("g", GroupElement(base, w)))
        return out

    def multiply(self, x: GroupElement, y: GroupElement) -> GroupElement:
        self._check(x)
        self._check(y)
        return self.from_letters(self.letters_of(x) + self.letters_of(y))

    def invert(self, x: GroupElement) -> GroupElement:
        self._check(x)
        base = self.base
        letters: list[tuple[str, object]] = []
        blocks = x.word[1]
        for sign, w in reversed(blocks):
            letters.append(("g", base.invert(GroupElement(base, w))))
            letters.append(("t", -sign))
        letters.append(("g", base.invert(GroupElement(base, x.word[0]))))
        return self.from_letters(letters)

    def head(self, x: GroupElement) -> GroupElement:
        return GroupElement(self.base, x.word[0])

    def blocks(self, x: GroupElement) -> list[tuple[int, GroupElement]]:
        return [(sign, GroupElement(self.base, w)) for sign, w in x.word[1]]

    def generator_elements(self) -> tuple[GroupElement, ...]:
        out = [self.from_base(g) for g in self.base.generator_elements()]
        out.append(self.stable_letter(1))
        out.append(self.stable_letter(-1))
        return tuple(out)

    def structural_key(self, x: GroupElement):
        base = self.base
        body = tuple(
            (0 if sign == 1 else 1, base.sort_key(GroupElement(base, w)))
            for sign, w in x.word[1]
        )
        return (len(x.word[1]), base.sort_key(GroupElement(base, x.word[0])), body)

    def format(self, x: GroupElement) -> str:
        base = self.base
        parts = []
        head = GroupElement(base, x.word[0])
        if head.word != base.identity().word or not x.word[1]:
            parts.append(base.format(head))
        for sign, w in x.word[1]:
            parts.append(self.t_name if sign == 1 else f"{self.t_name}^-1")
            g = GroupElement(base, w)
            if g.word != base.identity().word:
                parts.append(base.format(g))
        return "*".join(parts)

    def parse(self, text: str) -> GroupElement:
        text = text.strip()
        if text == "e":
            return self.identity()
        letters: list[tuple[str, object]] = []
        for token in text.split("*"):
            token = token.strip()
            if token == self.t_name:
                letters.append(("t", 1))
            elif token == f"{self.t_name}^-1":
                letters.append(("t", -1))
            else:
                letters.append(("g", self.base.parse(token)))
        return self.from_letters(letters)


# ---------------------------------------------------------------------------
# Ready-made contexts
# ---------------------------------------------------------------------------


def integers() -> FreeAbelianContext:
    return FreeAbelianContext(1)


def integer_lattice(rank: int) -> FreeAbelianContext:
    return FreeAbelianContext(rank)


def free_group(rank: int, names: Sequence[str] | None = None) -> FreeGroupContext:
    return FreeGroupContext(rank, names)


def amalgam_z4_z6() -> AmalgamContext:
    """Z/4 glued to Z/6 along the common order-2 subgroup {0,2} ~ {0,3}."""
    g = cyclic_group(4)
    s = cyclic_group(6)
    return AmalgamContext(g, s, [(g.element(2), s.element(3))])


def free_product_of_two_integers() -> AmalgamContext:
    """Z * Z presented as an amalgam over the trivial subgroup."""
    g = FreeAbelianContext(1, names=("a",))
    s = FreeAbelianContext(1, names=("b",))
    return AmalgamContext(g, s, [], tags=("", ""))


def baumslag_solitar(m: int, n: int) -> HnnContext:
    """The one-relator group with t a^m t^-1 = a^n, as an HNN extension of Z."""
    base = FreeAbelianContext(1, names=("a",))
    return HnnContext(base, IntegerScaledSubgroup(base, m, n))


def free_group_as_hnn() -> HnnContext:
    """Z * <t>: HNN extension of Z over the trivial subgroup."""
    base = FreeAbelianContext(1, names=("a",))
    return HnnContext(base, IntegerScaledSubgroup(base, 0, 0))
