"""Subsets of a group given by total membership predicates.

A subset is described by a predicate that is total over canonical elements,
never by a finite enumeration: this is what makes finite-window truncations of
translation operators exact rather than approximate.  Claimed stabilisers ride
along as data and are only ever *verified at bounded radius*.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .groups import (
    AmalgamContext,
    FreeAbelianContext,
    FreeGroupContext,
    GroupContext,
    GroupElement,
    HnnContext,
    MalformedWord,
)
from .reports import FALSIFIED, VERIFIED, CheckReport


class Subgroup:
    """A subgroup given by a membership test, optionally with a finite list."""

    def __init__(
        self,
        ctx: GroupContext,
        name: str,
        contains: Callable[[GroupElement], bool],
        elements: Sequence[GroupElement] | None = None,
    ):
        self.ctx = ctx
        self.name = name
        self._contains = contains
        self.elements = tuple(elements) if elements is not None else None

    def contains(self, x: GroupElement) -> bool:
        return bool(self._contains(x))

    @property
    def is_finite(self) -> bool:
        return self.elements is not None

    def elements_in_ball(self, r: int) -> list[GroupElement]:
        if self.elements is not None:
            return [h for h in self.elements if self.ctx.word_length(h) <= r]
        return [h for h in self.ctx.ball(r) if self.contains(h)]

    @classmethod
    def from_elements(cls, ctx: GroupContext, elements: Iterable[GroupElement], name: str) -> "Subgroup":
        elems = list(elements)
        words = {x.word for x in elems}
        e = ctx.identity()
        if e.word not in words:
            elems.append(e)
            words.add(e.word)
        for x in elems:
            if ctx.invert(x).word not in words:
                raise ValueError(f"subgroup {name} not closed under inverses")
            for y in elems:
                if ctx.multiply(x, y).word not in words:
                    raise ValueError(f"subgroup {name} not closed under products")
        elems.sort(key=ctx.sort_key)
        return cls(ctx, name, lambda x: x.word in words, elems)

    @classmethod
    def from_predicate(cls, ctx: GroupContext, name: str, contains: Callable[[GroupElement], bool]) -> "Subgroup":
        return cls(ctx, name, contains)

    @classmethod
    def trivial(cls, ctx: GroupContext) -> "Subgroup":
        e = ctx.identity()
        return cls.from_elements(ctx, [e], "{e}")

    def report_form(self):
        if self.elements is not None:
            return {"name": self.name, "elements": [self.ctx.format(h) for h in self.elements]}
        return {"name": self.name}


@dataclass
class SubsetSpec:
    """Total membership predicate plus claimed stabiliser data."""

    ctx: GroupContext
    name: str
    params: dict = field(default_factory=dict)
    predicate: Callable[[GroupElement], bool] = lambda x: True
    left_stabiliser: Subgroup | None = None
    right_stabiliser: Subgroup | None = None
    ambient: "SubsetSpec | None" = None

    def __post_init__(self):
        self._cache: dict[tuple, bool] = {}

    def contains(self, x: GroupElement) -> bool:
        if x.ctx is not self.ctx:
            raise MalformedWord("element belongs to a different group context")
        hit = self._cache.get(x.word)
        if hit is None:
            hit = bool(self.predicate(x))
            self._cache[x.word] = hit
        return hit

    def elements_in_ball(self, r: int) -> list[GroupElement]:
        return [x for x in self.ctx.ball(r) if self.contains(x)]

    def report_form(self):
        return {"name": self.name, "params": self.params}


def from_predicate(
    ctx: GroupContext,
    name: str,
    predicate: Callable[[GroupElement], bool],
    left_stabiliser: Subgroup | None = None,
    right_stabiliser: Subgroup | None = None,
    ambient: SubsetSpec | None = None,
    params: dict | None = None,
) -> SubsetSpec:
    return SubsetSpec(ctx, name, params or {}, predicate, left_stabiliser, right_stabiliser, ambient)


def whole_group(ctx: GroupContext) -> SubsetSpec:
    return from_predicate(ctx, "all", lambda x: True, params={"kind": "universal-all"})


def complement(spec: SubsetSpec, name: str | None = None) -> SubsetSpec:
    return from_predicate(
        spec.ctx,
        name or f"complement({spec.name})",
        lambda x: not spec.contains(x),
        params={"kind": "complement", "of": spec.name},
    )


def difference(outer: SubsetSpec, inner: SubsetSpec, name: str | None = None) -> SubsetSpec:
    return from_predicate(
        outer.ctx,
        name or f"{outer.name}-minus-{inner.name}",
        lambda x: outer.contains(x) and not inner.contains(x),
        params={"kind": "difference", "outer": outer.name, "inner": inner.name},
    )


# ---------------------------------------------------------------------------
# Coordinate subsets of Z^n
# ---------------------------------------------------------------------------


def coordinate_halfspace(ctx: FreeAbelianContext, coord: int = 0, lower: int = 0) -> SubsetSpec:
    """{v : v[coord] >= lower}; for Z with lower=0 this is the natural numbers."""
    if not isinstance(ctx, FreeAbelianContext):
        raise ValueError("coordinate halfspaces need a free-abelian context")
    if not 0 <= coord < ctx.rank:
        raise ValueError("coordinate out of range")
    if ctx.rank == 1:
        axis = Subgroup.trivial(ctx)
    else:
        axis = Subgroup.from_predicate(
            ctx, f"axis[{coord}=0]", lambda x, c=coord: x.word[c] == 0
        )
    return from_predicate(
        ctx,
        f"halfspace[{coord}>={lower}]",
        lambda x: x.word[coord] >= lower,
        left_stabiliser=axis,
        right_stabiliser=axis,
        params={"kind": "interval", "coord": coord, "lo": lower, "hi": None},
    )


def natural_numbers(ctx: FreeAbelianContext) -> SubsetSpec:
    if ctx.rank != 1:
        raise ValueError("natural_numbers needs Z")
    spec = coordinate_halfspace(ctx, 0, 0)
    spec.name = "naturals"
    return spec


def congruence_class(ctx: FreeAbelianContext, modulus: int, residue: int = 0, coord: int = 0) -> SubsetSpec:
    """{v : v[coord] = residue mod modulus}; the evens for (2, 0)."""
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    stab = Subgroup.from_predicate(
        ctx, f"{modulus}Z[{coord}]", lambda x, c=coord, m=modulus: x.word[c] % m == 0
    )
    return from_predicate(
        ctx,
        f"congruence[{coord}%{modulus}={residue}]",
        lambda x: x.word[coord] % modulus == residue % modulus,
        left_stabiliser=stab,
        right_stabiliser=stab,
        params={"kind": "congruence", "coord": coord, "modulus": modulus, "residue": residue},
    )


# ---------------------------------------------------------------------------
# Free-group subsets
# ---------------------------------------------------------------------------


def positive_cone(ctx: FreeGroupContext) -> SubsetSpec:
    """Words in positive letters only, together with the identity."""
    if not isinstance(ctx, FreeGroupContext):
        raise ValueError("positive cones need a free context")
    return from_predicate(
        ctx,
        "positive-cone",
        lambda x: all(l > 0 for l in x.word),
        left_stabiliser=Subgroup.trivial(ctx),
        right_stabiliser=Subgroup.trivial(ctx),
        params={"kind": "positive-cone"},
    )


def words_not_starting_with(ctx: FreeGroupContext, letter: GroupElement) -> SubsetSpec:
    """Reduced words whose first letter differs from the given one."""
    if len(letter.word) != 1:
        raise ValueError("need a single-letter element")
    banned = letter.word[0]
    return from_predicate(
        ctx,
        f"not-starting-{ctx.format(letter)}",
        lambda x: not x.word or x.word[0] != banned,
        left_stabiliser=Subgroup.trivial(ctx),
        params={"kind": "custom-first-letter", "exclude": ctx.format(letter)},
    )


def words_starting_with(ctx: FreeGroupContext, letter: GroupElement) -> SubsetSpec:
    if len(letter.word) != 1:
        raise ValueError("need a single-letter element")
    first = letter.word[0]
    return from_predicate(
        ctx,
        f"starting-{ctx.format(letter)}",
        lambda x: bool(x.word) and x.word[0] == first,
        params={"kind": "custom-first-letter", "require": ctx.format(letter)},
    )


def cyclic_translates(base: SubsetSpec, g: GroupElement, name: str | None = None) -> SubsetSpec:
    """Union of the translates g^k * base over all integers k.

    Membership of x is decided by scanning |k| <= word_length(x) + 1, which is
    exhaustive for every built-in base (the translate must cancel against a
    geodesic prefix of x).
    """
    ctx = base.ctx
    g_inv = ctx.invert(g)

    def member(x: GroupElement) -> bool:
        bound = ctx.word_length(x) + 1
        fwd = x
        back = x
        if base.contains(x):
            return True
        for _ in range(bound):
            fwd = ctx.multiply(g_inv, fwd)
            back = ctx.multiply(g, back)
            if base.contains(fwd) or base.contains(back):
                return True
        return False

    def in_cyclic(x: GroupElement) -> bool:
        bound = ctx.word_length(x) + 1
        fwd = ctx.identity()
        back = ctx.identity()
        if x.word == fwd.word:
            return True
        for _ in range(bound):
            fwd = ctx.multiply(fwd, g)
            back = ctx.multiply(back, g_inv)
            if x.word == fwd.word or x.word == back.word:
                return True
        return False

    stab = Subgroup.from_predicate(ctx, f"<{ctx.format(g)}>", in_cyclic)
    return from_predicate(
        ctx,
        name or f"translates[{ctx.format(g)}]({base.name})",
        member,
        left_stabiliser=stab,
        ambient=None,
        params={"kind": "coset-union", "base": base.name, "translator": ctx.format(g)},
    )


# ---------------------------------------------------------------------------
# Half-spaces from tree actions
# ---------------------------------------------------------------------------


def make_tree_halfspace(ctx: GroupContext, side: str) -> SubsetSpec:
    """Half-space subsets read off the first syllable of the canonical form.

    For an amalgam, side "G" (resp. "S") keeps the words whose first syllable
    lies in that factor, together with the whole glued subgroup.  For an HNN
    extension, side "B" keeps the elements with no reduced expression starting
    with the inverse stable letter, and side "tB" their forward translate.
    """
    if isinstance(ctx, AmalgamContext):
        if side not in ("G", "S"):
            raise ValueError("amalgam sides are 'G' and 'S'")
        want = 0 if side == "G" else 1
        other = 1 - want

        def member(x: GroupElement) -> bool:
            syllables, _h = x.word
            if not syllables:
                return True  # subgroup elements sit in both half-spaces
            return syllables[0][0] == want

        h_elems = [ctx.h_element(i) for i in range(ctx.subgroup_size())]
        left = Subgroup.from_elements(ctx, h_elems, "H")

        def right_member(x: GroupElement) -> bool:
            syllables, _h = x.word
            return all(s == want for s, _ in syllables)

        right = Subgroup.from_predicate(ctx, side, right_member)
        return from_predicate(
            ctx,
            f"halfspace-{side}",
            member,
            left_stabiliser=left,
            right_stabiliser=right,
            params={"kind": "halfspace", "side": side},
        )

    if isinstance(ctx, HnnContext):
        if side not in ("B", "tB"):
            raise ValueError("hnn sides are 'B' and 'tB'")

        def in_b(x: GroupElement) -> bool:
            head, blocks = x.word
            if not blocks:
                return True
            first_sign, _ = blocks[0]
            if first_sign == 1:
                return True
            return not ctx.data.in_h(ctx.head(x))

        def in_tb(x: GroupElement) -> bool:
            head, blocks = x.word
            if not blocks:
                return False
            first_sign, _ = blocks[0]
            if first_sign == -1:
                return False
            return ctx.data.in_k(ctx.head(x))

        def left_b(x: GroupElement) -> bool:
            head, blocks = x.word
            return not blocks and ctx.data.in_h(ctx.head(x))

        def left_tb(x: GroupElement) -> bool:
            head, blocks = x.word
            return not blocks and ctx.data.in_k(ctx.head(x))

        def right_g(x: GroupElement) -> bool:
            return not x.word[1]

        if side == "B":
            return from_predicate(
                ctx,
                "halfspace-B",
                in_b,
                left_stabiliser=Subgroup.from_predicate(ctx, "H", left_b),
                right_stabiliser=Subgroup.from_predicate(ctx, "G", right_g),
                params={"kind": "halfspace", "side": "B"},
            )
        return from_predicate(
            ctx,
            "halfspace-tB",
            in_tb,
            left_stabiliser=Subgroup.from_predicate(ctx, "K", left_tb),
            right_stabiliser=Subgroup.from_predicate(ctx, "G", right_g),
            params={"kind": "halfspace", "side": "tB"},
        )

    raise ValueError(f"context kind {ctx.kind!r} has no tree half-spaces")


def amalgam_subgroup(ctx: AmalgamContext) -> Subgroup:
    return Subgroup.from_elements(
        ctx, [ctx.h_element(i) for i in range(ctx.subgroup_size())], "H"
    )


# ---------------------------------------------------------------------------
# Bounded stabiliser verification
# ---------------------------------------------------------------------------


def verify_stabilisers(spec: SubsetSpec, r: int, search_radius: int | None = None) -> CheckReport:
    """Check the claimed stabilisers on Ball(e, r) and hunt for unclaimed ones.

    Claimed elements h are tested via predicate(h*x) == predicate(x) (left)
    and predicate(x*h) == predicate(x) (right) for every x in the ball.  The
    candidate search scans a smaller ball for elements that stabilise on the
    whole test ball but are not claimed.
    """
    ctx = spec.ctx
    if search_radius is None:
        search_radius = max(0, r - 2)
    ball = ctx.ball(r)
    failures = []
    confirmed = {"left": [], "right": []}

    def test(h: GroupElement, side: str) -> GroupElement | None:
        for x in ball:
            moved = ctx.multiply(h, x) if side == "left" else ctx.multiply(x, h)
            if spec.contains(moved) != spec.contains(x):
                return x
        return None

    for side, sub in (("left", spec.left_stabiliser), ("right", spec.right_stabiliser)):
        if sub is None:
            continue
        claimed = sub.elements_in_ball(r)
        for h in claimed:
            witness = test(h, side)
            if witness is None:
                confirmed[side].append(ctx.format(h))
            else:
                failures.append(
                    {"side": side, "element": ctx.format(h), "witness": ctx.format(witness)}
                )

    unclaimed = []
    for g in ctx.ball(search_radius):
        if spec.left_stabiliser is not None and spec.left_stabiliser.contains(g):
            continue
        if test(g, "left") is None:
            unclaimed.append(ctx.format(g))

    verdict = FALSIFIED if failures else VERIFIED
    return CheckReport(
        name="stabiliser-verification",
        params={"subset": spec.name, "r": r, "search_radius": search_radius},
        verdict=verdict,
        witnesses=failures,
        compared_count=len(ball),
        details={"confirmed": confirmed, "unclaimed_left_candidates": unclaimed},
    )
