"""The monoid of tracks: product plus visited suffix set.

A sequence of group elements determines an operator product on any subset,
and two sequences with the same track give the same operator.  The track of
(g_1, ..., g_k) is the pair (total, visited) where total = g_1...g_k and
visited collects the identity together with every suffix product
g_i g_{i+1} ... g_k.  Composition is

    (g, F) . (g', F') = (g g', F g' | F')

with identity (e, {e}).  Visited sets are stored shortlex-sorted so tracks
are canonical, hashable values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .groups import GroupContext, GroupElement
from .subsets import SubsetSpec


@dataclass(frozen=True)
class Track:
    total: GroupElement
    visited: tuple[GroupElement, ...]

    def report_form(self):
        ctx = self.total.ctx
        return {
            "total": ctx.format(self.total),
            "visited": [ctx.format(h) for h in self.visited],
        }


def _canonical(ctx: GroupContext, total: GroupElement, visited: Iterable[GroupElement]) -> Track:
    seen: dict[tuple, GroupElement] = {}
    for h in visited:
        seen.setdefault(h.word, h)
    ordered = tuple(sorted(seen.values(), key=ctx.sort_key))
    return Track(total, ordered)


def make_track(ctx: GroupContext, total: GroupElement, visited: Iterable[GroupElement]) -> Track:
    track = _canonical(ctx, total, list(visited) + [ctx.identity(), total])
    return track


def identity_track(ctx: GroupContext) -> Track:
    e = ctx.identity()
    return Track(e, (e,))


def track_of_sequence(ctx: GroupContext, elements: Sequence[GroupElement]) -> Track:
    suffix = ctx.identity()
    visited = [suffix]
    for g in reversed(elements):
        suffix = ctx.multiply(g, suffix)
        visited.append(suffix)
    return _canonical(ctx, suffix, visited)


def compose_tracks(ctx: GroupContext, first: Track, second: Track) -> Track:
    total = ctx.multiply(first.total, second.total)
    visited = [ctx.multiply(h, second.total) for h in first.visited]
    visited.extend(second.visited)
    return _canonical(ctx, total, visited)


def is_valid(ctx: GroupContext, track: Track) -> bool:
    words = {h.word for h in track.visited}
    return ctx.identity().word in words and track.total.word in words


def nonzero_witness(track: Track, spec: SubsetSpec, radius: int) -> GroupElement | None:
    """Smallest x in the window on which the track's operator is nonzero.

    The operator sends the basis vector at x to the one at x * total^-1
    exactly when x h^-1 lies in the subset for every visited h; absence of a
    witness is only meaningful within the scanned window.
    """
    ctx = spec.ctx
    inverses = [ctx.invert(h) for h in track.visited]
    for x in spec.elements_in_ball(radius):
        if all(spec.contains(ctx.multiply(x, hinv)) for hinv in inverses):
            return x
    return None
