"""Exact finite truncations of partial translation operators.

Operators live on a *window*: the shortlex-ordered list of subset elements
within a ball.  Entries are exact rationals; membership questions are always
answered by the subset's total predicate, so an entry is either exactly
correct or the row is marked *clipped* because the true image (or, for
columns, the true preimage) leaves the window.  Equality assertions compare
only mutually unclipped rows and are therefore exact statements about the
untruncated operators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .groups import GroupElement, MalformedWord
from .subsets import SubsetSpec, Subgroup
from .tracks import Track

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Window:
    spec: SubsetSpec
    radius: int
    points: tuple[GroupElement, ...]
    index: dict

    def __len__(self) -> int:
        return len(self.points)

    def position(self, x: GroupElement) -> int | None:
        return self.index.get(x.word)

    def report_form(self):
        return {"subset": self.spec.name, "R": self.radius, "size": len(self.points)}


def make_window(spec: SubsetSpec, radius: int) -> Window:
    points = tuple(spec.elements_in_ball(radius))
    index = {x.word: i for i, x in enumerate(points)}
    return Window(spec, radius, points, index)


class TranslationOperator:
    """Sparse rational matrix on a window with clipping bookkeeping.

    ``entries[(row, col)]`` is the coefficient of the target basis vector
    ``col`` in the image of the source basis vector ``row``.  ``clipped_rows``
    are sources whose true image leaves the window; ``clipped_cols`` are
    targets that the true operator reaches from outside the window.  Treat
    instances as immutable.
    """

    __slots__ = ("window", "entries", "clipped_rows", "clipped_cols")

    def __init__(
        self,
        window: Window,
        entries: dict,
        clipped_rows: Iterable[int] = (),
        clipped_cols: Iterable[int] = (),
    ):
        self.window = window
        self.entries = {k: v for k, v in entries.items() if v != 0}
        self.clipped_rows = frozenset(clipped_rows)
        self.clipped_cols = frozenset(clipped_cols)

    def row(self, i: int) -> dict:
        return {c: v for (r, c), v in self.entries.items() if r == i}

    def rows(self) -> dict:
        out: dict[int, dict[int, Fraction]] = {}
        for (r, c), v in self.entries.items():
            out.setdefault(r, {})[c] = v
        return out

    def __matmul__(self, other: "TranslationOperator") -> "TranslationOperator":
        return compose(self, other)

    def report_form(self):
        w = self.window
        return {
            "window": w.report_form(),
            "entries": sorted(
                [w.spec.ctx.format(w.points[r]), w.spec.ctx.format(w.points[c]), v.numerator, v.denominator]
                for (r, c), v in self.entries.items()
            ),
            "clipped": sorted(w.spec.ctx.format(w.points[r]) for r in self.clipped_rows),
        }


def _same_window(a: TranslationOperator, b: TranslationOperator):
    if a.window is not b.window and a.window.points != b.window.points:
        raise MalformedWord("operators live on different windows")


def zero_operator(w: Window) -> TranslationOperator:
    return TranslationOperator(w, {})


def identity_operator(w: Window) -> TranslationOperator:
    return TranslationOperator(w, {(i, i): ONE for i in range(len(w))})


def generator_operator(w: Window, g: GroupElement) -> TranslationOperator:
    """The partial translation by g: source x maps to x * g^-1.

    A row is present when both x and x * g^-1 lie in the subset; it is clipped
    when the image is in the subset but beyond the window.  Columns receiving
    from beyond the window are recorded symmetrically.
    """
    spec = w.spec
    ctx = spec.ctx
    g_inv = ctx.invert(g)
    entries = {}
    clipped_rows = set()
    clipped_cols = set()
    for i, x in enumerate(w.points):
        y = ctx.multiply(x, g_inv)
        if spec.contains(y):
            j = w.position(y)
            if j is None:
                clipped_rows.add(i)
            else:
                entries[(i, j)] = ONE
    for j, y in enumerate(w.points):
        x = ctx.multiply(y, g)
        if spec.contains(x) and w.position(x) is None:
            clipped_cols.add(j)
    return TranslationOperator(w, entries, clipped_rows, clipped_cols)


def track_operator(w: Window, track: Track) -> TranslationOperator:
    """Operator of a whole track: nonzero exactly where every visited point stays inside."""
    spec = w.spec
    ctx = spec.ctx
    g_inv = ctx.invert(track.total)
    inverses = [ctx.invert(h) for h in track.visited]
    entries = {}
    clipped_rows = set()
    clipped_cols = set()
    for i, x in enumerate(w.points):
        if all(spec.contains(ctx.multiply(x, hinv)) for hinv in inverses):
            y = ctx.multiply(x, g_inv)
            j = w.position(y)
            if j is None:
                clipped_rows.add(i)
            else:
                entries[(i, j)] = ONE
    for j, y in enumerate(w.points):
        x = ctx.multiply(y, track.total)
        if w.position(x) is None and all(
            spec.contains(ctx.multiply(x, hinv)) for hinv in inverses
        ):
            clipped_cols.add(j)
    return TranslationOperator(w, entries, clipped_rows, clipped_cols)


def compose(after: TranslationOperator, first: TranslationOperator) -> TranslationOperator:
    """Operator product ``after * first``: ``first`` acts on the vector first.

    Row bookkeeping: a source is clipped if ``first`` already lost its image,
    or if ``first`` maps it onto a row that ``after`` clips.  Columns mirror
    this through the targets.
    """
    _same_window(after, first)
    entries: dict[tuple[int, int], Fraction] = {}
    after_rows = after.rows()
    for (i, j), v in first.entries.items():
        arow = after_rows.get(j)
        if not arow:
            continue
        for k, u in arow.items():
            key = (i, k)
            acc = entries.get(key, ZERO) + v * u
            if acc == 0:
                entries.pop(key, None)
            else:
                entries[key] = acc
    clipped_rows = set(first.clipped_rows)
    for (i, j), v in first.entries.items():
        if j in after.clipped_rows:
            clipped_rows.add(i)
    clipped_cols = set(after.clipped_cols)
    for (j, k), v in after.entries.items():
        if j in first.clipped_cols:
            clipped_cols.add(k)
    return TranslationOperator(first.window, entries, clipped_rows, clipped_cols)


def compose_chain(ops: Sequence[TranslationOperator]) -> TranslationOperator:
    """Product in writing order: the rightmost operator acts first."""
    if not ops:
        raise ValueError("empty operator chain")
    acc = ops[-1]
    for op in reversed(ops[:-1]):
        acc = compose(op, acc)
    return acc


def adjoint(a: TranslationOperator) -> TranslationOperator:
    """Transpose; clipping for rows and columns swaps accordingly."""
    entries = {(c, r): v for (r, c), v in a.entries.items()}
    return TranslationOperator(a.window, entries, a.clipped_cols, a.clipped_rows)


def combine(coeffs: Sequence[Fraction | int], ops: Sequence[TranslationOperator]) -> TranslationOperator:
    if len(coeffs) != len(ops):
        raise ValueError("one coefficient per operator")
    if not ops:
        raise ValueError("empty combination")
    for op in ops[1:]:
        _same_window(ops[0], op)
    entries: dict[tuple[int, int], Fraction] = {}
    clipped_rows: set[int] = set()
    clipped_cols: set[int] = set()
    for c, op in zip(coeffs, ops):
        c = Fraction(c)
        clipped_rows |= op.clipped_rows
        clipped_cols |= op.clipped_cols
        if c == 0:
            continue
        for key, v in op.entries.items():
            acc = entries.get(key, ZERO) + c * v
            if acc == 0:
                entries.pop(key, None)
            else:
                entries[key] = acc
    return TranslationOperator(ops[0].window, entries, clipped_rows, clipped_cols)


def subtract(a: TranslationOperator, b: TranslationOperator) -> TranslationOperator:
    return combine([1, -1], [a, b])


def coset_projection(w: Window, subgroup: Subgroup | Sequence[GroupElement], b: GroupElement) -> TranslationOperator:
    """Diagonal 0/1 projection onto the window points of the coset H*b."""
    ctx = w.spec.ctx
    if isinstance(subgroup, Subgroup):
        member = subgroup.contains
    else:
        words = {h.word for h in subgroup}
        member = lambda x: x.word in words
    b_inv = ctx.invert(b)
    entries = {}
    for i, x in enumerate(w.points):
        if member(ctx.multiply(x, b_inv)):
            entries[(i, i)] = ONE
    return TranslationOperator(w, entries)


def domain_projection(w: Window, g: GroupElement) -> TranslationOperator:
    """Diagonal projection onto {x : x * g^-1 in the subset}.

    Equals adjoint(T_g) @ T_g but built from the predicate, hence never
    clipped.
    """
    spec = w.spec
    ctx = spec.ctx
    g_inv = ctx.invert(g)
    entries = {}
    for i, x in enumerate(w.points):
        if spec.contains(ctx.multiply(x, g_inv)):
            entries[(i, i)] = ONE
    return TranslationOperator(w, entries)


@dataclass
class MatchResult:
    equal: bool
    rows_compared: int
    mismatch: dict | None = None

    def report_form(self):
        out = {"equal": self.equal, "rows_compared": self.rows_compared}
        if self.mismatch is not None:
            out["first_mismatch"] = self.mismatch
        return out


def guarded_equal(a: TranslationOperator, b: TranslationOperator) -> MatchResult:
    """Exact equality on every row that neither operator clipped."""
    _same_window(a, b)
    w = a.window
    excluded = a.clipped_rows | b.clipped_rows
    rows_a = a.rows()
    rows_b = b.rows()
    compared = 0
    for i in range(len(w)):
        if i in excluded:
            continue
        compared += 1
        ra = rows_a.get(i, {})
        rb = rows_b.get(i, {})
        if ra != rb:
            cols = sorted(set(ra) | set(rb), key=lambda c: (ra.get(c, ZERO) == rb.get(c, ZERO), c))
            c = cols[0]
            ctx = w.spec.ctx
            return MatchResult(
                False,
                compared,
                {
                    "row": ctx.format(w.points[i]),
                    "col": ctx.format(w.points[c]),
                    "lhs": ra.get(c, ZERO),
                    "rhs": rb.get(c, ZERO),
                },
            )
    return MatchResult(True, compared)


def is_partial_permutation(a: TranslationOperator) -> bool:
    """0/1 entries with at most one nonzero per row and per column."""
    row_seen: set[int] = set()
    col_seen: set[int] = set()
    for (r, c), v in a.entries.items():
        if v != ONE:
            return False
        if r in row_seen or c in col_seen:
            return False
        row_seen.add(r)
        col_seen.add(c)
    return True


def rank_of_vectors(vectors: Sequence[dict]) -> int:
    """Exact rank over Q of sparse vectors keyed by arbitrary hashable columns."""
    basis: list[dict] = []
    pivots: list = []
    for vec in vectors:
        work = dict(vec)
        for pivot, bvec in zip(pivots, basis):
            coeff = work.get(pivot)
            if coeff:
                factor = coeff / bvec[pivot]
                for k, v in bvec.items():
                    acc = work.get(k, ZERO) - factor * v
                    if acc == 0:
                        work.pop(k, None)
                    else:
                        work[k] = acc
        work = {k: v for k, v in work.items() if v != 0}
        if work:
            pivot = min(work, key=repr)
            pivots.append(pivot)
            basis.append(work)
    return len(basis)


def matrix_rank(a: TranslationOperator) -> int:
    return rank_of_vectors(list(a.rows().values()))


def mask_clipped_rows(a: TranslationOperator) -> TranslationOperator:
    """Zero out clipped rows, keeping the clip sets; used before rank claims."""
    entries = {k: v for k, v in a.entries.items() if k[0] not in a.clipped_rows}
    return TranslationOperator(a.window, entries, a.clipped_rows, a.clipped_cols)
