"""Desk model of the subgroup-symmetric module over a subset.

For a finite subgroup H stabilising a subset B on the left, the formal
vectors sigma_b (b in B) carry an H-group-algebra-valued inner product

    <sigma_g, sigma_k> = rho(g k^-1)   if g k^-1 lies in H, else 0,

extended sesquilinearly, together with a right action by translation
operators.  Projections onto single H-cosets are realized exactly as windowed
diagonal operators, and the two ideal-membership identities that drive the
extension picture are checked on windows:

* the isolation product  prod_{g in F1} (T_g* T_g) * prod_{g in F2} (1 - T_g* T_g)
  recovers the projection onto H;
* with P the diagonal onto X minus B and P^g its translate (T^X_g)* P T^X_g,
  the projection onto H satisfies p_H = p_H P^g whenever g^-1 lies in X minus B.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .groups import GroupElement
from .operators import (
    TranslationOperator,
    Window,
    adjoint,
    combine,
    compose,
    coset_projection,
    domain_projection,
    generator_operator,
    guarded_equal,
    identity_operator,
    make_window,
)
from .reports import FALSIFIED, INCONCLUSIVE, VERIFIED, CheckReport
from .subsets import SubsetSpec, Subgroup

ZERO = Fraction(0)


class HAlgebraElement:
    """Finite formal rational combination of subgroup translations."""

    def __init__(self, subgroup: Subgroup, coeffs: dict | None = None):
        if not subgroup.is_finite:
            raise ValueError("group-algebra elements need a finite subgroup")
        self.subgroup = subgroup
        self.coeffs: dict[tuple, Fraction] = {}
        for word, value in (coeffs or {}).items():
            value = Fraction(value)
            if value != 0:
                self.coeffs[word] = value
        for word in self.coeffs:
            if not subgroup.contains(GroupElement(subgroup.ctx, word)):
                raise ValueError("coefficient outside the subgroup")

    @classmethod
    def unit(cls, subgroup: Subgroup) -> "HAlgebraElement":
        return cls(subgroup, {subgroup.ctx.identity().word: Fraction(1)})

    @classmethod
    def of(cls, subgroup: Subgroup, h: GroupElement, value=1) -> "HAlgebraElement":
        return cls(subgroup, {h.word: Fraction(value)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "HAlgebraElement") -> "HAlgebraElement":
        out = dict(self.coeffs)
        for w, v in other.coeffs.items():
            out[w] = out.get(w, ZERO) + v
        return HAlgebraElement(self.subgroup, out)

    def __sub__(self, other: "HAlgebraElement") -> "HAlgebraElement":
        out = dict(self.coeffs)
        for w, v in other.coeffs.items():
            out[w] = out.get(w, ZERO) - v
        return HAlgebraElement(self.subgroup, out)

    def __mul__(self, other: "HAlgebraElement") -> "HAlgebraElement":
        ctx = self.subgroup.ctx
        out: dict[tuple, Fraction] = {}
        for w1, v1 in self.coeffs.items():
            for w2, v2 in other.coeffs.items():
                prod = ctx.multiply(GroupElement(ctx, w1), GroupElement(ctx, w2))
                out[prod.word] = out.get(prod.word, ZERO) + v1 * v2
        return HAlgebraElement(self.subgroup, out)

    def star(self) -> "HAlgebraElement":
        ctx = self.subgroup.ctx
        out = {}
        for w, v in self.coeffs.items():
            out[ctx.invert(GroupElement(ctx, w)).word] = v
        return HAlgebraElement(self.subgroup, out)

    def __eq__(self, other) -> bool:
        return isinstance(other, HAlgebraElement) and self.coeffs == other.coeffs

    def regular_matrix(self) -> list[list[Fraction]]:
        """Matrix of right translation on the subgroup's own basis."""
        ctx = self.subgroup.ctx
        elems = list(self.subgroup.elements)
        pos = {x.word: i for i, x in enumerate(elems)}
        n = len(elems)
        mat = [[ZERO] * n for _ in range(n)]
        for w, v in self.coeffs.items():
            h_inv = ctx.invert(GroupElement(ctx, w))
            for i, x in enumerate(elems):
                target = ctx.multiply(x, h_inv)
                mat[i][pos[target.word]] += v
        return mat

    def is_positive_semidefinite(self) -> bool:
        """Exact test through the characteristic polynomial of the regular matrix.

        A rational symmetric matrix is PSD iff det(tI - A) = t^n - c1 t^(n-1)
        + c2 t^(n-2) - ... has all c_k >= 0; the coefficients are computed by
        exact trace recursion.
        """
        mat = self.regular_matrix()
        n = len(mat)
        for i in range(n):
            for j in range(n):
                if mat[i][j] != mat[j][i]:
                    return False
        return all(e >= 0 for e in _elementary_symmetrics(mat))

    def report_form(self):
        ctx = self.subgroup.ctx
        return {
            ctx.format(GroupElement(ctx, w)): [v.numerator, v.denominator]
            for w, v in sorted(self.coeffs.items())
        }


def _elementary_symmetrics(mat: list[list[Fraction]]) -> list[Fraction]:
    """Elementary symmetric functions e_1..e_n of the eigenvalues, exactly.

    Power sums come from repeated multiplication, e_k from Newton's identity
    k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i.  For a symmetric matrix all
    eigenvalues are real, and they are all nonnegative iff every e_k >= 0.
    """
    n = len(mat)
    power = [row[:] for row in mat]
    psums = []
    for k in range(n):
        if k:
            power = _mat_mul(power, mat)
        psums.append(sum(power[i][i] for i in range(n)))
    es: list[Fraction] = [Fraction(1)]
    for k in range(1, n + 1):
        acc = ZERO
        for i in range(1, k + 1):
            term = es[k - i] * psums[i - 1]
            acc += term if i % 2 == 1 else -term
        es.append(acc / k)
    return es[1:]


def _mat_mul(a: list[list[Fraction]], b: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(a)
    out = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        arow = a[i]
        orow = out[i]
        for k, v in enumerate(arow):
            if v == 0:
                continue
            brow = b[k]
            for j in range(n):
                if brow[j] != 0:
                    orow[j] += v * brow[j]
    return out


class SigmaVector:
    """Formal rational combination of sigma symbols over subset points."""

    def __init__(self, spec: SubsetSpec, coeffs: dict | None = None):
        self.spec = spec
        self.coeffs: dict[tuple, Fraction] = {}
        for word, value in (coeffs or {}).items():
            value = Fraction(value)
            if value == 0:
                continue
            if not spec.contains(GroupElement(spec.ctx, word)):
                raise ValueError("sigma symbol outside the subset")
            self.coeffs[word] = value

    @classmethod
    def basis(cls, spec: SubsetSpec, g: GroupElement, value=1) -> "SigmaVector":
        return cls(spec, {g.word: Fraction(value)})

    def __add__(self, other: "SigmaVector") -> "SigmaVector":
        out = dict(self.coeffs)
        for w, v in other.coeffs.items():
            out[w] = out.get(w, ZERO) + v
        return SigmaVector(self.spec, out)

    def act_by(self, k: GroupElement) -> "SigmaVector":
        """Right action: sigma_g . T_k = sigma_{g k} when g k stays inside, else 0."""
        ctx = self.spec.ctx
        out: dict[tuple, Fraction] = {}
        for w, v in self.coeffs.items():
            target = ctx.multiply(GroupElement(ctx, w), k)
            if self.spec.contains(target):
                out[target.word] = out.get(target.word, ZERO) + v
        return SigmaVector(self.spec, out)


def module_inner_product(subgroup: Subgroup, x: SigmaVector, y: SigmaVector) -> HAlgebraElement:
    """Sesquilinear extension of <sigma_g, sigma_k> = rho(g k^-1) [g k^-1 in H]."""
    ctx = subgroup.ctx
    out: dict[tuple, Fraction] = {}
    for wg, vg in x.coeffs.items():
        g = GroupElement(ctx, wg)
        for wk, vk in y.coeffs.items():
            k_inv = ctx.invert(GroupElement(ctx, wk))
            d = ctx.multiply(g, k_inv)
            if subgroup.contains(d):
                out[d.word] = out.get(d.word, ZERO) + vg * vk
    return HAlgebraElement(subgroup, out)


# ---------------------------------------------------------------------------
# Projection identities on windows
# ---------------------------------------------------------------------------


def isolation_projection(w: Window, f1: Sequence[GroupElement], f2: Sequence[GroupElement]) -> TranslationOperator:
    """prod_{g in F1} (T_g* T_g) * prod_{g in F2} (1 - T_g* T_g), all diagonal.

    Built from domain predicates, so the result is exact on the whole window;
    agreement with the actual operator products is a separate test.
    """
    if not f1 or not f2:
        raise ValueError("both isolation families must be nonempty")
    acc = identity_operator(w)
    one = identity_operator(w)
    for g in f1:
        acc = compose(acc, domain_projection(w, g))
    for g in f2:
        acc = compose(acc, combine([1, -1], [one, domain_projection(w, g)]))
    return acc


def verify_ph_in_ideal(
    b_spec: SubsetSpec,
    x_spec: SubsetSpec,
    h_sub: Subgroup,
    g: GroupElement,
    radius: int,
) -> CheckReport:
    """Check p_H = p_H P^g on the ambient window for a crossing translate g.

    Precondition from the construction: g^-1 lies in the ambient set but not
    in the subset.
    """
    ctx = x_spec.ctx
    g_inv = ctx.invert(g)
    params = {
        "B": b_spec.name,
        "X": x_spec.name,
        "H": h_sub.name,
        "g": ctx.format(g),
        "R": radius,
    }
    if not (x_spec.contains(g_inv) and not b_spec.contains(g_inv)):
        raise ValueError("g^-1 must lie in the ambient set but outside the subset")
    w = make_window(x_spec, radius)
    t_g = generator_operator(w, g)
    p = TranslationOperator(
        w,
        {
            (i, i): Fraction(1)
            for i, x in enumerate(w.points)
            if not b_spec.contains(x)
        },
    )
    p_g = compose(adjoint(t_g), compose(p, t_g))
    p_h = coset_projection(w, h_sub, ctx.identity())
    match = guarded_equal(compose(p_h, p_g), p_h)
    return CheckReport(
        name="ph-in-ideal",
        params=params,
        verdict=VERIFIED if match.equal else FALSIFIED,
        witnesses=[] if match.equal else [match.mismatch],
        compared_count=match.rows_compared,
        details={"projection_size": len(p_h.entries)},
    )


def coset_decomposition_check(
    b_spec: SubsetSpec,
    x_spec: SubsetSpec,
    h_sub: Subgroup,
    g: GroupElement,
    radius: int,
    growth: int = 2,
) -> CheckReport:
    """Partition (B \\ Bg) n Xg into left H-cosets; stable counts are finite-rank evidence.

    The support is computed on windows of radius R and R + growth; the verdict
    is verified-at-scale exactly when the number of cosets agrees.
    """
    ctx = b_spec.ctx
    g_inv = ctx.invert(g)

    def support(r: int) -> list[GroupElement]:
        out = []
        for x in ctx.ball(r):
            if not b_spec.contains(x):
                continue
            shifted = ctx.multiply(x, g_inv)
            if b_spec.contains(shifted):
                continue
            if x_spec.contains(shifted):
                out.append(x)
        return out

    def coset_count(points: list[GroupElement]) -> tuple[int, list[GroupElement]]:
        reps: list[GroupElement] = []
        for x in points:
            if not any(h_sub.contains(ctx.multiply(x, ctx.invert(rep))) for rep in reps):
                reps.append(x)
        return len(reps), reps

    small = support(radius)
    large = support(radius + growth)
    n_small, reps_small = coset_count(small)
    n_large, _ = coset_count(large)
    stable = n_small == n_large
    return CheckReport(
        name="coset-decomposition",
        params={
            "B": b_spec.name,
            "X": x_spec.name,
            "H": h_sub.name,
            "g": ctx.format(g),
            "R": radius,
            "growth": growth,
        },
        verdict=VERIFIED if stable else INCONCLUSIVE,
        witnesses=[ctx.format(rep) for rep in reps_small],
        compared_count=len(small),
        details={
            "coset_count_at_R": n_small,
            "coset_count_at_R_plus": n_large,
            "support_size_at_R": len(small),
            "support_size_at_R_plus": len(large),
        },
    )
