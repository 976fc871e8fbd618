from fractions import Fraction

import pytest

from conftest import rng

from translation_lab import (
    Subgroup,
    amalgam_subgroup,
    coordinate_halfspace,
    coset_projection,
    cyclic_group,
    guarded_equal,
    make_tree_halfspace,
    make_window,
    natural_numbers,
    positive_cone,
    whole_group,
)
from translation_lab.group_algebra import (
    HAlgebraElement,
    SigmaVector,
    coset_decomposition_check,
    isolation_projection,
    module_inner_product,
    verify_ph_in_ideal,
)
from translation_lab.reports import INCONCLUSIVE, VERIFIED


def test_inner_product_trivial_subgroup(z):
    nat = natural_numbers(z)
    triv = Subgroup.trivial(z)
    s2 = SigmaVector.basis(nat, z.integer(2))
    s5 = SigmaVector.basis(nat, z.integer(5))
    assert module_inner_product(triv, s2, s5).is_zero()
    diag = module_inner_product(triv, SigmaVector.basis(nat, z.integer(3)), SigmaVector.basis(nat, z.integer(3)))
    assert diag == HAlgebraElement.unit(triv)


def test_inner_product_subgroup_shift(amalgam):
    b = make_tree_halfspace(amalgam, "G")
    h = amalgam_subgroup(amalgam)
    h1 = amalgam.h_element(1)
    g1 = amalgam.from_letters([(0, amalgam.factors[0].element(1))])
    hb = amalgam.multiply(h1, g1)
    value = module_inner_product(h, SigmaVector.basis(b, hb), SigmaVector.basis(b, g1))
    assert value == HAlgebraElement.of(h, h1)


def test_sigma_symbols_must_lie_inside(z):
    nat = natural_numbers(z)
    with pytest.raises(ValueError):
        SigmaVector.basis(nat, z.integer(-1))


def test_right_action(amalgam):
    b = make_tree_halfspace(amalgam, "G")
    s1 = amalgam.from_letters([(1, amalgam.factors[1].element(1))])
    vec = SigmaVector.basis(b, amalgam.identity())
    moved = vec.act_by(s1)
    assert not moved.coeffs  # the move leaves the subset: the symbol dies
    g1 = amalgam.from_letters([(0, amalgam.factors[0].element(1))])
    assert list(vec.act_by(g1).coeffs) == [g1.word]


def test_adjointability_of_translation_action(amalgam):
    # <x . k, y> equals <x, y . k^-1> whenever the symbols live in the subset
    b = make_tree_halfspace(amalgam, "G")
    h = amalgam_subgroup(amalgam)
    r = rng(41)
    points = b.elements_in_ball(3)
    movers = amalgam.ball(2)
    for _ in range(200):
        x = SigmaVector.basis(b, points[r.randrange(len(points))])
        y = SigmaVector.basis(b, points[r.randrange(len(points))])
        k = movers[r.randrange(len(movers))]
        lhs = module_inner_product(h, x.act_by(k), y)
        rhs = module_inner_product(h, x, y.act_by(amalgam.invert(k)))
        assert lhs == rhs


def test_star_and_product():
    c6 = cyclic_group(6)
    h = Subgroup.from_elements(c6, [c6.element(0), c6.element(2), c6.element(4)], "H3")
    a = HAlgebraElement(h, {c6.element(2).word: Fraction(1), c6.element(4).word: Fraction(2)})
    twice = a * a
    assert twice.coeffs[c6.element(4).word] == Fraction(1)  # 2+2
    assert twice.coeffs[c6.element(2).word] == Fraction(4)  # 4+4 both orders
    assert twice.coeffs[c6.element(0).word] == Fraction(4)  # 2+4 and 4+2
    assert a.star().coeffs == {c6.element(4).word: Fraction(1), c6.element(2).word: Fraction(2)}


def test_inner_products_positive_semidefinite():
    c6 = cyclic_group(6)
    h = Subgroup.from_elements(c6, [c6.element(0), c6.element(2), c6.element(4)], "H3")
    everything = whole_group(c6)
    r = rng(43)
    points = everything.elements_in_ball(2)
    for _ in range(100):
        coeffs = {}
        for _ in range(r.randrange(1, 4)):
            p = points[r.randrange(len(points))]
            coeffs[p.word] = coeffs.get(p.word, 0) + Fraction(r.randrange(-3, 4))
        vec = SigmaVector(everything, coeffs)
        gram = module_inner_product(h, vec, vec)
        assert gram.is_positive_semidefinite()
    indefinite = HAlgebraElement(h, {c6.element(2).word: Fraction(1)})
    assert not indefinite.is_positive_semidefinite()  # not even self-adjoint


def test_isolation_projection_naturals(z):
    nat = natural_numbers(z)
    w = make_window(nat, 8)
    proj = isolation_projection(w, [z.integer(0)], [z.integer(1)])
    assert sorted(proj.entries) == [(0, 0)]
    target = coset_projection(w, [z.integer(0)], z.integer(0))
    assert guarded_equal(proj, target).equal
    assert guarded_equal(proj, proj).equal and not proj.clipped_rows


def test_isolation_projection_halfplane(z2):
    half = coordinate_halfspace(z2, 0, 0)
    w = make_window(half, 6)
    proj = isolation_projection(w, [z2.vector(0, 0)], [z2.vector(1, 0)])
    axis = half.left_stabiliser
    target = coset_projection(w, axis, z2.identity())
    assert guarded_equal(proj, target).equal
    assert all(r == c for r, c in proj.entries)


def test_isolation_projection_amalgam(amalgam):
    b = make_tree_halfspace(amalgam, "G")
    h = amalgam_subgroup(amalgam)
    w = make_window(b, 4)
    s1 = amalgam.from_letters([(1, amalgam.factors[1].element(1))])
    # distinguishing family: the identity inside, a strict second-factor point outside
    f1 = [amalgam.identity()]
    f2 = [amalgam.invert(s1)]
    proj = isolation_projection(w, f1, f2)
    from translation_lab.operators import matrix_rank

    assert matrix_rank(proj) == 2
    assert guarded_equal(proj, coset_projection(w, h, amalgam.identity())).equal


def test_isolation_projection_is_projection(z):
    nat = natural_numbers(z)
    w = make_window(nat, 8)
    proj = isolation_projection(w, [z.integer(0)], [z.integer(1)])
    from translation_lab.operators import adjoint, compose

    assert compose(proj, proj).entries == proj.entries
    assert adjoint(proj).entries == proj.entries


def test_ph_in_ideal_naturals(z):
    nat = natural_numbers(z)
    report = verify_ph_in_ideal(nat, whole_group(z), Subgroup.trivial(z), z.integer(1), 12)
    assert report.verdict == VERIFIED
    assert report.compared_count >= 20


def test_ph_in_ideal_halfplane(z2):
    half = coordinate_halfspace(z2, 0, 0)
    report = verify_ph_in_ideal(half, whole_group(z2), half.left_stabiliser, z2.vector(1, 0), 8)
    assert report.verdict == VERIFIED


def test_ph_in_ideal_amalgam(amalgam):
    b = make_tree_halfspace(amalgam, "G")
    h = amalgam_subgroup(amalgam)
    s1 = amalgam.from_letters([(1, amalgam.factors[1].element(1))])
    report = verify_ph_in_ideal(b, whole_group(amalgam), h, amalgam.invert(s1), 5)
    assert report.verdict == VERIFIED


def test_ph_in_ideal_rejects_wrong_direction(z):
    nat = natural_numbers(z)
    with pytest.raises(ValueError):
        verify_ph_in_ideal(nat, whole_group(z), Subgroup.trivial(z), z.integer(-1), 10)


def test_coset_decomposition_examples(z, z2, f2):
    nat = natural_numbers(z)
    report = coset_decomposition_check(nat, whole_group(z), Subgroup.trivial(z), z.integer(2), 8)
    assert report.verdict == VERIFIED
    assert report.details["coset_count_at_R"] == 2

    half = coordinate_halfspace(z2, 0, 0)
    report = coset_decomposition_check(half, whole_group(z2), half.left_stabiliser, z2.vector(1, 0), 6)
    assert report.verdict == VERIFIED
    assert report.details["coset_count_at_R"] == 1

    cone = positive_cone(f2)
    report = coset_decomposition_check(
        cone, whole_group(f2), Subgroup.trivial(f2), f2.generator(1), 5
    )
    assert report.verdict == INCONCLUSIVE
    assert report.details["coset_count_at_R_plus"] > report.details["coset_count_at_R"]
