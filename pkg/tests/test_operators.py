import itertools
from fractions import Fraction

import pytest

from conftest import generator_sequences, rng

from translation_lab import (
    adjoint,
    amalgam_subgroup,
    combine,
    compose,
    compose_chain,
    coordinate_halfspace,
    coset_projection,
    domain_projection,
    generator_operator,
    guarded_equal,
    identity_operator,
    make_tree_halfspace,
    make_window,
    matrix_rank,
    natural_numbers,
    positive_cone,
    subtract,
    track_of_sequence,
    track_operator,
    words_not_starting_with,
    zero_operator,
)
from translation_lab.operators import is_partial_permutation, rank_of_vectors
from translation_lab.tracks import compose_tracks


@pytest.fixture(scope="module")
def nat_window(z):
    return make_window(natural_numbers(z), 5)


def test_generator_rows_naturals(z, nat_window):
    fwd = generator_operator(nat_window, z.integer(1))
    # x -> x - 1 for x = 1..5; the origin row is empty; nothing clips
    assert sorted(fwd.entries) == [(1, 0), (2, 1), (3, 2), (4, 3), (5, 4)]
    assert not fwd.clipped_rows
    bwd = generator_operator(nat_window, z.integer(-1))
    assert sorted(bwd.entries) == [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]
    assert bwd.clipped_rows == {5}


def test_generator_origin_row_empty_for_marked_letter(f2):
    b = words_not_starting_with(f2, f2.invert(f2.generator(1)))
    w = make_window(b, 3)
    op = generator_operator(w, f2.generator(1))
    origin = w.position(f2.identity())
    assert not any(r == origin for r, _ in op.entries)


def test_track_operator_examples(z, nat_window):
    diag = track_operator(nat_window, track_of_sequence(z, [z.integer(-1), z.integer(1)]))
    assert sorted(diag.entries) == [(i, i) for i in range(1, 6)]
    # membership at the visited point 6 comes from the global predicate, so
    # the row at 5 is exact rather than clipped
    full = track_operator(nat_window, track_of_sequence(z, [z.integer(1), z.integer(-1)]))
    assert sorted(full.entries) == [(i, i) for i in range(6)]
    assert not full.clipped_rows
    ident = track_operator(nat_window, track_of_sequence(z, []))
    assert guarded_equal(ident, identity_operator(nat_window)).equal
    assert not ident.clipped_rows


def test_compose_matches_paper_order(z, nat_window):
    fwd = generator_operator(nat_window, z.integer(1))
    bwd = generator_operator(nat_window, z.integer(-1))
    assert guarded_equal(compose(fwd, bwd), identity_operator(nat_window)).equal
    result = guarded_equal(compose(bwd, fwd), identity_operator(nat_window))
    assert not result.equal
    assert result.mismatch["row"] == "0"


def test_zero_annihilates(z, nat_window):
    fwd = generator_operator(nat_window, z.integer(1))
    assert not compose(fwd, zero_operator(nat_window)).entries
    assert not compose(zero_operator(nat_window), fwd).entries


@pytest.mark.parametrize("ctx_name,subset_builder", [
    ("z", natural_numbers),
    ("z2", lambda c: coordinate_halfspace(c, 0, 0)),
    ("f2", positive_cone),
])
def test_track_operator_equals_generator_product(ctx_name, subset_builder, request):
    # sequences of length <= 3 over the whole unit ball (identity included),
    # window radius 6
    ctx = request.getfixturevalue(ctx_name)
    w = make_window(subset_builder(ctx), 6)
    alphabet = ctx.ball(1)
    for n in range(4):
        for seq in itertools.product(alphabet, repeat=n):
            track = track_of_sequence(ctx, list(seq))
            via_track = track_operator(w, track)
            ops = [generator_operator(w, g) for g in seq]
            via_product = compose_chain(ops) if ops else identity_operator(w)
            assert guarded_equal(via_track, via_product).equal


def test_composition_is_track_composition(z):
    w = make_window(natural_numbers(z), 6)
    gens = z.generator_elements()
    for seq in generator_sequences(z, 3):
        for cut in range(len(seq) + 1):
            t1 = track_of_sequence(z, seq[:cut])
            t2 = track_of_sequence(z, seq[cut:])
            lhs = track_operator(w, compose_tracks(z, t1, t2))
            rhs = compose(track_operator(w, t1), track_operator(w, t2))
            assert guarded_equal(lhs, rhs).equal


def test_partial_permutation_closure(f2):
    cone = positive_cone(f2)
    w = make_window(cone, 4)
    r = rng(37)
    gens = f2.generator_elements()
    for _ in range(100):
        ops = []
        for _ in range(r.randrange(1, 4)):
            op = generator_operator(w, gens[r.randrange(4)])
            ops.append(adjoint(op) if r.random() < 0.5 else op)
        assert is_partial_permutation(compose_chain(ops))


def test_adjoint_laws(z, nat_window):
    fwd = generator_operator(nat_window, z.integer(1))
    bwd = generator_operator(nat_window, z.integer(-1))
    assert guarded_equal(adjoint(fwd), bwd).equal
    assert adjoint(adjoint(fwd)).entries == fwd.entries
    proj = coset_projection(nat_window, [z.integer(0)], z.integer(0))
    assert adjoint(proj).entries == proj.entries


def test_partial_isometry_law_exactly(z, f2, nat_window):
    cone_w = make_window(positive_cone(f2), 4)
    cases = [(nat_window, z.integer(1)), (nat_window, z.integer(-1))]
    cases += [(cone_w, g) for g in f2.generator_elements()]
    for w, g in cases:
        t = generator_operator(w, g)
        t_star = adjoint(t)
        triple = compose_chain([t_star, t, t_star])
        assert triple.entries == t_star.entries


def test_linear_combination(z, nat_window):
    fwd = generator_operator(nat_window, z.integer(1))
    assert not combine([1, -1], [fwd, fwd]).entries
    defect = subtract(identity_operator(nat_window), compose(adjoint(fwd), fwd))
    assert all(r == c for r, c in defect.entries)
    assert all(v == Fraction(1) for v in defect.entries.values())
    p = coset_projection(nat_window, [z.integer(0)], z.integer(0))
    q = subtract(identity_operator(nat_window), p)
    assert guarded_equal(combine([1, 1], [p, q]), identity_operator(nat_window)).equal


def test_guarded_equal_certificate(z, nat_window):
    fwd = generator_operator(nat_window, z.integer(1))
    result = guarded_equal(fwd, fwd)
    assert result.equal and result.rows_compared == 6
    mismatch = guarded_equal(fwd, identity_operator(nat_window))
    assert not mismatch.equal and mismatch.mismatch is not None


def test_coset_projection_examples(z, amalgam, nat_window):
    e00 = coset_projection(nat_window, [z.integer(0)], z.integer(0))
    assert sorted(e00.entries) == [(0, 0)]
    assert matrix_rank(e00) == 1

    b = make_tree_halfspace(amalgam, "G")
    w = make_window(b, 2)
    h = amalgam_subgroup(amalgam)
    p_h = coset_projection(w, h, amalgam.identity())
    assert matrix_rank(p_h) == 2
    assert guarded_equal(compose(p_h, p_h), p_h).equal


def test_matrix_rank_basics(z, nat_window):
    assert matrix_rank(zero_operator(nat_window)) == 0
    assert matrix_rank(identity_operator(nat_window)) == len(nat_window)
    assert rank_of_vectors([{1: Fraction(1)}, {1: Fraction(2)}]) == 1
    assert rank_of_vectors([{1: Fraction(1), 2: Fraction(1)}, {2: Fraction(1)}]) == 2


def test_domain_projection_agrees_with_star_product(z, f2, nat_window):
    for w, g in [
        (nat_window, z.integer(1)),
        (nat_window, z.integer(-2)),
        (make_window(positive_cone(f2), 4), f2.generator(1)),
    ]:
        built = domain_projection(w, g)
        t = generator_operator(w, g)
        assert guarded_equal(built, compose(adjoint(t), t)).equal
        assert not built.clipped_rows


def test_clipping_monotone_under_window_growth(z, f2):
    cases = [
        (natural_numbers(z), [z.integer(1), z.integer(-1), z.integer(3)]),
        (positive_cone(f2), list(f2.generator_elements())),
    ]
    for spec, gens in cases:
        small = make_window(spec, 5)
        large = make_window(spec, 7)
        for g in gens:
            op_small = generator_operator(small, g)
            op_large = generator_operator(large, g)
            for i, x in enumerate(small.points):
                if i in op_small.clipped_rows:
                    continue
                row_small = {
                    large.spec.ctx.format(small.points[c]): v
                    for (r, c), v in op_small.entries.items()
                    if r == i
                }
                j = large.position(x)
                row_large = {
                    large.spec.ctx.format(large.points[c]): v
                    for (r, c), v in op_large.entries.items()
                    if r == j
                }
                assert row_small == row_large


def test_window_mismatch_rejected(z):
    w1 = make_window(natural_numbers(z), 4)
    w2 = make_window(natural_numbers(z), 5)
    with pytest.raises(Exception):
        compose(generator_operator(w1, z.integer(1)), generator_operator(w2, z.integer(1)))
