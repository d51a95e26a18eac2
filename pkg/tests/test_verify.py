import itertools

import pytest

from shderived.algebra import (Deformation, commutator_loday, derivation_from_generators,
                               inner_derivation, matrix_algebra, self_pair, transport_to_pair,
                               triangular_algebra)
from shderived.coalgebra import Flavor
from shderived.derived import (ShStructure, derived_loday_brackets, derived_products,
                               structure_from_maps, unified_brackets)
from shderived.graded import Elem, MultiMap, basis_words
from shderived.verify import (PreconditionError, check_symmetric, hochschild_b, sh_relation,
                              symmetrized, verify_linfty_reduction, verify_operator_identity,
                              verify_regular_subrelation, verify_restrictions, verify_sh,
                              verify_subcomplex)

from helpers import (free2_q, free3, graded_basis, random_inner, random_map, rng_for,
                     scaled_deformation)
from oracles import sh_square_oracle


def w(spec, name):
    return Elem.word(spec.by_name[name])


def test_sh_relation_matches_square_oracle():
    spec, q = free3(4)
    S = derived_products(spec, scaled_deformation(q, [1, 2, -1]))
    for word in basis_words(spec.basis, 3, 4):
        pieces = sum((sh_relation(S, n, word) for n in range(1, len(word) + 1)), Elem.zero())
        assert pieces == sh_square_oracle(S.parts, word, "deconcatenation")


def test_verify_sh_passes_and_reports_cutoffs():
    spec, q = free3(4)
    rep = verify_sh(derived_products(spec, scaled_deformation(q, [1, 1, 2])), 4)
    assert rep.passed and rep.checks > 0
    assert rep.cutoffs == {"maxArity": 3, "maxWordLen": 4, "maxPiece": 4, "tOrder": 4,
                           "maxWeight": 4}


def test_order_one_violation_fails_at_piece_two():
    spec, q = free2_q(3)
    p = derivation_from_generators(spec, {"g2": w(spec, "g2·g2")}, 1, name="P")
    rep = verify_sh(derived_products(spec, Deformation([q, p])), 3)
    assert not rep.passed
    assert {x.label for x in rep.witnesses} == {"piece 2"}
    assert all(len(x.input) >= 2 for x in rep.witnesses)


def _gauged(max_weight=4):
    from shderived.gauge import GaugeGenerator, gauge_transform
    spec, q = free3(max_weight)
    g = lambda n: Elem.word(spec.by_name[n])
    # weight-preserving h keeps M_3 delta_1^2 below the truncation
    h = derivation_from_generators(spec, {"g1": g("g1"), "g2": g("g3")}, 0, name="h")
    return spec, gauge_transform(Deformation([q]), GaugeGenerator([h]), 2, spec)


def test_flipped_sign_of_one_part_fails():
    # pieces are [d1, d3] + d2 d2 = 0; with delta_1^2 != 0 negating partial_3 breaks piece 3
    spec, d = _gauged()
    S = derived_products(spec, d)
    assert verify_sh(S, 4).passed
    parts = dict(S.parts)
    parts[3] = parts[3].scaled(-1)
    rep = verify_sh(ShStructure(parts, S.flavor, S.max_arity, spec, S.deformation), 4)
    assert not rep.passed
    assert {x.label for x in rep.witnesses} == {"piece 3"}


def test_dropped_koszul_sign_is_caught():
    # partial_2 with the sign (-1)^{|a|} wrongly inserted is no longer square-zero
    spec, d = _gauged()
    good = derived_products(spec, d)
    wrong = MultiMap(2, 1, fn=lambda a, b: good.parts[2](a, b) * (-1) ** a.degree, name="m2?")
    parts = dict(good.parts)
    parts[2] = wrong
    rep = verify_sh(ShStructure(parts, good.flavor, good.max_arity, spec, d), 4)
    assert not rep.passed


def test_max_piece_clamps():
    spec, q = free3(4)
    S = derived_products(spec, scaled_deformation(q, [1, 1]))
    rep = verify_sh(S, 4, max_piece=2)
    assert rep.cutoffs["maxPiece"] == 2
    assert {f"piece {n}" for n in (3, 4)}.isdisjoint(x.label for x in rep.witnesses)
    with pytest.raises(ValueError):
        verify_sh(S, 0)


def test_loday_and_pair_structures_pass():
    base, q = free2_q(3)
    loday = commutator_loday(base)
    assert verify_sh(derived_loday_brackets(loday, scaled_deformation(q, [1, 2, 1])), 3).passed
    pair = self_pair(base)
    qp = transport_to_pair(pair, q)
    S = unified_brackets(pair, scaled_deformation(qp, [1, -1, 2]))
    assert verify_sh(S, 3).passed
    assert verify_restrictions(S, 3).passed


def test_restrictions_need_a_pair():
    spec, q = free3(3)
    with pytest.raises(PreconditionError):
        verify_restrictions(derived_products(spec, Deformation([q])), 3)


def test_regular_subrelation_fails_for_a_noncommutative_loday_algebra():
    # the order-preserving insertions alone do not vanish; the report shows the
    # full relation next to each witness
    base, q = free2_q(3)
    S = derived_loday_brackets(commutator_loday(base), scaled_deformation(q, [1, 1, 1]))
    assert verify_sh(S, 3).passed
    rep = verify_regular_subrelation(S, 3)
    assert rep.checks > 0
    assert all(x.label.startswith("full relation") for x in rep.witnesses)
    with pytest.raises(PreconditionError):
        verify_regular_subrelation(derived_products(base, Deformation([q])), 3)


def _symmetric_family(seed, degrees=(-1, 0, 1)):
    rng = rng_for(seed)
    basis = graded_basis(list(degrees))
    raw = {k: random_map(rng, basis, k, 1, density=0.4, name=f"f{k}") for k in (1, 2, 3)}
    S = symmetrized(structure_from_maps(raw, Flavor.DUAL_LODAY))
    return basis, S, raw


def test_linfty_reduction_on_symmetric_family():
    basis, S, _ = _symmetric_family(1)
    rep = verify_linfty_reduction(S, 4, basis=basis)
    assert rep.passed and rep.checks > 0


def test_linfty_reduction_rejects_nonsymmetric_input():
    basis, _, raw = _symmetric_family(2)
    S = structure_from_maps(raw, Flavor.DUAL_LODAY)
    with pytest.raises(PreconditionError, match="part 2"):
        verify_linfty_reduction(S, 3, basis=basis)
    with pytest.raises(PreconditionError):
        check_symmetric(S, basis)


def test_hochschild_b_formula():
    tri = triangular_algebra()
    e = inner_derivation(tri, w(tri, "e"))
    f = MultiMap(1, 0, fn=lambda a: Elem.word(a), name="id")
    bf = hochschild_b(tri, e, f)
    assert bf.arity == 2


def test_subcomplex_on_matrices():
    rng = rng_for(9)
    mat = matrix_algebra([0, 1])
    delta1 = inner_derivation(mat, w(mat, "E12"))
    for i in (1, 2, 3):
        d = random_inner(rng, mat, rng.choice([-1, 0, 1]))
        rep = verify_subcomplex(mat, delta1, d, i)
        assert rep.passed and not rep.notes
        # both b(M_i D) = M_{i+1}[delta_1, D] and b^2 = 0 were evaluated
        assert rep.checks == 4 ** (i + 1) + 4 ** (i + 2)


def test_subcomplex_skips_b_squared_without_square_zero():
    mat = matrix_algebra([0, 1, 2])
    delta1 = inner_derivation(mat, w(mat, "E12") + w(mat, "E23"))
    rep = verify_subcomplex(mat, delta1, inner_derivation(mat, w(mat, "E11")), 1)
    assert rep.passed
    assert any("not square-zero" in n for n in rep.notes)


def test_operator_identity_associative_and_pair():
    tri = triangular_algebra()
    d = inner_derivation(tri, w(tri, "e"))
    h = inner_derivation(tri, w(tri, "h"))
    for k, l in itertools.product((1, 2), repeat=2):
        assert verify_operator_identity(tri, d, h, k, l).passed
    pair = self_pair(tri)
    dp, hp = transport_to_pair(pair, d), transport_to_pair(pair, h)
    rep = verify_operator_identity(pair, dp, hp, 2, 2, max_x=2, max_a=2)
    assert rep.passed
    words = [x for x in basis_words(pair.basis, 3, mixed=True, min_len=3)
             if 1 <= sum(o.component == "A" for o in x) <= 2]
    # the bracket identity plus the two adjoint identities on every word with |x|, |a| <= 2
    assert rep.checks == 3 * len(words)


def test_operator_identity_detects_a_wrong_bracket():
    tri = triangular_algebra()
    pair = self_pair(tri)
    d = transport_to_pair(pair, inner_derivation(tri, w(tri, "e")))
    h = transport_to_pair(pair, inner_derivation(tri, w(tri, "h")))
    # [N_2 D, N_2 H] checked against N_3 of the wrong derivation
    wrong = d.scaled(1)
    wrong.bracket = lambda other: d.bracket(h).scaled(-1)
    rep = verify_operator_identity(pair, wrong, h, 2, 2)
    assert not rep.passed
    assert {x.label for x in rep.witnesses} == {"[N2D,N2D']"}


def test_operator_identity_rejects_loday_kind():
    base, q = free2_q(3)
    with pytest.raises(PreconditionError):
        verify_operator_identity(commutator_loday(base), q, q, 1, 1)
