"""Acceptance suite: every criterion at exact-zero tolerance.

Each test carries a ``criterion`` marker; the conftest prints one PASS/FAIL
line per criterion at the end of the run.
"""
import itertools
import re
import time

import pytest

from shderived.algebra import (ASSOCIATIVE, LODAY_KIND, PAIR, Deformation, check_axioms,
                               check_deformation, commutator_loday, derived_loday_algebra,
                               derived_pair, derived_product_algebra, inner_derivation,
                               matrix_algebra, self_pair, transport_to_pair, triangular_algebra)
from shderived.cli import Options, verify_text
from shderived.coalgebra import (Flavor, commutator, commutator_apply, gerstenhaber, lift,
                                 regularize, verify_coderivation_rule)
from shderived.corpus import SAMPLES, sample_path
from shderived.derived import (derived_products, m_operator, structure_from_maps,
                               unified_brackets)
from shderived.gauge import GaugeGenerator, build_Mh, exp_coderivation, gauge_transform, \
    verify_gauge
from shderived.graded import Elem, basis_words
from shderived.specfile import read_spec
from shderived.verify import (symmetrized, verify_linfty_reduction, verify_operator_identity,
                              verify_restrictions, verify_sh, verify_subcomplex)

from helpers import (coeff, free2_q, free3, graded_basis, pair_basis, random_free_derivation,
                     random_inner, random_map, rng_for)
from oracles import gerstenhaber_oracle

criterion = pytest.mark.criterion


def w(spec, name):
    return Elem.word(spec.by_name[name])


# 1 ------------------------------------------------------------------------


@criterion("1 sh associative relation, 3-generator free algebra, weight 5")
def test_c1_inner_deformation():
    spec, _ = free3(5)
    # odd weight-3 xi_i: every product of two of them has weight 6 and vanishes
    xis = [w(spec, "g1·g1·g2"), w(spec, "g3·g1·g1") * 2 - w(spec, "g1·g3·g1"),
           w(spec, "g2·g1·g1")]
    d = Deformation([inner_derivation(spec, xi) for xi in xis])
    assert check_deformation(spec, d).passed
    start = time.perf_counter()
    rep = verify_sh(derived_products(spec, d), 5)
    assert rep.passed, rep.to_text()
    assert d.T == 2 and rep.cutoffs["maxPiece"] == 5 and rep.cutoffs["maxArity"] == 3
    assert time.perf_counter() - start < 60


@criterion("1 sh associative relation, 3-generator free algebra, weight 5")
def test_c1_generator_deformation():
    # same algebra with d = Q - 2tQ + t^2 Q/2, where m_2 and m_3 are nonzero
    spec, q = free3(5)
    d = Deformation([q, q.scaled(-2), q.scaled(coeff(rng_for(1)))])
    S = derived_products(spec, d)
    assert S.parts[3](*(spec.by_name[n] for n in ("g1", "g1", "g1")))
    start = time.perf_counter()
    rep = verify_sh(S, 5)
    assert rep.passed, rep.to_text()
    assert time.perf_counter() - start < 60


# 2 ------------------------------------------------------------------------


@criterion("2 [M_i D, M_j D'] = M_{i+j-1}[D, D']")
def test_c2_operator_bracket_compatibility():
    rng = rng_for(2)
    tri = triangular_algebra(1)
    start = time.perf_counter()
    for _ in range(20):
        d1 = random_inner(rng, tri, rng.choice([0, 1]))
        d2 = random_inner(rng, tri, rng.choice([0, 1]))
        for i, j in itertools.product(range(1, 5), repeat=2):
            n = i + j - 1
            lhs = commutator(lift(m_operator(tri, d1, i), Flavor.DECONCATENATION),
                             lift(m_operator(tri, d2, j), Flavor.DECONCATENATION)).parts[n]
            rhs = m_operator(tri, d1.bracket(d2), n)
            for word in basis_words(tri.basis, n, min_len=n):
                assert lhs(*word) == rhs(*word), (i, j, word)
    assert time.perf_counter() - start < 30


# 3 ------------------------------------------------------------------------


@criterion("3 Gerstenhaber compatibility")
@pytest.mark.parametrize("flavor", [Flavor.DECONCATENATION, Flavor.DUAL_LODAY])
def test_c3_gerstenhaber(flavor):
    rng = rng_for(3)
    basis = graded_basis([0, 1])
    words = basis_words(basis, 6)
    for i, j in itertools.product((1, 2, 3), repeat=2):
        f = random_map(rng, basis, i, rng.choice([0, 1]), density=0.5, name="f")
        g = random_map(rng, basis, j, rng.choice([0, 1]), density=0.5, name="g")
        br = gerstenhaber(f, g, flavor)
        br_lift = lift(br, flavor)
        fc, gc = lift(f, flavor), lift(g, flavor)
        for word in words:
            if len(word) == i + j - 1:
                assert br(*word) == gerstenhaber_oracle(f, g, word, flavor.value)
            # {f, g}^c = [f^c, g^c] on the whole coalgebra
            assert br_lift(word) == commutator_apply(fc, gc, word), (i, j, word)


# 4 ------------------------------------------------------------------------


@criterion("4 coderivation rule in every flavor")
@pytest.mark.parametrize("flavor", [Flavor.DECONCATENATION, Flavor.DUAL_LODAY])
def test_c4_plain_flavors(flavor):
    rng = rng_for(4)
    basis = graded_basis([0, 1, -1])
    words = basis_words(basis, 5)
    for arity in (1, 2, 3):
        for degree in (0, 1):
            f = random_map(rng, basis, arity, degree, density=0.4)
            rep = verify_coderivation_rule(lift(f, flavor), 5, words)
            assert rep.passed and rep.checks == sum(len(x) >= 2 for x in words)


@criterion("4 coderivation rule in every flavor")
@pytest.mark.parametrize("flavor", [Flavor.MIXED, Flavor.MIXED_REGULARIZED])
def test_c4_mixed_flavors(flavor):
    rng = rng_for(5)
    basis = pair_basis([0, 1], [0, 1])
    words = basis_words(basis, 5, mixed=True)
    for arity in (1, 2, 3):
        for degree in (0, 1):
            f = random_map(rng, basis, arity, degree, density=0.4, signature="pair")
            d = lift(f, Flavor.MIXED)
            if flavor is Flavor.MIXED_REGULARIZED:
                d = regularize(d)
            rep = verify_coderivation_rule(d, 5, words)
            assert rep.passed and rep.checks > 0


# 5 ------------------------------------------------------------------------


@criterion("5 sh Loday pair from a truncated free algebra")
def test_c5_loday_pair():
    base, q = free2_q(4)
    pair = self_pair(base)
    qp = transport_to_pair(pair, q)
    d = Deformation([qp, qp.scaled(3), qp.scaled(-1), qp.scaled(2)])
    S = unified_brackets(pair, d)
    assert S.max_arity == 4
    x1, a1 = pair.by_name["xg1"], pair.by_name["ag1"]
    assert S.parts[3](x1, x1, a1) and S.parts[4](x1, x1, x1, x1)
    rep = verify_sh(S, 4, max_piece=4)
    assert rep.passed and rep.cutoffs["maxPiece"] == 4
    restrictions = verify_restrictions(S, 4)
    assert restrictions.passed
    # L and A are both copies of the base algebra
    assert restrictions.checks == 2 * len(basis_words(base.basis, 4, max_weight=4))


# 6 ------------------------------------------------------------------------


def _pair_derivations():
    """Pairs (self pair, derivations of degrees 0, 1, 2)."""
    t1, t2 = triangular_algebra(1), triangular_algebra(2)
    for base in (t1, t2):
        pair = self_pair(base)
        ds = [transport_to_pair(pair, inner_derivation(base, w(base, n))) for n in ("h", "e")]
        yield pair, ds


@criterion("6 operator identities on Loday pairs")
def test_c6_operator_identities():
    degrees = set()
    for pair, ds in _pair_derivations():
        for D, E in itertools.product(ds, repeat=2):
            degrees.update((D.degree, E.degree))
            for k, l in itertools.product((1, 2, 3), repeat=2):
                rep = verify_operator_identity(pair, D, E, k, l, max_x=3, max_a=2)
                assert rep.passed, (D, E, k, l, rep.to_text())
    assert degrees == {0, 1, 2}


# 7 ------------------------------------------------------------------------


@criterion("7 b(M_i D) = M_{i+1}[delta_1, D]")
def test_c7_subcomplex():
    rng = rng_for(7)
    mat = matrix_algebra([0, 1])
    delta1 = inner_derivation(mat, w(mat, "E12"))
    for _ in range(10):
        D = random_inner(rng, mat, rng.choice([-1, 0, 1]))
        for i in range(1, 5):
            rep = verify_subcomplex(mat, delta1, D, i)
            # b^2 = 0 was checked too: no "not square-zero" note
            assert rep.passed and not rep.notes
            assert rep.checks == 4 ** (i + 1) + 4 ** (i + 2)


# 8 ------------------------------------------------------------------------


@criterion("8 gauge equivalence of the derived structures")
def test_c8_gauge():
    rng = rng_for(8)
    spec, q = free2_q(3)
    ad = inner_derivation(spec, w(spec, "g1·g2") + w(spec, "g2·g1"))
    start = time.perf_counter()
    for _ in range(5):
        a = [coeff(rng) for _ in range(3)]
        b = [coeff(rng) for _ in range(3)]
        d = Deformation([q.scaled(a[n]) + ad.scaled(b[n]) for n in range(3)])
        assert check_deformation(spec, d).passed
        gen = GaugeGenerator([random_free_derivation(rng, spec, 0, 0.5) for _ in range(2)])
        d2 = gauge_transform(d, gen, 3, spec)
        Mh = build_Mh(spec, gen)
        E = exp_coderivation(Mh, 4)
        rep = verify_gauge(derived_products(spec, d), derived_products(spec, d2), E, 4)
        assert rep.passed and not rep.notes, rep.to_text()
        inverse = exp_coderivation(Mh, 4, scale=-1).compose(E)
        for word in basis_words(spec.basis, 4, max_weight=3):
            assert inverse(word) == Elem.word(*word)
    assert time.perf_counter() - start < 120


# 9 ------------------------------------------------------------------------


@criterion("9 L-infinity reduction of the sh Loday relation")
@pytest.mark.parametrize("arities", [(2, 3), (1, 2, 3)])
def test_c9_linfty(arities):
    for seed in range(3):
        rng = rng_for(90 + seed)
        basis = graded_basis([-1, 0, 1])
        raw = {k: random_map(rng, basis, k, 1, density=0.4, name=f"f{k}") for k in arities}
        S = symmetrized(structure_from_maps(raw, Flavor.DUAL_LODAY))
        rep = verify_linfty_reduction(S, 4, basis=basis)
        assert rep.passed and rep.checks > 0


# 10 -----------------------------------------------------------------------


@criterion("10 binary derived structures on the bundled corpus")
@pytest.mark.parametrize("name", sorted(SAMPLES))
def test_c10_corpus(name):
    sf = read_spec(sample_path(name))
    spec, delta = sf.spec, sf.deformation.delta(0)
    if sf.kind == ASSOCIATIVE:
        assert check_axioms(derived_product_algebra(spec, delta)).passed
        assert check_axioms(derived_loday_algebra(commutator_loday(spec), delta)).passed
        pair = self_pair(spec)
        assert check_axioms(derived_pair(pair, transport_to_pair(pair, delta))).passed
    elif sf.kind == LODAY_KIND:
        assert check_axioms(derived_loday_algebra(spec, delta)).passed
    else:
        assert sf.kind == PAIR
        assert check_axioms(derived_pair(spec, delta)).passed


# 11 -----------------------------------------------------------------------


_TERM = re.compile(r"(?<=[=+] )(-?)(\d+(?:/\d+)?) ")


def _sign_mutations(text):
    """Every copy of ``text`` with exactly one coefficient sign flipped."""
    lines = text.splitlines(keepends=True)
    for k, line in enumerate(lines):
        if line.startswith("#") or "=" not in line or line.startswith(("kind", "max-weight")):
            continue
        for m in _TERM.finditer(line):
            flipped = ("" if m.group(1) else "-") + m.group(2) + " "
            new = line[:m.start()] + flipped + line[m.end():]
            yield k + 1, "".join(lines[:k] + [new] + lines[k + 1:])


@criterion("11 single-sign mutations of the smallest sample are caught")
def test_c11_mutations():
    path = sample_path("tiny.alg")
    text = path.read_text(encoding="utf-8")
    status, _ = verify_text(text, str(path), ["all"], Options())
    assert status == 0
    mutants = list(_sign_mutations(text))
    assert len(mutants) == 18
    for line_no, mutant in mutants:
        status, doc = verify_text(mutant, str(path), ["all"], Options())
        failed = [r for r in doc["suites"] if r["status"] == "fail"]
        assert status == 1 and failed, f"sign flip on line {line_no} went unnoticed"
        assert all(r["witnesses"] for r in failed)
