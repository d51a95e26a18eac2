"""Random instances shared by the test modules."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from shderived.algebra import (Deformation, build_truncated_free, derivation_from_generators,
                               inner_derivation, matrix_algebra, self_pair, transport_to_pair,
                               triangular_algebra)
from shderived.graded import ASSOC, LODAY, BasisSymbol, Elem, MultiMap, is_mixed_ordered

COEFFS = [Fraction(c) for c in (-3, -2, -1, 1, 2, 3)] + [Fraction(1, 2), Fraction(-2, 3)]


def coeff(rng):
    return rng.choice(COEFFS)


def random_vector(rng, candidates, degree, density=0.6):
    """A random combination of the candidates of one degree (possibly zero)."""
    out = Elem.zero()
    for b in candidates:
        if b.degree == degree and rng.random() < density:
            out = out + Elem.word(b, coeff=coeff(rng))
    return out


def random_map(rng, basis, arity, degree, density=0.5, signature=None, name="f"):
    """A table map on all basis tuples; pair maps respect L-before-A and send
    inputs containing A-letters into A."""
    table = {}
    for w in itertools.product(basis, repeat=arity):
        if signature == "pair" and not is_mixed_ordered(w):
            continue
        target = basis
        if signature == "pair":
            comp = ASSOC if any(x.component == ASSOC for x in w) else LODAY
            target = [b for b in basis if b.component == comp]
        deg = sum(x.degree for x in w) + degree
        v = random_vector(rng, target, deg, density)
        if v:
            table[w] = v
    return MultiMap.from_table(arity, degree, table, name=name, signature=signature)


def graded_basis(degrees, component=None, prefix="v"):
    comps = component if isinstance(component, (list, tuple)) else [component] * len(degrees)
    return [BasisSymbol(f"{prefix}{k + 1}", d, c or "plain")
            for k, (d, c) in enumerate(zip(degrees, comps))]


def pair_basis(l_degrees, a_degrees):
    return ([BasisSymbol(f"x{k + 1}", d, LODAY) for k, d in enumerate(l_degrees)]
            + [BasisSymbol(f"a{k + 1}", d, ASSOC) for k, d in enumerate(a_degrees)])


# ---------------------------------------------------------------------------
# algebras with square-zero deformations


def free3(max_weight=5):
    """Free on g1 (even), g2, g3 (odd) with Q(g1) = g2, Q(g3) = g2 g2."""
    spec = build_truncated_free([("g1", 0), ("g2", 1), ("g3", 1)], max_weight)
    w = lambda n: Elem.word(spec.by_name[n])
    q = derivation_from_generators(spec, {"g1": w("g2"), "g3": w("g2·g2")}, 1, name="Q")
    return spec, q


def free2_q(max_weight=3):
    spec = build_truncated_free([("g1", 0), ("g2", 1)], max_weight)
    q = derivation_from_generators(spec, {"g1": Elem.word(spec.by_name["g2"])}, 1, name="Q")
    return spec, q


def scaled_deformation(q, coeffs):
    """sum_i t^i c_i Q, square-zero whenever Q is."""
    return Deformation([q.scaled(c) for c in coeffs])


def random_free_derivation(rng, spec, degree, density=0.5, name="D"):
    images = {}
    for g in spec.generators:
        images[g] = random_vector(rng, spec.basis, g.degree + degree, density)
    return derivation_from_generators(spec, images, degree, name=name)


def random_inner(rng, spec, degree, name="D"):
    xi = Elem.zero()
    while not xi:
        xi = random_vector(rng, spec.basis, degree)
    return inner_derivation(spec, xi, name=name)


def tri(e_degree=1):
    return triangular_algebra(e_degree)


def mat2(degrees=(0, 1)):
    return matrix_algebra(list(degrees))


def tri_pair(e_degree=1):
    base = triangular_algebra(e_degree)
    return base, self_pair(base)


def pair_derivation(pair, d):
    return transport_to_pair(pair, d)


def rng_for(seed):
    return random.Random(seed)
