"""Gauge transformations of deformations and the induced coalgebra automorphisms.

A gauge generator h(t) = t h_1 + t^2 h_2 + ... of degree-0 derivations moves a
deformation d to exp([-, h(t)])(d).  On the bar side h becomes the coderivation
Mh = sum_i M_{i+1} h_i, whose exponential intertwines the two sh associative
structures.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .algebra import (ASSOCIATIVE, AlgebraError, AlgebraSpec, Deformation,
                      DerivationError, check_deformation, zero_derivation)
from .coalgebra import Coderivation, Flavor, Tensor, _TensorView, coproduct
from .derived import ShStructure, m_operator
from .graded import DegreeError, Elem, MultiMap, basis_words
from .report import VerificationReport


class SeriesError(ValueError):
    """The exponential series would not terminate on a fixed word."""


@dataclass
class GaugeGenerator:
    """h(t) = t h_1 + ... + t^H h_H; ``hs[0]`` is h_1."""

    hs: list

    def __post_init__(self):
        for i, h in enumerate(self.hs, start=1):
            if h.degree != 0:
                raise DegreeError(f"h_{i} has degree {h.degree}, expected 0")

    def h(self, i):
        if 1 <= i <= len(self.hs):
            return self.hs[i - 1]
        return zero_derivation(0)

    def __neg__(self):
        return GaugeGenerator([h.scaled(-1) for h in self.hs])

    @property
    def H(self):
        return len(self.hs)


def _series_bracket_h(series, gen: GaugeGenerator, t_order):
    """X_h applied coefficientwise: the t^n part of [sum t^a d_a, sum t^b h_b]."""
    out = [zero_derivation(1) for _ in range(t_order + 1)]
    for a, d in enumerate(series):
        for b in range(1, gen.H + 1):
            if a + b <= t_order:
                out[a + b] = out[a + b] + d.bracket(gen.h(b))
    return out


def gauge_transform(deformation: Deformation, gen: GaugeGenerator, t_order,
                    spec: AlgebraSpec = None) -> Deformation:
    """exp(X_h)(d) modulo t^(t_order + 1), with X_h = [-, h(t)].

    X_h raises the t-order by at least one, so the exponential is a finite sum
    at every order.  With ``spec`` the result is checked to be square-zero up
    to ``t_order``.
    """
    if t_order < 0:
        raise ValueError("t_order must be non-negative")
    term = [deformation.delta(n) for n in range(t_order + 1)]
    total = list(term)
    for m in range(1, t_order + 1):
        term = _series_bracket_h(term, gen, t_order)
        total = [s + x.scaled(Fraction(1, factorial(m))) for s, x in zip(total, term)]
    out = Deformation(total, t_order=t_order)
    if spec is not None:
        rep = check_deformation(spec, out)
        if not rep.passed:
            raise DerivationError("gauge transform is not square-zero", rep)
    return out


def build_Mh(spec: AlgebraSpec, gen: GaugeGenerator) -> Coderivation:
    """The degree-0 coderivation sum_i M_{i+1} h_i."""
    if spec.kind != ASSOCIATIVE:
        raise AlgebraError("Mh is built on an associative algebra")
    parts = {i + 1: m_operator(spec, gen.h(i), i + 1) for i in range(1, gen.H + 1)}
    return Coderivation(parts, Flavor.DECONCATENATION, 0)


class CoalgebraMorphism:
    """exp(scale * Mh) on the deconcatenation coalgebra, evaluated word by word.

    ``parts`` gives the corestriction by arity up to ``max_arity``; arity 1 is
    the identity.
    """

    def __init__(self, generator: Coderivation, max_arity, scale=1, t_order=None,
                 _chain=()):
        self.generator = generator
        self.scale = Fraction(scale)
        self.max_arity = max_arity
        self.t_order = t_order
        self._chain = _chain
        self._cache = {}

    def __call__(self, word) -> Elem:
        word = tuple(word)
        hit = self._cache.get(word)
        if hit is not None:
            return hit
        if self._chain:
            out = Elem.word(*word)
            for m in reversed(self._chain):
                out = m.apply(out)
        else:
            out = _exp_apply(self.generator, self.scale, word)
        self._cache[word] = out
        return out

    def apply(self, e: Elem) -> Elem:
        return e.map_linear(self)

    def compose(self, other: "CoalgebraMorphism") -> "CoalgebraMorphism":
        """self o other."""
        chain = (self._chain or (self,)) + (other._chain or (other,))
        return CoalgebraMorphism(None, min(self.max_arity, other.max_arity), _chain=chain)

    @property
    def parts(self):
        return {n: self.part(n) for n in range(1, self.max_arity + 1)}

    def part(self, n) -> MultiMap:
        return MultiMap(n, 0, fn=lambda *w: self(w).length_part(1), name=f"E{n}")

    def comultiplicativity_sides(self, word):
        """(Delta E(w), (E x E) Delta(w)) on the reduced deconcatenation coproduct."""
        lhs = Tensor()
        for w, c in self(word).items():
            for k, v in coproduct(w, Flavor.DECONCATENATION)._terms.items():
                lhs._add(k, c * v)
        rhs = Tensor()
        for (left, right), c in coproduct(word, Flavor.DECONCATENATION)._terms.items():
            for lw, lc in self(left).items():
                for rw, rc in self(right).items():
                    rhs._add((lw, rw), c * lc * rc)
        return lhs, rhs


def _exp_apply(gen: Coderivation, scale, word) -> Elem:
    out = Elem.word(*word)
    term = out
    m = 0
    while term:
        m += 1
        term = gen.apply(term) * (scale / m)
        out = out + term
    return out


def exp_coderivation(Mh: Coderivation, max_arity, scale=1, t_order=None) -> CoalgebraMorphism:
    """1 + (s Mh) + (s Mh)^2/2! + ...; each application shortens words."""
    if 1 in Mh.parts:
        raise SeriesError("an arity-1 part does not shorten words; exp would not terminate")
    if Mh.flavor is not Flavor.DECONCATENATION:
        raise SeriesError("gauge morphisms live on the deconcatenation coalgebra")
    return CoalgebraMorphism(Mh, max_arity, scale, t_order)


def verify_gauge(S: ShStructure, S2: ShStructure, E: CoalgebraMorphism, max_word_len,
                 max_weight=None) -> VerificationReport:
    """E o partial' = partial o E and Delta E = (E x E) Delta on words.

    ``S2`` must carry arities up to ``max_word_len``, i.e. come from a gauge
    transform computed to t-order max_word_len - 1.
    """
    spec = S.spec
    if max_weight is None and spec is not None:
        max_weight = spec.truncation_weight
    d, d2 = S.coderivation, S2.coderivation
    rep = VerificationReport("gauge", cutoffs={"maxArity": max(S.max_arity, S2.max_arity),
                                               "maxWordLen": max_word_len,
                                               "tOrder": S2.max_arity - 1})
    if S2.max_arity < max_word_len:
        rep.notes.append(f"transformed structure stops at arity {S2.max_arity}; "
                         f"words longer than that are not intertwined exactly")
    for w in basis_words(spec.basis, max_word_len, max_weight=max_weight):
        rep.record(w, E.apply(d2(w)), d.apply(E(w)), label="intertwining")
        lhs, rhs = E.comultiplicativity_sides(w)
        rep.record(w, _TensorView(lhs), _TensorView(rhs), label="comultiplicativity")
    return rep
