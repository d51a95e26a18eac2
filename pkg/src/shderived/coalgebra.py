"""Tensor coalgebras, coderivation lifts and the Gerstenhaber bracket.

Three comultiplications live on tensor words:

* deconcatenation on T(V), the proper splits of a word;
* the dual-Loday comultiplication, which keeps the last letter in the right
  factor and unshuffles the remaining letters with Koszul signs;
* the A-regularized version of the latter on mixed words L...L A...A, where the
  A-letters keep their relative order.

A coderivation is stored through its corestriction (one multilinear map per
arity) and lifted lazily whenever it is evaluated on a word.
"""
from __future__ import annotations

import enum
import itertools
from fractions import Fraction
from functools import lru_cache

from .graded import (ASSOC, LODAY, ArityError, ComponentOrderError, DegreeError, Elem,
                     MultiMap, check_mixed_order, linear_combination, parity_sign,
                     permutation_koszul_sign, word_degree)
from .report import VerificationReport


class Flavor(enum.Enum):
    DECONCATENATION = "deconcatenation"
    DUAL_LODAY = "dual-loday"
    MIXED_REGULARIZED = "mixed-regularized"
    # unregularized mixed coalgebra, only an intermediate for regularize()
    MIXED = "mixed"

    @property
    def is_mixed(self):
        return self in (Flavor.MIXED, Flavor.MIXED_REGULARIZED)


class FlavorError(ValueError):
    pass


class SignatureError(ValueError):
    """A map sends an input containing A-letters to an L-valued output."""


@lru_cache(maxsize=None)
def _splits(pattern, p, flavor):
    """Admissible (first, second, sign) splits of a head word.

    ``pattern`` is a tuple of (degree parity, component) per letter.  The first
    block has p letters.  Signs are Koszul signs of the reordering.
    """
    m = len(pattern)
    q = m - p
    if p < 0 or q < 0:
        return ()
    if flavor is Flavor.DECONCATENATION:
        return ((tuple(range(p)), tuple(range(p, m)), 1),)
    parities = [par for par, _ in pattern]
    out = []
    for first in itertools.combinations(range(m), p):
        chosen = set(first)
        second = tuple(i for i in range(m) if i not in chosen)
        if flavor is Flavor.MIXED_REGULARIZED:
            a_first = [i for i in first if pattern[i][1] == ASSOC]
            a_second = [i for i in second if pattern[i][1] == ASSOC]
            if a_first and a_second and max(a_first) > min(a_second):
                continue
        sign = permutation_koszul_sign(first + second, parities)
        out.append((first, second, sign))
    return tuple(out)


class _DeconcSplits(dict):
    def __missing__(self, p):
        self[p] = ((tuple(range(p)), None, 1),)
        return self[p]


_DECONC_SPLIT = _DeconcSplits()


def _pattern(word):
    return tuple((x.degree & 1, x.component) for x in word)


def _check_word(word, flavor):
    if flavor.is_mixed:
        check_mixed_order(word)


class Tensor:
    """Formal sum of k-fold tensors of words, keyed by tuples of words."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        self._terms = {}
        for k, c in (terms or {}).items():
            self._add(tuple(k), Fraction(c))

    def _add(self, key, c):
        v = self._terms.get(key, 0) + c
        if v:
            self._terms[key] = v
        else:
            self._terms.pop(key, None)

    def add_term(self, key, c):
        self._add(tuple(key), Fraction(c))
        return self

    def __add__(self, other):
        out = Tensor(self._terms)
        for k, c in other._terms.items():
            out._add(k, c)
        return out

    def __sub__(self, other):
        out = Tensor(self._terms)
        for k, c in other._terms.items():
            out._add(k, -c)
        return out

    def __eq__(self, other):
        return isinstance(other, Tensor) and self._terms == other._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: repr(kv[0]))

    def __repr__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"{c} " + " (x) ".join("(" + ",".join(map(repr, w)) + ")" for w in k)
                          for k, c in self.items())


class _TensorView(Elem):
    """An Elem-compatible wrapper so tensors can sit inside witnesses."""

    __slots__ = ("tensor",)

    def __init__(self, tensor):
        super().__init__()
        self.tensor = tensor
        self._terms = {tuple(w for w in k): c for k, c in tensor._terms.items()}

    def __repr__(self):
        return repr(self.tensor)


def coproduct(word, flavor: Flavor) -> Tensor:
    """Reduced comultiplication of a single word (a single letter gives 0)."""
    word = tuple(word)
    _check_word(word, flavor)
    out = Tensor()
    n = len(word)
    if n < 2:
        return out
    head, last = word[:-1], word[-1]
    pat = _pattern(head)
    for i in range(1, n):
        for first, second, sign in _splits(pat, i, flavor):
            left = tuple(head[t] for t in first)
            right = tuple(head[t] for t in second) + (last,)
            out._add((left, right), Fraction(sign))
    return out


def coproduct_elem(e: Elem, flavor: Flavor) -> Tensor:
    out = Tensor()
    for w, c in e._terms.items():
        for k, v in coproduct(w, flavor)._terms.items():
            out._add(k, c * v)
    return out


def lift_apply(f: MultiMap, word, flavor: Flavor) -> Elem:
    """Evaluate the coderivation lift of ``f`` on one word."""
    word = tuple(word)
    n, i = len(word), f.arity
    if n < i:
        return Elem.zero()
    out = {}
    mixed = flavor.is_mixed
    deconc = flavor is Flavor.DECONCATENATION
    for k in range(i, n + 1):
        head, pinned, tail = word[: k - 1], word[k - 1], word[k:]
        splits = _DECONC_SPLIT[k - i] if deconc else _splits(_pattern(head), k - i, flavor)
        for first, second, sign in splits:
            if second is None:
                prefix, inputs = head[:k - i], head[k - i:] + (pinned,)
            else:
                prefix = tuple(head[t] for t in first)
                inputs = tuple(head[t] for t in second) + (pinned,)
            value = f(*inputs)
            if not value:
                continue
            if mixed and any(x.component == ASSOC for x in inputs):
                for sym, _ in value.letters():
                    if sym.component == LODAY:
                        raise SignatureError(
                            f"{f.name}{inputs!r} has an L-valued term {sym!r}")
            s = sign * parity_sign(f.degree * word_degree(prefix))
            for vw, vc in value._terms.items():
                w = prefix + vw + tail
                v = out.get(w, 0) + s * vc
                if v:
                    out[w] = v
                else:
                    out.pop(w, None)
    return Elem._raw(out)


class Coderivation:
    """A coderivation given by its corestriction ``{arity: MultiMap}``."""

    def __init__(self, parts, flavor: Flavor, degree=None):
        self.parts = {a: f for a, f in sorted(parts.items())}
        self.flavor = flavor
        degrees = {f.degree for f in self.parts.values()}
        if len(degrees) > 1:
            raise DegreeError(f"parts of different degrees {sorted(degrees)}")
        if degree is None:
            degree = degrees.pop() if degrees else 0
        elif degrees and degrees != {degree}:
            raise DegreeError(f"parts have degree {degrees.pop()}, expected {degree}")
        for a, f in self.parts.items():
            if f.arity != a:
                raise ArityError(f"part stored at arity {a} has arity {f.arity}")
        self.degree = degree
        self._cache = {}

    @property
    def max_arity(self):
        return max(self.parts, default=0)

    def __call__(self, word) -> Elem:
        word = tuple(word)
        hit = self._cache.get(word)
        if hit is not None:
            return hit
        _check_word(word, self.flavor)
        out = Elem.zero()
        for f in self.parts.values():
            if f.arity <= len(word):
                out = out + lift_apply(f, word, self.flavor)
        self._cache[word] = out
        return out

    def apply(self, e: Elem) -> Elem:
        return e.map_linear(self)

    def corestrict(self):
        return dict(self.parts)

    def part(self, arity):
        return self.parts.get(arity)

    def __add__(self, other):
        _same_flavor(self, other)
        parts = dict(self.parts)
        for a, g in other.parts.items():
            parts[a] = parts[a] + g if a in parts else g
        return Coderivation(parts, self.flavor, self.degree if self.parts else other.degree)

    def scaled(self, c):
        return Coderivation({a: f.scaled(c) for a, f in self.parts.items()}, self.flavor,
                            self.degree)

    def __neg__(self):
        return self.scaled(-1)

    def __repr__(self):
        return (f"Coderivation({self.flavor.value}, degree={self.degree}, "
                f"arities={list(self.parts)})")


def _same_flavor(d1, d2):
    if d1.flavor is not d2.flavor:
        raise FlavorError(f"{d1.flavor.value} vs {d2.flavor.value}")


def lift(f: MultiMap, flavor: Flavor) -> Coderivation:
    if flavor is Flavor.MIXED_REGULARIZED and f.signature == "plain":
        raise FlavorError("mixed flavor needs a map on L/A components")
    return Coderivation({f.arity: f}, flavor, f.degree)


def corestrict(d: Coderivation):
    return d.corestrict()


def compose_apply(d1: Coderivation, d2: Coderivation, word) -> Elem:
    """(d1 o d2)(word), evaluated word-wise."""
    return d1.apply(d2(word))


def commutator_apply(d1, d2, word) -> Elem:
    sign = parity_sign(d1.degree * d2.degree)
    return d1.apply(d2(word)) - d2.apply(d1(word)) * sign


def _corestricted_after(d: Coderivation, e: Elem) -> Elem:
    """pi(d(e)): only words whose length is an arity of d contribute."""
    terms = []
    for w, c in e.items():
        f = d.parts.get(len(w))
        if f is not None:
            terms.append((c, f(*w)))
    return linear_combination(terms)


def commutator(d1: Coderivation, d2: Coderivation) -> Coderivation:
    """Graded commutator d1 d2 - (-1)^{|d1||d2|} d2 d1, stored by corestriction."""
    _same_flavor(d1, d2)
    degree = d1.degree + d2.degree
    parts = {}
    for a in d1.parts:
        for b in d2.parts:
            n = a + b - 1
            if n in parts:
                continue

            def fn(*letters, _n=n):
                sign = parity_sign(d1.degree * d2.degree)
                return _corestricted_after(d1, d2(letters)) - \
                    _corestricted_after(d2, d1(letters)) * sign

            parts[n] = MultiMap(n, degree, fn=fn, name=f"[{d1!r},{d2!r}]_{n}")
    return Coderivation(parts, d1.flavor, degree)


def gerstenhaber(f: MultiMap, g: MultiMap, flavor: Flavor = Flavor.DECONCATENATION) -> MultiMap:
    """{f, g}: the arity i+j-1 corestriction of [f^c, g^c]."""
    br = commutator(lift(f, flavor), lift(g, flavor))
    out = br.parts[f.arity + g.arity - 1]
    out.name = f"{{{f.name},{g.name}}}"
    return out


def regularize(d: Coderivation) -> Coderivation:
    """A-regularization: keep only lift terms preserving the order of A-letters."""
    if d.flavor is Flavor.MIXED_REGULARIZED:
        return d
    if d.flavor is not Flavor.MIXED:
        raise FlavorError(f"cannot regularize a {d.flavor.value} coderivation")
    return Coderivation(dict(d.parts), Flavor.MIXED_REGULARIZED, d.degree)


def coderivation_rule_sides(d, word):
    """Both sides of (D (x) 1 + 1 (x) D) Delta = Delta D on one word."""
    lhs = Tensor()
    for (w1, w2), c in coproduct(word, d.flavor)._terms.items():
        for v, cv in d(w1)._terms.items():
            lhs._add((v, w2), c * cv)
        sign = parity_sign(d.degree * word_degree(w1))
        for v, cv in d(w2)._terms.items():
            lhs._add((w1, v), c * cv * sign)
    rhs = coproduct_elem(d(word), d.flavor)
    return lhs, rhs


def verify_coderivation_rule(d: Coderivation, max_len, words) -> VerificationReport:
    """Check the coderivation rule on every given word of length 2..max_len."""
    if max_len < 2:
        raise ValueError("max_len must be at least 2")
    rep = VerificationReport(f"coderivation-rule[{d.flavor.value}]",
                             cutoffs={"maxWordLen": max_len})
    for w in words:
        if not 2 <= len(w) <= max_len:
            continue
        try:
            lhs, rhs = coderivation_rule_sides(d, w)
        except ComponentOrderError:
            continue
        rep.record(w, _TensorView(lhs), _TensorView(rhs))
    return rep


def coassociativity_sides(word, flavor):
    d1 = Tensor()
    for (w1, w2), c in coproduct(word, flavor)._terms.items():
        for (u1, u2), v in coproduct(w1, flavor)._terms.items():
            d1._add((u1, u2, w2), c * v)
    d2 = Tensor()
    for (w1, w2), c in coproduct(word, flavor)._terms.items():
        for (u1, u2), v in coproduct(w2, flavor)._terms.items():
            d2._add((w1, u1, u2), c * v)
    return d1, d2
