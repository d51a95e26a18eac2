"""Graded linear algebra over the rationals.

Everything here is exact: scalars are :class:`fractions.Fraction`, elements are
finite formal sums of tensor words, and every sign is computed from the Koszul
rule letter by letter.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Iterable, Sequence

Scalar = Fraction

PLAIN = "plain"
LODAY = "L"
ASSOC = "A"
COMPONENTS = (PLAIN, LODAY, ASSOC)


class ArityError(ValueError):
    pass


class DegreeError(ValueError):
    pass


class ComponentOrderError(ValueError):
    """A mixed word has an A-letter standing left of an L-letter."""


@dataclass(frozen=True, order=True)
class BasisSymbol:
    """A homogeneous basis vector.

    ``weight`` is the word length in the generators when the symbol comes from
    a free algebra; it drives truncation and word enumeration.  ``shift``
    counts suspensions, already included in ``degree``.
    """

    name: str
    degree: int
    component: str = PLAIN
    weight: int = 1
    shift: int = 0

    def __post_init__(self):
        if self.component not in COMPONENTS:
            raise ValueError(f"unknown component {self.component!r}")
        # symbols are hashed constantly as dictionary keys inside words
        object.__setattr__(self, "_hash", hash((self.name, self.degree, self.component,
                                                self.weight, self.shift)))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "s" * self.shift + self.name if self.shift >= 0 else f"s^{self.shift}{self.name}"

    def suspend(self, times: int = 1) -> "BasisSymbol":
        return replace(self, degree=self.degree + times, shift=self.shift + times)

    def desuspend(self, times: int = 1) -> "BasisSymbol":
        return self.suspend(-times)


Word = tuple  # tuple[BasisSymbol, ...]


def word_degree(word: Iterable[BasisSymbol]) -> int:
    return sum(x.degree for x in word)


def word_weight(word: Iterable[BasisSymbol]) -> int:
    return sum(x.weight for x in word)


def _word_key(word):
    return (tuple(x.name for x in word), len(word), tuple((x.component, x.shift) for x in word))


def check_mixed_order(word: Sequence[BasisSymbol]) -> None:
    seen_a = False
    for x in word:
        if x.component == ASSOC:
            seen_a = True
        elif x.component == LODAY and seen_a:
            raise ComponentOrderError(f"L-letter {x!r} after an A-letter in {word!r}")


def with_component(sym: BasisSymbol, component: str) -> BasisSymbol:
    return replace(sym, component=component)


def is_mixed_ordered(word: Sequence[BasisSymbol]) -> bool:
    try:
        check_mixed_order(word)
    except ComponentOrderError:
        return False
    return True


class Elem:
    """Finite formal sum of tensor words with rational coefficients.

    An element of the base space is an Elem whose words all have length one.
    Instances are treated as immutable; all operations return new objects.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        d = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for w, c in items:
                if c:
                    w = tuple(w)
                    c = d.get(w, 0) + Fraction(c)
                    if c:
                        d[w] = c
                    else:
                        d.pop(w, None)
        self._terms = d
        self._hash = None

    @classmethod
    def _raw(cls, d):
        e = cls.__new__(cls)
        e._terms = d
        e._hash = None
        return e

    @classmethod
    def zero(cls):
        return cls._raw({})

    @classmethod
    def word(cls, *letters, coeff=1):
        if coeff == 0:
            return cls.zero()
        return cls._raw({tuple(letters): Fraction(coeff)})

    letter = word

    @property
    def terms(self):
        return {w: self._terms[w] for w in self.words()}

    def words(self):
        return sorted(self._terms, key=_word_key)

    def items(self):
        return [(w, self._terms[w]) for w in self.words()]

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def coeff(self, word) -> Fraction:
        return self._terms.get(tuple(word), Fraction(0))

    def __eq__(self, other):
        if isinstance(other, Elem):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        d = dict(self._terms)
        for w, c in other._terms.items():
            v = d.get(w, 0) + c
            if v:
                d[w] = v
            else:
                d.pop(w, None)
        return Elem._raw(d)

    __radd__ = __add__

    def __neg__(self):
        return Elem._raw({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        if not scalar:
            return Elem.zero()
        return Elem._raw({w: c * scalar for w, c in self._terms.items()})

    __rmul__ = __mul__

    def concat(self, other: "Elem") -> "Elem":
        """Tensor product of two elements, concatenating words (no sign)."""
        d = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                w = w1 + w2
                v = d.get(w, 0) + c1 * c2
                if v:
                    d[w] = v
                else:
                    d.pop(w, None)
        return Elem._raw(d)

    def degrees(self):
        return {word_degree(w) for w in self._terms}

    def degree(self):
        """The common degree of all words; None for zero; raises if inhomogeneous."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise DegreeError(f"inhomogeneous element {self!r}")
        return ds.pop()

    def letters(self):
        """Iterate (symbol, coeff) assuming every word has length one."""
        for w, c in self._terms.items():
            if len(w) != 1:
                raise ArityError(f"expected a vector, got a word of length {len(w)}")
            yield w[0], c

    def length_part(self, n):
        return Elem._raw({w: c for w, c in self._terms.items() if len(w) == n})

    def map_linear(self, fn: Callable[[Word], "Elem"]) -> "Elem":
        out = {}
        for w, c in self._terms.items():
            for w2, c2 in fn(w)._terms.items():
                v = out.get(w2, 0) + c * c2
                if v:
                    out[w2] = v
                else:
                    out.pop(w2, None)
        return Elem._raw(out)

    def normalized(self):
        return Elem(self._terms)

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for w, c in self.items():
            body = "(" + ",".join(repr(x) for x in w) + ")" if len(w) != 1 else repr(w[0])
            parts.append(f"{c} {body}")
        return " + ".join(parts)


def linear_combination(pairs) -> Elem:
    """Sum of coeff * elem over (coeff, elem) pairs."""
    out = {}
    for c, e in pairs:
        if not c:
            continue
        for w, v in e._terms.items():
            s = out.get(w, 0) + c * v
            if s:
                out[w] = s
            else:
                out.pop(w, None)
    return Elem._raw(out)


# ---------------------------------------------------------------------------
# permutations and signs


@dataclass(frozen=True)
class Unshuffle:
    """A (p, q)-unshuffle.

    ``positions`` lists the 0-based source indices in output order: the output
    word is ``(x[positions[0]], ..., x[positions[p+q-1]])``; the first p and the
    last q entries are each increasing.
    """

    p: int
    q: int
    positions: tuple

    def __post_init__(self):
        n = self.p + self.q
        if sorted(self.positions) != list(range(n)):
            raise ArityError(f"{self.positions} is not a permutation of {n} letters")
        first, second = self.positions[: self.p], self.positions[self.p:]
        if list(first) != sorted(first) or list(second) != sorted(second):
            raise ValueError(f"{self.positions} is not a ({self.p},{self.q})-unshuffle")

    @property
    def size(self):
        return self.p + self.q

    @property
    def first(self):
        return self.positions[: self.p]

    @property
    def second(self):
        return self.positions[self.p:]

    def apply(self, seq):
        return tuple(seq[i] for i in self.positions)


def unshuffles(p: int, q: int) -> list:
    """All C(p+q, p) unshuffles, ordered lexicographically by the first block."""
    n = p + q
    out = []
    for first in itertools.combinations(range(n), p):
        chosen = set(first)
        second = tuple(i for i in range(n) if i not in chosen)
        out.append(Unshuffle(p, q, first + second))
    return out


def _positions(perm):
    return perm.positions if isinstance(perm, Unshuffle) else tuple(perm)


def permutation_koszul_sign(positions: Sequence[int], degrees: Sequence[int]) -> int:
    """Koszul sign of reordering letters so that output slot t holds letter positions[t]."""
    if len(positions) != len(degrees):
        raise ArityError(f"permutation of {len(positions)} letters, {len(degrees)} degrees")
    odd = 0
    n = len(positions)
    for s in range(n):
        a = positions[s]
        if not degrees[a] & 1:
            continue
        for t in range(s + 1, n):
            b = positions[t]
            if b < a and degrees[b] & 1:
                odd ^= 1
    return -1 if odd else 1


def permutation_sign(positions: Sequence[int]) -> int:
    return permutation_koszul_sign(positions, [1] * len(positions))


def koszul_sign(perm, degrees: Sequence[int]) -> Fraction:
    return Fraction(permutation_koszul_sign(_positions(perm), degrees))


def anti_koszul_sign(perm, degrees: Sequence[int]) -> Fraction:
    pos = _positions(perm)
    return Fraction(permutation_sign(pos) * permutation_koszul_sign(pos, degrees))


def parity_sign(exponent: int) -> int:
    return -1 if exponent & 1 else 1


# ---------------------------------------------------------------------------
# multilinear maps


class MultiMap:
    """A homogeneous multilinear map of fixed arity.

    Values are given either by a table ``{(sym, ...): Elem}`` (missing tuples map
    to zero) or by a function of the input symbols.  Results are memoised, so the
    function must be pure.
    """

    def __init__(self, arity, degree, fn=None, table=None, name=None, signature=None):
        if arity < 1:
            raise ArityError("arity must be positive")
        self.arity = arity
        self.degree = degree
        self.name = name or "f"
        self.signature = signature
        self._fn = fn
        self._table = None if table is None else {tuple(k): v for k, v in table.items()}
        self._cache = {}

    @classmethod
    def from_table(cls, arity, degree, table, name=None, signature=None):
        for k, v in table.items():
            if len(k) != arity:
                raise ArityError(f"table key {k!r} has wrong arity")
            if v:
                d = v.degree()
                if d != word_degree(k) + degree:
                    raise DegreeError(f"{name or 'f'}{k!r} = {v!r} has degree {d}")
        return cls(arity, degree, table=table, name=name, signature=signature)

    @classmethod
    def zero(cls, arity, degree=0, name="0"):
        return cls(arity, degree, table={}, name=name)

    @property
    def values(self):
        if self._table is not None:
            return dict(self._table)
        return dict(self._cache)

    def __call__(self, *letters) -> Elem:
        if len(letters) != self.arity:
            raise ArityError(f"{self.name} has arity {self.arity}, got {len(letters)} inputs")
        key = letters
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self._table is not None:
            out = self._table.get(key, Elem.zero())
        else:
            out = self._fn(*letters)
        self._cache[key] = out
        return out

    def on_elems(self, *elems) -> Elem:
        """Multilinear extension to vectors (Elems of single letters)."""
        out = {}
        for combo in itertools.product(*(list(e.letters()) for e in elems)):
            c = Fraction(1)
            syms = []
            for s, v in combo:
                c *= v
                syms.append(s)
            for w, v in self(*syms)._terms.items():
                val = out.get(w, 0) + c * v
                if val:
                    out[w] = val
                else:
                    out.pop(w, None)
        return Elem._raw(out)

    def __add__(self, other):
        _check_same_shape(self, other)
        return MultiMap(self.arity, self.degree, fn=lambda *xs: self(*xs) + other(*xs),
                        name=f"({self.name}+{other.name})", signature=self.signature)

    def __sub__(self, other):
        _check_same_shape(self, other)
        return MultiMap(self.arity, self.degree, fn=lambda *xs: self(*xs) - other(*xs),
                        name=f"({self.name}-{other.name})", signature=self.signature)

    def __neg__(self):
        return self.scaled(-1)

    def scaled(self, c):
        c = Fraction(c)
        return MultiMap(self.arity, self.degree, fn=lambda *xs: self(*xs) * c,
                        name=f"{c}*{self.name}", signature=self.signature)

    def agrees_with(self, other, tuples) -> bool:
        return self.first_disagreement(other, tuples) is None

    def first_disagreement(self, other, tuples):
        for t in tuples:
            if self(*t) != other(*t):
                return t
        return None

    def tabulate(self, tuples):
        """Freeze into a table map over the given input tuples."""
        return MultiMap(self.arity, self.degree,
                        table={tuple(t): self(*t) for t in tuples if self(*t)},
                        name=self.name, signature=self.signature)

    def __repr__(self):
        return f"MultiMap({self.name}, arity={self.arity}, degree={self.degree})"


def _check_same_shape(f, g):
    if f.arity != g.arity:
        raise ArityError(f"arity mismatch {f.arity} vs {g.arity}")
    if f.degree != g.degree:
        raise DegreeError(f"degree mismatch {f.degree} vs {g.degree}")


# ---------------------------------------------------------------------------
# suspension


class LetterMap:
    """A homogeneous linear map on single letters, used inside tensor products."""

    def __init__(self, degree, fn, name="g"):
        self.degree = degree
        self.fn = fn
        self.name = name

    def __call__(self, sym) -> Elem:
        return self.fn(sym)


SUSPEND = LetterMap(1, lambda x: Elem.word(x.suspend()), "s")
DESUSPEND = LetterMap(-1, lambda x: Elem.word(x.desuspend()), "s^-1")
IDENTITY = LetterMap(0, lambda x: Elem.word(x), "1")


def apply_tensor_maps(maps: Sequence[LetterMap], elem: Elem) -> Elem:
    """Apply ``g_1 (x) ... (x) g_n`` to every word of ``elem`` under the Koszul rule.

    (g_1 (x) ... (x) g_n)(v_1, ..., v_n) = (-1)^{sum_k |g_k| (|v_1|+...+|v_{k-1}|)}
    (g_1 v_1, ..., g_n v_n).
    """
    out = Elem.zero()
    for w, c in elem._terms.items():
        if len(w) != len(maps):
            raise ArityError(f"{len(maps)} maps applied to a word of length {len(w)}")
        exponent = 0
        before = 0
        for g, v in zip(maps, w):
            exponent += g.degree * before
            before += v.degree
        piece = Elem.word(coeff=c * parity_sign(exponent))
        for g, v in zip(maps, w):
            piece = piece.concat(g(v))
        out = out + piece
    return out


def suspension_sign(degrees: Sequence[int]) -> int:
    """Sign produced by ``s (x) ... (x) s`` on a word with the given degrees."""
    syms = tuple(BasisSymbol(f"_{k}", d) for k, d in enumerate(degrees))
    out = apply_tensor_maps([SUSPEND] * len(syms), Elem.word(*syms))
    ((_, c),) = out.items()
    return int(c)


def shift_conjugate(f: MultiMap, direction: str) -> MultiMap:
    """Conjugate a multilinear map by suspension.

    ``down`` returns ``s^-1 o f o (s (x) ... (x) s)``, a map on the desuspended
    letters; ``up`` returns the map g with ``shift_conjugate(g, 'down') == f``,
    i.e. ``s o f o (s (x) ... (x) s)^-1``.  Signs come from
    :func:`apply_tensor_maps`.
    """
    n = f.arity
    if direction == "down":
        def fn(*letters):
            lifted = apply_tensor_maps([SUSPEND] * n, Elem.word(*letters))
            out = Elem.zero()
            for w, c in lifted._terms.items():
                out = out + apply_tensor_maps([DESUSPEND], f(*w)) * c
            return out
        return MultiMap(n, f.degree + n - 1, fn=fn, name=f"s^-1{f.name}s", signature=f.signature)
    if direction == "up":
        def fn(*letters):
            base = tuple(x.desuspend() for x in letters)
            sign = suspension_sign([x.degree for x in base])
            return apply_tensor_maps([SUSPEND], f(*base)) * sign
        return MultiMap(n, f.degree + 1 - n, fn=fn, name=f"s{f.name}s^-1", signature=f.signature)
    raise ValueError(f"direction must be 'up' or 'down', not {direction!r}")


def basis_words(basis, max_len, max_weight=None, mixed=False, min_len=1):
    """Tensor words over ``basis`` of length min_len..max_len, shortest first.

    With ``max_weight`` only words of total weight at most that bound are
    produced.  With ``mixed`` only words of the form L...L A...A are produced.
    """
    basis = list(basis)
    out = []

    def grow(prefix, weight, seen_a, target):
        if len(prefix) == target:
            out.append(tuple(prefix))
            return
        for x in basis:
            w = weight + x.weight
            if max_weight is not None and w > max_weight:
                continue
            if mixed and seen_a and x.component == LODAY:
                continue
            prefix.append(x)
            grow(prefix, w, seen_a or x.component == ASSOC, target)
            prefix.pop()

    for n in range(min_len, max_len + 1):
        grow([], 0, False, n)
    return out
