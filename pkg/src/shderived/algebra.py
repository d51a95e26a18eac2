"""Finite graded algebras given by structure constants, their derivations and
formal deformations.

Three kinds are supported: associative algebras, (left) Loday algebras and
Loday pairs (L, A) with products [L,L] -> L, [L,A] -> A and [A,A] -> A.  There
is no [A,L] product; A-letters never stand left of L-letters.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .graded import (ASSOC, LODAY, PLAIN, BasisSymbol, DegreeError, Elem, MultiMap,
                     linear_combination, parity_sign)
from .report import VerificationReport

ASSOCIATIVE = "associative"
LODAY_KIND = "loday"
PAIR = "pair"
KINDS = (ASSOCIATIVE, LODAY_KIND, PAIR)

# exhaustive tuple checks switch to weight-bounded enumeration above this size
EXHAUSTIVE_LIMIT = 60_000


class AlgebraError(ValueError):
    pass


class DerivationError(ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class AlgebraSpec:
    """A graded algebra on a finite basis.

    ``products`` maps a role to a binary MultiMap: ``"product"`` for the
    associative multiplication, ``"bracket"`` for the Loday bracket and, for a
    pair, ``"action"`` for [L, A] -> A.  All products have degree 0.
    """

    def __init__(self, basis, kind, products, truncation_weight, name="", validate=True):
        if kind not in KINDS:
            raise AlgebraError(f"unknown kind {kind!r}")
        names = [b.name for b in basis]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise AlgebraError(f"duplicate basis names {dup}")
        self.basis = tuple(basis)
        self.kind = kind
        self.products = dict(products)
        self.truncation_weight = truncation_weight
        self.name = name
        self.by_name = {b.name: b for b in self.basis}
        required = {ASSOCIATIVE: ("product",), LODAY_KIND: ("bracket",),
                    PAIR: ("bracket", "action", "product")}[kind]
        for role in required:
            if role not in self.products:
                raise AlgebraError(f"{kind} algebra needs a {role!r} table")
            if self.products[role].degree != 0:
                raise DegreeError(f"{role} has degree {self.products[role].degree}, expected 0")
        if kind == PAIR:
            bad = [b for b in self.basis if b.component == PLAIN]
            if bad:
                raise AlgebraError(f"pair basis symbol {bad[0]!r} has no L/A component")
        elif any(b.component != PLAIN for b in self.basis):
            raise AlgebraError("L/A components only occur in Loday pairs")
        if validate:
            rep = check_axioms(self)
            if not rep.passed:
                raise AlgebraError(f"axioms fail:\n{rep.to_text()}")

    def __repr__(self):
        return f"AlgebraSpec({self.name or self.kind}, dim={len(self.basis)})"

    def component_basis(self, component):
        return tuple(b for b in self.basis if b.component == component)

    @property
    def l_basis(self):
        return self.component_basis(LODAY)

    @property
    def a_basis(self):
        return self.component_basis(ASSOC)

    def role(self, x, y):
        if self.kind == ASSOCIATIVE:
            return "product"
        if self.kind == LODAY_KIND:
            return "bracket"
        if x.component == LODAY:
            return "bracket" if y.component == LODAY else "action"
        if y.component == ASSOC:
            return "product"
        raise AlgebraError(f"no [A,L] product: [{x!r},{y!r}]")

    def mul(self, x, y) -> Elem:
        return self.products[self.role(x, y)](x, y)

    def mul_elems(self, e1: Elem, e2: Elem) -> Elem:
        terms = []
        for x, c in e1.letters():
            for y, d in e2.letters():
                terms.append((c * d, self.mul(x, y)))
        return linear_combination(terms)

    def nested(self, first: Elem, rest) -> Elem:
        """Left-nested product [[...[first, r1], r2], ...]."""
        out = first
        for r in rest:
            if not out:
                return out
            out = self.mul_elems(out, Elem.word(r))
        return out

    def tuples(self, n, pattern=None):
        """Basis n-tuples for axiom checks, optionally restricted to a component
        pattern such as ``"LLA"``.  Weight-bounded for large bases."""
        pools = []
        for k in range(n):
            if pattern is None:
                pools.append(self.basis)
            else:
                pools.append(self.component_basis({"L": LODAY, "A": ASSOC}[pattern[k]]))
        size = 1
        for p in pools:
            size *= len(p)
        if size <= EXHAUSTIVE_LIMIT:
            return list(itertools.product(*pools)), None
        bound = self.truncation_weight
        out = []

        def grow(prefix, w):
            if len(prefix) == n:
                out.append(tuple(prefix))
                return
            for b in pools[len(prefix)]:
                if bound is None or w + b.weight <= bound:
                    prefix.append(b)
                    grow(prefix, w + b.weight)
                    prefix.pop()

        grow([], 0)
        return out, bound

    def sub_algebra(self, component):
        """The L-part (Loday) or the A-part (associative) of a pair."""
        if self.kind != PAIR:
            raise AlgebraError("only pairs have parts")
        basis = [_plain(b) for b in self.component_basis(component)]
        back = {_plain(b): b for b in self.component_basis(component)}
        role = "bracket" if component == LODAY else "product"
        prod = self.products[role]
        table_fn = lambda x, y: _map_letters(prod(back[x], back[y]), _plain)
        kind = LODAY_KIND if component == LODAY else ASSOCIATIVE
        return AlgebraSpec(basis, kind, {role: MultiMap(2, 0, fn=table_fn, name=role)},
                           self.truncation_weight, name=f"{self.name}.{component}",
                           validate=False)


def _plain(b):
    return BasisSymbol(b.name, b.degree, PLAIN, b.weight, b.shift)


def _map_letters(e: Elem, fn) -> Elem:
    return Elem({tuple(fn(x) for x in w): c for w, c in e._terms.items()})


def to_component(e: Elem, component) -> Elem:
    return _map_letters(e, lambda b: BasisSymbol(b.name, b.degree, component, b.weight, b.shift))


# ---------------------------------------------------------------------------
# constructions


def _gen_word_symbol(gens, component=PLAIN):
    name = "·".join(g.name for g in gens)
    return BasisSymbol(name, sum(g.degree for g in gens), component, len(gens))


def free_words(generators, max_weight):
    return [gens for n in range(1, max_weight + 1)
            for gens in itertools.product(generators, repeat=n)]


def build_truncated_free(generators, max_weight, name="") -> AlgebraSpec:
    """Free associative algebra on ``generators`` modulo words longer than max_weight.

    ``generators`` is a sequence of (name, degree).  Basis elements are the
    words up to ``max_weight``, named by ``·``-joined generator names.
    """
    if max_weight < 2:
        raise AlgebraError("max_weight must be at least 2")
    names = [g for g, _ in generators]
    if len(set(names)) != len(names):
        raise AlgebraError(f"duplicate generator names in {names}")
    gens = [BasisSymbol(g, d) for g, d in generators]
    words = free_words(gens, max_weight)
    basis = [_gen_word_symbol(w) for w in words]
    spec = None

    def product(x, y):
        n = x.weight + y.weight
        if n > max_weight:
            return Elem.zero()
        return Elem.word(spec.by_name[x.name + "·" + y.name])

    spec = AlgebraSpec(basis, ASSOCIATIVE, {"product": MultiMap(2, 0, fn=product, name="*")},
                       max_weight, name=name or f"free{len(gens)}w{max_weight}", validate=False)
    spec.generators = tuple(spec.by_name[g] for g in names)
    return spec


def table_map(table, name="*") -> MultiMap:
    """A degree-0 binary map from {(x, y): Elem}; missing entries are zero."""
    table = dict(table)
    return MultiMap(2, 0, fn=lambda x, y: table.get((x, y), Elem.zero()), name=name)


def algebra_from_tables(basis, kind, tables, truncation_weight=None, name="",
                        validate=True) -> AlgebraSpec:
    """An algebra from explicit structure constants, one table per role."""
    products = {role: table_map(t, role) for role, t in tables.items()}
    for role, t in tables.items():
        for (x, y), v in t.items():
            if v and v.degree() != x.degree + y.degree:
                raise DegreeError(f"{role}({x!r}, {y!r}) has degree {v.degree()}")
    return AlgebraSpec(basis, kind, products, truncation_weight, name=name, validate=validate)


def matrix_algebra(degrees, upper=False, name="") -> AlgebraSpec:
    """Matrix units E_ij graded by deg E_ij = degrees[j] - degrees[i].

    With ``upper`` only i <= j is kept (triangular matrices).  No truncation.
    """
    n = len(degrees)
    units = {(i, j): BasisSymbol(f"E{i + 1}{j + 1}", degrees[j] - degrees[i])
             for i in range(n) for j in range(n) if not upper or i <= j}
    table = {}
    for (i, j), x in units.items():
        for (k, l), y in units.items():
            if j == k:
                table[(x, y)] = Elem.word(units[(i, l)])
    spec = algebra_from_tables(list(units.values()), ASSOCIATIVE, {"product": table},
                               name=name or f"mat{n}{'u' if upper else ''}", validate=False)
    spec.generators = tuple(units.values())
    return spec


def triangular_algebra(e_degree=1, name="") -> AlgebraSpec:
    """Upper triangular 2x2 matrices on the basis one, h = E11 - E22, e = E12.

    Products of basis elements are almost never zero, which makes this a dense
    test bed for identities among multilinear operators.
    """
    one, h, e = BasisSymbol("one", 0), BasisSymbol("h", 0), BasisSymbol("e", e_degree)
    w = Elem.word
    table = {(one, x): w(x) for x in (one, h, e)}
    table.update({(x, one): w(x) for x in (one, h, e)})
    table.update({(h, h): w(one), (h, e): w(e), (e, h): -w(e)})
    spec = algebra_from_tables([one, h, e], ASSOCIATIVE, {"product": table},
                               name=name or "tri2", validate=False)
    spec.generators = (one, h, e)
    return spec


def graded_commutator(mul):
    """[u, v] = mul(u, v) - (-1)^{|u||v|} mul(v, u)."""
    def fn(x, y):
        return mul(x, y) - mul(y, x) * parity_sign(x.degree * y.degree)
    return fn


def commutator_loday(spec: AlgebraSpec, name="") -> AlgebraSpec:
    """The graded commutator bracket of an associative algebra, as a Loday algebra."""
    prod = spec.products["product"]
    out = AlgebraSpec(spec.basis, LODAY_KIND,
                      {"bracket": MultiMap(2, 0, fn=graded_commutator(prod), name="[,]")},
                      spec.truncation_weight, name=name or f"{spec.name}.comm", validate=False)
    out.generators = getattr(spec, "generators", ())
    return out


def self_pair(spec: AlgebraSpec, l_prefix="x", a_prefix="a", name="") -> AlgebraSpec:
    """The Loday pair (B, B) of an associative algebra B.

    L is a copy of B with the graded commutator bracket, A a copy of B with its
    product, and L acts on A by graded commutators.  Basis names are rebuilt by
    prefixing every generator name.
    """
    prod = spec.products["product"]

    def rename(b, prefix, component):
        name_ = "·".join(prefix + g for g in b.name.split("·"))
        return BasisSymbol(name_, b.degree, component, b.weight, b.shift)

    to_l = {b: rename(b, l_prefix, LODAY) for b in spec.basis}
    to_a = {b: rename(b, a_prefix, ASSOC) for b in spec.basis}
    back = {v: k for k, v in to_l.items()}
    back.update({v: k for k, v in to_a.items()})
    comm = graded_commutator(prod)

    def bracket(x, y):
        return _map_letters(comm(back[x], back[y]), to_l.get)

    def action(x, a):
        return _map_letters(comm(back[x], back[a]), to_a.get)

    def product(a, b):
        return _map_letters(prod(back[a], back[b]), to_a.get)

    basis = [to_l[b] for b in spec.basis] + [to_a[b] for b in spec.basis]
    out = AlgebraSpec(basis, PAIR,
                      {"bracket": MultiMap(2, 0, fn=bracket, name="[,]"),
                       "action": MultiMap(2, 0, fn=action, name="[,>"),
                       "product": MultiMap(2, 0, fn=product, name="*")},
                      spec.truncation_weight, name=name or f"{spec.name}.pair", validate=False)
    out.underlying = spec
    out.to_l, out.to_a, out.back = to_l, to_a, back
    return out


# ---------------------------------------------------------------------------
# axioms


def _assoc_sides(spec, a, b, c):
    A, B, C = (Elem.word(x) for x in (a, b, c))
    return spec.mul_elems(spec.mul_elems(A, B), C), spec.mul_elems(A, spec.mul_elems(B, C))


def _leibniz_sides(spec, x, y, z):
    """[x,[y,z]] versus [[x,y],z] + (-1)^{xy}[y,[x,z]]."""
    X, Y, Z = (Elem.word(v) for v in (x, y, z))
    lhs = spec.mul_elems(X, spec.mul_elems(Y, Z))
    rhs = spec.mul_elems(spec.mul_elems(X, Y), Z) + \
        spec.mul_elems(Y, spec.mul_elems(X, Z)) * parity_sign(x.degree * y.degree)
    return lhs, rhs


def check_axioms(spec: AlgebraSpec, kind=None) -> VerificationReport:
    """Evaluate the axioms of ``kind`` (default: the declared kind) on basis triples."""
    kind = kind or spec.kind
    rep = VerificationReport("axioms", cutoffs={})
    checks = []
    if kind == ASSOCIATIVE:
        checks.append(("associativity", None, _assoc_sides))
    elif kind == LODAY_KIND:
        checks.append(("leibniz", None, _leibniz_sides))
    elif kind == PAIR:
        checks += [("leibniz[LLL]", "LLL", _leibniz_sides),
                   ("l1[LLA]", "LLA", _leibniz_sides),
                   ("l2[LAA]", "LAA", _pair_l2_sides),
                   ("associativity[AAA]", "AAA", _assoc_sides)]
    else:
        raise AlgebraError(f"unknown kind {kind!r}")
    pattern_pairs = [None] if spec.kind != PAIR else ["LL", "LA", "AA"]
    for pat in pattern_pairs:
        pairs, bound = spec.tuples(2, pat)
        for x, y in pairs:
            v = spec.mul(x, y)
            if v and v.degree() != x.degree + y.degree:
                rep.record((x, y), v, Elem.zero(), label="degree")
            if spec.kind == PAIR and v:
                want = LODAY if pat == "LL" else ASSOC
                if any(s.component != want for s, _ in v.letters()):
                    rep.record((x, y), v, Elem.zero(), label="component")
    for label, pat, sides in checks:
        triples, bound = spec.tuples(3, pat)
        if bound is not None:
            rep.cutoffs["maxTripleWeight"] = bound
        for t in triples:
            lhs, rhs = sides(spec, *t)
            rep.record(t, lhs, rhs, label=label)
    return rep


def _pair_l2_sides(spec, x, a, b):
    """[x,[a,b]] versus [[x,a],b] + (-1)^{xa}[a,[x,b]]."""
    return _leibniz_sides(spec, x, a, b)


# ---------------------------------------------------------------------------
# derivations


class Derivation:
    """A homogeneous linear map satisfying the graded Leibniz rule."""

    def __init__(self, action: MultiMap, name=None):
        if action.arity != 1:
            raise AlgebraError("a derivation acts on single letters")
        self.action = action
        self.name = name or action.name

    @property
    def degree(self):
        return self.action.degree

    def __call__(self, sym) -> Elem:
        return self.action(sym)

    def apply(self, e: Elem) -> Elem:
        return linear_combination((c, self.action(x)) for x, c in e.letters())

    def compose(self, other):
        """Plain composition self o other as a linear map (not a derivation)."""
        return MultiMap(1, self.degree + other.degree,
                        fn=lambda x: self.apply(other(x)), name=f"{self.name}{other.name}")

    def bracket(self, other) -> "Derivation":
        sign = parity_sign(self.degree * other.degree)
        fn = lambda x: self.apply(other(x)) - other.apply(self(x)) * sign
        return Derivation(MultiMap(1, self.degree + other.degree, fn=fn),
                          name=f"[{self.name},{other.name}]")

    def __add__(self, other):
        if other.degree != self.degree:
            raise DegreeError("adding derivations of different degrees")
        return Derivation(MultiMap(1, self.degree, fn=lambda x: self(x) + other(x)),
                          name=f"({self.name}+{other.name})")

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, c):
        c = Fraction(c)
        return Derivation(MultiMap(1, self.degree, fn=lambda x: self(x) * c),
                          name=f"{c}{self.name}")

    def __neg__(self):
        return self.scaled(-1)

    def table(self, basis):
        return {b: self(b) for b in basis if self(b)}

    def __repr__(self):
        return f"Derivation({self.name}, degree={self.degree})"


def zero_derivation(degree=0):
    return Derivation(MultiMap(1, degree, table={}, name="0"), name="0")


def derivation_from_table(table, degree, name="D"):
    return Derivation(MultiMap.from_table(1, degree, {(k,): v for k, v in table.items()},
                                          name=name), name=name)


def check_leibniz(spec: AlgebraSpec, d: Derivation) -> VerificationReport:
    """D[o1,o2] = [Do1,o2] + (-1)^{D o1}[o1,Do2] on basis pairs; for pairs also
    checks that D preserves components."""
    rep = VerificationReport(f"leibniz[{d.name}]", cutoffs={})
    patterns = [None] if spec.kind != PAIR else ["LL", "LA", "AA"]
    for pat in patterns:
        pairs, bound = spec.tuples(2, pat)
        if bound is not None:
            rep.cutoffs["maxPairWeight"] = bound
        for x, y in pairs:
            lhs = d.apply(spec.mul(x, y))
            rhs = spec.mul_elems(d(x), Elem.word(y)) + \
                spec.mul_elems(Elem.word(x), d(y)) * parity_sign(d.degree * x.degree)
            rep.record((x, y), lhs, rhs, label="leibniz")
    for b in spec.basis:
        v = d(b)
        if v and (v.degree() != b.degree + d.degree
                  or any(s.component != b.component for s, _ in v.letters())):
            rep.record((b,), v, Elem.zero(), label="homogeneity")
    return rep


def inner_derivation(spec: AlgebraSpec, xi: Elem, name=None) -> Derivation:
    """a -> [xi, a]: the graded commutator for associative algebras, the left
    bracket for Loday algebras, the adjoint action of xi in L for pairs."""
    deg = xi.degree()
    if deg is None:
        return zero_derivation(0)
    if spec.kind == ASSOCIATIVE:
        comm = graded_commutator(spec.products["product"])
        fn = lambda a: linear_combination((c, comm(x, a)) for x, c in xi.letters())
    else:
        if spec.kind == PAIR and any(x.component != LODAY for x, _ in xi.letters()):
            raise AlgebraError("the adjoint action needs an element of L")
        fn = lambda a: spec.mul_elems(xi, Elem.word(a))
    return Derivation(MultiMap(1, deg, fn=fn), name=name or f"ad({xi!r})")


def derivation_from_generators(spec: AlgebraSpec, images, degree, name="D") -> Derivation:
    """Extend generator images to a derivation of a truncated free algebra."""
    gens = {g.name: g for g in spec.generators}
    images = {(g if isinstance(g, BasisSymbol) else gens[g]): v for g, v in images.items()}
    for g, v in images.items():
        if v and v.degree() != g.degree + degree:
            raise DegreeError(f"image of {g!r} has degree {v.degree()}")
    cache = {}

    def fn(b):
        if b in cache:
            return cache[b]
        parts = b.name.split("·")
        g = gens[parts[0]]
        if len(parts) == 1:
            out = images.get(g, Elem.zero())
        else:
            rest = spec.by_name["·".join(parts[1:])]
            out = spec.mul_elems(images.get(g, Elem.zero()), Elem.word(rest)) + \
                spec.mul_elems(Elem.word(g), fn(rest)) * parity_sign(degree * g.degree)
        cache[b] = out
        return out

    return Derivation(MultiMap(1, degree, fn=fn, name=name), name=name)


def transport_to_pair(pair: AlgebraSpec, d: Derivation, name=None) -> Derivation:
    """The pair derivation (D_L, D_A) induced by a derivation of the underlying algebra."""
    def fn(b):
        image = d(pair.back[b])
        target = pair.to_l if b.component == LODAY else pair.to_a
        return _map_letters(image, target.get)
    return Derivation(MultiMap(1, d.degree, fn=fn), name=name or d.name)


def restrict_derivation(d: Derivation, component) -> Derivation:
    """The L- or A-part of a pair derivation, acting on plain symbols."""
    def fn(b):
        return to_component(d(BasisSymbol(b.name, b.degree, component, b.weight, b.shift)), PLAIN)
    return Derivation(MultiMap(1, d.degree, fn=fn), name=f"{d.name}|{component}")


def restrict_deformation(deformation, component):
    return Deformation([restrict_derivation(d, component) for d in deformation.deltas],
                       deformation.t_order)


# ---------------------------------------------------------------------------
# deformations


@dataclass
class Deformation:
    """d = delta_0 + t delta_1 + ... + t^T delta_T.

    With ``t_order`` None the family is a polynomial (higher coefficients are
    zero) and square-zero is checked at every order up to 2T.  Otherwise it is a
    series known modulo t^(t_order + 1).
    """

    deltas: list
    t_order: int = None

    def __post_init__(self):
        for i, d in enumerate(self.deltas):
            if d.degree != 1:
                raise DegreeError(f"delta_{i} has degree {d.degree}, expected 1")

    @property
    def T(self):
        return len(self.deltas) - 1

    def delta(self, i):
        if 0 <= i < len(self.deltas):
            return self.deltas[i]
        return zero_derivation(1)

    @property
    def checked_orders(self):
        if self.t_order is None:
            return 2 * self.T
        return self.t_order


def check_deformation(spec: AlgebraSpec, deltas, max_order=None) -> VerificationReport:
    """sum_{i+j=n} delta_i delta_j = 0 on the basis for n <= max_order.

    Every delta is first checked to be a derivation; a failure there is reported
    and the square-zero check is skipped.
    """
    if isinstance(deltas, Deformation):
        max_order = deltas.checked_orders if max_order is None else max_order
        deltas = deltas.deltas
    deltas = list(deltas)
    for i, d in enumerate(deltas):
        if d.degree != 1:
            raise DegreeError(f"delta_{i} has degree {d.degree}, expected 1")
    if max_order is None:
        max_order = 2 * (len(deltas) - 1)
    rep = VerificationReport("deformation", cutoffs={"tOrder": max_order})
    for i, d in enumerate(deltas):
        lr = check_leibniz(spec, d)
        rep.merge(lr, prefix=f"delta_{i} ")
    if not rep.passed:
        rep.notes.append("a delta is not a derivation; square-zero check skipped")
        return rep
    for n in range(max_order + 1):
        terms = [(i, n - i) for i in range(n + 1) if i < len(deltas) and n - i < len(deltas)]
        for b in spec.basis:
            total = Elem.zero()
            for i, j in terms:
                total = total + deltas[i].apply(deltas[j](b))
            rep.record((b,), total, Elem.zero(), label=f"order {n}")
    return rep


# ---------------------------------------------------------------------------
# binary derived structures


def derived_product_algebra(spec: AlgebraSpec, delta: Derivation) -> AlgebraSpec:
    """(sA, [sa,sb] = (-1)^{|a|} s((delta a) * b))."""
    return _derived(spec, delta, ASSOCIATIVE)


def derived_loday_algebra(spec: AlgebraSpec, delta: Derivation) -> AlgebraSpec:
    """(sL, [sx,sy] = (-1)^{|x|} s[delta x, y])."""
    return _derived(spec, delta, LODAY_KIND)


def derived_pair(spec: AlgebraSpec, delta: Derivation) -> AlgebraSpec:
    """The triple of derived brackets on (sL, sA)."""
    return _derived(spec, delta, PAIR)


def _derived(spec, delta, kind):
    if spec.kind != kind:
        raise AlgebraError(f"expected a {kind} algebra, got {spec.kind}")
    up = {b: b.suspend() for b in spec.basis}
    down = {v: k for k, v in up.items()}

    def make(role):
        def fn(sx, sy):
            x, y = down[sx], down[sy]
            v = spec.mul_elems(delta(x), Elem.word(y)) * parity_sign(x.degree)
            return _map_letters(v, up.get)
        return MultiMap(2, 0, fn=fn, name=f"{role}_d")

    products = {role: make(role) for role in spec.products}
    return AlgebraSpec([up[b] for b in spec.basis], kind, products, spec.truncation_weight,
                       name=f"{spec.name}.derived", validate=False)
