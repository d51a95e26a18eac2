"""Higher derived products and brackets.

All structures are built on the unshifted side as coderivations
``partial_k = N_k delta_{k-1}`` (``M_k delta_{k-1}`` for associative algebras);
the operations on the suspended space are views obtained by
:func:`~shderived.graded.shift_conjugate`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import ASSOCIATIVE, LODAY_KIND, PAIR, AlgebraError, AlgebraSpec, Deformation, \
    Derivation, to_component
from .coalgebra import Coderivation, Flavor
from .graded import ASSOC, LODAY, PLAIN, ArityError, Elem, MultiMap, check_mixed_order, \
    parity_sign, shift_conjugate, with_component


def nested_operator(spec: AlgebraSpec, d: Derivation, k: int, name=None) -> MultiMap:
    """(o_1, ..., o_k) -> [[...[D o_1, o_2], ...], o_k] for whichever products apply."""
    if k < 1:
        raise ArityError("arity must be positive")

    def fn(*letters):
        if spec.kind == PAIR:
            check_mixed_order(letters)
        return spec.nested(d(letters[0]), letters[1:])

    sig = "pair" if spec.kind == PAIR else "plain"
    return MultiMap(k, d.degree, fn=fn, name=name or f"N{k}{d.name}", signature=sig)


def m_operator(spec: AlgebraSpec, d: Derivation, i: int) -> MultiMap:
    """M_i D (a_1, ..., a_i) = (D a_1) * a_2 * ... * a_i."""
    if spec.kind != ASSOCIATIVE:
        raise AlgebraError("M_i D needs an associative algebra")
    return nested_operator(spec, d, i, name=f"M{i}{d.name}")


def n_operator(spec: AlgebraSpec, d: Derivation, k: int) -> MultiMap:
    """N_k D (x_1..x_i, a_1..a_j) = [[...[[D x_1, x_2], ...], a_1], ..., a_j]."""
    if spec.kind != PAIR:
        raise AlgebraError("N_k D needs a Loday pair")
    return nested_operator(spec, d, k, name=f"N{k}{d.name}")


def adjoint(spec: AlgebraSpec, u: Elem, name=None) -> Derivation:
    """The derivation [u, -] of A for an element u of L."""
    def fn(a):
        if a.component != ASSOC:
            raise AlgebraError("the adjoint action is taken on A")
        return spec.mul_elems(u, Elem.word(a))
    deg = u.degree() or 0
    return Derivation(MultiMap(1, deg, fn=fn), name=name or f"ad({u!r})")


def n_operator_by_adjoint(spec: AlgebraSpec, d: Derivation, k: int) -> MultiMap:
    """N_k D evaluated as (M_j ad(D x))(a): the nested L-part acts on the A-word."""
    def fn(*letters):
        check_mixed_order(letters)
        xs = [o for o in letters if o.component == LODAY]
        as_ = [o for o in letters if o.component == ASSOC]
        if not xs:
            return spec.nested(d(as_[0]), as_[1:])
        dx = spec.nested(d(xs[0]), xs[1:])
        if not as_:
            return dx
        return spec.nested(adjoint(spec, dx)(as_[0]), as_[1:])
    return MultiMap(k, d.degree, fn=fn, name=f"N{k}{d.name}~ad")


@dataclass
class ShStructure:
    """The family partial_1, partial_2, ... of a strong homotopy structure."""

    parts: dict
    flavor: Flavor
    max_arity: int
    spec: AlgebraSpec = None
    deformation: Deformation = None
    _lifted: dict = field(default_factory=dict, repr=False)

    def part(self, k):
        return self.parts.get(k)

    def lifted(self, k) -> Coderivation:
        """The coderivation lift of the arity-k part alone."""
        if k not in self._lifted:
            self._lifted[k] = Coderivation({k: self.parts[k]}, self.flavor)
        return self._lifted[k]

    @property
    def coderivation(self) -> Coderivation:
        return Coderivation(dict(self.parts), self.flavor, 1)

    def shifted(self, k) -> MultiMap:
        """The operation on the suspended space corresponding to partial_k."""
        return shift_conjugate(self.parts[k], "up")

    def restricted(self, component, spec=None, flavor=None):
        """Parts restricted to words in one component, relabelled as plain symbols."""
        plain = {}
        for k, f in self.parts.items():
            plain[k] = _restrict(f, component)
        return ShStructure(plain, flavor, self.max_arity, spec, self.deformation)


def _restrict(f, component):
    def fn(*letters):
        return to_component(f(*(with_component(x, component) for x in letters)), PLAIN)
    return MultiMap(f.arity, f.degree, fn=fn, name=f"{f.name}|{component}")


def _arities(deformation: Deformation):
    top = deformation.T if deformation.t_order is None else deformation.t_order
    return range(1, top + 2)


def derived_products(spec: AlgebraSpec, deformation: Deformation) -> ShStructure:
    """partial_i = M_i delta_{i-1} on the deconcatenation coalgebra."""
    if spec.kind != ASSOCIATIVE:
        raise AlgebraError("derived products need an associative algebra")
    parts = {i: m_operator(spec, deformation.delta(i - 1), i) for i in _arities(deformation)}
    return ShStructure(parts, Flavor.DECONCATENATION, max(parts), spec, deformation)


def derived_loday_brackets(spec: AlgebraSpec, deformation: Deformation) -> ShStructure:
    """partial_n = [[...[delta_{n-1} x_1, x_2], ...], x_n] on the dual-Loday coalgebra."""
    if spec.kind != LODAY_KIND:
        raise AlgebraError("derived Loday brackets need a Loday algebra")
    parts = {n: nested_operator(spec, deformation.delta(n - 1), n, name=f"l{n}")
             for n in _arities(deformation)}
    return ShStructure(parts, Flavor.DUAL_LODAY, max(parts), spec, deformation)


def unified_brackets(spec: AlgebraSpec, deformation: Deformation) -> ShStructure:
    """partial_k = N_k delta_{k-1} on the A-regularized mixed coalgebra."""
    if spec.kind != PAIR:
        raise AlgebraError("unified brackets need a Loday pair")
    parts = {k: n_operator(spec, deformation.delta(k - 1), k) for k in _arities(deformation)}
    return ShStructure(parts, Flavor.MIXED_REGULARIZED, max(parts), spec, deformation)


def structure_from_maps(maps, flavor) -> ShStructure:
    """Wrap an explicit family {arity: MultiMap} of degree-one maps."""
    return ShStructure(dict(maps), flavor, max(maps, default=0))


def sign_table_exponent(degrees) -> int:
    """Exponent of the sign relating the suspended operation to partial_k.

    For even k it is the sum of the degrees in odd (1-based) slots, for odd k
    the sum in even slots.
    """
    k = len(degrees)
    start = 0 if k % 2 == 0 else 1
    return sum(degrees[start::2])


def sign_table_value(degrees) -> int:
    return parity_sign(sign_table_exponent(degrees))
