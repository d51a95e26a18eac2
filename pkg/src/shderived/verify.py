"""Exhaustive exact checks of the homotopy identities on truncated instances.

Every check enumerates basis words up to a length cutoff.  Unless told
otherwise, words are also bounded by the truncation weight of the algebra:
for weight-graded algebras and weight-nondecreasing derivations every identity
checked here is a coderivation identity, hence decided by its corestriction,
which vanishes identically on heavier words.
"""
from __future__ import annotations

import itertools

from .algebra import ASSOCIATIVE, PAIR, AlgebraSpec, Derivation, restrict_deformation
from .coalgebra import Flavor, commutator, lift
from .derived import (ShStructure, adjoint, derived_loday_brackets, derived_products,
                      m_operator, n_operator)
from .graded import (ASSOC, LODAY, Elem, MultiMap, basis_words, koszul_sign,
                     linear_combination, parity_sign, permutation_koszul_sign, unshuffles)
from .report import VerificationReport


class PreconditionError(ValueError):
    pass


def structure_words(S: ShStructure, max_word_len, max_weight=None, basis=None, min_len=1):
    spec = S.spec
    basis = basis if basis is not None else spec.basis
    if max_weight is None and spec is not None:
        max_weight = spec.truncation_weight
    return basis_words(basis, max_word_len, max_weight=max_weight,
                       mixed=S.flavor.is_mixed, min_len=min_len)


def sh_relation(S: ShStructure, n, word) -> Elem:
    """The weight-n piece of partial o partial on one word.

    Summing partial_i partial_j over ordered pairs i + j = n + 1 gives the
    graded commutator sum, halved, since all parts are odd.
    """
    total = Elem.zero()
    for i in range(1, n + 1):
        j = n + 1 - i
        if i in S.parts and j in S.parts and i <= len(word) and j <= len(word):
            total = total + S.lifted(i).apply(S.lifted(j)(word))
    return total


def verify_sh(S: ShStructure, max_word_len, max_weight=None, words=None,
              max_piece=None) -> VerificationReport:
    """Check sum_{i+j=n+1} [partial_i, partial_j] = 0 for every graded piece n."""
    if max_word_len < 1:
        raise ValueError("max_word_len must be positive")
    top = min(2 * S.max_arity - 1, max_word_len)
    if max_piece is not None:
        top = min(top, max_piece)
    t_order = None
    if S.deformation is not None:
        t_order = S.deformation.checked_orders
    rep = VerificationReport(f"sh[{S.flavor.value}]",
                             cutoffs={"maxArity": S.max_arity, "maxWordLen": max_word_len,
                                      "maxPiece": top, "tOrder": t_order,
                                      "maxWeight": max_weight if max_weight is not None else
                                      (S.spec.truncation_weight if S.spec else None)})
    if words is None:
        words = structure_words(S, max_word_len, max_weight)
    for w in words:
        for n in range(1, min(top, len(w)) + 1):
            rep.record(w, sh_relation(S, n, w), Elem.zero(), label=f"piece {n}")
    return rep


def _lift_corestricted(outer: MultiMap, inner: MultiMap, word, flavor) -> Elem:
    """pi(outer^c o inner^c)(word) for a single pair of parts."""
    terms = []
    for w, c in lift(inner, flavor)(word).items():
        if len(w) == outer.arity:
            terms.append((c, outer(*w)))
    return linear_combination(terms)


def verify_regular_subrelation(S: ShStructure, max_word_len, max_weight=None,
                               words=None) -> VerificationReport:
    """Evaluate only the order-preserving insertions of the sh Loday relation.

    Those are the terms in which partial_j eats consecutive letters, so the
    subrelation has the shape of the sh associative relation.  The report fails
    wherever the subrelation does not vanish; the full relation is attached to
    each witness label for comparison.
    """
    if S.flavor is not Flavor.DUAL_LODAY:
        raise PreconditionError("the regular subrelation is defined for the dual-Loday flavor")
    rep = VerificationReport("regular-subrelation",
                             cutoffs={"maxArity": S.max_arity, "maxWordLen": max_word_len})
    if words is None:
        words = structure_words(S, max_word_len, max_weight)
    for w in words:
        n = len(w)
        regular, full = Elem.zero(), Elem.zero()
        for j in range(1, n + 1):
            i = n + 1 - j
            if i not in S.parts or j not in S.parts:
                continue
            regular = regular + _lift_corestricted(S.parts[i], S.parts[j], w,
                                                   Flavor.DECONCATENATION)
            full = full + _lift_corestricted(S.parts[i], S.parts[j], w, Flavor.DUAL_LODAY)
        rep.record(w, regular, Elem.zero(), label=f"full relation {full!r}")
    return rep


def _swap_witness(f: MultiMap, basis, max_weight):
    """First (word, position) where f is not graded-symmetric in adjacent slots."""
    for w in basis_words(basis, f.arity, max_weight=max_weight, min_len=f.arity):
        for p in range(f.arity - 1):
            x, y = w[p], w[p + 1]
            swapped = w[:p] + (y, x) + w[p + 2:]
            if f(*w) != f(*swapped) * parity_sign(x.degree * y.degree):
                return w, p
    return None


def check_symmetric(S: ShStructure, basis, max_weight=None) -> None:
    """Raise PreconditionError unless every part of arity >= 2 is graded-symmetric.

    On the unshifted side graded symmetry is the same as graded skew-symmetry
    of the corresponding operation on the suspension.
    """
    for k, f in sorted(S.parts.items()):
        if k < 2:
            continue
        bad = _swap_witness(f, basis, max_weight)
        if bad is not None:
            w, p = bad
            raise PreconditionError(
                f"part {k} is not graded-symmetric: slots {p + 1},{p + 2} of {w!r} "
                f"({w[p]!r}, {w[p + 1]!r})")


def linfty_relation(S: ShStructure, j, word) -> Elem:
    """sum over (j, n-j)-unshuffles tau of eps(tau) partial_i(partial_j(x_tau), rest)."""
    n = len(word)
    i = n + 1 - j
    if i not in S.parts or j not in S.parts:
        return Elem.zero()
    outer, inner = S.parts[i], S.parts[j]
    degs = [x.degree for x in word]
    terms = []
    for u in unshuffles(j, n - j):
        pos = u.positions
        first = tuple(word[t] for t in pos[:j])
        rest = tuple(word[t] for t in pos[j:])
        sign = permutation_koszul_sign(pos, degs)
        for w, c in inner(*first).items():
            terms.append((sign * c, outer(*(w + rest))))
    return linear_combination(terms)


def verify_linfty_reduction(S: ShStructure, max_word_len, basis=None, max_weight=None,
                            words=None) -> VerificationReport:
    """Compare the sh Loday relation with the L-infinity relation termwise.

    For graded-symmetric parts, the dual-Loday lift of partial_j followed by
    partial_i equals the sum over unshuffles of partial_i(partial_j(...), ...).
    """
    if S.flavor is not Flavor.DUAL_LODAY:
        raise PreconditionError("the L-infinity reduction needs the dual-Loday flavor")
    basis = basis if basis is not None else S.spec.basis
    if max_weight is None and S.spec is not None:
        max_weight = S.spec.truncation_weight
    check_symmetric(S, basis, max_weight)
    rep = VerificationReport("linfty-reduction",
                             cutoffs={"maxArity": S.max_arity, "maxWordLen": max_word_len})
    if words is None:
        words = basis_words(basis, max_word_len, max_weight=max_weight)
    for w in words:
        n = len(w)
        for j in range(1, n + 1):
            i = n + 1 - j
            if i not in S.parts or j not in S.parts:
                continue
            lhs = _lift_corestricted(S.parts[i], S.parts[j], w, Flavor.DUAL_LODAY)
            rep.record(w, lhs, linfty_relation(S, j, w), label=f"i={i} j={j}")
    return rep


def hochschild_b(spec: AlgebraSpec, delta1: Derivation, f: MultiMap) -> MultiMap:
    """b(f) = [M_2 delta_1, f] as a corestriction of arity f.arity + 1."""
    m2 = lift(m_operator(spec, delta1, 2), Flavor.DECONCATENATION)
    return commutator(m2, lift(f, Flavor.DECONCATENATION)).parts[f.arity + 1]


def verify_subcomplex(spec: AlgebraSpec, delta1: Derivation, D: Derivation, i,
                      max_weight=None) -> VerificationReport:
    """b(M_i D) = M_{i+1}[delta_1, D] and b(b(M_i D)) = 0 on all basis tuples.

    The first identity holds for any delta_1; the second needs delta_1^2 = 0
    and is skipped, with a note, otherwise.
    """
    if spec.kind != ASSOCIATIVE:
        raise PreconditionError("the Hochschild subcomplex lives on associative algebras")
    if max_weight is None:
        max_weight = spec.truncation_weight
    rep = VerificationReport("subcomplex", cutoffs={"maxArity": i + 2, "maxWordLen": i + 2})
    square_zero = True
    for b in spec.basis:
        if delta1.apply(delta1(b)):
            rep.notes.append(f"delta_1 is not square-zero at {b!r}; b^2 = 0 not checked")
            square_zero = False
            break
    mid = m_operator(spec, D, i)
    bf = hochschild_b(spec, delta1, mid)
    rhs = m_operator(spec, delta1.bracket(D), i + 1)
    for w in basis_words(spec.basis, i + 1, max_weight=max_weight, min_len=i + 1):
        rep.record(w, bf(*w), rhs(*w), label=f"b(M{i}D)")
    if not square_zero:
        return rep
    bbf = hochschild_b(spec, delta1, bf)
    for w in basis_words(spec.basis, i + 2, max_weight=max_weight, min_len=i + 2):
        rep.record(w, bbf(*w), Elem.zero(), label=f"b^2(M{i}D)")
    return rep


def _operator_words(spec, n, max_weight, max_x=None, max_a=None, need_a=False):
    mixed = spec.kind == PAIR
    for w in basis_words(spec.basis, n, max_weight=max_weight, mixed=mixed, min_len=n):
        if mixed:
            nx = sum(1 for o in w if o.component == LODAY)
            na = n - nx
            if (max_x is not None and nx > max_x) or (max_a is not None and na > max_a):
                continue
            if need_a and na == 0:
                continue
        yield w


def _adjoint_of_block(spec, D, xs):
    """ad(D x) for a nonempty block x, and D itself for the empty block."""
    if not xs:
        return D
    return adjoint(spec, spec.nested(D(xs[0]), xs[1:]))


def adjoint_expansion_side(spec: AlgebraSpec, D: Derivation, E: Derivation, xs, as_,
                           keep=None) -> Elem:
    """sum over unshuffles (x1, x2) of x of M_|a| [ad(D x1), ad(E x2)](a).

    Signs: the Koszul sign of the unshuffle and (-1)^{|E||x1|} for moving E
    past x1.  ``keep(len_x1, len_x2)`` restricts the splits.
    """
    degs = [x.degree for x in xs]
    total = Elem.zero()
    n = len(xs)
    for p in range(n + 1):
        for u in unshuffles(p, n - p):
            if keep is not None and not keep(p, n - p):
                continue
            pos = u.positions
            x1 = [xs[t] for t in pos[:p]]
            x2 = [xs[t] for t in pos[p:]]
            sign = permutation_koszul_sign(pos, degs) * \
                parity_sign(E.degree * sum(x.degree for x in x1))
            w = _adjoint_of_block(spec, D, x1).bracket(_adjoint_of_block(spec, E, x2))
            total = total + spec.nested(w(as_[0]), as_[1:]) * sign
    return total


def _pure_l(f: MultiMap) -> MultiMap:
    def fn(*letters):
        if any(o.component != LODAY for o in letters):
            return Elem.zero()
        return f(*letters)
    return MultiMap(f.arity, f.degree, fn=fn, name=f"{f.name}|L", signature="pair")


def pure_l_insertion_side(spec: AlgebraSpec, D: Derivation, E: Derivation, k, l,
                          word) -> Elem:
    """The part of [N_k D, N_l E] in which the inner operator eats L-letters only."""
    nk, nl = n_operator(spec, D, k), n_operator(spec, E, l)
    flavor = Flavor.MIXED_REGULARIZED
    sign = parity_sign(D.degree * E.degree)
    return _lift_corestricted(nk, _pure_l(nl), word, flavor) - \
        _lift_corestricted(nl, _pure_l(nk), word, flavor) * sign


def verify_operator_identity(spec: AlgebraSpec, D: Derivation, E: Derivation, k, l,
                             max_weight=None, max_x=None, max_a=None) -> VerificationReport:
    """[op_k D, op_l E] = op_{k+l-1}[D, E] on every basis tuple of length k+l-1.

    For associative algebras op is M; for Loday pairs op is N and the two
    intermediate identities through adjoint actions are checked as well.
    """
    if spec.kind not in (ASSOCIATIVE, PAIR):
        raise PreconditionError(f"no operator identity for {spec.kind} algebras")
    if max_weight is None:
        max_weight = spec.truncation_weight
    n = k + l - 1
    rep = VerificationReport("operator-identities",
                             cutoffs={"maxArity": n, "maxWordLen": n})
    if spec.kind == ASSOCIATIVE:
        flavor, op = Flavor.DECONCATENATION, m_operator
    else:
        flavor, op = Flavor.MIXED_REGULARIZED, n_operator
    lhs = commutator(lift(op(spec, D, k), flavor), lift(op(spec, E, l), flavor)).parts[n]
    rhs = op(spec, D.bracket(E), n)
    name = "M" if spec.kind == ASSOCIATIVE else "N"
    for w in _operator_words(spec, n, max_weight, max_x, max_a):
        rep.record(w, lhs(*w), rhs(*w), label=f"[{name}{k}D,{name}{l}D']")
    if spec.kind != PAIR:
        return rep
    for w in _operator_words(spec, n, max_weight, max_x, max_a, need_a=True):
        xs = [o for o in w if o.component == LODAY]
        as_ = [o for o in w if o.component == ASSOC]
        rep.record(w, lhs(*w), adjoint_expansion_side(spec, D, E, xs, as_),
                   label="adjoint expansion")
        rep.record(w, pure_l_insertion_side(spec, D, E, k, l, w),
                   adjoint_expansion_side(spec, D, E, xs, as_,
                                          keep=lambda p, q: p >= k or q >= l),
                   label="pure-L insertions")
    return rep


def verify_restrictions(S: ShStructure, max_word_len) -> VerificationReport:
    """Pure-L and pure-A inputs of the pair brackets against the derived
    Loday brackets of L and the derived products of A, termwise."""
    spec = S.spec
    if spec is None or spec.kind != PAIR or S.deformation is None:
        raise PreconditionError("restrictions need unified brackets of a Loday pair")
    rep = VerificationReport("pair-restrictions",
                             cutoffs={"maxArity": S.max_arity, "maxWordLen": max_word_len})
    for component, build in ((LODAY, derived_loday_brackets), (ASSOC, derived_products)):
        sub = spec.sub_algebra(component)
        own = build(sub, restrict_deformation(S.deformation, component))
        restricted = S.restricted(component)
        for w in basis_words(sub.basis, min(max_word_len, S.max_arity),
                             max_weight=sub.truncation_weight):
            k = len(w)
            rep.record(w, restricted.parts[k](*w), own.parts[k](*w),
                       label=f"{'L' if component == LODAY else 'A'} part {k}")
    return rep


def symmetrized(S: ShStructure) -> ShStructure:
    """Koszul symmetrization of every part, so the family is graded-symmetric."""
    def sym(f):
        def fn(*letters):
            degs = [x.degree for x in letters]
            terms = []
            for perm in itertools.permutations(range(len(letters))):
                terms.append((koszul_sign(perm, degs), f(*(letters[p] for p in perm))))
            return linear_combination(terms)
        return MultiMap(f.arity, f.degree, fn=fn, name=f"sym({f.name})")
    return ShStructure({k: sym(f) for k, f in S.parts.items()}, S.flavor, S.max_arity,
                       S.spec, S.deformation)
