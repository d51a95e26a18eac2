"""Command line entry point: ``shderived verify --input FILE --suite NAME``.

Exit codes: 0 when every selected suite passes, 1 when a suite (or input
validation) fails, 2 for usage, syntax and resource-bound errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .algebra import (ASSOCIATIVE, LODAY_KIND, PAIR, Deformation, DerivationError,
                      commutator_loday, self_pair, transport_to_pair)
from .derived import derived_loday_brackets, derived_products, unified_brackets
from .gauge import build_Mh, exp_coderivation, gauge_transform, verify_gauge
from .graded import Elem, basis_words
from .report import VerificationReport
from .specfile import SpecError, parse_spec, serialize
from .verify import (verify_linfty_reduction, verify_operator_identity, verify_restrictions,
                     verify_sh, verify_subcomplex, symmetrized)

SUITES = ("a-infinity", "sh-loday", "loday-pair", "operator-identities", "subcomplex",
          "gauge", "linfty")

# resource bounds; larger requests are refused with exit status 2
MAX_WORD_LEN = 8
MAX_ARITY = 8
MAX_T_ORDER = 8
MAX_WORDS = 200_000


class UsageError(Exception):
    pass


class Options:
    def __init__(self, max_arity=5, max_word_len=6, t_order=3):
        self.max_arity = max_arity
        self.max_word_len = max_word_len
        self.t_order = t_order


# ---------------------------------------------------------------------------
# suite runners


def _need_deformation(sf):
    return None if sf.deformation is not None else "no [deformation] section"


def _loday_side(sf):
    if sf.kind == LODAY_KIND:
        return sf.spec
    return commutator_loday(sf.spec)


def _pair_side(sf):
    if sf.kind == PAIR:
        return sf.spec, sf.deformation
    pair = self_pair(sf.spec)
    deltas = [transport_to_pair(pair, d) for d in sf.deformation.deltas]
    return pair, Deformation(deltas, sf.deformation.t_order)


def run_a_infinity(sf, opt):
    S = derived_products(sf.spec, sf.deformation)
    rep = verify_sh(S, opt.max_word_len, max_piece=opt.max_arity)
    rep.suite = "a-infinity"
    return rep


def run_sh_loday(sf, opt):
    S = derived_loday_brackets(_loday_side(sf), sf.deformation)
    rep = verify_sh(S, opt.max_word_len, max_piece=opt.max_arity)
    rep.suite = "sh-loday"
    return rep


def run_loday_pair(sf, opt):
    pair, deformation = _pair_side(sf)
    S = unified_brackets(pair, deformation)
    rep = verify_sh(S, opt.max_word_len, max_piece=opt.max_arity)
    rep.suite = "loday-pair"
    rep.merge(verify_restrictions(S, opt.max_word_len))
    return rep


def _operator_range(opt):
    top = min(3, opt.max_arity)
    return [(k, l) for k in range(1, top + 1) for l in range(1, top + 1)
            if k + l - 1 <= opt.max_word_len]


def run_operator_identities(sf, opt):
    rep = VerificationReport("operator-identities")
    ders = sf.derivations()
    ranges = _operator_range(opt)
    for a, D in enumerate(ders):
        for E in ders[a:]:
            for k, l in ranges:
                r = verify_operator_identity(sf.spec, D, E, k, l, max_x=3, max_a=2)
                rep.merge(r, prefix=f"{D.name},{E.name} k={k} l={l} ")
    rep.cutoffs = {"maxArity": min(3, opt.max_arity), "maxWordLen": opt.max_word_len,
                   "derivations": len(ders)}
    return rep


def run_subcomplex(sf, opt):
    delta1 = sf.deformation.delta(1)
    if not any(delta1(b) for b in sf.spec.basis):
        delta1 = sf.deformation.delta(0)
    rep = VerificationReport("subcomplex")
    top = max(1, min(opt.max_arity, opt.max_word_len) - 2)
    for D in sf.derivations():
        for i in range(1, top + 1):
            rep.merge(verify_subcomplex(sf.spec, delta1, D, i), prefix=f"{D.name} i={i} ")
    rep.cutoffs = {"maxArity": top + 2, "maxWordLen": top + 2, "delta1": delta1.name}
    return rep


def run_gauge(sf, opt):
    word_len = min(opt.max_word_len, opt.t_order + 1)
    try:
        transformed = gauge_transform(sf.deformation, sf.gauge, opt.t_order, spec=sf.spec)
    except DerivationError as exc:
        rep = VerificationReport("gauge", cutoffs={"tOrder": opt.t_order})
        rep.merge(exc.report, prefix="transformed deformation ")
        return rep
    S = derived_products(sf.spec, sf.deformation)
    S2 = derived_products(sf.spec, transformed)
    Mh = build_Mh(sf.spec, sf.gauge)
    E = exp_coderivation(Mh, word_len, t_order=opt.t_order)
    rep = verify_gauge(S, S2, E, word_len)
    inverse = exp_coderivation(Mh, word_len, scale=-1).compose(E)
    for w in basis_words(sf.spec.basis, word_len, max_weight=sf.spec.truncation_weight):
        rep.record(w, inverse(w), Elem.word(*w), label="exp(-Mh) exp(Mh) = 1")
    rep.cutoffs["tOrder"] = opt.t_order
    return rep


def run_linfty(sf, opt):
    S = symmetrized(derived_loday_brackets(_loday_side(sf), sf.deformation))
    rep = verify_linfty_reduction(S, min(opt.max_word_len, 2 * S.max_arity - 1))
    rep.suite = "linfty"
    return rep


def _applicable(name, sf):
    """None if the suite applies to the file, otherwise the reason it does not."""
    kind = sf.kind
    if name in ("a-infinity", "subcomplex", "gauge") and kind != ASSOCIATIVE:
        return f"needs kind = associative, file has kind = {kind}"
    if name in ("sh-loday", "linfty") and kind == PAIR:
        return "needs an associative or Loday algebra"
    if name == "loday-pair" and kind == LODAY_KIND:
        return "needs a pair or an associative algebra to build one from"
    if name == "operator-identities":
        if kind == LODAY_KIND:
            return "operator identities are checked for associative algebras and pairs"
        if not sf.derivations():
            return "no derivations in the file"
        return None
    if name == "gauge" and sf.gauge is None:
        return "no [gauge] section"
    return _need_deformation(sf)


RUNNERS = {
    "a-infinity": run_a_infinity,
    "sh-loday": run_sh_loday,
    "loday-pair": run_loday_pair,
    "operator-identities": run_operator_identities,
    "subcomplex": run_subcomplex,
    "gauge": run_gauge,
    "linfty": run_linfty,
}


def _run_one(args):
    text, path, name, opt = args
    sf = parse_spec(text, path=path, validate=False)
    return RUNNERS[name](sf, opt).as_dict()


# ---------------------------------------------------------------------------
# orchestration


def count_words(basis, max_len, max_weight):
    """Number of words basis_words would produce, by dynamic programming on weight."""
    weights = [b.weight for b in basis]
    if max_weight is None:
        return sum(len(weights) ** n for n in range(1, max_len + 1))
    ways = {0: 1}
    total = 0
    for _ in range(max_len):
        nxt = {}
        for w, c in ways.items():
            for b in weights:
                if w + b <= max_weight:
                    nxt[w + b] = nxt.get(w + b, 0) + c
        ways = nxt
        total += sum(ways.values())
    return total


def check_bounds(sf, opt):
    if not 1 <= opt.max_word_len <= MAX_WORD_LEN:
        raise UsageError(f"--max-word-len must lie in 1..{MAX_WORD_LEN}")
    if not 1 <= opt.max_arity <= MAX_ARITY:
        raise UsageError(f"--max-arity must lie in 1..{MAX_ARITY}")
    if not 0 <= opt.t_order <= MAX_T_ORDER:
        raise UsageError(f"--t-order must lie in 0..{MAX_T_ORDER}")
    n = count_words(sf.spec.basis, opt.max_word_len, sf.spec.truncation_weight)
    if n > MAX_WORDS:
        raise UsageError(f"{n} basis words up to length {opt.max_word_len} exceed the "
                         f"bound of {MAX_WORDS}; lower --max-word-len")


def select_suites(requested, sf):
    """Suites to run and notes on skipped ones; explicit inapplicable requests fail."""
    if "all" in requested:
        chosen, skipped = [], []
        for name in SUITES:
            reason = _applicable(name, sf)
            if reason is None:
                chosen.append(name)
            else:
                skipped.append(f"{name} skipped: {reason}")
        return chosen, skipped
    chosen = []
    for name in requested:
        reason = _applicable(name, sf)
        if reason is not None:
            raise UsageError(f"suite {name} does not apply: {reason}")
        if name not in chosen:
            chosen.append(name)
    return chosen, []


def verify_text(text, path, suites, opt, jobs=1):
    """Parse, validate and run; returns (exit status, report document)."""
    sf = parse_spec(text, path=path)
    check_bounds(sf, opt)
    chosen, skipped = select_suites(suites, sf)
    reports = [r.as_dict() for r in sf.validation]
    if sf.valid:
        work = [(text, path, name, opt) for name in chosen]
        if jobs > 1 and len(work) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                reports.extend(pool.map(_run_one, work))
        else:
            reports.extend(_run_one(w) for w in work)
    else:
        skipped = ["input validation failed; no suite was run"] + skipped
    status = "pass" if all(r["status"] == "pass" for r in reports) else "fail"
    doc = {"input": path, "status": status, "suites": reports, "skipped": skipped,
           "options": {"maxArity": opt.max_arity, "maxWordLen": opt.max_word_len,
                       "tOrder": opt.t_order}}
    return (0 if status == "pass" else 1), doc


def format_text(doc):
    lines = [f"input: {doc['input']}"]
    for r in doc["suites"]:
        cut = ", ".join(f"{k}={v}" for k, v in r["cutoffs"].items())
        lines.append(f"[{r['status'].upper()}] {r['suite']}: {r['checks']} checks"
                     + (f" ({cut})" if cut else ""))
        for w in r["witnesses"]:
            lines.append(f"  witness {w['label']} on ({', '.join(w['input'])}):")
            lines.append(f"    lhs = {_format_side(w['lhs'])}")
            lines.append(f"    rhs = {_format_side(w['rhs'])}")
        if r["failures"] > len(r["witnesses"]):
            lines.append(f"  ... {r['failures'] - len(r['witnesses'])} more failures")
        for n in r["notes"]:
            lines.append(f"  note: {n}")
    for s in doc["skipped"]:
        lines.append(f"skipped: {s}")
    lines.append(f"status: {doc['status']}")
    return "\n".join(lines) + "\n"


def _format_side(terms):
    if not terms:
        return "0"
    return " + ".join(f"{c} " + "·".join(w) if len(w) == 1 else f"{c} ({', '.join(w)})"
                      for c, w in terms)


def format_json(doc):
    return json.dumps(doc, indent=2) + "\n"


def build_parser():
    p = argparse.ArgumentParser(prog="shderived",
                                description="Exact checks of derived sh structures.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run verification suites on a spec file")
    v.add_argument("--input", required=True, metavar="PATH")
    v.add_argument("--suite", action="append", choices=SUITES + ("all",),
                   help="suite to run; repeatable (default: all)")
    v.add_argument("--max-arity", type=int, default=5, metavar="N")
    v.add_argument("--max-word-len", type=int, default=6, metavar="W")
    v.add_argument("--t-order", type=int, default=3, metavar="T")
    v.add_argument("--report", choices=("text", "json-like", "json"), default="text")
    v.add_argument("--jobs", type=int, default=1, metavar="K")
    f = sub.add_parser("format", help="print the canonical form of a spec file")
    f.add_argument("--input", required=True, metavar="PATH")
    return p


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise UsageError(f"{path} is not UTF-8 text") from exc


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        text = _read(args.input)
        if args.command == "format":
            out.write(serialize(parse_spec(text, path=args.input, validate=False)))
            return 0
        if args.jobs < 1:
            raise UsageError("--jobs must be positive")
        opt = Options(args.max_arity, args.max_word_len, args.t_order)
        status, doc = verify_text(text, args.input, args.suite or ["all"], opt, args.jobs)
    except SpecError as exc:
        print(f"{args.input}: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"shderived: {exc}", file=sys.stderr)
        return 2
    out.write(format_json(doc) if args.report in ("json", "json-like") else format_text(doc))
    return status


if __name__ == "__main__":
    sys.exit(main())
