"""Reading and writing algebra spec files.

A spec file is line-oriented UTF-8 text::

    # comments run to the end of the line
    [options]
    kind = associative          # associative | loday | pair
    max-weight = 3              # basis = words in the generators up to this length

    [generators]
    g1 : 0                      # name : degree  (pairs: name : degree : L|A)
    g2 : 1

    [product]
    g1 * g2 = 1 g1·g2

    [deformation]
    d0(g1) = 1 g2
    d1(g1·g1) = 1/2 g2·g1 + -1/2 g1·g2

    [gauge]
    h1(g1) = 1 g1

Brackets and the pair action are written ``[x, y] = ...`` in ``[bracket]`` and
``[pair-action]``.  Table entries that are not listed are zero; derivation
tables are complete, nothing is extended by the Leibniz rule.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (ASSOCIATIVE, KINDS, LODAY_KIND, PAIR, AlgebraSpec, Deformation,
                      Derivation, check_axioms, check_deformation, check_leibniz, table_map)
from .gauge import GaugeGenerator
from .graded import ASSOC, LODAY, PLAIN, BasisSymbol, Elem, MultiMap
from .report import VerificationReport

SECTIONS = ("options", "generators", "product", "bracket", "pair-action", "deformation",
            "gauge")
ROLE_OF_SECTION = {"product": "product", "bracket": "bracket", "pair-action": "action"}
SECTION_OF_ROLE = {v: k for k, v in ROLE_OF_SECTION.items()}

_NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_NAME_RE = re.compile(_NAME + r"\Z")
_WORD_RE = re.compile(_NAME + r"(?:·" + _NAME + r")*")
_COEFF_RE = re.compile(r"\d+(?:/\d+)?")
_MAP_RE = re.compile(r"([dh])(\d+)\(")


class SpecError(ValueError):
    """A syntax or consistency problem at a given line and column (1-based)."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass
class SpecFile:
    spec: AlgebraSpec
    generators: list
    max_weight: int = None
    deformation: Deformation = None
    gauge: GaugeGenerator = None
    path: str = None
    tables: dict = field(default_factory=dict)
    validation: list = field(default_factory=list)

    @property
    def kind(self):
        return self.spec.kind

    @property
    def valid(self):
        return all(r.passed for r in self.validation)

    def derivations(self):
        """Every derivation named in the file, deformation first."""
        out = []
        if self.deformation is not None:
            out.extend(self.deformation.deltas)
        if self.gauge is not None:
            out.extend(self.gauge.hs)
        return out

    def canonical(self):
        """Canonical text; two parsed files are equal iff these agree."""
        return serialize(self)


# ---------------------------------------------------------------------------
# parsing


class _Line:
    __slots__ = ("no", "text", "offset")

    def __init__(self, no, text, offset):
        self.no, self.text, self.offset = no, text, offset

    def error(self, message, pos=0):
        return SpecError(message, self.no, self.offset + pos + 1)


def _split_lines(text):
    """Yield (section, _Line) pairs, comments and blanks removed."""
    section = None
    seen = set()
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        offset = len(body) - len(body.lstrip())
        line = _Line(no, stripped, offset)
        if stripped.startswith("[") and stripped.endswith("]") and "=" not in stripped:
            name = stripped[1:-1].strip()
            if name not in SECTIONS:
                raise line.error(f"unknown section [{name}]")
            if name in seen:
                raise line.error(f"section [{name}] appears twice")
            seen.add(name)
            section = name
            continue
        if section is None:
            raise line.error("content before the first section header")
        out.append((section, line))
    return out


def _parse_options(lines):
    opts = {"kind": ASSOCIATIVE, "max-weight": None}
    for line in lines:
        raw_key, eq, raw = line.text.partition("=")
        if not eq:
            raise line.error("expected 'key = value'")
        key, value = raw_key.strip(), raw.strip()
        vpos = len(raw_key) + 1 + len(raw) - len(raw.lstrip())
        if key == "kind":
            if value not in KINDS:
                raise line.error(f"unknown kind {value!r}; expected one of {', '.join(KINDS)}",
                                 vpos)
            opts["kind"] = value
        elif key == "max-weight":
            if not value.isdigit() or int(value) < 1:
                raise line.error(f"max-weight must be a positive integer, got {value!r}", vpos)
            opts["max-weight"] = int(value)
        else:
            raise line.error(f"unknown option {key!r}")
    return opts


def _parse_generators(lines, kind):
    gens = []
    names = set()
    for line in lines:
        fields = [f.strip() for f in line.text.split(":")]
        if len(fields) not in (2, 3):
            raise line.error("expected 'name : degree' or 'name : degree : L|A'")
        name, deg = fields[0], fields[1]
        if not _NAME_RE.match(name):
            raise line.error(f"bad generator name {name!r}")
        if name in names:
            raise line.error(f"generator {name!r} declared twice")
        if not re.fullmatch(r"-?\d+", deg):
            raise line.error(f"bad degree {deg!r}", line.text.index(":") + 1)
        component = PLAIN
        if len(fields) == 3:
            if kind != PAIR:
                raise line.error("components L/A are only allowed for kind = pair",
                                 line.text.rindex(":") + 1)
            if fields[2] not in ("L", "A"):
                raise line.error(f"component must be L or A, got {fields[2]!r}",
                                 line.text.rindex(":") + 1)
            component = LODAY if fields[2] == "L" else ASSOC
        elif kind == PAIR:
            raise line.error("pair generators need a component ': L' or ': A'")
        names.add(name)
        gens.append(BasisSymbol(name, int(deg), component))
    return gens


def build_basis(generators, max_weight):
    """Words in the generators of each component, shortest first."""
    if max_weight is None:
        return list(generators)
    basis = []
    for component in (PLAIN, LODAY, ASSOC):
        pool = [g for g in generators if g.component == component]
        for n in range(1, max_weight + 1):
            for w in itertools.product(pool, repeat=n):
                basis.append(BasisSymbol("·".join(g.name for g in w),
                                         sum(g.degree for g in w), component, n))
    return basis


class _Cursor:
    def __init__(self, line: _Line, pos=0):
        self.line, self.pos = line, pos

    @property
    def rest(self):
        return self.line.text[self.pos:]

    def skip(self):
        while self.pos < len(self.line.text) and self.line.text[self.pos] == " ":
            self.pos += 1

    def expect(self, token):
        self.skip()
        if not self.rest.startswith(token):
            raise self.line.error(f"expected {token!r}", self.pos)
        self.pos += len(token)

    def match(self, regex):
        self.skip()
        m = regex.match(self.line.text, self.pos)
        if m:
            self.pos = m.end()
        return m

    def at_end(self):
        self.skip()
        return self.pos >= len(self.line.text)


def _symbol(cur: _Cursor, by_name, what="basis element"):
    cur.skip()
    start = cur.pos
    m = cur.match(_WORD_RE)
    if not m:
        raise cur.line.error(f"expected a {what}", start)
    sym = by_name.get(m.group(0))
    if sym is None:
        raise cur.line.error(f"unknown basis name {m.group(0)!r}", start)
    return sym, start


def _parse_rhs(cur: _Cursor, by_name) -> Elem:
    cur.skip()
    if cur.rest.strip() == "0":
        return Elem.zero()
    terms = {}
    first = True
    while True:
        cur.skip()
        sign = 1
        if cur.rest.startswith("+"):
            if first:
                raise cur.line.error("unexpected '+'", cur.pos)
            cur.pos += 1
        elif cur.rest.startswith("-"):
            sign = -1
            cur.pos += 1
        elif not first:
            raise cur.line.error("expected '+' or '-' between terms", cur.pos)
        cur.skip()
        if cur.rest.startswith("-"):
            sign = -sign
            cur.pos += 1
        m = cur.match(_COEFF_RE)
        if m and re.search(r"/0+\Z", m.group(0)):
            raise cur.line.error("zero denominator", cur.pos - len(m.group(0)))
        coeff = Fraction(m.group(0)) if m else Fraction(1)
        sym, start = _symbol(cur, by_name)
        key = (sym,)
        terms[key] = terms.get(key, 0) + sign * coeff
        first = False
        if cur.at_end():
            break
    return Elem({k: v for k, v in terms.items() if v})


def _check_degree(line, value: Elem, expected, pos):
    for w, _ in value.items():
        if w[0].degree != expected:
            raise line.error(f"degree mismatch: {w[0]!r} has degree {w[0].degree}, "
                             f"expected {expected}", pos)


def _parse_table(section, lines, by_name, kind):
    table = {}
    for line in lines:
        cur = _Cursor(line)
        if section == "product":
            x, px = _symbol(cur, by_name)
            cur.expect("*")
            y, py = _symbol(cur, by_name)
        else:
            cur.expect("[")
            x, px = _symbol(cur, by_name)
            cur.expect(",")
            y, py = _symbol(cur, by_name)
            cur.expect("]")
        cur.expect("=")
        eq_pos = cur.pos
        value = _parse_rhs(cur, by_name)
        _check_components(line, section, kind, x, y, value, px, py, eq_pos)
        _check_degree(line, value, x.degree + y.degree, eq_pos)
        if (x, y) in table:
            raise line.error(f"entry for ({x!r}, {y!r}) given twice")
        table[(x, y)] = value
    return table


def _check_components(line, section, kind, x, y, value, px, py, eq_pos):
    if kind != PAIR:
        if section != {ASSOCIATIVE: "product", LODAY_KIND: "bracket"}[kind]:
            raise line.error(f"section [{section}] does not apply to kind = {kind}")
        return
    want = {"bracket": (LODAY, LODAY, LODAY), "pair-action": (LODAY, ASSOC, ASSOC),
            "product": (ASSOC, ASSOC, ASSOC)}[section]
    if x.component != want[0]:
        raise line.error(f"{x!r} is not in {want[0]}", px)
    if y.component != want[1]:
        raise line.error(f"{y!r} is not in {want[1]}", py)
    for w, _ in value.items():
        if w[0].component != want[2]:
            raise line.error(f"{w[0]!r} is not in {want[2]}", eq_pos)


def _parse_maps(section, lines, by_name):
    letter = "d" if section == "deformation" else "h"
    degree = 1 if section == "deformation" else 0
    tables = {}
    for line in lines:
        cur = _Cursor(line)
        cur.skip()
        m = _MAP_RE.match(line.text, cur.pos)
        if not m or m.group(1) != letter:
            raise line.error(f"expected '{letter}<index>(<basis element>) = ...'", cur.pos)
        index = int(m.group(2))
        if section == "gauge" and index < 1:
            raise line.error("gauge terms start at h1", cur.pos)
        cur.pos = m.end()
        x, px = _symbol(cur, by_name)
        cur.expect(")")
        cur.expect("=")
        eq_pos = cur.pos
        value = _parse_rhs(cur, by_name)
        _check_degree(line, value, x.degree + degree, eq_pos)
        for w, _ in value.items():
            if w[0].component != x.component:
                raise line.error(f"{w[0]!r} and {x!r} lie in different components", eq_pos)
        t = tables.setdefault(index, {})
        if x in t:
            raise line.error(f"{letter}{index}({x!r}) given twice")
        t[x] = value
    return tables


def _derivation(table, degree, name):
    t = dict(table)
    return Derivation(MultiMap(1, degree, fn=lambda b: t.get(b, Elem.zero()), name=name),
                      name=name)


def parse_spec(text, path=None, validate=True) -> SpecFile:
    """Parse and validate a spec file; syntax problems raise SpecError."""
    lines = _split_lines(text)
    if not lines:
        raise SpecError("empty file: no sections with content", 1, 1)
    by_section = {s: [] for s in SECTIONS}
    for section, line in lines:
        by_section[section].append(line)
    opts = _parse_options(by_section["options"])
    if not by_section["generators"]:
        raise SpecError("no [generators] given", lines[0][1].no, 1)
    kind, max_weight = opts["kind"], opts["max-weight"]
    gens = _parse_generators(by_section["generators"], kind)
    basis = build_basis(gens, max_weight)
    by_name = {b.name: b for b in basis}
    tables = {}
    for section in ("product", "bracket", "pair-action"):
        if by_section[section]:
            tables[ROLE_OF_SECTION[section]] = _parse_table(section, by_section[section],
                                                            by_name, kind)
    required = {ASSOCIATIVE: ("product",), LODAY_KIND: ("bracket",),
                PAIR: ("bracket", "action", "product")}[kind]
    for role in required:
        tables.setdefault(role, {})
    spec = AlgebraSpec(basis, kind, {r: table_map(t, r) for r, t in tables.items()},
                       max_weight, name=path or "", validate=False)
    spec.generators = tuple(gens)
    out = SpecFile(spec, gens, max_weight, path=path, tables=tables)
    d_tables = _parse_maps("deformation", by_section["deformation"], by_name)
    if d_tables:
        top = max(d_tables)
        out.deformation = Deformation([_derivation(d_tables.get(i, {}), 1, f"d{i}")
                                       for i in range(top + 1)])
    h_tables = _parse_maps("gauge", by_section["gauge"], by_name)
    if h_tables:
        top = max(h_tables)
        out.gauge = GaugeGenerator([_derivation(h_tables.get(i, {}), 0, f"h{i}")
                                    for i in range(1, top + 1)])
    if validate:
        out.validation = validate_spec(out)
    return out


def validate_spec(sf: SpecFile):
    """Axioms, deformation square-zero and gauge Leibniz reports."""
    reports = []
    axioms = check_axioms(sf.spec)
    axioms.suite = "axioms"
    reports.append(axioms)
    if sf.deformation is not None:
        reports.append(check_deformation(sf.spec, sf.deformation))
    if sf.gauge is not None:
        rep = VerificationReport("gauge-generator")
        for i, h in enumerate(sf.gauge.hs, start=1):
            rep.merge(check_leibniz(sf.spec, h), prefix=f"h{i} ")
        reports.append(rep)
    return reports


def read_spec(path, validate=True) -> SpecFile:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_spec(text, path=str(path), validate=validate)


# ---------------------------------------------------------------------------
# writing


def format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_elem(e: Elem) -> str:
    if not e:
        return "0"
    parts = []
    for w, c in e.items():
        if len(w) != 1:
            raise ValueError(f"cannot write the tensor word {w!r}")
        parts.append(f"{format_coeff(c)} {w[0].name}")
    return " + ".join(parts)


def _kind_roles(kind):
    return {ASSOCIATIVE: ("product",), LODAY_KIND: ("bracket",),
            PAIR: ("bracket", "action", "product")}[kind]


def _role_pairs(spec, role):
    if spec.kind != PAIR:
        return itertools.product(spec.basis, spec.basis)
    left = spec.a_basis if role == "product" else spec.l_basis
    right = spec.l_basis if role == "bracket" else spec.a_basis
    return itertools.product(left, right)


def serialize_parts(spec: AlgebraSpec, generators, max_weight=None, deformation=None,
                    gauge=None, header=None) -> str:
    """Write a spec file with complete tables for the given objects."""
    out = []
    if header:
        out.extend(f"# {h}" for h in header)
    out.append("[options]")
    out.append(f"kind = {spec.kind}")
    if max_weight is not None:
        out.append(f"max-weight = {max_weight}")
    out.append("")
    out.append("[generators]")
    for g in generators:
        comp = {PLAIN: "", LODAY: " : L", ASSOC: " : A"}[g.component]
        out.append(f"{g.name} : {g.degree}{comp}")
    for role in _kind_roles(spec.kind):
        out.append("")
        out.append(f"[{SECTION_OF_ROLE[role]}]")
        prod = spec.products[role]
        for x, y in _role_pairs(spec, role):
            v = prod(x, y)
            if v:
                lhs = f"{x.name} * {y.name}" if role == "product" else f"[{x.name}, {y.name}]"
                out.append(f"{lhs} = {format_elem(v)}")
    if deformation is not None:
        out.append("")
        out.append("[deformation]")
        for i, d in enumerate(deformation.deltas):
            for b in spec.basis:
                v = d(b)
                if v:
                    out.append(f"d{i}({b.name}) = {format_elem(v)}")
    if gauge is not None:
        out.append("")
        out.append("[gauge]")
        for i, h in enumerate(gauge.hs, start=1):
            for b in spec.basis:
                v = h(b)
                if v:
                    out.append(f"h{i}({b.name}) = {format_elem(v)}")
    return "\n".join(out) + "\n"


def serialize(sf: SpecFile) -> str:
    return serialize_parts(sf.spec, sf.generators, sf.max_weight, sf.deformation, sf.gauge)
