"""Constructors for the bundled sample spec files.

The files under ``shderived/data`` are written by :func:`write_corpus`; the test
suite rebuilds them and compares byte for byte.
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .algebra import (Deformation, build_truncated_free, commutator_loday,
                      derivation_from_generators, inner_derivation, self_pair,
                      transport_to_pair, triangular_algebra)
from .gauge import GaugeGenerator
from .graded import Elem
from .specfile import serialize_parts

DATA_DIR = Path(__file__).parent / "data"


def _w(spec, name):
    return Elem.word(spec.by_name[name])


def odd_shift(spec):
    """The square-zero derivation g1 -> g2, g2 -> 0 of a free algebra on g1, g2."""
    return derivation_from_generators(spec, {"g1": _w(spec, "g2")}, 1, name="Q")


def free2(max_weight):
    return build_truncated_free([("g1", 0), ("g2", 1)], max_weight, name=f"free2w{max_weight}")


def tiny():
    """Smallest sample: free on g1, g2 up to weight 2, d = Q + tQ, h = t E1."""
    spec = free2(2)
    q = odd_shift(spec)
    euler = derivation_from_generators(spec, {"g1": _w(spec, "g1")}, 0, name="E1")
    return spec, Deformation([q, q]), GaugeGenerator([euler])


def truncfree2():
    """Free on g1, g2 up to weight 3 with d = Q + t[g1·g2 + g2·g1, -] + t^2 Q."""
    spec = free2(3)
    q = odd_shift(spec)
    xi = _w(spec, "g1·g2") + _w(spec, "g2·g1")
    ad = inner_derivation(spec, xi, name="ad")
    h1 = derivation_from_generators(spec, {"g1": _w(spec, "g1·g1"), "g2": _w(spec, "g1·g2")},
                                    0, name="h1")
    h2 = derivation_from_generators(spec, {"g1": _w(spec, "g1")}, 0, name="h2")
    return spec, Deformation([q, ad, q]), GaugeGenerator([h1, h2])


def loday2():
    """Commutator Loday algebra of the weight-3 free algebra, d = Q + 2tQ."""
    base = free2(3)
    q = odd_shift(base)
    return commutator_loday(base), Deformation([q, q.scaled(2)]), None


def pair2():
    """The pair (B, B) over the weight-3 free algebra, d = Q + t Q/2 transported."""
    base = free2(3)
    q = odd_shift(base)
    pair = self_pair(base)
    qp = transport_to_pair(pair, q)
    return pair, Deformation([qp, qp.scaled(Fraction(1, 2))]), None


def tri2():
    """Triangular 2x2 matrices with the inner deformation [e, -] + t[e, -]."""
    spec = triangular_algebra(1)
    ad = inner_derivation(spec, _w(spec, "e"), name="ad_e")
    h = inner_derivation(spec, _w(spec, "h"), name="ad_h")
    return spec, Deformation([ad, ad]), GaugeGenerator([h])


SAMPLES = {
    "tiny.alg": tiny,
    "truncfree2.alg": truncfree2,
    "loday2.alg": loday2,
    "pair2.alg": pair2,
    "tri2.alg": tri2,
}


def sample_text(name) -> str:
    spec, deformation, gauge = SAMPLES[name]()
    doc = (SAMPLES[name].__doc__ or "").strip().splitlines()[0]
    gens = _file_generators(spec)
    return serialize_parts(spec, gens, spec.truncation_weight, deformation, gauge,
                           header=[doc])


def _file_generators(spec):
    if hasattr(spec, "underlying"):
        to_l, to_a = spec.to_l, spec.to_a
        gens = spec.underlying.generators
        return [to_l[g] for g in gens] + [to_a[g] for g in gens]
    return list(spec.generators)


def sample_path(name) -> Path:
    return DATA_DIR / name


def write_corpus(directory=DATA_DIR):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name in SAMPLES:
        (directory / name).write_text(sample_text(name), encoding="utf-8")
