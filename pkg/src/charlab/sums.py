"""Built-in exponential sum families with declared weights.

The global additive character is psi(x) = exp(2 pi i * lift(Tr(x)) / p) with
the absolute trace down to the prime field; it is fixed once per field.
Hyper-Kloosterman and hypergeometric values are sums over the fibers of the
product map on G_m^r, computable both by direct summation (the reference,
Kahan in canonical order) and as iterated multiplicative convolutions of
twisted psi-functions; the two routes agree to 1e-9 and are tested so.

Weight-zero normalization multiplies a raw family by -q^{-n w / 2}; under it
the generic Mellin modulus is exactly 1 for the Gauss (w = 1) and
Kloosterman-Mellin (w = 2) families.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .chars import Character, character_from_phases, dual_group, structure
from .errors import LevelMismatch, UnknownWeight
from .fields import FieldDesc, engine
from .groups import Ga, Gm, Point, enumerate_points
from .transform import TraceFunction, convolve, dft, kahan_sum, twist


@functools.lru_cache(maxsize=None)
def _psi_tables(F: FieldDesc):
    """Per-element additive phase lift Tr(x) in [0, p) and its complex value."""
    import cmath

    e = engine(F)
    p = F.p
    roots = [cmath.exp(2j * cmath.pi * t / p) for t in range(p)]
    lifts = [e.trace(v, 1) for v in range(F.order)]
    return lifts, [roots[t] for t in lifts]


def psi_value(F: FieldDesc, v: int) -> complex:
    return _psi_tables(F)[1][v]


def standard_additive_character(model: Ga, n: int) -> Character:
    """The fixed faithful additive character on Ga(k_n)."""
    if model.d != 1:
        raise ValueError("the standard character lives on the one-dimensional Ga")
    A = structure(model, n)
    F = model.point_field(n)
    lifts, _ = _psi_tables(F)
    return character_from_phases(
        A, [Fraction(lifts[g.coords[0]], F.p) for g in A.generators]
    )


def gauss_sum(chi: Character, psi: Character) -> complex:
    """g(chi) = sum over units of chi(x) psi(x)."""
    A = chi.structure
    if not isinstance(A.model, Gm) or A.model.d != 1:
        raise LevelMismatch("gauss_sum needs a character of one-dimensional Gm")
    ga = psi.structure.model
    if psi.level != chi.level:
        raise LevelMismatch("character levels differ")
    n = chi.level
    return kahan_sum(
        chi.value(x) * psi.value(Point(ga, n, x.coords)) for x in A.points
    )


def gauss_function(model: Gm, n: int) -> TraceFunction:
    """Raw Gauss family member: psi restricted to the units (weight 1)."""
    A = structure(model, n)
    F = model.point_field(n)
    _, vals = _psi_tables(F)
    return TraceFunction(A, {p.coords: vals[p.coords[0]] for p in A.points}, weight=1)


def kloosterman(model: Gm, n: int, a: int, r: int = 2) -> complex:
    """Kl_r(a) = sum over x_1 ... x_r = a of psi(x_1 + ... + x_r), reference path."""
    F = model.point_field(n)
    e = engine(F)
    _, vals = _psi_tables(F)
    if a == 0 or not (0 < a < F.order):
        raise ValueError("a must be a unit")
    if r == 2:
        return kahan_sum(
            vals[e.add(x, e.mul(a, e.inv(x)))] for x in range(1, F.order)
        )
    terms = []
    for free in _product_fibers(e, F.order, a, r):
        terms.append(vals[free])
    return kahan_sum(terms)


def _product_fibers(e, q, a, r):
    """psi-arguments x_1 + ... + x_r over the fiber x_1 ... x_r = a, lex order."""
    import itertools

    for xs in itertools.product(range(1, q), repeat=r - 1):
        prod = 1
        s = 0
        for x in xs:
            prod = e.mul(prod, x)
            s = e.add(s, x)
        last = e.mul(a, e.inv(prod))
        yield e.add(s, last)


def kloosterman_function(model: Gm, n: int, r: int = 2, method: str = "auto") -> TraceFunction:
    """Kl_r at every unit; fft method convolves in discrete-log coordinates."""
    A = structure(model, n)
    F = model.point_field(n)
    q1 = F.order - 1
    if method == "auto":
        method = "fft" if q1 * q1 > 10**5 or r > 3 else "direct"
    if method == "direct":
        vals = {p.coords: kloosterman(model, n, p.coords[0], r) for p in A.points}
        return TraceFunction(A, vals, weight=r - 1)
    e = engine(F)
    _, psi = _psi_tables(F)
    g = e.generator()
    powers = [1] * q1
    for i in range(1, q1):
        powers[i] = e.mul(powers[i - 1], g)
    arr = np.array([psi[v] for v in powers])
    spec = np.fft.fft(arr)
    kl = np.fft.ifft(spec**r)
    vals = {(powers[i],): complex(kl[i]) for i in range(q1)}
    return TraceFunction(A, vals, weight=r - 1)


def kloosterman_mellin_function(model: Gm, n: int) -> TraceFunction:
    """Raw Kl_2 family (weight 2 under Mellin: its transform is g(chi)^2)."""
    f = kloosterman_function(model, n, 2)
    return TraceFunction(f.structure, f.values, weight=2)


def hypergeometric(model: Gm, n: int, chis, a: int) -> complex:
    """Hyp(a) = sum over x_1 ... x_r = a of prod chi_i(x_i) psi(sum x_i)."""
    import itertools

    F = model.point_field(n)
    e = engine(F)
    _, psi = _psi_tables(F)
    A = structure(model, n)
    for chi in chis:
        if chi.structure != A:
            raise LevelMismatch("hypergeometric characters must live on Gm(k_n)")
    r = len(chis)
    if r == 1:
        pt = Point(model, n, (a,))
        return chis[0].value(pt) * psi[a]
    terms = []
    for xs in itertools.product(range(1, F.order), repeat=r - 1):
        prod, s = 1, 0
        cval = 1 + 0j
        for chi, x in zip(chis[:-1], xs):
            prod = e.mul(prod, x)
            s = e.add(s, x)
            cval *= chi.value(Point(model, n, (x,)))
        last = e.mul(a, e.inv(prod))
        cval *= chis[-1].value(Point(model, n, (last,)))
        terms.append(cval * psi[e.add(s, last)])
    return kahan_sum(terms)


def hypergeometric_function(model: Gm, n: int, chis, method: str = "conv") -> TraceFunction:
    """Hyp at every unit: direct sums, or iterated twisted-psi convolution."""
    A = structure(model, n)
    if method == "direct":
        vals = {p.coords: hypergeometric(model, n, chis, p.coords[0]) for p in A.points}
        return TraceFunction(A, vals, weight=len(chis) - 1)
    base = gauss_function(model, n)
    out = None
    for chi in chis:
        piece = twist(base, chi)
        out = piece if out is None else convolve(out, piece)
    return TraceFunction(A, out.values, weight=len(chis) - 1)


@dataclass(frozen=True)
class SumFamily:
    """Descriptor of a built-in family: name, declared weight, sign convention."""

    name: str
    weight: int
    sign: int = -1
    note: str = ""

    def norm_exp(self, n: int) -> Fraction:
        return Fraction(self.weight * n, 2)

    def to_json(self, n: int = 1) -> dict:
        return {
            "name": self.name,
            "params": {},
            "weight": self.weight,
            "norm_exp": [self.norm_exp(n).numerator, self.norm_exp(n).denominator],
        }


GAUSS_FAMILY = SumFamily("gauss", 1, note="Mellin transform is -g(chi) q^{-n/2}")
KLOOSTERMAN_MELLIN_FAMILY = SumFamily(
    "kl2-mellin", 2, note="Mellin transform is -g(chi)^2 q^{-n}"
)

_FAMILY_BUILDERS = {
    "gauss": gauss_function,
    "kl2-mellin": kloosterman_mellin_function,
}

_FAMILIES = {f.name: f for f in (GAUSS_FAMILY, KLOOSTERMAN_MELLIN_FAMILY)}


def family_by_name(name: str) -> SumFamily:
    try:
        return _FAMILIES[name]
    except KeyError:
        raise UnknownWeight(f"no declared weight for family {name!r}") from None


def raw_family_function(name: str, model: Gm, n: int) -> TraceFunction:
    fam = family_by_name(name)
    return _FAMILY_BUILDERS[fam.name](model, n)


def normalize(family: SumFamily, f: TraceFunction) -> TraceFunction:
    """Scale by sign * q^{-n w / 2}, the weight-zero normalization."""
    if family.name not in _FAMILIES:
        raise UnknownWeight(f"no declared weight for family {family.name!r}")
    model = f.structure.model
    n = f.level
    q = model.base.order
    e = family.norm_exp(n)
    scale = family.sign * q ** float(-e)
    return TraceFunction(
        f.structure,
        {c: v * scale for c, v in f.values.items()},
        weight=0,
        norm_exp=e,
    )


def normalized_family(name: str, model: Gm, n: int) -> TraceFunction:
    return normalize(family_by_name(name), raw_family_function(name, model, n))


def mellin_spectrum(f: TraceFunction, method: str = "auto"):
    """The family's Mellin transform over the full dual group."""
    return dft(f, method)
