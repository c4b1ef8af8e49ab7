"""Dual groups of the finite point groups, with exact phase arithmetic.

A point group G(k_n) is coordinatised by an invariant-factor decomposition
(repeatedly split off an element of maximal order and recurse on the
quotient).  Characters carry their values as exact rationals mod 1, so
orthogonality, homomorphism properties, Frobenius action and coset membership
are all decided exactly; complex values only appear at the transform boundary
through a single root-of-unity table per group.

Cosets chi * pullback(dual of G') of pullback subgroups are the finite-level
stand-ins for translated algebraic cotori; their declared codimension is
derived from the dimension triple of the kernel of the defining quotient map.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import LevelMismatch, NonDivisor, NotClosed, NotStable
from .fields import factorize
from .groups import GroupHom, GroupModel, Point, enumerate_points, trace_map


@dataclass(frozen=True)
class AbelianStructure:
    """Invariant factors d_1 | d_2 | ... | d_k with matching generators."""

    model: GroupModel
    level: int
    invariant_factors: tuple
    generators: tuple

    @property
    def size(self) -> int:
        return math.prod(self.invariant_factors)

    @functools.cached_property
    def points(self) -> tuple:
        return enumerate_points(self.model, self.level)

    @functools.cached_property
    def dlog(self) -> dict:
        """coords -> exponent vector, a bijection onto the product of Z/d_i."""
        model, n = self.model, self.level
        items = [(model.identity(n).coords, ())]
        for i, (g, d) in enumerate(zip(self.generators, self.invariant_factors)):
            new_items = []
            for coords, exps in items:
                cur = coords
                for a in range(d):
                    new_items.append((cur, exps + (a,)))
                    if a < d - 1:
                        cur = model.op_coords(n, cur, g.coords)
            items = new_items
        table = {coords: exps for coords, exps in items}
        if len(table) != self.size:
            raise NotClosed("generator products do not enumerate the group")
        return table

    @functools.cached_property
    def root_table(self) -> tuple:
        """exp(2*pi*i*t/L) for t < L = lcm of the invariant factors."""
        import cmath

        L = self.phase_lcm
        return tuple(cmath.exp(2j * cmath.pi * t / L) for t in range(L))

    @property
    def phase_lcm(self) -> int:
        return math.lcm(*self.invariant_factors) if self.invariant_factors else 1

    def exps_of(self, x: Point) -> tuple:
        if x.level != self.level:
            raise LevelMismatch(f"point at level {x.level}, structure at {self.level}")
        return self.dlog[x.coords]


def _smith_basis(coords_list, mul, ident):
    """[(coords, order)] with descending orders, each dividing the previous."""
    N = len(coords_list)
    if N == 1:
        return []
    index = set(coords_list)
    if ident not in index:
        raise NotClosed("identity not among the points")
    fac = factorize(N)

    def pow_c(c, k):
        acc, base = ident, c
        while k:
            if k & 1:
                acc = mul(acc, base)
                if acc not in index:
                    raise NotClosed("law leaves the point set")
            base = mul(base, base)
            k >>= 1
        return acc

    def elt_order(c):
        e = N
        for p in fac:
            while e % p == 0 and pow_c(c, e // p) == ident:
                e //= p
        return e

    best, best_order = ident, 1
    for c in coords_list:
        o = elt_order(c)
        if o > best_order:
            best, best_order = c, o
    if best_order == N:
        return [(best, best_order)]

    g1, d1 = best, best_order
    # cosets of <g1>: canonical representative is the smallest member
    cyc = {}
    cur = ident
    for j in range(d1):
        cyc[cur] = j
        cur = mul(cur, g1)
    rep = {}
    for c in coords_list:
        if c in rep:
            continue
        orbit = []
        cur = c
        for _ in range(d1):
            orbit.append(cur)
            cur = mul(cur, g1)
        r = min(orbit)
        for o in orbit:
            rep[o] = r
    quot_points = sorted(set(rep.values()))

    def quot_mul(a, b):
        return rep[mul(a, b)]

    sub_basis = _smith_basis(quot_points, quot_mul, rep[ident])

    g1_inv = pow_c(g1, d1 - 1)
    out = [(g1, d1)]
    for r, e in sub_basis:
        w = pow_c(r, e)  # lands in <g1>
        t = cyc[w]
        if t % e:
            raise NotClosed("lift correction failed; law is not a group law")
        corrected = mul(r, pow_c(g1_inv, t // e))
        out.append((corrected, e))
    return out


def analyze_group(points, law=None, identity_coords=None) -> AbelianStructure:
    """Invariant factors and dlog coordinatisation of a finite abelian group."""
    pts = sorted(points, key=lambda p: p.coords)
    model, n = pts[0].model, pts[0].level
    mul = law if law is not None else (lambda a, b: model.op_coords(n, a, b))
    ident = identity_coords if identity_coords is not None else model.identity(n).coords
    basis = _smith_basis([p.coords for p in pts], mul, ident)
    basis.reverse()  # ascending divisibility d_1 | d_2 | ... | d_k
    return AbelianStructure(
        model=model,
        level=n,
        invariant_factors=tuple(d for _, d in basis),
        generators=tuple(Point(model, n, c) for c, _ in basis),
    )


@functools.lru_cache(maxsize=None)
def structure(model: GroupModel, n: int) -> AbelianStructure:
    return analyze_group(enumerate_points(model, n))


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class Character:
    structure: AbelianStructure
    exps: tuple

    @property
    def level(self) -> int:
        return self.structure.level

    def phase(self, x: Point) -> Fraction:
        """chi(x) as an exact rational in [0, 1)."""
        a = self.structure.exps_of(x)
        s = Fraction(0)
        for b, av, d in zip(self.exps, a, self.structure.invariant_factors):
            s += Fraction(b * av, d)
        return s % 1

    def value(self, x: Point) -> complex:
        a = self.structure.exps_of(x)
        L = self.structure.phase_lcm
        t = 0
        for b, av, d in zip(self.exps, a, self.structure.invariant_factors):
            t += b * av * (L // d)
        return self.structure.root_table[t % L]

    def __mul__(self, other: "Character") -> "Character":
        if self.structure != other.structure:
            raise LevelMismatch("characters on different duals")
        exps = tuple(
            (a + b) % d
            for a, b, d in zip(self.exps, other.exps, self.structure.invariant_factors)
        )
        return Character(self.structure, exps)

    def inverse(self) -> "Character":
        exps = tuple((-a) % d for a, d in zip(self.exps, self.structure.invariant_factors))
        return Character(self.structure, exps)

    @property
    def order(self) -> int:
        if not self.exps:
            return 1
        return math.lcm(
            *(d // math.gcd(b, d) for b, d in zip(self.exps, self.structure.invariant_factors))
        )

    @property
    def is_trivial(self) -> bool:
        return all(b == 0 for b in self.exps)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "exps": list(self.exps),
            "invariant_factors": list(self.structure.invariant_factors),
        }


def trivial_character(A: AbelianStructure) -> Character:
    return Character(A, (0,) * len(A.invariant_factors))


def dual_group(A: AbelianStructure) -> tuple:
    """All |A| characters in lexicographic exponent order."""
    return tuple(
        Character(A, exps)
        for exps in itertools.product(*(range(d) for d in A.invariant_factors))
    )


def character_from_phases(A: AbelianStructure, phases) -> Character:
    """Character with the given exact phases on the generators of A."""
    exps = []
    for ph, d in zip(phases, A.invariant_factors):
        b = ph * d
        if b.denominator != 1:
            raise ValueError(f"phase {ph} is not compatible with factor {d}")
        exps.append(int(b) % d)
    return Character(A, tuple(exps))


def pullback(chi: Character, f: GroupHom) -> Character:
    """(f* chi)(x) = chi(f(x)) for f between groups at the same level."""
    tgt = chi.structure
    src = structure(f.source, tgt.level)
    if tgt.model != f.target:
        raise LevelMismatch("character does not live on the hom target")
    return character_from_phases(src, [chi.phase(f.apply(g)) for g in src.generators])


def frobenius_on_char(chi: Character, steps: int = 1) -> Character:
    """(Fr* chi)(x) = chi(Fr(x)) for the base-field Frobenius."""
    A = chi.structure
    return character_from_phases(
        A, [chi.phase(A.model.frobenius(g, steps)) for g in A.generators]
    )


def fixed_characters(A: AbelianStructure, steps: int = 1) -> tuple:
    return tuple(c for c in dual_group(A) if frobenius_on_char(c, steps) == c)


def restrict_character(chi: Character, m: int) -> Character:
    """chi composed with the trace from level m down to chi's level (its level | m)."""
    A = chi.structure
    if m % A.level:
        raise NonDivisor(A.level, m)
    B = structure(A.model, m)
    return character_from_phases(
        B, [chi.phase(trace_map(A.model, g, A.level)) for g in B.generators]
    )


def char_sheaf_trace(chi: Character, g: Point) -> complex:
    """Trace function of the character sheaf: chi(Tr(g)) at a finer level."""
    if g.level % chi.level:
        raise NonDivisor(chi.level, g.level)
    return chi.value(trace_map(chi.structure.model, g, chi.level))


def char_sheaf_phase(chi: Character, g: Point) -> Fraction:
    if g.level % chi.level:
        raise NonDivisor(chi.level, g.level)
    return chi.phase(trace_map(chi.structure.model, g, chi.level))


@dataclass(frozen=True)
class CharacterSystem:
    """Trace-compatible characters across a divisibility-closed level set."""

    model: GroupModel
    base_level: int
    levels: tuple
    chars: tuple  # aligned with levels

    @classmethod
    def build(cls, chi: Character, levels) -> "CharacterSystem":
        levels = tuple(sorted(levels))
        n0 = chi.level
        for lv in levels:
            if lv % n0:
                raise NonDivisor(n0, lv)
        chars = tuple(restrict_character(chi, lv) for lv in levels)
        return cls(chi.structure.model, n0, levels, chars)

    def at_level(self, n: int) -> Character:
        return self.chars[self.levels.index(n)]

    def check_compatibility(self) -> bool:
        """chi_m = chi_n o Tr_{m -> n} exactly, for every stored pair n | m."""
        for i, n in enumerate(self.levels):
            for j, m in enumerate(self.levels):
                if m % n or m == n:
                    continue
                chi_n, chi_m = self.chars[i], self.chars[j]
                for g in chi_m.structure.generators:
                    if chi_m.phase(g) != chi_n.phase(trace_map(self.model, g, n)):
                        return False
        return True


# ---------------------------------------------------------------------------
# cosets (finite shadows of translated algebraic cotori)


@dataclass(frozen=True)
class CharCoset:
    base: Character
    subgroup: frozenset  # exps tuples, closed under the dual law
    declared_codim: int
    hom: GroupHom | None = None

    @property
    def level(self) -> int:
        return self.base.level

    @property
    def structure(self) -> AbelianStructure:
        return self.base.structure

    def contains(self, chi: Character) -> bool:
        if chi.structure != self.base.structure:
            raise LevelMismatch("character on a different dual")
        return (chi * self.base.inverse()).exps in self.subgroup

    def elements(self) -> tuple:
        out = [self.base * Character(self.base.structure, e) for e in self.subgroup]
        return tuple(sorted(out, key=lambda c: c.exps))

    def size(self) -> int:
        return len(self.subgroup)

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "hom": self.hom.to_json() if self.hom else None,
            "codim": self.declared_codim,
        }


def make_coset(chi: Character, f: GroupHom) -> CharCoset:
    """chi * f*(dual of the target) inside the dual at chi's level."""
    n = chi.level
    tgt = structure(f.target, n)
    sub = frozenset(pullback(x, f).exps for x in dual_group(tgt))
    da, dt, du = f.kernel_dims()
    return CharCoset(chi, sub, 2 * da + dt + du, f)


def coset_density(delta: CharCoset) -> Fraction:
    return Fraction(len(delta.subgroup), delta.structure.size)


def coset_intersect(delta1: CharCoset, delta2: CharCoset):
    """Intersection coset, or None when the cosets are disjoint."""
    if delta1.structure != delta2.structure:
        raise LevelMismatch("cosets on different duals")
    e1 = {c.exps for c in delta1.elements()}
    e2 = {c.exps for c in delta2.elements()}
    common = e1 & e2
    if not common:
        return None
    base = Character(delta1.structure, min(common))
    sub = frozenset(delta1.subgroup & delta2.subgroup)
    return CharCoset(base, sub, max(delta1.declared_codim, delta2.declared_codim), None)


@dataclass(frozen=True)
class DescentResult:
    witness: Character | None
    cocycle_orbit: tuple  # sorted exps of Fr*(chi)/chi over the coset


def descend_coset(delta: CharCoset) -> DescentResult:
    """Search a Frobenius-stable coset for a Frobenius-fixed character."""
    A = delta.structure
    fr_sub = frozenset(frobenius_on_char(Character(A, e)).exps for e in delta.subgroup)
    fr_base = frobenius_on_char(delta.base)
    if fr_sub != delta.subgroup or not delta.contains(fr_base):
        raise NotStable("coset is not Frobenius-stable")
    cocycle = set()
    for chi in delta.elements():
        diff = frobenius_on_char(chi) * chi.inverse()
        if diff.is_trivial:
            return DescentResult(chi, ())
        cocycle.add(diff.exps)
    return DescentResult(None, tuple(sorted(cocycle)))


# ---------------------------------------------------------------------------
# exact orthogonality


def orthogonality_holds(A: AbelianStructure, chi: Character) -> bool:
    """Sum chi(x) over the group is zero, decided exactly.

    The phase multiset of a character of order d consists of the d-th roots
    of unity with equal multiplicity, and a full root layer sums to zero; the
    check verifies that multiplicity profile with integer arithmetic only.
    """
    if chi.is_trivial:
        return False
    d = chi.order
    counts = [0] * d
    for x in A.points:
        ph = chi.phase(x)
        t = ph * d
        if t.denominator != 1:
            return False
        counts[int(t) % d] += 1
    return len(set(counts)) == 1


def orthogonality_sweep(A: AbelianStructure) -> bool:
    """Exact orthogonality for every nontrivial character, vectorised."""
    import numpy as np

    facs = A.invariant_factors
    if not facs:
        return True
    L = A.phase_lcm
    pts = A.points
    dl = np.array([A.dlog[p.coords] for p in pts], dtype=np.int64)  # N x k
    ok = True
    for chi in dual_group(A):
        if chi.is_trivial:
            continue
        w = np.array([b * (L // d) for b, d in zip(chi.exps, facs)], dtype=np.int64)
        t = (dl @ w) % L
        d = chi.order
        step = L // d
        if np.any(t % step):
            return False
        counts = np.bincount(t // step, minlength=d)
        if counts.min() != counts.max():
            ok = False
    return ok
