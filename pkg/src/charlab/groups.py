"""Built-in commutative algebraic groups presented through their point groups.

Each model knows its point group G(k_n) for every level n: coordinates over
the degree-n extension of the base field (degree 2n for the norm-one torus),
the group law, and the base-field Frobenius.  The trace map from level n to
level m | n is the Galois orbit sum taken with the group law; the Lang map at
level m is x^{-1} * Fr^n(x).

The norm-one torus is realised as G_m with the twisted Frobenius t -> t^(-q),
so its k_n-points are the elements of F_{q^(2n)} killed by q^n - (-1)^n.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from .errors import LevelMismatch, ModelMismatch, NonDivisor, SizeCap
from .fields import FieldDesc, engine, field_embedding, make_field

ENUM_CAP = 10**6
HOM_EXHAUSTIVE_CAP = 10**4


@dataclass(frozen=True)
class Point:
    model: "GroupModel"
    level: int
    coords: tuple

    def __post_init__(self):
        if not self.model.contains(self.level, self.coords):
            raise ValueError(f"coords {self.coords} not on {self.model} at level {self.level}")


class GroupModel:
    """Shared surface for all models; subclasses are frozen dataclasses."""

    # subclasses set: base, and implement dims/pi0/point_field/order_bound/
    # contains/identity_coords/op_coords/inv_coords/frob_coords/_enumerate_coords

    @property
    def connected(self) -> bool:
        return self.pi0() == 1

    def dimension(self) -> int:
        return sum(self.dims())

    def identity(self, n: int) -> Point:
        return Point(self, n, self.identity_coords(n))

    def op(self, a: Point, b: Point) -> Point:
        if a.model != self or b.model != self:
            raise ModelMismatch("points on different models")
        if a.level != b.level:
            raise LevelMismatch("points at different levels")
        return Point(self, a.level, self.op_coords(a.level, a.coords, b.coords))

    def inv(self, a: Point) -> Point:
        return Point(self, a.level, self.inv_coords(a.level, a.coords))

    def frobenius(self, a: Point, j: int = 1) -> Point:
        """Base-field Frobenius Fr_k applied j times."""
        return Point(self, a.level, self.frob_coords(a.level, a.coords, j))

    def power(self, a: Point, k: int) -> Point:
        """k-fold group-law power by double-and-add."""
        n = a.level
        if k < 0:
            return self.power(self.inv(a), -k)
        acc = self.identity_coords(n)
        base = a.coords
        while k:
            if k & 1:
                acc = self.op_coords(n, acc, base)
            base = self.op_coords(n, base, base)
            k >>= 1
        return Point(self, n, acc)

    def to_json(self) -> dict:
        return {"kind": type(self).__name__, "params": self._params(), "base": self.base.to_json()}

    def _params(self) -> dict:
        return {}


@dataclass(frozen=True)
class Ga(GroupModel):
    base: FieldDesc
    d: int = 1

    def dims(self):
        return (0, 0, self.d)

    def pi0(self):
        return 1

    def point_field(self, n):
        return make_field(self.base.p, self.base.n * n)

    def order_bound(self, n):
        return self.point_field(n).order ** self.d

    def order(self, n):
        return self.order_bound(n)

    def contains(self, n, coords):
        F = self.point_field(n)
        return len(coords) == self.d and all(0 <= c < F.order for c in coords)

    def identity_coords(self, n):
        return (0,) * self.d

    def op_coords(self, n, a, b):
        e = engine(self.point_field(n))
        return tuple(e.add(x, y) for x, y in zip(a, b))

    def inv_coords(self, n, a):
        e = engine(self.point_field(n))
        return tuple(e.neg(x) for x in a)

    def frob_coords(self, n, a, j):
        e = engine(self.point_field(n))
        return tuple(e.frobenius(x, self.base.n * j) for x in a)

    def _enumerate_coords(self, n):
        F = self.point_field(n)
        return itertools.product(range(F.order), repeat=self.d)

    def _params(self):
        return {"d": self.d}


@dataclass(frozen=True)
class Gm(GroupModel):
    base: FieldDesc
    d: int = 1

    def dims(self):
        return (0, self.d, 0)

    def pi0(self):
        return 1

    def point_field(self, n):
        return make_field(self.base.p, self.base.n * n)

    def order_bound(self, n):
        return (self.point_field(n).order - 1) ** self.d

    def order(self, n):
        return self.order_bound(n)

    def contains(self, n, coords):
        F = self.point_field(n)
        return len(coords) == self.d and all(1 <= c < F.order for c in coords)

    def identity_coords(self, n):
        return (1,) * self.d

    def op_coords(self, n, a, b):
        e = engine(self.point_field(n))
        return tuple(e.mul(x, y) for x, y in zip(a, b))

    def inv_coords(self, n, a):
        e = engine(self.point_field(n))
        return tuple(e.inv(x) for x in a)

    def frob_coords(self, n, a, j):
        e = engine(self.point_field(n))
        return tuple(e.frobenius(x, self.base.n * j) for x in a)

    def _enumerate_coords(self, n):
        F = self.point_field(n)
        return itertools.product(range(1, F.order), repeat=self.d)

    def _params(self):
        return {"d": self.d}


@dataclass(frozen=True)
class MuR(GroupModel):
    """Roots of unity mu_r, the disconnected demo model (gcd(r, p) = 1)."""

    base: FieldDesc
    r: int

    def __post_init__(self):
        if self.r < 1 or self.r % self.base.p == 0:
            raise ValueError("mu_r needs gcd(r, p) = 1")

    def dims(self):
        return (0, 0, 0)

    def pi0(self):
        return self.r

    def point_field(self, n):
        return make_field(self.base.p, self.base.n * n)

    def order_bound(self, n):
        import math

        return math.gcd(self.r, self.point_field(n).order - 1)

    def order(self, n):
        return self.order_bound(n)

    def contains(self, n, coords):
        F = self.point_field(n)
        if len(coords) != 1 or not (1 <= coords[0] < F.order):
            return False
        return engine(F).pow(coords[0], self.r) == 1

    def identity_coords(self, n):
        return (1,)

    def op_coords(self, n, a, b):
        return (engine(self.point_field(n)).mul(a[0], b[0]),)

    def inv_coords(self, n, a):
        return (engine(self.point_field(n)).inv(a[0]),)

    def frob_coords(self, n, a, j):
        e = engine(self.point_field(n))
        return (e.frobenius(a[0], self.base.n * j),)

    def _enumerate_coords(self, n):
        F = self.point_field(n)
        e = engine(F)
        g = e.generator()
        cnt = self.order(n)
        step = (F.order - 1) // cnt
        vals = sorted(e.pow(g, step * i) for i in range(cnt))
        return [(v,) for v in vals]

    def _params(self):
        return {"r": self.r}


@dataclass(frozen=True)
class NormOneTorus(GroupModel):
    """Kernel of the norm of the quadratic extension, as Gm with Fr: t -> t^(-q)."""

    base: FieldDesc

    def dims(self):
        return (0, 1, 0)

    def pi0(self):
        return 1

    def point_field(self, n):
        return make_field(self.base.p, self.base.n * 2 * n)

    def _group_order(self, n):
        q = self.base.order
        return q**n - (-1) ** n

    def order_bound(self, n):
        return self._group_order(n)

    def order(self, n):
        return self._group_order(n)

    def contains(self, n, coords):
        F = self.point_field(n)
        if len(coords) != 1 or not (1 <= coords[0] < F.order):
            return False
        return engine(F).pow(coords[0], self._group_order(n)) == 1

    def identity_coords(self, n):
        return (1,)

    def op_coords(self, n, a, b):
        return (engine(self.point_field(n)).mul(a[0], b[0]),)

    def inv_coords(self, n, a):
        return (engine(self.point_field(n)).inv(a[0]),)

    def frob_coords(self, n, a, j):
        e = engine(self.point_field(n))
        q = self.base.order
        exp = pow(-q, j, e.q - 1)
        return (e.pow(a[0], exp),)

    def _enumerate_coords(self, n):
        F = self.point_field(n)
        e = engine(F)
        g = e.generator()
        cnt = self._group_order(n)
        step = (F.order - 1) // cnt
        vals = sorted(e.pow(g, step * i) for i in range(cnt))
        return [(v,) for v in vals]


@dataclass(frozen=True)
class EllipticCurve(GroupModel):
    """Short Weierstrass curve y^2 = x^3 + a x + b, char > 3."""

    base: FieldDesc
    a: int
    b: int

    def __post_init__(self):
        if self.base.p in (2, 3):
            raise ValueError("short Weierstrass model needs p > 3")
        e = engine(self.base)
        disc = e.add(e.mul(4, e.pow(self.a, 3)), e.mul(27 % self.base.p, e.mul(self.b, self.b)))
        if disc == 0:
            raise ValueError("singular curve")

    def dims(self):
        return (1, 0, 0)

    def pi0(self):
        return 1

    def point_field(self, n):
        return make_field(self.base.p, self.base.n * n)

    def _ab(self, n):
        F = self.point_field(n)
        if F == self.base:
            return self.a, self.b
        emb = field_embedding(self.base, F)
        return emb.up(self.a), emb.up(self.b)

    def order_bound(self, n):
        import math

        q = self.point_field(n).order
        return q + 1 + 2 * math.isqrt(q) + 1

    def order(self, n):
        return len(enumerate_points(self, n))

    def contains(self, n, coords):
        if coords == ():
            return True
        if len(coords) != 2:
            return False
        F = self.point_field(n)
        if not all(0 <= c < F.order for c in coords):
            return False
        e = engine(F)
        a, b = self._ab(n)
        x, y = coords
        rhs = e.add(e.add(e.mul(x, e.mul(x, x)), e.mul(a, x)), b)
        return e.mul(y, y) == rhs

    def identity_coords(self, n):
        return ()

    def op_coords(self, n, P, Q):
        if P == ():
            return Q
        if Q == ():
            return P
        e = engine(self.point_field(n))
        a, _ = self._ab(n)
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if e.add(y1, y2) == 0:
                return ()
            # doubling; y1 != 0 here since y1 == -y2 was excluded
            num = e.add(e.mul(3, e.mul(x1, x1)), a)
            den = e.mul(2, y1)
        else:
            num = e.sub(y2, y1)
            den = e.sub(x2, x1)
        lam = e.mul(num, e.inv(den))
        x3 = e.sub(e.sub(e.mul(lam, lam), x1), x2)
        y3 = e.sub(e.mul(lam, e.sub(x1, x3)), y1)
        return (x3, y3)

    def inv_coords(self, n, P):
        if P == ():
            return ()
        e = engine(self.point_field(n))
        return (P[0], e.neg(P[1]))

    def frob_coords(self, n, P, j):
        if P == ():
            return ()
        e = engine(self.point_field(n))
        m = self.base.n * j
        return (e.frobenius(P[0], m), e.frobenius(P[1], m))

    def _enumerate_coords(self, n):
        F = self.point_field(n)
        e = engine(F)
        a, b = self._ab(n)
        roots: dict[int, list[int]] = {}
        for y in range(F.order):
            roots.setdefault(e.mul(y, y), []).append(y)
        out = [()]
        for x in range(F.order):
            rhs = e.add(e.add(e.mul(x, e.mul(x, x)), e.mul(a, x)), b)
            for y in sorted(roots.get(rhs, [])):
                out.append((x, y))
        return out

    def _params(self):
        return {"a": self.a, "b": self.b}


@dataclass(frozen=True)
class Product(GroupModel):
    factors: tuple

    def __post_init__(self):
        if len({f.base for f in self.factors}) != 1:
            raise ValueError("product factors must share the base field")

    @property
    def base(self):
        return self.factors[0].base

    def dims(self):
        da, dt, du = 0, 0, 0
        for f in self.factors:
            a, t, u = f.dims()
            da, dt, du = da + a, dt + t, du + u
        return (da, dt, du)

    def pi0(self):
        out = 1
        for f in self.factors:
            out *= f.pi0()
        return out

    def point_field(self, n):
        raise NotImplementedError("product coordinates live factorwise")

    def order_bound(self, n):
        out = 1
        for f in self.factors:
            out *= f.order_bound(n)
        return out

    def order(self, n):
        out = 1
        for f in self.factors:
            out *= f.order(n)
        return out

    def contains(self, n, coords):
        return len(coords) == len(self.factors) and all(
            f.contains(n, c) for f, c in zip(self.factors, coords)
        )

    def identity_coords(self, n):
        return tuple(f.identity_coords(n) for f in self.factors)

    def op_coords(self, n, a, b):
        return tuple(f.op_coords(n, x, y) for f, x, y in zip(self.factors, a, b))

    def inv_coords(self, n, a):
        return tuple(f.inv_coords(n, x) for f, x in zip(self.factors, a))

    def frob_coords(self, n, a, j):
        return tuple(f.frob_coords(n, x, j) for f, x in zip(self.factors, a))

    def _enumerate_coords(self, n):
        return itertools.product(*(f._enumerate_coords(n) for f in self.factors))

    def _params(self):
        return {"factors": [f.to_json() for f in self.factors]}


# ---------------------------------------------------------------------------
# operations


@functools.lru_cache(maxsize=None)
def enumerate_points(model: GroupModel, n: int) -> tuple:
    """Complete duplicate-free point list in lexicographic coordinate order."""
    bound = model.order_bound(n)
    if bound > ENUM_CAP:
        raise SizeCap(bound, ENUM_CAP)
    pts = tuple(
        Point(model, n, c) for c in sorted(set(model._enumerate_coords(n)))
    )
    return pts


def trace_map(model: GroupModel, x: Point, m: int) -> Point:
    """Galois trace down to level m | n, computed with the group law."""
    n = x.level
    if n % m:
        raise NonDivisor(m, n)
    acc = x
    cur = x
    for _ in range(n // m - 1):
        cur = model.frobenius(cur, m)
        acc = model.op(acc, cur)
    return _restrict_level(model, acc, m)


def lang_map(model: GroupModel, x: Point, n: int) -> Point:
    """x^{-1} * Fr_k^n(x) at the level of x; n must divide that level."""
    if x.level % n:
        raise NonDivisor(n, x.level)
    return model.op(model.inv(x), model.frobenius(x, n))


def include_point(model: GroupModel, x: Point, n: int) -> Point:
    """Image of a level-m point in G(k_n) for m | n."""
    m = x.level
    if n % m:
        raise NonDivisor(m, n)
    if n == m:
        return x
    coords = _map_coords(model, x.coords, m, n, up=True)
    return Point(model, n, coords)


def _restrict_level(model: GroupModel, x: Point, m: int) -> Point:
    if x.level == m:
        return x
    coords = _map_coords(model, x.coords, x.level, m, up=False)
    return Point(model, m, coords)


def _map_coords(model, coords, lv_from, lv_to, up: bool):
    if isinstance(model, Product):
        return tuple(
            _map_coords(f, c, lv_from, lv_to, up) for f, c in zip(model.factors, coords)
        )
    if up:
        emb = field_embedding(model.point_field(lv_from), model.point_field(lv_to))
        fn = emb.up
    else:
        emb = field_embedding(model.point_field(lv_to), model.point_field(lv_from))
        fn = emb.down
    return tuple(fn(c) for c in coords)


@dataclass(frozen=True)
class GroupHom:
    """Built-in homomorphism rules between models at a common level."""

    source: GroupModel
    target: GroupModel
    rule: str
    param: int = 0

    def apply(self, x: Point) -> Point:
        n = x.level
        if self.rule == "identity":
            return x
        if self.rule == "power":
            return self.target.power(Point(self.target, n, x.coords), self.param)
        if self.rule == "proj":
            return Point(self.target, n, x.coords[self.param])
        if self.rule == "mult":
            a, b = x.coords
            return Point(self.target, n, self.target.op_coords(n, a, b))
        if self.rule == "incl":
            return Point(self.target, n, x.coords)
        if self.rule == "ell_mult":
            return self.target.power(Point(self.target, n, x.coords), self.param)
        raise ValueError(f"unknown rule {self.rule}")

    def kernel_dims(self) -> tuple[int, int, int]:
        """(d_a, d_t, d_u) of the kernel; finite kernels contribute zero."""
        if self.rule in ("identity", "power", "incl", "ell_mult"):
            return (0, 0, 0)
        if self.rule == "proj":
            da, dt, du = 0, 0, 0
            for i, f in enumerate(self.source.factors):
                if i != self.param:
                    a, t, u = f.dims()
                    da, dt, du = da + a, dt + t, du + u
            return (da, dt, du)
        if self.rule == "mult":
            return self.target.dims()
        raise ValueError(f"unknown rule {self.rule}")

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "rule": self.rule,
            "param": self.param,
        }


def identity_hom(model: GroupModel) -> GroupHom:
    return GroupHom(model, model, "identity")


def power_hom(model: Gm, r: int) -> GroupHom:
    return GroupHom(model, model, "power", r)


def projection_hom(model: Product, i: int) -> GroupHom:
    return GroupHom(model, model.factors[i], "proj", i)


def mult_hom(model: GroupModel) -> GroupHom:
    return GroupHom(Product((model, model)), model, "mult")


def norm_one_inclusion(model: NormOneTorus) -> GroupHom:
    quad = make_field(model.base.p, model.base.n * 2)
    return GroupHom(model, Gm(quad), "incl")


def ell_mult_hom(model: EllipticCurve, r: int) -> GroupHom:
    return GroupHom(model, model, "ell_mult", r)


def verify_hom(f: GroupHom, n: int = 1, rng=None, cap: int = HOM_EXHAUSTIVE_CAP) -> bool:
    """Check f(x*y) = f(x)*f(y); exhaustive when cheap, sampled otherwise."""
    src = f.source
    pts = enumerate_points(src, n)
    if len(pts) ** 2 <= cap:
        pairs = itertools.product(pts, repeat=2)
    else:
        if rng is None:
            raise ValueError("sampled verification needs an rng")
        pairs = [
            (pts[rng.randrange(len(pts))], pts[rng.randrange(len(pts))]) for _ in range(1000)
        ]
    for x, y in pairs:
        if f.apply(src.op(x, y)) != f.target.op(f.apply(x), f.apply(y)):
            return False
    return True


def pushforward_count(f: GroupHom, n: int) -> dict:
    """Kernel/image/cokernel sizes of f on k_n-points."""
    src_pts = enumerate_points(f.source, n)
    ident = f.target.identity(n)
    kernel = 0
    image = set()
    for x in src_pts:
        y = f.apply(x)
        image.add(y.coords)
        if y == ident:
            kernel += 1
    tgt_size = len(enumerate_points(f.target, n))
    return {
        "kernel": kernel,
        "image": len(image),
        "cokernel": tgt_size // len(image),
    }


def identity_component_points(model: GroupModel, n: int) -> tuple:
    """Points of G^0(k_n) for the built-in models."""
    if isinstance(model, MuR):
        return (model.identity(n),)
    if isinstance(model, Product):
        comps = [identity_component_points(f, n) for f in model.factors]
        return tuple(
            Point(model, n, tuple(p.coords for p in tup))
            for tup in itertools.product(*comps)
        )
    return enumerate_points(model, n)


def component_trace_image(model: GroupModel, n: int, m: int) -> dict:
    """Image of the trace G(k_n) -> G(k_m) versus the identity component."""
    if n % m:
        raise NonDivisor(m, n)
    image = {trace_map(model, x, m).coords for x in enumerate_points(model, n)}
    comp = {p.coords for p in identity_component_points(model, m)}
    return {
        "image_size": len(image),
        "equals_identity_component": image == comp,
        "ratio_divisible": (n // m) % model.pi0() == 0,
    }
