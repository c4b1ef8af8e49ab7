"""Finite fields F_{p^n} in compatible towers.

Elements are stored packed: an element sum_i c_i * x^i (polynomial basis mod a
canonical irreducible modulus) is the integer sum_i c_i * p^i.  The canonical
modulus is the first irreducible monic polynomial of degree n in that packing
order, so independently constructed fields agree bit-exactly.

Subfield embeddings F_{p^m} -> F_{p^n} (m | n) are chosen coherently per top
field: for m | r | n the composite through F_{p^r} equals the direct map.
All arithmetic is exact; no floating point anywhere in this module.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import NonDivisor, NonPrime, SizeCap

SIZE_CAP = 2**24
_TABLE_CAP = 2**20  # log/Zech tables are built below this field size


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (fine for n <= 2^48)."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@dataclass(frozen=True)
class FieldDesc:
    """Descriptor of F_{p^n}; modulus is the monic coefficient tuple, ascending."""

    p: int
    n: int
    modulus: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p**self.n

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    def __repr__(self):
        return f"F({self.p}^{self.n})"


@dataclass(frozen=True)
class FieldElem:
    field: FieldDesc
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.field.n:
            raise ValueError("coefficient vector has wrong length")
        if any(not (0 <= c < self.field.p) for c in self.coeffs):
            raise ValueError("coefficients out of range")

    @property
    def packed(self) -> int:
        v = 0
        for c in reversed(self.coeffs):
            v = v * self.field.p + c
        return v

    @classmethod
    def from_packed(cls, field: FieldDesc, v: int) -> "FieldElem":
        return cls(field, unpack(v, field.p, field.n))

    def _eng(self):
        return engine(self.field)

    def __add__(self, other):
        return FieldElem.from_packed(self.field, self._eng().add(self.packed, other.packed))

    def __sub__(self, other):
        return FieldElem.from_packed(self.field, self._eng().sub(self.packed, other.packed))

    def __neg__(self):
        return FieldElem.from_packed(self.field, self._eng().neg(self.packed))

    def __mul__(self, other):
        return FieldElem.from_packed(self.field, self._eng().mul(self.packed, other.packed))

    def __truediv__(self, other):
        e = self._eng()
        return FieldElem.from_packed(self.field, e.mul(self.packed, e.inv(other.packed)))

    def __pow__(self, k: int):
        return FieldElem.from_packed(self.field, self._eng().pow(self.packed, k))

    def __repr__(self):
        return f"FieldElem({self.field!r}, {self.coeffs})"


def unpack(v: int, p: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        v, c = divmod(v, p)
        out.append(c)
    return tuple(out)


def pack(digits, p: int) -> int:
    v = 0
    for c in reversed(digits):
        v = v * p + c
    return v


# ---------------------------------------------------------------------------
# polynomial arithmetic over F_p (coefficient lists, used for modulus search
# and as a fallback when no tables are built)

def _poly_mulmod(a, b, mod, p):
    n = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce: mod is monic
    for i in range(len(prod) - 1, n - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(n + 1):
                prod[i - n + j] = (prod[i - n + j] - c * mod[j]) % p
    prod = prod[:n]
    prod += [0] * (n - len(prod))
    return prod


def _poly_powmod(a, e, mod, p):
    result = [1] + [0] * (len(mod) - 2)
    base = list(a)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = list(a), list(b)

    def deg(f):
        for i in range(len(f) - 1, -1, -1):
            if f[i]:
                return i
        return -1

    while deg(b) >= 0:
        da, db = deg(a), deg(b)
        if da < db:
            a, b = b, a
            continue
        inv = pow(b[db], p - 2, p)
        while deg(a) >= db:
            da = deg(a)
            c = a[da] * inv % p
            for j in range(db + 1):
                a[da - db + j] = (a[da - db + j] - c * b[j]) % p
        a, b = b, a
    return a


def _is_irreducible(f, p):
    """Rabin test for a monic polynomial f over F_p."""
    n = len(f) - 1
    if n == 1:
        return True
    x = [0, 1]
    xq = _poly_powmod(x, p**n, f, p)
    if xq != [0, 1] + [0] * (n - 2):
        return False
    for ell in factorize(n):
        h = _poly_powmod(x, p ** (n // ell), f, p)
        h = list(h)
        h[1] = (h[1] - 1) % p
        g = _poly_gcd(f, h, p)
        dg = max((i for i, c in enumerate(g) if c), default=-1)
        if dg != 0:
            return False
    return True


@functools.lru_cache(maxsize=None)
def _canonical_modulus(p: int, n: int) -> tuple[int, ...]:
    for low in range(p**n):
        f: list[int] = list(unpack(low, p, n)) + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # unreachable


def make_field(p: int, n: int, size_cap: int = SIZE_CAP) -> FieldDesc:
    if not is_prime(p):
        raise NonPrime(p)
    if n < 1:
        raise ValueError("extension degree must be >= 1")
    if p**n > size_cap:
        raise SizeCap(p**n, size_cap)
    return FieldDesc(p, n, _canonical_modulus(p, n))


# ---------------------------------------------------------------------------
# arithmetic engine on packed integers


class Fq:
    """Arithmetic on packed elements of one field.

    For field orders below _TABLE_CAP a discrete-log table (with a Zech table
    for addition in the bit-packed p=2 case it is not needed) makes every
    operation O(1); otherwise schoolbook polynomial arithmetic is used.
    """

    def __init__(self, desc: FieldDesc):
        self.desc = desc
        self.p = desc.p
        self.n = desc.n
        self.q = desc.order
        self.mod_list = list(desc.modulus)
        self._exp = None  # exp[i] = g^i packed, length q-1
        self._log = None  # log[v] = i, log[0] = -1
        self._gen = None
        if self.p == 2:
            self._mod_bits = pack(self.mod_list, 2)

    # -- raw polynomial ops -------------------------------------------------

    def _mul_poly(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        p, n = self.p, self.n
        if p == 2:
            r = 0
            x = a
            while b:
                if b & 1:
                    r ^= x
                x <<= 1
                b >>= 1
            mb = self._mod_bits
            for i in range(r.bit_length() - 1, n - 1, -1):
                if (r >> i) & 1:
                    r ^= mb << (i - n)
            return r
        da = unpack(a, p, n)
        db = unpack(b, p, n)
        prod = _poly_mulmod(list(da), list(db), self.mod_list, p)
        return pack(prod, p)

    # -- public ops ---------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        out, mult = 0, 1
        for _ in range(self.n):
            a, ca = divmod(a, p)
            b, cb = divmod(b, p)
            out += ((ca + cb) % p) * mult
            mult *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        out, mult = 0, 1
        for _ in range(self.n):
            a, ca = divmod(a, p)
            out += ((-ca) % p) * mult
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.n == 1:
            return a * b % self.p
        lg = self._logs()
        if lg is not None:
            exp, log = self._exp, lg
            return exp[(log[a] + log[b]) % (self.q - 1)]
        return self._mul_poly(a, b)

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("inverse of zero")
            return 0
        e %= self.q - 1
        if self.n == 1:
            return pow(a, e, self.p)
        lg = self._logs()
        if lg is not None:
            return self._exp[lg[a] * e % (self.q - 1)]
        r = 1
        base = a
        while e:
            if e & 1:
                r = self._mul_poly(r, base)
            base = self._mul_poly(base, base)
            e >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.q - 2)

    def frobenius(self, a: int, m: int) -> int:
        """a ** (p^m)."""
        if a == 0:
            return 0
        return self.pow(a, pow(self.p, m, self.q - 1))

    def trace(self, a: int, m: int) -> int:
        """Sum of the Frobenius^m orbit; lands in the degree-m subfield."""
        if self.n % m:
            raise NonDivisor(m, self.n)
        t = 0
        x = a
        for _ in range(self.n // m):
            t = self.add(t, x)
            x = self.frobenius(x, m)
        return t

    def norm(self, a: int, m: int) -> int:
        if self.n % m:
            raise NonDivisor(m, self.n)
        if a == 0:
            return 0
        e = (self.q - 1) // (self.p**m - 1)
        return self.pow(a, e)

    def elements(self):
        return range(self.q)

    # -- discrete-log tables ------------------------------------------------

    def _logs(self):
        if self._log is None and self.q <= _TABLE_CAP:
            self._build_tables()
        return self._log

    def generator(self) -> int:
        """Canonical multiplicative generator (smallest packed value)."""
        if self._gen is None:
            fac = factorize(self.q - 1)
            for cand in range(1, self.q):
                ok = True
                for ell in fac:
                    e = (self.q - 1) // ell
                    if self.n == 1:
                        t = pow(cand, e, self.p)
                    else:
                        r, base, ee = 1, cand, e
                        while ee:
                            if ee & 1:
                                r = self._mul_poly(r, base)
                            base = self._mul_poly(base, base)
                            ee >>= 1
                        t = r
                    if t == 1:
                        ok = False
                        break
                if ok:
                    self._gen = cand
                    break
        return self._gen

    def _build_tables(self):
        g = self.generator()
        q = self.q
        exp = [0] * (q - 1)
        exp[0] = 1
        if self.n == 1:
            v = 1
            for i in range(1, q - 1):
                v = v * g % self.p
                exp[i] = v
        else:
            v = 1
            for i in range(1, q - 1):
                v = self._mul_poly(v, g)
                exp[i] = v
        log = [-1] * q
        for i, v in enumerate(exp):
            log[v] = i
        self._exp = exp
        self._log = log


@functools.lru_cache(maxsize=None)
def engine(desc: FieldDesc) -> Fq:
    return Fq(desc)


# ---------------------------------------------------------------------------
# coherent tower embeddings


class FieldEmbedding:
    """Ring embedding F_{p^m} -> F_{p^n} determined by the image of x."""

    def __init__(self, src: FieldDesc, dst: FieldDesc, beta: int):
        self.src = src
        self.dst = dst
        self.beta = beta
        e = engine(dst)
        self._pows = [1]
        for _ in range(src.n - 1):
            self._pows.append(e.mul(self._pows[-1], beta))
        # left inverse of the F_p-linear map digits(x) -> digits(up(x))
        self._solve = _left_inverse(
            [unpack(v, dst.p, dst.n) for v in self._pows], dst.p, dst.n
        )

    def up(self, a: int) -> int:
        e = engine(self.dst)
        digits = unpack(a, self.src.p, self.src.n)
        out = 0
        for c, pw in zip(digits, self._pows):
            if c:
                # a base-field scalar packs to itself, so this is scalar action
                out = e.add(out, e.mul(c, pw))
        return out

    def down(self, b: int) -> int:
        p = self.src.p
        ydig = unpack(b, p, self.dst.n)
        xdig = [sum(r * y for r, y in zip(row, ydig)) % p for row in self._solve]
        a = pack(xdig, p)
        if self.up(a) != b:
            raise ValueError("element does not lie in the subfield image")
        return a


def _left_inverse(cols, p, n):
    """Left inverse (m x n over F_p) of the injective matrix with these columns."""
    m = len(cols)
    # augmented [A | I_n] with A = n x m
    rows = [[cols[j][i] for j in range(m)] + [1 if k == i else 0 for k in range(n)]
            for i in range(n)]
    piv = []
    r = 0
    for c in range(m):
        sel = next((i for i in range(r, n) if rows[i][c] % p), None)
        if sel is None:
            raise ValueError("matrix not injective")
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [v * inv % p for v in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        piv.append(r)
        r += 1
    return [rows[piv[j]][m:] for j in range(m)]


def _subfield_elements(dst: FieldDesc, m: int) -> list[int]:
    """All packed elements of the degree-m subfield of dst."""
    e = engine(dst)
    if e._logs() is not None:
        step = (dst.order - 1) // (dst.p**m - 1)
        elems = [0] + [e._exp[(i * step) % (dst.order - 1)] for i in range(dst.p**m - 1)]
        return sorted(set(elems))
    # kernel of Frobenius^m - id, via F_p-linear algebra on the basis x^i
    p, n = dst.p, dst.n
    cols = []
    for i in range(n):
        xi = p**i if i else 1
        im = e.frobenius(xi, m)
        d = list(unpack(im, p, n))
        d[i] = (d[i] - 1) % p
        cols.append(d)
    basis = _kernel_basis(cols, p, n)
    elems = []
    for t in range(p ** len(basis)):
        tt = t
        acc = 0
        for bvec in basis:
            tt, c = divmod(tt, p)
            if c:
                acc = e.add(acc, e.mul(c, bvec))
        elems.append(acc)
    return sorted(set(elems))


def _kernel_basis(cols, p, n):
    """Kernel basis (as packed ints) of the n x n matrix whose columns are given."""
    rows = [[cols[j][i] for j in range(n)] for i in range(n)]
    pivots = {}
    r = 0
    for c in range(n):
        sel = next((i for i in range(r, n) if rows[i][c] % p), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [v * inv % p for v in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots[c] = r
        r += 1
    basis = []
    for c in range(n):
        if c in pivots:
            continue
        vec = [0] * n
        vec[c] = 1
        for pc, pr in pivots.items():
            vec[pc] = (-rows[pr][c]) % p
        basis.append(pack(vec, p))
    return basis


@functools.lru_cache(maxsize=None)
def _tower(p: int, n: int) -> dict:
    """Coherent generator images beta_m in F_{p^n} for every divisor m of n."""
    top = make_field(p, n)
    e = engine(top)
    beta: dict[int, int] = {}
    for m in divisors(n):
        if m == n:
            beta[m] = p if n > 1 else 0  # class of x
            continue
        g_m = make_field(p, m).modulus
        roots = sorted(
            v for v in _subfield_elements(top, m)
            if _eval_poly(e, g_m, v) == 0
        )
        if m == 1:
            beta[m] = roots[0]
            continue
        orbit = [roots[0]]
        for _ in range(m - 1):
            orbit.append(e.frobenius(orbit[-1], 1))
        ok_js = set(range(m))
        for d in divisors(m):
            if d == m:
                continue
            w = _tower(p, m)[d]  # image of alpha_d in F_{p^m}
            wdig = unpack(w, p, m)
            target = beta[d]
            good = set()
            for j, bj in enumerate(orbit):
                val = 0
                acc = 1
                for c in wdig:
                    if c:
                        val = e.add(val, e.mul(c, acc))
                    acc = e.mul(acc, bj)
                if val == target:
                    good.add(j)
            ok_js &= good
        if not ok_js:
            raise AssertionError("incoherent tower (cannot happen)")
        beta[m] = orbit[min(ok_js)]
    return beta


def _eval_poly(e: Fq, coeffs, v: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = e.mul(acc, v)
        if c:
            acc = e.add(acc, c)
    return acc


@functools.lru_cache(maxsize=None)
def field_embedding(src: FieldDesc, dst: FieldDesc) -> FieldEmbedding:
    if src.p != dst.p:
        raise ValueError("different characteristic")
    if dst.n % src.n:
        raise NonDivisor(src.n, dst.n)
    beta = _tower(src.p, dst.n)[src.n]
    return FieldEmbedding(src, dst, beta)


# ---------------------------------------------------------------------------
# spec-level operation surface on FieldElem


def frobenius(x: FieldElem, m: int) -> FieldElem:
    if x.field.n % m:
        raise NonDivisor(m, x.field.n)
    e = engine(x.field)
    return FieldElem.from_packed(x.field, e.frobenius(x.packed, m))


def abs_trace(x: FieldElem, m: int) -> FieldElem:
    """Galois trace down to the degree-m subfield, returned in F_{p^m}."""
    if x.field.n % m:
        raise NonDivisor(m, x.field.n)
    e = engine(x.field)
    t = e.trace(x.packed, m)
    sub = make_field(x.field.p, m)
    if m == x.field.n:
        return FieldElem.from_packed(sub, t)
    emb = field_embedding(sub, x.field)
    return FieldElem.from_packed(sub, emb.down(t))


def abs_norm(x: FieldElem, m: int) -> FieldElem:
    if x.field.n % m:
        raise NonDivisor(m, x.field.n)
    e = engine(x.field)
    t = e.norm(x.packed, m)
    sub = make_field(x.field.p, m)
    if m == x.field.n:
        return FieldElem.from_packed(sub, t)
    emb = field_embedding(sub, x.field)
    return FieldElem.from_packed(sub, emb.down(t))
