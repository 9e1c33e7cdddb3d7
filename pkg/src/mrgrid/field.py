"""Arithmetic in GF(p^d) for small primes p and moderate extension degrees.

Elements are encoded as unsigned integers packing d base-p digits: digit i is
the coefficient of x^i in the polynomial representation, so for p = 2 the
encoding is the natural bit representation.  Every encoding in [0, p^d) is a
valid element and the map is a bijection.

``FieldSpec`` exposes arithmetic directly on integer encodings (the form used
by the matrix and verifier hot loops); ``FieldElement`` wraps an encoding with
its owning spec for operator syntax.  Multiplication uses log/antilog tables
for p = 2 and d <= 16, and polynomial multiplication with modular reduction
otherwise; both strategies produce identical results.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

from .linalg import MatrixGF

TABLE_MAX_DEGREE = 16
MAX_ORDER = 1 << 63


def _is_prime(x: int) -> bool:
    """Deterministic Miller-Rabin, valid for all 64-bit integers."""
    if x < 2:
        return False
    for sp in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if x % sp == 0:
            return x == sp
    d = x - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        y = pow(a, d, x)
        if y == 1 or y == x - 1:
            continue
        for _ in range(r - 1):
            y = y * y % x
            if y == x - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# Polynomial helpers over GF(p), coefficients as low-degree-first tuples.
# Used only for modulus selection and irreducibility testing.
# ---------------------------------------------------------------------------


def _poly_trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    # reduce by monic mod of degree dm
    dm = len(mod) - 1
    for i in range(len(out) - 1, dm - 1, -1):
        coef = out[i]
        if coef:
            out[i] = 0
            for t in range(dm):
                out[i - dm + t] = (out[i - dm + t] - coef * mod[t]) % p
    return _poly_trim(out)


def _poly_pow_pk(k: int, mod: Sequence[int], p: int) -> tuple[int, ...]:
    """x^(p^k) mod the given monic polynomial."""
    t: tuple[int, ...] = (0, 1)
    for _ in range(k):
        # t <- t^p by square-and-multiply on the small exponent p
        base = t
        acc: tuple[int, ...] = (1,)
        e = p
        while e:
            if e & 1:
                acc = _poly_mulmod(acc, base, mod, p)
            base = _poly_mulmod(base, base, mod, p)
            e >>= 1
        t = acc
    return t


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    a, b = tuple(a), tuple(b)
    while b:
        # a mod b, with b made monic on the fly
        inv_lead = pow(b[-1], p - 2, p)
        rem = list(a)
        db = len(b) - 1
        while len(rem) - 1 >= db and any(rem):
            if rem[-1] == 0:
                rem.pop()
                continue
            coef = rem[-1] * inv_lead % p
            shift = len(rem) - 1 - db
            for t in range(len(b)):
                rem[shift + t] = (rem[shift + t] - coef * b[t]) % p
            rem.pop()
        a, b = b, _poly_trim(rem)
    return a


def _is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Irreducibility over GF(p) of a monic polynomial.

    Quick root rejection, then the standard test via gcd with x^(p^i) - x.
    """
    d = len(coeffs) - 1
    if d < 1 or coeffs[-1] != 1:
        return False
    if d == 1:
        return True
    for a in range(p):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * a + c) % p
        if acc == 0:
            return False
    if d <= 3:
        return True  # no root and degree <= 3 means no factor of degree <= d/2
    # x^(p^d) == x (mod f) and gcd(x^(p^(d/r)) - x, f) == 1 for prime r | d
    xpd = _poly_pow_pk(d, coeffs, p)
    if xpd != (0, 1):
        return False
    r = 2
    dd = d
    checked = set()
    while r * r <= dd:
        if dd % r == 0:
            checked.add(r)
            while dd % r == 0:
                dd //= r
        r += 1
    if dd > 1:
        checked.add(dd)
    for r in checked:
        t = list(_poly_pow_pk(d // r, coeffs, p))
        while len(t) < 2:
            t.append(0)
        t[1] = (t[1] - 1) % p  # subtract x
        g = _poly_gcd(coeffs, _poly_trim(t), p)
        if len(g) - 1 != 0:
            return False
    return True


class FieldSpec:
    """A concrete finite field GF(p^d) with a fixed monic irreducible modulus.

    Immutable after construction (multiplication tables are built lazily but
    never change); safe to share across threads.  All arithmetic methods
    operate on integer encodings in [0, q).
    """

    __slots__ = ("p", "d", "q", "modulus", "_mod_int", "_exp", "_log", "_generator")

    def __init__(self, p: int, d: int, modulus: Sequence[int], validate: bool = True):
        self.p = p
        self.d = d
        self.q = p**d
        self.modulus = tuple(int(c) for c in modulus)
        if validate:
            if not _is_prime(p):
                raise ValueError(f"p={p} is not prime")
            if d < 1:
                raise ValueError(f"extension degree d={d} must be >= 1")
            if self.q >= MAX_ORDER:
                raise ValueError(f"field order p^d = {p}^{d} does not fit in 63 bits")
            if len(self.modulus) != d + 1 or self.modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree exactly d")
            if any(not 0 <= c < p for c in self.modulus):
                raise ValueError("modulus coefficients must lie in [0, p)")
            if not _is_irreducible(self.modulus, p):
                raise ValueError(f"modulus {self.modulus} is reducible over GF({p})")
        # modulus as bitmask for the p=2 fast path
        self._mod_int = sum(c << i for i, c in enumerate(self.modulus)) if p == 2 else 0
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._generator: int | None = None

    # -- identity / housekeeping ------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.d == other.d
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.d, self.modulus))

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, d={self.d}, modulus={self.modulus})"

    def __getstate__(self):
        return (self.p, self.d, self.modulus)

    def __setstate__(self, state):
        p, d, modulus = state
        self.__init__(p, d, modulus, validate=False)

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self) -> range:
        """All element encodings, 0 .. q-1."""
        return range(self.q)

    def digits(self, a: int) -> tuple[int, ...]:
        """The d base-p digits of an encoding, low degree first."""
        out = []
        for _ in range(self.d):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def encode(self, digits: Iterable[int]) -> int:
        acc = 0
        scale = 1
        for c in digits:
            acc += (c % self.p) * scale
            scale *= self.p
        return acc

    # -- arithmetic on encodings ------------------------------------------

    def _check(self, a: int) -> None:
        if not 0 <= a < self.q:
            raise ValueError(f"encoding {a} out of range for field of order {self.q}")

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.d == 1:
            return (a + b) % self.p
        return self.encode(x + y for x, y in zip(self.digits(a), self.digits(b)))

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.d == 1:
            return (a - b) % self.p
        return self.encode(x - y for x, y in zip(self.digits(a), self.digits(b)))

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.d == 1:
            return (-a) % self.p
        return self.encode(-x for x in self.digits(a))

    def mul(self, a: int, b: int) -> int:
        if self.d == 1:
            return a * b % self.p
        if self.p == 2 and self.d <= TABLE_MAX_DEGREE:
            if a == 0 or b == 0:
                return 0
            if self._exp is None:
                self._build_tables()
            return self._exp[self._log[a] + self._log[b]]
        return self.mul_reduction(a, b)

    def mul_reduction(self, a: int, b: int) -> int:
        """Table-free multiplication: polynomial product with modular reduction."""
        if self.d == 1:
            return a * b % self.p
        if self.p == 2:
            r = 0
            top = 1 << self.d
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if a & top:
                    a ^= self._mod_int
            return r
        da = self.digits(a)
        db = self.digits(b)
        prod = [0] * (2 * self.d - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        for i in range(len(prod) - 1, self.d - 1, -1):
            coef = prod[i]
            if coef:
                prod[i] = 0
                for t in range(self.d):
                    prod[i - self.d + t] = (prod[i - self.d + t] - coef * self.modulus[t]) % self.p
        return self.encode(prod[: self.d])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        if self.d == 1:
            return pow(a, self.p - 2, self.p)
        if self.p == 2 and self.d <= TABLE_MAX_DEGREE:
            if self._exp is None:
                self._build_tables()
            return self._exp[(self.q - 1) - self._log[a]]
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        acc = 1
        base = a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def frobenius(self, a: int, k: int) -> int:
        """a raised to the p^k power; additive and bijective."""
        if k < 0:
            raise ValueError("frobenius iteration count must be >= 0")
        for _ in range(k % self.d):
            a = self.pow(a, self.p)
        return a

    def multiplicative_generator(self) -> int:
        """Smallest encoding that generates the multiplicative group."""
        if self._generator is None:
            if self.q == 2:
                self._generator = 1
            else:
                for g in range(2, self.q):
                    x = g
                    order = 1
                    while x != 1:
                        x = self.mul_reduction(x, g)
                        order += 1
                    if order == self.q - 1:
                        self._generator = g
                        break
                else:  # pragma: no cover - a generator always exists
                    raise RuntimeError("no multiplicative generator found")
        return self._generator

    def _build_tables(self) -> None:
        g = self.multiplicative_generator()
        size = self.q - 1
        exp = [0] * (2 * size)
        log = [0] * self.q
        x = 1
        for i in range(size):
            exp[i] = x
            exp[i + size] = x
            log[x] = i
            x = self.mul_reduction(x, g)
        self._exp = exp
        self._log = log


class FieldElement:
    """An element of a specific FieldSpec; operations never mix specs."""

    __slots__ = ("spec", "value")

    def __init__(self, spec: FieldSpec, value: int):
        spec._check(value)
        self.spec = spec
        self.value = value

    def _coerce(self, other: "FieldElement") -> int:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.spec is not self.spec and other.spec != self.spec:
            raise ValueError("elements belong to different field specs")
        return other.value

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.spec, self.spec.add(self.value, self._coerce(other)))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.spec, self.spec.sub(self.value, self._coerce(other)))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.neg(self.value))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.spec, self.spec.mul(self.value, self._coerce(other)))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.spec, self.spec.mul(self.value, self.spec.inv(self._coerce(other))))

    def __pow__(self, e: int) -> "FieldElement":
        return FieldElement(self.spec, self.spec.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv(self.value))

    def frobenius(self, k: int) -> "FieldElement":
        return FieldElement(self.spec, self.spec.frobenius(self.value, k))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.value == other.value and self.spec == other.spec

    def __hash__(self) -> int:
        return hash((self.value, self.spec.p, self.spec.d))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"GF({self.spec.p}^{self.spec.d}):{self.value}"


@lru_cache(maxsize=None)
def make_field(p: int, d: int) -> FieldSpec:
    """GF(p^d) with the lexicographically smallest monic irreducible modulus.

    Candidates are compared low-degree-first as base-p integers, which makes
    the choice deterministic across runs without shipping polynomial tables.
    """
    if not _is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if d < 1:
        raise ValueError(f"extension degree d={d} must be >= 1")
    if p**d >= MAX_ORDER:
        raise ValueError(f"field order {p}^{d} does not fit in 63 bits")
    base = p**d
    for enc in range(base, 2 * base):
        digits = []
        x = enc
        for _ in range(d + 1):
            x, r = divmod(x, p)
            digits.append(r)
        if _is_irreducible(digits, p):
            return FieldSpec(p, d, digits, validate=False)
    raise RuntimeError(f"no irreducible polynomial of degree {d} over GF({p})")  # pragma: no cover


def moore_matrix(alphas: Sequence[FieldElement]) -> MatrixGF:
    """The h x h matrix whose (r, c) entry is alphas[c] to the power p^(r-1).

    Nonsingular exactly when the alphas are linearly independent over the
    prime field, which requires extension degree d >= h to be possible.
    """
    if not alphas:
        raise ValueError("need at least one element")
    spec = alphas[0].spec
    for a in alphas:
        if a.spec != spec:
            raise ValueError("elements belong to different field specs")
    h = len(alphas)
    if spec.d < h:
        raise ValueError(f"extension degree d={spec.d} is smaller than h={h}")
    rows = [[spec.frobenius(a.value, r) for a in alphas] for r in range(h)]
    return MatrixGF.from_rows(spec, rows, ncols=h)
