"""Explicit maximally recoverable grid code constructions.

All constructions here are Frobenius lifts: a per-cell field label gamma is
expanded to the global parity vector (gamma, gamma^p, ..., gamma^(p^(h-1))),
so every cycle sum inherits the same tower structure and linear independence
of cycle sums over GF(q) reduces to independence of the labels over GF(p).

Families:
  * binary encoding, h = 1, field size n^(m-1);
  * distance-based column labels (binary BCH layout) for any h;
  * the same with an all-zero last row, saving one exponent;
  * 3-term-progression-free labels for m = 3, h = 1 over odd primes;
  * a bootstrap that widens an m x m seed code to m x n.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import ceil, log2

from .field import FieldSpec, make_field
from .gridcode import Cell, GridCode


@dataclass(frozen=True)
class GammaLabeling:
    """A total map from grid cells to field elements (integer encodings)."""

    m: int
    n: int
    spec: FieldSpec
    gamma: dict[Cell, int] = dc_field(compare=False)

    def __post_init__(self):
        for i in range(1, self.m + 1):
            for j in range(1, self.n + 1):
                v = self.gamma.get((i, j))
                if v is None:
                    raise ValueError(f"labeling misses cell ({i}, {j})")
                if not 0 <= v < self.spec.q:
                    raise ValueError(f"label {v} out of range for field of order {self.spec.q}")

    def label(self, i: int, j: int) -> int:
        return self.gamma[(i, j)]


def gabidulin_lift(labeling: GammaLabeling, h: int) -> GridCode:
    """Lift labels to parity vectors (g, g^p, ..., g^(p^(h-1))).

    Requires extension degree d >= h, since no h labels can be independent
    over the prime field in a smaller extension.
    """
    if h < 1:
        raise ValueError("h must be >= 1")
    sp = labeling.spec
    if sp.d < h:
        raise ValueError(f"extension degree d={sp.d} is smaller than h={h}")

    def vec(i: int, j: int) -> tuple[int, ...]:
        g = labeling.label(i, j)
        return tuple(sp.frobenius(g, k) for k in range(h))

    return GridCode.from_function(labeling.m, labeling.n, h, sp, vec)


def _check_power_of_two(n: int, what: str) -> int:
    if n < 1 or n & (n - 1):
        raise ValueError(f"{what} must be a power of two, got {n}")
    return n.bit_length() - 1


def construct_binary(m: int, n: int) -> GridCode:
    """h = 1 code over GF(2^((m-1) log2 n)), so q = n^(m-1).

    Label block i of row i (log2 n bits) with the binary representation of
    j - 1; the last row is all zero.  Any cycle touches some row below m in
    exactly two distinct columns, whose blocks differ, so no cycle sum
    vanishes.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    if n < m:
        raise ValueError("requires m <= n")
    bits = _check_power_of_two(n, "n")
    spec = make_field(2, (m - 1) * bits)
    gamma = {}
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            gamma[(i, j)] = (j - 1) << ((i - 1) * bits) if i < m else 0
    return gabidulin_lift(GammaLabeling(m, n, spec, gamma), 1)


@dataclass(frozen=True)
class BchSpec:
    """Parameters of a binary column family with pairwise-distance D.

    d_bits = 1 + ceil((D-1)/2) * ceil(log2(N+1)) bits per column: one parity
    bit plus one s-bit block per odd syndrome power.
    """

    D: int
    N: int

    def __post_init__(self):
        if self.D < 2 or self.N < 1:
            raise ValueError("need D >= 2 and N >= 1")

    @property
    def s(self) -> int:
        return ceil(log2(self.N + 1))

    @property
    def t(self) -> int:
        return ceil((self.D - 1) / 2)

    @property
    def d_bits(self) -> int:
        return 1 + self.t * self.s


def bch_columns(spec: BchSpec) -> list[int]:
    """N column labels of d_bits bits each; any D-1 of them are independent
    over GF(2).

    Column i (1-based) packs a parity bit followed by the evaluations
    beta^i, beta^(3i), ..., beta^((2t-1)i) in s-bit blocks, where beta is the
    smallest-encoding generator of GF(2^s)*.
    """
    s, t = spec.s, spec.t
    if spec.N > (1 << s) - 1:
        raise ValueError(f"not enough distinct nonzero evaluation points for N={spec.N}")
    fld = make_field(2, s)
    beta = fld.multiplicative_generator()
    group_order = (1 << s) - 1
    cols = []
    for i in range(1, spec.N + 1):
        col = 1
        offset = 1
        for power in range(1, 2 * t, 2):
            e = fld.pow(beta, (power * i) % group_order if group_order else 0)
            col |= e << offset
            offset += s
        cols.append(col)
    return cols


def construct_bch_simple(m: int, n: int, h: int) -> GridCode:
    """Any-h code with q = 2 (2^k n)^(m+h-1), 2^k the least power of two > m.

    Cells are labeled by distance-2(m+h-1)+1 columns; the union of any h
    fundamental cycles spans at most 2(m+h-1) cells, so every subfamily of
    cycle sums stays nonzero.
    """
    if m < 2 or h < 1:
        raise ValueError("requires m >= 2 and h >= 1")
    if n < m:
        raise ValueError("requires m <= n")
    _check_power_of_two(n, "n")
    bch = BchSpec(D=2 * (m + h - 1) + 1, N=m * n)
    cols = bch_columns(bch)
    spec = make_field(2, bch.d_bits)
    gamma = {(i, j): cols[n * (i - 1) + j - 1] for i in range(1, m + 1) for j in range(1, n + 1)}
    return gabidulin_lift(GammaLabeling(m, n, spec, gamma), h)


def construct_bch_zero(m: int, n: int, h: int) -> GridCode:
    """Variant of the distance-based construction with an all-zero last row.

    Zeroing row m lowers the needed distance to 2(m+h-2)+1, hence
    q = 2 (2^k n)^(m+h-2) with 2^k the least power of two > m-1.
    """
    if m < 2 or h < 1:
        raise ValueError("requires m >= 2 and h >= 1")
    if n < m:
        raise ValueError("requires m <= n")
    _check_power_of_two(n, "n")
    bch = BchSpec(D=2 * (m + h - 2) + 1, N=(m - 1) * n)
    cols = bch_columns(bch)
    spec = make_field(2, bch.d_bits)
    gamma = {}
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            gamma[(i, j)] = cols[n * (i - 1) + j - 1] if i < m else 0
    return gabidulin_lift(GammaLabeling(m, n, spec, gamma), h)


def has_3ap(values, q: int) -> bool:
    """Whether some distinct x, y, z in the set satisfy x + y = 2z mod q."""
    vals = list(values)
    present = set(vals)
    for xi, x in enumerate(vals):
        for y in vals[xi + 1 :]:
            z = (x + y) * pow(2, q - 2, q) % q
            if z in present and z != x and z != y:
                return True
    return False


def ap3_free_set(q: int, n: int) -> list[int]:
    """Greedy subset of GF(q) of size n with no 3-term arithmetic progression.

    Candidates are tried in ascending residue order with a full progression
    check at each insertion.  Raises ValueError when the greedy scan exhausts
    the field before reaching n elements.
    """
    from .field import _is_prime

    if q < 3 or q % 2 == 0 or not _is_prime(q):
        raise ValueError(f"q={q} must be an odd prime")
    half = pow(2, q - 2, q)
    chosen: list[int] = []
    in_set: set[int] = set()
    for c in range(q):
        ok = True
        for x in chosen:
            # c as an endpoint: x + c = 2z for some existing z
            z = (x + c) * half % q
            if z in in_set and z != x and z != c:
                ok = False
                break
            # c as the midpoint: x + y = 2c
            y = (2 * c - x) % q
            if y in in_set and y != x and y != c:
                ok = False
                break
        if ok:
            chosen.append(c)
            in_set.add(c)
            if len(chosen) == n:
                return chosen
    raise ValueError(f"greedy scan of GF({q}) stalled at {len(chosen)} < {n} elements")


def construct_ap3(n: int, q: int) -> GridCode:
    """m = 3, h = 1 code over GF(q) from a progression-free set of size n.

    Rows carry multipliers 0, 1, 2 of the set elements; 4-cycle sums factor
    as (i1 - i2)(a_j1 - a_j2) and 6-cycle sums as -(a_j1 + a_j2 - 2 a_j3),
    all nonzero because the set is progression-free and q is odd.
    """
    if n < 3:
        raise ValueError("requires n >= 3 for a 3 x n grid")
    a = ap3_free_set(q, n)
    spec = make_field(q, 1)
    gamma = {(i, j): (i - 1) * a[j - 1] % q for i in range(1, 4) for j in range(1, n + 1)}
    return gabidulin_lift(GammaLabeling(3, n, spec, gamma), 1)


def bootstrap_h1(seed: GridCode, n_target: int) -> GridCode:
    """Widen an MR (m0, m0, h=1) seed over GF(2^k) to m0 x n_target.

    The new field has k + b(m0 - 1) bits with b = log2(n_target / m0): the
    first k bits of each label copy the seed label of the column's position
    within its m0-block, and block i (b bits) of the remainder records the
    block index for rows below m0.  Field size (n/m)^(m-1) * q_seed.
    """
    from .verifier import verify_mr

    if seed.h != 1:
        raise ValueError("seed must have exactly one global parity")
    if seed.m != seed.n:
        raise ValueError("seed grid must be square")
    if seed.spec.p != 2:
        raise ValueError("seed field must have characteristic two")
    m0 = seed.m
    _check_power_of_two(m0, "seed dimension")
    _check_power_of_two(n_target, "n_target")
    if n_target < m0:
        raise ValueError("n_target must be at least the seed dimension")
    report = verify_mr(seed)
    if not report.is_mr:
        raise ValueError("seed code fails maximal recoverability verification")
    k = seed.spec.d
    b = (n_target // m0).bit_length() - 1
    spec = make_field(2, k + b * (m0 - 1))
    gamma = {}
    for i in range(1, m0 + 1):
        for j in range(1, n_target + 1):
            block, within = divmod(j - 1, m0)
            label = seed.parity_vector(i, within + 1)[0]
            if b and i < m0:
                label |= block << (k + (i - 1) * b)
            gamma[(i, j)] = label
    return gabidulin_lift(GammaLabeling(m0, n_target, spec, gamma), 1)
