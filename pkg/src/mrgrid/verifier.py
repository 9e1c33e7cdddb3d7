"""Maximal-recoverability verification and minimum-field-size search.

Two independent decision routes are provided:

  * the cycle criterion: over every spanning tree of the grid and every
    choice of extra cells, the fundamental-cycle sums must be linearly
    independent; distinct (tree, extras) pairs inducing the same union
    pattern are deduplicated;
  * the rank oracle: the parity matrix restricted to every pattern of
    circuit rank at most h must have full column rank, enumerated either
    over all cell subsets (full mode) or over maximal patterns only
    (restricted mode).

A third route applies to characteristic-two codes whose parity vectors form
Frobenius towers: there the criterion collapses to "no even subgraph of
circuit rank at most h has label-XOR zero", which is checked directly over
the cycle space and is dramatically cheaper on wide grids.

Every verdict is deterministic, including the failure witness, across runs
and worker counts.  Exceeding a resource cap raises; it never degrades to a
probabilistic pass.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from multiprocessing import get_context

import numpy as np

from .errors import CapExceededError
from .field import make_field
from .gridcode import GridCode, build_parity_matrix, cycle_sum_raw, restrict
from .gridgraph import (
    Cell,
    CycleRep,
    Pattern,
    circuit_rank,
    enumerate_simple_cycles,
    enumerate_spanning_trees,
    fundamental_cycle,
    spanning_tree_count,
)
from .linalg import MatrixGF

DEFAULT_PAIR_CAP = 10_000_000
DEFAULT_PATTERN_CAP = 1 << 20
DEFAULT_FAMILY_CAP = 100_000_000
DEFAULT_CANDIDATE_CAP = 1_000_000


@dataclass(frozen=True)
class FailureWitness:
    """A reproducible certificate that a code is not maximally recoverable.

    ``pattern`` is the failing cell pattern; for the cycle routes ``cycles``
    holds a family with dependent sums, and for the tree-based route the
    originating spanning tree and extra cells are included.
    """

    kind: str  # "cycles" | "rank" | "cycle-space"
    pattern: Pattern
    tree: Pattern | None = None
    extras: tuple[Cell, ...] | None = None
    cycles: tuple[CycleRep, ...] | None = None


@dataclass(frozen=True)
class MrReport:
    is_mr: bool
    witness: FailureWitness | None
    patterns_checked: int
    dedup_hits: int


def _sums_matrix(code: GridCode, cycles) -> MatrixGF:
    return MatrixGF.from_rows(code.spec, [list(cycle_sum_raw(code, c)) for c in cycles], ncols=code.h)


def recheck_witness(code: GridCode, witness: FailureWitness) -> bool:
    """Whether the witness still certifies failure for this code."""
    if witness.kind in ("cycles", "cycle-space"):
        assert witness.cycles is not None
        return _sums_matrix(code, witness.cycles).rank() < len(witness.cycles)
    sub = restrict(build_parity_matrix(code), witness.pattern)
    return sub.rank() < len(witness.pattern.cells)


# ---------------------------------------------------------------------------
# Cycle criterion over spanning trees
# ---------------------------------------------------------------------------


def _tree_cycle_data(code: GridCode, tree: Pattern):
    all_cells = {(i, j) for i in range(1, code.m + 1) for j in range(1, code.n + 1)}
    nontree = sorted(all_cells - tree.cells)
    cycles = {e: fundamental_cycle(tree, e) for e in nontree}
    sums = {e: cycle_sum_raw(code, cycles[e]) for e in nontree}
    return nontree, cycles, sums


def _scan_cycle_worker(args):
    code, worker_id, num_workers, k, cap = args
    fail_key = None
    fail_witness = None
    seen: set[frozenset[Cell]] = set()
    for t_idx, tree in enumerate(enumerate_spanning_trees(code.m, code.n, cap=cap)):
        if t_idx % num_workers != worker_id:
            continue
        nontree, cycles, sums = _tree_cycle_data(code, tree)
        for c_idx, combo in enumerate(itertools.combinations(nontree, k)):
            pattern_key = tree.cells | frozenset(combo)
            if pattern_key in seen:
                continue
            seen.add(pattern_key)
            mat = MatrixGF.from_rows(code.spec, [list(sums[e]) for e in combo], ncols=code.h)
            if mat.rank() != k:
                key = (t_idx, c_idx)
                if fail_key is None or key < fail_key:
                    fail_key = key
                    fail_witness = FailureWitness(
                        kind="cycles",
                        pattern=Pattern(code.m, code.n, pattern_key),
                        tree=tree,
                        extras=combo,
                        cycles=tuple(cycles[e] for e in combo),
                    )
    return fail_key, fail_witness, seen


def is_mr_cycle_criterion(code: GridCode, cap: int = DEFAULT_PAIR_CAP, workers: int = 1) -> MrReport:
    """Decide maximal recoverability via fundamental-cycle sums.

    Scans every (spanning tree, extra-cell choice) pair in a canonical order;
    the witness on failure is the first dependent family in that order, which
    makes reports identical across runs and worker counts.  Raises
    CapExceededError when the pair count exceeds ``cap``.
    """
    m, n, h = code.m, code.n, code.h
    nontree_count = m * n - (m + n - 1)
    k = min(h, nontree_count)
    if k == 0:
        return MrReport(is_mr=True, witness=None, patterns_checked=0, dedup_hits=0)
    total_pairs = spanning_tree_count(m, n) * comb(nontree_count, k)
    if total_pairs > cap:
        raise CapExceededError(
            f"cycle criterion needs {total_pairs} (tree, extras) pairs, above the cap of {cap}"
        )
    workers = max(1, workers)
    if workers == 1:
        results = [_scan_cycle_worker((code, 0, 1, k, cap))]
    else:
        with get_context("fork").Pool(workers) as pool:
            results = pool.map(
                _scan_cycle_worker, [(code, w, workers, k, cap) for w in range(workers)]
            )
    fail_key = None
    fail_witness = None
    distinct: set[frozenset[Cell]] = set()
    for key, witness, seen in results:
        distinct |= seen
        if key is not None and (fail_key is None or key < fail_key):
            fail_key = key
            fail_witness = witness
    checked = len(distinct)
    return MrReport(
        is_mr=fail_key is None,
        witness=fail_witness,
        patterns_checked=checked,
        dedup_hits=total_pairs - checked,
    )


def _is_mr_quick(code: GridCode, tree_structures) -> bool:
    """Early-exit boolean check against precomputed tree/cycle structures."""
    sp = code.spec
    h = code.h
    for _tree_cells, combos in tree_structures:
        for cycle_family in combos:
            sums = [list(cycle_sum_raw(code, c)) for c in cycle_family]
            if MatrixGF.from_rows(sp, sums, ncols=h).rank() != len(cycle_family):
                return False
    return True


# ---------------------------------------------------------------------------
# Rank oracle
# ---------------------------------------------------------------------------


def _circuit_rank_cells(m: int, n: int, cells) -> int:
    parent = list(range(m + n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    touched = set()
    merges = 0
    count = 0
    for i, j in cells:
        a, b = i - 1, m + j - 1
        touched.add(a)
        touched.add(b)
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
            merges += 1
        count += 1
    return count - len(touched) + (len(touched) - merges)


def is_mr_rank_oracle(code: GridCode, mode: str = "full", cap: int | None = None) -> MrReport:
    """Decide maximal recoverability by rank of the restricted parity matrix.

    Full mode enumerates all 2^(mn) cell subsets (guarded to mn <= 20) and
    rank-checks those of circuit rank at most h.  Restricted mode enumerates
    only maximal patterns, i.e. spanning tree unions with extra cells,
    deduplicated; correctability of any smaller pattern follows because a
    full-column-rank matrix stays full rank on column subsets.
    """
    m, n, h = code.m, code.n, code.h
    H = build_parity_matrix(code)
    cells = code.cells()
    if mode == "full":
        cap = DEFAULT_PATTERN_CAP if cap is None else cap
        if m * n > 20:
            raise CapExceededError(f"full rank oracle is guarded to mn <= 20, got {m * n}")
        total = 1 << (m * n)
        if total > cap:
            raise CapExceededError(f"full rank oracle needs {total} patterns, above the cap of {cap}")
        checked = 0
        for mask in range(1, total):
            selected = [cells[b] for b in range(m * n) if (mask >> b) & 1]
            if _circuit_rank_cells(m, n, selected) > h:
                continue
            checked += 1
            sub = H.column_submatrix([b for b in range(m * n) if (mask >> b) & 1])
            if sub.rank() != len(selected):
                witness = FailureWitness(kind="rank", pattern=Pattern.of(m, n, selected))
                return MrReport(False, witness, checked, 0)
        return MrReport(True, None, checked, 0)
    if mode != "restricted":
        raise ValueError(f"unknown mode {mode!r}")
    cap = DEFAULT_PAIR_CAP if cap is None else cap
    nontree_count = m * n - (m + n - 1)
    k = min(h, nontree_count)
    if k == 0:
        return MrReport(True, None, 0, 0)
    total_pairs = spanning_tree_count(m, n) * comb(nontree_count, k)
    if total_pairs > cap:
        raise CapExceededError(
            f"restricted rank oracle needs {total_pairs} (tree, extras) pairs, above the cap of {cap}"
        )
    seen: set[frozenset[Cell]] = set()
    pairs = 0
    all_cells = set(cells)
    for tree in enumerate_spanning_trees(m, n, cap=cap):
        nontree = sorted(all_cells - tree.cells)
        for combo in itertools.combinations(nontree, k):
            pairs += 1
            key = tree.cells | frozenset(combo)
            if key in seen:
                continue
            seen.add(key)
            pattern = Pattern(m, n, key)
            sub = restrict(H, pattern)
            if sub.rank() != len(key):
                witness = FailureWitness(kind="rank", pattern=pattern, tree=tree, extras=combo)
                return MrReport(False, witness, len(seen), pairs - len(seen))
    return MrReport(True, None, len(seen), total_pairs - len(seen))


# ---------------------------------------------------------------------------
# Cycle-space route for characteristic-two Frobenius towers
# ---------------------------------------------------------------------------


def frobenius_labeling(code: GridCode) -> dict[Cell, int] | None:
    """Per-cell labels g with parity vectors (g, g^p, ..., g^(p^(h-1))).

    Returns None when the code does not have this tower structure.
    """
    if code.h < 1:
        return None
    sp = code.spec
    out: dict[Cell, int] = {}
    for i in range(1, code.m + 1):
        for j in range(1, code.n + 1):
            vec = code.parity_vector(i, j)
            for k in range(1, code.h):
                if vec[k] != sp.frobenius(vec[k - 1], 1):
                    return None
            out[(i, j)] = vec[0]
    return out


def is_mr_cycle_space(code: GridCode, cap: int = DEFAULT_FAMILY_CAP) -> MrReport:
    """Exact check for characteristic-two Frobenius-tower codes.

    Over GF(2^d) the cycle criterion is equivalent to: every nonzero even
    subgraph of circuit rank at most h has nonzero label-XOR.  Even subgraphs
    of rank at most h are exactly unions of up to h edge-disjoint simple
    cycles, enumerated here directly; pairs are scanned vectorized.
    """
    gamma = frobenius_labeling(code)
    if gamma is None or code.spec.p != 2:
        raise ValueError("cycle-space route needs characteristic two and Frobenius-tower parities")
    m, n, h = code.m, code.n, code.h
    if m * n > 64:
        raise CapExceededError("cycle-space route uses 64-bit cell masks, needs mn <= 64")
    cycles = list(enumerate_simple_cycles(m, n))
    L = len(cycles)
    total_families = sum(comb(L, t) for t in range(1, h + 1))
    if total_families > cap:
        raise CapExceededError(f"cycle-space route needs {total_families} families, above the cap of {cap}")

    def fail(family: tuple[CycleRep, ...]) -> MrReport:
        union = frozenset().union(*(c.cell_set for c in family))
        witness = FailureWitness(
            kind="cycle-space", pattern=Pattern(m, n, union), cycles=tuple(family)
        )
        return MrReport(False, witness, checked, 0)

    checked = 0
    gx = np.zeros(L, dtype=np.uint64)
    vmask = np.zeros(L, dtype=np.uint32)
    emask = np.zeros(L, dtype=np.uint64)
    for idx, cyc in enumerate(cycles):
        g = 0
        vm = 0
        em = 0
        for i, j in cyc.cells:
            g ^= gamma[(i, j)]
            vm |= (1 << (i - 1)) | (1 << (m + j - 1))
            em |= 1 << (n * (i - 1) + j - 1)
        gx[idx] = g
        vmask[idx] = vm
        emask[idx] = em
        checked += 1
        if g == 0:
            return fail((cyc,))
    if h >= 2 and L >= 2:
        for i in range(L - 1):
            ed = (emask[i] & emask[i + 1 :]) == 0
            shared = np.bitwise_count(vmask[i] & vmask[i + 1 :])
            rank2 = np.where(shared > 0, shared + 1, 2)
            valid = ed & (rank2 <= h)
            checked += int(valid.sum())
            zero = valid & ((gx[i] ^ gx[i + 1 :]) == 0)
            if zero.any():
                j = i + 1 + int(np.argmax(zero))
                return fail((cycles[i], cycles[j]))
    if h >= 3:
        cellsets = [c.cell_set for c in cycles]

        def extend(indices: list[int], union: frozenset[Cell], rank: int):
            nonlocal checked
            if len(indices) >= 3:  # singles and pairs already scanned above
                checked += 1
                acc = 0
                for t in indices:
                    acc ^= int(gx[t])
                if acc == 0:
                    return tuple(cycles[t] for t in indices)
            if len(indices) == h or rank >= h:
                return None
            start = indices[-1] + 1 if indices else 0
            for t in range(start, L):
                cs = cellsets[t]
                if union & cs:
                    continue
                new_union = union | cs
                new_rank = _circuit_rank_cells(m, n, new_union)
                if new_rank > h:
                    continue
                hit = extend(indices + [t], new_union, new_rank)
                if hit is not None:
                    return hit
            return None

        for t0 in range(L):
            hit = extend([t0], cellsets[t0], 1)
            if hit is not None and len(hit) >= 3:
                return fail(hit)
    return MrReport(True, None, checked, 0)


def verify_mr(code: GridCode, cap: int = DEFAULT_PAIR_CAP, workers: int = 1) -> MrReport:
    """Best exact route for the given code: cycle-space when the structure
    allows it, the tree-based cycle criterion otherwise."""
    if code.spec.p == 2 and code.h >= 1 and frobenius_labeling(code) is not None:
        try:
            return is_mr_cycle_space(code)
        except CapExceededError:
            pass
    return is_mr_cycle_criterion(code, cap=cap, workers=workers)


# ---------------------------------------------------------------------------
# One-directional family check
# ---------------------------------------------------------------------------


def check_cycle_family(code: GridCode, cycles: list[CycleRep] | tuple[CycleRep, ...]) -> bool:
    """Independence of the sums of a cycle family with small joint footprint.

    The family must satisfy: the union has circuit rank at most h (some
    acyclic subgraph leaves at most h extra cells) and every cycle owns a
    cell that appears in no other cycle.  For a maximally recoverable code
    the sums of such a family are necessarily independent; the converse
    direction does not hold.
    """
    if not cycles:
        raise ValueError("empty cycle family")
    union = frozenset().union(*(c.cell_set for c in cycles))
    pattern = Pattern(code.m, code.n, union)
    if circuit_rank(pattern) > code.h:
        raise ValueError("union of the family has circuit rank above h")
    for idx, cyc in enumerate(cycles):
        others = frozenset().union(*(c.cell_set for t, c in enumerate(cycles) if t != idx)) if len(cycles) > 1 else frozenset()
        if not (cyc.cell_set - others):
            raise ValueError(f"cycle {idx} has no private cell")
    return _sums_matrix(code, cycles).rank() == len(cycles)


# ---------------------------------------------------------------------------
# Minimum-field-size search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchOutcome:
    """Result of an exhaustive minimum-field-size search.

    ``ruled_out`` lists the prime powers exhaustively certified to admit no
    code; when ``found_q`` is set, the witness passed verification.
    """

    m: int
    n: int
    h: int
    family: str
    max_q: int
    found_q: int | None
    witness: GridCode | None
    ruled_out: tuple[int, ...]
    candidates_checked: int


def _prime_power(q: int) -> tuple[int, int] | None:
    if q < 2:
        return None
    p = None
    x = q
    for cand in range(2, q + 1):
        if cand * cand > x:
            p = x if p is None else p
            break
        if x % cand == 0:
            p = cand
            break
    assert p is not None
    d = 0
    while x % p == 0:
        x //= p
        d += 1
    return (p, d) if x == 1 else None


def _tree_structures(m: int, n: int, h: int, cap: int):
    """Precomputed (tree cells, cycle families) list shared by all candidates."""
    nontree_count = m * n - (m + n - 1)
    k = min(h, nontree_count)
    if k == 0:
        return [], 0
    total_pairs = spanning_tree_count(m, n) * comb(nontree_count, k)
    if total_pairs > cap:
        raise CapExceededError(
            f"search verification needs {total_pairs} (tree, extras) pairs per candidate, above the cap of {cap}"
        )
    structures = []
    for tree in enumerate_spanning_trees(m, n, cap=cap):
        nontree, cycles, _ = _tree_cycle_data_structural(m, n, tree)
        combos = [tuple(cycles[e] for e in combo) for combo in itertools.combinations(nontree, k)]
        structures.append((tree.cells, combos))
    return structures, total_pairs


def _tree_cycle_data_structural(m: int, n: int, tree: Pattern):
    all_cells = {(i, j) for i in range(1, m + 1) for j in range(1, n + 1)}
    nontree = sorted(all_cells - tree.cells)
    cycles = {e: fundamental_cycle(tree, e) for e in nontree}
    return nontree, cycles, None


def min_field_size_search(
    m: int,
    n: int,
    h: int,
    max_q: int,
    family: str = "generic",
    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
    pair_cap: int = DEFAULT_PAIR_CAP,
) -> SearchOutcome:
    """Smallest prime power q <= max_q admitting a maximally recoverable
    (m, n, h) code of the given family, by exhaustive search.

    Cycle sums are invariant under adding a constant to a full row or column
    of parity vectors, so assignments are normalized to zero on row 1 and
    column 1; every code is gauge-equivalent to a normalized one, which
    keeps the search exhaustive.  The gabidulin family ranges over all
    Frobenius-tower labelings, including extensions too small to ever
    succeed, which the verification then rules out honestly.
    """
    if family not in ("generic", "gabidulin"):
        raise ValueError(f"unknown family {family!r}")
    if m < 1 or n < m or h < 1:
        raise ValueError("need 1 <= m <= n and h >= 1")
    free_cells = [(i, j) for i in range(2, m + 1) for j in range(2, n + 1)]
    structures, _ = _tree_structures(m, n, h, pair_cap)
    ruled_out: list[int] = []
    candidates_checked = 0
    for q in range(2, max_q + 1):
        pd = _prime_power(q)
        if pd is None:
            continue
        p, d = pd
        spec = make_field(p, d)
        dof = (len(free_cells) * h) if family == "generic" else len(free_cells)
        if q**dof > candidate_cap:
            raise CapExceededError(
                f"search at q={q} needs {q**dof} candidates, above the cap of {candidate_cap}"
            )
        for assignment in itertools.product(range(q), repeat=dof):
            candidates_checked += 1
            if family == "generic":
                gp_map = {cell: tuple(assignment[t * h : (t + 1) * h]) for t, cell in enumerate(free_cells)}
                code = GridCode.from_function(
                    m, n, h, spec, lambda i, j: gp_map.get((i, j), (0,) * h)
                )
            else:
                gamma = {cell: assignment[t] for t, cell in enumerate(free_cells)}
                code = GridCode.from_function(
                    m,
                    n,
                    h,
                    spec,
                    lambda i, j: tuple(spec.frobenius(gamma.get((i, j), 0), k) for k in range(h)),
                )
            if _is_mr_quick(code, structures):
                return SearchOutcome(
                    m, n, h, family, max_q, q, code, tuple(ruled_out), candidates_checked
                )
        ruled_out.append(q)
    return SearchOutcome(m, n, h, family, max_q, None, None, tuple(ruled_out), candidates_checked)
