"""Constructive code-to-code reductions.

Both reductions designate a small family of four-cycles in a corner of the
grid, project the global parity space onto a complement of their cycle-sum
span, and restrict to the remaining subgrid.  The projected code keeps the
field and inherits maximal recoverability with fewer global parities:

  * ``reduce_monotone``: (m, n, h) -> (m - 2, n - h + h' - 1, h'),
  * ``reduce_box``: (m, n, h) -> (m - h1, n - h2, h') whenever
    (h1 - 1)(h2 - 1) >= h - h'.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .gridcode import GridCode, cycle_sum_raw
from .gridgraph import Cell, CycleRep, Pattern, fundamental_cycle
from .linalg import MatrixGF
from .verifier import verify_mr


@dataclass(frozen=True)
class ProjectionMap:
    """A full-row-rank h_out x h_in map whose kernel is a designated span."""

    h_in: int
    h_out: int
    matrix: MatrixGF

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.matrix.mul_vec(list(vec)))


def projection_with_kernel(code: GridCode, cycles: Sequence[CycleRep]) -> ProjectionMap:
    """The deterministic projection annihilating exactly the given cycle sums.

    Rows are the reduced-echelon kernel basis of the stacked sums, so the map
    has full row rank h - len(cycles) and kernel equal to the sum span.
    Raises ValueError when the sums are dependent, which cannot happen for a
    maximally recoverable input.
    """
    h = code.h
    sums = [list(cycle_sum_raw(code, c)) for c in cycles]
    stacked = MatrixGF.from_rows(code.spec, sums, ncols=h)
    if stacked.rank() != len(sums):
        raise ValueError("designated cycle sums are dependent; the input code is not maximally recoverable")
    kernel = stacked.kernel_basis()  # (h - len(cycles)) x h
    proj = ProjectionMap(h_in=h, h_out=h - len(sums), matrix=kernel)
    for s in sums:
        if any(kernel.mul_vec(s)):
            raise AssertionError("projection fails to annihilate a designated cycle sum")
    return proj


def _require_mr_input(code: GridCode, input_check: str) -> None:
    if input_check == "skip":
        return
    if input_check != "verify":
        raise ValueError(f"unknown input_check mode {input_check!r}")
    report = verify_mr(code)
    if not report.is_mr:
        raise ValueError("input code fails maximal recoverability verification")


def reduce_monotone(code: GridCode, h_prime: int, input_check: str = "verify") -> GridCode:
    """Drop two rows and h - h' + 1 columns, keeping h' global parities.

    The designated cycles live on rows m-1, m and columns n-h+h' .. n; their
    sums are independent for a maximally recoverable input, and projecting
    every remaining parity vector through their complement yields a
    maximally recoverable (m-2, n-h+h'-1, h') code over the same field.
    """
    m, n, h = code.m, code.n, code.h
    if not 1 <= h_prime <= h:
        raise ValueError("need 1 <= h' <= h")
    if m < 3:
        raise ValueError("need m >= 3 to drop two rows")
    if n < h - h_prime + 2:
        raise ValueError("need n >= h - h' + 2 designated columns")
    new_m, new_n = m - 2, n - h + h_prime - 1
    if new_n < new_m:
        raise ValueError(f"degenerate output dimensions ({new_m}, {new_n})")
    _require_mr_input(code, input_check)
    anchor = n - h + h_prime
    cycles = [
        CycleRep.from_cell_set(
            {(m - 1, anchor), (m - 1, anchor + ell), (m, anchor + ell), (m, anchor)}
        )
        for ell in range(1, h - h_prime + 1)
    ]
    proj = projection_with_kernel(code, cycles)
    return GridCode.from_function(
        new_m, new_n, h_prime, code.spec, lambda i, j: proj.apply(code.parity_vector(i, j))
    )


def reduce_box(code: GridCode, h_prime: int, h1: int, h2: int, input_check: str = "verify") -> GridCode:
    """Drop h1 rows and h2 columns, keeping h' global parities.

    Cycles are drawn from the h1 x h2 bottom-right box: a double-star
    spanning tree of the box (all of its first row plus the rest of its
    first column) is completed by the lexicographically first h - h' other
    box cells, whose fundamental cycles supply the projected directions.
    """
    m, n, h = code.m, code.n, code.h
    if not 1 <= h_prime <= h:
        raise ValueError("need 1 <= h' <= h")
    if (h1 - 1) * (h2 - 1) < h - h_prime:
        raise ValueError("need (h1 - 1)(h2 - 1) >= h - h'")
    if m <= h1 or n <= h2:
        raise ValueError("need m > h1 and n > h2")
    new_m, new_n = m - h1, n - h2
    if new_n < new_m:
        raise ValueError(f"degenerate output dimensions ({new_m}, {new_n})")
    _require_mr_input(code, input_check)
    row0, col0 = m - h1 + 1, n - h2 + 1
    tree_cells: set[Cell] = {(row0, j) for j in range(col0, n + 1)}
    tree_cells |= {(i, col0) for i in range(row0 + 1, m + 1)}
    tree = Pattern.of(m, n, tree_cells)
    box_rest = sorted(
        (i, j)
        for i in range(row0, m + 1)
        for j in range(col0, n + 1)
        if (i, j) not in tree_cells
    )
    extras = box_rest[: h - h_prime]
    cycles = [fundamental_cycle(tree, e) for e in extras]
    proj = projection_with_kernel(code, cycles)
    return GridCode.from_function(
        new_m, new_n, h_prime, code.spec, lambda i, j: proj.apply(code.parity_vector(i, j))
    )
