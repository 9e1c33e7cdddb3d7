"""Grid codes: parity-check matrix assembly, cycle sums, and JSON interchange.

An (m, n, h) grid code over GF(q) stores one field element per grid cell and
imposes one parity check per row, one per column (the last column check being
implied by the others), and h global checks given by per-cell parity vectors.
Cell (i, j) corresponds to column n*(i-1) + j of the parity-check matrix,
1-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .field import FieldElement, FieldSpec
from .gridgraph import Cell, CycleRep, Pattern
from .linalg import MatrixGF

JSON_FORMAT = 1


@dataclass(frozen=True)
class GridCode:
    """Full description of an (m, n, h) grid code over a fixed field.

    ``gp[i-1][j-1]`` is the length-h tuple of global parity entries for cell
    (i, j), as integer encodings of ``spec``.  The parity-check matrix is
    derived, not stored.
    """

    m: int
    n: int
    h: int
    spec: FieldSpec
    gp: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if self.m < 1 or self.n < self.m:
            raise ValueError("grid dimensions require 1 <= m <= n")
        if self.h < 0:
            raise ValueError("h must be >= 0")
        if len(self.gp) != self.m or any(len(row) != self.n for row in self.gp):
            raise ValueError("gp must cover every cell of the grid")
        for row in self.gp:
            for vec in row:
                if len(vec) != self.h:
                    raise ValueError("every global parity vector must have length h")
                for v in vec:
                    if not 0 <= v < self.spec.q:
                        raise ValueError(f"encoding {v} out of range for field of order {self.spec.q}")

    @classmethod
    def from_function(
        cls, m: int, n: int, h: int, spec: FieldSpec, fn: Callable[[int, int], Sequence[int]]
    ) -> "GridCode":
        gp = tuple(tuple(tuple(fn(i, j)) for j in range(1, n + 1)) for i in range(1, m + 1))
        return cls(m, n, h, spec, gp)

    def parity_vector(self, i: int, j: int) -> tuple[int, ...]:
        """Global parity entries of cell (i, j), 1-based, as encodings."""
        return self.gp[i - 1][j - 1]

    def parity_elements(self, i: int, j: int) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.spec, v) for v in self.gp[i - 1][j - 1])

    @property
    def num_checks(self) -> int:
        return self.m + self.n + self.h - 1

    def cells(self) -> list[Cell]:
        """All grid cells in column order of the parity-check matrix."""
        return [(i, j) for i in range(1, self.m + 1) for j in range(1, self.n + 1)]


def cell_column(n: int, cell: Cell) -> int:
    """0-based parity-matrix column of a 1-based cell."""
    i, j = cell
    return n * (i - 1) + (j - 1)


def build_parity_matrix(code: GridCode) -> MatrixGF:
    """The (m+n+h-1) x mn parity-check matrix.

    Rows 1..m indicate grid rows, rows m+1..m+n-1 indicate grid columns
    1..n-1 (the n-th column check is implied by the row checks minus the
    other column checks), and the final h rows carry the global parity
    vectors.
    """
    m, n, h = code.m, code.n, code.h
    rows = [[0] * (m * n) for _ in range(m + n + h - 1)]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            rows[i - 1][cell_column(n, (i, j))] = 1
    for j in range(1, n):
        for i in range(1, m + 1):
            rows[m + j - 1][cell_column(n, (i, j))] = 1
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            vec = code.parity_vector(i, j)
            col = cell_column(n, (i, j))
            for k in range(h):
                rows[m + n - 1 + k][col] = vec[k]
    return MatrixGF(code.spec, m + n + h - 1, m * n, rows)


def restrict(matrix: MatrixGF, pattern: Pattern | Iterable[Cell], n: int | None = None) -> MatrixGF:
    """Columns of a parity matrix indexed by a cell pattern, in sorted order."""
    if isinstance(pattern, Pattern):
        cells = pattern.sorted_cells()
        n = pattern.n
    else:
        cells = sorted(pattern)
        if n is None:
            raise ValueError("n required when restricting by a bare cell collection")
    return matrix.column_submatrix([cell_column(n, c) for c in cells])


def cycle_sum_raw(code: GridCode, cycle: CycleRep) -> tuple[int, ...]:
    """Alternating signed sum of global parity vectors along a cycle."""
    sp = code.spec
    acc = [0] * code.h
    for (i, j), sign in cycle.signed_cells():
        vec = code.gp[i - 1][j - 1]
        if sign > 0:
            for k in range(code.h):
                acc[k] = sp.add(acc[k], vec[k])
        else:
            for k in range(code.h):
                acc[k] = sp.sub(acc[k], vec[k])
    return tuple(acc)


def cycle_sum(code: GridCode, cycle: CycleRep) -> tuple[FieldElement, ...]:
    return tuple(FieldElement(code.spec, v) for v in cycle_sum_raw(code, cycle))


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------


def to_json_dict(code: GridCode) -> dict:
    return {
        "format": JSON_FORMAT,
        "p": code.spec.p,
        "d": code.spec.d,
        "modulus": list(code.spec.modulus),
        "m": code.m,
        "n": code.n,
        "h": code.h,
        "gp": [[list(vec) for vec in row] for row in code.gp],
    }


def from_json_dict(data: dict) -> GridCode:
    try:
        if data.get("format", JSON_FORMAT) != JSON_FORMAT:
            raise ValueError(f"unsupported format {data.get('format')}")
        spec = FieldSpec(int(data["p"]), int(data["d"]), [int(c) for c in data["modulus"]])
        gp = tuple(tuple(tuple(int(v) for v in vec) for vec in row) for row in data["gp"])
        return GridCode(int(data["m"]), int(data["n"]), int(data["h"]), spec, gp)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed grid code document: {exc}") from exc


def save_code(code: GridCode, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json_dict(code), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_code(path: str) -> GridCode:
    with open(path, "r", encoding="utf-8") as fh:
        return from_json_dict(json.load(fh))
