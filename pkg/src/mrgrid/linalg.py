"""Dense matrices over a finite field, with elimination-based rank, kernel,
and solve.

Entries are stored row-major as integer encodings of the owning field spec;
the spec supplies add/sub/mul/inv on encodings.  Matrices are treated as
immutable: every operation returns fresh data.  Desk-scale dimensions only,
so no sparsity engineering.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:  # pragma: no cover
    from .field import FieldElement, FieldSpec


class MatrixGF:
    __slots__ = ("spec", "nrows", "ncols", "rows")

    def __init__(self, spec: "FieldSpec", nrows: int, ncols: int, rows: list[list[int]]):
        self.spec = spec
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def from_rows(cls, spec: "FieldSpec", rows: Sequence[Sequence[int]], ncols: int | None = None) -> "MatrixGF":
        rows = [list(r) for r in rows]
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise ValueError("ragged rows")
        elif ncols is None:
            raise ValueError("ncols required for a matrix with no rows")
        return cls(spec, len(rows), ncols, rows)

    @classmethod
    def zeros(cls, spec: "FieldSpec", nrows: int, ncols: int) -> "MatrixGF":
        return cls(spec, nrows, ncols, [[0] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, spec: "FieldSpec", k: int) -> "MatrixGF":
        rows = [[0] * k for _ in range(k)]
        for i in range(k):
            rows[i][i] = 1
        return cls(spec, k, k, rows)

    def copy_rows(self) -> list[list[int]]:
        return [row[:] for row in self.rows]

    def entry(self, i: int, j: int) -> "FieldElement":
        from .field import FieldElement

        return FieldElement(self.spec, self.rows[i][j])

    def column_submatrix(self, indices: Sequence[int]) -> "MatrixGF":
        rows = [[row[j] for j in indices] for row in self.rows]
        return MatrixGF(self.spec, self.nrows, len(indices), rows)

    def transpose(self) -> "MatrixGF":
        rows = [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        return MatrixGF(self.spec, self.ncols, self.nrows, rows)

    def stack(self, other: "MatrixGF") -> "MatrixGF":
        if other.ncols != self.ncols or other.spec != self.spec:
            raise ValueError("incompatible stack")
        return MatrixGF(self.spec, self.nrows + other.nrows, self.ncols, self.copy_rows() + other.copy_rows())

    def mul_vec(self, vec: Sequence[int]) -> list[int]:
        if len(vec) != self.ncols:
            raise ValueError("dimension mismatch")
        sp = self.spec
        out = []
        for row in self.rows:
            acc = 0
            for a, x in zip(row, vec):
                if a and x:
                    acc = sp.add(acc, sp.mul(a, x))
            out.append(acc)
        return out

    def matmul(self, other: "MatrixGF") -> "MatrixGF":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        sp = self.spec
        ot = other.transpose()
        rows = [[0] * other.ncols for _ in range(self.nrows)]
        for i, row in enumerate(self.rows):
            for j, col in enumerate(ot.rows):
                acc = 0
                for a, b in zip(row, col):
                    if a and b:
                        acc = sp.add(acc, sp.mul(a, b))
                rows[i][j] = acc
        return MatrixGF(sp, self.nrows, other.ncols, rows)

    # -- elimination --------------------------------------------------------

    def rank(self) -> int:
        """Rank by division-free Gaussian elimination (no inversions needed)."""
        sp = self.spec
        rows = self.copy_rows()
        nr, nc = self.nrows, self.ncols
        r = 0
        for col in range(nc):
            piv = None
            for i in range(r, nr):
                if rows[i][col]:
                    piv = i
                    break
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            pv = rows[r][col]
            for i in range(r + 1, nr):
                f = rows[i][col]
                if f:
                    ri = rows[i]
                    rr = rows[r]
                    for j in range(col, nc):
                        # cross-multiply keeps entries in the field without inverses
                        ri[j] = sp.sub(sp.mul(pv, ri[j]), sp.mul(f, rr[j]))
            r += 1
            if r == nr:
                break
        return r

    def rref(self) -> tuple["MatrixGF", list[int]]:
        """Reduced row echelon form and its pivot column indices."""
        sp = self.spec
        rows = self.copy_rows()
        nr, nc = self.nrows, self.ncols
        pivots: list[int] = []
        r = 0
        for col in range(nc):
            piv = None
            for i in range(r, nr):
                if rows[i][col]:
                    piv = i
                    break
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = sp.inv(rows[r][col])
            rows[r] = [sp.mul(inv, v) for v in rows[r]]
            for i in range(nr):
                if i != r and rows[i][col]:
                    f = rows[i][col]
                    ri = rows[i]
                    rr = rows[r]
                    for j in range(col, nc):
                        if rr[j]:
                            ri[j] = sp.sub(ri[j], sp.mul(f, rr[j]))
            pivots.append(col)
            r += 1
            if r == nr:
                break
        return MatrixGF(sp, nr, nc, rows), pivots

    def kernel_basis(self) -> "MatrixGF":
        """Basis of the right kernel, one vector per row.

        Derived from the reduced echelon form with free columns in ascending
        order, so the basis is deterministic for a given matrix.
        """
        sp = self.spec
        red, pivots = self.rref()
        pivot_of_col = {c: i for i, c in enumerate(pivots)}
        free = [c for c in range(self.ncols) if c not in pivot_of_col]
        basis = []
        for f in free:
            vec = [0] * self.ncols
            vec[f] = 1
            for c, i in pivot_of_col.items():
                vec[c] = sp.neg(red.rows[i][f])
            basis.append(vec)
        return MatrixGF(sp, len(basis), self.ncols, basis)

    def solve(self, rhs: Sequence[int]) -> tuple[list[int], bool]:
        """One solution of self * x = rhs, plus whether it is unique.

        Unique exactly when the matrix has full column rank.  Raises
        ValueError on an inconsistent system.  With free columns the returned
        solution sets them to zero.
        """
        if len(rhs) != self.nrows:
            raise ValueError("dimension mismatch")
        sp = self.spec
        aug = MatrixGF(sp, self.nrows, self.ncols + 1, [row + [b] for row, b in zip(self.copy_rows(), rhs)])
        red, pivots = aug.rref()
        if self.ncols in pivots:
            raise ValueError("inconsistent linear system")
        x = [0] * self.ncols
        for i, c in enumerate(pivots):
            x[c] = red.rows[i][self.ncols]
        return x, len(pivots) == self.ncols

    # -- misc ----------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixGF):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        return f"MatrixGF({self.nrows}x{self.ncols} over GF({self.spec.p}^{self.spec.d}))"
