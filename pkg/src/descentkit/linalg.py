"""Exact linear algebra over Q.

Matrices are stored row-sparse: each row is a dict mapping column index to a
nonzero Fraction.  Values are treated as immutable once built.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


class DimensionError(ValueError):
    pass


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def fmt_rational(x: Fraction) -> str:
    x = frac(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Mat:
    __slots__ = ("rows", "cols", "_r")

    def __init__(self, rows: int, cols: int, data: Sequence[dict] | None = None):
        if rows < 0 or cols < 0:
            raise DimensionError("negative shape")
        self.rows = rows
        self.cols = cols
        if data is None:
            self._r = tuple({} for _ in range(rows))
        else:
            if len(data) != rows:
                raise DimensionError("row count mismatch")
            self._r = tuple(data)

    # construction

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls(n, n, [{i: Fraction(1)} for i in range(n)])

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Mat":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        data = []
        for row in rows:
            if len(row) != cols:
                raise DimensionError("ragged rows")
            d = {}
            for j, v in enumerate(row):
                v = frac(v)
                if v:
                    d[j] = v
            data.append(d)
        return cls(len(rows), cols, data)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: dict) -> "Mat":
        data = [{} for _ in range(rows)]
        for (i, j), v in entries.items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise DimensionError(f"entry ({i},{j}) out of bounds")
            v = frac(v)
            if v:
                data[i][j] = v
        return cls(rows, cols, data)

    @classmethod
    def from_columns(cls, n: int, columns: Sequence[Sequence]) -> "Mat":
        data = [{} for _ in range(n)]
        for j, col in enumerate(columns):
            if len(col) != n:
                raise DimensionError("column length mismatch")
            for i, v in enumerate(col):
                v = frac(v)
                if v:
                    data[i][j] = v
        return cls(n, len(columns), data)

    @classmethod
    def diag(cls, values: Sequence) -> "Mat":
        n = len(values)
        return cls(n, n, [({i: frac(v)} if v else {}) for i, v in enumerate(values)])

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def row(self, i: int) -> dict:
        return self._r[i]

    def get(self, i: int, j: int) -> Fraction:
        return self._r[i].get(j, Fraction(0))

    def entries(self):
        for i, r in enumerate(self._r):
            for j, v in r.items():
                yield i, j, v

    def to_rows(self) -> list[list[Fraction]]:
        out = []
        for r in self._r:
            row = [Fraction(0)] * self.cols
            for j, v in r.items():
                row[j] = v
            out.append(row)
        return out

    def column(self, j: int) -> list[Fraction]:
        return [r.get(j, Fraction(0)) for r in self._r]

    def columns(self) -> list[list[Fraction]]:
        cols = [[Fraction(0)] * self.rows for _ in range(self.cols)]
        for i, r in enumerate(self._r):
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def nnz(self) -> int:
        return sum(len(r) for r in self._r)

    def is_zero(self) -> bool:
        return all(not r for r in self._r)

    # arithmetic

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self._r == other._r

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(sorted(r.items())) for r in self._r)))

    def __repr__(self) -> str:
        return f"Mat({self.rows}x{self.cols}, {self.to_rows()})"

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise DimensionError(f"add {self.shape} + {other.shape}")
        data = []
        for a, b in zip(self._r, other._r):
            d = dict(a)
            for j, v in b.items():
                w = d.get(j, 0) + v
                if w:
                    d[j] = w
                else:
                    d.pop(j, None)
            data.append(d)
        return Mat(self.rows, self.cols, data)

    def __neg__(self) -> "Mat":
        return Mat(self.rows, self.cols, [{j: -v for j, v in r.items()} for r in self._r])

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def scale(self, c) -> "Mat":
        c = frac(c)
        if not c:
            return Mat(self.rows, self.cols)
        return Mat(self.rows, self.cols, [{j: c * v for j, v in r.items()} for r in self._r])

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise DimensionError(f"matmul {self.shape} @ {other.shape}")
        orows = other._r
        data = []
        for r in self._r:
            acc: dict = {}
            for k, a in r.items():
                for j, b in orows[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            data.append({j: v for j, v in acc.items() if v})
        return Mat(self.rows, other.cols, data)

    def apply(self, vec: Sequence) -> list[Fraction]:
        if len(vec) != self.cols:
            raise DimensionError("vector length mismatch")
        return [sum((v * vec[j] for j, v in r.items()), Fraction(0)) for r in self._r]

    def transpose(self) -> "Mat":
        data = [{} for _ in range(self.cols)]
        for i, r in enumerate(self._r):
            for j, v in r.items():
                data[j][i] = v
        return Mat(self.cols, self.rows, data)

    @property
    def T(self) -> "Mat":
        return self.transpose()

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        cmap = {c: k for k, c in enumerate(cols)}
        data = []
        for i in rows:
            r = self._r[i]
            data.append({cmap[j]: v for j, v in r.items() if j in cmap})
        return Mat(len(rows), len(cols), data)

    def select_columns(self, cols: Sequence[int]) -> "Mat":
        return self.submatrix(range(self.rows), cols)


# block assembly


def hstack(mats: Sequence[Mat], rows: int | None = None) -> Mat:
    if not mats:
        return Mat(rows or 0, 0)
    n = mats[0].rows
    if any(m.rows != n for m in mats):
        raise DimensionError("hstack row mismatch")
    data = [{} for _ in range(n)]
    off = 0
    for m in mats:
        for i, r in enumerate(m._r):
            for j, v in r.items():
                data[i][off + j] = v
        off += m.cols
    return Mat(n, off, data)


def vstack(mats: Sequence[Mat], cols: int | None = None) -> Mat:
    if not mats:
        return Mat(0, cols or 0)
    c = mats[0].cols
    if any(m.cols != c for m in mats):
        raise DimensionError("vstack column mismatch")
    data = []
    for m in mats:
        data.extend(dict(r) for r in m._r)
    return Mat(len(data), c, data)


def block_diag(mats: Sequence[Mat]) -> Mat:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    data = []
    off = 0
    for m in mats:
        for r in m._r:
            data.append({off + j: v for j, v in r.items()})
        off += m.cols
    return Mat(rows, cols, data)


def blocks(row_sizes: Sequence[int], col_sizes: Sequence[int], parts: dict) -> Mat:
    """Assemble a matrix from blocks keyed by (block_row, block_col)."""
    roff = [0]
    for s in row_sizes:
        roff.append(roff[-1] + s)
    coff = [0]
    for s in col_sizes:
        coff.append(coff[-1] + s)
    data = [{} for _ in range(roff[-1])]
    for (bi, bj), m in parts.items():
        if m.shape != (row_sizes[bi], col_sizes[bj]):
            raise DimensionError(f"block ({bi},{bj}) has shape {m.shape}, expected "
                                 f"{(row_sizes[bi], col_sizes[bj])}")
        r0, c0 = roff[bi], coff[bj]
        for i, r in enumerate(m._r):
            tgt = data[r0 + i]
            for j, v in r.items():
                w = tgt.get(c0 + j, 0) + v
                if w:
                    tgt[c0 + j] = w
                else:
                    tgt.pop(c0 + j, None)
    return Mat(roff[-1], coff[-1], data)


def kron(a: Mat, b: Mat) -> Mat:
    data = []
    for ra in a._r:
        for rb in b._r:
            d = {}
            for j, x in ra.items():
                base = j * b.cols
                for k, y in rb.items():
                    d[base + k] = x * y
            data.append(d)
    return Mat(a.rows * b.rows, a.cols * b.cols, data)


# elimination


def _rref(rows: list[dict], ncols: int) -> tuple[list[dict], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    work = [dict(r) for r in rows if r]
    pivots: list[int] = []
    out: list[dict] = []
    for c in range(ncols):
        idx = None
        best = None
        for k, r in enumerate(work):
            if c in r:
                # prefer sparse pivot rows to limit fill-in
                if best is None or len(r) < best:
                    idx, best = k, len(r)
        if idx is None:
            continue
        prow = work.pop(idx)
        inv = 1 / prow[c]
        prow = {j: v * inv for j, v in prow.items()}
        for k, r in enumerate(work):
            f = r.get(c)
            if f:
                for j, v in prow.items():
                    w = r.get(j, 0) - f * v
                    if w:
                        r[j] = w
                    else:
                        r.pop(j, None)
        for r in out:
            f = r.get(c)
            if f:
                for j, v in prow.items():
                    w = r.get(j, 0) - f * v
                    if w:
                        r[j] = w
                    else:
                        r.pop(j, None)
        work = [r for r in work if r]
        out.append(prow)
        pivots.append(c)
        if not work:
            break
    return out, pivots


def rank(m: Mat) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    # eliminate along the shorter side
    if m.rows > m.cols:
        m = m.transpose()
    return len(_rref(list(m._r), m.cols)[1])


def rref(m: Mat) -> tuple[Mat, list[int]]:
    rows, piv = _rref(list(m._r), m.cols)
    return Mat(len(rows), m.cols, rows), piv


def kernel_basis(m: Mat) -> Mat:
    """Columns spanning ker m, one per free column of the RREF."""
    rows, piv = _rref(list(m._r), m.cols)
    pivset = set(piv)
    free = [j for j in range(m.cols) if j not in pivset]
    col_of = {f: k for k, f in enumerate(free)}
    data = [{} for _ in range(m.cols)]
    for f in free:
        data[f][col_of[f]] = Fraction(1)
    for r, p in zip(rows, piv):
        for j, v in r.items():
            if j != p and j in col_of:
                data[p][col_of[j]] = -v
    return Mat(m.cols, len(free), data)


def image_basis(m: Mat) -> Mat:
    """Independent subset of the columns of m spanning its image (first pivots)."""
    _, piv = _rref(list(m._r), m.cols)
    return m.select_columns(piv)


def solve_many(m: Mat, b: Mat) -> Mat | None:
    """X with m X = b, or None if some column of b is outside the image."""
    if b.rows != m.rows:
        raise DimensionError(f"solve: {m.shape} vs rhs {b.shape}")
    n = m.cols
    aug = hstack([m, b])
    rows, piv = _rref(list(aug._r), aug.cols)
    if piv and piv[-1] >= n:
        return None
    data = [{} for _ in range(n)]
    for r, p in zip(rows, piv):
        for j, v in r.items():
            if j >= n:
                data[p][j - n] = v
    return Mat(n, b.cols, data)


def solve(m: Mat, b: Sequence) -> list[Fraction] | None:
    """A column x with m x = b, or None when there is no solution."""
    if len(b) != m.rows:
        raise DimensionError("solve: rhs length mismatch")
    x = solve_many(m, Mat.from_columns(m.rows, [list(b)]))
    if x is None:
        return None
    return x.column(0)


def inverse(m: Mat) -> Mat:
    if m.rows != m.cols:
        raise DimensionError("inverse of non-square matrix")
    x = solve_many(m, Mat.identity(m.rows))
    if x is None or rank(m) != m.rows:
        raise ValueError("matrix is singular")
    return x


def is_invertible(m: Mat) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def quotient_pair(space_dim: int, subspace: Mat) -> tuple[Mat, Mat]:
    """Projection onto a complement of span(subspace), plus the complement section.

    Returns (P, C): P is (n-r) x n with P @ subspace = 0, C is n x (n-r) with
    P @ C = I.  The complement is spanned by standard basis vectors at the
    non-pivot coordinates of the echelonized subspace.
    """
    if subspace.rows != space_dim:
        raise DimensionError("subspace lives in a different ambient space")
    rows, piv = _rref(list(subspace.transpose()._r), space_dim)
    pivset = set(piv)
    comp = [j for j in range(space_dim) if j not in pivset]
    pos = {j: k for k, j in enumerate(comp)}
    data = [{j: Fraction(1)} for j in comp]
    for r, p in zip(rows, piv):
        for j, v in r.items():
            if j in pos:
                data[pos[j]][p] = -v
    P = Mat(len(comp), space_dim, data)
    C = Mat(space_dim, len(comp), [({pos[i]: Fraction(1)} if i in pos else {})
                                   for i in range(space_dim)])
    return P, C


def quotient_map(space_dim: int, subspace: Mat) -> Mat:
    return quotient_pair(space_dim, subspace)[0]


def intersect(a: Mat, b: Mat) -> Mat:
    """Basis (columns) of span(a) ∩ span(b)."""
    if a.rows != b.rows:
        raise DimensionError("intersect: ambient dimensions differ")
    k = kernel_basis(hstack([a, -b]))
    top = k.submatrix(range(a.cols), range(k.cols))
    return image_basis(a @ top)


def span_sum(mats: Iterable[Mat], n: int) -> Mat:
    mats = [m for m in mats if m.cols]
    if not mats:
        return Mat(n, 0)
    return image_basis(hstack(mats))


def in_span(basis: Mat, vecs: Mat) -> bool:
    return solve_many(basis, vecs) is not None


def same_span(a: Mat, b: Mat) -> bool:
    if a.rows != b.rows:
        return False
    ra = rank(a)
    return ra == rank(b) and rank(hstack([a, b])) == ra


def coordinates(basis: Mat, vecs: Mat) -> Mat:
    """Coordinates of the columns of vecs in an independent column basis."""
    x = solve_many(basis, vecs)
    if x is None:
        raise ValueError("vectors not in span of basis")
    return x


def mat_to_json(m: Mat) -> list[list[str]]:
    return [[fmt_rational(v) for v in row] for row in m.to_rows()]


def mat_from_json(rows: list, n_rows: int, n_cols: int) -> Mat:
    if n_rows == 0:
        if rows:
            raise DimensionError("serialized matrix has rows but its target is zero")
        return Mat(0, n_cols)
    if len(rows) != n_rows or any(len(r) != n_cols for r in rows):
        raise DimensionError("serialized matrix has the wrong shape")
    return Mat.from_rows([[frac(v) for v in r] for r in rows], n_cols)
