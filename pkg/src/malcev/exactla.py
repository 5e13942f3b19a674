"""Sparse exact linear algebra over the rationals.

Matrices are stored row-wise as ``{row: {col: Fraction}}`` with no stored
zeros. Everything here is a pure function of immutable inputs.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "RatMatrix",
    "rational",
    "format_rational",
    "rref",
    "rank",
    "kernel_basis",
    "quotient_basis",
    "EchelonBasis",
    "solve_coordinates",
    "CoordinateSolver",
]


def rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class RatMatrix:
    """Immutable sparse rational matrix."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Mapping | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix shape must be nonnegative")
        self.rows = rows
        self.cols = cols
        data: dict[int, dict[int, Fraction]] = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
                q = rational(v)
                if q:
                    data.setdefault(i, {})[j] = q
        self._data = data

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        n = len(rows)
        m = cols if cols is not None else (len(rows[0]) if rows else 0)
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != m:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    entries[i, j] = v
        return cls(n, m, entries)

    @classmethod
    def from_sparse_rows(cls, rows: Sequence[Mapping[int, Fraction]], cols: int) -> "RatMatrix":
        entries = {(i, j): v for i, r in enumerate(rows) for j, v in r.items()}
        return cls(len(rows), cols, entries)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def entry(self, i: int, j: int) -> Fraction:
        return self._data.get(i, {}).get(j, Fraction(0))

    def row(self, i: int) -> dict[int, Fraction]:
        return dict(self._data.get(i, {}))

    def items(self):
        for i in sorted(self._data):
            row = self._data[i]
            for j in sorted(row):
                yield (i, j), row[j]

    def nnz(self) -> int:
        return sum(len(r) for r in self._data.values())

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.items():
            out[i][j] = v
        return out

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.items()})

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out: dict[tuple[int, int], Fraction] = {}
        for i, row in self._data.items():
            acc: dict[int, Fraction] = {}
            for k, a in row.items():
                for j, b in other._data.get(k, {}).items():
                    acc[j] = acc.get(j, 0) + a * b
            for j, v in acc.items():
                if v:
                    out[i, j] = v
        return RatMatrix(self.rows, other.cols, out)

    def apply(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Matrix times a sparse column vector ``{col: value}``."""
        out: dict[int, Fraction] = {}
        for i, row in self._data.items():
            s = sum((a * vec[k] for k, a in row.items() if k in vec), Fraction(0))
            if s:
                out[i] = s
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self.items())))

    def __repr__(self) -> str:
        return f"RatMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"


def _axpy(target: dict[int, Fraction], scale: Fraction, source: Mapping[int, Fraction]) -> None:
    for j, v in source.items():
        w = target.get(j, 0) + scale * v
        if w:
            target[j] = w
        else:
            target.pop(j, None)


class EchelonBasis:
    """Incrementally maintained reduced echelon basis of a row space.

    Rows are sparse dicts; each stored row has a pivot with coefficient 1
    and every other stored row is zero in that pivot column.
    """

    def __init__(self):
        self.rows: dict[int, dict[int, Fraction]] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        v = {j: rational(x) for j, x in vec.items() if x}
        for p in sorted(set(v) & set(self.rows)):
            c = v.get(p)
            if c:
                _axpy(v, -c, self.rows[p])
        return v

    def add(self, vec: Mapping[int, Fraction]) -> bool:
        """Insert ``vec``; returns False when it was already in the span."""
        v = self.reduce(vec)
        if not v:
            return False
        p = min(v)
        inv = 1 / v[p]
        v = {j: x * inv for j, x in v.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                _axpy(row, -c, v)
        self.rows[p] = v
        return True

    def contains(self, vec: Mapping[int, Fraction]) -> bool:
        return not self.reduce(vec)

    def pivots(self) -> list[int]:
        return sorted(self.rows)


def rref(m: RatMatrix) -> tuple[RatMatrix, list[int]]:
    """Reduced row-echelon form and the strictly increasing pivot columns."""
    basis = EchelonBasis()
    for i in range(m.rows):
        basis.add(m.row(i))
    pivots = basis.pivots()
    rows = [basis.rows[p] for p in pivots]
    rows += [{}] * (m.rows - len(rows))
    return RatMatrix.from_sparse_rows(rows, m.cols), pivots


def rank(m: RatMatrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: RatMatrix) -> list[dict[int, Fraction]]:
    """Sparse column vectors spanning ``ker(m)``, one per free column."""
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    out = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        vec = {free: Fraction(1)}
        for r, p in enumerate(pivots):
            c = reduced.entry(r, free)
            if c:
                vec[p] = -c
        out.append(vec)
    return out


def quotient_basis(
    ambient_dim: int, subspace: Iterable[Mapping[int, Fraction]]
) -> tuple[list[int], RatMatrix]:
    """Complement representatives and the projection onto them.

    Returns the standard-basis indices that are not pivots of the echelon
    form of ``subspace`` together with a ``len(reps) x ambient_dim`` matrix
    whose kernel is exactly the span of ``subspace``.
    """
    basis = EchelonBasis()
    for vec in subspace:
        if any(j < 0 or j >= ambient_dim for j in vec):
            raise ValueError("subspace vector outside ambient dimension")
        basis.add(vec)
    pivots = set(basis.rows)
    reps = [j for j in range(ambient_dim) if j not in pivots]
    col_of = {j: k for k, j in enumerate(reps)}
    entries = {}
    for j in range(ambient_dim):
        if j in col_of:
            entries[col_of[j], j] = 1
        else:
            # e_j = pivot row - (its non-pivot part), so e_j projects to -rest
            for k, c in basis.rows[j].items():
                if k != j:
                    entries[col_of[k], j] = -c
    return reps, RatMatrix(len(reps), ambient_dim, entries)


class CoordinateSolver:
    """Reusable solver for coordinates against fixed independent columns."""

    def __init__(self, columns: Sequence[Mapping[int, Fraction]], ambient_bound: int | None = None):
        # Augment each column with a tag coordinate to read off the combination.
        bound = max([max(c, default=-1) for c in columns] + [-1]) + 1
        if any(not c for c in columns):
            raise ValueError("columns are linearly dependent")
        self.tag0 = max(bound, ambient_bound or 0)
        self.count = len(columns)
        self._basis = EchelonBasis()
        for k, col in enumerate(columns):
            v = dict(col)
            v[self.tag0 + k] = Fraction(1)
            if min(self._basis.reduce(v)) >= self.tag0:
                raise ValueError("columns are linearly dependent")
            self._basis.add(v)

    def solve(self, target: Mapping[int, Fraction]) -> dict[int, Fraction] | None:
        if any(j >= self.tag0 for j in target):
            return None
        residual = self._basis.reduce(target)
        if any(j < self.tag0 for j in residual):
            return None
        return {j - self.tag0: -c for j, c in residual.items()}


def solve_coordinates(
    columns: Sequence[Mapping[int, Fraction]], target: Mapping[int, Fraction]
) -> dict[int, Fraction] | None:
    """Coefficients ``c`` with ``sum c_k columns[k] == target``; None if inconsistent.

    Columns must be linearly independent.
    """
    return CoordinateSolver(columns).solve(target)
