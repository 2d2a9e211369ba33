"""Exact sparse linear algebra over Q and prime fields.

Vectors are plain ``dict``s mapping a coordinate index to a nonzero field
element.  Matrices (:class:`SMat`) store one such dict per nonzero column,
which keeps matrix-vector products (the hot path of module actions) cheap.
Gaussian elimination is delegated to sympy's ``DomainMatrix`` in sparse
form, which is exact and fast (it uses python-flint when available).
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Iterable, Mapping

from sympy import GF, QQ
from sympy.polys.matrices import DomainMatrix

Vec = dict


class Field:
    """The rationals (``p is None``) or the prime field of order ``p``."""

    _instances: dict = {}
    _lock = threading.Lock()

    def __new__(cls, p: int | None = None):
        with cls._lock:
            inst = cls._instances.get(p)
            if inst is None:
                if p is not None and (p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1))):
                    raise ValueError(f"{p} is not a prime")
                inst = super().__new__(cls)
                inst.p = p
                inst.domain = QQ if p is None else GF(p)
                inst.zero = inst.domain.zero
                inst.one = inst.domain.one
                cls._instances[p] = inst
            return inst

    def __getnewargs__(self):
        return (self.p,)

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __call__(self, x) -> object:
        """Convert an int, Fraction, string or field element."""
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Fraction):
            return self.frac(x.numerator, x.denominator)
        if isinstance(x, int):
            return self.domain(x)
        if self.p is None:
            return self.domain.convert(x)
        return self.domain(int(x))

    def frac(self, num: int, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if self.p is None:
            return QQ(num, den)
        d = self.domain(den)
        if not d:
            raise ZeroDivisionError(f"denominator {den} vanishes in F<{self.p}>")
        return self.domain(num) / d

    def parse(self, text: str):
        text = text.strip()
        if "/" in text:
            a, b = text.split("/")
            return self.frac(int(a), int(b))
        return self.domain(int(text))

    def format(self, x) -> str:
        """Canonical exact string: ``"3"``, ``"-1/2"``; residues mod p in 0..p-1."""
        if self.p is None:
            n, d = int(QQ.numer(x)), int(QQ.denom(x))
            return str(n) if d == 1 else f"{n}/{d}"
        return str(int(x) % self.p)

    def to_fraction(self, x) -> Fraction:
        if self.p is None:
            return Fraction(int(QQ.numer(x)), int(QQ.denom(x)))
        return Fraction(int(x) % self.p)

    def __repr__(self) -> str:
        return "Q" if self.p is None else f"F<{self.p}>"

    def __reduce__(self):
        return (Field, (self.p,))


Q = Field()


# ---------------------------------------------------------------------------
# sparse vectors


def vec_axpy(y: dict, c, x: Mapping) -> dict:
    """In place ``y += c * x``; returns ``y``."""
    for i, a in x.items():
        v = y.get(i)
        v = a * c if v is None else v + a * c
        if v:
            y[i] = v
        else:
            y.pop(i, None)
    return y


def vec_add(x: Mapping, y: Mapping, c=1) -> dict:
    """Return ``x + c*y`` as a new vector."""
    return vec_axpy(dict(x), c, y)


def vec_scale(x: Mapping, c) -> dict:
    if not c:
        return {}
    return {i: a * c for i, a in x.items()}


def vec_shift(x: Mapping, offset: int) -> dict:
    return {i + offset: a for i, a in x.items()}


def vec_dense(x: Mapping, n: int, field: Field) -> list:
    out = [field.zero] * n
    for i, a in x.items():
        out[i] = a
    return out


# ---------------------------------------------------------------------------
# sparse matrices


class SMat:
    """Sparse matrix stored by columns: ``cols[j][i]`` is the (i, j) entry.

    Instances are treated as immutable once built; callers must not mutate
    the dictionaries returned by :meth:`column`.
    """

    __slots__ = ("nrows", "ncols", "cols", "field")

    def __init__(self, nrows: int, ncols: int, cols: dict | None = None, field: Field = Q):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = cols if cols is not None else {}
        self.field = field

    # -- constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, nrows, ncols, field=Q):
        return cls(nrows, ncols, {}, field)

    @classmethod
    def identity(cls, n, field=Q):
        one = field.one
        return cls(n, n, {j: {j: one} for j in range(n)}, field)

    @classmethod
    def from_rows(cls, rows, field=Q, ncols: int | None = None):
        rows = [list(r) for r in rows]
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        cols: dict = {}
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise ValueError("ragged matrix")
            for j, a in enumerate(r):
                a = field(a)
                if a:
                    cols.setdefault(j, {})[i] = a
        return cls(nrows, ncols, cols, field)

    @classmethod
    def from_columns(cls, columns: Iterable[Mapping], nrows: int, field=Q):
        cols = {}
        n = 0
        for j, c in enumerate(columns):
            n = j + 1
            if c:
                cols[j] = dict(c)
        return cls(nrows, n, cols, field)

    @classmethod
    def from_row_vectors(cls, rows: Iterable[Mapping], ncols: int, field=Q):
        cols: dict = {}
        n = 0
        for i, r in enumerate(rows):
            n = i + 1
            for j, a in r.items():
                cols.setdefault(j, {})[i] = a
        return cls(n, ncols, cols, field)

    @classmethod
    def from_entries(cls, nrows, ncols, entries: Mapping, field=Q):
        cols: dict = {}
        for (i, j), a in entries.items():
            if a:
                cols.setdefault(j, {})[i] = a
        return cls(nrows, ncols, cols, field)

    # -- access -------------------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def get(self, i, j):
        c = self.cols.get(j)
        if c is None:
            return self.field.zero
        return c.get(i, self.field.zero)

    def column(self, j) -> dict:
        return self.cols.get(j, {})

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols.values())

    def is_zero(self) -> bool:
        return not self.cols

    def rows_dod(self) -> dict:
        rows: dict = {}
        for j, c in self.cols.items():
            for i, a in c.items():
                rows.setdefault(i, {})[j] = a
        return rows

    def row(self, i) -> dict:
        return {j: c[i] for j, c in self.cols.items() if i in c}

    def tolist(self) -> list:
        out = [[self.field.zero] * self.ncols for _ in range(self.nrows)]
        for j, c in self.cols.items():
            for i, a in c.items():
                out[i][j] = a
        return out

    def to_json(self) -> list:
        fmt = self.field.format
        return [[fmt(a) for a in r] for r in self.tolist()]

    def __repr__(self):
        return f"SMat({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    def __eq__(self, other):
        if not isinstance(other, SMat):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    def __hash__(self):
        return hash((self.shape, tuple(sorted((j, tuple(sorted(c.items()))) for j, c in self.cols.items()))))

    # -- arithmetic ---------------------------------------------------------
    def apply(self, v: Mapping) -> dict:
        """Matrix times sparse column vector."""
        out: dict = {}
        cols = self.cols
        for j, c in v.items():
            col = cols.get(j)
            if col:
                for i, a in col.items():
                    x = out.get(i)
                    x = a * c if x is None else x + a * c
                    if x:
                        out[i] = x
                    else:
                        del out[i]
        return out

    def rapply(self, v: Mapping) -> dict:
        """Sparse row vector times matrix."""
        out = {}
        for j, col in self.cols.items():
            s = None
            for i, a in col.items():
                c = v.get(i)
                if c is not None:
                    s = a * c if s is None else s + a * c
            if s:
                out[j] = s
        return out

    def __matmul__(self, other: "SMat") -> "SMat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = {}
        for j, c in other.cols.items():
            r = self.apply(c)
            if r:
                cols[j] = r
        return SMat(self.nrows, other.ncols, cols, self.field)

    def __add__(self, other: "SMat") -> "SMat":
        return self.axpy(1, other)

    def __sub__(self, other: "SMat") -> "SMat":
        return self.axpy(-1, other)

    def axpy(self, c, other: "SMat") -> "SMat":
        """Return ``self + c * other``."""
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        cols = {j: dict(col) for j, col in self.cols.items()}
        for j, col in other.cols.items():
            r = vec_axpy(cols.get(j, {}), c, col)
            if r:
                cols[j] = r
            else:
                cols.pop(j, None)
        return SMat(self.nrows, self.ncols, cols, self.field)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "SMat":
        if not c:
            return SMat(self.nrows, self.ncols, {}, self.field)
        return SMat(self.nrows, self.ncols, {j: {i: a * c for i, a in col.items()} for j, col in self.cols.items()}, self.field)

    def transpose(self) -> "SMat":
        return SMat(self.ncols, self.nrows, self.rows_dod(), self.field)

    T = property(transpose)

    def trace(self):
        s = self.field.zero
        for j, c in self.cols.items():
            a = c.get(j)
            if a is not None:
                s += a
        return s

    def submatrix(self, rows: list, cols: list) -> "SMat":
        rpos = {r: k for k, r in enumerate(rows)}
        out = {}
        for k, j in enumerate(cols):
            c = self.cols.get(j)
            if c:
                nc = {rpos[i]: a for i, a in c.items() if i in rpos}
                if nc:
                    out[k] = nc
        return SMat(len(rows), len(cols), out, self.field)

    # -- elimination ----------------------------------------------------------
    def to_domain_matrix(self) -> DomainMatrix:
        return DomainMatrix.from_dod(self.rows_dod(), self.shape, self.field.domain)

    def rref_rows(self):
        """Reduced row echelon form as (list of row dicts, pivot columns)."""
        return rref_of_rows(self.rows_dod(), self.nrows, self.ncols, self.field)

    def rank(self) -> int:
        if not self.cols:
            return 0
        return len(self.rref_rows()[1])

    def kernel(self) -> list:
        """Basis of the right kernel as sparse vectors (one per free column)."""
        rows, pivots = self.rref_rows()
        return kernel_from_rref(rows, pivots, self.ncols, self.field)

    def kernel_matrix(self) -> "SMat":
        return SMat.from_columns(self.kernel(), self.ncols, self.field)

    def inverse(self) -> "SMat":
        if self.nrows != self.ncols:
            raise ValueError("not square")
        if self.nrows == 0:
            return self
        inv = self.to_domain_matrix().to_dense().inv()
        return SMat(self.nrows, self.ncols, _cols_from_dod(inv.to_dod()), self.field)

    def det(self):
        if self.nrows != self.ncols:
            raise ValueError("not square")
        if self.nrows == 0:
            return self.field.one
        return self.to_domain_matrix().to_dense().det()

    def is_invertible(self) -> bool:
        if self.nrows != self.ncols:
            return False
        if self.nrows == 0:
            return True
        if len(self.cols) < self.ncols:
            return False
        return self.to_domain_matrix().to_dense().det() != 0

    def column_space(self) -> "Subspace":
        return Subspace.span(self.cols.values(), self.nrows, self.field)

    def solve(self, b: Mapping):
        """A particular solution of ``self x = b`` with free variables zero, or None."""
        rows = self.rows_dod()
        aug = self.ncols
        for i, a in b.items():
            rows.setdefault(i, {})[aug] = a
        rr, piv = rref_of_rows(rows, self.nrows, self.ncols + 1, self.field)
        if piv and piv[-1] == aug:
            return None
        x = {}
        for r, p in zip(rr, piv):
            a = r.get(aug)
            if a:
                x[p] = a
        return x


def _cols_from_dod(dod: Mapping) -> dict:
    cols: dict = {}
    for i, r in dod.items():
        for j, a in r.items():
            if a:
                cols.setdefault(j, {})[i] = a
    return cols


def rref_of_rows(rows: Mapping, nrows: int, ncols: int, field: Field):
    rows = {i: r for i, r in rows.items() if r}
    if not rows:
        return [], []
    dm = DomainMatrix.from_dod(rows, (nrows, ncols), field.domain)
    rr, piv = dm.rref()
    dod = rr.to_dod()
    out = [dod.get(k, {}) for k in range(len(piv))]
    return out, list(piv)


def kernel_from_rref(rows, pivots, ncols, field) -> list:
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    one = field.one
    basis = {f: {f: one} for f in free}
    for r, p in zip(rows, pivots):
        for j, a in r.items():
            if j != p:
                basis[j][p] = -a
    return [basis[f] for f in free]


def hstack(*mats: SMat) -> SMat:
    field = mats[0].field
    nrows = mats[0].nrows
    cols = {}
    off = 0
    for m in mats:
        if m.nrows != nrows:
            raise ValueError("row mismatch in hstack")
        for j, c in m.cols.items():
            cols[j + off] = dict(c)
        off += m.ncols
    return SMat(nrows, off, cols, field)


def vstack(*mats: SMat) -> SMat:
    field = mats[0].field
    ncols = mats[0].ncols
    cols: dict = {}
    off = 0
    for m in mats:
        if m.ncols != ncols:
            raise ValueError("column mismatch in vstack")
        for j, c in m.cols.items():
            d = cols.setdefault(j, {})
            for i, a in c.items():
                d[i + off] = a
        off += m.nrows
    return SMat(off, ncols, cols, field)


def block_diag(*mats: SMat, field: Field = None) -> SMat:
    field = field or (mats[0].field if mats else Q)
    cols = {}
    ro = co = 0
    for m in mats:
        for j, c in m.cols.items():
            cols[j + co] = {i + ro: a for i, a in c.items()}
        ro += m.nrows
        co += m.ncols
    return SMat(ro, co, cols, field)


def kron(a: SMat, b: SMat) -> SMat:
    cols = {}
    for ja, ca in a.cols.items():
        for jb, cb in b.cols.items():
            cols[ja * b.ncols + jb] = {ia * b.nrows + ib: x * y for ia, x in ca.items() for ib, y in cb.items()}
    return SMat(a.nrows * b.nrows, a.ncols * b.ncols, cols, a.field)


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A subspace of ``field^n`` held in fully reduced row echelon form.

    ``rows[p]`` is the basis vector whose pivot is coordinate ``p``; it has
    entry 1 at ``p`` and zero at every other pivot.  Coordinates of a member
    vector with respect to this basis are therefore just its pivot entries.
    """

    __slots__ = ("n", "field", "rows", "pivots")

    def __init__(self, n: int, field: Field, rows: dict | None = None):
        self.n = n
        self.field = field
        self.rows = rows if rows is not None else {}
        self.pivots = sorted(self.rows)

    @classmethod
    def span(cls, vectors: Iterable[Mapping], n: int, field: Field) -> "Subspace":
        dod = {}
        k = 0
        for v in vectors:
            if v:
                dod[k] = dict(v)
                k += 1
        if not dod:
            return cls(n, field, {})
        rr, piv = rref_of_rows(dod, k, n, field)
        return cls(n, field, {p: r for p, r in zip(piv, rr)})

    @classmethod
    def full(cls, n: int, field: Field) -> "Subspace":
        one = field.one
        return cls(n, field, {i: {i: one} for i in range(n)})

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis(self) -> list:
        return [self.rows[p] for p in self.pivots]

    def basis_matrix(self) -> SMat:
        """Columns are the basis vectors in pivot order."""
        return SMat.from_columns(self.basis(), self.n, self.field)

    def reduce(self, v: Mapping) -> dict:
        """Canonical representative of ``v`` modulo the subspace."""
        v = dict(v)
        rows = self.rows
        hits = [p for p in v if p in rows]
        for p in hits:
            c = v.get(p)
            if c:
                vec_axpy(v, -c, rows[p])
        return v

    def __contains__(self, v: Mapping) -> bool:
        return not self.reduce(v)

    def coordinates(self, v: Mapping) -> list:
        """Coefficients of ``v`` in :meth:`basis` order; ValueError if not a member."""
        if self.reduce(v):
            raise ValueError("vector is not in the subspace")
        z = self.field.zero
        return [v.get(p, z) for p in self.pivots]

    def coordinate_vector(self, v: Mapping) -> dict:
        """Sparse coordinates (index = position in pivot order)."""
        if self.reduce(v):
            raise ValueError("vector is not in the subspace")
        pos = {p: k for k, p in enumerate(self.pivots)}
        return {pos[p]: a for p, a in v.items() if p in pos}

    def complement(self) -> list:
        """Standard coordinates spanning a complement (the non-pivot positions)."""
        rows = self.rows
        return [i for i in range(self.n) if i not in rows]

    def add(self, v: Mapping) -> bool:
        """Insert ``v``; returns True if the dimension grew."""
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = self.field.one / r[p]
        r = {i: a * inv for i, a in r.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                vec_axpy(row, -c, r)
        self.rows[p] = r
        self.pivots = sorted(self.rows)
        return True

    def __le__(self, other: "Subspace") -> bool:
        return all(not other.reduce(r) for r in self.rows.values())

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __repr__(self):
        return f"Subspace(dim={self.dim}, n={self.n})"
