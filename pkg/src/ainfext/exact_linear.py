"""Exact field arithmetic and deterministic linear algebra.

Two kinds of field are supported: GF(p) for a prime p (elements are ints in
[0, p)) and the rationals (elements are ints or ``fractions.Fraction`` in
lowest terms).  Nothing here ever touches floating point.

Dense routines (``row_reduce``, ``kernel_basis``, ...) work on lists of lists
and are meant for small matrices and for tests.  The sparse routines
(``SparseReducer`` and friends) work on ``dict[int, scalar]`` vectors and are
what the cobar machinery uses for its larger bidegrees.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

Scalar = Any
SparseVec = Dict[int, Scalar]


class FieldError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    """GF(p) when ``char`` is a prime, the rationals when ``char == 0``."""

    def __init__(self, char: int):
        char = int(char)
        if char != 0 and not _is_prime(char):
            raise FieldError(f"field characteristic {char} is not 0 or a prime")
        self.char = char
        self.zero = 0
        self.one = 1

    # identity by characteristic, so fields built separately still compare equal
    def __eq__(self, other):
        return isinstance(other, Field) and other.char == self.char

    def __hash__(self):
        return hash(("Field", self.char))

    def __repr__(self):
        return f"Field({self.char})"

    @property
    def name(self) -> str:
        return "QQ" if self.char == 0 else f"GF({self.char})"

    def norm(self, x) -> Scalar:
        """Canonical representative of ``x``."""
        p = self.char
        if type(x) is int:  # fast path; Fraction isinstance checks go through the ABC machinery
            return x % p if p else x
        if p:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, p - 2, p)) % p
            return int(x) % p
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        return int(x)

    def inv(self, x) -> Scalar:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        p = self.char
        if p:
            return pow(int(x), p - 2, p)
        if x == 1 or x == -1:
            return int(x)
        r = Fraction(1) / Fraction(x)
        return r.numerator if r.denominator == 1 else r

    def add(self, a, b):
        return self.norm(a + b)

    def sub(self, a, b):
        return self.norm(a - b)

    def mul(self, a, b):
        return self.norm(a * b)

    def neg(self, a):
        return self.norm(-a)

    def div(self, a, b):
        return self.norm(a * self.inv(b))

    def parse(self, text: str) -> Scalar:
        return self.norm(Fraction(text.strip()))

    def fmt(self, x) -> str:
        """Text form used in JSON and tables.

        Over GF(p) the symmetric representative is printed (p-1 shows as -1),
        which keeps signs readable; ``parse`` maps it back.
        """
        if self.char:
            x = int(x)
            if self.char > 2 and x > self.char // 2:
                x -= self.char
            return str(x)
        return str(x)

    def random(self, rng, bound: int = 3) -> Scalar:
        if self.char:
            return rng.randrange(self.char)
        return self.norm(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)))


GF2 = Field(2)
QQ = Field(0)


# ---------------------------------------------------------------------------
# labelled bases and linear maps


@dataclass(frozen=True)
class Basis:
    labels: Tuple[Hashable, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("basis labels must be distinct")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        return self.labels.index(label)

    def dual(self) -> "Basis":
        return Basis(tuple(("dual", lab) if not _is_dual(lab) else lab[1] for lab in self.labels))


def _is_dual(lab) -> bool:
    return isinstance(lab, tuple) and len(lab) == 2 and lab[0] == "dual"


@dataclass
class LinearMap:
    """Column j of ``matrix`` is the image of source basis vector j."""

    source: Basis
    target: Basis
    matrix: List[List[Scalar]]
    field: Field = field(default=QQ)

    def __post_init__(self):
        if len(self.matrix) != self.target.dim:
            raise ValueError("matrix row count does not match target dimension")
        for row in self.matrix:
            if len(row) != self.source.dim:
                raise ValueError("matrix column count does not match source dimension")

    def apply(self, v: Sequence[Scalar]) -> List[Scalar]:
        F = self.field
        return [F.norm(sum(r[j] * v[j] for j in range(len(v)))) for r in self.matrix]

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self after other."""
        return LinearMap(other.source, self.target, matmul(self.matrix, other.matrix, self.field, other.source.dim), self.field)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.matrix for x in r)


def zeros(r: int, c: int) -> List[List[Scalar]]:
    return [[0] * c for _ in range(r)]


def identity(n: int) -> List[List[Scalar]]:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def transpose(m: Sequence[Sequence[Scalar]], ncols: Optional[int] = None) -> List[List[Scalar]]:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a, b, F: Field, ncols: Optional[int] = None) -> List[List[Scalar]]:
    if ncols is None:
        ncols = len(b[0]) if b else 0
    inner = len(b)
    out = []
    for row in a:
        out.append([F.norm(sum(row[k] * b[k][j] for k in range(inner))) for j in range(ncols)])
    return out


# ---------------------------------------------------------------------------
# dense routines


def row_reduce(m: Sequence[Sequence[Scalar]], F: Field, ncols: Optional[int] = None):
    """Reduced row echelon form.

    Returns ``(E, pivots, T)`` with ``T * m == E``, ``E`` the unique RREF of
    ``m`` and ``pivots`` the strictly increasing list of pivot columns.
    """
    rows = [[F.norm(x) for x in r] for r in m]
    nr = len(rows)
    nc = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    T = identity(nr)
    pivots: List[int] = []
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        piv = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            T[r], T[piv] = T[piv], T[r]
        inv = F.inv(rows[r][c])
        if inv != 1:
            rows[r] = [F.norm(x * inv) for x in rows[r]]
            T[r] = [F.norm(x * inv) for x in T[r]]
        for i in range(nr):
            if i != r and rows[i][c] != 0:
                a = rows[i][c]
                rows[i] = [F.norm(x - a * y) for x, y in zip(rows[i], rows[r])]
                T[i] = [F.norm(x - a * y) for x, y in zip(T[i], T[r])]
        pivots.append(c)
        r += 1
    return rows, pivots, T


def rank(m, F: Field, ncols: Optional[int] = None) -> int:
    return len(row_reduce(m, F, ncols)[1])


def _kernel_of_matrix(m, F: Field, ncols: int) -> List[List[Scalar]]:
    E, pivots, _ = row_reduce(m, F, ncols)
    pivset = set(pivots)
    out = []
    for j in range(ncols):
        if j in pivset:
            continue
        v = [0] * ncols
        v[j] = 1
        for row, pc in zip(E, pivots):
            if row[j] != 0:
                v[pc] = F.neg(row[j])
        out.append(v)
    return out


def kernel_basis(f: LinearMap) -> List[List[Scalar]]:
    """Kernel vectors, one per free column of the RREF, in column order."""
    return _kernel_of_matrix(f.matrix, f.field, f.source.dim)


def image_basis(f: LinearMap) -> List[List[Scalar]]:
    """Nonzero rows of the RREF of the transpose: a canonical image basis."""
    mt = transpose(f.matrix, f.source.dim)
    E, pivots, _ = row_reduce(mt, f.field, f.target.dim)
    return [E[i] for i in range(len(pivots))]


def canonical_complement(sub: Sequence[Sequence[Scalar]], ambient_dim: int, F: Field) -> List[List[Scalar]]:
    """Standard vectors e_i, i not a pivot column of the row-reduced ``sub``."""
    sub = [list(v) for v in sub]
    if sub:
        _, pivots, _ = row_reduce(sub, F, ambient_dim)
        if len(pivots) != len(sub):
            raise ValueError("canonical_complement: input vectors are linearly dependent")
    else:
        pivots = []
    pivset = set(pivots)
    out = []
    for i in range(ambient_dim):
        if i not in pivset:
            e = [0] * ambient_dim
            e[i] = 1
            out.append(e)
    return out


def dual_map(f: LinearMap) -> LinearMap:
    return LinearMap(f.target.dual(), f.source.dual(), transpose(f.matrix, f.source.dim), f.field)


def solve(m, b, F: Field, ncols: int) -> Optional[List[Scalar]]:
    """A solution x of m x = b supported on pivot columns, or None."""
    aug = [list(r) + [bi] for r, bi in zip(m, b)]
    E, pivots, _ = row_reduce(aug, F, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [0] * ncols
    for row, pc in zip(E, pivots):
        x[pc] = row[ncols]
    return x


def inverse(m, F: Field) -> List[List[Scalar]]:
    n = len(m)
    E, pivots, T = row_reduce(m, F, n)
    if len(pivots) != n:
        raise ValueError("matrix is singular")
    return T


# ---------------------------------------------------------------------------
# sparse vectors


def sv_axpy(v: SparseVec, a: Scalar, w: SparseVec, F: Field) -> None:
    """v += a * w, in place, dropping zeros."""
    if a == 0:
        return
    p = F.char
    if p:
        for k, x in w.items():
            y = (v.get(k, 0) + a * x) % p
            if y:
                v[k] = y
            else:
                v.pop(k, None)
    else:
        for k, x in w.items():
            y = v.get(k, 0) + a * x
            if y:
                v[k] = F.norm(y)
            else:
                v.pop(k, None)


def sv_scale(v: SparseVec, a: Scalar, F: Field) -> SparseVec:
    if a == 0:
        return {}
    return {k: F.norm(x * a) for k, x in v.items()}


def sv_add(v: SparseVec, w: SparseVec, F: Field, a: Scalar = 1) -> SparseVec:
    out = dict(v)
    sv_axpy(out, a, w, F)
    return out


def sv_dot(v: SparseVec, w: SparseVec, F: Field) -> Scalar:
    if len(v) > len(w):
        v, w = w, v
    s = 0
    for k, x in v.items():
        y = w.get(k)
        if y is not None:
            s += x * y
    return F.norm(s)


def dense_to_sparse(v: Sequence[Scalar]) -> SparseVec:
    return {i: x for i, x in enumerate(v) if x != 0}


def sparse_to_dense(v: SparseVec, n: int) -> List[Scalar]:
    out = [0] * n
    for k, x in v.items():
        out[k] = x
    return out


class SparseReducer:
    """Incremental echelon form over sparse vectors.

    Each stored row has a lead (its smallest index, or its largest with
    ``lead_max``; coefficient 1) and an
    optional ``tag``: a sparse combination of caller-side objects that the
    row stands for.  Reducing a vector reports how much of each stored row
    was subtracted, which turns the reducer into a solver.
    """

    def __init__(self, F: Field, lead_max: bool = False):
        self.F = F
        self.lead_max = lead_max
        self.rows: Dict[int, SparseVec] = {}
        self.tags: Dict[int, SparseVec] = {}

    def __len__(self):
        return len(self.rows)

    def leads(self) -> List[int]:
        return sorted(self.rows)

    def reduce(self, v: SparseVec, want_coeffs: bool = False):
        """Return ``(remainder, coeffs)`` with v = remainder + sum coeffs[l]*row[l].

        The remainder has no entry at any stored lead.
        """
        F = self.F
        v = dict(v)
        rows = self.rows
        coeffs: Dict[int, Scalar] = {}
        # leads are processed in elimination order; a row only touches
        # indices on the far side of its lead, so each lead is visited once
        sgn = -1 if self.lead_max else 1
        heap = [sgn * k for k in v if k in rows]
        heapq.heapify(heap)
        seen = set()
        while heap:
            k = sgn * heapq.heappop(heap)
            if k in seen:
                continue
            a = v.get(k)
            if not a:
                continue
            seen.add(k)
            row = rows[k]
            sv_axpy(v, F.neg(a), row, F)
            if want_coeffs:
                coeffs[k] = a
            for j in row:
                if j in rows and j not in seen and j in v:
                    heapq.heappush(heap, sgn * j)
        return v, coeffs

    def insert(self, v: SparseVec, tag: Optional[SparseVec] = None) -> Optional[int]:
        """Reduce ``v`` and store the remainder; return its lead or None."""
        F = self.F
        r, coeffs = self.reduce(v, want_coeffs=tag is not None)
        if not r:
            return None
        lead = max(r) if self.lead_max else min(r)
        inv = F.inv(r[lead])
        if inv != 1:
            r = sv_scale(r, inv, F)
        self.rows[lead] = r
        if tag is not None:
            t = dict(tag)
            for l, a in coeffs.items():
                sv_axpy(t, F.neg(a), self.tags[l], F)
            self.tags[lead] = sv_scale(t, inv, F)
        return lead

    def combine_tags(self, coeffs: Dict[int, Scalar]) -> SparseVec:
        out: SparseVec = {}
        for l, a in coeffs.items():
            sv_axpy(out, a, self.tags[l], self.F)
        return out

    def in_span(self, v: SparseVec) -> bool:
        return not self.reduce(v)[0]


@dataclass
class SparseKernelData:
    """Output of ``sparse_column_reduce`` for a map given by its columns."""

    ncols: int
    pivots: List[int]
    free: List[int]
    kernel: Dict[int, SparseVec]
    reducer: SparseReducer

    def preimage(self, b: SparseVec) -> SparseVec:
        """Some x supported on pivot columns with f(x) = b; raises if b not in the image."""
        r, coeffs = self.reducer.reduce(b, want_coeffs=True)
        if r:
            raise ValueError("vector is not in the image")
        return self.reducer.combine_tags(coeffs)


def sparse_column_reduce(columns: Sequence[SparseVec], F: Field) -> SparseKernelData:
    """Column-by-column elimination of a map given by its sparse columns.

    A column is a pivot column iff its image is independent of the earlier
    columns, exactly as in the RREF of the full matrix.  For a free column j
    the stored kernel vector is e_j minus the unique combination of earlier
    pivot columns with the same image, i.e. the RREF kernel vector.
    """
    # rows are led by their largest index: the outputs do not depend on the
    # row order, and on cobar differentials this keeps fill-in small
    red = SparseReducer(F, lead_max=True)
    pivots: List[int] = []
    free: List[int] = []
    kernel: Dict[int, SparseVec] = {}
    for j, col in enumerate(columns):
        if not col:
            free.append(j)
            kernel[j] = {j: 1}
            continue
        r, coeffs = red.reduce(col, want_coeffs=True)
        if not r:
            free.append(j)
            k = {j: 1}
            for l, a in coeffs.items():
                sv_axpy(k, F.neg(a), red.tags[l], F)
            kernel[j] = k
            continue
        lead = max(r)
        inv = F.inv(r[lead])
        t = {j: 1}
        for l, a in coeffs.items():
            sv_axpy(t, F.neg(a), red.tags[l], F)
        red.rows[lead] = sv_scale(r, inv, F) if inv != 1 else r
        red.tags[lead] = sv_scale(t, inv, F) if inv != 1 else t
        pivots.append(j)
    return SparseKernelData(len(columns), pivots, free, kernel, red)


def sparse_rank(vectors: Iterable[SparseVec], F: Field) -> int:
    red = SparseReducer(F)
    for v in vectors:
        red.insert(v)
    return len(red)
