"""The cobar DG algebra T(S^-1 m#) of a connected graded algebra.

A basis word of T^n_{-s} is a tuple of n global basis ids of A (positive
degrees) whose Adams degrees add up to s; it stands for the tensor of the
dual basis elements.  Words are ordered by Adams-degree composition
(lexicographically) and then by the per-factor basis index.

Sign conventions
----------------
The bar differential is d[a1|...|an] = sum_{i=2}^n (-1)^(i-1) [..|a_{i-1}a_i|..].
The cobar differential is the negative transpose of d in word coordinates:
on a word (f1, ..., fn) it is

    sum_k (-1)^(k+1) (f1, ..., Delta(fk), ..., fn),

where Delta is the dual of the multiplication.  This is a derivation of
concatenation with the usual Koszul sign, and its degree 1 part is minus
the transpose of d^-2.

Elements are handled in two forms: ``dict[word, coeff]`` (``CobarElement``)
for user-facing work and ``(n, s, dict[index, coeff])`` inside the linear
algebra.
"""
from __future__ import annotations

from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .exact_linear import Field, LinearMap, Basis, SparseVec, sv_axpy
from .presentation import GradedAlgebra, TruncationError

CWord = Tuple[int, ...]
CobarElement = Dict[CWord, object]


def compositions(s: int, n: int, allowed: Callable[[int], bool]):
    """Compositions of s into n positive parts (lex order), parts filtered by ``allowed``."""
    if n == 0:
        if s == 0:
            yield ()
        return
    for first in range(1, s - n + 2):
        if not allowed(first):
            continue
        for rest in compositions(s - first, n - 1, allowed):
            yield (first,) + rest


class CobarComplex:
    """Truncated cobar complex with cached bases and differentials.

    ``N`` bounds the homological degree and ``S`` the (absolute) Adams
    degree.  Bases of T^{N+1} are available because they are the codomain of
    the last differential.
    """

    def __init__(self, alg: GradedAlgebra, N: int, S: Optional[int] = None):
        self.alg = alg
        self.F: Field = alg.F
        self.N = N
        self.S = alg.S if S is None else S
        if self.S > alg.S:
            raise TruncationError("cobar cutoff exceeds the algebra cutoff")
        self._bases: Dict[Tuple[int, int], List[CWord]] = {}
        self._index: Dict[Tuple[int, int], Dict[CWord, int]] = {}
        self._diff: Dict[Tuple[int, int], List[SparseVec]] = {}
        self._bar: Dict[Tuple[int, int], List[SparseVec]] = {}

    # -- bases ---------------------------------------------------------------

    def check(self, n: int, s: int, extra: int = 0) -> None:
        if n < 0 or s < 0:
            raise ValueError("negative degree")
        if n > self.N + extra or s > self.S:
            raise TruncationError(f"bidegree (hom {n}, Adams -{s}) outside cutoffs (N={self.N}, S={self.S})")

    def basis(self, n: int, s: int) -> List[CWord]:
        key = (n, s)
        b = self._bases.get(key)
        if b is None:
            self.check(n, s, extra=1)
            alg = self.alg
            b = []
            for comp in compositions(s, n, lambda i: alg.dim(i) > 0):
                for w in product(*[alg.gids(i) for i in comp]):
                    b.append(tuple(w))
            self._bases[key] = b
            self._index[key] = {w: i for i, w in enumerate(b)}
        return b

    def index(self, n: int, s: int) -> Dict[CWord, int]:
        self.basis(n, s)
        return self._index[(n, s)]

    def dim(self, n: int, s: int) -> int:
        return len(self.basis(n, s))

    def word_adams(self, w: CWord) -> int:
        return sum(self.alg.gid_deg[g] for g in w)

    # -- differentials --------------------------------------------------------

    def d_word(self, w: CWord) -> CobarElement:
        """Cobar differential of a single word."""
        F = self.F
        cop = self.alg.coproduct()
        out: CobarElement = {}
        for k, g in enumerate(w):
            sign = 1 if k % 2 == 0 else -1  # k is 0-based, (-1)^(k+1) with 1-based k
            pre, post = w[:k], w[k + 1:]
            for b, c, a in cop[g]:
                key = pre + (b, c) + post
                out[key] = F.norm(out.get(key, 0) + sign * a)
        return {k: v for k, v in out.items() if v}

    def differential(self, n: int, s: int) -> List[SparseVec]:
        """Columns of the cobar differential T^n_{-s} -> T^{n+1}_{-s}."""
        key = (n, s)
        cols = self._diff.get(key)
        if cols is None:
            self.check(n, s)
            tgt = self.index(n + 1, s)
            cols = []
            for w in self.basis(n, s):
                cols.append({tgt[k]: v for k, v in self.d_word(w).items()})
            self._diff[key] = cols
        return cols

    def apply_d(self, n: int, s: int, v: SparseVec) -> SparseVec:
        F = self.F
        cols = self.differential(n, s)
        out: SparseVec = {}
        for j, c in v.items():
            sv_axpy(out, c, cols[j], F)
        return out

    def bar_differential(self, n: int, s: int) -> List[SparseVec]:
        """Columns of d^-n: words of length n -> words of length n-1 (same word indexing)."""
        key = (n, s)
        cols = self._bar.get(key)
        if cols is None:
            F = self.F
            alg = self.alg
            tgt = self.index(n - 1, s) if n >= 1 else {}
            cols = []
            for w in self.basis(n, s):
                out: SparseVec = {}
                for i in range(1, n):
                    sign = -1 if i % 2 == 1 else 1  # (-1)^(i) for merging positions i-1, i (0-based i)
                    a, b = w[i - 1], w[i]
                    for t, x in alg.mult(a, b).items():
                        g = alg.gid_of[(alg.gid_deg[a] + alg.gid_deg[b], t)]
                        k = tgt[w[: i - 1] + (g,) + w[i + 1:]]
                        out[k] = F.norm(out.get(k, 0) + sign * x)
                cols.append({k: v for k, v in out.items() if v})
            self._bar[key] = cols
        return cols

    def differential_map(self, n: int, s: int) -> LinearMap:
        """Dense LinearMap form of the cobar differential (small degrees only)."""
        cols = self.differential(n, s)
        rows = self.dim(n + 1, s)
        m = [[0] * len(cols) for _ in range(rows)]
        for j, c in enumerate(cols):
            for i, x in c.items():
                m[i][j] = x
        src = Basis(tuple(self.basis(n, s)))
        tgt = Basis(tuple(self.basis(n + 1, s)))
        return LinearMap(src, tgt, m, self.F)

    def bar_differential_map(self, n: int, s: int) -> LinearMap:
        cols = self.bar_differential(n, s)
        rows = self.dim(n - 1, s)
        m = [[0] * len(cols) for _ in range(rows)]
        for j, c in enumerate(cols):
            for i, x in c.items():
                m[i][j] = x
        return LinearMap(Basis(tuple(self.basis(n, s))), Basis(tuple(self.basis(n - 1, s))), m, self.F)

    # -- conversions -----------------------------------------------------------

    def to_indexed(self, e: CobarElement) -> Tuple[int, int, SparseVec]:
        if not e:
            raise ValueError("zero element has no bidegree")
        w0 = next(iter(e))
        n, s = len(w0), self.word_adams(w0)
        idx = self.index(n, s)
        return n, s, {idx[w]: c for w, c in e.items()}

    def to_words(self, n: int, s: int, v: SparseVec) -> CobarElement:
        b = self.basis(n, s)
        return {b[i]: c for i, c in v.items()}

    def d(self, e: CobarElement) -> CobarElement:
        F = self.F
        out: CobarElement = {}
        for w, c in e.items():
            for k, x in self.d_word(w).items():
                out[k] = F.norm(out.get(k, 0) + c * x)
        return {k: v for k, v in out.items() if v}

    def concat_indexed(self, a: Tuple[int, int, SparseVec], b: Tuple[int, int, SparseVec]) -> Tuple[int, int, SparseVec]:
        F = self.F
        n1, s1, v1 = a
        n2, s2, v2 = b
        n, s = n1 + n2, s1 + s2
        if not v1 or not v2:
            return n, s, {}
        self.check(n, s, extra=1)
        b1 = self.basis(n1, s1)
        b2 = self.basis(n2, s2)
        idx = self.index(n, s)
        out: SparseVec = {}
        for i, x in v1.items():
            w1 = b1[i]
            for j, y in v2.items():
                k = idx[w1 + b2[j]]
                out[k] = F.norm(out.get(k, 0) + x * y)
        return n, s, {k: v for k, v in out.items() if v}


def concat_product(u: CobarElement, v: CobarElement, F: Field) -> CobarElement:
    """Concatenation product of cobar elements (word form)."""
    out: CobarElement = {}
    for w1, a in u.items():
        for w2, b in v.items():
            key = w1 + w2
            out[key] = F.norm(out.get(key, 0) + a * b)
    return {k: x for k, x in out.items() if x}


def koszul_sign(map_degrees: Sequence[int], block_sizes: Sequence[int], input_degrees: Sequence[int]) -> int:
    """Sign of applying f_1 (x) ... (x) f_q to x_1 (x) ... (x) x_n.

    Map j consumes the next ``block_sizes[j]`` inputs.  Moving f_j past the
    inputs of the earlier blocks costs (-1)^(deg f_j * sum of their degrees);
    only homological degrees enter.
    """
    sign = 0
    before = 0
    pos = 0
    for deg_f, size in zip(map_degrees, block_sizes):
        sign += deg_f * before
        before += sum(input_degrees[pos: pos + size])
        pos += size
    if pos != len(input_degrees):
        raise ValueError("block sizes do not cover the inputs")
    return -1 if sign % 2 else 1


def koszul_apply(maps: Sequence[Tuple[int, int, Callable]], inputs: Sequence, input_degrees: Sequence[int]):
    """Apply a tensor product of graded maps to a tensor of elements.

    ``maps`` holds triples (degree, arity, function); each function receives
    its block of inputs as positional arguments.  Returns the sign and the
    list of block outputs; the caller decides how to combine them.
    """
    degs = [m[0] for m in maps]
    sizes = [m[1] for m in maps]
    sign = koszul_sign(degs, sizes, input_degrees)
    outs = []
    pos = 0
    for _, arity, fn in maps:
        outs.append(fn(*inputs[pos: pos + arity]))
        pos += arity
    return sign, outs


def cobar_dimension_table(C: CobarComplex) -> Dict[Tuple[int, int], int]:
    return {(n, s): C.dim(n, s) for n in range(C.N + 1) for s in range(C.S + 1)}
