"""Splitting of the cobar complex, the homotopy G, and the transferred model.

At every bidegree (n, -s) the cobar complex is split as B + H + L
(coboundaries, harmonic representatives, complement of the cocycles).

* n = 0: only s = 0, H = k (the unit).
* n = 1: B = 0, H = annihilator of D_s (dual to Q_s), L = annihilator of Q_s.
* n = 2: the dual of W_s = im(d^-3) + R_s + xi_s(D_s): H is dual to R_s,
  B dual to xi_s(D_s), L dual to im(d^-3), and G = -xi_s^#.
* n >= 3: L is spanned by the pivot columns of the differential leaving
  T^n, H by the kernel vectors of the free columns that are not leads of an
  echelon basis of the coboundaries, and G inverts the differential from L.

The model maps are m_n = p lambda_n and f_n = -G lambda_n with

    lambda_n = sum_{s+t=n} (-1)^(s+1) lambda_2 (G lambda_s (x) G lambda_t),

G lambda_1 = -id, applied with Koszul signs.  Unit inputs are answered by
the strict unit rules.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .cobar import CobarComplex, koszul_sign
from .exact_linear import (
    Field,
    SparseReducer,
    SparseVec,
    sparse_column_reduce,
    sv_axpy,
    sv_dot,
    sv_scale,
)
from .presentation import AlgebraPresentation, GradedAlgebra, TruncationError

Indexed = Tuple[int, int, SparseVec]


class BidegreeSplit:
    """B + H + L decomposition of one T^n_{-s} with projection and homotopy."""

    def __init__(self, n: int, s: int, dim: int):
        self.n = n
        self.s = s
        self.dim = dim
        self.h_basis: List[SparseVec] = []

    def project(self, v: SparseVec) -> SparseVec:
        """H-coordinates of p(v)."""
        raise NotImplementedError

    def homotopy(self, v: SparseVec) -> SparseVec:
        """G(v) as a vector of T^{n-1}_{-s}."""
        raise NotImplementedError

    def p_vector(self, v: SparseVec, F: Field) -> SparseVec:
        out: SparseVec = {}
        for j, c in self.project(v).items():
            sv_axpy(out, c, self.h_basis[j], F)
        return out


class ZeroSplit(BidegreeSplit):
    def project(self, v):
        return {}

    def homotopy(self, v):
        return {}


class UnitSplit(BidegreeSplit):
    """T^0_0 = k, all of it harmonic."""

    def __init__(self):
        super().__init__(0, 0, 1)
        self.h_basis = [{0: 1}]

    def project(self, v):
        return {0: v[0]} if v.get(0) else {}

    def homotopy(self, v):
        return {}


class DegreeOneSplit(BidegreeSplit):
    def __init__(self, alg: GradedAlgebra, s: int):
        super().__init__(1, s, alg.dim(s))
        F = alg.F
        self.F = F
        self.Q = list(alg.Q[s])
        self.D_rows = alg.D_rows[s]
        self.D_piv = alg.D_pivots[s]
        self.h_basis = []
        for q in self.Q:
            h = {q: 1}
            for p, row in zip(self.D_piv, self.D_rows):
                c = row.get(q)
                if c:
                    h[p] = F.neg(c)
            self.h_basis.append(h)

    def project(self, v):
        return {j: v[q] for j, q in enumerate(self.Q) if v.get(q)}

    def homotopy(self, v):
        return {}

    def pr_L(self, v):
        F = self.F
        out = {}
        for p, row in zip(self.D_piv, self.D_rows):
            x = sv_dot(v, row, F)
            if x:
                out[p] = x
        return out


class DegreeTwoSplit(BidegreeSplit):
    """Dual of the decomposition W_s = im(d^-3) + R_s + xi_s(D_s)."""

    def __init__(self, alg: GradedAlgebra, C: CobarComplex, s: int):
        dim = C.dim(2, s)
        super().__init__(2, s, dim)
        F = alg.F
        self.F = F
        self.alg = alg
        rel = alg.relations(s)
        self.rel = rel
        if rel.W_words != C.basis(2, s):
            raise AssertionError("bar and cobar word orders disagree")
        self.R = rel.R
        self.xiD = rel.xiD
        nR, nD = len(rel.R), len(rel.xiD)
        # dual basis for the R and xi(D) blocks: solve <row, x> = rhs
        red = SparseReducer(F)
        for u in rel.im_d3:
            red.insert(u, tag={})
        for j, r in enumerate(rel.R):
            if red.insert(r, tag={j: 1}) is None:
                raise AssertionError("R_s meets im(d^-3)")
        for k, w in enumerate(rel.xiD):
            if red.insert(w, tag={nR + k: 1}) is None:
                raise AssertionError("xi(D_s) meets ker(d^-2)")
        if len(red) != dim:
            raise AssertionError(f"W_{s} decomposition has {len(red)} vectors, expected {dim}")
        # back substitution, vector-valued right hand side
        sol: Dict[int, SparseVec] = {}
        for l in sorted(red.rows, reverse=True):
            row = red.rows[l]
            val = dict(red.tags[l])
            for k, a in row.items():
                if k != l and k in sol:
                    sv_axpy(val, F.neg(a), sol[k], F)
            sol[l] = val
        duals: List[SparseVec] = [dict() for _ in range(nR + nD)]
        for l, val in sol.items():
            for j, c in val.items():
                duals[j][l] = c
        self.h_basis = duals[:nR]
        self.b_basis = duals[nR:]
        self.xi = alg.xi[s]

    def project(self, v):
        F = self.F
        out = {}
        for j, r in enumerate(self.R):
            x = sv_dot(v, r, F)
            if x:
                out[j] = x
        return out

    def pr_B(self, v):
        F = self.F
        out: SparseVec = {}
        for k, w in enumerate(self.xiD):
            x = sv_dot(v, w, F)
            if x:
                sv_axpy(out, x, self.b_basis[k], F)
        return out

    def pr_L(self, v):
        F = self.F
        out = dict(v)
        sv_axpy(out, F.neg(1), self.p_vector(v, F), F)
        sv_axpy(out, F.neg(1), self.pr_B(v), F)
        return out

    def homotopy(self, v):
        """G = -xi^#: (G phi)(a) = -phi(xi_s(a))."""
        F = self.F
        W_index = self.rel.W_index
        out = {}
        for a, img in enumerate(self.xi):
            acc = 0
            for key, c in img.items():
                k = W_index.get(key)
                if k is not None:
                    x = v.get(k)
                    if x:
                        acc += c * x
            acc = F.norm(-acc)
            if acc:
                out[a] = acc
        return out


class GenericSplit(BidegreeSplit):
    """Splitting for n >= 3 driven by the two adjacent differentials."""

    def __init__(self, C: CobarComplex, s: int, n: int, lower: BidegreeSplit):
        super().__init__(n, s, C.dim(n, s))
        F = C.F
        self.F = F
        self.lower = lower
        out_cols = C.differential(n, s)
        kd = sparse_column_reduce(out_cols, F)
        self.kd = kd
        free = kd.free
        self.free_set = set(free)
        self.kernel = kd.kernel
        # coboundaries: images of the incoming differential
        in_kd = C._kernel_cache(n - 1, s)
        in_cols = C.differential(n - 1, s)
        red = SparseReducer(F)
        for p in in_kd.pivots:
            col = in_cols[p]
            restricted = {k: x for k, x in col.items() if k in self.free_set}
            if red.insert(restricted, tag={p: 1}) is None:
                raise AssertionError("coboundary images are dependent")
        self.b_red = red
        leads = set(red.rows)
        self.h_free = [j for j in free if j not in leads]
        self.h_pos = {j: k for k, j in enumerate(self.h_free)}
        self.h_basis = [self.kernel[j] for j in self.h_free]

    def _reduce(self, v: SparseVec):
        z = {k: x for k, x in v.items() if k in self.free_set}
        return self.b_red.reduce(z, want_coeffs=True)

    def project(self, v):
        rem, _ = self._reduce(v)
        return {self.h_pos[k]: x for k, x in rem.items()}

    def homotopy(self, v):
        _, coeffs = self._reduce(v)
        pre = self.b_red.combine_tags(coeffs)
        if isinstance(self.lower, DegreeTwoSplit):
            pre = self.lower.pr_L(pre)
        return pre


@dataclass
class HElement:
    gid: int
    n: int
    s: int
    j: int
    label: str
    vec: SparseVec


def _kernel_cache(self: CobarComplex, n: int, s: int):
    cache = self.__dict__.setdefault("_kd_cache", {})
    kd = cache.get((n, s))
    if kd is None:
        kd = sparse_column_reduce(self.differential(n, s), self.F)
        cache[(n, s)] = kd
    return kd


CobarComplex._kernel_cache = _kernel_cache


class SplittingData:
    """All bidegree splittings within cutoffs, built lazily."""

    def __init__(self, alg: GradedAlgebra, C: CobarComplex):
        self.alg = alg
        self.C = C
        self.F = alg.F
        self._splits: Dict[Tuple[int, int], BidegreeSplit] = {}

    def split(self, n: int, s: int) -> BidegreeSplit:
        key = (n, s)
        sp = self._splits.get(key)
        if sp is not None:
            return sp
        self.C.check(n, s)
        if n == 0:
            sp = UnitSplit() if s == 0 else ZeroSplit(0, s, 0)
        elif self.C.dim(n, s) == 0:
            sp = ZeroSplit(n, s, 0)
        elif n == 1:
            sp = DegreeOneSplit(self.alg, s)
        elif n == 2:
            sp = DegreeTwoSplit(self.alg, self.C, s)
        else:
            lower = self.split(n - 1, s)
            sp = GenericSplit(self.C, s, n, lower)
            if hasattr(sp, "kd"):
                self.C.__dict__.setdefault("_kd_cache", {})[(n, s)] = sp.kd
        self._splits[key] = sp
        return sp

    def h_dim(self, n: int, s: int) -> int:
        return len(self.split(n, s).h_basis)

    def p(self, n: int, s: int, v: SparseVec) -> SparseVec:
        return self.split(n, s).p_vector(v, self.F)

    def G(self, n: int, s: int, v: SparseVec) -> SparseVec:
        if n == 0 or not v:
            return {}
        return self.split(n, s).homotopy(v)


def build_splitting(alg: GradedAlgebra, C: CobarComplex) -> SplittingData:
    return SplittingData(alg, C)


# ---------------------------------------------------------------------------
# the model


class AInftyModel:
    """Merkulov model on the cohomology of the cobar complex.

    H-basis elements get global ids; id 0 is the unit.  ``m(ids)`` returns a
    dict {id: coeff}; ``f(ids)`` returns an indexed cobar element
    (n, s, vec).  Values are memoized.
    """

    def __init__(self, pres: AlgebraPresentation, N: int, S: int, n_max: Optional[int] = None):
        self.pres = pres
        self.F = pres.field
        self.N = N
        self.S = S
        self.alg = GradedAlgebra(pres, S)
        self.C = CobarComplex(self.alg, N, S)
        self.split = SplittingData(self.alg, self.C)
        self.n_max = n_max
        self.H: List[HElement] = []
        self.H_at: Dict[Tuple[int, int], List[int]] = {}
        self.label_to_id: Dict[str, int] = {}
        self._glambda: Dict[Tuple[int, ...], Indexed] = {}
        self._m: Dict[Tuple[int, ...], SparseVec] = {}
        self._enumerate_h()

    # -- cohomology basis --------------------------------------------------

    def _label(self, n: int, s: int, j: int) -> str:
        alg = self.alg
        if n == 0:
            return "1"
        if n == 1:
            q = alg.Q[s][j]
            return "b_" + alg.gid_label(alg.gid_of[(s, q)])
        if n == 2:
            return f"s{s}" if self.split.h_dim(2, s) == 1 else f"s{s}_{j}"
        return f"h{n}_{s}_{j}"

    def _enumerate_h(self) -> None:
        for n in range(self.N + 1):
            for s in range(self.S + 1):
                if n == 0 and s != 0:
                    continue
                if n > s and n > 0:
                    continue
                sp = self.split.split(n, s)
                ids = []
                for j, vec in enumerate(sp.h_basis):
                    gid = len(self.H)
                    lab = self._label(n, s, j)
                    self.H.append(HElement(gid, n, s, j, lab, vec))
                    self.label_to_id[lab] = gid
                    ids.append(gid)
                self.H_at[(n, s)] = ids

    def h_dims(self) -> Dict[Tuple[int, int], int]:
        return {k: len(v) for k, v in self.H_at.items()}

    def hdeg(self, i: int) -> int:
        return self.H[i].n

    def adeg(self, i: int) -> int:
        return self.H[i].s

    def label(self, i: int) -> str:
        return self.H[i].label

    def lookup(self, label: str) -> int:
        if label not in self.label_to_id:
            raise KeyError(f"unknown cohomology class {label!r}; known: {sorted(self.label_to_id)}")
        return self.label_to_id[label]

    def h_vector(self, i: int) -> Indexed:
        e = self.H[i]
        return e.n, e.s, e.vec

    def out_bidegree(self, ids: Sequence[int]) -> Tuple[int, int]:
        n = len(ids)
        return sum(self.H[i].n for i in ids) + 2 - n, sum(self.H[i].s for i in ids)

    def within(self, ids: Sequence[int]) -> bool:
        hom, s = self.out_bidegree(ids)
        return s <= self.S and 0 <= hom <= self.N

    # -- recursion ---------------------------------------------------------

    def _combine(self, a: Indexed, b: Indexed, coeff) -> Indexed:
        n, s, v = self.C.concat_indexed(a, b)
        if coeff != 1:
            v = sv_scale(v, coeff, self.F)
        return n, s, v

    def glambda(self, ids: Tuple[int, ...]) -> Indexed:
        """G lambda_k on H-basis inputs (k >= 1), with G lambda_1 = -id."""
        F = self.F
        k = len(ids)
        if k == 1:
            n, s, v = self.h_vector(ids[0])
            return n, s, sv_scale(v, F.neg(1), F)
        got = self._glambda.get(ids)
        if got is not None:
            return got
        n, s, lam = self.lam(ids)
        res = (n - 1, s, self.split.G(n, s, lam) if lam else {})
        self._glambda[ids] = res
        return res

    def lam(self, ids: Tuple[int, ...]) -> Indexed:
        """lambda_n on H-basis inputs as an indexed cobar element (n >= 2)."""
        F = self.F
        k = len(ids)
        hom = sum(self.H[i].n for i in ids) + 2 - k
        s = sum(self.H[i].s for i in ids)
        if hom > self.N or s > self.S:
            raise TruncationError(f"lambda_{k} lands in (hom {hom}, Adams -{s}) beyond cutoffs")
        degs = [self.H[i].n for i in ids]
        if k == 2:
            return self.C.concat_indexed(self.h_vector(ids[0]), self.h_vector(ids[1]))
        acc: SparseVec = {}
        for a in range(1, k):
            b = k - a
            # (-1)^(a+1) lambda_2 (G lambda_a (x) G lambda_b), Koszul sign from
            # moving G lambda_b (degree 1-b) past the first a inputs
            sign = (1 if (a + 1) % 2 == 0 else -1) * koszul_sign([1 - a, 1 - b], [a, b], degs)
            left = self.glambda(ids[:a])
            if not left[2]:
                continue
            right = self.glambda(ids[a:])
            if not right[2]:
                continue
            _, _, v = self.C.concat_indexed(left, right)
            sv_axpy(acc, sign, v, F)
        return hom, s, acc

    # -- model maps --------------------------------------------------------

    def is_unit(self, i: int) -> bool:
        return i == 0 and self.H[0].n == 0

    def m(self, ids: Sequence[int]) -> SparseVec:
        """m_n on H-basis elements, in H coordinates (dict id -> coeff)."""
        ids = tuple(ids)
        k = len(ids)
        if k < 1:
            raise ValueError("m_n needs at least one input")
        if k == 1:
            return {}
        if any(self.is_unit(i) for i in ids):
            if k != 2:
                return {}
            other = ids[1] if self.is_unit(ids[0]) else ids[0]
            return {other: 1}
        got = self._m.get(ids)
        if got is not None:
            return got
        hom, s = self.out_bidegree(ids)
        if s > self.S or hom > self.N:
            raise TruncationError(f"m_{k} output (hom {hom}, Adams -{s}) beyond cutoffs")
        if hom < 0 or not self.H_at.get((hom, s)):
            res: SparseVec = {}
        else:
            _, _, lam = self.lam(ids)
            coords = self.split.split(hom, s).project(lam) if lam else {}
            base = self.H_at[(hom, s)]
            res = {base[j]: c for j, c in coords.items()}
        self._m[ids] = res
        return res

    def f(self, ids: Sequence[int]) -> Indexed:
        """f_n = -G lambda_n on H-basis elements, f_1 the inclusion."""
        F = self.F
        ids = tuple(ids)
        k = len(ids)
        if k == 1:
            return self.h_vector(ids[0])
        hom = sum(self.H[i].n for i in ids) + 1 - k
        s = sum(self.H[i].s for i in ids)
        if any(self.is_unit(i) for i in ids):
            return hom, s, {}
        n, s2, v = self.glambda(ids)
        return n, s2, sv_scale(v, F.neg(1), F)

    # -- tables ------------------------------------------------------------

    def nonunit_ids(self) -> List[int]:
        return [i for i in range(len(self.H)) if not self.is_unit(i)]

    def tuples(self, n: int, max_out_hom: Optional[int] = None):
        """All nonunit H-basis n-tuples whose output bidegree fits the cutoffs."""
        ids = sorted(self.nonunit_ids(), key=lambda i: i)
        S, N = self.S, self.N
        cap = N if max_out_hom is None else max_out_hom
        out = []

        def rec(prefix, s_acc, h_acc):
            if len(prefix) == n:
                hom = h_acc + 2 - n
                if 0 <= hom <= cap:
                    out.append(tuple(prefix))
                return
            remaining = n - len(prefix) - 1
            for i in ids:
                e = self.H[i]
                s2 = s_acc + e.s
                h2 = h_acc + e.n
                # every later input adds Adams >= 1 and hom >= 1
                if s2 + remaining > S:
                    continue
                if h2 + remaining + 2 - n > cap:
                    continue
                prefix.append(i)
                rec(prefix, s2, h2)
                prefix.pop()

        rec([], 0, 0)
        return out

    def table(self, n: int) -> Dict[Tuple[int, ...], SparseVec]:
        out = {}
        for t in self.tuples(n):
            v = self.m(t)
            if v:
                out[t] = v
        return out

    def max_arity(self) -> int:
        return self.S if self.n_max is None else min(self.S, self.n_max)


def build_model(pres: AlgebraPresentation, N: Optional[int] = None, S: Optional[int] = None) -> AInftyModel:
    N = pres.cutoff_hom if N is None else N
    S = pres.cutoff_adams if S is None else S
    if N is None or S is None:
        raise ValueError("cutoffs must be given either in the file or explicitly")
    return AInftyModel(pres, N, S)


def lambda_n(model: AInftyModel, ids: Sequence[int]) -> Indexed:
    return model.lam(tuple(ids))


def m_n(model: AInftyModel, ids: Sequence[int]) -> SparseVec:
    return model.m(ids)


def f_n(model: AInftyModel, ids: Sequence[int]) -> Indexed:
    return model.f(ids)
