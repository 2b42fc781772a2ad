"""Recovering relations from the higher multiplications on Ext^1, the
round trip back to a presentation, and an independent Ext oracle.

The E^1 classes are dual to the indecomposables Q, and every element of Q
is a single generator, so an n-tuple of E^1 classes is a word of length n
in the generators.  ``relation_matrix`` builds the dual of

    R_s -> Q (x) A -> (Q^{(x) n})_s

from the presentation alone (the tensor images of the minimal relations
under id (x) lift), and ``restrict_m_to_E1`` reads the same map off the
model.  With Koszul signs the two agree up to the sign
(-1)^((n-2)(n-3)/2) of ``koszul_length_sign``; recovery multiplies the
length-n block by that sign so that mixed-length relations come back
correctly.

The oracle builds a minimal free resolution of k over A with its own
normal forms (right multiplication by generators) and shares only the
linear algebra with the rest of the package.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .exact_linear import (
    Basis,
    Field,
    LinearMap,
    SparseReducer,
    SparseVec,
    sparse_column_reduce,
    sv_axpy,
)
from .merkulov import AInftyModel
from .presentation import AlgebraPresentation, GradedAlgebra, TruncationError

Word = Tuple[int, ...]


def koszul_length_sign(n: int) -> int:
    """Sign relating m_n on (E^1)^{(x) n} to the dual of the length-n relation part."""
    return -1 if ((n - 2) * (n - 3) // 2) % 2 else 1


# ---------------------------------------------------------------------------
# relation matrix maps


def e1_ids(model: AInftyModel) -> List[int]:
    return [i for i in range(len(model.H)) if model.H[i].n == 1]


def e1_generator(model: AInftyModel, i: int) -> int:
    """Generator index of the Q element dual to the E^1 class i."""
    alg = model.alg
    e = model.H[i]
    q = alg.Q[e.s][e.j]
    word = alg.gid_word[alg.gid_of[(e.s, q)]]
    if len(word) != 1:
        raise AssertionError("indecomposable is not a single generator")
    return word[0]


def e1_tuples(model: AInftyModel, n: int, s: int) -> List[Tuple[int, ...]]:
    """n-tuples of E^1 classes of total Adams degree s, lexicographic in ids."""
    ids = e1_ids(model)
    out: List[Tuple[int, ...]] = []

    def rec(prefix, acc):
        if len(prefix) == n:
            if acc == s:
                out.append(tuple(prefix))
            return
        left = n - len(prefix) - 1
        for i in ids:
            t = acc + model.H[i].s
            if t + left <= s:
                prefix.append(i)
                rec(prefix, t)
                prefix.pop()

    rec([], 0)
    return out


def _check_range(model: AInftyModel, n: int, s: int) -> None:
    if s > model.S or model.N < 2:
        raise TruncationError(f"(E^1)^{n} in Adams degree -{s} needs N >= 2 and S >= {s}")


def restrict_m_to_E1(model: AInftyModel, n: int, s: int) -> LinearMap:
    """Matrix of m_n on ((E^1)^{(x) n})_{-s} with values in E^2_{-s}."""
    _check_range(model, n, s)
    cols = e1_tuples(model, n, s)
    rows = model.H_at.get((2, s), [])
    pos = {h: k for k, h in enumerate(rows)}
    mat = [[0] * len(cols) for _ in rows]
    for j, t in enumerate(cols):
        for h, c in model.m(t).items():
            mat[pos[h]][j] = c
    src = Basis(tuple(tuple(model.label(i) for i in t) for t in cols))
    tgt = Basis(tuple(model.label(h) for h in rows))
    return LinearMap(src, tgt, mat, model.F)


def relation_matrix(model: AInftyModel, n: int, s: int) -> LinearMap:
    """Dual of R_s -> (Q^{(x) n})_s from the presentation data.

    Row j is the length-n part of the tensor image of the j-th minimal
    relation, read as a functional on E^1 words.  The rows are in the order
    of the E^2 basis, which is dual to the relation basis.
    """
    _check_range(model, n, s)
    alg = model.alg
    cols = e1_tuples(model, n, s)
    rel = alg.relations(s)
    # E^1 class -> Q gid
    gid_of_class = {}
    for i in e1_ids(model):
        e = model.H[i]
        gid_of_class[i] = alg.gid_of[(e.s, alg.Q[e.s][e.j])]
    mat = []
    for h in rel.honest:
        row = []
        for t in cols:
            key = tuple(gid_of_class[i] for i in t)
            row.append(h.get(key, 0))
        mat.append(row)
    src = Basis(tuple(tuple(model.label(i) for i in t) for t in cols))
    tgt = Basis(tuple(model.label(h) for h in model.H_at.get((2, s), [])))
    if tgt.dim != len(mat):
        raise AssertionError("E^2 basis and relation basis differ in size")
    return LinearMap(src, tgt, mat, model.F)


@dataclass
class RelationMatrixReport:
    checked: List[Tuple[int, int]] = field(default_factory=list)
    mismatches: List[Tuple[int, int]] = field(default_factory=list)
    sign_only: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def relation_matrix_ranges(model: AInftyModel) -> List[Tuple[int, int]]:
    if model.N < 2:
        return []
    degs = sorted(model.H[i].s for i in e1_ids(model))
    out = []
    for s in range(2, model.S + 1):
        for n in range(2, s + 1):
            if degs and n * degs[0] <= s:
                out.append((n, s))
    return out


def check_relation_matrices(model: AInftyModel) -> RelationMatrixReport:
    """Exact comparison of restrict_m_to_E1 with relation_matrix on every (n, s).

    Mismatches that disappear after multiplying by koszul_length_sign(n) are
    also listed in ``sign_only``.
    """
    rep = RelationMatrixReport()
    F = model.F
    for n, s in relation_matrix_ranges(model):
        a = restrict_m_to_E1(model, n, s).matrix
        b = relation_matrix(model, n, s).matrix
        rep.checked.append((n, s))
        if a != b:
            rep.mismatches.append((n, s))
            eps = koszul_length_sign(n)
            if a == [[F.norm(eps * x) for x in row] for row in b]:
                rep.sign_only.append((n, s))
    return rep


# ---------------------------------------------------------------------------
# recovery


@dataclass
class RecoveredPresentation:
    field: Field
    generators: List[Tuple[str, int]]
    relations: Dict[int, List[Dict[Word, object]]]
    class_labels: List[str]

    def to_presentation(self) -> AlgebraPresentation:
        rels = []
        text = []
        P = AlgebraPresentation(self.field, list(self.generators), [])
        for s in sorted(self.relations):
            for r in self.relations[s]:
                rels.append(dict(r))
                text.append(P.format_poly(r))
        return AlgebraPresentation(self.field, list(self.generators), rels, relation_text=text)

    def dims(self) -> Dict[int, int]:
        return {s: len(v) for s, v in self.relations.items()}


def recover_relations(model: AInftyModel, s: int, koszul_correct: bool = True) -> List[Dict[Word, object]]:
    """Relations of degree s read off from all m_n on E^1, as words in the generators.

    The assembled map on words of total degree s is dualized: each E^2
    basis element gives the functional t -> coefficient of it in m(t), i.e.
    one relation vector.  These span a space of dimension dim E^2_{-s}.
    """
    F = model.F
    rows = model.H_at.get((2, s), [])
    rels: List[Dict[Word, object]] = [dict() for _ in rows]
    pos = {h: k for k, h in enumerate(rows)}
    if not rows:
        return []
    for n in range(2, s + 1):
        eps = koszul_length_sign(n) if koszul_correct else 1
        for t in e1_tuples(model, n, s):
            word = tuple(e1_generator(model, i) for i in t)
            for h, c in model.m(t).items():
                rels[pos[h]][word] = F.norm(eps * c)
    out = [{w: c for w, c in r.items() if c} for r in rels]
    # reduced echelon form on a fixed word order for a canonical basis
    words = sorted({w for r in out for w in r}, key=lambda w: (len(w), w))
    wpos = {w: k for k, w in enumerate(words)}
    red = SparseReducer(F)
    for r in out:
        red.insert({wpos[w]: c for w, c in r.items()})
    if len(red) != len(out):
        raise AssertionError("recovered relations are dependent")
    leads = sorted(red.rows)
    full: Dict[int, SparseVec] = {}
    for l in reversed(leads):
        row = dict(red.rows[l])
        for k in sorted(k for k in row if k != l and k in full):
            a = row.get(k)
            if a:
                sv_axpy(row, F.neg(a), full[k], F)
        full[l] = row
    return [{words[k]: c for k, c in full[l].items()} for l in leads]


def recover_presentation(model: AInftyModel, koszul_correct: bool = True) -> RecoveredPresentation:
    names = model.pres.gen_names
    degs = model.pres.gen_degrees
    ids = e1_ids(model)
    gens = [e1_generator(model, i) for i in ids]
    if sorted(gens) != list(range(len(names))) and model.S >= max(degs, default=0):
        raise AssertionError("E^1 classes do not match the generators")
    generators = [(names[g], degs[g]) for g in range(len(names))]
    rels = {}
    for s in range(2, model.S + 1):
        r = recover_relations(model, s, koszul_correct)
        if r:
            rels[s] = r
    return RecoveredPresentation(model.F, generators, rels, [model.label(i) for i in ids])


@dataclass
class RoundTripReport:
    ok: bool
    dims_original: List[int]
    dims_recovered: List[int]
    first_bad_degree: Optional[int]
    recovered_not_in_original: List[str]
    original_not_in_recovered: List[str]
    relation_counts: Dict[int, int]
    e2_dims: Dict[int, int]

    def line(self) -> str:
        if self.ok:
            return f"PASS round trip: dims {self.dims_original}"
        return (f"FAIL round trip at degree {self.first_bad_degree}: original {self.dims_original}, "
                f"recovered {self.dims_recovered}; {len(self.recovered_not_in_original)} recovered relations "
                f"outside the original ideal, {len(self.original_not_in_recovered)} original relations outside "
                f"the recovered ideal")


def roundtrip_check(P: AlgebraPresentation, N: int, S: int, model: Optional[AInftyModel] = None,
                    koszul_correct: bool = True) -> RoundTripReport:
    """Build the model, recover a presentation, compare graded dimensions and ideals."""
    if model is None:
        model = AInftyModel(P, N, S)
    rec = recover_presentation(model, koszul_correct)
    P2 = rec.to_presentation()
    A = model.alg
    A2 = GradedAlgebra(P2, S)
    d1 = [A.dim(s) for s in range(S + 1)]
    d2 = [A2.dim(s) for s in range(S + 1)]
    bad = next((s for s in range(S + 1) if d1[s] != d2[s]), None)
    out1 = [P2.format_poly(r) for r in P2.relations if A.nf_poly(r)]
    out2 = [P.format_poly(r) for r in P.relations
            if P.relation_degree(r) <= S and A2.nf_poly(r)]
    e2 = {s: len(model.H_at.get((2, s), [])) for s in range(2, S + 1)}
    counts = rec.dims()
    ok = bad is None and not out1 and not out2 and all(counts.get(s, 0) == e2[s] for s in e2)
    return RoundTripReport(ok, d1, d2, bad, out1, out2, counts, e2)


# ---------------------------------------------------------------------------
# independent Ext oracle


class RightNormalAlgebra:
    """A_s as the quotient of (+)_g A_{s-d_g} x_g by the span of u*r.

    Basis elements of A_s are pairs (b, g) meaning (basis element b of
    A_{s-d_g}) times generator g; ``word`` recovers a monomial for each.
    """

    def __init__(self, P: AlgebraPresentation, S: int):
        F = P.field
        self.F = F
        self.S = S
        self.degs = P.gen_degrees
        self.rels = [(P.relation_degree(r), r) for r in P.relations]
        self.cols: List[List[Tuple[int, int]]] = [[]]
        self.col_index: List[Dict[Tuple[int, int], int]] = [{}]
        self.basis_cols: List[List[int]] = [[]]  # columns of V_s that survive
        self.coord: List[Dict[int, int]] = [{}]  # surviving column -> basis position
        self.reducer: List[Optional[SparseReducer]] = [None]
        self.words: List[List[Word]] = [[()]]
        for s in range(1, S + 1):
            self._build(s)

    def dim(self, s: int) -> int:
        if s > self.S:
            raise TruncationError(f"oracle algebra cut off at Adams degree {self.S}")
        return 1 if s == 0 else len(self.basis_cols[s])

    def _vec_to_basis(self, s: int, v: SparseVec) -> SparseVec:
        r, _ = self.reducer[s].reduce(v)
        coord = self.coord[s]
        return {coord[k]: x for k, x in r.items()}

    def times_gen(self, s: int, v: SparseVec, g: int) -> SparseVec:
        """(element of A_s) * x_g as an element of A_{s+d_g}."""
        t = s + self.degs[g]
        if t > self.S:
            raise TruncationError(f"oracle algebra cut off at Adams degree {self.S}")
        idx = self.col_index[t]
        raw = {idx[(b, g)]: x for b, x in v.items()}
        return self._vec_to_basis(t, raw)

    def times_word(self, s: int, v: SparseVec, w: Word) -> SparseVec:
        for g in w:
            if not v:
                return {}
            v = self.times_gen(s, v, g)
            s += self.degs[g]
        return v

    def _build(self, s: int) -> None:
        F = self.F
        cols = []
        for g, d in enumerate(self.degs):
            if d <= s:
                for b in range(self.dim(s - d)):
                    cols.append((b, g))
        idx = {c: k for k, c in enumerate(cols)}
        self.cols.append(cols)
        self.col_index.append(idx)
        red = SparseReducer(F)
        self.reducer.append(red)
        # provisional data so that times_gen into degree s works while building
        self.basis_cols.append(list(range(len(cols))))
        self.coord.append({k: k for k in range(len(cols))})
        for d, r in self.rels:
            if d > s:
                continue
            for u in range(self.dim(s - d)):
                acc: SparseVec = {}
                for w, c in r.items():
                    # u * w[:-1] in A_{s - deg last}, then times the last letter
                    head, last = w[:-1], w[-1]
                    sd = s - d
                    v = self.times_word(sd, {u: 1}, head) if head else {u: 1}
                    if not v:
                        continue
                    raw = {idx[(b, last)]: x for b, x in v.items()}
                    sv_axpy(acc, c, raw, F)
                if acc:
                    red.insert(acc)
        surviving = [k for k in range(len(cols)) if k not in red.rows]
        self.basis_cols[s] = surviving
        self.coord[s] = {k: j for j, k in enumerate(surviving)}
        self.words.append([self.words[s - self.degs[g]][b] + (g,) for b, g in (cols[k] for k in surviving)])


class _FreeModule:
    """Free right module with generators in given degrees, truncated at S."""

    def __init__(self, A: RightNormalAlgebra, gen_degs: List[int]):
        self.A = A
        self.gen_degs = gen_degs
        self._basis: Dict[int, List[Tuple[int, int]]] = {}

    def basis(self, t: int) -> List[Tuple[int, int]]:
        b = self._basis.get(t)
        if b is None:
            b = [(j, a) for j, d in enumerate(self.gen_degs) if d <= t for a in range(self.A.dim(t - d))]
            self._basis[t] = b
        return b

    def index(self, t: int) -> Dict[Tuple[int, int], int]:
        return {x: k for k, x in enumerate(self.basis(t))}


def _module_times(A: RightNormalAlgebra, M: _FreeModule, t: int, v: SparseVec, w: Word) -> Tuple[int, SparseVec]:
    """(element of M_t) * word, returned in degree t + deg(w)."""
    F = A.F
    bt = M.basis(t)
    t2 = t + sum(A.degs[g] for g in w)
    idx2 = M.index(t2)
    out: SparseVec = {}
    for k, x in v.items():
        j, a = bt[k]
        prod = A.times_word(t - M.gen_degs[j], {a: 1}, w)
        for a2, y in prod.items():
            key = idx2[(j, a2)]
            out[key] = F.norm(out.get(key, 0) + x * y)
    return t2, {k: x for k, x in out.items() if x}


def ext_oracle(P: AlgebraPresentation, N: int, S: int) -> Dict[Tuple[int, int], int]:
    """dim Ext^n_{-s} for 0 <= n <= N, 0 <= s <= S from a minimal free resolution."""
    A = RightNormalAlgebra(P, S)
    F = A.F
    table: Dict[Tuple[int, int], int] = {(n, s): 0 for n in range(N + 1) for s in range(S + 1)}
    table[(0, 0)] = 1
    prev = _FreeModule(A, [0])  # F_0 = A
    prev_images: List[Tuple[int, SparseVec]] = []  # images of generators of prev
    prevprev: Optional[_FreeModule] = None
    for n in range(1, N + 1):
        gens: List[int] = []
        images: List[Tuple[int, SparseVec]] = []
        kernels: Dict[int, List[SparseVec]] = {}
        for t in range(1, S + 1):
            # kernel of d: prev_t -> prevprev_t (the augmentation when n = 1)
            bt = prev.basis(t)
            if n == 1:
                ker = [{k: 1} for k in range(len(bt))]
            else:
                cols = []
                for j, a in bt:
                    dj, img = prev_images[j]
                    word = A.words[t - dj][a]
                    _, v = _module_times(A, prevprev, dj, img, word)
                    cols.append(v)
                kd = sparse_column_reduce(cols, F)
                ker = [kd.kernel[j] for j in kd.free]
            kernels[t] = ker
            # decomposables: kernel elements of lower degree times generators
            red = SparseReducer(F)
            for g, d in enumerate(A.degs):
                if t - d >= 1:
                    for k in kernels[t - d]:
                        _, v = _module_times(A, prev, t - d, k, (g,))
                        if v:
                            red.insert(v)
            for k in ker:
                if red.insert(k) is not None:
                    gens.append(t)
                    images.append((t, k))
        for t in gens:
            table[(n, t)] += 1
        prevprev, prev = prev, _FreeModule(A, gens)
        prev_images = images
        if not gens:
            break
    return table


def hilbert_euler_check(P: AlgebraPresentation, table: Dict[Tuple[int, int], int], N: int, S: int,
                        dims: Optional[List[int]] = None) -> List[int]:
    """Degrees t <= min(N, S) where (sum_s dim A_s z^s)(sum (-1)^n dim Ext^n_{-s} z^s) != 1.

    Ext^n_{-t} vanishes for n > t, so the cutoff N is harmless up to t = N.
    """
    if dims is None:
        A = RightNormalAlgebra(P, S)
        dims = [A.dim(s) for s in range(S + 1)]
    T = min(N, S)
    euler = [sum((-1) ** n * table.get((n, t), 0) for n in range(N + 1)) for t in range(T + 1)]
    bad = []
    for t in range(T + 1):
        c = sum(dims[i] * euler[t - i] for i in range(t + 1))
        if c != (1 if t == 0 else 0):
            bad.append(t)
    return bad
