"""Massey products in the cobar complex from the canonical defining system.

For classes alpha_1..alpha_n (H-basis elements) the cochains are

    a_{i-1,j} = (-1)^(b_ij) G lambda_{j-i+1}(alpha_i (x) ... (x) alpha_j),
    b_ij = 1 + deg alpha_{j-1} + deg alpha_{j-3} + ...   (indices >= i),

so a_{i-1,i} is the representative of alpha_i.  The representative of
<alpha_1, ..., alpha_n> is p(sum_{0<i<n} abar_{0i} a_{in}) with
abar = (-1)^(1 + deg a) a, and it is compared with (-1)^b m_n where
b = b_{1n}.  Length two is the ordinary product m_2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

from .exact_linear import Field, SparseReducer, SparseVec, sv_axpy, sv_scale
from .merkulov import AInftyModel
from .presentation import TruncationError

Indexed = Tuple[int, int, SparseVec]


class MasseyNotDefined(Exception):
    def __init__(self, i: int, j: int, obstruction: SparseVec, labels: str = ""):
        self.i = i
        self.j = j
        self.obstruction = obstruction
        super().__init__(f"Massey product not defined: obstruction at (i, j) = ({i}, {j}) is nonzero {labels}".rstrip())


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def sign_exponent(degs: Sequence[int], i: int, j: int) -> int:
    """b_ij = 1 + deg alpha_{j-1} + deg alpha_{j-3} + ... over indices >= i (1-based)."""
    b = 1
    k = j - 1
    while k >= i:
        b += degs[k - 1]
        k -= 2
    return b


@dataclass
class MasseyDefiningSystem:
    classes: Tuple[int, ...]
    cochains: Dict[Tuple[int, int], Indexed]
    b: int

    def cochain(self, i: int, j: int) -> Indexed:
        return self.cochains[(i, j)]


@dataclass
class MasseyResult:
    classes: Tuple[str, ...]
    defined: bool
    b: int
    hom: int
    adams: int
    representative: SparseVec
    cocycle: Optional[Indexed] = None
    mn_value: Optional[SparseVec] = None
    comparison: Optional[bool] = None
    perturbation_ok: Optional[bool] = None
    perturbations: int = 0
    labels: Dict[int, str] = field(default_factory=dict)
    base_field: Optional[Field] = None

    def format(self, v: Optional[SparseVec]) -> str:
        if not v:
            return "0"
        fmt = self.base_field.fmt if self.base_field is not None else str
        return " + ".join(f"{fmt(c)}*{self.labels[i]}" for i, c in sorted(v.items()))


def _bar(model: AInftyModel, a: Indexed) -> Indexed:
    n, s, v = a
    return n, s, (v if (1 + n) % 2 == 0 else sv_scale(v, -1, model.F))


def _interior_sum(model: AInftyModel, cochains: Dict[Tuple[int, int], Indexed], i: int, j: int,
                  hom: int, s: int) -> SparseVec:
    """sum_{i<k<j} abar_{ik} a_{kj} as a vector of T^hom_{-s}."""
    F = model.F
    C = model.C
    acc: SparseVec = {}
    for k in range(i + 1, j):
        left = _bar(model, cochains[(i, k)])
        right = cochains[(k, j)]
        if not left[2] or not right[2]:
            continue
        n2, s2, v = C.concat_indexed(left, right)
        if (n2, s2) != (hom, s):
            raise AssertionError("cochain bidegrees do not match")
        sv_axpy(acc, 1, v, F)
    return acc


def _as_ids(model: AInftyModel, classes: Sequence) -> Tuple[int, ...]:
    return tuple(model.lookup(c) if isinstance(c, str) else int(c) for c in classes)


def _labels(model: AInftyModel, ids: Sequence[int]) -> str:
    return "<" + ", ".join(model.label(i) for i in ids) + ">"


def build_defining_system(model: AInftyModel, classes: Sequence) -> MasseyDefiningSystem:
    """Canonical defining system; raises MasseyNotDefined at the first nonzero obstruction."""
    ids = _as_ids(model, classes)
    n = len(ids)
    if n < 2:
        raise ValueError("a Massey product needs at least two classes")
    if any(model.is_unit(i) for i in ids):
        raise ValueError("Massey products of the unit are not considered")
    degs = [model.hdeg(i) for i in ids]
    adams = [model.adeg(i) for i in ids]
    C = model.C
    cochains: Dict[Tuple[int, int], Indexed] = {}
    for i in range(1, n + 1):
        cochains[(i - 1, i)] = model.h_vector(ids[i - 1])
    for length in range(2, n):
        for i in range(0, n - length + 1):
            j = i + length
            hom = sum(degs[i:j]) + 2 - length
            s = sum(adams[i:j])
            C.check(hom, s)
            c = _interior_sum(model, cochains, i, j, hom, s)
            obstruction = model.split.split(hom, s).project(c) if c else {}
            if obstruction:
                raise MasseyNotDefined(i, j, obstruction, _labels(model, ids))
            b_ij = sign_exponent(degs, i + 1, j)
            gn, gs, gv = model.glambda(ids[i:j])
            a = (gn, gs, sv_scale(gv, _sign(b_ij), model.F))
            if (gn, gs) != (hom - 1, s):
                raise AssertionError("G lambda in unexpected bidegree")
            da = C.apply_d(gn, gs, a[2]) if a[2] else {}
            if da != c:
                raise AssertionError(f"defining identity fails at ({i}, {j})")
            cochains[(i, j)] = a
    return MasseyDefiningSystem(ids, cochains, sign_exponent(degs, 1, n))


def _boundary_cocycle(model: AInftyModel, system: MasseyDefiningSystem) -> Indexed:
    ids = system.classes
    n = len(ids)
    hom = sum(model.hdeg(i) for i in ids) + 2 - n
    s = sum(model.adeg(i) for i in ids)
    return hom, s, _interior_sum(model, system.cochains, 0, n, hom, s)


def _project(model: AInftyModel, hom: int, s: int, v: SparseVec) -> SparseVec:
    if not v or not model.H_at.get((hom, s)):
        return {}
    coords = model.split.split(hom, s).project(v)
    base = model.H_at[(hom, s)]
    return {base[j]: c for j, c in coords.items()}


def massey_product(model: AInftyModel, classes: Sequence) -> MasseyResult:
    ids = _as_ids(model, classes)
    labels = {h.gid: h.label for h in model.H}
    names = tuple(model.label(i) for i in ids)
    n = len(ids)
    hom, s = model.out_bidegree(ids)
    if hom > model.N or s > model.S:
        raise TruncationError(f"Massey product lands in (hom {hom}, Adams -{s}) beyond cutoffs")
    system = build_defining_system(model, ids)
    if n == 2:
        rep = model.m(ids)
        return MasseyResult(names, True, system.b, hom, s, rep, None, labels=labels, base_field=model.F)
    ch, cs, cv = _boundary_cocycle(model, system)
    if cv and model.C.apply_d(ch, cs, cv):
        raise AssertionError("boundary element is not a cocycle")
    rep = _project(model, ch, cs, cv)
    return MasseyResult(names, True, system.b, hom, s, rep, (ch, cs, cv), labels=labels, base_field=model.F)


def perturbation_check(model: AInftyModel, system: MasseyDefiningSystem, rep: SparseVec) -> Tuple[bool, int]:
    """Shift a_{0,n-1} and a_{1,n} by harmonic cocycles and check the change.

    Changing a_{0,n-1} by a cocycle z changes the representative by an
    element of m_2(H, alpha_n); changing a_{1,n} lands in m_2(alpha_1, H).
    Returns (all shifts landed in the expected span, number of shifts tried).
    """
    F = model.F
    ids = system.classes
    n = len(ids)
    if n < 3:
        return True, 0
    hom, s = model.out_bidegree(ids)
    tried = 0
    ok = True
    for key, other, left_side in (((0, n - 1), ids[-1], True), ((1, n), ids[0], False)):
        an, as_, av = system.cochains[key]
        span = SparseReducer(F)
        cands = model.H_at.get((an, as_), [])
        for h in cands:
            pair = (h, other) if left_side else (other, h)
            span.insert(dict(model.m(pair)))
        for h in cands:
            tried += 1
            hv = model.h_vector(h)[2]
            changed = dict(system.cochains)
            changed[key] = (an, as_, _add(av, hv, F))
            moved = MasseyDefiningSystem(ids, changed, system.b)
            ch, cs, cv = _boundary_cocycle(model, moved)
            new_rep = _project(model, ch, cs, cv)
            diff = dict(new_rep)
            sv_axpy(diff, F.neg(1), rep, F)
            if diff and not span.in_span(diff):
                ok = False
    return ok, tried


def _add(u: SparseVec, v: SparseVec, F) -> SparseVec:
    out = dict(u)
    sv_axpy(out, 1, v, F)
    return out


def compare_with_mn(model: AInftyModel, classes: Sequence, perturb: bool = True) -> MasseyResult:
    """Exact comparison of (-1)^b m_n with the canonical representative."""
    ids = _as_ids(model, classes)
    res = massey_product(model, ids)
    F = model.F
    mn = model.m(ids)
    res.mn_value = mn
    if len(ids) == 2:
        res.comparison = mn == res.representative
        return res
    signed = sv_scale(mn, _sign(res.b), F)
    res.comparison = signed == res.representative
    if perturb:
        system = build_defining_system(model, ids)
        res.perturbation_ok, res.perturbations = perturbation_check(model, system, res.representative)
    return res
