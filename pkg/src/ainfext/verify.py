"""Exhaustive checkers for the Stasheff identities, the morphism identities
of f = {f_n}, and the strict unit conditions of a built model.

Tuples range over H-basis elements whose outputs fit the cutoffs.  Tuples
may contain at most ``max_units`` copies of the unit (default one), since
unit-padded tuples would otherwise be unbounded in length.  All signs of
id^r (x) m_s (x) id^t and f_{i1} (x) f_{i2} go through ``koszul_apply``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .cobar import koszul_apply
from .exact_linear import SparseVec, sv_axpy, sv_scale
from .merkulov import AInftyModel
from .presentation import TruncationError


@dataclass
class IdentityReport:
    name: str
    hom_cutoff: int
    adams_cutoff: int
    tested: int = 0
    nontrivial: int = 0
    skipped: int = 0
    violations: List[Tuple[Tuple[str, ...], str, str]] = field(default_factory=list)
    note: str = ""

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def truncated(self) -> bool:
        return self.skipped > 0

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f", {self.skipped} skipped (truncation)" if self.skipped else ""
        return (f"{status} {self.name}: {self.tested} tuples ({self.nontrivial} nontrivial){extra}, "
                f"{len(self.violations)} violations [N={self.hom_cutoff}, S={self.adams_cutoff}]")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "tested": self.tested,
            "nontrivial": self.nontrivial,
            "skipped": self.skipped,
            "cutoffs": {"hom": self.hom_cutoff, "adams": self.adams_cutoff},
            "violations": [{"inputs": list(t), "lhs": l, "rhs": r} for t, l, r in self.violations],
            "note": self.note,
        }


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def _sum_tables(model: AInftyModel, n: int, max_units: int) -> List[Dict[Tuple[int, int, int], int]]:
    """tables[j][(adams, hom, units)] = number of H-basis j-tuples with those sums."""
    S = model.S
    h_cap = model.N + n + 3
    elems = [(e.s, e.n, 1 if model.is_unit(i) else 0) for i, e in enumerate(model.H)]
    tables: List[Dict[Tuple[int, int, int], int]] = [{(0, 0, 0): 1}]
    for _ in range(n):
        nxt: Dict[Tuple[int, int, int], int] = {}
        for (s, h, u), c in tables[-1].items():
            for es, eh, eu in elems:
                key = (s + es, h + eh, u + eu)
                if key[0] <= S and key[1] <= h_cap and key[2] <= max_units:
                    nxt[key] = nxt.get(key, 0) + c
        tables.append(nxt)
    return tables


def _leaf_ok(model: AInftyModel, n: int, out_shift: int, s: int, h: int, u: int) -> bool:
    hom = h + out_shift - n
    return 0 <= hom and hom + u <= model.N and s <= model.S


def count_tuples(model: AInftyModel, n: int, out_shift: int, max_units: int = 1) -> Dict[Tuple[int, int], int]:
    """Number of tuples yielded by ``basis_tuples`` per output bidegree (hom, adams)."""
    out: Dict[Tuple[int, int], int] = {}
    for (s, h, u), c in _sum_tables(model, n, max_units)[n].items():
        if _leaf_ok(model, n, out_shift, s, h, u):
            key = (h + out_shift - n, s)
            out[key] = out.get(key, 0) + c
    return out


def basis_tuples(model: AInftyModel, n: int, out_shift: int, max_units: int = 1,
                 targets: Optional[Sequence[Tuple[int, int]]] = None) -> Iterator[Tuple[int, ...]]:
    """H-basis n-tuples with Adams sum <= S and 0 <= sum(hom) + out_shift - n <= N.

    At most ``max_units`` entries are the unit.  A unit-containing tuple must
    also fit after its units are dropped, because the unit rules shorten the
    tuple and raise the degree of the remaining terms.  With ``targets`` only
    tuples whose output bidegree (hom, adams) is listed are produced; prefixes
    that cannot complete to a target are pruned exactly.  Order is
    lexicographic in ids.
    """
    tables = _sum_tables(model, n, max_units)
    # reach[j][(adams, hom)] = fewest units among j-tuples with these sums
    reach = []
    for t in tables:
        r: Dict[Tuple[int, int], int] = {}
        for (s, h, u) in t:
            if u < r.get((s, h), max_units + 1):
                r[(s, h)] = u
        reach.append(r)
    if targets is None:
        goals = sorted({(h + out_shift - n, s) for (s, h, u) in tables[n] if _leaf_ok(model, n, out_shift, s, h, u)})
    else:
        goals = sorted(set(targets))
    H = model.H
    ids = range(len(H))

    def rec(prefix: List[int], s_acc: int, h_acc: int, units: int, goal_s: int, goal_h: int, goal_hom: int):
        k = len(prefix)
        if k == n:
            if s_acc == goal_s and h_acc == goal_h and goal_hom + units <= model.N:
                yield tuple(prefix)
            return
        left = reach[n - k - 1]
        for i in ids:
            e = H[i]
            u2 = units + (1 if model.is_unit(i) else 0)
            need = left.get((goal_s - s_acc - e.s, goal_h - h_acc - e.n))
            if need is None or u2 + need > max_units or goal_hom + u2 + need > model.N:
                continue
            prefix.append(i)
            yield from rec(prefix, s_acc + e.s, h_acc + e.n, u2, goal_s, goal_h, goal_hom)
            prefix.pop()

    found = []
    for hom, s in goals:
        if hom < 0 or s > model.S:
            continue
        found.extend(rec([], 0, 0, 0, s, hom - out_shift + n, hom))
    found.sort()
    yield from found


def _fmt_h(model: AInftyModel, v: SparseVec) -> str:
    if not v:
        return "0"
    F = model.F
    return " + ".join(f"{F.fmt(c)}*{model.label(i)}" for i, c in sorted(v.items()))


def _fmt_cobar(model: AInftyModel, n: int, s: int, v: SparseVec) -> str:
    if not v:
        return "0"
    F = model.F
    basis = model.C.basis(n, s)
    alg = model.alg
    terms = []
    for i, c in sorted(v.items()):
        w = "|".join(alg.gid_label(g) for g in basis[i])
        terms.append(f"{F.fmt(c)}*[{w}]")
    return " + ".join(terms)


def _as_elem(i: int) -> SparseVec:
    return {i: 1}


def _m_linear(model: AInftyModel, prefix: Tuple[int, ...], middle: SparseVec, suffix: Tuple[int, ...]) -> SparseVec:
    """m_u(prefix (x) middle (x) suffix), extended linearly in the middle slot."""
    F = model.F
    out: SparseVec = {}
    for j, c in middle.items():
        sv_axpy(out, c, model.m(prefix + (j,) + suffix), F)
    return out


def stasheff_value(model: AInftyModel, x: Tuple[int, ...]) -> SparseVec:
    """sum_{r+s+t=n} (-1)^(r+st) m_u(id^r (x) m_s (x) id^t)(x) in H coordinates."""
    F = model.F
    n = len(x)
    degs = [model.hdeg(i) for i in x]
    total: SparseVec = {}
    for s in range(2, n + 1):  # m_1 = 0
        for r in range(0, n - s + 1):
            t = n - s - r
            u = r + 1 + t
            if u < 2:
                continue
            maps = [(0, 1, _as_elem)] * r + [(2 - s, s, lambda *a: model.m(a))] + [(0, 1, _as_elem)] * t
            ks, outs = koszul_apply(maps, x, degs)
            middle = outs[r]
            if not middle:
                continue
            val = _m_linear(model, x[:r], middle, x[r + s:])
            sv_axpy(total, ks * _sign(r + s * t), val, F)
    return total


def check_stasheff(model: AInftyModel, n: int, max_units: int = 1) -> IdentityReport:
    rep = IdentityReport(f"SI({n})", model.N, model.S)
    if n == 1:
        rep.note = "m_1 = 0"
    counts = count_tuples(model, n, 3, max_units)
    rep.tested = sum(counts.values())
    # with shift 3 the key is the bidegree of the identity itself; skip zero spaces
    live = [(hom, s) for hom, s in counts if model.H_at.get((hom, s))]
    for x in basis_tuples(model, n, 3, max_units, targets=live):
        rep.nontrivial += 1
        try:
            val = stasheff_value(model, x)
        except TruncationError:
            rep.skipped += 1
            continue
        if val:
            rep.violations.append((tuple(model.label(i) for i in x), _fmt_h(model, val), "0"))
    return rep


def stasheff_arities(model: AInftyModel, max_units: int = 1) -> List[int]:
    """Arities n for which SI(n) has at least one tuple in range."""
    out = []
    for n in range(1, model.S + max_units + 1):
        if count_tuples(model, n, 3, max_units):
            out.append(n)
    return out


def check_all_stasheff(model: AInftyModel, max_units: int = 1) -> List[IdentityReport]:
    return [check_stasheff(model, n, max_units) for n in stasheff_arities(model, max_units)]


def morphism_sides(model: AInftyModel, x: Tuple[int, ...]) -> Tuple[int, int, SparseVec, SparseVec]:
    """Both sides of the morphism identity for f on the tuple x.

    Left: sum (-1)^(r+st) f_u(id^r (x) m_s (x) id^t).  Right: d f_n plus
    sum_{i1+i2=n} (-1)^(i1-1) lambda_2 (f_i1 (x) f_i2); the cobar has no
    higher operations.
    """
    F = model.F
    C = model.C
    n = len(x)
    degs = [model.hdeg(i) for i in x]
    hom = sum(degs) + 1 - n
    s_tot = sum(model.adeg(i) for i in x)
    lhs: SparseVec = {}
    for s in range(2, n + 1):
        for r in range(0, n - s + 1):
            t = n - s - r
            maps = [(0, 1, _as_elem)] * r + [(2 - s, s, lambda *a: model.m(a))] + [(0, 1, _as_elem)] * t
            ks, outs = koszul_apply(maps, x, degs)
            for j, c in outs[r].items():
                fh, fs, fv = model.f(x[:r] + (j,) + x[r + s:])
                if (fh, fs) != (hom + 1, s_tot) and fv:
                    raise AssertionError("f output in unexpected bidegree")
                sv_axpy(lhs, ks * _sign(r + s * t) * c, fv, F)
    rhs: SparseVec = {}
    fh, fs, fv = model.f(x)
    if fv:
        rhs = C.apply_d(fh, fs, fv)
    for i1 in range(1, n):
        i2 = n - i1
        maps = [(1 - i1, i1, lambda *a: model.f(a)), (1 - i2, i2, lambda *a: model.f(a))]
        ks, (a, b) = koszul_apply(maps, x, degs)
        if not a[2] or not b[2]:
            continue
        _, _, v = C.concat_indexed(a, b)
        sv_axpy(rhs, ks * _sign(i1 - 1), v, F)
    return hom + 1, s_tot, lhs, rhs


def check_morphism(model: AInftyModel, n: int, max_units: int = 1) -> IdentityReport:
    rep = IdentityReport(f"MI({n})", model.N, model.S)
    # for n >= 3 the terms f_u(.. m_s ..) need lambda_u one degree above lambda_n
    shift = 3 if n >= 3 else 2
    for x in basis_tuples(model, n, shift, max_units):
        rep.tested += 1
        try:
            hom, s, lhs, rhs = morphism_sides(model, x)
        except TruncationError:
            rep.skipped += 1
            continue
        if lhs or rhs:
            rep.nontrivial += 1
        if lhs != rhs:
            rep.violations.append((tuple(model.label(i) for i in x),
                                   _fmt_cobar(model, hom, s, lhs), _fmt_cobar(model, hom, s, rhs)))
    return rep


def raw_m(model: AInftyModel, ids: Sequence[int]) -> SparseVec:
    """p lambda_n computed from the construction, ignoring the unit rules."""
    ids = tuple(ids)
    hom, s = model.out_bidegree(ids)
    if not model.H_at.get((hom, s)):
        return {}
    _, _, lam = model.lam(ids)
    coords = model.split.split(hom, s).project(lam) if lam else {}
    base = model.H_at[(hom, s)]
    return {base[j]: c for j, c in coords.items()}


def raw_f(model: AInftyModel, ids: Sequence[int]) -> Tuple[int, int, SparseVec]:
    n, s, v = model.glambda(tuple(ids))
    return n, s, sv_scale(v, model.F.neg(1), model.F)


def check_strict_unit(model: AInftyModel, max_arity: int = 4) -> IdentityReport:
    """Compare the construction's own values on unit-containing tuples with the unit rules."""
    rep = IdentityReport("strict unit", model.N, model.S)
    n0, s0, v0 = model.f((0,))
    rep.tested += 1
    if (n0, s0, v0) != (0, 0, {0: 1}):
        rep.violations.append((("1",), _fmt_cobar(model, n0, s0, v0), "1"))
    for n in range(2, max_arity + 1):
        for x in basis_tuples(model, n, 2, max_units=n):
            if not any(model.is_unit(i) for i in x):
                continue
            rep.tested += 1
            labels = tuple(model.label(i) for i in x)
            try:
                got_m = raw_m(model, x)
                fh, fs, got_f = raw_f(model, x)
            except TruncationError:
                rep.skipped += 1
                continue
            rep.nontrivial += 1
            if n == 2:
                other = x[1] if model.is_unit(x[0]) else x[0]
                want = {other: 1}
            else:
                want = {}
            if got_m != want:
                rep.violations.append((labels, "m: " + _fmt_h(model, got_m), "m: " + _fmt_h(model, want)))
            if got_f:
                rep.violations.append((labels, "f: " + _fmt_cobar(model, fh, fs, got_f), "f: 0"))
            if model.m(x) != want:
                rep.violations.append((labels, "rule m: " + _fmt_h(model, model.m(x)), "m: " + _fmt_h(model, want)))
    return rep


def verify_model(model: AInftyModel, mi_max: int = 4, max_units: int = 1) -> List[IdentityReport]:
    reports = check_all_stasheff(model, max_units)
    for n in range(1, mi_max + 1):
        reports.append(check_morphism(model, n, max_units))
    reports.append(check_strict_unit(model))
    return reports
