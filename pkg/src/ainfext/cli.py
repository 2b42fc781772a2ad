"""Command line front end and JSON model files.

    ainfext ext-table FILE [--oracle]
    ainfext model FILE [--out model.json]
    ainfext verify FILE|MODEL.json
    ainfext massey FILE|MODEL.json CLASS CLASS ...
    ainfext recover FILE

Common flags: --cutoff-adams S, --cutoff-hom N (override the file),
--format text|json, --out PATH.  Exit status: 0 success, 1 identity
violation or failed comparison, 2 input error, 3 result limited by the
cutoffs.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .massey import MasseyNotDefined, compare_with_mn
from .merkulov import AInftyModel
from .presentation import AlgebraPresentation, PresentationError, TruncationError, load_presentation, minimality_report, parse_presentation
from .recovery import check_relation_matrices, ext_oracle, recover_presentation, roundtrip_check
from .verify import verify_model

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_TRUNCATED = 0, 1, 2, 3
F_TABLE_MAX = 4


class ModelFileError(ValueError):
    pass


class ModelVersionError(ModelFileError):
    pass


# ---------------------------------------------------------------------------
# serialization


def _fmt_cobar_word(model: AInftyModel, word: Tuple[int, ...]) -> str:
    return "|".join(model.alg.gid_label(g) for g in word)


def _cobar_json(model: AInftyModel, n: int, s: int, v) -> Dict[str, str]:
    basis = model.C.basis(n, s)
    F = model.F
    return {_fmt_cobar_word(model, basis[k]): F.fmt(c) for k, c in sorted(v.items())}


def model_tables(model: AInftyModel, f_max: int = F_TABLE_MAX) -> dict:
    """All data of a model as plain JSON-ready structures (deterministic order)."""
    F = model.F
    H = []
    for e in model.H:
        H.append({"label": e.label, "hom": e.n, "adams": -e.s, "vector": _cobar_json(model, e.n, e.s, e.vec)})
    m_tables: Dict[str, list] = {}
    for n in range(2, model.max_arity() + 1):
        rows = []
        for t in model.tuples(n):
            v = model.m(t)
            if v:
                rows.append([[model.label(i) for i in t], {model.label(h): F.fmt(c) for h, c in sorted(v.items())}])
        if rows:
            m_tables[str(n)] = rows
    f_tables: Dict[str, list] = {}
    for n in range(2, f_max + 1):
        rows = []
        for t in model.tuples(n, max_out_hom=model.N):
            fn, fs, fv = model.f(t)
            if fv:
                rows.append([[model.label(i) for i in t], _cobar_json(model, fn, fs, fv)])
        if rows:
            f_tables[str(n)] = rows
    dims = sorted(((n, s), len(ids)) for (n, s), ids in model.H_at.items() if ids)
    return {
        "schema_version": SCHEMA_VERSION,
        "presentation": model.pres.to_text(),
        "field": model.F.char,
        "cutoffs": {"hom": model.N, "adams": model.S},
        "ext_dims": [[n, -s, d] for (n, s), d in dims],
        "cohomology": H,
        "m": m_tables,
        "f": f_tables,
    }


def dumps_model(model: AInftyModel) -> str:
    return json.dumps(model_tables(model), sort_keys=True, indent=1, ensure_ascii=True) + "\n"


def save_model(model: AInftyModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_model(model))


def loads_model(text: str) -> AInftyModel:
    """Rebuild a model from its JSON and check every stored table against it."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFileError(f"corrupt model file: {e}") from None
    if not isinstance(data, dict) or "schema_version" not in data:
        raise ModelFileError("corrupt model file: no schema_version")
    if data["schema_version"] != SCHEMA_VERSION:
        raise ModelVersionError(f"model file has schema_version {data['schema_version']}, expected {SCHEMA_VERSION}")
    for key in ("presentation", "cutoffs", "cohomology", "m", "f", "ext_dims", "field"):
        if key not in data:
            raise ModelFileError(f"corrupt model file: missing {key!r}")
    try:
        pres = parse_presentation(data["presentation"])
        N, S = int(data["cutoffs"]["hom"]), int(data["cutoffs"]["adams"])
    except (PresentationError, KeyError, TypeError, ValueError) as e:
        raise ModelFileError(f"corrupt model file: {e}") from None
    model = AInftyModel(pres, N, S)
    fresh = model_tables(model)
    for key in ("field", "ext_dims", "cohomology", "m", "f"):
        if fresh[key] != data[key]:
            raise ModelFileError(f"corrupt model file: stored {key!r} does not match the presentation")
    return model


def load_model(path: str) -> AInftyModel:
    with open(path, encoding="utf-8") as fh:
        return loads_model(fh.read())


# ---------------------------------------------------------------------------
# commands


@dataclass
class RunConfig:
    command: str
    input: str
    cutoff_hom: Optional[int] = None
    cutoff_adams: Optional[int] = None
    fmt: str = "text"
    out: Optional[str] = None
    classes: Sequence[str] = ()
    oracle: bool = False


def _emit(cfg: RunConfig, text: str, payload: dict) -> None:
    body = json.dumps(payload, sort_keys=True, indent=1) + "\n" if cfg.fmt == "json" else text
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _load(cfg: RunConfig) -> Tuple[AlgebraPresentation, Optional[AInftyModel], int, int]:
    if cfg.input.endswith(".json"):
        model = load_model(cfg.input)
        return model.pres, model, model.N, model.S
    pres = load_presentation(cfg.input)
    N = cfg.cutoff_hom if cfg.cutoff_hom is not None else pres.cutoff_hom
    S = cfg.cutoff_adams if cfg.cutoff_adams is not None else pres.cutoff_adams
    if N is None:
        N = 4
    if S is None:
        raise PresentationError("no Adams cutoff: pass --cutoff-adams or put cutoff_adams in the file")
    if N < 1 or S < 1:
        raise PresentationError("cutoffs must be positive")
    return pres, None, N, S


def _model(cfg: RunConfig) -> AInftyModel:
    pres, model, N, S = _load(cfg)
    return model if model is not None else AInftyModel(pres, N, S)


def _ext_text(dims: Dict[Tuple[int, int], int], labels: Dict[Tuple[int, int], List[str]], N: int, S: int) -> str:
    lines = [f"{'hom':>4} {'adams':>6} {'dim':>4}  classes"]
    for n in range(N + 1):
        for s in range(S + 1):
            d = dims.get((n, s), 0)
            if d:
                lines.append(f"{n:>4} {-s:>6} {d:>4}  {' '.join(labels.get((n, s), []))}")
    return "\n".join(lines) + "\n"


def cmd_ext_table(cfg: RunConfig) -> int:
    pres, model, N, S = _load(cfg)
    if model is None:
        model = AInftyModel(pres, N, S)
    dims = {k: len(v) for k, v in model.H_at.items()}
    labels = {k: [model.label(i) for i in v] for k, v in model.H_at.items()}
    payload = {"cutoffs": {"hom": N, "adams": S},
               "ext_dims": [[n, -s, d] for (n, s), d in sorted(dims.items()) if d]}
    text = _ext_text(dims, labels, N, S)
    status = EXIT_OK
    if cfg.oracle:
        ora = ext_oracle(pres, N, S)
        diff = sorted(k for k in set(ora) | set(dims) if ora.get(k, 0) != dims.get(k, 0))
        payload["oracle_agrees"] = not diff
        payload["oracle_mismatches"] = [[n, -s] for n, s in diff]
        text += "oracle: " + ("agrees at every bidegree\n" if not diff else f"DISAGREES at {diff}\n")
        if diff:
            status = EXIT_VIOLATION
    nonmin = minimality_report(model.alg)
    if nonmin:
        text += "note: declared relations are not minimal in degrees " + ", ".join(
            f"{s} (declared {d}, minimal {m})" for s, (d, m) in sorted(nonmin.items())) + "\n"
        payload["nonminimal_degrees"] = [[s, d, m] for s, (d, m) in sorted(nonmin.items())]
    _emit(cfg, text, payload)
    return status


def cmd_model(cfg: RunConfig) -> int:
    model = _model(cfg)
    if cfg.fmt == "json" or cfg.out:
        body = dumps_model(model)
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(body)
        else:
            sys.stdout.write(body)
        return EXIT_OK
    data = model_tables(model)
    lines = [f"cohomology classes: {' '.join(h['label'] for h in data['cohomology'])}"]
    for n in sorted(data["m"], key=int):
        for ins, out in data["m"][n]:
            val = " + ".join(f"{c}*{h}" for h, c in out.items())
            lines.append(f"m_{n}({', '.join(ins)}) = {val}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    model = _model(cfg)
    reports = verify_model(model)
    ta = check_relation_matrices(model)
    lines = [r.line() for r in reports]
    lines.append(("PASS" if ta.ok else "FAIL") + f" relation matrices on E1: {len(ta.checked)} blocks, mismatches {ta.mismatches}"
                 + (f" (sign (-1)^((n-2)(n-3)/2) only: {ta.sign_only})" if ta.mismatches else ""))
    payload = {"reports": [r.to_json() for r in reports],
               "relation_matrices": {"checked": len(ta.checked), "mismatches": ta.mismatches, "sign_only": ta.sign_only}}
    _emit(cfg, "\n".join(lines) + "\n", payload)
    if any(not r.ok for r in reports) or not ta.ok:
        return EXIT_VIOLATION
    if any(r.truncated for r in reports):
        return EXIT_TRUNCATED
    return EXIT_OK


def cmd_massey(cfg: RunConfig) -> int:
    model = _model(cfg)
    if len(cfg.classes) < 2:
        raise PresentationError("massey needs at least two class labels")
    res = compare_with_mn(model, list(cfg.classes))
    text = (f"<{', '.join(res.classes)}> = {res.format(res.representative)}  (hom {res.hom}, adams {-res.adams})\n"
            f"m_{len(res.classes)} = {res.format(res.mn_value)}, b = {res.b}, "
            f"comparison {'OK' if res.comparison else 'FAILED'}")
    if res.perturbation_ok is not None and res.perturbations:
        text += f", perturbation check {'OK' if res.perturbation_ok else 'FAILED'} ({res.perturbations} shifts)"
    text += "\n"
    F = model.F
    payload = {
        "classes": list(res.classes),
        "representative": {res.labels[i]: F.fmt(c) for i, c in sorted(res.representative.items())},
        "m_n": {res.labels[i]: F.fmt(c) for i, c in sorted((res.mn_value or {}).items())},
        "b": res.b,
        "comparison": res.comparison,
        "perturbation_ok": res.perturbation_ok,
    }
    _emit(cfg, text, payload)
    ok = res.comparison and res.perturbation_ok is not False
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_recover(cfg: RunConfig) -> int:
    pres, model, N, S = _load(cfg)
    if model is None:
        model = AInftyModel(pres, N, S)
    rec = recover_presentation(model)
    rt = roundtrip_check(pres, N, S, model=model)
    P2 = rec.to_presentation()
    lines = ["recovered presentation:"] + ["  " + l for l in P2.to_text().splitlines()]
    lines.append(rt.line())
    payload = {
        "generators": [[g, d] for g, d in rec.generators],
        "relations": {str(s): [P2.format_poly(r) for r in rs] for s, rs in sorted(rec.relations.items())},
        "roundtrip": {"ok": rt.ok, "dims_original": rt.dims_original, "dims_recovered": rt.dims_recovered,
                      "first_bad_degree": rt.first_bad_degree},
    }
    _emit(cfg, "\n".join(lines) + "\n", payload)
    return EXIT_OK if rt.ok else EXIT_VIOLATION


COMMANDS = {
    "ext-table": cmd_ext_table,
    "model": cmd_model,
    "verify": cmd_verify,
    "massey": cmd_massey,
    "recover": cmd_recover,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ainfext", description="Merkulov model on Ext of a connected graded algebra")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("input", help="presentation file, or a saved model (.json)")
        p.add_argument("--cutoff-adams", type=int, dest="cutoff_adams", metavar="S")
        p.add_argument("--cutoff-hom", type=int, dest="cutoff_hom", metavar="N")
        p.add_argument("--format", choices=("text", "json"), default="text", dest="fmt")
        p.add_argument("--out", default=None)
        return p

    p = common(sub.add_parser("ext-table", help="bigraded Ext dimensions"))
    p.add_argument("--oracle", action="store_true", help="compare with the minimal resolution")
    common(sub.add_parser("model", help="build the model and export it"))
    common(sub.add_parser("verify", help="check the Stasheff, morphism and unit identities"))
    p = common(sub.add_parser("massey", help="Massey product and comparison with m_n"))
    p.add_argument("classes", nargs="+")
    common(sub.add_parser("recover", help="recover relations and run the round trip"))
    return ap


def run(cfg: RunConfig) -> int:
    try:
        return COMMANDS[cfg.command](cfg)
    except (PresentationError, ModelFileError, FileNotFoundError, KeyError, ValueError, MasseyNotDefined) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    except TruncationError as e:
        print(f"truncated: {e}", file=sys.stderr)
        return EXIT_TRUNCATED


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        input=args.input,
        cutoff_hom=args.cutoff_hom,
        cutoff_adams=args.cutoff_adams,
        fmt=args.fmt,
        out=args.out,
        classes=tuple(getattr(args, "classes", ()) or ()),
        oracle=getattr(args, "oracle", False),
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
