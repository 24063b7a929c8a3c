"""Command-line front end.

    sixterm catalog list
    sixterm verify dihedral --k 8
    sixterm cohomology --group cyclic:4 --coeff trivial:2 --nmax 3
    sixterm sixterm --quadruple cyclic --k 2 --coeff trivial --m 2 --n 0
    sixterm sixterm --variant sigma --group cyclic:4 --m 2 --n 0
    sixterm export cyclic --k 3 --out q.json
    sixterm import q.json

Exit codes: 0 success, 1 a verdict is false or a precondition is unmet,
2 usage, 3 resource limits, 4 corrupt input.  Defaults for the caps can be
put in a JSON file named by $SIXTERM_CONFIG.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields

from . import cohomology as coh
from . import gmodules as gm
from . import groups as gr
from . import quadruples as qd
from . import resolutions
from . import sequences as seq
from . import serialize as se
from . import subgroup_sequences as ss

OK, FALSE, USAGE, RESOURCE, CORRUPT = 0, 1, 2, 3, 4
CONFIG_ENV = "SIXTERM_CONFIG"
VARIANTS = ("quadruple", "cyclic_quotient", "sigma", "dihedral", "biquadratic")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    """Caps and output settings.  Every computation is deterministic."""

    degree_cap: int = coh.DEGREE_CAP
    order_cap: int = 48
    ceiling: int = resolutions.DEFAULT_CEILING
    format: str = "text"
    output: str = None
    deterministic: bool = True

    def validate(self):
        for name in ("degree_cap", "order_cap", "ceiling"):
            if not isinstance(getattr(self, name), int) or getattr(self, name) <= 0:
                raise UsageError(f"{name} must be a positive integer")
        if self.format not in ("text", "json"):
            raise UsageError(f"unknown format {self.format!r}")
        return self


def load_config(path=None):
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return RunConfig()
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read config {path}: {e}") from None
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise UsageError(f"unknown config key {sorted(unknown)[0]!r}")
    return RunConfig(**data)


# --- parsing helpers ------------------------------------------------------------------


def _params(args, entry):
    out = {}
    for item in args.param or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--param needs key=value, got {item!r}")
        out[key] = val
    for key in ("k", "m"):
        v = getattr(args, key, None)
        if v is not None and key in entry.params and key not in out:
            out[key] = v
    try:
        return {k: int(v) for k, v in out.items()}
    except ValueError:
        raise UsageError("parameters must be integers") from None


def _entry(name):
    if name not in qd.CATALOG:
        raise UsageError(f"unknown quadruple {name!r}; known: {', '.join(qd.CATALOG)}")
    return qd.CATALOG[name]


def _build(name, params):
    try:
        return qd.catalog_build(name, params)
    except qd.CatalogError as e:
        raise UsageError(str(e)) from None


def _group(spec, cfg):
    try:
        G = gr.build_group(spec)
    except (gr.GroupError, ValueError) as e:
        raise UsageError(str(e)) from None
    _order_guard(G, cfg)
    return G


def _order_guard(G, cfg):
    if G.order > cfg.order_cap:
        raise resolutions.ResourceError(f"group order {G.order} exceeds the cap {cfg.order_cap}")


def _degree_guard(n, cfg):
    if n < 0:
        raise UsageError("degrees are nonnegative")
    if n > cfg.degree_cap:
        raise resolutions.ResourceError(f"degree {n} exceeds the cap {cfg.degree_cap}")


def _module_spec(spec, G):
    """``trivial:N`` or ``twist:m`` (Z/m with a nontrivial character)."""
    kind, _, arg = spec.partition(":")
    try:
        N = int(arg)
    except ValueError:
        raise UsageError(f"bad coefficient spec {spec!r}") from None
    if N < 2:
        raise UsageError("coefficients need a modulus of at least 2")
    if kind == "trivial":
        return gm.trivial_module(G, N, 1, f"Z/{N}")
    if kind == "twist":
        T2 = gm.twisted_coefficients(G, N)
        if T2 is None:
            raise UsageError(f"{G.name} has no nontrivial twist of Z/{N}")
        return gm.change_ring(T2, N)
    raise UsageError(f"bad coefficient spec {spec!r}")


def _coefficients(kind, G, m):
    if kind == "trivial":
        return gm.trivial_module(G, m * m, 1, f"Z/{m * m}")
    if kind == "twist":
        T2 = gm.twisted_coefficients(G, m)
        if T2 is None:
            raise UsageError(f"{G.name} has no nontrivial twist of Z/{m * m}")
        return T2
    raise UsageError(f"unknown coefficient kind {kind!r}")


def _subgroup(G, text):
    if not text:
        return gr.subgroup(G, [])
    try:
        gens = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad subgroup generators {text!r}") from None
    try:
        return gr.subgroup(G, gens)
    except gr.GroupError as e:
        raise UsageError(str(e)) from None


# --- commands -------------------------------------------------------------------------


def cmd_catalog_list(args, cfg):
    rows = [
        {"name": e.name, "params": list(e.params), "constraint": e.constraint, "defaults": dict(e.defaults)}
        for e in qd.CATALOG.values()
    ]
    text = [f"{r['name']:<14} params=({', '.join(r['params'])})  constraint: {r['constraint']}" for r in rows]
    return OK, {}, rows, text


def _solved_scalar(args):
    return getattr(args, "solve_homotopy", None)


def cmd_verify(args, cfg):
    entry = _entry(args.name)
    params = _params(args, entry)
    Q = _build(args.name, params)
    _order_guard(Q.group, cfg)
    solved = None
    s = _solved_scalar(args)
    if s is not None:
        if s <= 0:
            raise UsageError("--solve-homotopy needs a positive scalar")
        if Q.homotopy is None:
            Qh = qd.solve_homotopy(Q, s)
            solved = Qh is not None
            if Qh is not None:
                Q = Qh
    rep = qd.verify(Q)
    result = {
        "name": Q.name,
        "params": dict(Q.params),
        "group": Q.group.name,
        "scalar": Q.scalar,
        "shape": qd.shape(Q),
        "report": rep.as_dict(),
        "ok": rep.ok,
        "homotopy_solved": solved,
        "matrices": {
            "maps": [d.matrix.tolist() for d in Q.maps],
            "homotopy": None if Q.homotopy is None else [h.matrix.tolist() for h in Q.homotopy],
        },
    }
    good = rep.ok and solved is not False
    text = [
        f"{Q.name} {dict(Q.params)} over {Q.group.name}: shape {qd.shape(Q)}",
        f"equivariant={rep.equivariant} complex={rep.complex_ok} exact={rep.exact} homotopy={rep.homotopy_ok}",
    ]
    if solved is not None:
        text.append(f"homotopy with scalar {s}: {'found' if solved else 'none'}")
    return (OK if good else FALSE), {"name": args.name, "params": params, "solve_homotopy": s}, result, text


def cmd_cohomology(args, cfg):
    G = _group(args.group, cfg)
    M = _module_spec(args.coeff, G)
    _degree_guard(args.nmax, cfg)
    if args.resolution == "bar":
        R = resolutions.bar(G, cfg.ceiling)
    else:
        R = resolutions.free(G, M.modulus)
    table = []
    for n in range(args.nmax + 1):
        H = coh.cohomology(G, M, n, R, cfg.degree_cap)
        table.append(list(H.divisors))
    text = [f"H^{n}({G.name}, {M.name}) = {' + '.join(f'Z/{d}' for d in t) or '0'}" for n, t in enumerate(table)]
    inputs = {"group": args.group, "coeff": args.coeff, "nmax": args.nmax, "resolution": args.resolution}
    return OK, inputs, {"group": G.name, "module": M.name, "divisors": table}, text


def _report_text(r):
    lines = [f"{r['name']} n={r['n']} m={r['m']}: verdict={r['verdict']}"]
    lines.append("  " + "  ->  ".join(f"{lab}={'+'.join(f'Z/{d}' for d in g) or '0'}" for lab, g in zip(r["labels"], r["groups"])))
    lines.append("  exact at: " + ", ".join(f"{k}={v}" for k, v in r["exact_at"].items()))
    failed = [k for k, v in r["bockstein_vanishes"].items() if not v]
    if failed:
        lines.append("  nonvanishing Bocksteins: " + ", ".join(failed))
    return lines


def _verdict_code(reports):
    return OK if all(r["verdict"] is True for r in reports) else FALSE


def cmd_sixterm(args, cfg):
    variant = args.variant
    _degree_guard(args.n + 1, cfg)
    m = args.m
    if m is not None and m < 2:
        raise UsageError("--m needs m >= 2")
    inputs = {"variant": variant, "n": args.n, "coeff": args.coeff}
    try:
        if variant == "quadruple":
            if not args.quadruple:
                raise UsageError("--quadruple is required for this variant")
            entry = _entry(args.quadruple)
            params = _params(args, entry)
            Q = _build(args.quadruple, params)
            _order_guard(Q.group, cfg)
            m = m or Q.scalar
            T2 = _coefficients(args.coeff, Q.group, m)
            inputs.update({"quadruple": args.quadruple, "params": params, "m": m})
            reports = [seq.six_term(Q, T2, args.n, m).as_dict()]
        elif variant in ("cyclic_quotient", "sigma"):
            if not args.group:
                raise UsageError("--group is required for this variant")
            G = _group(args.group, cfg)
            H = _subgroup(G, args.subgroup)
            m = m or 2
            T2 = _coefficients(args.coeff, G, m)
            inputs.update({"group": args.group, "subgroup": list(H.elements), "m": m})
            if variant == "cyclic_quotient":
                reports = [ss.cyclic_quotient_sequence(G, H, T2, m, args.n).as_dict()]
            else:
                reports = [r.as_dict() for r in ss.sigma_sequences(G, H, T2, m, args.n)]
        elif variant == "dihedral":
            k = args.k or 8
            m = m or 2
            G = gr.dihedral(k)
            _order_guard(G, cfg)
            T2 = _coefficients(args.coeff, G, m)
            inputs.update({"k": k, "m": m})
            reports = [r.as_dict() for r in ss.dihedral_sequences(k, T2, m, args.n)]
        else:
            m = m or 2
            T2 = _coefficients(args.coeff, gr.klein_four(), m)
            inputs.update({"m": m})
            reports = [ss.biquadratic_sequence(T2, m, args.n).as_dict()]
    except (ss.DisplayError, seq.SequenceError, qd.CatalogError) as e:
        return FALSE, inputs, {"error": str(e)}, [f"precondition unmet: {e}"]
    text = [line for r in reports for line in _report_text(r)]
    return _verdict_code(reports), inputs, se.plain(reports), text


def cmd_export(args, cfg):
    entry = _entry(args.name)
    params = _params(args, entry)
    Q = _build(args.name, params)
    doc = se.quadruple_to_doc(Q)
    with open(args.out, "w") as fh:
        fh.write(se.dumps(doc))
    return OK, {"name": args.name, "params": params, "out": args.out}, {"written": args.out}, [f"wrote {args.out}"]


def cmd_import(args, cfg):
    try:
        Q = se.load_quadruple(args.path)
    except OSError as e:
        raise UsageError(f"cannot read {args.path}: {e}") from None
    rep = qd.verify(Q)
    result = {"name": Q.name, "params": dict(Q.params), "shape": qd.shape(Q), "report": rep.as_dict(), "ok": rep.ok}
    return OK, {"path": args.path}, result, [f"{Q.name}: shape {qd.shape(Q)} verified"]


# --- parser ---------------------------------------------------------------------------


def _common(p):
    p.add_argument("--format", choices=("text", "json"), default=None)
    p.add_argument("--output", default=None, help="also write the JSON report here")
    p.add_argument("--config", default=None, help=f"JSON config file (default ${CONFIG_ENV})")
    p.add_argument("--degree-cap", type=int, default=None)
    p.add_argument("--order-cap", type=int, default=None)
    p.add_argument("--ceiling", type=int, default=None, help="cochain dimension ceiling for the bar resolution")


def build_parser():
    parser = argparse.ArgumentParser(prog="sixterm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    cat = sub.add_parser("catalog", help="the exact quadruple catalog")
    cat_sub = cat.add_subparsers(dest="action", required=True)
    lst = cat_sub.add_parser("list")
    _common(lst)
    lst.set_defaults(func=cmd_catalog_list)

    ver = sub.add_parser("verify", help="verify a catalog quadruple")
    ver.add_argument("name")
    ver.add_argument("--k", type=int)
    ver.add_argument("--m", type=int)
    ver.add_argument("--param", action="append", help="key=value")
    ver.add_argument("--solve-homotopy", type=int, default=None, metavar="S")
    _common(ver)
    ver.set_defaults(func=cmd_verify)

    co = sub.add_parser("cohomology", help="elementary divisors of H^n")
    co.add_argument("--group", required=True)
    co.add_argument("--coeff", required=True)
    co.add_argument("--nmax", type=int, required=True)
    co.add_argument("--resolution", choices=("free", "bar"), default="free")
    _common(co)
    co.set_defaults(func=cmd_cohomology)

    st = sub.add_parser("sixterm", help="check an exact cohomology sequence")
    st.add_argument("--variant", choices=VARIANTS, default="quadruple")
    st.add_argument("--quadruple")
    st.add_argument("--k", type=int)
    st.add_argument("--param", action="append", help="key=value for the quadruple")
    st.add_argument("--group")
    st.add_argument("--subgroup", default="", help="comma-separated generator indices")
    st.add_argument("--coeff", choices=("trivial", "twist"), default="trivial")
    st.add_argument("--m", type=int)
    st.add_argument("--n", type=int, default=0)
    _common(st)
    st.set_defaults(func=cmd_sixterm)

    ex = sub.add_parser("export", help="write a catalog quadruple as JSON")
    ex.add_argument("name")
    ex.add_argument("--k", type=int)
    ex.add_argument("--m", type=int)
    ex.add_argument("--param", action="append")
    ex.add_argument("--out", required=True)
    _common(ex)
    ex.set_defaults(func=cmd_export)

    im = sub.add_parser("import", help="read and re-verify a quadruple file")
    im.add_argument("path")
    _common(im)
    im.set_defaults(func=cmd_import)
    return parser


def _emit(cfg, args, code, inputs, result, text, out):
    doc = se.plain({"command": _command_name(args), "inputs": inputs, "result": result, "exit_code": code})
    se.validate_report(doc)
    blob = se.dumps(doc)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(blob)
    if cfg.format == "json":
        out.write(blob)
    else:
        for line in text:
            out.write(line + "\n")


def _command_name(args):
    return " ".join(x for x in (args.command, getattr(args, "action", None)) if x)


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else USAGE
    cfg = RunConfig()
    try:
        cfg = load_config(args.config)
        for name in ("degree_cap", "order_cap", "ceiling"):
            v = getattr(args, name)
            if v is not None:
                setattr(cfg, name, v)
        if args.format:
            cfg.format = args.format
        if args.output:
            cfg.output = args.output
        cfg.validate()
        code, inputs, result, text = args.func(args, cfg)
    except (UsageError, se.SchemaViolation, se.CorruptInput, resolutions.ResourceError) as e:
        code, what = _failure(e)
        err.write(f"sixterm: {what}{e}\n")
        if cfg.format == "json":
            _emit(cfg, args, code, {}, {"error": f"{what}{e}"}, [], out)
        return code
    _emit(cfg, args, code, inputs, result, text, out)
    return code


def _failure(e):
    if isinstance(e, se.SchemaViolation):
        return USAGE, "schema violation: "
    if isinstance(e, se.CorruptInput):
        return CORRUPT, "corrupt input: "
    if isinstance(e, resolutions.ResourceError):
        return RESOURCE, "resource limit: "
    return USAGE, ""

if __name__ == "__main__":
    sys.exit(main())
