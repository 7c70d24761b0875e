"""Command-line front end.

    natanzon spectrum --preset pt2 --A 4.5 --B 1.5 --alpha 1
    natanzon satellite --preset pt2 --A 4.5 --B 1.5 --alpha 1 --direction up
    natanzon verify --preset rm --A 3 --B 2 --alpha 1

Structured results go out as JSON, curves and tables as CSV.  Exit codes:
0 success, 1 numerical failure, 2 bad input or usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ladder import ClosureInapplicable, LowestWeight, parse_closure, satellite_chain
from .params import AdmissibilityError, NatanzonParams, identify_pt2, identify_rm, preset_pt2, preset_rm, require_admissible
from .potential import potential_of_z
from .spectrum import LEVEL_COLUMNS, NoBoundState, enumerate_levels, solve_level
from .susy import compare_satellite_vs_susy, partner_from_arrays
from .verify import run_checks
from .wavefunction import NormalizationError, build_state
from .zmap import DEFAULT_N_POINTS, MapRangeError, build_zmap

GRID_ENV = "NATANZON_GRID_N"

EXAMPLES = {
    "spectrum": "natanzon spectrum --preset pt2 --A 4.5 --B 1.5 --alpha 1\n"
                "  -> CSV rows nu,E,alpha,beta,delta,p,q,m with E = 0 and 8",
    "wavefunction": "natanzon wavefunction --preset rm --A 3 --B 2 --alpha 1 --nu 1 --output phi1.csv\n"
                    "  -> CSV columns r,phi,dphi on the map nodes",
    "satellite": "natanzon satellite --preset pt2 --A 4.5 --B 1.5 --alpha 1 --direction up --closure isospectral\n"
                 "  -> JSON list of steps; the first has pt2.A = 5.5, pt2.B = 0.5",
    "compare-susy": "natanzon compare-susy --preset rm --A 3 --B 2 --alpha 1 --format json\n"
                    "  -> {\"verdict\": \"distinct\", \"sup_norm_diff\": ...}",
    "verify": "natanzon verify --preset rm --A 3 --B 2 --alpha 1\n"
              "  -> pass/fail table, exit 0 when everything passes",
    "zmap": "natanzon zmap --a 1 --c0 1 --c1 1 --f 80 --h0 10 --h1 20 --n-points 512\n"
            "  -> CSV columns r,z,zp",
}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: NatanzonParams
    source: str
    n_points: int
    fmt: str
    output: str | None


def default_grid_n() -> int:
    env = os.environ.get(GRID_ENV)
    if env is None:
        return DEFAULT_N_POINTS
    try:
        n = int(env)
    except ValueError:
        raise UsageError(f"{GRID_ENV}={env!r} is not an integer") from None
    return n


def _add_common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("parameters (exactly one source)")
    g.add_argument("--preset", choices=("pt2", "rm"))
    g.add_argument("--A", type=float)
    g.add_argument("--B", type=float)
    g.add_argument("--alpha", type=float)
    g.add_argument("--params", metavar="JSON", help="JSON file with a, c0, c1, f, h0, h1 (or preset, A, B, alpha)")
    for k in ("a", "c0", "c1", "f", "h0", "h1"):
        g.add_argument(f"--{k}", type=float)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", help="write here instead of stdout")
    p.add_argument("--n-points", type=int, default=None, help=f"map nodes (default {DEFAULT_N_POINTS}, env {GRID_ENV})")
    p.add_argument("--dump-zmap", metavar="CSV", help="also write the (r, z, zp) map table")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="natanzon", description="Spectra, ladder steps and satellites of Natanzon potentials.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_, description=help_, epilog="example:\n  " + EXAMPLES[name],
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        _add_common(sp)
        return sp

    add("spectrum", "bound-state levels")
    sp = add("wavefunction", "tabulate a normalized bound state")
    sp.add_argument("--nu", type=int, default=0)
    sp = add("satellite", "satellite parameters reached by ladder steps")
    sp.add_argument("--nu", type=int, default=0, help="starting level")
    sp.add_argument("--direction", choices=("up", "down"), default="up")
    sp.add_argument("--closure", default="isospectral", help="isospectral | ground-zero | h1s=<v>")
    sp.add_argument("--steps", type=int, default=1)
    sp.add_argument("--curves", metavar="CSV", help="write r and every potential of the chain")
    sp = add("compare-susy", "satellite vs SUSY partner of the ground state")
    sp.add_argument("--direction", choices=("up", "down"), default="up")
    add("verify", "independent checks: FD eigenvalues and residuals")
    add("zmap", "dump the coordinate map")
    return ap


def resolve_params(ns) -> tuple[NatanzonParams, str]:
    raw = {k: getattr(ns, k) for k in ("a", "c0", "c1", "f", "h0", "h1")}
    shape = {k: getattr(ns, k) for k in ("A", "B", "alpha")}
    sources = []
    if ns.preset is not None:
        sources.append("preset")
    if ns.params is not None:
        sources.append("file")
    if any(v is not None for v in raw.values()):
        sources.append("inline")
    if len(sources) != 1:
        raise UsageError("give exactly one of --preset, --params or the six --a/--c0/--c1/--f/--h0/--h1 flags")
    src = sources[0]
    if src != "preset" and any(v is not None for v in shape.values()):
        raise UsageError("--A/--B/--alpha only go with --preset")
    if src == "preset":
        if any(v is None for v in shape.values()):
            raise UsageError("--preset needs --A, --B and --alpha")
        make = preset_pt2 if ns.preset == "pt2" else preset_rm
        return make(shape["A"], shape["B"], shape["alpha"]), src
    if src == "file":
        try:
            data = json.loads(Path(ns.params).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read {ns.params}: {exc}") from None
        return NatanzonParams.from_dict(data).as_float(), src
    missing = [k for k, v in raw.items() if v is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + k for k in missing))
    return NatanzonParams(**raw), src


def _fmt(x) -> str:
    return repr(float(x))


def _csv(rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    for row in rows:
        wr.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _shape_info(params: NatanzonParams) -> dict:
    out = {}
    try:
        A, B, al, shift = identify_pt2(params)
        out["pt2"] = {"A": float(A), "B": float(B), "alpha": float(al), "shift": float(shift)}
    except ValueError:
        pass
    try:
        A, al = identify_rm(params)
        out["rm"] = {"A": float(A), "alpha": float(al)}
    except ValueError:
        pass
    return out


def cmd_spectrum(cfg: RunConfig, ns) -> int:
    levels = enumerate_levels(cfg.params)
    if cfg.fmt == "json":
        _emit(_json([dict(zip(LEVEL_COLUMNS, lv.as_row())) for lv in levels]), cfg.output)
    else:
        _emit(_csv([LEVEL_COLUMNS, *(lv.as_row() for lv in levels)]), cfg.output)
    return 0


def cmd_wavefunction(cfg: RunConfig, ns, zmap) -> int:
    st = build_state(cfg.params, zmap, solve_level(cfg.params, ns.nu))
    phi, dphi, _ = st.derivs_zw(zmap.z, zmap.w)
    if cfg.fmt == "json":
        _emit(_json({"level": dict(zip(LEVEL_COLUMNS, st.level.as_row())), "K": st.K,
                     "r": zmap.r.tolist(), "phi": phi.tolist(), "dphi": dphi.tolist()}), cfg.output)
    else:
        _emit(_csv([("r", "phi", "dphi"), *zip(zmap.r, phi, dphi)]), cfg.output)
    return 0


def cmd_satellite(cfg: RunConfig, ns, zmap) -> int:
    closure = parse_closure(ns.closure)
    chain = satellite_chain(cfg.params, ns.nu, ns.steps, closure=ns.closure, direction=ns.direction)
    steps = []
    for st in chain:
        d = st.to_dict()
        d.update(_shape_info(st.result))
        steps.append(d)
    _emit(_json({"closure": closure[0], "steps": steps, "reason": chain.reason}), cfg.output)
    if ns.curves:
        cols = [potential_of_z(cfg.params, zmap.z, zmap.w)]
        cols += [potential_of_z(st.result.as_float(), zmap.z, zmap.w) for st in chain]
        head = ("r", "V", *(f"V_sat{i + 1}" for i in range(len(chain))))
        Path(ns.curves).write_text(_csv([head, *zip(zmap.r, *cols)]))
    return 0


def cmd_compare(cfg: RunConfig, ns, zmap) -> int:
    from .ladder import satellite_params

    p = cfg.params
    ground = build_state(p, zmap, solve_level(p, 0))
    step = satellite_params(p, ground.level, ns.direction, "isospectral")
    res = compare_satellite_vs_susy(p, zmap, step, ground)
    if cfg.fmt == "json":
        _emit(_json(res.to_dict()), cfg.output)
        return 0
    n = len(zmap.u)
    k = int(0.05 * n)
    z, w, r = zmap.z[k:n - k], zmap.w[k:n - k], zmap.r[k:n - k]
    phi, d1, d2 = ground.derivs_zw(z, w, normalized=False)
    _, v_part = partner_from_arrays(phi, d1, d2, ground.level.E)
    v_sat = potential_of_z(step.result.as_float(), z, w)
    v_sat = v_sat - res.shift_a
    v_part = v_part - res.shift_b
    _emit(_csv([("r", "V_satellite", "V_partner", "diff"), *zip(r, v_sat, v_part, v_sat - v_part)]), cfg.output)
    return 0


def cmd_verify(cfg: RunConfig, ns, zmap) -> int:
    rows = run_checks(cfg.params, zmap)
    ok = all(r[1] for r in rows)
    if cfg.fmt == "json":
        _emit(_json({"passed": ok, "checks": [{"check": c, "pass": bool(s), "value": v} for c, s, v in rows]}),
              cfg.output)
    else:
        _emit(_csv([("check", "result", "value"), *((c, "PASS" if s else "FAIL", v) for c, s, v in rows)]),
              cfg.output)
    return 0 if ok else 1


def cmd_zmap(cfg: RunConfig, ns, zmap) -> int:
    if cfg.fmt == "json":
        _emit(_json({"closed_form": zmap.closed_form, "r": zmap.r.tolist(), "z": zmap.z.tolist(),
                     "zp": zmap.zp.tolist()}), cfg.output)
    else:
        _emit(_csv(zmap.csv_rows()), cfg.output)
    return 0


def run(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        params, src = resolve_params(ns)
        require_admissible(params)
        n = ns.n_points if ns.n_points is not None else default_grid_n()
        if n < 100:
            raise UsageError("grid needs at least 100 points")
        if getattr(ns, "steps", 1) < 0:
            raise UsageError("--steps must be >= 0")
        cfg = RunConfig(ns.command, params, src, n, ns.format, ns.output)
        if ns.command == "satellite":
            parse_closure(ns.closure)
    except (UsageError, AdmissibilityError, ValueError, KeyError) as exc:
        print(f"natanzon: error: {exc}", file=sys.stderr)
        return 2
    try:
        if cfg.command == "spectrum":
            return cmd_spectrum(cfg, ns)
        zmap = build_zmap(cfg.params, n_points=cfg.n_points)
        if ns.dump_zmap:
            Path(ns.dump_zmap).write_text(_csv(zmap.csv_rows()))
        handler = {
            "wavefunction": cmd_wavefunction,
            "satellite": cmd_satellite,
            "compare-susy": cmd_compare,
            "verify": cmd_verify,
            "zmap": cmd_zmap,
        }[cfg.command]
        return handler(cfg, ns, zmap)
    except (ClosureInapplicable, LowestWeight) as exc:
        print(f"natanzon: error: {exc}", file=sys.stderr)
        return 2
    except (NoBoundState, NormalizationError, MapRangeError, ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"natanzon: numerical failure: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
