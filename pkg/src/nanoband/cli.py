"""Batch front-end: parse a config, run computations, emit reports.

Commands: bands, masses, dispersion, verify, oracle, flatbands.
JSON is the canonical output (numbers at 17 significant digits, sorted
keys, no timestamps: identical configs give byte-identical output); CSV
is a flat projection for plotting tools.  Every output embeds a schema
version and the fully resolved configuration.

Exit codes: 0 success, 1 computation failure (e.g. a root bracket could
not be established), 2 usage/config errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from typing import Any

from . import masses as _masses
from . import quasimomentum as _qm
from . import spectrum as _spec
from . import verifier as _ver
from . import floquet_oracle as _oracle
from ._rootfind import RootBracketError
from .potential import PotentialSpec, from_config
from .spectrum import MagneticConfig, PurePointRegimeError

SCHEMA_VERSION = "nanoband/1"
OUTPUT_DIR_ENV = "NANOBAND_OUT_DIR"


def _fmt(x: Any) -> Any:
    """Round-trip-safe JSON projection (floats at 17 significant digits)."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(format(x, ".17g"))
    if isinstance(x, complex):
        return {"re": _fmt(x.real), "im": _fmt(x.imag)}
    if isinstance(x, dict):
        return {k: _fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_fmt(v) for v in x]
    return x


def _parse_grid(text: str) -> list[float]:
    try:
        lo_s, hi_s, n_s = text.split(":")
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
    except ValueError:
        raise ValueError(f"grid must be lo:hi:count, got {text!r}") from None
    if n < 1 or not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("grid bounds must be finite and count >= 1")
    if n == 1:
        return [lo]
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def _load_config_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    return data


def _resolve(args: argparse.Namespace, parser: argparse.ArgumentParser
             ) -> tuple[PotentialSpec, MagneticConfig, dict]:
    """Merge config file and flags (flags win); enforce invariants."""
    file_cfg = _load_config_file(args.config) if args.config else {}
    q_entry = args.q if args.q is not None else file_cfg.get("potential")
    if q_entry is None:
        parser.error("no potential given (use --q or the config file)")
    if isinstance(q_entry, str) and q_entry.strip().startswith(("[", "{")):
        q_entry = json.loads(q_entry)
    q = from_config(q_entry)

    mag = dict(file_cfg.get("magnetic", {}))
    if args.a is not None:
        mag.pop("B", None)
        mag["a"] = args.a
    if args.B is not None:
        if args.a is not None:
            parser.error("give either --a or --B/--N/--j, not both")
        mag.pop("a", None)
        mag["B"] = args.B
    if args.N is not None:
        mag["N"] = args.N
    if args.j is not None:
        mag["j"] = args.j
    if ("a" in mag) == ("B" in mag):
        parser.error("exactly one of a (phase) or B (field) is required")
    N = int(mag.get("N", 1))
    j = int(mag.get("j", 0))
    if "B" in mag:
        cfg = MagneticConfig.from_field(float(mag["B"]), N, j)
    else:
        cfg = MagneticConfig(a=float(mag["a"]), N=N, j=j)

    n_max = args.n_max if args.n_max is not None else int(file_cfg.get("n_max", 10))
    if n_max < 1:
        parser.error("n-max must be >= 1")
    grid = args.grid if args.grid is not None else file_cfg.get("grid")

    echo = {
        "potential": {"label": q.label,
                      "pieces": [[w, v] for w, v in q.pieces],
                      "q0": q.q0},
        "magnetic": {"a": cfg.a, "N": cfg.N, "j": cfg.j, "B": cfg.B,
                     "a_j": cfg.a_j, "c_j": cfg.c_j, "s_j": cfg.s_j},
        "n_max": n_max,
        "grid": grid,
        "format": args.format,
    }
    return q, cfg, echo


def _emit(payload: dict, args: argparse.Namespace, csv_rows=None,
          csv_header=None, csv_summary=None) -> None:
    if args.format == "csv" and csv_rows is not None:
        lines = [f"# {k}={json.dumps(_fmt(v), sort_keys=True)}"
                 for k, v in payload["config"].items()]
        lines.append(f"# schema_version={payload['schema_version']}")
        for k, v in (csv_summary or {}).items():
            lines.append(f"# {k}={json.dumps(_fmt(v), sort_keys=True)}")
        lines.append(",".join(csv_header))
        for row in csv_rows:
            lines.append(",".join(
                format(v, ".17g") if isinstance(v, float) else str(v)
                for v in row))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(_fmt(payload), sort_keys=True, indent=1) + "\n"
    if args.output:
        path = args.output
        out_dir = os.environ.get(OUTPUT_DIR_ENV)
        if out_dir and not os.path.isabs(path):
            path = os.path.join(out_dir, path)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _payload(command: str, echo: dict, result: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command,
            "config": echo, "result": result}


def _structure_dict(bs) -> dict:
    return {
        "lambda0": bs.lambda0,
        "gaps": [{"n": n,
                  "lambda_minus": bs.minus[n - 1],
                  "lambda_plus": bs.plus[n - 1],
                  "degenerate": bs.degenerate[n - 1],
                  "critical": bs.critical[n - 1],
                  "height": bs.heights[n - 1]}
                 for n in range(1, bs.n_max + 1)],
        "bands": [{"n": n, "lo": bs.band(n)[0], "hi": bs.band(n)[1]}
                  for n in range(1, bs.n_max + 1)],
        "flat_bands": list(bs.flat_bands),
        "merged": [{"n_start": n, "n_end": n1, "lo": lo, "hi": hi}
                   for n, n1, lo, hi in bs.merged_intervals()],
        "anomalies": list(bs.anomalies),
    }


def _record_dict(r) -> dict:
    return {"check": r.name, "n": r.n, "lhs": r.lhs, "rhs": r.rhs,
            "slack": r.slack, "passed": r.passed, "skipped": r.skipped,
            "note": r.note, "extras": {k: v for k, v in r.extras}}


def cmd_bands(args, parser) -> None:
    q, cfg, echo = _resolve(args, parser)
    bs = _spec.band_structure(q, cfg, echo["n_max"])
    rows = [(g["n"], g["lambda_minus"], g["lambda_plus"],
             int(g["degenerate"]), g["critical"], g["height"])
            for g in _structure_dict(bs)["gaps"]]
    _emit(_payload("bands", echo, _structure_dict(bs)), args,
          csv_rows=rows,
          csv_header=["n", "lambda_minus", "lambda_plus", "degenerate",
                      "critical", "height"])


def cmd_masses(args, parser) -> None:
    q, cfg, echo = _resolve(args, parser)
    bs = _spec.band_structure(q, cfg, echo["n_max"], include_flat=False)
    mt = _masses.effective_masses(bs)
    result = {
        "mu0": mt.mu0,
        "bare_mu0": mt.bare_mu0,
        "entries": [{"n": n, "mu_plus": mp, "mu_minus": mm,
                     "bare_mu_plus": mt.bare_plus[n - 1],
                     "bare_mu_minus": mt.bare_minus[n - 1]}
                    for n, mp, mm in mt.entries()],
    }
    rows = [(e["n"], e["mu_plus"], e["mu_minus"], e["bare_mu_plus"],
             e["bare_mu_minus"]) for e in result["entries"]]
    _emit(_payload("masses", echo, result), args, csv_rows=rows,
          csv_header=["n", "mu_plus", "mu_minus", "bare_mu_plus",
                      "bare_mu_minus"])


def cmd_dispersion(args, parser) -> None:
    q, cfg, echo = _resolve(args, parser)
    if not echo["grid"]:
        parser.error("dispersion needs --grid lo:hi:count")
    lams = _parse_grid(echo["grid"])
    z_top = math.sqrt(max(max(lams) - q.q0, 1.0))
    n_need = max(2, int(math.ceil(2.0 * z_top / math.pi)) + 3, echo["n_max"])
    bs = _spec.band_structure(q, cfg, n_need, include_flat=False)
    rows = []
    for lam in lams:
        k = _qm.k_eval(q, cfg, lam, bs=bs)
        rows.append((lam, k.real, k.imag))
    result = {"rows": [{"lambda": a, "re_k": b, "im_k": c}
                       for a, b, c in rows]}
    _emit(_payload("dispersion", echo, result), args, csv_rows=rows,
          csv_header=["lambda", "re_k", "im_k"])


def cmd_verify(args, parser) -> None:
    q, cfg, echo = _resolve(args, parser)
    n_max = echo["n_max"]
    bs = _spec.band_structure(q, cfg, n_max, include_flat=False)
    mt = _masses.effective_masses(bs)
    trace = _masses.verify_trace_identity(mt)
    # the partial-fraction series needs depth regardless of the display
    # range; reuse the structure when it is already deep enough
    n_pf = max(n_max, 200)
    bs_pf = bs if n_pf == n_max else _spec.band_structure(
        q, cfg, n_pf, include_flat=False)
    mt_pf = mt if bs_pf is bs else _masses.effective_masses(bs_pf)
    test_lams = [bs.lambda0 - d for d in (5.0, 20.0, 100.0)]
    pf = _masses.verify_partial_fraction(q, cfg, test_lams, n_pf,
                                         bs=bs_pf, mt=mt_pf)
    ineq = _ver.check_height_mass_gap(bs, mt)
    merged = _ver.check_merged_band_bound(bs, mt)
    mt = dataclasses.replace(
        mt, trace_residual=trace.residual,
        partial_fraction_residuals=tuple((r.lam, r.residual_rel) for r in pf))
    records = [_record_dict(r) for r in ineq.records + merged.records]
    result = {
        "trace_residual": mt.trace_residual,
        "trace_partial_sum": trace.partial_sum,
        "trace_extrapolated": trace.extrapolated,
        "partial_fraction": [{"lambda": r.lam, "direct": r.direct,
                              "series": r.series,
                              "residual_rel": r.residual_rel} for r in pf],
        "inequalities": records,
        "summary": {
            "checked": ineq.checked + merged.checked,
            "failures": len(ineq.failures) + len(merged.failures),
            "worst_slack": min(ineq.worst_slack, merged.worst_slack),
            "normalization_shift": ineq.shift,
        },
    }
    rows = [(r["check"], r["n"], r["lhs"], r["rhs"], r["slack"],
             int(r["passed"])) for r in records]
    _emit(_payload("verify", echo, result), args, csv_rows=rows,
          csv_header=["check", "n", "lhs", "rhs", "slack", "passed"],
          csv_summary={"trace_residual": trace.residual,
                       **result["summary"]})


def cmd_oracle(args, parser) -> None:
    q, cfg, echo = _resolve(args, parser)
    grid_spec = echo["grid"] or "0:40:200"
    echo["grid"] = grid_spec
    lams = _parse_grid(grid_spec)
    rep = _oracle.cross_validate(q, cfg, lams)
    result = {
        "max_deviation": rep.max_deviation,
        "points": len(rep.lams),
        "skipped_near_flat_bands": list(rep.skipped),
        "membership_checked": rep.membership_checked,
        "membership_mismatches": list(rep.membership_mismatches),
    }
    rows = list(zip(rep.lams, rep.deviations))
    _emit(_payload("oracle", echo, result), args, csv_rows=rows,
          csv_header=["lambda", "deviation"])


def cmd_flatbands(args, parser) -> None:
    q, cfg, echo = _resolve(args, parser)
    fs = _spec.flat_spectrum(q, cfg, echo["n_max"])
    result = {
        "pure_point_regime": cfg.c_abs < _spec.PURE_POINT_CUTOFF,
        "dirichlet": list(fs.dirichlet),
        "f_locus": list(fs.f_locus),
        "all": list(fs.all),
    }
    rows = ([("dirichlet", v) for v in fs.dirichlet]
            + [("f_locus", v) for v in fs.f_locus])
    _emit(_payload("flatbands", echo, result), args, csv_rows=rows,
          csv_header=["kind", "value"])


_COMMANDS = {
    "bands": cmd_bands,
    "masses": cmd_masses,
    "dispersion": cmd_dispersion,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "flatbands": cmd_flatbands,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nanoband",
        description="Band structure and spectral identities for zigzag "
                    "nanotube quantum graphs in a magnetic field.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("--config", help="JSON config file (flags override)")
        p.add_argument("--q", help="potential: a name (zero, two-step, "
                                   "three-step) or inline JSON pieces/samples")
        p.add_argument("--a", type=float, help="magnetic phase (radians)")
        p.add_argument("--B", type=float, help="field strength (converted "
                                               "via a = 3B/16 * cot(pi/2N))")
        p.add_argument("--N", type=int, help="circumference index")
        p.add_argument("--j", type=int, help="sector index")
        p.add_argument("--n-max", dest="n_max", type=int,
                       help="highest gap index (default 10)")
        p.add_argument("--grid", help="lambda grid lo:hi:count")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", help="output file (default stdout; "
                                        f"${OUTPUT_DIR_ENV} sets the "
                                        "default directory)")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _COMMANDS[args.command](args, parser)
    except (RootBracketError, PurePointRegimeError,
            _oracle.FlatBandVicinityError, ValueError) as exc:
        print(f"nanoband: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
