"""Command-line entry point: ``zetaladder <command> ...``.

Exit codes: 0 success, 1 numerical failure, 2 domain error,
3 resource error (including an insufficient ``domain_hi``), 4 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, replace
from fractions import Fraction
from pathlib import Path

from . import functionals as fn
from .config import SCHEMA_VERSION, RunConfig, env_workers, read_config_file
from .errors import ConvergenceError, DomainError, LadderRangeError, ResourceError, ZetaLadderError
from .fourier import FourierMode, TransformSpec, fourier_modes, gram_matrix
from .ladder import Ladder
from .zeta import abs2_critical, hardy_Z, theta

EXIT_OK, EXIT_FAIL, EXIT_DOMAIN, EXIT_RESOURCE, EXIT_USAGE = 0, 1, 2, 3, 4
FUNCTIONALS = ("T1", "T2", "F1", "F2", "lnpow", "quotient", "cosdiff")

fmt17 = fn.fmt17


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# argument parsing

_RUN_FLAGS = {
    "domain_hi": float,
    "rs_correction_terms": int,
    "em_crossover": float,
    "em_terms": int,
    "target_rel_err": float,
    "c0": float,
    "gamma": float,
    "newton_tol": float,
    "max_newton_iters": int,
    "tol": float,
    "table_tol": float,
    "resolution": float,
    "workers": int,
    "cache_dir": str,
}


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", default=argparse.SUPPRESS, help="file of 'key = value' lines")
    p.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    p.add_argument("--output", "-o", default=argparse.SUPPRESS, help="output file ('-' for stdout)")
    for name, typ in _RUN_FLAGS.items():
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=typ, default=argparse.SUPPRESS)
    return p


def _grid(text):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: expected comma-separated numbers")
    if not vals:
        raise argparse.ArgumentTypeError("empty grid")
    return vals


def _fermat(text):
    parts = text.split(",")
    try:
        vals = [int(v) for v in parts]
    except ValueError:
        vals = []
    if len(vals) != 4:
        raise argparse.ArgumentTypeError(f"bad fermat tuple {text!r}: expected x,y,z,n integers")
    try:
        return fn.fermat_rational(*vals)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(f"bad fermat tuple {text!r}: {exc}")


def _length(text):
    try:
        v = float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad length {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError("length must be positive")
    return v


def _mode(text):
    if text == "unit":
        return "unit", 1
    for prefix, kind in (("cos", "cosine"), ("sin", "sine")):
        if text.startswith(prefix) and text[len(prefix) :].isdigit() and int(text[len(prefix) :]) >= 1:
            return kind, int(text[len(prefix) :])
    raise argparse.ArgumentTypeError(f"bad mode {text!r}: expected unit, cosM or sinM")


def build_parser():
    common = _common()
    p = _Parser(prog="zetaladder", description="Jacob's ladder numerical laboratory.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    z = sub.add_parser("zeta", parents=[common], help="Z(t), theta(t), |zeta(1/2+it)|^2")
    z.add_argument("t", nargs="*", type=float)
    z.add_argument("--batch", help="file with one t per line")

    ld = sub.add_parser("ladder", parents=[common], help="reverse tower with gap and increment reports")
    ld.add_argument("T", type=float)
    ld.add_argument("k", type=int)

    o = sub.add_parser("ortho", parents=[common], help="normalized Gram matrix of the transformed Fourier system")
    o.add_argument("T", type=float)
    o.add_argument("l", type=_length)
    o.add_argument("k", type=int)
    o.add_argument("M", type=int)
    o.add_argument("--path", choices=("pullback", "direct"), default="pullback")
    o.add_argument("--weight", choices=("raw", "omega"), default="raw")

    f = sub.add_parser("functional", parents=[common], help="finite-height functional reports")
    f.add_argument("which", choices=FUNCTIONALS)
    f.add_argument("--x", type=float, default=1.0)
    f.add_argument("--l", type=_length, default=0.5)
    f.add_argument("--k", type=int, default=1)
    f.add_argument("--m", type=int, default=1)
    f.add_argument("--mode", type=_mode, default=("cosine", 1))
    f.add_argument("--fermat", type=_fermat)
    f.add_argument("--grid", type=_grid, help="comma-separated T (or tau for T1/T2) values")
    f.add_argument("--kind", choices=("cos2", "sin2"), default="cos2")
    f.add_argument("--convention", choices=("standard", "printed"), default="standard")
    f.add_argument("--sigma", type=float, default=1.0)

    s = sub.add_parser("c0-sweep", parents=[common], help="ladder sensitivity to the constant c0")
    s.add_argument("T", type=float)
    s.add_argument("k", type=int)
    s.add_argument("--values", type=_grid, required=True, help="comma-separated c0 values")
    return p


def resolve_config(args) -> RunConfig:
    """Defaults, then the config file, then explicit flags, then the workers env var if unset."""
    data = {}
    if getattr(args, "config", None):
        data.update(read_config_file(args.config))
    explicit = {k: getattr(args, k) for k in list(_RUN_FLAGS) + ["format", "output"] if hasattr(args, k)}
    data.update(explicit)
    if "workers" not in data:
        data["workers"] = env_workers(1)
    return RunConfig.from_mapping(data)


# ---------------------------------------------------------------------------
# commands


def _ladder(cfg: RunConfig) -> Ladder:
    return Ladder.cached(
        cfg.resolved_cache_dir(), cfg.ladder_config(), cfg.policy(), cfg.resolution, cfg.table_tol, cfg.workers
    )


def _csv(rows, header=None, config=None, command=None):
    buf = io.StringIO()
    if config is not None:
        buf.write(f"# zetaladder schema_version={SCHEMA_VERSION} command={command}\n")
        buf.write("# config " + json.dumps(config, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(header)
    for r in rows:
        w.writerow([fmt17(v) if isinstance(v, float) else ("" if v is None else v) for v in r])
    return buf.getvalue()


def cmd_zeta(args, cfg):
    ts = list(args.t)
    if args.batch:
        for line in Path(args.batch).read_text().splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                ts.append(float(line))
    if not ts:
        raise UsageError("zeta needs at least one t (positional or --batch)")
    pol = cfg.policy()
    recs = [{"t": t, "Z": hardy_Z(t, pol), "theta": theta(t, pol), "abs2": abs2_critical(t, pol)} for t in ts]
    if cfg.format == "csv":
        rows = [[r["t"], r["Z"], r["theta"], r["abs2"]] for r in recs]
        return _csv(rows, ["t", "Z", "theta", "abs2"], cfg.report_dict(), "zeta")
    return recs[0] if len(recs) == 1 and not args.batch else recs


def cmd_ladder(args, cfg):
    lad = _ladder(cfg)
    tower = lad.reverse_tower(args.T, args.k)
    gaps = lad.gap_report(tower) if tower.k >= 2 else ()
    inc = lad.increment_report(tower)
    if cfg.format == "csv":
        header = [
            "r", "level", "gap", "gap_prediction", "gap_ratio_to_prediction", "adjacent_gap_ratio",
            "segment_integral", "increment_prediction", "increment_ratio_to_prediction", "adjacent_integral_ratio",
        ]
        rows = [[0, tower.levels[0]] + [None] * 8]
        for r in range(1, tower.k + 1):
            g = gaps[r - 1] if gaps else None
            i = inc.records[r - 1]
            gap = tower.levels[r] - tower.levels[r - 1]
            rows.append([
                r, tower.levels[r], gap,
                g.prediction if g else None, g.gap_ratio_to_prediction if g else None, g.adjacent_gap_ratio if g else None,
                i.segment_integral, i.prediction, i.ratio_to_prediction, i.adjacent_integral_ratio,
            ])
        return _csv(rows, header, cfg.report_dict(), "ladder")
    return {
        "T": args.T,
        "k": tower.k,
        "levels": list(tower.levels),
        "gap_report": [asdict(g) for g in gaps],
        "increment_report": {
            "records": [asdict(r) for r in inc.records],
            "total": inc.total,
            "telescoping_residual": inc.telescoping_residual,
        },
        "gap_law_ratio": lad.gap_law_ratio(args.T),
    }


def cmd_ortho(args, cfg):
    if args.M < 0 or 2 * args.M + 1 > 12:
        raise UsageError("M must be between 0 and 5 (at most 12 modes)")
    modes = fourier_modes(args.M, args.l)
    spec = TransformSpec(args.T, args.k, args.l, cfg.tol, args.weight)
    lad = _ladder(cfg) if args.k else None
    G = gram_matrix(lad, modes, spec, args.path)
    labels = [m.label for m in modes]
    if cfg.format == "csv":
        rows = [[labels[i]] + [float(v) for v in G[i]] for i in range(len(modes))]
        return _csv(rows, ["mode"] + labels, cfg.report_dict(), "ortho")
    return {"T": args.T, "l": args.l, "k": args.k, "path": args.path, "weight": args.weight, "modes": labels, "gram": G.tolist()}


def cmd_functional(args, cfg):
    lad = _ladder(cfg)
    w = args.which
    grid = args.grid
    T_grid = grid if grid is not None else list(fn.DEFAULT_T_GRID)
    tol = cfg.tol
    extra = None
    if w == "T1":
        mode = FourierMode(args.mode[0], args.mode[1], args.l)
        rep = fn.theorem1(lad, args.x, args.l, args.k, mode, grid, tol)
    elif w == "T2":
        if args.fermat is None:
            raise UsageError("T2 needs --fermat x,y,z,n")
        mode = FourierMode(args.mode[0], args.mode[1], args.l)
        res = fn.fermat_zeta_condition(lad, args.fermat, args.l, args.k, mode, grid, tol)
        rep = res.report
        extra = {k: v for k, v in res.to_dict().items() if k != "report"}
    elif w == "F1":
        rep = fn.functional_F1(lad, args.fermat or args.l, args.k, T_grid, tol)
    elif w == "F2":
        rep = fn.functional_F2(lad, args.fermat or args.l, args.k, args.m, T_grid, args.kind, args.convention, tol)
    elif w == "lnpow":
        rep = fn.ln_power_report(lad, args.k, T_grid, tol)
    elif w == "quotient":
        rep = fn.quotient_report(lad, args.sigma, grid if grid is not None else (1.0e3, 1.0e4, 1.0e5))
    else:
        rep = fn.cosine_diff_report(lad, args.l, args.k, args.m, T_grid, tol)
    if not rep.grid:
        raise LadderRangeError(
            "no grid point fits in domain_hi = %.6g: %s" % (cfg.domain_hi, rep.skipped[0]["error"]),
            required=None,
        )
    if cfg.format == "csv":
        head = f"# zetaladder schema_version={SCHEMA_VERSION} command=functional {w}\n"
        head += "# config " + json.dumps(cfg.report_dict(), sort_keys=True) + "\n"
        meta = {"params": rep.params, "extrapolated_limit": rep.extrapolated_limit, "trend_ok": rep.trend_ok}
        if extra:
            meta.update(verdict=extra["verdict"])
        head += "# report " + json.dumps(meta, sort_keys=True, default=fn._json_default) + "\n"
        return head + rep.to_csv()
    out = {"which": w, "report": rep.to_dict()}
    if extra:
        out.update(extra)
    return out


def cmd_c0_sweep(args, cfg):
    rows, recs = [], []
    base = _ladder(cfg)
    for c0 in args.values:
        lad = Ladder(replace(base.config, c0=c0), base.jtable, base.policy)
        tower = lad.reverse_tower(args.T, args.k)
        ratio = lad.gap_law_ratio(args.T)
        recs.append({"c0": c0, "levels": list(tower.levels), "gap_law_ratio": ratio})
        rows.append([c0, ratio] + list(tower.levels))
    if cfg.format == "csv":
        header = ["c0", "gap_law_ratio"] + [f"level{r}" for r in range(args.k + 1)]
        return _csv(rows, header, cfg.report_dict(), "c0-sweep")
    return {"T": args.T, "k": args.k, "sweep": recs}


COMMANDS = {"zeta": cmd_zeta, "ladder": cmd_ladder, "ortho": cmd_ortho, "functional": cmd_functional, "c0-sweep": cmd_c0_sweep}


def render(command, result, cfg) -> str:
    if isinstance(result, str):
        return result
    doc = {"schema_version": SCHEMA_VERSION, "command": command, "config": cfg.report_dict(), "result": result}
    return json.dumps(doc, indent=2, sort_keys=True, default=fn._json_default, allow_nan=False) + "\n"


def _emit(text, cfg):
    if cfg.output in ("", "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(cfg.output).write_text(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (KeyError, ValueError, OSError) as exc:
        parser.print_usage(sys.stderr)
        print(f"zetaladder: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        result = COMMANDS[args.command](args, cfg)
        _emit(render(args.command, result, cfg), cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"zetaladder: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"zetaladder: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except LadderRangeError as exc:
        print(f"zetaladder: insufficient domain: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ResourceError as exc:
        print(f"zetaladder: resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ConvergenceError as exc:
        print(f"zetaladder: numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, TypeError) as exc:
        parser.print_usage(sys.stderr)
        print(f"zetaladder: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ZetaLadderError as exc:
        print(f"zetaladder: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
