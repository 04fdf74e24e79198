"""Command-line front end: ``grh-expanders <command> [options]``.

Every command prints an aligned text summary and, with ``--out``, writes a
JSON report that embeds the resolved configuration, the package version,
the seed and the experiment name. Reports contain no timestamps, so equal
inputs give byte-identical files.

Options can also come from ``--config FILE`` holding ``key = value`` lines;
explicit flags win over the file.

Exit codes: 0 success, 2 invalid input or mathematical domain error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .abelian import expansion_report, spectrum
from .arith import primes_up_to
from .classgroup import (InvalidDiscriminant, class_cayley_graph, class_generators, class_group, default_bound,
                         smallest_admissible_bound)
from .curves.gap import FixtureError, conductor_gap, gap_from_factored_discriminant, parse_factorization
from .curves.isogeny_class import (DEFAULT_B, NotOrdinary, enumerate_isogeny_class, isogeny_bound, isogeny_graph,
                                   partition_levels, verify_cayley_correspondence)
from .curves.modpoly import UnsupportedModularLevel
from .residue_graphs import GrhGraphConfig, build_grh_graph, unit_graph_report
from .walks import (DEFAULT_C, WalkConfig, complete_cayley_graph, dlog_experiment, mixing_length, random_target,
                    run_walks)

EXPERIMENTS = {
    "unit-graph": "expansion of unit-group Cayley graphs with small-prime generators",
    "class-graph": "class-group Cayley graph on prime-norm ideal classes",
    "isogeny-class": "horizontal isogeny graphs versus class-group Cayley graphs",
    "mix": "random-walk hitting probability of a fixed subset",
    "dlog-reduce": "discrete-log reduction by random horizontal isogeny walks",
    "gap": "conductor gap of an isogeny class",
}

DOMAIN_ERRORS = (ValueError, ArithmeticError, NotOrdinary, UnsupportedModularLevel, FixtureError, InvalidDiscriminant)


class ConfigError(ValueError):
    pass


def read_config(path: str) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{n}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def spectrum_summary(values, degree: int) -> dict:
    lam = np.sort(np.asarray(values, dtype=float))[::-1]
    nontriv = lam[1:] if len(lam) > 1 else np.array([])
    return {
        "size": int(len(lam)),
        "lambda_triv": float(lam[0]) if len(lam) else None,
        "max_nontrivial_abs": float(np.max(np.abs(nontriv))) if len(nontriv) else 0.0,
        "min": float(lam[-1]) if len(lam) else None,
        "degree": int(degree),
        "values": [round(float(v), 10) + 0.0 for v in lam] if len(lam) <= 64 else None,
    }


def _table(rows: list[tuple[str, object]]) -> str:
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


# ---------------------------------------------------------------- commands

def _parse_q_spec(spec: str) -> list[int]:
    """'1009' or 'lo:hi' (every prime in the closed range)."""
    if ":" in spec:
        lo, hi = (int(s) for s in spec.split(":", 1))
        return [q for q in primes_up_to(hi) if q >= lo]
    return [int(spec)]


def cmd_unit_graph(a) -> tuple[dict, str]:
    qs = _parse_q_spec(str(a.q))
    B = float(a.B) if a.B is not None else (None if a.x is not None else 2.5)
    x = int(a.x) if a.x is not None else None
    records = []
    for q in qs:
        if q < 3:
            raise ValueError(f"q must be >= 3, got {q}")
        rec = unit_graph_report(q, B=B, x=x, girth_max_len=int(a.girth_max_len))
        if len(qs) == 1 and rec["k"] and q <= 64:
            g = build_grh_graph(GrhGraphConfig(q, B=B, x=x))
            rec["spectrum"] = spectrum_summary(spectrum(g), g.degree)
        records.append(rec)
    result = {"records": records}
    if len(records) > 1:
        result["max_grh_ratio"] = max(r["grh_ratio"] for r in records)
        result["all_connected"] = all(r["components"] == 1 for r in records)
    lines = [f"{'q':>8} {'x':>6} {'k':>5} {'max|lam|':>10} {'delta':>8} {'ratio':>8} {'comp':>5}"]
    for r in records:
        lines.append(f"{r['q']:>8} {r['x']:>6} {r['k']:>5} {r['max_nontrivial']:>10.4f} {r['delta']:>8.4f} "
                     f"{r['grh_ratio']:>8.4f} {r['components']:>5}")
    return result, "\n".join(lines)


def cmd_class_graph(a) -> tuple[dict, str]:
    D = int(a.D)
    cg = class_group(D)
    raised = False
    if a.M is not None:
        M = float(a.M)
    else:
        # for tiny |D| the bound can fall below every usable prime; lift it to the first one
        M = default_bound(D, float(a.B if a.B is not None else 2.0))
        if M < smallest_admissible_bound(D):
            M, raised = float(smallest_admissible_bound(D)), True
    g = class_cayley_graph(D, M=M)
    lam = spectrum(g)
    gens = class_generators(D, M)
    result = {
        "D": D,
        "h": cg.h,
        "cyclic_factors": list(cg.cyclic_factors),
        "M": M,
        "M_raised_to_first_usable_prime": raised,
        "generators_used": [{"ell": s.ell, "form": str(s.form), "kind": s.kind} for s in gens],
        "degree": g.degree,
        "components": g.components(),
        "spectrum_summary": spectrum_summary(lam, g.degree),
    }
    text = _table([("D", D), ("h", cg.h), ("Cl structure", cg.cyclic_factors), ("M", f"{M:g}"),
                   ("primes", [s.ell for s in gens]), ("degree", g.degree),
                   ("max nontrivial |lam|", f"{result['spectrum_summary']['max_nontrivial_abs']:.6f}")])
    return result, text


def cmd_isogeny_class(a) -> tuple[dict, str]:
    p, N = int(a.p), int(a.N)
    B = float(a.B) if a.B is not None else DEFAULT_B
    fallback = _flag(a.velu_fallback)
    cls = enumerate_isogeny_class(p, N)
    levels = []
    lines = [f"p={p} N={N} t={cls.t} d={cls.d} D0={cls.D0} f={cls.f} |S|={len(cls)}",
             f"{'c':>4} {'D':>8} {'h':>4} {'deg':>4} {'match':>6}"]
    for lv in partition_levels(cls, fallback):
        entry = {"c": lv.c, "D": lv.D, "h": lv.h, "j_invariants": lv.members}
        try:
            g = isogeny_graph(lv, cls, B=B, velu_fallback=fallback)
            ok, rep = verify_cayley_correspondence(lv, cls, velu_fallback=fallback, graph=g)
            entry.update(regularity=g.regularity, primes=[ell for ell, _ in g.primes], omitted_primes=g.omitted,
                         spectrum_summary=spectrum_summary(g.spectrum(), g.regularity or 0), correspondence=ok)
        except ValueError as exc:  # every prime below the bound is inert or divides c
            entry.update(regularity=0, primes=[], omitted_primes=[], spectrum_summary=None, correspondence=None,
                         note=str(exc))
        levels.append(entry)
        lines.append(f"{lv.c:>4} {lv.D:>8} {lv.h:>4} {str(entry['regularity']):>4} {str(entry['correspondence']):>6}")
    gap = conductor_gap(cls)
    result = {"p": p, "N": N, "t": cls.t, "d": cls.d, "D0": cls.D0, "f": cls.f, "size": len(cls),
              "B": B, "M": isogeny_bound(p, B), "levels": levels, "conductor_gap": gap,
              "edge_multiplicity": "number of kernels; ramified primes counted twice"}
    lines.append(f"conductor gap {gap}")
    return result, "\n".join(lines)


def _build_graph(spec: str):
    kind, _, rest = spec.partition(":")
    params = dict(kv.split("=", 1) for kv in rest.split(",") if kv) if "=" in rest else {}
    if kind == "unit":
        q = int(params["q"])
        B = float(params["B"]) if "B" in params else None
        x = int(params["x"]) if "x" in params else None
        return build_grh_graph(GrhGraphConfig(q, B=B if (B is not None or x is not None) else 2.5, x=x))
    if kind == "class":
        D = int(params["D"])
        M = float(params["M"]) if "M" in params else None
        B = float(params["B"]) if "B" in params else (None if M is not None else 2.0)
        return class_cayley_graph(D, M=M, B=B)
    if kind == "complete":
        return complete_cayley_graph(tuple(int(m) for m in rest.split("x")))
    raise ValueError(f"unknown graph spec {spec!r}; use unit:q=..,B=.. | class:D=..,M=.. | complete:n[xm...]")


def cmd_mix(a) -> tuple[dict, str]:
    g = _build_graph(str(a.graph))
    lam = spectrum(g)
    rep = expansion_report(g, 2.5, lam) if g.degree > 1 else None
    size = int(a.target_size) if a.target_size is not None else math.ceil(g.order * float(a.target_fraction))
    if a.length is not None:
        length = int(a.length)
    else:
        c = rep.max_nontrivial_abs if rep else 0.0
        length = mixing_length(g.order, size, g.degree, 0.0 if c < 1e-9 else c)
    cfg = WalkConfig(length, int(a.trials), int(a.seed))
    target = random_target(g, size, int(a.seed))
    wr = run_walks(g, 0, cfg, target)
    result = wr.to_dict()
    result["max_nontrivial_abs"] = rep.max_nontrivial_abs if rep else None
    text = _table([("graph", g.label), ("length", length), ("trials", cfg.trials), ("target", f"{size}/{g.order}"),
                   ("expected", f"{wr.expected_prob:.6f}"), ("observed", f"{wr.observed_freq:.6f}"),
                   ("within 3 sigma", wr.within_3sigma),
                   ("in band", "not applicable" if wr.in_lemma_band is None else wr.in_lemma_band)])
    return result, text


def cmd_dlog_reduce(a) -> tuple[dict, str]:
    p, N = int(a.p), int(a.N)
    mu = float(a.mu)
    if not 0 < mu <= 1:
        raise ValueError(f"mu must lie in (0, 1], got {mu}")
    cls = enumerate_isogeny_class(p, N)
    levels = partition_levels(cls)
    if a.level is not None:
        pick = [lv for lv in levels if lv.c == int(a.level)]
        if not pick:
            raise ValueError(f"no level with conductor {a.level}; available {[lv.c for lv in levels]}")
        level = pick[0]
    else:
        level = max(levels, key=lambda lv: (lv.h, -lv.c))
    rep = dlog_experiment(level, cls, mu, int(a.runs), int(a.seed), C=float(a.C),
                          B=float(a.B) if a.B is not None else None)
    result = rep.to_dict()
    text = _table([("level", rep.level_id), ("h", level.h), ("mu", rep.mu), ("runs", rep.runs),
                   ("walk length", rep.walk_length), ("mean queries", f"{rep.mean_queries:.3f}"),
                   ("max queries", rep.max_queries), ("failures", rep.failures), ("verified", rep.all_verified)])
    return result, text


def cmd_gap(a) -> tuple[dict, str]:
    if a.fixture is not None:
        with open(a.fixture, encoding="utf-8") as fh:
            fac = parse_factorization(fh.read())
        f, gap = gap_from_factored_discriminant(fac)
        result = {"source": "fixture", "d": str(fac.value()), "factorization": str(fac),
                  "largest_square_factor": f, "f": f, "conductor_gap": gap}
    elif a.p is not None and a.N is not None:
        cls = enumerate_isogeny_class(int(a.p), int(a.N))
        levels = partition_levels(cls, _flag(a.velu_fallback)) if not _flag(a.skip_levels) else []
        result = {"source": "class", "p": cls.p, "N": cls.N, "d": cls.d, "f": cls.f,
                  "conductor_gap": conductor_gap(cls), "level_conductors": [lv.c for lv in levels]}
    else:
        raise ValueError("give --fixture or both --p and --N")
    text = _table([(k, v) for k, v in result.items() if k != "factorization"])
    return result, text


COMMANDS = {
    "unit-graph": cmd_unit_graph,
    "class-graph": cmd_class_graph,
    "isogeny-class": cmd_isogeny_class,
    "mix": cmd_mix,
    "dlog-reduce": cmd_dlog_reduce,
    "gap": cmd_gap,
}

# built-in defaults, applied after --config so the file can override them
DEFAULTS = {
    "unit-graph": {"girth_max_len": 30},
    "class-graph": {},
    "isogeny-class": {"velu_fallback": "false"},
    "mix": {"trials": 10000, "target_fraction": 0.1},
    "dlog-reduce": {"mu": 0.5, "runs": 100, "C": DEFAULT_C},
    "gap": {"velu_fallback": "false", "skip_levels": "false"},
}


def _flag(v) -> bool:
    return str(v).lower() in ("1", "true", "yes", "on")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grh-expanders", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the JSON report here")
        sp.add_argument("--seed", type=int, default=None, help="seed for every random choice (default 0)")
        sp.add_argument("--config", help="key = value file with option defaults")
        return sp

    sp = common(sub.add_parser("unit-graph", help=EXPERIMENTS["unit-graph"]))
    sp.add_argument("--q", help="modulus, or lo:hi for every prime in a range")
    sp.add_argument("--B", help="generator bound exponent: x = ceil((log q)^B); default 2.5")
    sp.add_argument("--x", help="explicit generator bound")
    sp.add_argument("--girth-max-len", dest="girth_max_len")

    sp = common(sub.add_parser("class-graph", help=EXPERIMENTS["class-graph"]))
    sp.add_argument("--D", help="negative discriminant")
    sp.add_argument("--M", help="use primes below M")
    sp.add_argument("--B", help="M = (log|D|)^B when --M is absent; default 2")

    sp = common(sub.add_parser("isogeny-class", help=EXPERIMENTS["isogeny-class"]))
    sp.add_argument("--p")
    sp.add_argument("--N")
    sp.add_argument("--B", help=f"isogeny degrees below (log 4p)^B; default {DEFAULT_B}")
    sp.add_argument("--velu-fallback", dest="velu_fallback", nargs="?", const="true",
                    help="use Velu isogenies for primes without a modular polynomial")

    sp = common(sub.add_parser("mix", help=EXPERIMENTS["mix"]))
    sp.add_argument("--graph", help="unit:q=1009,B=2.5 | class:D=-23,M=3 | complete:12")
    sp.add_argument("--length", help="walk length (default: the mixing length for the target)")
    sp.add_argument("--trials")
    sp.add_argument("--target-size", dest="target_size")
    sp.add_argument("--target-fraction", dest="target_fraction")

    sp = common(sub.add_parser("dlog-reduce", help=EXPERIMENTS["dlog-reduce"]))
    sp.add_argument("--p")
    sp.add_argument("--N")
    sp.add_argument("--mu", help="fraction of the level the oracle covers")
    sp.add_argument("--runs")
    sp.add_argument("--C", help="walk length constant")
    sp.add_argument("--B")
    sp.add_argument("--level", help="conductor of the level to use (default: the largest level)")

    sp = common(sub.add_parser("gap", help=EXPERIMENTS["gap"]))
    sp.add_argument("--fixture", help="factored discriminant: sign line, then 'prime exponent' lines")
    sp.add_argument("--p")
    sp.add_argument("--N")
    sp.add_argument("--velu-fallback", dest="velu_fallback", nargs="?", const="true")
    sp.add_argument("--skip-levels", dest="skip_levels", nargs="?", const="true")
    return ap


REQUIRED = {"unit-graph": ["q"], "class-graph": ["D"], "isogeny-class": ["p", "N"], "mix": ["graph"],
            "dlog-reduce": ["p", "N"], "gap": []}


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    cfg = read_config(args.config) if args.config else {}
    known = set(vars(args))
    unknown = sorted(set(cfg) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    for key, value in cfg.items():
        if getattr(args, key) is None:
            setattr(args, key, value)
    for key, value in DEFAULTS[args.command].items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    if args.seed is None:
        args.seed = 0
    args.seed = int(args.seed)
    missing = [k for k in REQUIRED[args.command] if getattr(args, k) is None]
    if missing:
        raise ConfigError(f"missing required option(s): {', '.join('--' + m for m in missing)}")
    return args


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def make_report(command: str, args: argparse.Namespace, result: dict) -> str:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "config", "command")}
    report = {"experiment": command, "description": EXPERIMENTS[command], "version": __version__,
              "seed": args.seed, "config": config, "result": result}
    return json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = resolve(args)
        result, text = COMMANDS[args.command](args)
        report = make_report(args.command, args, result)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(report)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
