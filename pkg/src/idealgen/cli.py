"""Command-line front end: ``idealgen generate | verify | experiment | stats``.

Exit codes: 0 success, 2 invalid input, 3 verification failure, 4 budget exceeded.
"""

import argparse
import json
import sys
from collections import Counter

from . import config as cfgmod
from .density import (
    EXPERIMENT_DISTRIBUTION, det_irreducibility_experiment, section_roundtrip_experiment,
)
from .field import FieldConfig
from .forge import (
    DatasetRecord, RecordError, ResampleExhausted, VerificationError, check_record, coverage_growth,
    generate_dataset,
)
from .groebner import DEFAULT_MAX_PAIRS, BudgetExceeded
from .poly import ParseError
from .shape import CoeffDistribution, sample_shape_basis

OK, INVALID, VERIFY_FAILED, BUDGET = 0, 2, 3, 4


class InputError(ValueError):
    pass


def parse_field(text):
    """``Q`` or ``Fp:<p>`` as a config field object."""
    if text in ("Q", "QQ"):
        return {"kind": "Q"}
    kind, _, p = text.partition(":")
    if kind != "Fp" or not p.isdigit():
        raise ValueError(f"expected Q or Fp:<prime>, got {text!r}")
    return {"kind": "Fp", "p": int(p)}


def _field_arg(text):
    try:
        return parse_field(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _eprint(*args):
    print(*args, file=sys.stderr)


# -- generate ---------------------------------------------------------------

def cmd_generate(args):
    doc = cfgmod.load(args.config) if args.config else {}
    for key in ("n", "m", "count", "seed", "verify", "emit_tokens", "out", "field"):
        val = getattr(args, key)
        if val is not None:
            doc[key] = val
    if args.d_max is not None:
        doc.setdefault("shape", {})["d_max"] = args.d_max
    if args.backend is not None:
        doc.setdefault("gen", {})["backend"] = args.backend
    cfg = cfgmod.validate(doc)
    jobs = args.jobs if args.jobs is not None else cfg.jobs
    summary = generate_dataset(cfg.count, cfg.gen, cfg.shape, cfg.seed, cfg.out, cfg.field,
                               jobs=jobs, emit_tokens=cfg.emit_tokens)
    man = cfgmod.manifest(cfg, summary, cfg.out)
    man_path = args.manifest or cfg.out + ".manifest.json"
    with open(man_path, "w", encoding="utf-8") as fh:
        json.dump(man, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {cfg.count} records to {cfg.out} (manifest {man_path})")
    if cfg.gen.verify:
        print(f"verified {summary['verified']}/{cfg.count}")
    return OK


# -- verify -----------------------------------------------------------------

def _read_records(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                yield lineno, DatasetRecord.from_json(json.loads(line))
            except (ValueError, KeyError, TypeError) as exc:
                raise InputError(f"{path}:{lineno}: cannot parse record: {exc}") from None


def cmd_verify(args):
    results = []
    budget_hit = False
    for lineno, rec in _read_records(args.path):
        try:
            failures = check_record(rec, args.max_pairs)
        except BudgetExceeded:
            failures, budget_hit = ["budget_exceeded"], True
        results.append({"line": lineno, "idx": rec.idx, "passed": not failures, "reasons": failures})
        status = "pass" if not failures else "FAIL " + ",".join(failures)
        print(f"line {lineno} record {rec.idx}: {status}")
    failed = sum(not r["passed"] for r in results)
    report = {"path": args.path, "records": len(results), "passed": len(results) - failed,
              "failed": failed, "results": results}
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
    print(f"{report['passed']}/{report['records']} records passed")
    if any(r["reasons"] and r["reasons"] != ["budget_exceeded"] for r in results):
        return VERIFY_FAILED
    return BUDGET if budget_hit else OK


# -- experiment ------------------------------------------------------------

def _params(pairs):
    out = {}
    for pair in pairs or ():
        key, sep, val = pair.partition("=")
        if not sep:
            raise InputError(f"expected key=value, got {pair!r}")
        try:
            out[key] = json.loads(val)
        except json.JSONDecodeError:
            out[key] = val
    return out


def _take(params, allowed):
    unknown = set(params) - set(allowed)
    if unknown:
        raise InputError(f"unknown experiment parameters {sorted(unknown)}; allowed {sorted(allowed)}")
    return {**allowed, **params}


def _experiment_field(text):
    return FieldConfig.from_json(parse_field(text))


def cmd_experiment(args):
    params = _params(args.param)
    if args.kind == "det_irreducibility":
        p = _take(params, {"n": 2, "D": 1, "r": 1, "trials": 10_000, "seed": 0, "field": "Q",
                           "lo": EXPERIMENT_DISTRIBUTION.lo, "hi": EXPERIMENT_DISTRIBUTION.hi,
                           "budget": 200_000})
        field = _experiment_field(p["field"])
        kind = "field" if field.is_prime_field else "int"
        dist = CoeffDistribution(kind, p["lo"], p["hi"], zero_weight=None)
        report = det_irreducibility_experiment(p["n"], p["D"], p["r"], p["trials"], dist, p["seed"],
                                               field, p["budget"])
        if report["unknown_fraction"] > 0.5:
            _eprint("warning: most determinants are beyond the oracle's reach (verdict unknown)")
    elif args.kind == "section_roundtrip":
        p = _take(params, {"n": 2, "m": 4, "D": 2, "trials": 1000, "seed": 0})
        report = section_roundtrip_experiment(p["n"], p["m"], p["D"], p["trials"], seed=p["seed"])
    else:
        p = _take(params, {"n": 2, "d": 2, "m": 3, "records": 2000, "s_values": [1, 2, 3, 4], "seed": 0})
        basis = sample_shape_basis(p["n"], p["d"], seed=p["seed"])
        counts = coverage_growth(basis.polys(), tuple(p["s_values"]), p["records"], p["seed"], p["m"])
        report = {"experiment": "coverage_growth", "config": p,
                  "G": [str(g) for g in basis.polys()],
                  "distinct_F": {str(k): v for k, v in counts.items()}}
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    if args.kind == "section_roundtrip" and report["passed"] != report["trials"]:
        return VERIFY_FAILED
    return OK


# -- stats ------------------------------------------------------------------

def cmd_stats(args):
    hists = {}
    count = 0
    backends = Counter()
    with open(args.path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"{args.path}:{lineno}: invalid JSON: {exc.msg}") from None
            count += 1
            backends[obj.get("backend", "elementary")] += 1
            for key, val in obj.get("stats", {}).items():
                if isinstance(val, int) and not isinstance(val, bool):
                    hists.setdefault(key, Counter())[val] += 1
    report = {"records": count, "backends": dict(backends),
              "histograms": {k: {str(v): h[v] for v in sorted(h)} for k, h in sorted(hists.items())}}
    print(json.dumps(report, indent=2))
    return OK


# -- entry point ------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="idealgen", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a JSONL dataset and its manifest")
    g.add_argument("--config", help="JSON config file (or a manifest to reproduce)")
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--count", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--field", type=_field_arg, help="Q or Fp:<prime>")
    g.add_argument("--d-max", type=int)
    g.add_argument("--backend", choices=("elementary", "bruhat"))
    g.add_argument("--verify", action=argparse.BooleanOptionalAction, default=None)
    g.add_argument("--emit-tokens", action=argparse.BooleanOptionalAction, default=None)
    g.add_argument("--jobs", type=int, help="worker processes (default $IDEALGEN_JOBS or 1)")
    g.add_argument("--out")
    g.add_argument("--manifest", help="manifest path (default <out>.manifest.json)")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="re-check every record of a dataset")
    v.add_argument("path")
    v.add_argument("--report", help="write a JSON report here")
    v.add_argument("--max-pairs", type=int, default=DEFAULT_MAX_PAIRS)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", help="run a density experiment and print a JSON report")
    e.add_argument("kind", choices=("det_irreducibility", "section_roundtrip", "coverage_growth"))
    e.add_argument("--param", action="append", metavar="KEY=VALUE")
    e.add_argument("--out")
    e.set_defaults(func=cmd_experiment)

    s = sub.add_parser("stats", help="summarise the stats of a dataset")
    s.add_argument("path")
    s.set_defaults(func=cmd_stats)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (cfgmod.ConfigError, InputError, ParseError, ValueError, OSError) as exc:
        _eprint(f"error: {exc}")
        return INVALID
    except RecordError as exc:
        _eprint(f"error: {exc}")
        if isinstance(exc.cause, ResampleExhausted):
            return BUDGET
        return VERIFY_FAILED
    except VerificationError as exc:
        _eprint(f"error: {exc}")
        return VERIFY_FAILED
    except (BudgetExceeded, ResampleExhausted) as exc:
        _eprint(f"error: {exc}")
        return BUDGET


if __name__ == "__main__":
    sys.exit(main())
