"""Command line entry point: ``stabsearch <command> [flags]``.

Every command writes its results to stdout (JSON lines or CSV) and a run
manifest to stderr, or to ``--manifest PATH``.  Flags may also come from a
flat ``key = value`` file given with ``--config``; explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from importlib import metadata
from pathlib import Path
from typing import Iterable, Sequence

from .channel import ChannelSpec, Family, UnsatisfiableChannel, grid, resolve
from .cyclic import enumerate_cyclic, has_single_generator, to_stabilizer
from .fer import BudgetExceeded, ErrorSetCache, Kind, fer_adaptive, geometric_mean, geometric_mean_fer
from .pauli import Stabilizer, classify_structure, cyclic_stabilizer, distance, equivalence_classes
from .search import Constraint, InfeasibleConstraint, Mutation, SearchConfig, hill_climb, random_search

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_BUDGET = 0, 2, 3, 4
ENV_THREADS = "STABSEARCH_THREADS"
ENV_MAX_ERRORS = "STABSEARCH_MAX_ERRORS"


class UsageError(ValueError):
    pass


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


# ---------------------------------------------------------------------------
# argument helpers


def parse_channels(items: Iterable[str] | None) -> list[ChannelSpec]:
    """Expand ``grid:xz`` / ``grid:ad`` presets and explicit channel specs."""
    out: list[ChannelSpec] = []
    for item in items or ():
        if item.startswith("grid:"):
            out.extend(grid(Family(item[5:])))
        else:
            out.append(ChannelSpec.parse(item))
    return out


def parse_code(text: str) -> Stabilizer:
    """``XZIZXII,IXZIZXI,...`` lists generators; ``cyc:XZIZXII`` means all cyclic shifts."""
    text = text.strip()
    if text.startswith("cyc:"):
        return cyclic_stabilizer(text[4:].strip())
    return Stabilizer.from_strings([g.strip() for g in text.split(",") if g.strip()])


def _codes_from_args(args) -> list[Stabilizer]:
    codes = [parse_code(c) for c in args.code or ()]
    if getattr(args, "code_file", None):
        codes.extend(_read_code_file(args.code_file))
    if not codes:
        raise UsageError("no code given (use --code or --code-file)")
    return codes


def _read_code_file(path: str) -> list[Stabilizer]:
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_code(line))
    return out


def _family(spec: str) -> list[Stabilizer]:
    if spec.startswith("cyclic:"):
        n, k = (int(x) for x in spec[7:].split(","))
        return [to_stabilizer(c) for c in enumerate_cyclic(n, k)]
    return _read_code_file(spec)


def config_tokens(path: str) -> list[str]:
    """Turn ``key = value`` lines into ``--key value`` tokens."""
    tokens: list[str] = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"config line without '=': {raw!r}")
        flag = "--" + key.strip().replace("_", "-")
        value = value.strip()
        if value.lower() in ("true", "yes", "on"):
            tokens.append(flag)
        elif value.lower() in ("false", "no", "off"):
            continue
        else:
            for part in value.split(";"):
                tokens.extend([flag, part.strip()])
    return tokens


def _threads(args) -> int:
    if getattr(args, "threads", None):
        return max(1, args.threads)
    env = os.environ.get(ENV_THREADS)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _max_errors(args) -> int | None:
    if getattr(args, "max_errors", None) is not None:
        return args.max_errors
    env = os.environ.get(ENV_MAX_ERRORS)
    return int(env) if env else None


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _clean(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def _est_record(spec, est) -> dict:
    rec = {k: _clean(v) for k, v in est.as_dict().items()}
    rec["channel"] = str(spec)
    return rec


# ---------------------------------------------------------------------------
# commands; each returns the per-channel records for the manifest


def cmd_enumerate_cyclic(args) -> list[dict]:
    codes = enumerate_cyclic(args.n, args.k)
    stabs = [to_stabilizer(c) for c in codes]
    reps = range(len(codes))
    sizes = {i: 1 for i in reps}
    if args.dedupe_equivalence:
        if args.n > 8:
            print(f"warning: equivalence classification at n={args.n} may take minutes", file=sys.stderr)
        classes = equivalence_classes(stabs)
        reps = [c[0] for c in classes]
        sizes = {c[0]: len(c) for c in classes}
    for i in reps:
        c, s = codes[i], stabs[i]
        rec = dict(c.as_dict())
        rec["stabilizer"] = s.to_strings()
        if not args.no_distance:
            rec["distance"] = distance(s)
        if args.classify:
            rec.update(classify_structure(s).as_dict())
            one, witness = has_single_generator(c)
            rec["single_generator"] = one
            rec["single_generator_witness"] = list(witness) if witness else None
        if args.dedupe_equivalence:
            rec["class_size"] = sizes[i]
        _emit(rec)
    return []


def cmd_fer(args) -> list[dict]:
    channels = parse_channels(args.channel)
    if not channels:
        raise UsageError("at least one --channel is required")
    cache = ErrorSetCache(_max_errors(args))
    records = []
    for s in _codes_from_args(args):
        values = []
        for spec in channels:
            est = fer_adaptive(s, spec, args.kind, args.bound, cache)
            rec = _est_record(spec, est)
            rec["code"] = str(s)
            _emit(rec)
            records.append(rec)
            values.append(est.value)
        if len(channels) > 1:
            _emit({"code": str(s), "geometric_mean": geometric_mean(values), "kind": Kind(args.kind).value})
    return records


def cmd_distance(args) -> list[dict]:
    for s in _codes_from_args(args):
        _emit({"code": str(s), "n": s.n, "k": s.k, "distance": distance(s)})
    return []


def cmd_classify(args) -> list[dict]:
    for s in _codes_from_args(args):
        rec = {"code": str(s), "n": s.n, "k": s.k}
        rec.update(classify_structure(s).as_dict())
        _emit(rec)
    return []


def _search_config(args) -> SearchConfig:
    channels = parse_channels(args.channels)
    if not channels:
        raise UsageError("at least one --channels entry is required")
    return SearchConfig(
        n=args.n,
        k=args.k,
        restarts=args.restarts,
        iterations=args.iterations,
        objective_channels=channels,
        constraint=Constraint(args.constraint),
        mutation=Mutation(args.mutation),
        seed=args.seed,
        target_bound=args.bound,
        include_identity_perm=args.include_identity_perm,
        percentile=args.percentile,
        max_errors=_max_errors(args),
        workers=_threads(args),
    )


def cmd_hillclimb(args) -> list[dict]:
    cfg = _search_config(args)
    res = hill_climb(cfg)
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["iteration", "objective"])
            for i, v in enumerate(res.trace or ()):
                w.writerow([i, repr(v)])
    best = res.best_stabilizer
    _emit(
        {
            "stabilizer": best.to_strings(),
            "objective_seo": res.objective_seo,
            "fer_map": res.final_fer_map.value,
            "bound": _clean(res.final_fer_map.bound),
            "distance": distance(best),
            "structure": classify_structure(best).as_dict(),
        }
    )
    return [_est_record(c, e) for c, e in zip(cfg.objective_channels, res.final_fer_map.estimates)]


def cmd_random_search(args) -> list[dict]:
    channels = parse_channels(args.channels)
    if not channels:
        raise UsageError("at least one --channels entry is required")
    cache = ErrorSetCache(_max_errors(args))
    gen = random_search(args.n, args.k, args.count, channels, args.seed, args.constraint, args.kind, args.bound, cache)
    for s, g in gen:
        _emit({"stabilizer": s.to_strings(), "value": g.value, "bound": _clean(g.bound), "kind": Kind(args.kind).value})
    return []


def family_lambda_mu(codes: Sequence[Stabilizer], channels: Sequence[ChannelSpec], bound: float, cache=None):
    """(lambda, mu, index of the best single code).

    lambda is the best single code's geometric mean over the channels; mu is the
    geometric mean of the per-channel minima, so lambda >= mu.
    """
    if not codes:
        raise UsageError("empty code family")
    cache = ErrorSetCache() if cache is None else cache
    table = [[fer_adaptive(s, c, Kind.MAP, bound, cache).value for c in channels] for s in codes]
    means = [geometric_mean(row) for row in table]
    best = min(range(len(codes)), key=lambda i: (means[i], codes[i].key))
    mu = geometric_mean([min(col) for col in zip(*table)])
    return means[best], mu, best


def cmd_tables(args) -> list[dict]:
    w = csv.writer(sys.stdout)
    w.writerow(["family", "channels", "codes", "lambda", "mu", "ratio", "best_code"])
    for fam in args.family:
        codes = _family(fam)
        for chan in args.channels:
            specs = parse_channels([chan])
            lam, mu, best = family_lambda_mu(codes, specs, args.bound)
            w.writerow([fam, chan, len(codes), repr(lam), repr(mu), repr(lam / mu if mu > 0 else math.inf), str(codes[best])])
    return []


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value file of flags")
    p.add_argument("--manifest", help="write the run manifest here instead of stderr")


def _code_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--code", action="append", help="comma-separated generators, or cyc:STRING")
    p.add_argument("--code-file", help="one code per line")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stabsearch", description="Short stabilizer codes on asymmetric Pauli channels.")
    parser.add_argument("--version", action="version", version=_version())
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate-cyclic", help="list every distinct cyclic stabilizer code")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--classify", action="store_true")
    p.add_argument("--dedupe-equivalence", action="store_true")
    p.add_argument("--no-distance", action="store_true")
    p.set_defaults(func=cmd_enumerate_cyclic)

    p = sub.add_parser("fer", help="frame error rate with a relative error bound")
    _code_args(p)
    p.add_argument("--channel", action="append", help="e.g. xz:p=0.01,eta=10 or grid:ad; repeatable")
    p.add_argument("--kind", choices=[k.value for k in Kind], default="map")
    p.add_argument("--bound", type=float, default=0.01)
    p.add_argument("--max-errors", type=int)
    p.set_defaults(func=cmd_fer)

    p = sub.add_parser("distance", help="minimum distance")
    _code_args(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("classify", help="CSS / linear / weight-4 structure flags")
    _code_args(p)
    p.set_defaults(func=cmd_classify)

    for name, func in (("hillclimb", cmd_hillclimb), ("random-search", cmd_random_search)):
        p = sub.add_parser(name)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--channels", action="append", help="grid:xz, grid:ad or a channel spec; repeatable")
        p.add_argument("--constraint", choices=[c.value for c in Constraint], default="none")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--bound", type=float, default=0.01)
        p.add_argument("--max-errors", type=int)
        p.set_defaults(func=func)
        if name == "hillclimb":
            p.add_argument("--mutation", choices=[m.value for m in Mutation], default="combined")
            p.add_argument("--restarts", type=int, default=1)
            p.add_argument("--iterations", type=int, default=1000)
            p.add_argument("--percentile", type=float, default=95.0)
            p.add_argument("--include-identity-perm", action="store_true")
            p.add_argument("--trace", help="CSV file for the per-iteration percentile objective")
            p.add_argument("--threads", type=int)
        else:
            p.add_argument("--count", type=int, default=100)
            p.add_argument("--kind", choices=[k.value for k in Kind], default="map")

    p = sub.add_parser("tables", help="lambda / mu over code families")
    p.add_argument("--family", action="append", required=True, help="cyclic:N,K or a code file; repeatable")
    p.add_argument("--channels", action="append", default=None, help="grid:xz, grid:ad or a channel spec")
    p.add_argument("--bound", type=float, default=0.01)
    p.set_defaults(func=cmd_tables)

    for sp in sub.choices.values():
        _common(sp)
    return parser


def _expand_config(argv: list[str]) -> list[str]:
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise UsageError("--config needs a path")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2 :]
    # config values go right after the command name so explicit flags override them
    pos = next((j for j, a in enumerate(rest) if not a.startswith("-")), 0)
    return rest[: pos + 1] + config_tokens(path) + rest[pos + 1 :] + ["--config", path]


def _write_manifest(args, argv: list[str], records: list[dict], wall: float, status: int) -> None:
    config = {k: v for k, v in vars(args).items() if k not in ("func", "manifest")}
    manifest = {
        "command": args.command,
        "argv": argv,
        "config": config,
        "seed": getattr(args, "seed", None),
        "version": _version(),
        "channels": records,
        "exit_status": status,
        "wall_time": wall,
    }
    text = json.dumps(manifest, sort_keys=True, default=str)
    if args.manifest:
        Path(args.manifest).write_text(text + "\n")
    else:
        print(text, file=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_expand_config(argv))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "tables" and not args.channels:
        args.channels = ["grid:xz"]
    start = time.perf_counter()
    records: list[dict] = []
    status = EXIT_OK
    try:
        records = args.func(args) or []
    except InfeasibleConstraint as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        status = EXIT_INFEASIBLE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        status = EXIT_BUDGET
    except (UsageError, UnsatisfiableChannel, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        status = EXIT_USAGE
    sys.stdout.flush()
    _write_manifest(args, argv, records, time.perf_counter() - start, status)
    return status


if __name__ == "__main__":
    sys.exit(main())
