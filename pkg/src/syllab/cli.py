"""Command-line entry point.

Every subcommand writes its outputs plus ``manifest.json`` into ``--out``.
A manifest holds the full resolved configuration, so
``syllab <command> --config <dir>/manifest.json`` repeats a run and
produces byte-identical CSV and JSON outputs.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import platform
import sys
from importlib import metadata
from pathlib import Path

import numpy as np

from . import behavior, metrics
from .analysis import analyze_profiles
from .core import SYLLOGISM_IDS, load_triples
from .dataio import DataError, emit_report, load_profile, write_lm_log, write_profile_csv
from .harness import (
    HarnessError,
    HTTPCompletionClient,
    ListingMockClient,
    SamplingConfig,
    VARIANTS,
    METHODS,
    run_items,
)
from .mreasoner import BACKEND, KERNELS, DEFAULT_K, IndividualSets, ReasonerParams, response_distribution
from .oracle import default_oracle
from .profiles import ReasonerProfile

log = logging.getLogger("syllab")

DIST_NAME = "artifact"


def _version(pkg: str) -> str:
    try:
        return metadata.version(pkg)
    except metadata.PackageNotFoundError:
        return "unknown"


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(outdir: Path, command: str, config: dict, outputs: list[Path]) -> Path:
    manifest = {
        "command": command,
        "config": config,
        "versions": {
            "syllab": _version(DIST_NAME),
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": _version("scipy"),
        },
        "kernel": config.get("kernel") or BACKEND,
        "outputs": {p.name: _sha256(p) for p in sorted(outputs)},
    }
    path = outdir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _ids(arg: list[str] | None) -> list[str]:
    if not arg:
        return list(SYLLOGISM_IDS)
    bad = [s for s in arg if s not in SYLLOGISM_IDS]
    if bad:
        raise ValueError(f"unknown syllogism ids {bad}")
    return list(arg)


# subcommands


def cmd_oracle(args) -> list[Path]:
    oracle = default_oracle(not args.no_import)
    out = Path(args.out)
    if args.syllogism:
        for sid in _ids(args.syllogism):
            print(f"{sid}: {{{', '.join(sorted(oracle.valid(sid)))}}}")
    n_valid, n_nvc = oracle.partition()
    print(f"{n_valid} valid / {n_nvc} NVC")
    csv_path = out / "valid-conclusions.csv"
    oracle.write_csv(csv_path)
    part = out / "partition.json"
    part.write_text(json.dumps({"existential_import": not args.no_import, "valid": n_valid, "nvc": n_nvc},
                               indent=2) + "\n")
    return [csv_path, part]


def _params(args) -> ReasonerParams:
    return ReasonerParams(args.len, args.broad, args.systm2, args.weaken)


def _sets(args) -> IndividualSets | None:
    return IndividualSets.load(args.sets) if args.sets else None


def cmd_simulate(args) -> list[Path]:
    p = _params(args)
    sets = _sets(args)
    ids = _ids(args.syllogism)
    dists = [response_distribution(sid, p, args.runs, [args.seed, i], args.k, sets, args.kernel)
             for i, sid in enumerate(ids)]
    profile = ReasonerProfile.from_distributions(args.label, dists)
    path = Path(args.out) / "profile.csv"
    write_profile_csv(profile, path)
    acc = metrics.accuracy(profile, default_oracle(), "valid27").mean
    print(f"simulated {len(ids)} syllogisms x {args.runs} runs; accuracy on valid syllogisms {acc:.3f}")
    return [path]


def _grid(args) -> behavior.ParameterGrid:
    if args.grid:
        return behavior.ParameterGrid.from_dict(json.loads(Path(args.grid).read_text()))
    return behavior.ParameterGrid()


def cmd_sweep(args) -> list[Path]:
    grid = _grid(args)
    result = behavior.sweep(grid, args.runs, args.seed, args.work_cap, args.k, _sets(args),
                            jobs=args.jobs, kernel=args.kernel)
    out = Path(args.out)
    csv_path = out / "sweep.csv"
    behavior.write_sweep_csv(result, csv_path)
    dropped = out / "dropped.json"
    dropped.write_text(json.dumps({
        "grid_points": len(grid), "completed": len(result.vectors), "dropped": len(result.dropped),
        "histograms": result.dropped_histograms(),
        "points": [{"params": list(p.as_tuple()), "work": w} for p, w in result.dropped],
    }, indent=2) + "\n")
    print(f"{len(result.vectors)} of {len(grid)} grid points completed")
    return [csv_path, dropped]


def cmd_pca(args) -> list[Path]:
    oracle = default_oracle()
    vectors = behavior.read_sweep_csv(args.sweep)
    accuracy = [behavior.vector_accuracy(v, oracle) for v in vectors]
    if args.control:
        vectors = [behavior.zero_correct_control(v, oracle) for v in vectors]
    space = behavior.fit_sweep_pca(vectors, args.k, oracle, accuracy)
    out = Path(args.out)
    path = out / "pca.json"
    space.save(path)
    written = [path]
    ratios = ", ".join(f"{r:.3f}" for r in space.explained_variance_ratio)
    print(f"{space.k} components; explained variance ratios {ratios}")
    for name, corrs in space.correlations.items():
        print(f"  {name:>9}: " + " ".join(f"{c:+.3f}" for c in corrs))
    if args.project:
        reference = space.transform(np.stack([v.values for v in vectors]))
        rows = []
        for spec in args.project:
            label, path_ = _labelled(spec)
            v = behavior.BehaviorVector.from_profile(load_profile(path_, label), oracle)
            if args.control:
                v = behavior.zero_correct_control(v, oracle)
            coords = behavior.project(space, v)
            rows.append([label] + [repr(c) for c in coords] + [str(behavior.in_hull_box(space, coords, reference))])
        proj = out / "projections.csv"
        with open(proj, "w") as fh:
            fh.write(",".join(["label"] + [f"pc{i + 1}" for i in range(space.k)] + ["inside_range"]) + "\n")
            for row in rows:
                fh.write(",".join(row) + "\n")
        written.append(proj)
    return written


def _labelled(spec: str) -> tuple[str, str]:
    """``label=path`` or a bare path labelled by its stem."""
    if "=" in spec:
        label, path = spec.split("=", 1)
        return label, path
    return Path(spec).stem, spec


def cmd_analyze(args) -> list[Path]:
    profiles = {}
    for spec in args.profiles:
        label, path = _labelled(spec)
        if label in profiles:
            raise ValueError(f"duplicate profile label {label!r}")
        profiles[label] = load_profile(path, label, args.mode)
    analyses = analyze_profiles(profiles, default_oracle(), not args.no_oracle, args.method)
    written = emit_report(analyses, args.out)
    for label, acc in analyses[0].summary.items():
        if label != "random_baseline":
            print(f"{label}: accuracy valid27 {acc['valid27']:.3f}, nvc37 {acc['nvc37']:.3f}")
    return written


def cmd_harness(args) -> list[Path]:
    triples = load_triples(args.triples_file)[: args.triples]
    config = SamplingConfig(args.temperature, args.max_tokens, args.samples)
    if args.mock:
        client = ListingMockClient()
    elif args.url:
        client = HTTPCompletionClient(args.url)
    else:
        raise ValueError("give --url for a live endpoint or --mock for the offline client")
    results = run_items(args.method, _ids(args.syllogism), triples, client, args.variant, config,
                        args.seed, args.run_id, args.threshold, args.jobs)
    out = Path(args.out)
    log_path = out / "lm_log.jsonl"
    write_lm_log((r for res in results for r in res.records), log_path)
    items = out / "items.csv"
    with open(items, "w") as fh:
        fh.write("syllogism_id,triple_index,answer\n")
        for res in results:
            fh.write(f"{res.syllogism_id},{res.triple_index},{res.answer or ''}\n")
    missing = sum(r.missing for r in results)
    print(f"{len(results)} items, {missing} missing")
    return [log_path, items]


# parser


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--len", type=float, default=3.0, help="mean model size")
    p.add_argument("--broad", type=float, default=0.0)
    p.add_argument("--systm2", type=float, default=0.0)
    p.add_argument("--weaken", type=float, default=0.0)


def _add_sim(p: argparse.ArgumentParser) -> None:
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=DEFAULT_K, help="mutation attempts per search")
    p.add_argument("--sets", help="individual-set JSON file")
    p.add_argument("--kernel", choices=sorted(KERNELS), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="syllab", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="JSON file of option values (a manifest works too)")
        p.add_argument("--out", default=f"out/{name}")
        p.set_defaults(func=func)
        return p

    p = add("oracle", cmd_oracle, "valid-conclusion table and partition")
    p.add_argument("--no-import", action="store_true", help="drop existential import")
    p.add_argument("--syllogism", nargs="*")

    p = add("simulate", cmd_simulate, "response distributions at one parameter setting")
    _add_params(p)
    _add_sim(p)
    p.add_argument("--syllogism", nargs="*")
    p.add_argument("--label", default="mreasoner")

    p = add("sweep", cmd_sweep, "parameter-grid sweep")
    _add_sim(p)
    p.add_argument("--grid", help="JSON file with len/broad/systm2/weaken value lists")
    p.add_argument("--work-cap", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)

    p = add("pca", cmd_pca, "PCA of a sweep")
    p.add_argument("--sweep", required=True)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--control", action="store_true", help="zero correct answers before fitting")
    p.add_argument("--project", nargs="*", help="profiles to project, as label=path or path")

    p = add("analyze", cmd_analyze, "metric reports for profiles")
    p.add_argument("profiles", nargs="+", help="profile, human CSV or LM log, as label=path or path")
    p.add_argument("--mode", choices=("fractional", "per_member", "argmax"), default="fractional")
    p.add_argument("--method", choices=("pearson", "spearman"), default="pearson")
    p.add_argument("--no-oracle", action="store_true", help="leave the oracle reasoner out")

    p = add("harness", cmd_harness, "query a completion endpoint")
    p.add_argument("--method", choices=METHODS, default="generative")
    p.add_argument("--variant", choices=VARIANTS, default="stepxstep")
    p.add_argument("--mock", action="store_true", help="use the offline mock client")
    p.add_argument("--url")
    p.add_argument("--syllogism", nargs="*")
    p.add_argument("--triples", type=int, default=30, help="number of content triples to use")
    p.add_argument("--triples-file")
    p.add_argument("--temperature", type=float, default=0.5)
    p.add_argument("--max-tokens", type=int, default=75)
    p.add_argument("--samples", type=int, default=30)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--run-id", default="run")
    p.add_argument("--jobs", type=int, default=1)
    return parser


NOT_CONFIG = {"func", "config", "verbose", "command"}


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    data = json.loads(Path(args.config).read_text())
    if "config" in data and "command" in data:
        if data["command"] != args.command:
            raise ValueError(f"manifest is for {data['command']!r}, not {args.command!r}")
        data = data["config"]
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in sub._actions}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(f"unknown config keys {unknown}")
    sub.set_defaults(**data)
    # command-line flags still win over the file
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        outputs = args.func(args)
        config = {k: v for k, v in sorted(vars(args).items()) if k not in NOT_CONFIG}
        write_manifest(out, args.command, config, outputs)
        return 0
    except (ValueError, DataError, HarnessError, OSError, KeyError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
