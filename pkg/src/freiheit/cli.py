"""Command-line entry point.

Exit codes: 0 success, 1 domain error, 2 usage error, 3 feasibility guard.
Every file written via --out gets a sibling ``<out>.manifest.json`` with the
command, argument vector, master seed, version, input digests and the output
digest; re-running the recorded command reproduces the output byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time

from . import __version__
from .density import DensityModel, make_relator_set, intersection_experiment, sample_relator_set
from .diagrams import (diagram_to_json, enumerate_reduced_disk_diagrams,
                       certify_bilipschitz)
from .abstract_diagrams import (abstract_from_json, classify, count_inequalities,
                                elementary_segments, enumerate_fillings,
                                filling_bound)
from .errors import DomainError, FeasibilityError
from .experiments import (SweepBudgets, TransitionConfig,
                          critical_density, fillability_bound,
                          fillability_crossover, run_trial, transition_sweep,
                          SWEEP_COLUMNS)
from .seeds import rng_for
from .stallings import (enumerate_reduced_graphs, fold, graph_from_text,
                        graph_to_text, readable_words)
from .words import (enumerate_cyclically_reduced, sample_cyclically_reduced,
                    word_from_text, word_to_text)


def _seed(args) -> int:
    if args.seed is None:
        args.seed = 0
    return args.seed


def _sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _sha256_file(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _read_relators(path: str, m: int | None = None):
    words = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            words.append(word_from_text(line))
    inferred = max((max(abs(x) for x in w.letters) for w in words if w.letters),
                   default=2)
    maxlen = max((len(w) for w in words), default=1)
    return make_relator_set(m or max(2, inferred), maxlen, words)


def _emit(args, text: str, inputs: list[str]) -> None:
    out = getattr(args, "out", None)
    if out is None:
        sys.stdout.write(text)
        return
    started = getattr(args, "_started", time.time())
    with open(out, "w") as fh:
        fh.write(text)
    manifest = {
        "command": args._command,
        "argv": args._argv,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "inputs": {path: _sha256_file(path) for path in inputs},
        "output": out,
        "output_sha256": _sha256_text(text),
        "started_at": started,
        "finished_at": time.time(),
    }
    with open(out + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Subcommand implementations.


def _cmd_words_enumerate(args) -> int:
    lines = [word_to_text(w) for w in enumerate_cyclically_reduced(args.m, args.maxlen)]
    _emit(args, "\n".join(lines) + "\n", [])
    return 0


def _cmd_words_sample(args) -> int:
    rng = rng_for(_seed(args), "words-sample")
    lines = [word_to_text(sample_cyclically_reduced(args.m, args.maxlen, rng))
             for _ in range(args.count)]
    _emit(args, "\n".join(lines) + "\n", [])
    return 0


def _cmd_density_sample(args) -> int:
    model = DensityModel(args.model, args.d, _seed(args))
    relators = sample_relator_set(args.m, args.maxlen, model,
                                  rng_for(_seed(args), "density-sample"))
    lines = [word_to_text(w) for w in relators.relators]
    header = f"# model={args.model} d={args.d} m={args.m} maxlen={args.maxlen} size={len(relators)}\n"
    _emit(args, header + "\n".join(lines) + ("\n" if lines else ""), [])
    return 0


def _cmd_density_intersect(args) -> int:
    lengths = [int(x) for x in args.lengths.split(",")]
    rows = intersection_experiment(args.da, args.db, args.m, lengths,
                                   args.trials, _seed(args), args.model)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["l", "d_A", "d_B", "trial", "size_A", "size_B",
                     "size_intersection", "density_estimate"])
    for row in rows:
        writer.writerow([row.maxlen, row.d_a, row.d_b, row.trial, row.size_a,
                         row.size_b, row.size_intersection, row.density_est])
    _emit(args, buf.getvalue(), [])
    return 0


def _cmd_stallings_fold(args) -> int:
    with open(getattr(args, "in")) as fh:
        g = graph_from_text(fh.read())
    _emit(args, graph_to_text(fold(g)), [getattr(args, "in")])
    return 0


def _cmd_stallings_readable(args) -> int:
    with open(getattr(args, "in")) as fh:
        g = graph_from_text(fh.read())
    counts = readable_words(g, args.L)
    _emit(args, json.dumps({"length": args.L, "paths": counts.paths,
                            "words": counts.words}) + "\n", [getattr(args, "in")])
    return 0


def _cmd_stallings_enumerate(args) -> int:
    blocks = [graph_to_text(g)
              for g in enumerate_reduced_graphs(args.m, args.max_edges, args.max_betti)]
    _emit(args, "\n".join(blocks), [])
    return 0


def _cmd_diagrams_enumerate(args) -> int:
    relators = _read_relators(args.relators, args.m)
    out = [json.loads(diagram_to_json(d))
           for d in enumerate_reduced_disk_diagrams(relators, args.K)]
    _emit(args, json.dumps({"count": len(out), "relators":
                            [word_to_text(w) for w in relators.relators],
                            "diagrams": out}, indent=1) + "\n", [args.relators])
    return 0


def _cmd_diagrams_certify(args) -> int:
    relators = _read_relators(args.relators, args.m)
    with open(args.graph) as fh:
        graph = graph_from_text(fh.read())
    report = certify_bilipschitz(relators, graph, args.K, args.lam)
    _emit(args, json.dumps({
        "holds": report.holds, "lambda": report.lam,
        "threshold": report.threshold, "max_ratio": report.max_ratio,
        "diagrams_checked": report.diagrams_checked}, indent=1) + "\n",
        [args.relators, args.graph])
    return 0


def _cmd_abstract_classify(args) -> int:
    with open(getattr(args, "in")) as fh:
        add = abstract_from_json(fh.read())
    cl = classify(add)
    report = count_inequalities(add)
    segments = {str(i): [[list(l) for l in seg.letters] for seg in
                         elementary_segments(add, i)]
                for i in add.base.indices()}
    _emit(args, json.dumps({
        "classes": {f"{i},{j}": cls for (i, j), cls in sorted(cl.classes.items())},
        "alpha": cl.alpha, "eta": cl.eta, "eta_prime": cl.eta_prime,
        "count_inequalities": {
            "sum_alpha_eta_prime": report.sum_alpha_eta_prime,
            "sum_alpha_eta": report.sum_alpha_eta,
            "p_edges": report.p_edges, "edges": report.total_edges,
            "per_face_ok": report.per_face_ok, "global_ok": report.global_ok},
        "segments": segments}, indent=1) + "\n", [getattr(args, "in")])
    return 0


def _cmd_abstract_fillings(args) -> int:
    with open(getattr(args, "in")) as fh:
        add = abstract_from_json(fh.read())
    with open(args.graph) as fh:
        graph = graph_from_text(fh.read())
    fillings = enumerate_fillings(add, args.m, args.maxlen, graph)
    _emit(args, json.dumps({
        "count": len(fillings),
        "fillings": [[word_to_text(w) for w in combo] for combo in fillings]},
        indent=1) + "\n", [getattr(args, "in"), args.graph])
    return 0


def _cmd_abstract_bound(args) -> int:
    with open(getattr(args, "in")) as fh:
        add = abstract_from_json(fh.read())
    value = filling_bound(add, args.m, args.r, args.graph_size)
    _emit(args, json.dumps({"log_bound": value}) + "\n", [getattr(args, "in")])
    return 0


def validate_config(path: str) -> tuple[TransitionConfig | None, list[str]]:
    """Parse and validate a sweep config, collecting every violation."""
    errors: list[str] = []
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        return None, [f"cannot read config: {exc}"]
    m = data.get("m")
    r = data.get("r")
    if not isinstance(m, int) or m < 2:
        errors.append(f"m must be an integer >= 2, got {m!r}")
    if not isinstance(r, int) or r < 1:
        errors.append(f"r must be an integer >= 1, got {r!r}")
    elif isinstance(m, int) and not r <= m - 1:
        errors.append(f"r must satisfy 1 <= r <= m-1 (freeness range), got r={r}, m={m}")
    lengths = data.get("lengths", [])
    if not lengths or any(not isinstance(l, int) or l < 1 for l in lengths):
        errors.append(f"lengths must be a nonempty list of integers >= 1, got {lengths!r}")
    densities = data.get("densities", [])
    if any(not isinstance(d, (int, float)) or not 0 <= d <= 1 for d in densities):
        errors.append(f"densities must lie in [0, 1], got {densities!r}")
    trials = data.get("trials", 1)
    if not isinstance(trials, int) or trials < 1:
        errors.append(f"trials must be an integer >= 1, got {trials!r}")
    kind = data.get("model", "bernoulli")
    if kind not in ("bernoulli", "count"):
        errors.append(f"model must be 'bernoulli' or 'count', got {kind!r}")
    seed = data.get("seed", 0)
    if not isinstance(seed, int):
        errors.append(f"seed must be an integer, got {seed!r}")
    budgets = data.get("budgets", {})
    known = {"materialize_limit", "freeness_word_length", "freeness_max_steps",
             "freeness_relator_limit"}
    unknown = set(budgets) - known
    if unknown:
        errors.append(f"unknown budget keys: {sorted(unknown)}")
    if errors:
        return None, errors
    return TransitionConfig(m, r, tuple(lengths), tuple(densities), trials,
                            kind, seed, SweepBudgets(**budgets)), []


def _cmd_experiments_sweep(args) -> int:
    cfg, errors = validate_config(args.config)
    if errors:
        for err in errors:
            print(f"config error: {err}", file=sys.stderr)
        return 1
    if args.seed is not None:
        cfg = TransitionConfig(cfg.m, cfg.r, cfg.lengths, cfg.densities,
                               cfg.trials, cfg.kind, args.seed, cfg.budgets)
    rows = transition_sweep(cfg, jobs=args.jobs)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(SWEEP_COLUMNS), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    args.seed = cfg.seed
    _emit(args, buf.getvalue(), [args.config])
    return 0


def _cmd_experiments_collapse(args) -> int:
    rng = rng_for(_seed(args), "collapse-trial")
    res = run_trial(args.m, args.r, args.maxlen, args.d, "bernoulli", rng)
    cr = res.collapse_result
    payload = {
        "m": args.m, "r": args.r, "maxlen": args.maxlen, "d": args.d,
        "critical_density": critical_density(args.m, args.r).d_r,
        "collapse": res.collapse, "relator_count": res.relator_count,
        "fast_path": res.fast_path,
        "substitutions": ({str(g): word_to_text(w) for g, w in cr.substitutions.items()}
                          if cr and cr.substitutions else None),
    }
    _emit(args, json.dumps(payload, indent=1) + "\n", [])
    return 0


def _cmd_experiments_bound(args) -> int:
    crossover = fillability_crossover(args.K, args.m, args.r, args.d)
    samples = []
    if crossover:
        probe_lengths = sorted({2, crossover // 2, crossover - 1, crossover,
                                2 * crossover} - {0, 1})
        samples = [{"maxlen": l, "log_bound": fillability_bound(args.K, l, args.m,
                                                                args.r, args.d)}
                   for l in probe_lengths]
    _emit(args, json.dumps({"K": args.K, "m": args.m, "r": args.r, "d": args.d,
                            "crossover": crossover, "samples": samples},
                           indent=1) + "\n", [])
    return 0


# ---------------------------------------------------------------------------
# Parser.


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freiheit",
        description="Random groups in the density model: sampling, foldings, "
                    "diagrams and phase-transition experiments.")
    parser.add_argument("--seed", type=int, default=None, help="master seed")
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers")
    parser.add_argument("--out", type=str, default=None,
                        help="output file (manifest written alongside)")
    sub = parser.add_subparsers(dest="module", required=True)

    words = sub.add_parser("words").add_subparsers(dest="op", required=True)
    p = words.add_parser("enumerate")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--maxlen", type=int, required=True)
    p.set_defaults(func=_cmd_words_enumerate)
    p = words.add_parser("sample")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--maxlen", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(func=_cmd_words_sample)

    density = sub.add_parser("density").add_subparsers(dest="op", required=True)
    p = density.add_parser("sample")
    p.add_argument("--model", choices=("bernoulli", "count"), required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--maxlen", type=int, required=True)
    p.set_defaults(func=_cmd_density_sample)
    p = density.add_parser("intersect")
    p.add_argument("--da", type=float, required=True)
    p.add_argument("--db", type=float, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--lengths", type=str, required=True,
                   help="comma-separated word lengths")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--model", choices=("bernoulli", "count"), default="bernoulli")
    p.set_defaults(func=_cmd_density_intersect)

    stal = sub.add_parser("stallings").add_subparsers(dest="op", required=True)
    p = stal.add_parser("fold")
    p.add_argument("--in", required=True)
    p.set_defaults(func=_cmd_stallings_fold)
    p = stal.add_parser("readable")
    p.add_argument("--in", required=True)
    p.add_argument("--L", type=int, required=True)
    p.set_defaults(func=_cmd_stallings_readable)
    p = stal.add_parser("enumerate")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--max-edges", type=int, required=True)
    p.add_argument("--max-betti", type=int, required=True)
    p.set_defaults(func=_cmd_stallings_enumerate)

    diag = sub.add_parser("diagrams").add_subparsers(dest="op", required=True)
    p = diag.add_parser("enumerate")
    p.add_argument("--relators", required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.set_defaults(func=_cmd_diagrams_enumerate)
    p = diag.add_parser("certify")
    p.add_argument("--relators", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--m", type=int, default=None)
    p.set_defaults(func=_cmd_diagrams_certify)

    abst = sub.add_parser("abstract").add_subparsers(dest="op", required=True)
    p = abst.add_parser("classify")
    p.add_argument("--in", required=True)
    p.set_defaults(func=_cmd_abstract_classify)
    p = abst.add_parser("fillings")
    p.add_argument("--in", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--maxlen", type=int, required=True)
    p.add_argument("--graph", required=True)
    p.set_defaults(func=_cmd_abstract_fillings)
    p = abst.add_parser("bound")
    p.add_argument("--in", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--graph-size", type=int, required=True)
    p.set_defaults(func=_cmd_abstract_bound)

    exp = sub.add_parser("experiments").add_subparsers(dest="op", required=True)
    p = exp.add_parser("sweep")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_experiments_sweep)
    p = exp.add_parser("collapse")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--maxlen", type=int, required=True)
    p.add_argument("--d", type=float, required=True)
    p.set_defaults(func=_cmd_experiments_collapse)
    p = exp.add_parser("bound")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=float, required=True)
    p.set_defaults(func=_cmd_experiments_bound)
    return parser


def dispatch(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args._argv = argv
    args._command = " ".join(["freiheit"] + argv)
    args._started = time.time()
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 1
    except FeasibilityError as exc:
        print(f"feasibility guard: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
