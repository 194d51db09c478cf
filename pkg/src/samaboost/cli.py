"""Command-line experiment runner.

    samaboost run --config exp.yaml [--algorithm sama_v2] [--rounds 10] ...
    samaboost compare --config exp.yaml --algorithms sama_v2,samme,boost_late

The config file is YAML. Every key is optional except ``dataset.path``::

    dataset:
      path: fixture:breast_cancer     # or a CSV path relative to this file
      label_column: class             # defaults to the fixture's column
      views: null                     # explicit column-name groups, or
      view_count: 2                   # a random partition into this many views
      view_seeds: [0]                 # one report per partition seed
    algorithm: sama_v2
    algorithms: [sama_v2, samme, boost_late]   # used by compare
    seed: 0                           # split, noise and learner seeds
    rounds: 10
    beta_max: 10.0
    learner: {kind: shallow_net, hidden_units: 5, epochs: 30,
              learning_rate: 2.0, regularization: 0.0}
    regularization_grid: null         # lambdas tried on the validation part
    split: [0.6, 0.2, 0.2]
    noise: 0.0
    diagnostics: {bounds: false, margins: false, kappa: false}
    output: {path: report.json, format: json}

Exit status: 0 success, 2 config error, 3 data error, 4 training failure.
"""

import argparse
import hashlib
import sys
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .baselines import fit_baseline
from .boosting import BoostConfig, fit_sama
from .data import SplitSpec, inject_label_noise, stratified_split
from .diagnostics import (
    bound_trace,
    kappa_error_cloud,
    macro_f_score,
    margin_report,
    positive_scores,
    precision_recall,
    f_score,
    roc_auc,
)
from .errors import ConfigError, DataError, DomainError, TrainingError
from .experiment_io import (
    FIXTURE_LABEL_COLUMNS,
    DatasetManifest,
    ExperimentReport,
    fixture_path,
    load_csv_dataset,
    write_report,
)
from .learners import LEARNER_KINDS, LearnerConfig

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_TRAINING = 0, 2, 3, 4

ALGORITHMS = ("sama_v1", "sama_v2", "ma", "samme", "boost_early", "boost_late")
COLLABORATIVE = ("sama_v1", "sama_v2", "ma")
FORMATS = ("json", "csv_bundle")

TOP_KEYS = {"dataset", "algorithm", "algorithms", "seed", "rounds", "beta_max",
            "beta_tolerance", "clamp_fitness", "fitness_weighting", "learner",
            "regularization_grid", "split", "noise", "diagnostics", "output"}
DATASET_KEYS = {"path", "label_column", "views", "view_count", "view_seeds",
                "delimiter", "ignore_columns"}
LEARNER_KEYS = {"kind", "hidden_units", "epochs", "learning_rate", "regularization"}
DIAGNOSTIC_KEYS = {"bounds", "margins", "kappa"}
OUTPUT_KEYS = {"path", "format"}

DEFAULTS = {
    "algorithm": "sama_v2",
    "algorithms": ["sama_v2", "samme", "boost_late"],
    "seed": 0,
    "rounds": 10,
    "beta_max": 10.0,
    "beta_tolerance": 1e-12,
    "clamp_fitness": False,
    "fitness_weighting": "mean_one",
    "regularization_grid": None,
    "split": [0.6, 0.2, 0.2],
    "noise": 0.0,
}


def _is_int(x):
    return isinstance(x, (int, np.integer)) and not isinstance(x, bool)


def _is_real(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _unknown(section, given, allowed, problems):
    for k in sorted(set(given) - allowed):
        problems.append(f"{section}: unknown key {k!r}")


def _section(raw, key, problems):
    value = raw.get(key)
    if value is None:
        return {}
    if not isinstance(value, dict):
        problems.append(f"{key}: expected a mapping")
        return {}
    return value


def apply_overrides(raw, args):
    """Fold command-line flags into the raw config mapping."""
    cfg = dict(raw)
    for name, key in (("rounds", "rounds"), ("seed", "seed"), ("noise", "noise"),
                      ("algorithm", "algorithm")):
        value = getattr(args, name, None)
        if value is not None:
            cfg[key] = value
    if getattr(args, "algorithms", None):
        cfg["algorithms"] = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    if args.views is not None or args.view_seed:
        ds = dict(cfg.get("dataset") or {})
        if args.views is not None:
            ds["view_count"] = args.views
            ds["views"] = None
        if args.view_seed:
            ds["view_seeds"] = list(args.view_seed)
        cfg["dataset"] = ds
    diag = dict(cfg.get("diagnostics") or {})
    for name in DIAGNOSTIC_KEYS:
        if getattr(args, f"emit_{name}"):
            diag[name] = True
    if diag:
        cfg["diagnostics"] = diag
    out = dict(cfg.get("output") or {})
    if args.out is not None:
        out["path"] = args.out
        out["_from_flag"] = True
    if args.format is not None:
        out["format"] = args.format
    if out:
        cfg["output"] = out
    return cfg


def validate_config(cfg, base_dir, mode="run"):
    """Check every field and return a resolved settings dict.

    Raises :class:`ConfigError` listing all problems found, not just the first.
    """
    problems = []
    if not isinstance(cfg, dict):
        raise ConfigError(["config file must hold a mapping"])
    _unknown("config", cfg, TOP_KEYS, problems)
    s = {k: cfg.get(k, v) for k, v in DEFAULTS.items()}

    ds = _section(cfg, "dataset", problems)
    _unknown("dataset", ds, DATASET_KEYS, problems)
    path = ds.get("path")
    label_column = ds.get("label_column")
    fixture = None
    if not isinstance(path, str) or not path:
        problems.append("dataset.path: required")
    elif path.startswith("fixture:"):
        fixture = path[len("fixture:"):]
        if fixture not in FIXTURE_LABEL_COLUMNS:
            problems.append(f"dataset.path: unknown fixture {fixture!r}; choose from "
                            f"{sorted(FIXTURE_LABEL_COLUMNS)}")
        elif label_column is None:
            label_column = FIXTURE_LABEL_COLUMNS[fixture]
    if label_column is None and fixture is None:
        problems.append("dataset.label_column: required for non-fixture datasets")
    views = ds.get("views")
    view_count = ds.get("view_count", 2)
    if views is not None:
        if not (isinstance(views, list) and views
                and all(isinstance(g, list) and g for g in views)):
            problems.append("dataset.views: expected a list of non-empty column lists")
    elif not _is_int(view_count) or view_count < 1:
        problems.append("dataset.view_count: expected a positive integer")
    view_seeds = ds.get("view_seeds", [0])
    if _is_int(view_seeds):
        view_seeds = [view_seeds]
    if not (isinstance(view_seeds, list) and view_seeds and all(map(_is_int, view_seeds))):
        problems.append("dataset.view_seeds: expected a non-empty list of integers")
        view_seeds = [0]
    elif len(set(view_seeds)) != len(view_seeds):
        problems.append("dataset.view_seeds: duplicate seeds")

    algos = [s["algorithm"]] if mode == "run" else s["algorithms"]
    if not isinstance(algos, list) or not algos:
        problems.append("algorithms: expected a non-empty list")
        algos = []
    for a in algos:
        if a not in ALGORITHMS:
            key = "algorithm" if mode == "run" else "algorithms"
            problems.append(f"{key}: unknown algorithm {a!r}; choose from {list(ALGORITHMS)}")
    if len(set(map(str, algos))) != len(algos):
        problems.append("algorithms: duplicate entries")

    if not _is_int(s["seed"]):
        problems.append("seed: expected an integer")
    if not _is_int(s["rounds"]) or s["rounds"] < 1:
        problems.append("rounds: expected a positive integer")
    if not _is_real(s["beta_max"]) or not s["beta_max"] > 0:
        problems.append("beta_max: expected a positive number")
    if not _is_real(s["beta_tolerance"]) or not s["beta_tolerance"] > 0:
        problems.append("beta_tolerance: expected a positive number")
    if not isinstance(s["clamp_fitness"], bool):
        problems.append("clamp_fitness: expected true or false")
    if s["fitness_weighting"] not in ("mean_one", "normalized"):
        problems.append("fitness_weighting: expected 'mean_one' or 'normalized'")

    lr = _section(cfg, "learner", problems)
    _unknown("learner", lr, LEARNER_KEYS, problems)
    learner = dict(LearnerConfig().__dict__)
    learner.pop("seed")
    learner.update({k: v for k, v in lr.items() if k in LEARNER_KEYS})
    if learner["kind"] not in LEARNER_KINDS:
        problems.append(f"learner.kind: expected one of {list(LEARNER_KINDS)}")
    for k in ("hidden_units", "epochs"):
        if not _is_int(learner[k]) or learner[k] < 1:
            problems.append(f"learner.{k}: expected a positive integer")
    if not _is_real(learner["learning_rate"]) or not learner["learning_rate"] > 0:
        problems.append("learner.learning_rate: expected a positive number")
    if not _is_real(learner["regularization"]) or learner["regularization"] < 0:
        problems.append("learner.regularization: expected a non-negative number")

    split = s["split"]
    if not (isinstance(split, list) and len(split) == 3 and all(map(_is_real, split))
            and min(split) >= 0 and abs(sum(split) - 1.0) < 1e-9):
        problems.append("split: expected three non-negative ratios summing to 1")
        split = None
    elif split[0] == 0 or split[2] == 0:
        problems.append("split: train and test ratios must be positive")
    grid = s["regularization_grid"]
    if grid is not None:
        if not (isinstance(grid, list) and grid
                and all(_is_real(g) and g >= 0 for g in grid)):
            problems.append("regularization_grid: expected a list of non-negative numbers")
        elif split is not None and split[1] == 0:
            problems.append("regularization_grid: needs a positive validation ratio in split")
    if not _is_real(s["noise"]) or not 0 <= s["noise"] <= 1:
        problems.append("noise: expected a fraction in [0, 1]")

    dg = _section(cfg, "diagnostics", problems)
    _unknown("diagnostics", dg, DIAGNOSTIC_KEYS, problems)
    diagnostics = {k: dg.get(k, False) for k in sorted(DIAGNOSTIC_KEYS)}
    for k, v in diagnostics.items():
        if not isinstance(v, bool):
            problems.append(f"diagnostics.{k}: expected true or false")
    for k in ("bounds", "margins"):
        bad = [a for a in algos if a in ALGORITHMS and a not in COLLABORATIVE]
        # compare skips them for baselines instead; see run_algorithm.
        if diagnostics[k] is True and bad and mode == "run":
            problems.append(f"diagnostics.{k}: only defined for {list(COLLABORATIVE)}, "
                            f"not {bad}")

    out = _section(cfg, "output", problems)
    _unknown("output", {k: v for k, v in out.items() if k != "_from_flag"},
             OUTPUT_KEYS, problems)
    fmt = out.get("format", "json")
    if fmt not in FORMATS:
        problems.append(f"output.format: expected one of {list(FORMATS)}")
    out_path = out.get("path", "report.json" if fmt == "json" else "report")
    if not isinstance(out_path, str) or not out_path:
        problems.append("output.path: expected a path")
        out_path = "report"

    if problems:
        raise ConfigError(problems)

    if fixture is not None:
        resolved = fixture_path(fixture)
    else:
        resolved = str((Path(base_dir) / path))
    out_resolved = Path(out_path) if out.get("_from_flag") else Path(base_dir) / out_path
    echo = {k: s[k] for k in DEFAULTS if k not in ("algorithm", "algorithms")}
    echo.update(dataset={"path": path, "label_column": label_column, "views": views,
                         "view_count": view_count, "view_seeds": view_seeds,
                         "delimiter": ds.get("delimiter", ","),
                         "ignore_columns": list(ds.get("ignore_columns", []))},
                learner=learner, diagnostics=diagnostics, format=fmt)
    return {
        "echo": echo,
        "algorithms": algos,
        "path": resolved,
        "label_column": label_column,
        "views": views,
        "view_count": view_count,
        "view_seeds": view_seeds,
        "delimiter": ds.get("delimiter", ","),
        "ignore_columns": tuple(ds.get("ignore_columns", [])),
        "seed": s["seed"],
        "boost": dict(rounds=s["rounds"], beta_max=float(s["beta_max"]),
                      beta_tolerance=float(s["beta_tolerance"]),
                      clamp_fitness=s["clamp_fitness"],
                      fitness_weighting=s["fitness_weighting"], seed=s["seed"]),
        "learner": learner,
        "grid": grid,
        "split": tuple(float(r) for r in split),
        "noise": float(s["noise"]),
        "diagnostics": diagnostics,
        "format": fmt,
        "out": out_resolved,
    }


def _check_dataset(settings, dataset):
    problems = []
    if settings["diagnostics"]["bounds"] and dataset.K != 2:
        problems.append(f"diagnostics.bounds: the training-error bound covers binary "
                        f"labels only, dataset has K={dataset.K}")
    if problems:
        raise ConfigError(problems)


def _boost_config(settings, algorithm, regularization):
    learner = LearnerConfig(**dict(settings["learner"], regularization=regularization))
    kw = dict(settings["boost"], learner=learner)
    if algorithm == "sama_v1":
        kw["combiner"] = "V1"
    if algorithm == "ma":
        kw["beta_rule"] = "ma_closed_form"
    return BoostConfig(**kw)


def _fit(algorithm, train, config):
    if algorithm in COLLABORATIVE:
        return fit_sama(train, config)
    return fit_baseline(train, config, algorithm)


def _accuracy(model, part):
    return float(np.mean(model.predict(part.X) == part.labels))


def select_regularization(algorithm, train, validation, settings):
    """Pick the lambda with best validation accuracy; ties go to the earliest."""
    grid = settings["grid"]
    if not grid:
        return float(settings["learner"]["regularization"]), None
    scores = []
    for lam in grid:
        model = _fit(algorithm, train, _boost_config(settings, algorithm, float(lam)))
        scores.append(_accuracy(model, validation))
    best = int(np.argmax(scores))
    return float(grid[best]), [[float(l), s] for l, s in zip(grid, scores)]


def _staged(model, X):
    return list(model.staged_predict(X))


def _error(pred, labels):
    return None if pred is None else float(np.mean(pred != labels))


def _round_records(algorithm, model, train, test):
    tr, te = _staged(model, train.X), _staged(model, test.X)
    records = []
    if algorithm in COLLABORATIVE:
        for t, r in enumerate(model.rounds, start=1):
            records.append({
                "t": t, "beta": r.beta, "z": r.z, "objective": r.objective,
                "beta_clamped": r.beta_clamped, "per_view_error": r.per_view_error,
                "fitness": r.fitness, "correct_rate": r.correct_rate,
                "reward": r.reward, "train_error": _error(tr[t - 1], train.labels),
                "test_error": _error(te[t - 1], test.labels)})
    elif algorithm == "boost_late":
        for t in range(1, len(tr) + 1):
            alphas = [float(m.alphas[t - 1]) if t <= m.T else None for m in model.members]
            errs = [float(m.errors[t - 1]) if t <= m.T else None for m in model.members]
            records.append({
                "t": t, "beta": None, "z": None, "objective": None, "beta_clamped": None,
                "alpha": alphas, "per_view_error": errs, "fitness": None,
                "train_error": _error(tr[t - 1], train.labels),
                "test_error": _error(te[t - 1], test.labels)})
    else:
        for t in range(1, model.T + 1):
            records.append({
                "t": t, "beta": float(model.alphas[t - 1]), "z": None, "objective": None,
                "beta_clamped": None, "per_view_error": [float(model.errors[t - 1])],
                "fitness": None, "train_error": _error(tr[t - 1], train.labels),
                "test_error": _error(te[t - 1], test.labels)})
    return records


def _metrics(model, train, validation, test):
    pred = model.predict(test.X)
    m = {"test_accuracy": float(np.mean(pred == test.labels)),
         "train_accuracy": _accuracy(model, train)}
    if validation.n:
        m["validation_accuracy"] = _accuracy(model, validation)
    if test.K == 2:
        m["f_score"] = f_score(*precision_recall(pred, test.labels, positive=1))
        if len(np.unique(test.labels)) == 2:
            m["auc"] = roc_auc(positive_scores(model.scores(test.X), 1), test.labels == 1)
    else:
        m["f_score"] = macro_f_score(pred, test.labels, test.K)
    return m


def run_algorithm(algorithm, settings, train, validation, test, view_seed, meta):
    """Fit one algorithm on a prepared split and assemble its report."""
    lam, search = select_regularization(algorithm, train, validation, settings)
    config = _boost_config(settings, algorithm, lam)
    model = _fit(algorithm, train, config)
    diag = dict(settings["diagnostics"])
    skipped = []
    if algorithm not in COLLABORATIVE:
        skipped = [k for k in ("bounds", "margins") if diag[k]]
        for k in skipped:
            diag[k] = False
    report = ExperimentReport(
        metadata=dict(meta, algorithm=algorithm, view_seed=view_seed,
                      selected_regularization=lam, regularization_search=search,
                      skipped_diagnostics=skipped),
        rounds=_round_records(algorithm, model, train, test),
        metrics=_metrics(model, train, validation, test))
    if diag["bounds"]:
        report.bounds = [r.__dict__ for r in bound_trace(model, train)]
    if diag["margins"]:
        thetas = np.round(np.linspace(0.0, 1.0, 11), 1) if train.K == 2 else None
        mr = margin_report(model, train, thetas=thetas)
        report.margins = {"grid": mr.grid, "cdf": mr.cdf, "thetas": mr.thetas,
                          "bound": mr.bound, "mean": float(mr.margins.mean()),
                          "min": float(mr.margins.min())}
    if diag["kappa"]:
        cloud = kappa_error_cloud(model, test)
        report.kappa_cloud = {"points": cloud.points, "centroid": list(cloud.centroid)}
    return report


def fingerprint(part):
    """Short digest of a partition's features and labels."""
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(part.X).tobytes())
    h.update(np.ascontiguousarray(part.labels, dtype=np.int64).tobytes())
    return h.hexdigest()[:16]


def prepare_split(settings, view_seed):
    """Load, split and (training part only) corrupt the dataset."""
    views = settings["views"]
    manifest = DatasetManifest(
        settings["path"], settings["label_column"],
        views=None if views is None else tuple(tuple(g) for g in views),
        view_count=settings["view_count"], view_seed=view_seed,
        delimiter=settings["delimiter"], ignore_columns=settings["ignore_columns"])
    dataset = load_csv_dataset(manifest)
    _check_dataset(settings, dataset)
    try:
        train, validation, test = stratified_split(
            dataset, SplitSpec(settings["split"], seed=settings["seed"]))
        if settings["noise"] > 0:
            train = inject_label_noise(train, settings["noise"], seed=settings["seed"])
    except DomainError as exc:
        raise DataError(f"cannot split dataset: {exc}") from exc
    meta = {
        "version": __version__,
        "config": settings["echo"],
        "K": dataset.K,
        "label_mapping": {name: i + 1 for i, name in enumerate(dataset.label_names)},
        "views": [[dataset.feature_names[j] for j in g] for g in dataset.views],
        "sizes": {"train": train.n, "validation": validation.n, "test": test.n},
        "fingerprints": {"train": fingerprint(train), "validation": fingerprint(validation),
                         "test": fingerprint(test)},
        "seed": settings["seed"],
        "noise": settings["noise"],
    }
    return train, validation, test, meta


def output_path(base, algorithm=None, view_seed=None, multi_seed=False):
    """Suffix ``base`` with the algorithm and view seed when several reports share it."""
    base = Path(base)
    parts = []
    if algorithm is not None:
        parts.append(algorithm)
    if multi_seed:
        parts.append(f"vs{view_seed}")
    if not parts:
        return base
    suffix = base.suffix if base.suffix == ".json" else ""
    stem = base.name[:-len(suffix)] if suffix else base.name
    return base.with_name(f"{stem}_{'_'.join(parts)}{suffix}")


def execute(settings, mode="run"):
    """Run every (view seed, algorithm) pair; return the written paths."""
    written, summary = [], []
    multi = len(settings["view_seeds"]) > 1
    for vs in settings["view_seeds"]:
        train, validation, test, meta = prepare_split(settings, vs)
        for algo in settings["algorithms"]:
            report = run_algorithm(algo, settings, train, validation, test, vs, meta)
            path = output_path(settings["out"], algo if mode == "compare" else None,
                               vs, multi)
            write_report(report, path, settings["format"])
            written.append(path)
            summary.append((vs, algo, report.metrics["test_accuracy"], path))
    return written, summary


def build_parser():
    parser = argparse.ArgumentParser(prog="samaboost",
                                     description="Multiview collaborative boosting runs.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "compare"):
        p = sub.add_parser(name, help="fit one algorithm" if name == "run"
                           else "fit several algorithms on one shared split")
        p.add_argument("--config", required=True, help="YAML experiment file")
        if name == "run":
            p.add_argument("--algorithm", help=f"one of {', '.join(ALGORITHMS)}")
        else:
            p.add_argument("--algorithms", help="comma-separated algorithm list")
        p.add_argument("--rounds", type=int)
        p.add_argument("--views", type=int, help="random partition into this many views")
        p.add_argument("--seed", type=int, help="split, noise and learner seed")
        p.add_argument("--view-seed", type=int, action="append", dest="view_seed",
                       help="view partition seed; repeat for several reports")
        p.add_argument("--noise", type=float, help="training label-noise fraction")
        p.add_argument("--out", help="report path (file for json, directory for csv_bundle)")
        p.add_argument("--format", choices=FORMATS)
        p.add_argument("--emit-bounds", action="store_true")
        p.add_argument("--emit-margins", action="store_true")
        p.add_argument("--emit-kappa", action="store_true")
    return parser


def _fail(code, message, problems=()):
    print(f"error: {message}", file=sys.stderr)
    for p in problems:
        print(f"  - {p}", file=sys.stderr)
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    config_path = Path(args.config)
    try:
        raw = yaml.safe_load(config_path.read_text())
    except OSError as exc:
        return _fail(EXIT_CONFIG, f"cannot read config {config_path}: {exc}")
    except yaml.YAMLError as exc:
        return _fail(EXIT_CONFIG, f"config {config_path} is not valid YAML: {exc}")
    try:
        if raw is None:
            raw = {}
        if not isinstance(raw, dict):
            raise ConfigError(["config file must hold a mapping"])
        raw = apply_overrides(raw, args)
        settings = validate_config(raw, config_path.parent, args.command)
        _, summary = execute(settings, args.command)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, f"{len(exc.problems)} config problem(s)", exc.problems)
    except DataError as exc:
        return _fail(EXIT_DATA, str(exc))
    except TrainingError as exc:
        return _fail(EXIT_TRAINING, f"training failed: {exc}")
    except DomainError as exc:
        # Degenerate ensembles and undefined diagnostics surface here.
        return _fail(EXIT_TRAINING, f"training failed: {exc}")
    for vs, algo, acc, path in summary:
        print(f"{algo:12s} view_seed={vs:<4d} test_accuracy={acc:.4f}  {path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
