"""Dataset ingestion and report serialization.

CSV input: a header row, one example per line, numeric feature cells and a
label column holding arbitrary strings. Labels are remapped to ``1..K`` in
order of first appearance.

Reports are written either as one JSON document or as a directory of CSV
files (``csv_bundle``) with a ``manifest.json`` listing what was written.
Numbers are serialized with 12 significant digits.
"""

import csv
import io
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .data import MultiviewDataset, partition_views
from .errors import DataError

SCHEMA_VERSION = 1
SIG_DIGITS = 12

FIXTURES = {
    "binary": "binary_fixture.csv",
    "three_class": "three_class_fixture.csv",
    "breast_cancer": "breast_cancer_wisconsin.csv",
}
FIXTURE_LABEL_COLUMNS = {
    "binary": "label",
    "three_class": "label",
    "breast_cancer": "class",
}


@dataclass(frozen=True)
class DatasetManifest:
    """Where a dataset lives and how to cut it into views.

    ``views`` is either a list of column-name groups or ``None``; in the
    latter case the feature columns are randomly partitioned into
    ``view_count`` groups with ``view_seed``.
    """

    path: str
    label_column: str
    views: tuple = None
    view_count: int = 2
    view_seed: int = 0
    delimiter: str = ","
    ignore_columns: tuple = ()


def fixture_path(name):
    """Filesystem path of a bundled fixture CSV."""
    try:
        fname = FIXTURES[name]
    except KeyError:
        raise DataError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
    return str(resources.files("samaboost") / "fixtures" / fname)


def fixture_manifest(name, view_count=2, view_seed=0):
    return DatasetManifest(fixture_path(name), FIXTURE_LABEL_COLUMNS[name],
                           view_count=view_count, view_seed=view_seed)


def load_fixture(name, view_count=2, view_seed=0):
    return load_csv_dataset(fixture_manifest(name, view_count, view_seed))


def load_csv_dataset(manifest):
    """Parse ``manifest.path`` into a :class:`MultiviewDataset`.

    Row numbers in error messages count data rows from 1, excluding the
    header.
    """
    try:
        with open(manifest.path, newline="") as fh:
            rows = list(csv.reader(fh, delimiter=manifest.delimiter))
    except OSError as exc:
        raise DataError(f"cannot read {manifest.path}: {exc}") from exc
    rows = [r for r in rows if r]
    if not rows:
        raise DataError(f"{manifest.path} is empty")
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    if not body:
        raise DataError(f"{manifest.path} has a header but no data rows")
    if manifest.label_column not in header:
        raise DataError(f"label column {manifest.label_column!r} not in header")
    unknown = [c for c in manifest.ignore_columns if c not in header]
    if unknown:
        raise DataError(f"ignored columns not in header: {unknown}")
    label_at = header.index(manifest.label_column)
    feat_at = [j for j, h in enumerate(header)
               if j != label_at and h not in manifest.ignore_columns]
    names = [header[j] for j in feat_at]
    if not feat_at:
        raise DataError("no feature columns")

    X = np.empty((len(body), len(feat_at)))
    mapping, labels = {}, []
    for i, row in enumerate(body, start=1):
        if len(row) != len(header):
            raise DataError(f"row {i} has {len(row)} cells, header has {len(header)}")
        for k, j in enumerate(feat_at):
            try:
                X[i - 1, k] = float(row[j])
            except ValueError:
                raise DataError(
                    f"row {i}, column {header[j]!r}: non-numeric value {row[j]!r}") from None
            if not np.isfinite(X[i - 1, k]):
                raise DataError(f"row {i}, column {header[j]!r}: non-finite value")
        raw = row[label_at].strip()
        labels.append(mapping.setdefault(raw, len(mapping) + 1))

    if manifest.views is not None:
        col = {h: k for k, h in enumerate(names)}
        missing = [h for g in manifest.views for h in g if h not in col]
        if missing:
            raise DataError(f"view columns not in header: {missing}")
        views = tuple(tuple(col[h] for h in g) for g in manifest.views)
    else:
        views = partition_views(len(names), manifest.view_count, manifest.view_seed)
    try:
        return MultiviewDataset(X, np.array(labels), views, K=len(mapping),
                                feature_names=names, label_names=tuple(mapping))
    except ValueError as exc:
        raise DataError(str(exc)) from exc


@dataclass
class ExperimentReport:
    """Everything a run produces, in plain JSON-compatible containers.

    ``rounds`` holds one dict per boosting round; optional sections stay
    ``None`` when not requested.
    """

    metadata: dict
    rounds: list
    metrics: dict
    bounds: list = None
    margins: dict = None
    kappa_cloud: dict = None
    schema_version: int = SCHEMA_VERSION

    def to_dict(self):
        return {
            "schema_version": self.schema_version,
            "metadata": self.metadata,
            "rounds": self.rounds,
            "metrics": self.metrics,
            "bounds": self.bounds,
            "margins": self.margins,
            "kappa_cloud": self.kappa_cloud,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(metadata=d["metadata"], rounds=d["rounds"], metrics=d["metrics"],
                   bounds=d.get("bounds"), margins=d.get("margins"),
                   kappa_cloud=d.get("kappa_cloud"),
                   schema_version=d.get("schema_version", SCHEMA_VERSION))


def _num(x):
    return float(f"{x:.{SIG_DIGITS}g}")


def _fmt(x):
    return f"{x:.{SIG_DIGITS}g}"


def to_plain(obj):
    """Recursively convert numpy values to Python ones, rounding floats."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return _num(x) if np.isfinite(x) else None
    return obj


def dumps_json(report):
    return json.dumps(to_plain(report.to_dict()), indent=2, sort_keys=True) + "\n"


def read_report(path):
    """Load a JSON report written by :func:`write_report`."""
    with open(path) as fh:
        return ExperimentReport.from_dict(json.load(fh))


# csv_bundle layout: file name -> fixed leading columns.
BUNDLE_HEADERS = {
    "rounds.csv": ["t", "beta", "z", "objective", "beta_clamped", "train_error",
                   "test_error"],
    "margins.csv": ["psi", "cdf"],
    "kappa_cloud.csv": ["kappa", "error"],
    "bounds.csv": ["t", "z", "beta", "bound", "normalizer_product", "training_error"],
    "metrics.csv": ["metric", "value"],
}


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else _fmt(v) if isinstance(v, float) else v
                    for v in row])
    return buf.getvalue()


def _bundle(report):
    plain = to_plain(report.to_dict())
    files = {}
    rounds = plain["rounds"]
    base = BUNDLE_HEADERS["rounds.csv"]
    V = max((len(r.get("per_view_error") or []) for r in rounds), default=0)
    header = base + [f"per_view_error_v{v + 1}" for v in range(V)] \
        + [f"fitness_v{v + 1}" for v in range(V)]
    rows = []
    for r in rounds:
        pve = r.get("per_view_error") or [None] * V
        fit = r.get("fitness") or [None] * V
        rows.append([r.get(k) for k in base] + list(pve) + list(fit))
    files["rounds.csv"] = _csv_text(header, rows)
    if plain["margins"]:
        pts = sorted(zip(plain["margins"]["grid"], plain["margins"]["cdf"]))
        files["margins.csv"] = _csv_text(BUNDLE_HEADERS["margins.csv"], pts)
    if plain["kappa_cloud"]:
        files["kappa_cloud.csv"] = _csv_text(BUNDLE_HEADERS["kappa_cloud.csv"],
                                             plain["kappa_cloud"]["points"])
    if plain["bounds"]:
        h = BUNDLE_HEADERS["bounds.csv"]
        files["bounds.csv"] = _csv_text(h, [[b[k] for k in h] for b in plain["bounds"]])
    files["metrics.csv"] = _csv_text(BUNDLE_HEADERS["metrics.csv"],
                                     sorted(plain["metrics"].items()))
    manifest = {"schema_version": plain["schema_version"], "files": sorted(files),
                "metadata": plain["metadata"]}
    if plain["kappa_cloud"]:
        manifest["kappa_centroid"] = plain["kappa_cloud"]["centroid"]
    files["manifest.json"] = json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    return files


def write_report(report, path, format="json"):
    """Write ``report`` to ``path``.

    ``json`` writes a single file. ``csv_bundle`` treats ``path`` as a
    directory (created if missing, parent must exist) holding rounds.csv,
    metrics.csv and, when present, margins.csv (sorted by psi),
    kappa_cloud.csv and bounds.csv, plus manifest.json.
    """
    path = Path(path)
    if not path.parent.exists():
        raise DataError(f"parent directory {path.parent} does not exist")
    try:
        if format == "json":
            path.write_text(dumps_json(report))
        elif format == "csv_bundle":
            path.mkdir(exist_ok=True)
            for name, text in _bundle(report).items():
                (path / name).write_text(text)
        else:
            raise DataError(f"unknown report format {format!r}")
    except OSError as exc:
        raise DataError(f"cannot write report to {path}: {exc}") from exc


def read_csv_bundle(path):
    """Parse a csv_bundle back into ``{file name: list of row dicts}``.

    Numeric cells come back as floats; ``manifest.json`` is returned parsed.
    """
    path = Path(path)
    manifest = json.loads((path / "manifest.json").read_text())
    out = {"manifest.json": manifest}
    for name in manifest["files"]:
        with open(path / name, newline="") as fh:
            rows = []
            for row in csv.DictReader(fh):
                rows.append({k: _parse_cell(v) for k, v in row.items()})
        out[name] = rows
    return out


def _parse_cell(v):
    if v == "":
        return None
    try:
        return float(v)
    except ValueError:
        return v
