"""
Benchmark dataset model, CSV + manifest ingestion, description and min-max normalization.

A manifest is a small ``key = value`` file next to the CSV:

    name     = kemerer
    effort   = EffortMM
    nominal  = Language, Hardware
    ordinal  =
    ignore   = ID
    expected_projects = 15

Columns not named as effort, nominal, ordinal or ignore are numeric features.
The ``expected_*`` keys hold published descriptive statistics and are only
used to warn when a loaded file does not match them.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from pathlib import Path

import numpy as np
import pandas as pd
from sklearn.preprocessing import MinMaxScaler

from faabe import config
from faabe.errors import (
    ConfigError,
    DataError,
    EmptyDatasetError,
    InvalidEffortError,
    ManifestError,
    MissingValueError,
    NonNumericValueError,
    NormalizationError,
    SchemaMismatchError,
    UnknownColumnError,
)
from faabe.fileio import format_key_values, parse_key_values, split_list, write_text_atomic

logger = logging.getLogger(__name__)


class FeatureKind(str, Enum):
    NUMERIC = "numeric"
    ORDINAL = "ordinal"      # numerically encoded, compared like numeric values
    NOMINAL = "nominal"      # compared by equality only

    @property
    def is_numeric(self):
        return self is not FeatureKind.NOMINAL


@dataclass(frozen=True)
class Feature:
    name: str
    kind: FeatureKind


@dataclass(frozen=True)
class FeatureSchema:
    features: tuple
    effort_column: str

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        names = [f.name for f in self.features]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise SchemaMismatchError(f"duplicate feature names: {', '.join(duplicates)}")
        if self.effort_column in names:
            raise SchemaMismatchError(f"effort column '{self.effort_column}' cannot also be a feature")

    @property
    def k(self):
        return len(self.features)

    @property
    def names(self):
        return tuple(f.name for f in self.features)

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise SchemaMismatchError(f"unknown feature '{name}'") from None

    def subset(self, names):
        """Schema restricted to ``names``, keeping schema order."""
        wanted = set(names)
        unknown = wanted - set(self.names)
        if unknown:
            raise SchemaMismatchError(f"unknown features: {', '.join(sorted(unknown))}")
        return FeatureSchema(tuple(f for f in self.features if f.name in wanted), self.effort_column)


@dataclass(frozen=True)
class Project:
    """One historical project. Numeric/ordinal values are floats, nominal values are strings."""

    values: tuple
    effort: float

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        try:
            effort = float(self.effort)
        except (TypeError, ValueError):
            raise InvalidEffortError(f"effort must be a number, got {self.effort!r}") from None
        if not math.isfinite(effort) or effort <= 0:
            raise InvalidEffortError(f"effort must be finite and > 0, got {self.effort!r}")
        object.__setattr__(self, "effort", effort)


def _is_real(value):
    return isinstance(value, (int, float, np.integer, np.floating)) and not isinstance(value, (bool, np.bool_))


def _check_conformance(project, schema, row, normalized):
    if len(project.values) != schema.k:
        raise SchemaMismatchError(f"row {row}: {len(project.values)} values for {schema.k} features")
    for value, feature in zip(project.values, schema.features):
        if feature.kind.is_numeric:
            if not _is_real(value) or not math.isfinite(value):
                raise SchemaMismatchError(f"row {row}: feature '{feature.name}' expects a finite number, got {value!r}")
            if normalized and not 0.0 <= value <= 1.0:
                raise NormalizationError(f"row {row}: normalized feature '{feature.name}' outside [0, 1]: {value!r}")
        elif not isinstance(value, str):
            raise SchemaMismatchError(f"row {row}: nominal feature '{feature.name}' expects text, got {value!r}")


@dataclass(frozen=True)
class Dataset:
    name: str
    schema: FeatureSchema
    projects: tuple
    normalized: bool = False
    source: str = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "projects", tuple(self.projects))
        if not self.projects:
            raise EmptyDatasetError("no projects")
        for row, project in enumerate(self.projects, start=1):
            _check_conformance(project, self.schema, row, self.normalized)

    def __len__(self):
        return len(self.projects)

    @property
    def efforts(self):
        return np.array([p.effort for p in self.projects], dtype=float)

    def take(self, indices):
        """Sub-dataset with the projects at ``indices``, in the given order."""
        return replace(self, projects=tuple(self.projects[i] for i in indices))

    def select(self, names):
        """Sub-dataset keeping only the named features."""
        schema = self.schema.subset(names)
        positions = [self.schema.index(n) for n in schema.names]
        projects = tuple(Project(tuple(p.values[i] for i in positions), p.effort) for p in self.projects)
        return replace(self, schema=schema, projects=projects)


# ---------- manifests ----------
@dataclass(frozen=True)
class ExpectedStats:
    projects: int = None
    features: int = None                 # predictor columns
    attributes: int = None               # predictor columns plus the effort column
    effort_min: float = None
    effort_max: float = None
    effort_median: float = None


@dataclass(frozen=True)
class Manifest:
    effort: str
    name: str = None
    nominal: tuple = ()
    ordinal: tuple = ()
    ignore: tuple = ()
    expected: ExpectedStats = field(default_factory=ExpectedStats)

    def kind_of(self, column):
        if column in self.nominal:
            return FeatureKind.NOMINAL
        if column in self.ordinal:
            return FeatureKind.ORDINAL
        return FeatureKind.NUMERIC

    @property
    def named_columns(self):
        return (self.effort,) + self.nominal + self.ordinal + self.ignore


_MANIFEST_LISTS = ("nominal", "ordinal", "ignore")
_EXPECTED_KEYS = {
    "expected_projects": ("projects", int),
    "expected_features": ("features", int),
    "expected_attributes": ("attributes", int),
    "expected_effort_min": ("effort_min", float),
    "expected_effort_max": ("effort_max", float),
    "expected_effort_median": ("effort_median", float),
}


def parse_manifest(text, source="<manifest>"):
    entries = parse_key_values(text, source, ManifestError)
    unknown = set(entries) - {"name", "effort", *_MANIFEST_LISTS, *_EXPECTED_KEYS}
    if unknown:
        raise ManifestError(f"{source}: unknown manifest keys: {', '.join(sorted(unknown))}")
    effort = entries.get("effort", "")
    if not effort:
        raise ManifestError(f"{source}: 'effort' must name the effort column")

    lists = {key: tuple(split_list(entries.get(key, ""))) for key in _MANIFEST_LISTS}
    claimed = [effort] + [c for key in _MANIFEST_LISTS for c in lists[key]]
    clashes = sorted({c for c in claimed if claimed.count(c) > 1})
    if clashes:
        raise ManifestError(f"{source}: columns listed more than once: {', '.join(clashes)}")

    expected = {}
    for key, (attr, cast) in _EXPECTED_KEYS.items():
        if entries.get(key):
            try:
                expected[attr] = cast(entries[key].replace(",", ""))
            except ValueError:
                raise ManifestError(f"{source}: {key} is not a number: {entries[key]!r}") from None

    return Manifest(
        effort=effort,
        name=entries.get("name") or None,
        expected=ExpectedStats(**expected),
        **lists,
    )


def load_manifest(path):
    path = Path(path)
    if not path.is_file():
        raise DataError(f"manifest not found: {path}")
    return parse_manifest(path.read_text(encoding="utf-8"), source=str(path))


def write_manifest(d, path):
    entries = {
        "name": d.name,
        "effort": d.schema.effort_column,
        "nominal": ", ".join(f.name for f in d.schema.features if f.kind is FeatureKind.NOMINAL),
        "ordinal": ", ".join(f.name for f in d.schema.features if f.kind is FeatureKind.ORDINAL),
    }
    return write_text_atomic(path, format_key_values(entries))


# ---------- CSV ingestion ----------
def _parse_number(token, row, column, missing):
    token = token.strip()
    if token.lower() in missing:
        raise MissingValueError("missing value", row=row, column=column)
    try:
        value = float(token)
    except ValueError:
        raise NonNumericValueError(f"non-numeric value {token!r}", row=row, column=column) from None
    if not math.isfinite(value):
        raise NonNumericValueError(f"non-finite value {token!r}", row=row, column=column)
    return value


def _parse_cell(token, feature, row, missing):
    if feature.kind.is_numeric:
        return _parse_number(token, row, feature.name, missing)
    token = token.strip()
    if token.lower() in missing:
        raise MissingValueError("missing value", row=row, column=feature.name)
    return token


def load_csv(path, manifest, name=None):
    """Read a headered CSV into an un-normalized Dataset, preserving row order.

    Rows with a missing cell are rejected rather than imputed.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"dataset file not found: {path}")
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise EmptyDatasetError(f"{path.name}: no header row") from None

    header = [str(c).strip() for c in frame.columns]
    for column in manifest.named_columns:
        if column not in header:
            raise UnknownColumnError("manifest names a column the CSV does not have", column=column)

    features = tuple(
        Feature(c, manifest.kind_of(c)) for c in header if c != manifest.effort and c not in manifest.ignore
    )
    schema = FeatureSchema(features, manifest.effort)
    if frame.empty:
        raise EmptyDatasetError("no projects")

    missing = {t.lower() for t in getattr(config, "MISSING_TOKENS", ["", "?"])}
    effort_at = header.index(manifest.effort)
    positions = [header.index(f.name) for f in features]
    projects = []
    for row, record in enumerate(frame.itertuples(index=False, name=None), start=1):
        values = tuple(_parse_cell(record[i], f, row, missing) for i, f in zip(positions, features))
        effort = _parse_number(record[effort_at], row, manifest.effort, missing)
        if effort <= 0:
            raise InvalidEffortError(f"effort must be > 0, got {effort!r}", row=row, column=manifest.effort)
        projects.append(Project(values, effort))

    dataset = Dataset(name or manifest.name or path.stem, schema, tuple(projects), False, str(path))
    for problem in check_expected(describe(dataset), manifest):
        logger.warning(f"⚠️ {dataset.name}: {problem}")
    logger.debug(f"Loaded {dataset.name}: {len(dataset)} projects, {schema.k} features from {path}")
    return dataset


def save_csv(d, path):
    """Write ``d`` as CSV in schema order with the effort column last."""
    columns = list(d.schema.names) + [d.schema.effort_column]
    rows = [list(p.values) + [p.effort] for p in d.projects]
    frame = pd.DataFrame(rows, columns=columns)
    return write_text_atomic(path, frame.to_csv(index=False, lineterminator="\n"))


# ---------- registry ----------
def resolve_dataset(name_or_path):
    """Return (csv_path, manifest_path) for a registry name or a CSV path."""
    candidate = Path(str(name_or_path))
    if candidate.suffix.lower() == ".csv":
        return candidate, candidate.with_suffix(".manifest")
    key = str(name_or_path).strip().lower()
    if key not in getattr(config, "DATASETS", []):
        known = ", ".join(config.DATASETS)
        raise ConfigError(f"unknown dataset '{name_or_path}' (known: {known}, or a path to a .csv)")
    return config.DATA_DIR / f"{key}.csv", config.MANIFEST_DIR / f"{key}.manifest"


def dataset_available(name_or_path):
    csv_path, manifest_path = resolve_dataset(name_or_path)
    return csv_path.is_file() and manifest_path.is_file()


def load_dataset(name_or_path):
    csv_path, manifest_path = resolve_dataset(name_or_path)
    return load_csv(csv_path, load_manifest(manifest_path))


# ---------- description ----------
@dataclass(frozen=True)
class DatasetSummary:
    name: str
    projects: int
    features: int
    attributes: int
    effort_min: float
    effort_max: float
    effort_median: float

    def to_dict(self):
        return {
            "projects": self.projects,
            "features": self.features,
            "attributes": self.attributes,
            "effort_min": self.effort_min,
            "effort_max": self.effort_max,
            "effort_median": self.effort_median,
        }


def describe(d):
    """Project count, feature and attribute counts, effort min/max/median (midpoint median for even counts).

    ``attributes`` counts the effort column along with the features.
    """
    efforts = d.efforts
    return DatasetSummary(
        name=d.name,
        projects=len(d),
        features=d.schema.k,
        attributes=d.schema.k + 1,
        effort_min=float(np.min(efforts)),
        effort_max=float(np.max(efforts)),
        effort_median=float(np.median(efforts)),
    )


def format_summaries(summaries):
    header = ("Dataset", "Projects", "Features", "Attributes", "Min", "Max", "Median")
    body = [
        (s.name, str(s.projects), str(s.features), str(s.attributes))
        + (f"{s.effort_min:,.1f}", f"{s.effort_max:,.1f}", f"{s.effort_median:,.1f}")
        for s in summaries
    ]
    widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
    lines = []
    for cells in [header] + body:
        lines.append("  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(cells, widths))))
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _one_decimal(value):
    return Decimal(str(value)).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP)


def check_expected(summary, manifest):
    """Compare a summary with the manifest's published statistics (effort at one decimal)."""
    expected = manifest.expected
    problems = []
    for attr in ("projects", "features", "attributes"):
        want = getattr(expected, attr)
        if want is not None and getattr(summary, attr) != want:
            problems.append(f"{attr}: expected {want}, found {getattr(summary, attr)}")
    for attr in ("effort_min", "effort_max", "effort_median"):
        want = getattr(expected, attr)
        if want is not None and _one_decimal(getattr(summary, attr)) != _one_decimal(want):
            problems.append(f"{attr}: expected {want}, found {getattr(summary, attr)}")
    return problems


# ---------- normalization ----------
def _numeric_matrix(projects, positions):
    return np.array([[p.values[i] for i in positions] for p in projects], dtype=float)


class MinMaxNormalizer:
    """Min-max scaling of numeric and ordinal features, learned from a chosen set of rows.

    Transformed values are clamped to [0, 1]; columns that are constant on the
    fitted rows map to 0 everywhere. Nominal features and effort are untouched.
    """

    def __init__(self):
        self.schema_ = None
        self.positions_ = None
        self.scaler_ = None
        self.constant_ = None

    def fit(self, d, rows=None):
        if d.normalized:
            raise NormalizationError(f"{d.name} is already normalized")
        projects = d.projects if rows is None else [d.projects[i] for i in rows]
        if not projects:
            raise NormalizationError("cannot fit a normalizer on zero rows")
        self.schema_ = d.schema
        self.positions_ = [i for i, f in enumerate(d.schema.features) if f.kind.is_numeric]
        if self.positions_:
            self.scaler_ = MinMaxScaler(feature_range=(0.0, 1.0), clip=True).fit(_numeric_matrix(projects, self.positions_))
            self.constant_ = self.scaler_.data_range_ == 0
        return self

    def transform(self, d):
        if self.schema_ is None:
            raise NormalizationError("normalizer is not fitted")
        if d.schema != self.schema_:
            raise SchemaMismatchError("dataset schema differs from the fitted schema")
        if d.normalized:
            raise NormalizationError(f"{d.name} is already normalized")
        if not self.positions_:
            return replace(d, normalized=True)

        scaled = self.scaler_.transform(_numeric_matrix(d.projects, self.positions_))
        scaled[:, self.constant_] = 0.0
        projects = []
        for project, row in zip(d.projects, scaled):
            values = list(project.values)
            for position, value in zip(self.positions_, row):
                values[position] = float(value)
            projects.append(Project(tuple(values), project.effort))
        return Dataset(d.name, d.schema, tuple(projects), True, d.source)


def normalize(d):
    """Min-max normalize with the dataset's own per-column min and max."""
    if d.normalized:
        raise NormalizationError(f"{d.name} is already normalized")
    return MinMaxNormalizer().fit(d).transform(d)
