"""Tabular dataset handling: CSV I/O, grouping, standardization, synthetic data.

Labels are canonicalized to {-1, +1} at the boundary; all internal math
works with signed labels. Standardization is z-score with population (1/n)
standard deviation; zero-variance columns map to zero instead of erroring so
degenerate folds still run.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np


class DataError(ValueError):
    """Raised for malformed input data or configuration."""


class FileError(DataError):
    """Raised when a file cannot be read or written (I/O-level failure)."""


@dataclass(frozen=True)
class Dataset:
    """Feature matrix (n, p) with signed labels and identifying metadata."""

    samples: np.ndarray          # (n, p) float
    labels: np.ndarray           # (n,) values in {-1, +1}
    feature_names: tuple[str, ...]
    sample_ids: tuple[str, ...]

    def __post_init__(self):
        X = np.asarray(self.samples, dtype=float)
        y = np.asarray(self.labels, dtype=float)
        if X.ndim != 2:
            raise DataError("samples must be a 2-d matrix")
        if y.shape != (X.shape[0],):
            raise DataError("labels length must match sample count")
        if not np.all(np.isfinite(X)):
            bad = np.argwhere(~np.isfinite(X))[0]
            raise DataError(f"non-finite feature value at row {bad[0]}, column "
                            f"{self.feature_names[bad[1]]!r}")
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise DataError("labels must be -1 or +1")
        if len(self.feature_names) != X.shape[1]:
            raise DataError("feature name count must match column count")
        if len(set(self.feature_names)) != len(self.feature_names):
            raise DataError("feature names must be unique")
        if len(self.sample_ids) != X.shape[0]:
            raise DataError("sample id count must match row count")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "samples", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "sample_ids", tuple(self.sample_ids))

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def p(self) -> int:
        return self.samples.shape[1]

    def subset(self, rows) -> "Dataset":
        rows = np.asarray(rows)
        if rows.dtype == bool:
            rows = np.flatnonzero(rows)
        return Dataset(self.samples[rows].copy(), self.labels[rows].copy(),
                       self.feature_names,
                       tuple(self.sample_ids[i] for i in rows))


@dataclass(frozen=True)
class GroupPartition:
    """Disjoint feature-index groups covering all p columns exactly once."""

    groups: tuple[tuple[int, ...], ...]   # 0-based column indices
    group_names: tuple[str, ...]
    weights: tuple[float, ...] = field(default=())

    def __post_init__(self):
        groups = tuple(tuple(int(i) for i in g) for g in self.groups)
        names = tuple(self.group_names)
        weights = tuple(float(w) for w in self.weights) if self.weights \
            else tuple(1.0 for _ in groups)
        if len(names) != len(groups) or len(weights) != len(groups):
            raise DataError("group names/weights must match group count")
        if any(len(g) == 0 for g in groups):
            raise DataError("groups must be non-empty")
        flat = [i for g in groups for i in g]
        if len(set(flat)) != len(flat):
            raise DataError("groups overlap")
        if set(flat) != set(range(max(flat) + 1)):
            raise DataError("groups must form a contiguous partition of columns")
        if any(w <= 0 for w in weights):
            raise DataError("group weights must be positive")
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "group_names", names)
        object.__setattr__(self, "weights", weights)

    @property
    def d(self) -> int:
        return len(self.groups)

    @property
    def p(self) -> int:
        return sum(len(g) for g in self.groups)

    def validate_against(self, p: int):
        flat = sorted(i for g in self.groups for i in g)
        if flat != list(range(p)):
            raise DataError(f"groups must partition all {p} columns exactly")

    def with_weights(self, weights) -> "GroupPartition":
        return GroupPartition(self.groups, self.group_names, tuple(weights))

    def sqrt_size_weights(self) -> "GroupPartition":
        return self.with_weights(tuple(float(np.sqrt(len(g))) for g in self.groups))


@dataclass(frozen=True)
class ScalingParams:
    """Per-column mean and population std recorded at training time."""

    means: np.ndarray
    stds: np.ndarray   # std of a constant column recorded as 0

    def __post_init__(self):
        means = np.asarray(self.means, dtype=float)
        stds = np.asarray(self.stds, dtype=float)
        if means.shape != stds.shape or means.ndim != 1:
            raise DataError("means and stds must be equal-length vectors")
        if np.any(stds < 0):
            raise DataError("stds must be non-negative")
        means.setflags(write=False)
        stds.setflags(write=False)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "stds", stds)


def _parse_label(raw: str, row: int) -> float:
    try:
        v = float(raw)
    except ValueError:
        raise DataError(f"row {row}: label {raw!r} is not numeric")
    if v in (-1.0, 1.0):
        return v
    if v == 0.0:
        return -1.0
    raise DataError(f"row {row}: label {raw!r} outside permitted set "
                    "{-1, +1, 0, 1}")


def load_csv(path, label_column: str) -> Dataset:
    """Read a UTF-8, comma-separated, headered CSV into a Dataset.

    The label column accepts -1/+1 or 0/1 (0 maps to -1). Every other cell
    must parse as a finite real.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as e:
        raise FileError(f"cannot open {path}: {e}") from e
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file")
        if len(set(header)) != len(header):
            raise DataError(f"{path}: duplicate header names")
        if label_column not in header:
            raise DataError(f"{path}: label column {label_column!r} not found")
        label_idx = header.index(label_column)
        names = [h for i, h in enumerate(header) if i != label_idx]
        rows, labels, ids = [], [], []
        for r, cells in enumerate(reader):
            if len(cells) != len(header):
                raise DataError(f"{path}: row {r} has {len(cells)} cells, "
                                f"expected {len(header)}")
            labels.append(_parse_label(cells[label_idx], r))
            vals = []
            for i, cell in enumerate(cells):
                if i == label_idx:
                    continue
                try:
                    v = float(cell)
                except ValueError:
                    raise DataError(f"{path}: row {r}, column {header[i]!r}: "
                                    f"cannot parse {cell!r}")
                if not np.isfinite(v):
                    raise DataError(f"{path}: row {r}, column {header[i]!r}: "
                                    "non-finite value")
                vals.append(v)
            rows.append(vals)
            ids.append(str(r))
    if not rows:
        raise DataError(f"{path}: no data rows")
    return Dataset(np.array(rows, dtype=float), np.array(labels), tuple(names),
                   tuple(ids))


def write_csv(data: Dataset, path, label_column: str = "label"):
    """Write a Dataset back to CSV with full-precision (repr) floats."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(data.feature_names) + [label_column])
        for i in range(data.n):
            row = [repr(float(v)) for v in data.samples[i]]
            row.append(str(int(data.labels[i])))
            writer.writerow(row)


def standardize(data: Dataset) -> tuple[Dataset, ScalingParams]:
    """Z-score each column using population (1/n) std; constant columns -> 0."""
    if data.n < 2:
        raise DataError("standardize requires at least 2 samples")
    means = data.samples.mean(axis=0)
    stds = data.samples.std(axis=0)     # population convention
    stds = np.where(stds > 0, stds, 0.0)
    params = ScalingParams(means, stds)
    return apply_scaling(data, params), params


def apply_scaling(data: Dataset, scaling: ScalingParams) -> Dataset:
    if scaling.means.shape[0] != data.p:
        raise DataError("scaling dimension does not match dataset columns")
    safe = np.where(scaling.stds > 0, scaling.stds, 1.0)
    Z = (data.samples - scaling.means) / safe
    Z[:, scaling.stds == 0] = 0.0
    return Dataset(Z, data.labels.copy(), data.feature_names, data.sample_ids)


# Synthetic verification data. Generated with numpy's PCG64 (default_rng),
# which is a documented counter-based generator: identical seeds reproduce
# identical datasets on any platform.
SYNTH_P = 12
SYNTH_GROUPS = GroupPartition(
    groups=((0, 1, 2), (3, 4, 5), (6, 7, 8), (9, 10, 11)),
    group_names=("g1", "g2", "g3", "g4"),
)
SYNTH_TRUTH = (0, 1)   # group indices carrying signal


def synth_latent(X: np.ndarray) -> np.ndarray:
    """Latent score using only groups 1-2: sin(2 x1) + x2^2 - 1 + 0.8 x4 x5."""
    return np.sin(2.0 * X[:, 0]) + X[:, 1] ** 2 - 1.0 + 0.8 * X[:, 3] * X[:, 4]


def synth_generate(n: int, seed: int, noise: float):
    """Seeded synthetic dataset: 12 standard-normal features in 4 groups of 3.

    Only groups 1 and 2 influence the label. Returns
    (Dataset, GroupPartition, truth group indices).
    """
    if n < 40:
        raise DataError("synthetic generator requires n >= 40")
    if not (0.0 <= noise < 1.0):
        raise DataError("noise must be in [0, 1)")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, SYNTH_P))
    g = synth_latent(X)
    if noise > 0:
        g = g + rng.standard_normal(n) * (noise * g.std())
    y = np.where(g >= 0, 1.0, -1.0)
    names = tuple(f"f{j + 1}" for j in range(SYNTH_P))
    ids = tuple(str(i) for i in range(n))
    return Dataset(X, y, names, ids), SYNTH_GROUPS, SYNTH_TRUTH


def load_groups_json(path, feature_names) -> GroupPartition:
    """Parse the group configuration JSON against a dataset's feature names.

    Schema: {"groups": [{"name": str, "features": [str...], "weight": num?}]}.
    Omitted weight defaults to 1.0.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise FileError(f"cannot open {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: invalid JSON: {e}") from e
    if not isinstance(doc, dict) or "groups" not in doc:
        raise DataError(f"{path}: expected an object with a 'groups' list")
    index = {name: i for i, name in enumerate(feature_names)}
    groups, names, weights = [], [], []
    for entry in doc["groups"]:
        try:
            names.append(str(entry["name"]))
            feats = entry["features"]
        except (KeyError, TypeError):
            raise DataError(f"{path}: each group needs 'name' and 'features'")
        idxs = []
        for f in feats:
            if f not in index:
                raise DataError(f"{path}: unknown feature {f!r} in group "
                                f"{names[-1]!r}")
            idxs.append(index[f])
        groups.append(tuple(idxs))
        weights.append(float(entry.get("weight", 1.0)))
    part = GroupPartition(tuple(groups), tuple(names), tuple(weights))
    part.validate_against(len(feature_names))
    return part


def dump_groups_json(partition: GroupPartition, feature_names, path):
    doc = {"groups": [
        {"name": partition.group_names[j],
         "features": [feature_names[i] for i in partition.groups[j]],
         "weight": partition.weights[j]}
        for j in range(partition.d)]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
