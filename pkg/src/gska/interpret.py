"""Group-wise interpretability: components, importances, partial dependence.

Group importance is the empirical root-mean-square of a group's component
values over the training points (the "contribution to predictions" reading);
the RKHS-norm alternative sqrt(alpha^T K alpha) is available via
rkhs_contribution. Partial dependence grids are in original, unstandardized
units so the curves stay readable; scaling is applied internally.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np

from .data import DataError, Dataset
from .kernels import cross_gram, gram_blocks
from .model import ModelState, _align_query


@dataclass(frozen=True)
class PDCurve:
    group_id: int
    feature_name: str
    grid: np.ndarray            # strictly increasing, original units
    values: np.ndarray          # component response per grid point
    reference: dict             # fixed values used for other in-group features

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.shape != values.shape:
            raise DataError("grid and values must have equal length")
        if np.any(np.diff(grid) <= 0):
            raise DataError("grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class GroupImportance:
    group_id: int
    group_name: str
    contribution: float
    normalized_share: float


def component_values(model: ModelState, query: Dataset, j: int) -> np.ndarray:
    """Value of group j's component function alone at each query point."""
    if not (0 <= j < model.partition.d):
        raise DataError(f"invalid group id {j}")
    q = _align_query(model, query)
    Kq = cross_gram(model.train, q, model.partition, model.kernel)[j]
    return model.alpha[j] @ Kq


def _component_matrix(model: ModelState) -> np.ndarray:
    # (d, n) components evaluated at the training points
    gram = gram_blocks(model.train, model.partition, model.kernel)
    return np.vstack([model.alpha[j] @ gram[j]
                      for j in range(model.partition.d)])


def group_contribution(model: ModelState) -> list[GroupImportance]:
    """Empirical 2-norm of each component over training points, with shares."""
    comps = _component_matrix(model)
    contrib = np.sqrt(np.mean(comps ** 2, axis=1))
    total = float(contrib.sum())
    shares = contrib / total if total > 0 else np.zeros_like(contrib)
    return [GroupImportance(j, model.partition.group_names[j],
                            float(contrib[j]), float(shares[j]))
            for j in range(model.partition.d)]


def rkhs_contribution(model: ModelState) -> np.ndarray:
    """Alternative importance sqrt(alpha^(j)T K^(j) alpha^(j)) per group."""
    gram = gram_blocks(model.train, model.partition, model.kernel)
    return np.array([float(np.sqrt(max(model.alpha[j] @ gram[j] @ model.alpha[j],
                                       0.0)))
                     for j in range(model.partition.d)])


def partial_dependence(model: ModelState, train: Dataset, j: int,
                       feature: str, grid_size: int = 50) -> PDCurve:
    """Sweep one feature of group j over its training range.

    Other in-group features are fixed at their training medians (original
    units); out-of-group features are irrelevant by additivity. Values are
    reported raw, not centered.
    """
    if grid_size < 2:
        raise DataError("grid_size must be at least 2")
    names = model.train.feature_names
    if feature not in names:
        raise DataError(f"unknown feature {feature!r}")
    col = names.index(feature)
    if col not in model.partition.groups[j]:
        raise DataError(f"feature {feature!r} is not in group "
                        f"{model.partition.group_names[j]!r}")
    train_col = train.samples[:, names.index(feature)]
    lo, hi = float(train_col.min()), float(train_col.max())
    if lo == hi:
        hi = lo + 1.0     # degenerate constant feature: unit-width grid
    grid = np.linspace(lo, hi, grid_size)

    medians = np.median(train.samples, axis=0)
    reference = {names[i]: float(medians[i])
                 for i in model.partition.groups[j] if i != col}
    Q = np.tile(medians, (grid_size, 1))
    Q[:, col] = grid
    query = Dataset(Q, np.ones(grid_size), names,
                    tuple(f"pd{i}" for i in range(grid_size)))
    values = component_values(model, query, j)
    return PDCurve(j, feature, grid, values, reference)


def export_interpretation(model: ModelState, train: Dataset, out_dir,
                          grid_size: int = 50, scatter: bool = False):
    """Write one PD CSV per (group, feature) plus group_importance.csv.

    With scatter=True, also writes per-sample component scatters
    (component_scatter_<group>.csv with columns sample_id,value).
    Returns the list of written paths.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for j in range(model.partition.d):
        gname = model.partition.group_names[j]
        for col in model.partition.groups[j]:
            fname = model.train.feature_names[col]
            curve = partial_dependence(model, train, j, fname, grid_size)
            path = os.path.join(out_dir, f"pd_{gname}_{fname}.csv")
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(["grid", "value"])
                for g, v in zip(curve.grid, curve.values):
                    writer.writerow([repr(float(g)), repr(float(v))])
            written.append(path)
    imp_path = os.path.join(out_dir, "group_importance.csv")
    with open(imp_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["group", "contribution", "share"])
        for gi in group_contribution(model):
            writer.writerow([gi.group_name, repr(gi.contribution),
                             repr(gi.normalized_share)])
    written.append(imp_path)
    if scatter:
        comps = _component_matrix(model)
        for j in range(model.partition.d):
            gname = model.partition.group_names[j]
            path = os.path.join(out_dir, f"component_scatter_{gname}.csv")
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(["sample_id", "value"])
                for sid, v in zip(model.train.sample_ids, comps[j]):
                    writer.writerow([sid, repr(float(v))])
            written.append(path)
    return written


def read_pd_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Parse a PD CSV back into (grid, values)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["grid", "value"]:
            raise DataError(f"{path}: not a PD CSV")
        rows = [(float(a), float(b)) for a, b in reader]
    grid, values = zip(*rows)
    return np.array(grid), np.array(values)
