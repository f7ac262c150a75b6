"""Fitted classifier: training facade, scoring, prediction, persistence.

The decision function is the additive kernel expansion over the stored
(standardized) training points, so the model file carries the training
features along with the coefficient blocks. Serialization is versioned JSON
with floats written via repr, which round-trips exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .coherence import ClassWeights, CoherenceParams
from .data import (DataError, Dataset, FileError, GroupPartition,
                   ScalingParams, apply_scaling, standardize)
from .kernels import KernelSpec, cross_gram, gram_blocks, median_heuristic_gamma
from .solver import SolveReport, SolverConfig, solve

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ModelState:
    alpha: np.ndarray                 # (d, n) coefficient blocks
    train: Dataset                    # standardized training data
    scaling: ScalingParams
    partition: GroupPartition
    kernel: KernelSpec
    loss_params: CoherenceParams
    lam: float
    class_weights: ClassWeights
    report: SolveReport

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=float)
        if alpha.shape != (self.partition.d, self.train.n):
            raise DataError("alpha shape must be (group count, training rows)")
        if self.scaling.means.shape[0] != self.train.p:
            raise DataError("scaling dimension must match training columns")
        if not np.all(np.isfinite(alpha)):
            raise DataError("alpha must be finite")
        alpha.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)


def fit(data: Dataset, partition: GroupPartition, cfg: SolverConfig,
        kernel: KernelSpec | None = None) -> ModelState:
    """Standardize, build Gram blocks, and solve; returns the fitted model.

    Kernel bandwidths default to the per-group median heuristic; class
    weights default to inverse-frequency when cfg still carries unit weights.
    """
    partition.validate_against(data.p)
    if np.all(data.labels == data.labels[0]):
        raise DataError("single-class training set")
    std_data, scaling = standardize(data)
    if kernel is None:
        kernel = median_heuristic_gamma(std_data, partition)
    cw = cfg.class_weights
    if cw.weight_pos == 1.0 and cw.weight_neg == 1.0:
        cw = ClassWeights.inverse_frequency(std_data.labels)
        cfg = SolverConfig(cfg.lam, cfg.sigma, cfg.max_iters, cfg.tol, cw,
                           cfg.fit_intercept)
    gram = gram_blocks(std_data, partition, kernel)
    alpha, report = solve(gram, std_data.labels, partition, cfg)
    return ModelState(alpha=alpha, train=std_data, scaling=scaling,
                      partition=partition, kernel=kernel,
                      loss_params=cfg.loss_params, lam=cfg.lam,
                      class_weights=cw, report=report)


def _align_query(model: ModelState, query: Dataset) -> Dataset:
    """Reorder query columns by feature name and apply the stored scaling."""
    if query.feature_names != model.train.feature_names:
        try:
            order = [query.feature_names.index(f)
                     for f in model.train.feature_names]
        except ValueError as e:
            raise DataError(f"query is missing a training column: {e}") from e
        query = Dataset(query.samples[:, order], query.labels,
                        model.train.feature_names, query.sample_ids)
    return apply_scaling(query, model.scaling)


def decision_function(model: ModelState, query: Dataset) -> np.ndarray:
    """Additive kernel score per query point (before taking the sign)."""
    q = _align_query(model, query)
    blocks = cross_gram(model.train, q, model.partition, model.kernel)
    f = np.full(q.n, model.report.intercept, dtype=float)
    for j, Kq in enumerate(blocks):
        f += model.alpha[j] @ Kq
    return f


def predict(model: ModelState, query: Dataset) -> np.ndarray:
    """Class marks: +1 where the score is positive, else -1 (ties to -1)."""
    return np.where(decision_function(model, query) > 0, 1.0, -1.0)


def _model_doc(model: ModelState) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "scaling": {"means": model.scaling.means.tolist(),
                    "stds": model.scaling.stds.tolist()},
        "partition": {"groups": [list(g) for g in model.partition.groups],
                      "group_names": list(model.partition.group_names),
                      "weights": list(model.partition.weights)},
        "feature_names": list(model.train.feature_names),
        "gammas": list(model.kernel.gammas),
        "sigma": model.loss_params.sigma,
        "lambda": model.lam,
        "class_weights": {"pos": model.class_weights.weight_pos,
                          "neg": model.class_weights.weight_neg},
        "alpha": model.alpha.tolist(),
        "train_features": model.train.samples.tolist(),
        "train_labels": model.train.labels.tolist(),
        "train_sample_ids": list(model.train.sample_ids),
        "report": {"iterations": model.report.iterations,
                   "converged": model.report.converged,
                   "active_groups": list(model.report.active_groups),
                   "final_objective": model.report.objective_trace[-1],
                   "intercept": model.report.intercept},
    }


def save(model: ModelState, path):
    """Write the model as versioned JSON; floats serialize losslessly."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_model_doc(model), fh, sort_keys=True)
        fh.write("\n")


def load(path) -> ModelState:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise FileError(f"cannot open {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: corrupted model file: {e}") from e
    try:
        if doc["schema_version"] != SCHEMA_VERSION:
            raise DataError(f"unsupported model schema version "
                            f"{doc['schema_version']}")
        scaling = ScalingParams(np.array(doc["scaling"]["means"]),
                                np.array(doc["scaling"]["stds"]))
        partition = GroupPartition(
            tuple(tuple(g) for g in doc["partition"]["groups"]),
            tuple(doc["partition"]["group_names"]),
            tuple(doc["partition"]["weights"]))
        train = Dataset(np.array(doc["train_features"], dtype=float),
                        np.array(doc["train_labels"], dtype=float),
                        tuple(doc["feature_names"]),
                        tuple(doc["train_sample_ids"]))
        rep = doc["report"]
        report = SolveReport(iterations=rep["iterations"],
                             objective_trace=(rep["final_objective"],),
                             converged=rep["converged"],
                             active_groups=tuple(rep["active_groups"]),
                             intercept=rep.get("intercept", 0.0))
        return ModelState(alpha=np.array(doc["alpha"], dtype=float),
                          train=train, scaling=scaling, partition=partition,
                          kernel=KernelSpec(tuple(doc["gammas"])),
                          loss_params=CoherenceParams(doc["sigma"]),
                          lam=doc["lambda"],
                          class_weights=ClassWeights(doc["class_weights"]["pos"],
                                                     doc["class_weights"]["neg"]),
                          report=report)
    except (KeyError, TypeError, IndexError) as e:
        raise DataError(f"{path}: model file violates schema ({e})") from e
