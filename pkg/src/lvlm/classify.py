"""Bayesian image classification over per-class learned models.

Scores are unnormalized log-posteriors (log-prior + evaluation log-score);
softmax normalization is offered for display only, since evaluation is a
score rather than a calibrated likelihood.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .discrete import DiscreteModel, evaluate_discrete
from .errors import InputError
from .lattice import SymbolLattice
from .real import RealModel, evaluate_real


@dataclass(frozen=True)
class ClassEntry:
    label: str
    model: DiscreteModel | RealModel
    log_prior: float


@dataclass(frozen=True)
class ClassifierBundle:
    classes: tuple[ClassEntry, ...] = field()

    def __post_init__(self):
        if not self.classes:
            raise InputError("bundle needs at least one class")
        kinds = {type(c.model) for c in self.classes}
        if len(kinds) > 1:
            raise InputError("all bundle models must share a variant")
        if len({(c.model.M, c.model.d) for c in self.classes}) > 1:
            raise InputError("all bundle models must share M and d")
        if any(not np.isfinite(c.log_prior) for c in self.classes):
            raise InputError("log-priors must be finite")
        total = sum(np.exp(c.log_prior) for c in self.classes)
        if abs(total - 1.0) > 1e-9:
            raise InputError(f"priors must sum to 1, got {total}")

    @property
    def variant(self) -> str:
        return "discrete" if isinstance(self.classes[0].model, DiscreteModel) else "real"


def _max_workers(n: int) -> int:
    env = os.environ.get("LVLM_THREADS")
    if env:
        return max(1, min(n, int(env)))
    return n


def classify_image(bundle: ClassifierBundle, obs: SymbolLattice):
    """Argmax over classes of log-prior + evaluate(model, obs).

    Returns (label, scores) with one unnormalized log-posterior per class,
    in declaration order; ties go to the first-declared class.
    """
    evaluate = evaluate_discrete if bundle.variant == "discrete" else evaluate_real
    workers = _max_workers(len(bundle.classes))
    if workers > 1 and len(bundle.classes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            evals = list(pool.map(lambda c: evaluate(c.model, obs), bundle.classes))
    else:
        evals = [evaluate(c.model, obs) for c in bundle.classes]
    scores = [c.log_prior + e for c, e in zip(bundle.classes, evals)]
    best = 0
    for i, s in enumerate(scores):
        if s > scores[best]:
            best = i
    return bundle.classes[best].label, scores


def softmax_scores(scores) -> np.ndarray:
    """Display-only normalization of per-class log-posteriors."""
    s = np.asarray(scores, dtype=np.float64)
    s = s - s.max()
    e = np.exp(s)
    return e / e.sum()
