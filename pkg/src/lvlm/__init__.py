"""Latent-variable lattice models.

A fast non-markov alternative to MRF learning on d-dimensional lattice data
with inertia: sliding-window signatures, PNN vector quantization, decoding,
evaluation, learning, associativity/inertia diagnostics, synthesis, and
Bayesian classification, for discrete-symbol and real-vector observations.
"""

from .classify import ClassEntry, ClassifierBundle, classify_image, softmax_scores
from .discrete import DiscreteModel, assign_discrete, decode_discrete, evaluate_discrete, learn_discrete
from .errors import InputError, NumericError
from .indices import IndexReport, associativity_index, inertia_index
from .lattice import (
    LatticeShape,
    SignatureField,
    StateLattice,
    SymbolLattice,
    neighbors,
    sweep_signatures,
    window_bounds,
)
from .real import RealModel, assign_real, decode_real, evaluate_real, learn_real
from .synth import DiscreteEmission, RealEmission, SynthConfig, emit_observations, gibbs_sample
from .vq import Codebook, merge_cost, pnn_quantize

__all__ = [
    "ClassEntry", "ClassifierBundle", "classify_image", "softmax_scores",
    "DiscreteModel", "assign_discrete", "decode_discrete", "evaluate_discrete", "learn_discrete",
    "InputError", "NumericError",
    "IndexReport", "associativity_index", "inertia_index",
    "LatticeShape", "SignatureField", "StateLattice", "SymbolLattice",
    "neighbors", "sweep_signatures", "window_bounds",
    "RealModel", "assign_real", "decode_real", "evaluate_real", "learn_real",
    "DiscreteEmission", "RealEmission", "SynthConfig", "emit_observations", "gibbs_sample",
    "Codebook", "merge_cost", "pnn_quantize",
]

__version__ = "0.1.0"
