"""Polarimetric scattering coding and support matrix machines.

Codes 2x2 complex PolSAR scattering matrices into sparse 4x4 real matrices,
then trains regularized hinge-loss classifiers on them (matrix variants with
nuclear-norm/L1 structure plus plain vector baselines), one-vs-rest for
multiclass, with confusion-matrix metrics and map rendering on top.
"""

from .coding import encode_complex, encode_dataset, encode_scattering
from .machine import (
    BinaryModel,
    ObjectiveSpec,
    SolverConfig,
    TrainReport,
    decision_value,
    hinge_loss_sum,
    make_spec,
    objective,
    smoothed_hinge,
    smoothed_hinge_grad,
    train_binary,
)
from .metrics import (
    ConfusionMatrix,
    average_accuracy,
    confusion,
    format_report,
    kappa,
    overall_accuracy,
    per_class_accuracy,
)
from .multiclass import MulticlassModel, decision_values, predict, predict_batch, train_multiclass
from .prox import l1_norm, nuclear_norm, prox_nuclear, prox_soft_threshold
from .synth import (
    ClassTemplate,
    SynthConfig,
    default_demo_shape,
    default_flevoland_shape,
    generate,
)
from .types import (
    ComplexValue,
    Dataset,
    PscMatrix,
    Sample,
    ScatteringMatrix,
    validate_dataset,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryModel",
    "ClassTemplate",
    "ComplexValue",
    "ConfusionMatrix",
    "Dataset",
    "MulticlassModel",
    "ObjectiveSpec",
    "PscMatrix",
    "Sample",
    "ScatteringMatrix",
    "SolverConfig",
    "SynthConfig",
    "TrainReport",
    "average_accuracy",
    "confusion",
    "decision_value",
    "decision_values",
    "default_demo_shape",
    "default_flevoland_shape",
    "encode_complex",
    "encode_dataset",
    "encode_scattering",
    "format_report",
    "generate",
    "hinge_loss_sum",
    "kappa",
    "l1_norm",
    "make_spec",
    "nuclear_norm",
    "objective",
    "overall_accuracy",
    "per_class_accuracy",
    "predict",
    "predict_batch",
    "prox_nuclear",
    "prox_soft_threshold",
    "smoothed_hinge",
    "smoothed_hinge_grad",
    "train_binary",
    "train_multiclass",
    "validate_dataset",
]
