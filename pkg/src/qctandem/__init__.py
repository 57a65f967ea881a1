"""Hybrid quantum-classical binary classifiers on an exact statevector
simulator: circuit builders, parameter-shift training, and a benchmark CLI."""

__version__ = "0.1.0"

from .backend import backend_name
from .circuit import (ParamCircuit, build_combined, build_feature_var,
                      build_real_amplitudes, build_zz_feature_map,
                      parse_circuit, serialize_circuit, validate_circuit)
from .data import Dataset, generate_synthetic, load_csv, scale_minmax, split
from .gradients import finite_diff_grad, shift_rule_grad
from .model import (MODEL_KINDS, HybridModel, ModelParams, build_model,
                    evaluate, grad_all, init_model_params, loss_bce,
                    param_counts, predict)
from .neuralnet import Mlp, build_classical_net, build_head
from .qsim import (Statevector, dense_matrix_oracle, expectation_z,
                   expectation_z_all, init_zero, probability_odd_parity,
                   run_circuit, sample_measurements)
from .trainer import (AdamState, MetricsRecord, TrainConfig, TrainingDiverged,
                      adam_init, adam_step, best_metrics, train)

__all__ = [
    "backend_name",
    "ParamCircuit", "build_combined", "build_feature_var",
    "build_real_amplitudes", "build_zz_feature_map", "parse_circuit",
    "serialize_circuit", "validate_circuit",
    "Dataset", "generate_synthetic", "load_csv", "scale_minmax", "split",
    "finite_diff_grad", "shift_rule_grad",
    "MODEL_KINDS", "HybridModel", "ModelParams", "build_model", "evaluate",
    "grad_all", "init_model_params", "loss_bce", "param_counts", "predict",
    "Mlp", "build_classical_net", "build_head",
    "Statevector", "dense_matrix_oracle", "expectation_z",
    "expectation_z_all", "init_zero", "probability_odd_parity",
    "run_circuit", "sample_measurements",
    "AdamState", "MetricsRecord", "TrainConfig", "TrainingDiverged",
    "adam_init", "adam_step", "best_metrics", "train",
]
