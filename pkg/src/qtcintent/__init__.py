"""qtcintent: intent classification with frozen random quantum temporal
convolution features on a small dense statevector simulator."""

from .data import (
    DatasetSplit,
    EmbeddingSequence,
    LabeledUtterance,
    filter_top_k_intents,
    kfold_split,
    parse_intent_tsv,
    read_embedding_file,
    toy_embeddings,
    write_embedding_file,
)
from .encoder import (
    FeatureVector,
    FilterBank,
    QtcFilter,
    TcnFilter,
    init_filter_bank,
    project_token,
    qtc_features,
    tcn_features,
)
from .errors import ConfigError, DataFormatError
from .harness import ExperimentConfig, MetricsReport, run_experiment, run_grid
from .model import SoftmaxHead, TrainConfig, cross_entropy, gradients, predict, train
from .qsim import (
    StateVector,
    apply_cnot,
    apply_rot,
    apply_rx,
    dense_unitary_of_circuit,
    z_expectations,
    zero_state,
)
from .vqc import CircuitSpec, RotationTriple, init_circuit, run_circuit, run_circuit_batch

__version__ = "0.1.0"

__all__ = [
    "CircuitSpec",
    "ConfigError",
    "DataFormatError",
    "DatasetSplit",
    "EmbeddingSequence",
    "ExperimentConfig",
    "FeatureVector",
    "FilterBank",
    "LabeledUtterance",
    "MetricsReport",
    "QtcFilter",
    "RotationTriple",
    "SoftmaxHead",
    "StateVector",
    "TcnFilter",
    "TrainConfig",
    "apply_cnot",
    "apply_rot",
    "apply_rx",
    "cross_entropy",
    "dense_unitary_of_circuit",
    "filter_top_k_intents",
    "gradients",
    "init_circuit",
    "init_filter_bank",
    "kfold_split",
    "parse_intent_tsv",
    "predict",
    "project_token",
    "qtc_features",
    "read_embedding_file",
    "run_circuit",
    "run_circuit_batch",
    "run_experiment",
    "run_grid",
    "tcn_features",
    "toy_embeddings",
    "train",
    "write_embedding_file",
    "z_expectations",
    "zero_state",
]
