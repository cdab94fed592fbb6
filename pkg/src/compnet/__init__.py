"""Computing-network simulator with information-theoretic instrumentation."""
from .info import (
    DynamicsClass,
    DynamicsParams,
    ProbabilityDistribution,
    SymbolStream,
    classify_dynamics,
    complexity,
    empirical_distribution,
    entropy,
    mutual_information,
    normalized_entropy,
    novelty_score,
    sliding_entropy,
)
from .network import (
    ComputingNetwork,
    Feed,
    FunctionSpec,
    HyperEdge,
    Message,
    Node,
    Program,
    ProgramError,
    SlowAlgorithm,
    register_program,
    slow_algorithm,
)
from .engine import Trajectory, compute_function, exchange, run, step_fast, step_slow
from .metrics import (
    MetricsReport,
    MetricsSettings,
    edge_information,
    node_io_information,
    system_information,
)
from .community import detect_communities
from . import dc, nn, social, wiki  # registers programs and slow algorithms

__version__ = "0.1.0"

__all__ = [
    "ComputingNetwork", "DynamicsClass", "DynamicsParams", "Feed", "FunctionSpec", "HyperEdge",
    "Message", "MetricsReport", "MetricsSettings", "Node", "ProbabilityDistribution", "Program",
    "ProgramError", "SlowAlgorithm", "SymbolStream", "Trajectory", "classify_dynamics", "complexity",
    "compute_function", "dc", "detect_communities", "edge_information", "empirical_distribution",
    "entropy", "exchange", "mutual_information", "nn", "node_io_information", "normalized_entropy",
    "novelty_score", "register_program", "run", "sliding_entropy", "slow_algorithm", "social",
    "step_fast", "step_slow", "system_information", "wiki",
]
