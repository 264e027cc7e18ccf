"""Continuous-time quantum walks on graphs under decoherence.

Simulation engine for walker dynamics generated by graph Laplacians, with
three decoherence channels alongside noiseless evolution, stability metrics
over time, and stretched-exponential fits of coherence decay.
"""

__version__ = "0.1.0"

from .config import ExperimentConfig, GridSpec, ModelSpec, PolicySpec, RunManifest, TopologySpec
from .dynamics import (
    EvolutionModel,
    SpectralDecomposition,
    TimeGrid,
    Trajectory,
    classical_heat_kernel,
    default_grid,
    evolve,
    evolve_spectral,
    rhs,
    triangle_analytic,
)
from .errors import ConfigError, CtqwError, GraphGenerationError, IntegrationError, InvalidStateError
from .graphs import (
    Graph,
    NodePolicy,
    build_barabasi_albert,
    build_complete,
    build_cycle,
    build_erdos_renyi,
    build_graph,
    build_star,
    build_watts_strogatz,
    closeness_centrality,
    laplacian,
    select_node,
)
from .kohlrausch import FitResult, decay_segment, fit_stretched_exponential, fit_window, kohlrausch
from .metrics import (
    MetricRecord,
    classical_state,
    fidelity,
    l1_coherence,
    metric_series,
    occupation_probabilities,
    quantum_classical_distance,
    von_neumann_entropy,
    write_metrics_csv,
)
from .runner import fit_csv, fit_decay_curve, preset, run, sweep
from .states import StateDiagnostics, localized_state, purity, validate

__all__ = [
    "__version__",
    "ConfigError", "CtqwError", "GraphGenerationError", "IntegrationError", "InvalidStateError",
    "Graph", "NodePolicy", "build_cycle", "build_complete", "build_star",
    "build_erdos_renyi", "build_watts_strogatz", "build_barabasi_albert", "build_graph",
    "laplacian", "closeness_centrality", "select_node",
    "localized_state", "validate", "purity", "StateDiagnostics",
    "EvolutionModel", "SpectralDecomposition", "TimeGrid", "Trajectory",
    "evolve", "evolve_spectral", "rhs", "classical_heat_kernel", "triangle_analytic",
    "default_grid",
    "MetricRecord", "occupation_probabilities", "l1_coherence", "fidelity",
    "von_neumann_entropy", "classical_state", "quantum_classical_distance",
    "metric_series", "write_metrics_csv",
    "FitResult", "fit_stretched_exponential", "fit_window", "decay_segment", "kohlrausch",
    "ExperimentConfig", "TopologySpec", "ModelSpec", "PolicySpec", "GridSpec", "RunManifest",
    "run", "sweep", "preset", "fit_csv", "fit_decay_curve",
]
