"""Experiment configuration: parsing, validation, and seed derivation.

Configs are single JSON documents. Unknown fields are rejected (fail-closed)
so a typo cannot silently fall back to a default. One top-level seed expands
into per-stage sub-seeds through a fixed counter scheme, so adding a stage
never perturbs the streams of earlier stages.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .dynamics import EvolutionModel, TimeGrid, DEFAULT_GAMMA, DEFAULT_P, DEFAULT_TOL, default_grid
from .errors import ConfigError
from .graphs import GENERATOR_FAMILIES, Graph, NodePolicy, build_graph
from .metrics import DQC_MODES, ENTROPY_BASES

# Stage counters for sub-seed derivation.
STAGE_GRAPH = 0
STAGE_POLICY = 1


def sub_seed(seed: int, stage: int) -> int:
    """Stable 64-bit sub-seed for a pipeline stage of a top-level seed."""
    words = np.random.SeedSequence([int(seed), int(stage)]).generate_state(2)
    return int(words[0]) | (int(words[1]) << 32)


def _require_keys(section: str, data: dict, allowed: set[str], required: set[str]) -> None:
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"{section}: unknown fields {sorted(unknown)}")
    missing = required - set(data)
    if missing:
        raise ConfigError(f"{section}: missing fields {sorted(missing)}")


@dataclass(frozen=True)
class TopologySpec:
    """Graph family plus its parameters; seed defaults to a derived sub-seed."""

    family: str
    n: int
    avg_degree: Optional[float] = None
    k: Optional[int] = None
    p_rewire: Optional[float] = None
    m: Optional[int] = None
    seed: Optional[int] = None

    _PARAMS = {"cycle": set(), "complete": set(), "star": set(),
               "er": {"avg_degree"}, "ws": {"k", "p_rewire"}, "ba": {"m"}}

    def __post_init__(self):
        if self.family not in GENERATOR_FAMILIES:
            raise ConfigError(f"topology: unknown family {self.family!r}")
        needed = self._PARAMS[self.family]
        given = {name for name in ("avg_degree", "k", "p_rewire", "m")
                 if getattr(self, name) is not None}
        if given != needed:
            raise ConfigError(
                f"topology: family {self.family!r} takes parameters {sorted(needed)}, "
                f"got {sorted(given)}")

    @classmethod
    def from_dict(cls, data: dict) -> "TopologySpec":
        _require_keys("topology", data,
                      {"family", "n", "avg_degree", "k", "p_rewire", "m", "seed"},
                      {"family", "n"})
        return cls(**data)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"family": self.family, "n": self.n}
        for name in ("avg_degree", "k", "p_rewire", "m", "seed"):
            if getattr(self, name) is not None:
                out[name] = getattr(self, name)
        return out

    def build(self, derived_seed: int) -> Graph:
        seed = self.seed if self.seed is not None else derived_seed
        try:
            return build_graph(self.family, self.n, avg_degree=self.avg_degree,
                               k=self.k, p_rewire=self.p_rewire, m=self.m, seed=seed)
        except ValueError as exc:
            raise ConfigError(f"topology: {exc}") from exc


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    gamma: Optional[float] = None
    p: Optional[float] = None

    @classmethod
    def from_dict(cls, data: dict) -> "ModelSpec":
        _require_keys("model", data, {"kind", "gamma", "p"}, {"kind"})
        return cls(**data)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind}
        if self.gamma is not None:
            out["gamma"] = self.gamma
        if self.p is not None:
            out["p"] = self.p
        return out

    def to_model(self) -> EvolutionModel:
        try:
            if self.kind == "noiseless":
                if self.gamma is not None or self.p is not None:
                    raise ConfigError("model: noiseless takes no parameters")
                return EvolutionModel.noiseless()
            if self.kind == "intrinsic":
                if self.p is not None:
                    raise ConfigError("model: intrinsic takes gamma, not p")
                return EvolutionModel.intrinsic(DEFAULT_GAMMA if self.gamma is None else self.gamma)
            if self.kind == "haken_strobl":
                if self.p is not None:
                    raise ConfigError("model: haken_strobl takes gamma, not p")
                return EvolutionModel.haken_strobl(DEFAULT_GAMMA if self.gamma is None else self.gamma)
            if self.kind == "qsw":
                if self.gamma is not None:
                    raise ConfigError("model: qsw takes p, not gamma")
                return EvolutionModel.qsw(DEFAULT_P if self.p is None else self.p)
        except ValueError as exc:
            raise ConfigError(f"model: {exc}") from exc
        raise ConfigError(f"model: unknown kind {self.kind!r}")


@dataclass(frozen=True)
class PolicySpec:
    kind: str
    index: Optional[int] = None
    seed: Optional[int] = None

    @classmethod
    def from_dict(cls, data: dict) -> "PolicySpec":
        _require_keys("policy", data, {"kind", "index", "seed"}, {"kind"})
        return cls(**data)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind}
        if self.index is not None:
            out["index"] = self.index
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    def to_policy(self, derived_seed: int) -> NodePolicy:
        try:
            if self.kind == "random":
                return NodePolicy.random(self.seed if self.seed is not None else derived_seed)
            if self.index is not None and self.kind != "explicit":
                raise ConfigError(f"policy: {self.kind} takes no index")
            return NodePolicy(self.kind, index=self.index)
        except ValueError as exc:
            raise ConfigError(f"policy: {exc}") from exc


@dataclass(frozen=True)
class GridSpec:
    t_end: float
    samples: int

    @classmethod
    def from_dict(cls, data: dict) -> "GridSpec":
        _require_keys("grid", data, {"t_end", "samples"}, {"t_end", "samples"})
        return cls(**data)

    def to_dict(self) -> dict:
        return {"t_end": self.t_end, "samples": self.samples}

    def to_grid(self) -> TimeGrid:
        try:
            return TimeGrid(t_end=self.t_end, samples=self.samples)
        except ValueError as exc:
            raise ConfigError(f"grid: {exc}") from exc


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines a run byte-for-byte, given the code version."""

    seed: int
    topology: TopologySpec
    model: ModelSpec
    policy: PolicySpec
    grid: Optional[GridSpec] = None
    dqc_mode: str = "fixed_initial"
    entropy_base: str = "ln"
    emit_occupations: bool = False
    snapshots: bool = False
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.dqc_mode not in DQC_MODES:
            raise ConfigError(f"dqc_mode must be one of {DQC_MODES}")
        if self.entropy_base not in ENTROPY_BASES:
            raise ConfigError(f"entropy_base must be one of {ENTROPY_BASES}")
        if self.tol <= 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        _require_keys("config", data,
                      {"seed", "topology", "model", "policy", "grid", "dqc_mode",
                       "entropy_base", "emit_occupations", "snapshots", "tol"},
                      {"seed", "topology", "model", "policy"})
        grid = GridSpec.from_dict(data["grid"]) if "grid" in data else None
        return cls(
            seed=int(data["seed"]),
            topology=TopologySpec.from_dict(data["topology"]),
            model=ModelSpec.from_dict(data["model"]),
            policy=PolicySpec.from_dict(data["policy"]),
            grid=grid,
            dqc_mode=data.get("dqc_mode", "fixed_initial"),
            entropy_base=data.get("entropy_base", "ln"),
            emit_occupations=bool(data.get("emit_occupations", False)),
            snapshots=bool(data.get("snapshots", False)),
            tol=float(data.get("tol", DEFAULT_TOL)),
        )

    @classmethod
    def from_json_file(cls, path) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "seed": self.seed,
            "topology": self.topology.to_dict(),
            "model": self.model.to_dict(),
            "policy": self.policy.to_dict(),
            "dqc_mode": self.dqc_mode,
            "entropy_base": self.entropy_base,
            "emit_occupations": self.emit_occupations,
            "snapshots": self.snapshots,
            "tol": self.tol,
        }
        if self.grid is not None:
            out["grid"] = self.grid.to_dict()
        return out

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return ExperimentConfig(seed=seed, topology=self.topology, model=self.model,
                                policy=self.policy, grid=self.grid, dqc_mode=self.dqc_mode,
                                entropy_base=self.entropy_base,
                                emit_occupations=self.emit_occupations,
                                snapshots=self.snapshots, tol=self.tol)

    def build_graph(self) -> Graph:
        return self.topology.build(sub_seed(self.seed, STAGE_GRAPH))

    def resolve_policy(self) -> NodePolicy:
        return self.policy.to_policy(sub_seed(self.seed, STAGE_POLICY))

    def resolve_grid(self) -> TimeGrid:
        if self.grid is not None:
            return self.grid.to_grid()
        return default_grid(self.topology.n)


@dataclass(frozen=True)
class RunManifest:
    """Provenance record written next to each run's artifacts."""

    config: dict
    initial_node: int
    graph_digest: str
    wall_clock_seconds: float
    artifacts: tuple[str, ...]
    engine_version: str

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "initial_node": self.initial_node,
            "graph_digest": self.graph_digest,
            "wall_clock_seconds": self.wall_clock_seconds,
            "artifacts": list(self.artifacts),
            "engine_version": self.engine_version,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "RunManifest":
        return cls(config=data["config"], initial_node=data["initial_node"],
                   graph_digest=data["graph_digest"],
                   wall_clock_seconds=data["wall_clock_seconds"],
                   artifacts=tuple(data["artifacts"]),
                   engine_version=data["engine_version"])
