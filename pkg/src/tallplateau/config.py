"""Run and solver configuration, loadable from a flat TOML key/value file."""

from __future__ import annotations

import sys
from dataclasses import asdict, dataclass, fields

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-9  # gradient norm for Newton termination
    max_iter: int = 200
    escape_frac: float = 0.05
    rel_tol: float = 0.01
    window: float = 2.5  # radius n0 of the fixed comparison window B_{n0}
    mch_tol: float = 1e-2
    # horizontal-graph meshes for rectangle data
    ds: float = 0.1  # spacing per unit of the axis parameter s
    nz: int = 48  # intervals across the rectangle height
    # vertical-graph disk meshes
    n_radial: int = 24
    n_angular: int = 64

    def __post_init__(self):
        for name in ("tol", "escape_frac", "rel_tol", "window", "mch_tol", "ds"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("max_iter", "nz", "n_radial", "n_angular"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be a positive integer")


@dataclass(frozen=True)
class RunConfig:
    height_tol: float = 1e-9
    quad_tol: float = 1e-12
    cover_eps: float = 1e-3
    seed: int = 0
    out: str = "out"
    solver: SolverConfig = SolverConfig()

    def __post_init__(self):
        for name in ("height_tol", "quad_tol", "cover_eps"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    def to_dict(self) -> dict:
        return asdict(self)


def _split(data: dict) -> tuple[dict, dict]:
    solver_keys = {f.name for f in fields(SolverConfig)}
    run_keys = {f.name for f in fields(RunConfig)} - {"solver"}
    run, solver = {}, {}
    nested = data.get("solver", {})
    for k, v in list(data.items()) + list(nested.items()):
        if k == "solver":
            continue
        if k in solver_keys:
            solver[k] = v
        elif k in run_keys:
            run[k] = v
        else:
            raise ValueError(f"unknown config key {k!r}")
    return run, solver


def load_config(path=None, **overrides) -> RunConfig:
    data = {}
    if path is not None:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    run, solver = _split(data)
    for k, v in overrides.items():
        if v is None:
            continue
        if k in {f.name for f in fields(SolverConfig)}:
            solver[k] = v
        else:
            run[k] = v
    return RunConfig(solver=SolverConfig(**solver), **run)
