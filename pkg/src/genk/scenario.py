"""Scenario files: JSON in, validated objects out.

A scenario names the tiers to run and carries the payload each tier needs::

    {
      "name": "flat_kahler_u1",
      "tiers": ["fiber", "metric-lab", "gk-lab"],
      "algebra": "u1",
      "gk": {"recipe": "flat_kahler"},
      "H": {"dim": 4, "terms": []},
      "A": {"dim": 4, "algebra": "u1", "terms": []},
      "radius": 2,
      "seed": 0
    }

Forms use the ``Form.to_json`` layout and Lie-valued forms the
``LaForm.to_json`` layout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from .clifford import GenMetric, metric_split
from .errors import GenkError, ScenarioError
from .exterior import Form, LaForm, LieAlgebraData, algebra_by_name
from .gk import GKFiber, kahler_pair, standard_complex_structure
from .reduction import ReductionProblem
from .torus import FourierScenario

TIERS = ("fiber", "metric-lab", "gk-lab", "reduction")
KNOWN_KEYS = {
    "name",
    "description",
    "tiers",
    "algebra",
    "metric",
    "B",
    "orientation",
    "H",
    "A",
    "gk",
    "radius",
    "tol",
    "seed",
    "instanton",
    "reduction",
}


def _matrix(data, shape, what: str) -> np.ndarray:
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError):
        raise ScenarioError(f"{what} must be a numeric matrix") from None
    if arr.shape != shape:
        raise ScenarioError(f"{what} must have shape {shape}, got {arr.shape}")
    return arr


def _form(data, what: str) -> Form:
    try:
        f = Form.from_json(data)
    except GenkError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"cannot parse {what}: {exc}") from None
    if f.dim != 4:
        raise ScenarioError(f"{what} must be a form on R^4")
    return f


def gk_from_recipe(data: dict) -> GKFiber:
    """Build a generalized Kahler fiber from a recipe dictionary."""
    recipe = data.get("recipe", "flat_kahler")
    if recipe == "flat_kahler":
        return kahler_pair(np.eye(4), standard_complex_structure(4))
    if recipe == "kahler":
        g = _matrix(data.get("g", np.eye(4)), (4, 4), "gk.g")
        J = _matrix(data.get("J", standard_complex_structure(4)), (4, 4), "gk.J")
        A = _matrix(data["A"], (4, 4), "gk.A") if "A" in data else None
        B = _form(data["B"], "gk.B") if "B" in data else None
        return kahler_pair(g, J, B=B, A=A)
    raise ScenarioError(f"unknown gk recipe {recipe!r}")


@dataclass
class Scenario:
    """Validated scenario: tier flags plus the payload of each tier."""

    name: str
    tiers: tuple[str, ...]
    algebra: LieAlgebraData
    metric: np.ndarray
    B: Form
    orientation: int
    H: Form
    A: LaForm
    gk: GKFiber | None = None
    radius: int = 2
    tol: dict[str, float] = field(default_factory=dict)
    seed: int = 0
    instanton: bool = True
    reduction: dict | None = None
    exact: bool = False
    description: str = ""

    def __post_init__(self):
        bad = set(self.tiers) - set(TIERS)
        if bad:
            raise ScenarioError(f"unknown tiers {sorted(bad)}")
        if not self.tiers:
            raise ScenarioError("a scenario needs at least one tier")
        if "gk-lab" in self.tiers:
            if self.gk is None:
                raise ScenarioError("the gk-lab tier needs a gk recipe")
            if self.H.norm() > 0:
                raise ScenarioError("the gk-lab tier requires H = 0")
        if "reduction" in self.tiers and self.reduction is None:
            raise ScenarioError("the reduction tier needs a reduction payload")
        if self.radius < 0:
            raise ScenarioError("radius must be non-negative")
        if self.orientation not in (1, -1):
            raise ScenarioError("orientation must be +1 or -1")
        # build eagerly so invalid payloads fail at load time
        self.genmetric
        if {"metric-lab", "gk-lab"} & set(self.tiers):
            torus = self.torus
            if self.instanton:
                torus.require_instanton()
        if self.reduction is not None:
            self.reduction_problem

    @cached_property
    def genmetric(self) -> GenMetric:
        if self.gk is not None:
            return self.gk.metric
        return GenMetric.from_metric(self.metric, self.B)

    @property
    def fiber_orientation(self) -> int:
        return self.gk.orientation if self.gk is not None else self.orientation

    @cached_property
    def torus(self) -> FourierScenario:
        g = metric_split(self.gk.metric)[0] if self.gk is not None else self.metric
        return FourierScenario(
            algebra=self.algebra,
            metric=g,
            orientation=self.fiber_orientation,
            H=self.H,
            A=self.A,
            gk=self.gk if "gk-lab" in self.tiers else None,
            radius=self.radius,
            name=self.name,
        )

    @cached_property
    def reduction_problem(self) -> ReductionProblem:
        data = self.reduction or {}
        try:
            K = np.array(data["K"], dtype=float)
        except KeyError:
            raise ScenarioError("reduction payload needs generators 'K'") from None
        except (TypeError, ValueError):
            raise ScenarioError("reduction generators must be numeric") from None
        if K.ndim != 2 or K.shape[1] != 8:
            raise ScenarioError("reduction generators are rows of length 8")
        return ReductionProblem(K.T, metric=self.genmetric, gk=self.gk)

    def threshold(self, check: str, default: float) -> float:
        if check in self.tol:
            return self.tol[check]
        return self.tol.get("*", default)

    def rng(self, check: str) -> np.random.Generator:
        """Per-check generator, so results do not depend on execution order."""
        return np.random.default_rng([self.seed, *check.encode()])

    def with_overrides(self, radius=None, tol=None, seed=None, exact=None) -> Scenario:
        kw: dict[str, Any] = {}
        if radius is not None:
            kw["radius"] = int(radius)
        if tol is not None:
            kw["tol"] = {**self.tol, "*": float(tol)}
        if seed is not None:
            kw["seed"] = int(seed)
        if exact is not None:
            kw["exact"] = bool(exact)
        if not kw:
            return self
        return replace(self, **kw)


def from_dict(data: dict) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    unknown = set(data) - KNOWN_KEYS
    if unknown:
        raise ScenarioError(f"unknown scenario keys {sorted(unknown)}")
    algebra = algebra_by_name(data.get("algebra", "u1"))
    metric = _matrix(data.get("metric", np.eye(4)), (4, 4), "metric")
    B = _form(data["B"], "B") if "B" in data else Form.zero(4)
    H = _form(data["H"], "H") if "H" in data else Form.zero(4)
    if "A" in data:
        try:
            A = LaForm.from_json({"dim": 4, "algebra": algebra.name, **data["A"]}, algebra)
        except GenkError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"cannot parse A: {exc}") from None
    else:
        A = LaForm.zero(4, algebra)
    gk = gk_from_recipe(data["gk"]) if data.get("gk") is not None else None
    tol = data.get("tol", {})
    if isinstance(tol, (int, float)):
        tol = {"*": float(tol)}
    if not isinstance(tol, dict):
        raise ScenarioError("tol must be a number or an object of per-check values")
    try:
        return Scenario(
            name=str(data.get("name", "scenario")),
            tiers=tuple(data.get("tiers", ("fiber",))),
            algebra=algebra,
            metric=metric,
            B=B,
            orientation=int(data.get("orientation", 1)),
            H=H,
            A=A,
            gk=gk,
            radius=int(data.get("radius", 2)),
            tol={str(k): float(v) for k, v in tol.items()},
            seed=int(data.get("seed", 0)),
            instanton=bool(data.get("instanton", True)),
            reduction=data.get("reduction"),
            description=str(data.get("description", "")),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, GenkError):
            raise
        raise ScenarioError(str(exc)) from None


def load(path) -> Scenario:
    """Load a scenario from a path, or a shipped scenario by name."""
    p = Path(path)
    if not p.exists() and not p.suffix:
        shipped = resources.files("genk") / "scenarios" / f"{path}.json"
        if shipped.is_file():
            return loads(shipped.read_text())
    try:
        text = p.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc.strerror}") from None
    return loads(text)


def loads(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario is not valid JSON: {exc}") from None
    return from_dict(data)


def shipped_scenarios() -> list[str]:
    root = resources.files("genk") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))
