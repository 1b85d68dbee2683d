"""Generalized Kahler linear algebra, Courant reduction and a Fourier
instanton lab on the flat 4-torus."""

from .clifford import GenMetric, GenVector, chevalley, hodge_star, sd_asd_project
from .errors import GenkError
from .exterior import Form, LaForm, LieAlgebraData, su2, u1, wedge
from .gk import GCSFiber, GKFiber, flat_kahler, gk_validate, kahler_pair
from .reduction import ReductionProblem, gk_reduce_fiber, reduced_metric
from .report import CheckResult, Report
from .torus import FourierScenario

__version__ = "0.1.0"

__all__ = [
    "CheckResult",
    "FourierScenario",
    "Form",
    "GCSFiber",
    "GKFiber",
    "GenMetric",
    "GenVector",
    "GenkError",
    "LaForm",
    "LieAlgebraData",
    "ReductionProblem",
    "Report",
    "chevalley",
    "flat_kahler",
    "gk_reduce_fiber",
    "gk_validate",
    "hodge_star",
    "kahler_pair",
    "reduced_metric",
    "sd_asd_project",
    "su2",
    "u1",
    "wedge",
]
