"""Exact and asymptotic laws of the number of unit charges in two-charge
log-gas ensembles on the line and on the circle."""

__version__ = "0.1.0"

from .ensemble_circle import CircleEnsemble, circle_mgf, circle_model
from .ensemble_line import (
    LineEnsemble,
    ScaledFugacity,
    UnitFugacity,
    line_mgf_integral,
    line_mgf_laguerre,
    line_mgf_product,
    line_model,
)
from .exact_dist import (
    CumulantTriple,
    DoubledBernoulliModel,
    ExactPmf,
    exact_cumulants,
    exact_pmf,
    kolmogorov_distance_to_normal,
    mgf_numeric_cumulants,
    sample,
    tail_probability,
)
from .kernels import BACKEND
from .orthopoly import LaguerreBasis, RootSet, laguerre_log_at_negative, laguerre_roots

__all__ = [
    "BACKEND",
    "CircleEnsemble",
    "CumulantTriple",
    "DoubledBernoulliModel",
    "ExactPmf",
    "LaguerreBasis",
    "LineEnsemble",
    "RootSet",
    "ScaledFugacity",
    "UnitFugacity",
    "circle_mgf",
    "circle_model",
    "exact_cumulants",
    "exact_pmf",
    "kolmogorov_distance_to_normal",
    "laguerre_log_at_negative",
    "laguerre_roots",
    "line_mgf_integral",
    "line_mgf_laguerre",
    "line_mgf_product",
    "line_model",
    "mgf_numeric_cumulants",
    "sample",
    "tail_probability",
]
