"""Given-clause resolution prover for negation-limited inverter synthesis."""

from .clauses import Clause, Literal, parse_clause
from .inference import RuleConfig, hyper_resolve, ur_resolve, binary_resolve
from .saturation import Limits, Outcome, ProverConfig, saturate

__version__ = "0.1.0"

__all__ = [
    "Clause", "Literal", "parse_clause", "RuleConfig", "hyper_resolve", "ur_resolve",
    "binary_resolve", "Limits", "Outcome", "ProverConfig", "saturate",
]
