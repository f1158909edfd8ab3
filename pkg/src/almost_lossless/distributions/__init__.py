"""Probability mass functions and envelopes on the positive integers."""

from .core import MASS_TOLERANCE, Envelope, EnvelopeProbability, MassFunction, Pmf
from .operations import (
    HazardFunction,
    entropy,
    envelope_probability,
    envelope_tail_sum,
    hazard_u_function,
    is_summable,
    mass,
    project_envelope,
    quantile_u_star,
    quantized_pmf,
    random_member,
    restricted_entropy,
    restricted_kl,
    sample,
    tail_mass,
)
from .partition import PartitionSpec
from .spec import parse_envelope, parse_source, parse_spec
from .tails import GeometricTail, PowerTail, Tail

__all__ = [
    "MASS_TOLERANCE",
    "Envelope",
    "EnvelopeProbability",
    "GeometricTail",
    "HazardFunction",
    "MassFunction",
    "PartitionSpec",
    "Pmf",
    "PowerTail",
    "Tail",
    "entropy",
    "envelope_probability",
    "envelope_tail_sum",
    "hazard_u_function",
    "is_summable",
    "mass",
    "parse_envelope",
    "parse_source",
    "parse_spec",
    "project_envelope",
    "quantile_u_star",
    "quantized_pmf",
    "random_member",
    "restricted_entropy",
    "restricted_kl",
    "sample",
    "tail_mass",
]
