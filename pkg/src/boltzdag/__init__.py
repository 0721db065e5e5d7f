"""Boltzmann and exact-size random generation of labelled directed acyclic graphs."""

from .boltzmann import SampleReport, sample_dag_peeling, sample_dag_root_layering, sample_h
from .estimators import BoltzmannDagSampler, ExactDagSampler
from .exact import LeapSequence, sample_exact_leapfrog, sample_exact_rejection, sample_leap_sequence
from .exceptions import ConvergenceError, DomainError, SamplerError
from .ggf import (GgfParams, SeriesTolerance, count_dags, eval_dag, eval_h, eval_set,
                  eval_set_deriv, expected_size, find_rho, tune_z)
from .graph import (HStructure, LabelledDag, RootLayering, cyclic_source_shift, is_acyclic,
                    relabel, root_layering, sources)
from .randomness import RandomSource

__version__ = "0.1.0"

__all__ = [
    "BoltzmannDagSampler", "ConvergenceError", "DomainError", "ExactDagSampler", "GgfParams",
    "HStructure", "LabelledDag", "LeapSequence", "RandomSource", "RootLayering", "SampleReport",
    "SamplerError", "SeriesTolerance", "count_dags", "cyclic_source_shift", "eval_dag", "eval_h",
    "eval_set", "eval_set_deriv", "expected_size", "find_rho", "is_acyclic", "relabel",
    "root_layering", "sample_dag_peeling", "sample_dag_root_layering", "sample_exact_leapfrog",
    "sample_exact_rejection", "sample_h", "sample_leap_sequence", "sources", "tune_z",
]
