"""Estimator-style front ends: configure, ``fit`` to resolve parameters, ``sample``."""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_edge_weight, check_size, check_source_weight, check_vertex_weight
from .boltzmann import sample_dag_peeling, sample_dag_root_layering
from .exact import sample_exact_leapfrog, sample_exact_rejection
from .ggf import expected_size, find_rho, tune_z
from .randomness import check_random_source

FREE_ALGORITHMS = {"peeling": sample_dag_peeling, "root-layering": sample_dag_root_layering}
EXACT_ALGORITHMS = {"leapfrog": sample_exact_leapfrog, "rejection": sample_exact_rejection}


def _check_choice(value, name, choices):
    if value not in choices:
        raise ValueError(f"{name} must be one of {sorted(choices)}, got {value!r}")


class BoltzmannDagSampler(BaseEstimator):
    """Free Boltzmann sampler of labelled DAGs.

    Give either ``z`` directly or ``expected_n``, in which case ``fit``
    solves for the ``z`` with that expected size.  ``u`` is only honoured by
    the peeling algorithm.

    Attributes set by ``fit``: ``z_``, ``rho_``, ``expected_size_``.
    ``sample`` stores the per-graph reports in ``reports_``.
    """

    def __init__(self, z=None, w=1.0, u=1.0, expected_n=None, algorithm="peeling",
                 random_state=None):
        self.z = z
        self.w = w
        self.u = u
        self.expected_n = expected_n
        self.algorithm = algorithm
        self.random_state = random_state

    def fit(self, X=None, y=None):
        _check_choice(self.algorithm, "algorithm", FREE_ALGORITHMS)
        w = check_edge_weight(self.w)
        u = check_source_weight(self.u)
        if self.algorithm == "root-layering" and u != 1.0:
            raise ValueError("root-layering does not support a source weight u != 1")
        if (self.z is None) == (self.expected_n is None):
            raise ValueError("exactly one of z and expected_n must be given")
        z = tune_z(check_size(self.expected_n, "expected_n"), w) if self.z is None \
            else check_vertex_weight(self.z, w)
        self.z_ = z
        self.rho_ = find_rho(w)
        self.expected_size_ = expected_size(z, w)
        self._src = check_random_source(self.random_state)
        return self

    def sample(self, n_samples: int = 1):
        """Draw ``n_samples`` independent graphs from the stream set up by ``fit``."""
        check_is_fitted(self, "z_")
        n_samples = check_size(n_samples, "n_samples")
        graphs, reports = [], []
        for _ in range(n_samples):
            if self.algorithm == "peeling":
                g, rep = sample_dag_peeling(self.z_, self.w, self.u, self._src)
            else:
                g, rep = sample_dag_root_layering(self.z_, self.w, self._src)
            graphs.append(g)
            reports.append(rep)
        self.reports_ = reports
        return graphs


class ExactDagSampler(BaseEstimator):
    """Exact-size sampler: uniform over labelled DAGs with ``n`` vertices when ``w = 1``."""

    def __init__(self, n=1, w=1.0, algorithm="leapfrog", random_state=None):
        self.n = n
        self.w = w
        self.algorithm = algorithm
        self.random_state = random_state

    def fit(self, X=None, y=None):
        _check_choice(self.algorithm, "algorithm", EXACT_ALGORITHMS)
        self.n_ = check_size(self.n)
        self.w_ = check_edge_weight(self.w)
        self.rho_ = find_rho(self.w_)
        self._src = check_random_source(self.random_state)
        return self

    def sample(self, n_samples: int = 1):
        check_is_fitted(self, "n_")
        n_samples = check_size(n_samples, "n_samples")
        fn = EXACT_ALGORITHMS[self.algorithm]
        out = [fn(self.n_, self.w_, self._src) for _ in range(n_samples)]
        self.reports_ = [rep for _, rep in out]
        return [g for g, _ in out]
