"""Parameter checks shared by the estimators and the command line."""

from __future__ import annotations

import numbers

from sklearn.utils import check_scalar

from .exceptions import DomainError
from .ggf import find_rho


def check_edge_weight(w) -> float:
    try:
        return float(check_scalar(w, "w", numbers.Real, min_val=0.0, include_boundaries="neither"))
    except ValueError as exc:
        raise DomainError(str(exc)) from None


def check_source_weight(u) -> float:
    try:
        return float(check_scalar(u, "u", numbers.Real, min_val=0.0, max_val=1.0,
                                  include_boundaries="right"))
    except ValueError as exc:
        raise DomainError(str(exc)) from None


def check_vertex_weight(z, w) -> float:
    """``z`` must lie strictly inside ``(0, rho_w)``."""
    rho = find_rho(w)
    try:
        return float(check_scalar(z, "z", numbers.Real, min_val=0.0, max_val=rho,
                                  include_boundaries="neither"))
    except ValueError as exc:
        raise DomainError(f"{exc} (rho_w = {rho})") from None


def check_size(n, name: str = "n") -> int:
    return int(check_scalar(n, name, numbers.Integral, min_val=1))
