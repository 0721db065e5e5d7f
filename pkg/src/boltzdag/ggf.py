"""Graphic generating functions of arcless graphs, DAGs and H-structures.

``Set(z, w) = sum_n z^n / ((1+w)^C(n,2) n!)`` is entire in ``z`` for every
``w > 0``; everything else here (``DAG``, ``H``, the singularity ``rho_w``, the
tuned parameter ``z_n``) is expressed through it.  Values are plain doubles;
the ``*_interval`` variants return certified enclosures computed with
``mpmath.iv`` and exist to pin constants in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .exceptions import ConvergenceError, DomainError


@dataclass(frozen=True)
class SeriesTolerance:
    """Truncation rule for the ``Set`` series."""

    rel_tol: float = 1e-17
    max_terms: int = 512

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if self.max_terms < 2:
            raise ValueError(f"max_terms must be at least 2, got {self.max_terms}")


DEFAULT_TOLERANCE = SeriesTolerance()

# Below this the stop rule switches from relative to absolute: near a zero of
# Set the partial sums vanish and a relative test never fires.
_ABS_FLOOR = 1e-300


@dataclass(frozen=True)
class GgfParams:
    """Boltzmann parameters: vertex weight ``z``, edge weight ``w``, source weight ``u``."""

    z: float
    w: float = 1.0
    u: float = 1.0

    def __post_init__(self):
        if not self.w > 0:
            raise DomainError(f"edge weight w must be positive, got {self.w}")
        if not 0.0 < self.u <= 1.0:
            raise DomainError(f"source weight u must lie in (0, 1], got {self.u}")
        if not self.z > 0:
            raise DomainError(f"vertex weight z must be positive, got {self.z}")


def _check_w(w):
    if not w > 0:
        raise DomainError(f"edge weight w must be positive, got {w}")


def eval_set(z: float, w: float, tol: SeriesTolerance = DEFAULT_TOLERANCE) -> float:
    """``Set(z, w)``, the graphic generating function of arcless graphs."""
    if w < 0:
        raise DomainError(f"edge weight w must be non-negative, got {w}")
    if w == 0:
        return math.exp(z)
    q = 1.0 + w
    term = 1.0
    total = 1.0
    scale = 1.0  # (1+w)^n
    for n in range(1, tol.max_terms):
        ratio = z / (scale * n)
        term *= ratio
        total += term
        scale *= q
        if abs(ratio) < 1.0:
            mag = abs(term)
            if mag <= tol.rel_tol * abs(total) or mag <= _ABS_FLOOR:
                return total
    raise ConvergenceError(f"Set({z}, {w}) did not converge within {tol.max_terms} terms")


def eval_set_deriv(z: float, w: float, tol: SeriesTolerance = DEFAULT_TOLERANCE) -> float:
    """``d/dz Set(z, w)``, which equals ``Set(z/(1+w), w)``."""
    return eval_set(z / (1.0 + w), w, tol)


def eval_dag(p: GgfParams) -> float:
    """``DAG(z, w, u) = Set((u-1)z, w) / Set(-z, w)``; requires ``z < rho_w``."""
    denom = eval_set(-p.z, p.w)
    if denom <= 0.0 or p.z >= find_rho(p.w):
        raise DomainError(f"z = {p.z} is outside the disk of convergence of DAG(., {p.w})")
    return eval_set((p.u - 1.0) * p.z, p.w) / denom


def eval_h(p: GgfParams) -> float:
    """Generating function of H-structures; requires ``z < (1+w) rho_w``."""
    z, w, u = p.z, p.w, p.u
    if z >= (1.0 + w) * find_rho(w):
        raise DomainError(f"z = {z} is outside the domain of H(., {w}, .)")
    num = eval_set((u - 1.0) * z, w) - eval_set(-z, w)
    return num / eval_set(-z / (1.0 + w), w)


@lru_cache(maxsize=None)
def find_rho(w: float) -> float:
    """Least positive zero ``rho_w`` of ``z -> Set(-z, w)``.

    ``Set(-z, w)`` is decreasing and convex on ``[0, (1+w) rho_w]``, so a
    bracket grown by factors of ``min(2, 1+w)`` from ``z = 1`` can never step
    over a second zero.  Bisection narrows the bracket, Newton polishes.
    """
    _check_w(w)
    f = lambda z: eval_set(-z, w)
    grow = min(2.0, 1.0 + w)
    lo, hi = 0.0, 1.0
    while f(hi) > 0.0:
        lo, hi = hi, hi * grow
    while hi - lo > 1e-9 * hi:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    z = lo
    for _ in range(5):
        # f convex decreasing, so Newton from the left stays in the bracket.
        step = f(z) / eval_set_deriv(-z, w)
        nz = z + step
        if not lo <= nz <= hi or nz == z:
            break
        z = nz
    return z


def expected_size(z: float, w: float) -> float:
    """Mean vertex count of the Boltzmann DAG model, ``z Set(-z/(1+w)) / Set(-z)``."""
    return z * eval_set(-z / (1.0 + w), w) / eval_set(-z, w)


@lru_cache(maxsize=256)
def tune_z(n: int, w: float = 1.0) -> float:
    """The ``z_n`` in ``(0, rho_w)`` at which the expected DAG size is ``n``."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    _check_w(w)
    rho = find_rho(w)
    lo, hi = 0.0, rho
    z = 0.5 * rho
    for _ in range(200):
        z = 0.5 * (lo + hi)
        if z == lo or z == hi:
            break
        if expected_size(z, w) < n:
            lo = z
        else:
            hi = z
    return z


def h_coefficients(z: float, w: float, rel_tol: float = 1e-18) -> tuple[float, ...]:
    """Coefficients ``a_1, a_2, ...`` with ``Set((t-1)z, w) - Set(-z, w) = sum_k a_k t^k``.

    ``a_k = z^k Set(-z/(1+w)^k, w) / (k! (1+w)^C(k,2))``, all positive for
    ``0 < z < (1+w) rho_w``.  The expansion avoids the cancellation in the
    difference of two ``Set`` values.
    """
    return _h_coefficients(float(z), float(w), rel_tol)


@lru_cache(maxsize=4096)
def _h_coefficients(z, w, rel_tol):
    q = 1.0 + w
    coeffs = []
    lead = 1.0  # z^k / (k! q^C(k,2))
    qpow = 1.0  # q^(k-1), then q^k
    for k in range(1, 512):
        lead *= z / (k * qpow)
        qpow *= q
        a = lead * eval_set(-z / qpow, w)
        coeffs.append(a)
        if k > 1 and a <= rel_tol * coeffs[0] and z < qpow * (k + 1):
            return tuple(coeffs)
    raise ConvergenceError(f"H coefficients at z={z}, w={w} did not decay")


def _poly(coeffs, t, start=0):
    """``sum_{k>start} c_k t^k`` and its derivative in ``t``."""
    val = der = 0.0
    tp = t ** start
    for k in range(start + 1, len(coeffs) + 1):
        c = coeffs[k - 1]
        der += k * c * tp
        tp *= t
        val += c * tp
    return val, der


def _invert_increasing(coeffs, start, u, x):
    """Solve ``P(t) = x P(u)`` on [0, u] for the convex increasing series ``P``.

    Newton steps start from the root of the leading monomial and are kept
    inside a shrinking bracket, falling back to bisection when they leave it.
    """
    if x <= 0.0:
        return 0.0
    total, _ = _poly(coeffs, u, start)
    target = x * total
    lo, hi = 0.0, u
    # exact when the lowest power dominates; Newton then has little left to do
    t = u * x ** (1.0 / (start + 1))
    for _ in range(100):
        val, der = _poly(coeffs, t, start)
        resid = val - target
        if abs(resid) <= 1e-13 * total:
            return t
        if resid > 0.0:
            hi = t
        else:
            lo = t
        nt = t - resid / der if der > 0.0 else 0.5 * (lo + hi)
        if not lo < nt < hi:
            nt = 0.5 * (lo + hi)
        if nt == t:
            return t
        t = nt
    return t


def solve_h_quantile(z: float, w: float, u: float, x: float) -> float:
    """The ``t`` in [0, u] whose normalised ``Set`` difference equals ``x``.

    Solves ``(Set((t-1)z, w) - Set(-z, w)) / (Set((u-1)z, w) - Set(-z, w)) = x``,
    the inverse CDF used to draw the source weight of an H-structure's body.
    """
    if not 0.0 <= x < 1.0:
        raise ValueError(f"x must lie in [0, 1), got {x}")
    return _invert_increasing(h_coefficients(z, w), 0, u, x)


def solve_h_quantile_nonempty(z: float, w: float, u: float, x: float) -> float:
    """Inverse CDF of ``t`` given that the body of the H-structure is non-empty.

    The conditional law drops the ``k = 1`` term of the expansion of
    ``Set((t-1)z) - Set(-z)``, which is the empty-body contribution.
    """
    if not 0.0 <= x < 1.0:
        raise ValueError(f"x must lie in [0, 1), got {x}")
    return _invert_increasing(h_coefficients(z, w), 1, u, x)


def count_dags(n: int) -> int:
    """Number of labelled DAGs on ``n`` vertices (Robinson's recurrence, exact)."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    a = [1]
    for m in range(1, n + 1):
        a.append(sum((-1) ** (k + 1) * math.comb(m, k) * 2 ** (k * (m - k)) * a[m - k]
                     for k in range(1, m + 1)))
    return a[n]


# -- certified enclosures (test support) -----------------------------------

def eval_set_interval(z, w, terms: int = 60):
    """An ``mpmath.iv`` interval containing ``Set(z, w)``.

    Sums ``terms`` terms in interval arithmetic and widens by a geometric
    bound on the tail, valid once the term ratio has dropped below one.
    """
    from mpmath import iv

    iv.prec = 113
    z = iv.mpf(z)
    q = 1 + iv.mpf(w)
    term = iv.mpf(1)
    total = iv.mpf(1)
    for n in range(1, terms):
        term = term * z / (q ** (n - 1) * n)
        total += term
    # next term and ratio bound for everything after it
    nxt = abs(term * z / (q ** (terms - 1) * terms))
    ratio = abs(z) / (q ** terms * (terms + 1))
    if not ratio.b < 1:
        raise ConvergenceError("interval tail bound needs more terms")
    tail = nxt.b / (1 - ratio.b)
    return total + iv.mpf([-tail, tail])


def eval_dag_interval(z, w, u=1.0, terms: int = 60):
    """Interval enclosure of ``DAG(z, w, u)``."""
    num = eval_set_interval((u - 1) * z, w, terms)
    den = eval_set_interval(-z, w, terms)
    if not den.a > 0:
        raise DomainError("denominator interval is not positive")
    return num / den


def eval_h_interval(z, w, u=1.0, terms: int = 60):
    """Interval enclosure of ``H(z, w, u)``."""
    num = eval_set_interval((u - 1) * z, w, terms) - eval_set_interval(-z, w, terms)
    return num / eval_set_interval(-z / (1 + w), w, terms)
