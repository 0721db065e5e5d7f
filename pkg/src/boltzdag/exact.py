"""Exact-size samplers: tuned rejection and leapfrogging.

Both return DAGs with exactly ``n`` vertices, uniform over labelled DAGs
when ``w = 1`` and with probability proportional to ``w^edges`` otherwise.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from .boltzmann import SampleReport, _h_piece, _layer_law, _layered_edges, assemble_leaps
from .exceptions import DomainError
from .ggf import find_rho, tune_z
from .graph import HStructure, LabelledDag
from .randomness import check_random_source

_LEAP_GUARD = 10**6


@dataclass(frozen=True)
class LeapSequence:
    """Successful output of the leapfrog repeat phase."""

    leaps: tuple[HStructure, ...]

    @property
    def total_vertices(self) -> int:
        return sum(h.num_vertices for h in self.leaps)

    @property
    def sizes(self) -> list[int]:
        return [h.num_vertices for h in self.leaps]


def _check(n, w):
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if not w > 0:
        raise DomainError(f"edge weight w must be positive, got {w}")


def _skeleton(law, n, src):
    """Layer sizes of a Boltzmann skeleton, or None as soon as it cannot total ``n``."""
    remaining = n
    sizes = []
    k = law.draw(None, src, bound=remaining)
    while k > 0:
        sizes.append(k)
        remaining -= k
        k = law.draw(k, src, bound=remaining)
    if k < 0 or remaining:
        return None
    return sizes


def sample_exact_rejection(n: int, w: float = 1.0, src=None):
    """A DAG with exactly ``n`` vertices by rejection on root-layer skeletons.

    The Boltzmann parameter is tuned so the expected size is ``n``; only the
    edgeless skeleton is redrawn, and an attempt is abandoned as soon as its
    running total passes ``n``.  About ``e n`` attempts are needed on average.

    Returns
    -------
    dag : LabelledDag
    report : SampleReport
        ``rejections`` counts abandoned skeletons, ``sizes`` the accepted layers.
    """
    _check(n, w)
    src = check_random_source(src)
    t0, b0 = time.perf_counter(), src.bits_consumed
    law = _layer_law(tune_z(n, w), w)
    rejections = 0
    while (sizes := _skeleton(law, n, src)) is None:
        rejections += 1
    rows = _layered_edges(sizes, w, src)
    labels = src.random_permutation(n)
    dag = LabelledDag._from_rows(rows, labels)
    return dag, SampleReport(rejections, src.bits_consumed - b0, sizes, time.perf_counter() - t0)


def _leap_pieces(n, w, src):
    """Repeat phase: sequences of H-structures at the singularity until one totals ``n``."""
    rho = find_rho(w)
    later = w / (1.0 + w)
    rejections = 0
    while True:
        first = _h_piece(rho, w, 1.0, src, _LEAP_GUARD)
        pieces = [first]
        total = len(first[0])
        while total < n:
            piece = _h_piece(rho, w, later, src, _LEAP_GUARD)
            pieces.append(piece)
            total += len(piece[0])
        if total == n:
            return pieces, rejections
        rejections += 1


def sample_leap_sequence(n: int, w: float = 1.0, src=None) -> tuple[LeapSequence, int]:
    """Run only the repeat phase; returns the accepted leaps and the number of restarts."""
    _check(n, w)
    pieces, rejections = _leap_pieces(n, w, check_random_source(src))
    leaps = tuple(HStructure(LabelledDag._from_rows(rows, labels), labels[0])
                  for rows, labels, _ in pieces)
    return LeapSequence(leaps), rejections


def sample_exact_leapfrog(n: int, w: float = 1.0, src=None):
    """A DAG with exactly ``n`` vertices by leapfrogging over H-structures.

    H-structures are drawn at ``z = rho_w`` (the first with source weight 1,
    the rest with ``w/(1+w)``) until their sizes sum to ``n`` or overshoot;
    on overshoot everything restarts.  Success has asymptotic probability
    ``1/rho_w``.  The accepted leaps are then relabelled and linked, which
    costs about ``n^2/2`` random bits at ``w = 1``.

    Returns
    -------
    dag : LabelledDag
    report : SampleReport
        ``sizes`` are the leap sizes; ``edge_trials`` and ``forced_edges``
        count the inter-leap pairs drawn at random and forced.
    """
    _check(n, w)
    src = check_random_source(src)
    t0, b0 = time.perf_counter(), src.bits_consumed
    pieces, rejections = _leap_pieces(n, w, src)
    rows, labels, _, trials, forced = assemble_leaps(pieces, w, src)
    dag = LabelledDag._from_rows(rows, labels)
    report = SampleReport(rejections, src.bits_consumed - b0, [len(p[0]) for p in pieces],
                          time.perf_counter() - t0, trials, forced)
    return dag, report


def inter_leap_pairs(sizes) -> int:
    """Vertex pairs lying in different leaps, ``C(n,2) - sum C(n_i,2)``."""
    return math.comb(sum(sizes), 2) - sum(math.comb(s, 2) for s in sizes)
