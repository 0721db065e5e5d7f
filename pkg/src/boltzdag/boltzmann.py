"""Free Boltzmann samplers for labelled DAGs.

Two samplers draw from the graphic Boltzmann model
``P[G] ∝ z^n w^m u^k / ((1+w)^C(n,2) n!)``:

* :func:`sample_dag_root_layering` draws the sizes of the root layers as a
  Markov chain, then the edges layer by layer, then a uniform relabelling.
* :func:`sample_dag_peeling` peels the DAG into a sequence of H-structures
  (:func:`sample_h`) joined by arrow products with forced edges.

Internally a graph under construction is a ``(rows, labels, sources)``
triple: position-ordered successor bitsets, 1-based labels per position and
the positions of the sources.  H-structures keep their distinguished vertex
at position 0.
"""

from __future__ import annotations

import bisect
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exceptions import DomainError, SamplerError
from .ggf import _invert_increasing, _poly, eval_set, find_rho, h_coefficients
from .graph import HStructure, LabelledDag, _bits, _shifted_labels
from .randomness import RandomSource, check_random_source

DEFAULT_MAX_SIZE = 10**6
# below 2^-60 a probability cannot move a 53-bit uniform
_NEGLIGIBLE = 2.0**-60
# cells per leap block above which edges are drawn through numpy
_BULK_CELLS = 256


@dataclass
class SampleReport:
    """Statistics of one sampler run."""

    rejections: int = 0
    bits_consumed: int = 0
    sizes: list[int] = field(default_factory=list)
    wall_time: float = 0.0
    edge_trials: int | None = None
    forced_edges: int | None = None

    def as_record(self, include_time: bool = False) -> dict:
        rec = {"rejections": self.rejections, "bits_consumed": self.bits_consumed,
               "sizes": list(self.sizes)}
        if self.edge_trials is not None:
            rec["edge_trials"] = self.edge_trials
            rec["forced_edges"] = self.forced_edges
        if include_time:
            rec["wall_time"] = self.wall_time
        return rec


@dataclass(frozen=True)
class LayerSkeleton:
    """Sizes of the successive root layers of a DAG, without its edges."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        if any(s < 1 for s in self.sizes):
            raise ValueError("layer sizes must be positive")

    @property
    def total(self) -> int:
        return sum(self.sizes)


def check_dag_params(z: float, w: float, u: float = 1.0) -> None:
    if not w > 0:
        raise DomainError(f"edge weight w must be positive, got {w}")
    if not 0.0 < u <= 1.0:
        raise DomainError(f"source weight u must lie in (0, 1], got {u}")
    if not 0.0 < z < find_rho(w):
        raise DomainError(f"z must lie in (0, rho_w) = (0, {find_rho(w)}), got {z}")


# -- root layering ---------------------------------------------------------

class _LayerLaw:
    """Source-count and layer-transition laws at fixed ``(z, w)``.

    Cumulative tables are built on first use for each previous layer size
    and then reused, which is what makes exact-size rejection cheap.
    """

    def __init__(self, z, w):
        self.z = z
        self.w = w
        self.q = 1.0 + w
        self._set = []  # Set(-(1+w)^-k z, w)
        self._cum = {}

    def set_at(self, k):
        while len(self._set) <= k:
            self._set.append(eval_set(-self.z / self.q ** len(self._set), self.w))
        return self._set[k]

    def probabilities(self, prev):
        """``P[next = k]`` for k = 0, 1, ...; ``prev=None`` gives the source law."""
        if prev is None:
            base, norm = self.z, 1.0
        else:
            base, norm = (1.0 - self.q ** -prev) * self.z, self.set_at(prev)
        probs = []
        lead = 1.0  # base^k / ((1+w)^C(k,2) k!)
        qpow = 1.0
        for k in range(0, 10_000):
            if k:
                lead *= base / (k * qpow)
                qpow *= self.q
            p = lead * self.set_at(k) / norm
            probs.append(p)
            if p < _NEGLIGIBLE and base < qpow * (k + 1):
                return probs
        raise SamplerError(f"layer law at z={self.z}, w={self.w} has no negligible tail")

    def cumulative(self, prev):
        cum = self._cum.get(prev)
        if cum is None:
            cum = []
            acc = 0.0
            for p in self.probabilities(prev):
                acc += p
                cum.append(acc)
            self._cum[prev] = cum
        return cum

    def draw(self, prev, src, bound=None):
        """Sequential inversion of a uniform; ``-1`` if the value would exceed ``bound``."""
        cum = self.cumulative(prev)
        x = src.uniform_unit()
        k = bisect.bisect_right(cum, x)
        if bound is not None and k > bound:
            return -1
        if k == len(cum):
            raise SamplerError(f"cumulative law stops at {cum[-1]!r} below the uniform {x!r}")
        return k


@lru_cache(maxsize=64)
def _layer_law(z, w):
    return _LayerLaw(z, w)


def sample_source_count(z: float, w: float, src: RandomSource) -> int:
    """Number of sources of a Boltzmann DAG, ``P[k] = z^k Set(-z/(1+w)^k) / ((1+w)^C(k,2) k!)``."""
    check_dag_params(z, w)
    return _layer_law(z, w).draw(None, src)


def sample_next_layer_size(prev: int, z: float, w: float, src: RandomSource) -> int:
    """Size of the next root layer given the previous one; 0 ends the chain."""
    if prev < 1:
        raise ValueError(f"previous layer size must be positive, got {prev}")
    check_dag_params(z, w)
    return _layer_law(z, w).draw(prev, src)


def _bernoulli_bits(src, count, p):
    """``count`` independent Bernoulli(p) trials packed into an int, trial i at bit i."""
    if count <= 0:
        return 0
    if p == 0.5:
        return ~src.take_bits(count) & ((1 << count) - 1)
    out = 0
    for i in range(count):
        if src.bernoulli(p):
            out |= 1 << i
    return out


def _layered_edges(sizes, w, src):
    """Edges over a fixed root-layer skeleton, as position-ordered rows.

    Pairs from older layers are independent Bernoulli(w/(1+w)); the block
    from the previous layer into each new vertex is redrawn until non-empty.
    """
    p = w / (1.0 + w)
    n = sum(sizes)
    cols = [0] * n
    prev_start = 0
    start = sizes[0] if sizes else 0
    for size in sizes[1:]:
        n_old = prev_start
        n_prev = start - prev_start
        for v in range(start, start + size):
            col = _bernoulli_bits(src, n_old, p)
            while True:
                block = _bernoulli_bits(src, n_prev, p)
                if block:
                    break
            cols[v] = col | block << prev_start
        prev_start, start = start, start + size
    rows = [0] * n
    for v, col in enumerate(cols):
        bit = 1 << v
        for u in _bits(col):
            rows[u] |= bit
    return rows


def _root_layering_run(z, w, src, max_size):
    law = _layer_law(z, w)
    sizes = []
    total = 0
    k = law.draw(None, src)
    while k:
        sizes.append(k)
        total += k
        if total > max_size:
            raise SamplerError(f"root-layering sample exceeded {max_size} vertices")
        k = law.draw(k, src)
    rows = _layered_edges(sizes, w, src)
    labels = src.random_permutation(total)
    return LabelledDag._from_rows(rows, labels), sizes


def sample_dag_root_layering(z: float, w: float = 1.0, src=None,
                             max_size: int = DEFAULT_MAX_SIZE):
    """Boltzmann DAG via its root-layering.

    Returns
    -------
    dag : LabelledDag
    report : SampleReport
        ``sizes`` holds the root-layer sizes.
    """
    check_dag_params(z, w)
    src = check_random_source(src)
    t0, b0 = time.perf_counter(), src.bits_consumed
    dag, sizes = _root_layering_run(z, w, src, max_size)
    return dag, SampleReport(0, src.bits_consumed - b0, sizes, time.perf_counter() - t0)


# -- peeling -----------------------------------------------------------------

@lru_cache(maxsize=4096)
def _stop_probability(z, w):
    """``1 / DAG(z, w, w/(1+w)) = Set(-z, w) / Set(-z/(1+w), w)``."""
    return eval_set(-z, w) / eval_set(-z / (1.0 + w), w)


@lru_cache(maxsize=4096)
def _single_probability(z, w, u):
    """Probability ``z u / H(z, w, u)`` that an H-structure is a lone vertex."""
    coeffs = h_coefficients(z, w)
    return coeffs[0] * u / _poly(coeffs, u)[0]


def _h_piece(z, w, u, src, max_size):
    """One H-structure as a ``(rows, labels, sources)`` triple.

    Whether the body below the distinguished vertex is empty is decided
    first, with its exact probability ``z u / H(z, w, u)``.  Otherwise the
    body's source weight ``t`` is drawn from its law conditioned on a
    non-empty body and the body is a non-empty Boltzmann DAG at
    ``(z/(1+w), w, t)``.  Then the fresh vertex gets a uniform label and the
    source labels are rotated so it holds the smallest.
    """
    if src.bernoulli(_single_probability(z, w, u)):
        return [0], [1], [0]
    # midpoint of the dyadic cell keeps x (hence t) away from 0
    x = src.uniform_unit() + 2.0**-54
    t = _invert_increasing(h_coefficients(z, w), 1, u, x)
    body_rows, body_labels, body_src = _dag_nonempty(z / (1.0 + w), w, t, src, max_size)
    size = len(body_rows) + 1
    v = src.uniform_int(size) + 1
    labels = [v]
    labels.extend(lab + (lab >= v) for lab in body_labels)
    rows = [0]
    rows.extend(r << 1 for r in body_rows)
    sources = [0]
    sources.extend(p + 1 for p in body_src)
    return rows, _shifted_labels(labels, sources, 0), sources


def _peel_pieces(z, w, u, src, max_size):
    """The H-structures of a Boltzmann DAG at ``(z, w, u)`` conditioned on being non-empty.

    Iterated peeling: a first H-structure at ``u``, then H-structures at
    ``w/(1+w)`` until the stop coin ``1/DAG(z, w, w/(1+w))`` comes up.
    """
    pieces = [_h_piece(z, w, u, src, max_size)]
    total = len(pieces[0][0])
    stop = _stop_probability(z, w)
    v = w / (1.0 + w)
    while not src.bernoulli(stop):
        piece = _h_piece(z, w, v, src, max_size)
        pieces.append(piece)
        total += len(piece[0])
        if total > max_size:
            raise SamplerError(f"peeling sample exceeded {max_size} vertices")
    return pieces


def _dag_nonempty(z, w, u, src, max_size):
    rows, labels, sources, _, _ = assemble_leaps(_peel_pieces(z, w, u, src, max_size), w, src)
    return rows, labels, sources


def _edge_block(src, n_rows, span, forced, p):
    """Rows of edges from one leap into the following suffix.

    ``forced`` lists suffix columns the first row (the distinguished
    vertex) must hit; every other cell is a Bernoulli(p) trial, drawn in
    row-major order.  Returns the row bitsets and the number of trials.
    """
    trials = n_rows * span - len(forced)
    if p == 0.5 and n_rows * span > _BULK_CELLS:
        bits = src.take_bit_array(trials)
        block = np.ones((n_rows, span), dtype=np.uint8)
        mask = np.ones((n_rows, span), dtype=bool)
        mask[0, forced] = False
        block[mask] = 1 - bits
        packed = np.packbits(block, axis=1, bitorder="little")
        return [int.from_bytes(row.tobytes(), "little") for row in packed], trials
    forced_set = set(forced)
    first = 0
    for j in range(span):
        if j in forced_set or src.bernoulli(p):
            first |= 1 << j
    rows = [first]
    rows.extend(_bernoulli_bits(src, span, p) for _ in range(n_rows - 1))
    return rows, trials


def assemble_leaps(pieces, w, src):
    """Join a sequence of H-structures into one DAG.

    Labels are shuffled across leaps by a uniform permutation, each leap
    keeping its internal label order.  Edges from each leap to everything
    after it are added from the last leap to the first: the distinguished
    vertex is forced onto every source of the suffix, all other pairs are
    Bernoulli(w/(1+w)).  The suffix sources after absorbing a leap are
    that leap's own sources.

    Returns ``(rows, labels, sources, edge_trials, forced_edges)``.
    """
    if len(pieces) == 1:
        # an order-preserving shuffle of a single leap is the identity
        rows, labels, srcs = pieces[0]
        return list(rows), list(labels), list(srcs), 0, 0
    p = w / (1.0 + w)
    sizes = [len(piece[0]) for piece in pieces]
    n = sum(sizes)
    perm = src.random_permutation(n)
    rows = []
    labels = []
    starts = []
    start = 0
    for (prow, plab, _), size in zip(pieces, sizes):
        starts.append(start)
        chunk = sorted(perm[start:start + size])
        labels.extend(chunk[lab - 1] for lab in plab)
        rows.extend(r << start for r in prow)
        start += size
    trials = forced = 0
    for i in range(len(pieces) - 2, -1, -1):
        end = starts[i + 1]
        suffix_sources = pieces[i + 1][2]
        block, k = _edge_block(src, sizes[i], n - end, suffix_sources, p)
        trials += k
        forced += len(suffix_sources)
        for r, bitset in enumerate(block):
            rows[starts[i] + r] |= bitset << end
    return rows, labels, list(pieces[0][2]), trials, forced


def sample_h(z: float, w: float, u: float, src) -> HStructure:
    """Boltzmann sampler of H-structures at ``(z, w, u)``, ``0 < z < (1+w) rho_w``."""
    if not w > 0:
        raise DomainError(f"edge weight w must be positive, got {w}")
    if not 0.0 < u <= 1.0:
        raise DomainError(f"source weight u must lie in (0, 1], got {u}")
    if not 0.0 < z < (1.0 + w) * find_rho(w):
        raise DomainError(f"z must lie in (0, (1+w) rho_w), got {z}")
    rows, labels, _ = _h_piece(z, w, u, check_random_source(src), DEFAULT_MAX_SIZE)
    return HStructure(LabelledDag._from_rows(rows, labels), labels[0])


def sample_dag_peeling(z: float, w: float = 1.0, u: float = 1.0, src=None,
                       max_size: int = DEFAULT_MAX_SIZE):
    """Boltzmann DAG via the peeling decomposition.

    Empty with probability ``1/DAG(z, w, u)``; otherwise a sequence of
    H-structures.  ``max_size`` bounds the vertex count of an improbable run.

    Returns
    -------
    dag : LabelledDag
    report : SampleReport
        ``sizes`` holds the sizes of the top-level H-structures.
    """
    check_dag_params(z, w, u)
    src = check_random_source(src)
    t0, b0 = time.perf_counter(), src.bits_consumed
    empty_p = eval_set(-z, w) / eval_set((u - 1.0) * z, w)
    if src.bernoulli(empty_p):
        dag, sizes = LabelledDag.empty(), []
    else:
        pieces = _peel_pieces(z, w, u, src, max_size)
        rows, labels, _, _, _ = assemble_leaps(pieces, w, src)
        dag, sizes = LabelledDag._from_rows(rows, labels), [len(piece[0]) for piece in pieces]
    return dag, SampleReport(0, src.bits_consumed - b0, sizes, time.perf_counter() - t0)
