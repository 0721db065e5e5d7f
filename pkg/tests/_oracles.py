"""Independent reference laws and a deliberately naive sampler for cross-checks."""

from __future__ import annotations

import math

import numpy as np
from mpmath import mp
from scipy.optimize import brentq

from boltzdag.ggf import eval_set
from boltzdag.graph import LabelledDag, sources
from boltzdag.verification import canonical_key, enumerate_all_dags


def set_naive(z, w, terms=80):
    """Set(z, w) by direct summation at 50 digits, no shared code with the package."""
    with mp.workdps(50):
        z, q = mp.mpf(z), 1 + mp.mpf(w)
        return float(mp.fsum(z ** n / (q ** math.comb(n, 2) * mp.factorial(n))
                             for n in range(terms)))


def graph_weight(g: LabelledDag, z, w, u):
    n = g.num_vertices
    return (z ** n * w ** g.num_edges * u ** len(sources(g))
            / ((1 + w) ** math.comb(n, 2) * math.factorial(n)))


def boltzmann_cells(z, w, u, n_max, normaliser):
    """Exact probabilities of every DAG with at most ``n_max`` vertices.

    Returns ``(keys, probs)`` with keys ``(n, canonical_key)``; the mass of
    larger graphs is ``1 - sum(probs)``.
    """
    keys, probs = [], []
    for n in range(n_max + 1):
        for g in enumerate_all_dags(n).graphs():
            keys.append((n, canonical_key(g)))
            probs.append(graph_weight(g, z, w, u) / normaliser)
    return keys, probs


def h_cells(z, w, u, n_max, h_value):
    """Exact probabilities of H-structures up to ``n_max`` vertices.

    An H-structure is a DAG plus the distinguished vertex, which is the
    isolated source with the smallest source label.
    """
    keys, probs = [], []
    for n in range(1, n_max + 1):
        for g in enumerate_all_dags(n).graphs():
            src = sources(g)
            v = min(src)
            if any(v in e for e in g.edges):
                continue
            keys.append((n, canonical_key(g)))
            probs.append(graph_weight(g, z, w, u) / h_value)
    return keys, probs


def tally_cells(keys, samples):
    """Counts per cell plus one overflow cell for everything else."""
    index = {k: i for i, k in enumerate(keys)}
    counts = np.zeros(len(keys) + 1, dtype=np.int64)
    for g in samples:
        counts[index.get((g.num_vertices, canonical_key(g)), len(keys))] += 1
    return counts


# -- literal mutually recursive sampler ---------------------------------------

class LiteralPeeling:
    """Textbook mutually recursive H / DAG samplers on edge lists.

    Uses numpy's Generator, ``brentq`` on ``Set`` differences for the
    source weight and graph unions performed pair by pair.
    """

    def __init__(self, seed):
        self.rng = np.random.default_rng(seed)

    def dag(self, z, w, u):
        """Returns ``(n, edges)`` with labels 1..n."""
        if self.rng.random() < eval_set(-z, w) / eval_set((u - 1) * z, w):
            return 0, []
        n1, e1, v = self.h(z, w, u)
        n2, e2 = self.dag(z, w, w / (1 + w))
        src2 = _sources(n2, e2)
        # union: H keeps labels 1..n1, G2 is shifted, then a uniform relabelling
        edges = list(e1) + [(a + n1, b + n1) for a, b in e2]
        for x in range(1, n1 + 1):
            for y in range(1, n2 + 1):
                if (x == v and y in src2) or self.rng.random() < w / (1 + w):
                    edges.append((x, y + n1))
        n = n1 + n2
        perm = self.rng.permutation(n) + 1
        return n, [(int(perm[a - 1]), int(perm[b - 1])) for a, b in edges]

    def h(self, z, w, u):
        """Returns ``(n, edges, distinguished)``."""
        x = self.rng.random()
        lo, total = eval_set(-z, w), eval_set((u - 1) * z, w) - eval_set(-z, w)
        f = lambda t: (eval_set((t - 1) * z, w) - lo) / total - x
        t = brentq(f, 0.0, u, xtol=1e-15) if f(0.0) < 0 else 0.0
        n1, e1 = self.dag(z / (1 + w), w, t) if t > 0 else (0, [])
        n = n1 + 1
        v = int(self.rng.integers(1, n + 1))
        shift = lambda a: a + (a >= v)
        edges = [(shift(a), shift(b)) for a, b in e1]
        src = sorted(_sources(n, edges))
        k = src.index(v)
        rot = {s: src[(i - k) % len(src)] for i, s in enumerate(src)}
        edges = [(rot.get(a, a), rot.get(b, b)) for a, b in edges]
        return n, edges, src[0]


def _sources(n, edges):
    has_in = {b for _, b in edges}
    return {v for v in range(1, n + 1) if v not in has_in}
