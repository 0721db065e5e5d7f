"""Ground-truth oracles and chi-square harnesses for the samplers.

The census enumerates every labelled digraph on at most five vertices and
keeps the acyclic ones.  A graph's canonical key is its adjacency matrix
read row by row as a binary number, entry ``(1, 1)`` being the most
significant bit.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import stats

from .ggf import count_dags, eval_dag, GgfParams
from .graph import LabelledDag

MAX_CENSUS_N = 5
# expected count below which goodness-of-fit bins are merged
MIN_EXPECTED = 5.0


def canonical_key(g: LabelledDag) -> int:
    """Row-major adjacency bits of ``g`` as an integer, most significant first."""
    n = g.num_vertices
    top = n * n - 1
    key = 0
    lab = g.labels
    for p, r in enumerate(g.rows):
        base = top - (lab[p] - 1) * n + 1
        while r:
            low = r & -r
            key |= 1 << (base - lab[low.bit_length() - 1])
            r ^= low
    return key


def dag_from_key(n: int, key: int) -> LabelledDag:
    top = n * n - 1
    edges = [(i // n + 1, i % n + 1) for i in range(n * n) if key >> (top - i) & 1]
    return LabelledDag(n, edges)


@dataclass
class DagCensus:
    """All labelled DAGs on ``n`` vertices with a dense index."""

    n: int
    keys: list[int]
    edge_counts: list[int]
    index: dict[int, int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {k: i for i, k in enumerate(self.keys)}

    @property
    def total(self) -> int:
        return len(self.keys)

    def index_of(self, g: LabelledDag) -> int:
        return self.index[canonical_key(g)]

    def edge_histogram(self) -> list[int]:
        """``d_{n,m}`` for ``m = 0 .. C(n,2)``."""
        hist = [0] * (math.comb(self.n, 2) + 1)
        for m in self.edge_counts:
            hist[m] += 1
        return hist

    def graphs(self) -> list[LabelledDag]:
        return [dag_from_key(self.n, k) for k in self.keys]

    def tally(self, samples: Iterable[LabelledDag]) -> np.ndarray:
        """Counts per census cell; a graph outside the census raises ``ValueError``."""
        counts = np.zeros(self.total, dtype=np.int64)
        keys = Counter()
        for g in samples:
            if g.num_vertices != self.n:
                raise ValueError(f"graph with {g.num_vertices} vertices in a census of size {self.n}")
            keys[canonical_key(g)] += 1
        for k, c in keys.items():
            counts[self.index[k]] += c
        return counts

    def dump(self, fh) -> None:
        """Header line ``n total``, then one key per line in index order."""
        fh.write(f"{self.n} {self.total}\n")
        for k in self.keys:
            fh.write(f"{k}\n")

    @classmethod
    def load(cls, fh) -> DagCensus:
        n, total = map(int, fh.readline().split())
        keys = [int(line) for line in fh if line.strip()]
        if len(keys) != total:
            raise ValueError(f"census header announces {total} graphs, found {len(keys)}")
        return cls(n, keys, [k.bit_count() for k in keys])


@lru_cache(maxsize=None)
def enumerate_all_dags(n: int) -> DagCensus:
    """Brute-force census: every digraph on ``n <= 5`` vertices, acyclic ones kept.

    A digraph is acyclic iff its adjacency matrix is nilpotent, which is
    checked for all ``2^(n(n-1))`` candidates at once with batched boolean
    matrix powers.  Results are cached; treat the returned census as read-only.
    """
    if not 0 <= n <= MAX_CENSUS_N:
        raise ValueError(f"enumeration is limited to 0 <= n <= {MAX_CENSUS_N}, got {n}")
    if n < 2:
        return DagCensus(n, [0], [0])
    cells = [(i, j) for i in range(n) for j in range(n) if i != j]
    codes = np.arange(1 << len(cells), dtype=np.int64)
    adj = np.zeros((codes.size, n, n), dtype=np.uint8)
    for b, (i, j) in enumerate(cells):
        adj[:, i, j] = (codes >> b) & 1
    power = adj.copy()
    for _ in range(n - 1):
        power = np.minimum(np.matmul(power, adj, dtype=np.uint16), 1).astype(np.uint8)
    acyclic = adj[~power.any(axis=(1, 2))]
    weights = 1 << np.arange(n * n - 1, -1, -1, dtype=np.int64)
    keys = sorted(int(k) for k in acyclic.reshape(len(acyclic), -1).astype(np.int64) @ weights)
    return DagCensus(n, keys, [k.bit_count() for k in keys])


def chi_square_uniform(counts: Sequence[int]) -> tuple[float, int]:
    """Pearson statistic of ``counts`` against the uniform law, with ``cells - 1`` dof."""
    c = np.asarray(counts, dtype=float)
    if c.ndim != 1 or c.size < 2:
        raise ValueError("need at least two cells")
    if (c < 0).any():
        raise ValueError("counts must be non-negative")
    total = c.sum()
    if total < 10 * c.size:
        raise ValueError(f"{int(total)} samples is too few for {c.size} cells (need 10 per cell)")
    expected = total / c.size
    return float(((c - expected) ** 2).sum() / expected), c.size - 1


def chi_square_expected(counts: Sequence[int], probs: Sequence[float]) -> tuple[float, int]:
    """Pearson statistic against arbitrary cell probabilities, merging thin cells.

    Cells are scanned in order and pooled until each pool expects at least
    ``MIN_EXPECTED`` observations; a thin remainder joins the last pool.
    """
    c = np.asarray(counts, dtype=float)
    p = np.asarray(probs, dtype=float)
    if c.shape != p.shape:
        raise ValueError("counts and probabilities differ in length")
    p = p / p.sum()
    total = c.sum()
    pooled_c, pooled_e = [], []
    acc_c = acc_e = 0.0
    for ci, ei in zip(c, p * total):
        acc_c += ci
        acc_e += ei
        if acc_e >= MIN_EXPECTED:
            pooled_c.append(acc_c)
            pooled_e.append(acc_e)
            acc_c = acc_e = 0.0
    if acc_e > 0 or acc_c > 0:
        if pooled_e:
            pooled_c[-1] += acc_c
            pooled_e[-1] += acc_e
        else:
            pooled_c.append(acc_c)
            pooled_e.append(acc_e)
    if len(pooled_e) < 2:
        raise ValueError("sample too small: fewer than two cells after merging")
    oc, ex = np.array(pooled_c), np.array(pooled_e)
    return float(((oc - ex) ** 2 / ex).sum()), len(ex) - 1


def chi_square_two_sample(a: Sequence[int], b: Sequence[int]) -> tuple[float, int]:
    """Homogeneity statistic for two count vectors over the same cells.

    Cells empty in both samples are dropped.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("count vectors differ in length")
    keep = (a + b) > 0
    a, b = a[keep], b[keep]
    na, nb = a.sum(), b.sum()
    if na == 0 or nb == 0 or a.size < 2:
        raise ValueError("both samples need mass in at least two cells")
    ka, kb = math.sqrt(nb / na), math.sqrt(na / nb)
    stat = ((ka * a - kb * b) ** 2 / (a + b)).sum()
    return float(stat), a.size - 1


def p_value(stat: float, dof: int) -> float:
    """Upper-tail probability of the chi-square law."""
    return float(stats.chi2.sf(stat, dof))


def critical_value(dof: int, level: float = 0.001) -> float:
    """Quantile of order ``1 - level`` of the chi-square law."""
    return float(stats.chi2.isf(level, dof))


@dataclass
class WeightedLawReport:
    n: int
    w: float
    observed: list[int]
    expected: list[float]
    statistic: float
    dof: int

    @property
    def p_value(self) -> float:
        return p_value(self.statistic, self.dof)


def edge_count_law(n: int, w: float) -> list[float]:
    """``P[m edges] = d_{n,m} w^m / sum_m d_{n,m} w^m`` among DAGs with ``n`` vertices."""
    hist = enumerate_all_dags(n).edge_histogram()
    weights = [d * w ** m for m, d in enumerate(hist)]
    total = sum(weights)
    return [x / total for x in weights]


def weighted_law_check(samples: Sequence[LabelledDag], w: float) -> WeightedLawReport:
    """Compare the edge-count histogram of fixed-size samples with the weighted law."""
    if not samples:
        raise ValueError("no samples")
    n = samples[0].num_vertices
    if any(g.num_vertices != n for g in samples):
        raise ValueError("all samples must have the same number of vertices")
    if n > 4:
        raise ValueError(f"weighted law check supports n <= 4, got {n}")
    probs = edge_count_law(n, w)
    observed = [0] * len(probs)
    for g in samples:
        observed[g.num_edges] += 1
    if len(probs) < 2:
        return WeightedLawReport(n, w, observed, [float(len(samples))], 0.0, 0)
    stat, dof = chi_square_expected(observed, probs)
    return WeightedLawReport(n, w, observed, [p * len(samples) for p in probs], stat, dof)


def boltzmann_size_law(z: float, n_max: int, w: float = 1.0) -> list[float]:
    """``P[n vertices]`` for ``n = 0..n_max`` under the Boltzmann DAG model at ``(z, w)``.

    Uses ``count_dags`` when ``w = 1`` and the census edge polynomials
    otherwise (so ``n_max <= 5`` then).
    """
    norm = eval_dag(GgfParams(z, w))
    out = []
    for n in range(n_max + 1):
        if w == 1.0:
            coeff = count_dags(n) / (2 ** math.comb(n, 2) * math.factorial(n))
        else:
            hist = enumerate_all_dags(n).edge_histogram()
            coeff = sum(d * w ** m for m, d in enumerate(hist)) / (
                (1.0 + w) ** math.comb(n, 2) * math.factorial(n))
        out.append(z ** n * coeff / norm)
    return out
