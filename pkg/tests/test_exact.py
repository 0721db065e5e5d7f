import math
from collections import Counter

import numpy as np
import pytest

from boltzdag.boltzmann import assemble_leaps
from boltzdag.exact import (LeapSequence, _leap_pieces, inter_leap_pairs, sample_exact_leapfrog,
                            sample_exact_rejection, sample_leap_sequence)
from boltzdag.exceptions import DomainError
from boltzdag.randomness import RandomSource
from boltzdag.verification import (chi_square_expected, chi_square_uniform, critical_value,
                                   enumerate_all_dags, p_value, weighted_law_check)

SAMPLERS = [sample_exact_rejection, sample_exact_leapfrog]


@pytest.mark.parametrize("fn", SAMPLERS)
def test_single_vertex(fn):
    src = RandomSource(0)
    for _ in range(20):
        g, _ = fn(1, 1.0, src)
        assert g.num_vertices == 1 and g.num_edges == 0


@pytest.mark.parametrize("fn", SAMPLERS)
@pytest.mark.parametrize("n", [2, 5, 17, 64, 130])
def test_size_and_validity(fn, n):
    src = RandomSource(n)
    for _ in range(5):
        g, rep = fn(n, 1.0, src)
        assert g.num_vertices == n and g.is_valid()
        assert rep.rejections >= 0 and sum(rep.sizes) == n
        assert rep.bits_consumed > 0 or n == 1


@pytest.mark.parametrize("fn", SAMPLERS)
def test_two_vertices_thirds(fn):
    src = RandomSource(3)
    n = 100_000
    c = Counter(tuple(fn(2, 1.0, src)[0].edges) for _ in range(n))
    assert set(c) == {(), ((1, 2),), ((2, 1),)}
    sigma = math.sqrt(2 / 9 / n)
    assert all(abs(v / n - 1 / 3) < 3 * sigma for v in c.values())


@pytest.mark.parametrize("fn", SAMPLERS)
def test_uniform_on_three(fn):
    census = enumerate_all_dags(3)
    src = RandomSource(4)
    counts = census.tally(fn(3, 1.0, src)[0] for _ in range(50_000))
    stat, dof = chi_square_uniform(counts)
    assert dof == 24 and stat < critical_value(dof)


@pytest.mark.parametrize("fn", SAMPLERS)
@pytest.mark.parametrize("w", [3.0, 0.3])
def test_weighted_law(fn, w):
    """Probability proportional to w^edges among DAGs of a fixed size."""
    src = RandomSource(5)
    samples = [fn(3, w, src)[0] for _ in range(40_000)]
    assert weighted_law_check(samples, w).p_value > 0.001
    census = enumerate_all_dags(3)
    probs = [w ** m for m in census.edge_counts]
    stat, dof = chi_square_expected(census.tally(samples), probs)
    assert p_value(stat, dof) > 0.001


def test_leap_sequence():
    seq, rejections = sample_leap_sequence(40, 1.0, RandomSource(6))
    assert isinstance(seq, LeapSequence)
    assert seq.total_vertices == 40 == sum(seq.sizes)
    assert rejections >= 0
    assert all(h.num_vertices >= 1 and h.is_valid() for h in seq.leaps)


def _suffix_sources(rows, start, n):
    covered = 0
    for r in rows[start:]:
        covered |= r
    return [p for p in range(start, n) if not covered >> p & 1]


def test_suffix_source_bookkeeping():
    """Incrementally tracked suffix sources equal sources recomputed from scratch."""
    src = RandomSource(7)
    for n in (10, 60, 200):
        pieces, _ = _leap_pieces(n, 1.0, src)
        rows, labels, first_sources, trials, forced = assemble_leaps(pieces, 1.0, src)
        starts = np.cumsum([0] + [len(p[0]) for p in pieces])
        for i, piece in enumerate(pieces):
            tracked = [p + int(starts[i]) for p in piece[2]]
            assert _suffix_sources(rows, int(starts[i]), n) == tracked
            if i + 1 < len(pieces):
                nxt = [p + int(starts[i + 1]) for p in pieces[i + 1][2]]
                assert all(rows[int(starts[i])] >> p & 1 for p in nxt)
        assert first_sources == list(pieces[0][2])
        sizes = [len(p[0]) for p in pieces]
        assert trials + forced == inter_leap_pairs(sizes)


def test_finish_phase_counter_identity():
    src = RandomSource(8)
    for n in (50, 300):
        g, rep = sample_exact_leapfrog(n, 1.0, src)
        inner = sum(math.comb(s, 2) for s in rep.sizes)
        assert rep.edge_trials == math.comb(n, 2) - inner - rep.forced_edges


@pytest.mark.parametrize("n", [100, 1000])
def test_mean_leap_size_is_small(n):
    src = RandomSource(9)
    sizes = []
    for _ in range(10 if n == 1000 else 40):
        sizes.extend(sample_exact_leapfrog(n, 1.0, src)[1].sizes)
    assert np.mean(sizes) < 10


def test_rejection_reports_layers():
    g, rep = sample_exact_rejection(30, 1.0, RandomSource(10))
    from boltzdag.graph import root_layering
    assert tuple(rep.sizes) == root_layering(g).sizes


@pytest.mark.parametrize("fn", SAMPLERS)
def test_argument_validation(fn):
    with pytest.raises(ValueError):
        fn(0, 1.0)
    with pytest.raises(ValueError):
        fn(2.5, 1.0)
    with pytest.raises(DomainError):
        fn(3, 0.0)


def test_reproducible():
    a = sample_exact_leapfrog(50, 1.0, RandomSource(11))
    b = sample_exact_leapfrog(50, 1.0, RandomSource(11))
    assert a[0] == b[0] and a[1].bits_consumed == b[1].bits_consumed
