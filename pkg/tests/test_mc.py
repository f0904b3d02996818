import json
import math

import numpy as np
import pytest

from powermap.classical import Decomposition, Ominus, Oplus, ReU, Sp, U, decompose_orthogonal, decompose_unitary
from powermap.mc import (AngleSample, StatReport, compare, lhs_angles, power_angles, sample_decomposition,
                         sample_haar, trace_statistics, wrap)
from powermap.oracle import density, trace_square_moment


def test_power_angles_arithmetic():
    s = AngleSample(np.array([[math.pi / 2, -math.pi / 2]]), True)
    assert power_angles(s, 1) is s
    assert np.allclose(power_angles(s, 2).angles, [[math.pi, math.pi]])
    assert np.allclose(power_angles(s, 4).angles, [[0.0, 0.0]])
    w = wrap(np.array([math.pi, -math.pi, 3 * math.pi, 0.1]))
    assert np.all(w > -math.pi) and np.all(w <= math.pi)
    assert np.isclose(w[1], math.pi)
    with pytest.raises(ValueError):
        power_angles(s, 0)


def test_sample_shapes():
    assert sample_haar(U(0), 1, 5).width == 0
    s = sample_haar(Oplus(2), 1, 1000)
    assert s.width == 2 and s.pair_symmetric and s.is_pair_closed()
    # SO(2) rotation angle is uniform
    assert abs(np.cos(s.angles[:, 0]).mean()) < 4 / math.sqrt(2000)
    for c, w in [(Ominus(4), 2), (Oplus(5), 4), (Ominus(5), 4), (Sp(4), 4), (ReU(3), 6), (Ominus(2), 0)]:
        x = sample_haar(c, 2, 50)
        assert x.width == w and x.is_pair_closed(1e-6)
    d = sample_decomposition(Decomposition.of(U(1), U(1)), 3, 100)
    assert d.width == 2 and not d.pair_symmetric
    d = sample_decomposition(Decomposition.of(Oplus(2), Ominus(3)), 3, 100)
    assert d.width == 4 and d.is_pair_closed(1e-6)
    assert sample_decomposition(Decomposition(()), 3, 10).width == 0


def test_forced_eigenvalues_stripped_by_count():
    # O-(2n) has eigenvalues +1 and -1; what remains has no angle at 0 or pi
    s = sample_haar(Ominus(6), 5, 500)
    assert np.all(np.abs(s.angles) > 1e-6)
    assert np.all(np.abs(np.abs(s.angles) - math.pi) > 1e-6)


def test_pair_symmetry_preserved_by_powers():
    for c in [Oplus(6), Ominus(7), Sp(4), ReU(2)]:
        s = sample_haar(c, 9, 200)
        for p in range(1, 7):
            assert power_angles(s, p).is_pair_closed(1e-6)


def test_unitary_trace_mean_zero():
    s = trace_statistics(sample_haar(U(4), 11, 100_000), 3)
    se = s[:, :3].std(axis=0) / math.sqrt(100_000)
    assert np.all(np.abs(s[:, :3].mean(axis=0)) < 4 * se)


@pytest.mark.parametrize("n", range(1, 7))
def test_haar_sampler_against_exact_moments(n):
    s = trace_statistics(sample_haar(U(n), 100 + n, 200_000), 4)
    d = density(U(n))
    for k in range(1, 5):
        col = s[:, 4 + k - 1]
        exact = float(trace_square_moment(d, k))
        assert abs(col.mean() - exact) < 4 * col.std() / math.sqrt(len(col)), k


def test_compare_examples():
    r = compare(U(4), 2, Decomposition.of(U(2), U(2)), 200_000, 6, seed=1)
    assert r.max_abs_z < 4 and r.passes()
    r = compare(Oplus(6), 3, Decomposition.of(Oplus(2), ReU(2)), 200_000, 6, seed=2)
    assert r.max_abs_z < 4
    r = compare(U(3), 2, Decomposition.of(U(3)), 200_000, 6, seed=3)
    assert r.max_abs_z > 10 and not r.passes()


def test_symplectic_samplers_agree():
    r = compare(Sp(4), 1, Decomposition.of(Ominus(6)), 100_000, 6, seed=4)
    assert r.passes()


def test_degenerate_statistics_reported_as_exact():
    r = compare(Ominus(2), 3, Decomposition.of(Ominus(2)), 2000, 2, seed=5)
    assert all(l.z is None and l.exact_match for l in r.lines)
    assert r.passes()


def test_reproducible_and_worker_independent():
    a = compare(U(3), 2, decompose_unitary(3, 2), 25_000, 4, seed=77)
    b = compare(U(3), 2, decompose_unitary(3, 2), 25_000, 4, seed=77)
    c = compare(U(3), 2, decompose_unitary(3, 2), 25_000, 4, seed=77, workers=2)
    assert a.to_json() == b.to_json() == c.to_json()
    d = compare(U(3), 2, decompose_unitary(3, 2), 25_000, 4, seed=78)
    assert d.to_json() != a.to_json()
    # a precomputed lhs sample gives the identical report
    e = compare(U(3), 2, decompose_unitary(3, 2), 25_000, 4, seed=77, lhs_sample=lhs_angles(U(3), 25_000, 77))
    assert e.to_json() == a.to_json()


def test_report_serialization():
    r = compare(Oplus(5), 2, decompose_orthogonal(5, 1, 2), 5000, 3, seed=6)
    back = StatReport.from_dict(json.loads(r.to_json()))
    assert back == r
    lines = r.to_csv().strip().splitlines()
    assert lines[0].startswith("statistic,") and len(lines) == 1 + 6
    assert all(l.count == 5000 for l in r.lines)


def test_small_sample_rejected():
    with pytest.raises(ValueError):
        compare(U(2), 1, decompose_unitary(2, 1), 10)
