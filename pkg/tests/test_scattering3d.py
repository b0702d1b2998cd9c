import numpy as np
import pytest

from wavescatter import Scattering3D, paths_3d, plan_3d, scatter_3d
from wavescatter.filterbank import littlewood_paley
from wavescatter.oracle import direct_periodic_convolution, naive_idft
from wavescatter.output import LiveCounter
from wavescatter.scattering3d import _aggregate
from wavescatter.spectral import dft_forward

from lattice import rotate_3d, rotations_3d
from path_enumeration import closed_form_3d, enumerate_3d


@pytest.fixture(scope='module')
def plan():
    return plan_3d((16, 16, 16), 2, 2)


def test_paths(plan):
    meta = paths_3d(plan)
    assert len(meta) == 10 == enumerate_3d(2, 2) == closed_form_3d(2, 2)
    assert [m.lambda1 for m in meta if m.order == 1] == \
        [(0, 0), (1, 0), (0, 1), (1, 1), (0, 2), (1, 2)]
    order2 = [(m.lambda1, m.lambda2) for m in meta if m.order == 2]
    assert len(order2) == 3
    assert all(b[1] == a[1] and b[0] > a[0] for a, b in order2)


def test_counts():
    assert len(plan_3d((8, 8, 8), 1, 3).paths) == 1 + 4
    assert len(plan_3d((16, 16, 16), 3, 0).paths) == closed_form_3d(3, 0)


@pytest.mark.parametrize('shape,J', [((12, 16, 16), 2), ((8, 8, 8), 4),
                                     ((8, 8), 1)])
def test_shape_contract(shape, J):
    with pytest.raises(ValueError):
        plan_3d(shape, J, 1)


def test_zero_and_constant(plan):
    assert not scatter_3d(plan, np.zeros((16,) * 3)).coefficients.any()
    s = scatter_3d(plan, np.full((16,) * 3, 3.0)).coefficients
    assert s.shape == (10, 4, 4, 4)
    assert np.abs(s[0] - 3).max() <= 1e-10
    assert np.abs(s[1:]).max() <= 3e-10


def test_aggregation_matches_direct_sum(rng):
    p = plan_3d((8, 8, 8), 2, 2)
    x = rng.standard_normal((8, 8, 8))
    X = dft_forward(x)
    for key, idx in p.channels.items():
        filters = [p.bank.first_order[i] for i in idx]
        U = _aggregate(X, filters, LiveCounter())
        terms = [direct_periodic_convolution(x, naive_idft(f.spectra[0]))
                 for f in filters]
        expected = np.sqrt(sum(np.abs(t) ** 2 for t in terms))
        assert np.linalg.norm(U - expected) <= 1e-8 * np.linalg.norm(expected)
        assert U.min() >= 0


def test_rotation_consistency(plan, rng):
    x = rng.standard_normal((16, 16, 16))
    a = scatter_3d(plan, x).coefficients
    for perm, flips in rotations_3d():
        b = scatter_3d(plan, rotate_3d(x, perm, flips)).coefficients
        assert np.abs(b - rotate_3d(a, perm, flips)).max() <= 1e-8


def test_shift_by_stride_multiple(plan, rng):
    x = rng.standard_normal((16, 16, 16))
    a = scatter_3d(plan, x).coefficients
    b = scatter_3d(plan, np.roll(x, 4, axis=1)).coefficients
    assert np.abs(b - np.roll(a, 1, axis=2)).max() <= 1e-12


def test_nonexpansive(plan, rng):
    _, B = littlewood_paley(plan.bank)
    for _ in range(5):
        x, y = rng.standard_normal((2, 16, 16, 16))
        d = scatter_3d(plan, x).coefficients - scatter_3d(plan, y).coefficients
        lhs = np.sqrt(8 ** plan.J * np.sum(d ** 2))
        assert lhs <= 1.01 * np.sqrt(B) * np.linalg.norm(x - y)


def test_peak_and_threads(plan, rng):
    x = rng.standard_normal((16, 16, 16))
    a = scatter_3d(plan, x)
    b = scatter_3d(plan, x, threads=4)
    assert a.stats.peak_live_intermediates <= 3
    assert b.stats.per_worker_peak <= 3
    assert np.array_equal(a.coefficients, b.coefficients)


def test_object_interface(rng):
    S = Scattering3D(J=1, shape=(8, 8, 8), L_max=1)
    x = rng.standard_normal((2, 8, 8, 8))
    out = S(x)
    assert out.shape == (2, len(S.meta), 4, 4, 4)
    assert np.array_equal(out[0], S.transform(x[0]).coefficients)
