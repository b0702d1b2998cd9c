"""
Solid harmonic scattering for volumes.

The non-linearity aggregates the 2l + 1 responses of a ``(j, l)``
channel into their Euclidean norm, ``sqrt(sum_m |x * psi_{j,l,m}|^2)``,
which makes every channel covariant under rotations. All intermediate
signals are kept at full resolution; only the lowpass outputs are
subsampled by ``2**J``.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._cascade import check_signal
from .filterbank import build_bank_3d
from .output import LiveCounter, PathMeta, ScatteringOutput, WorkerPeaks
from .spectral import (complex_modulus, dft_forward, dft_inverse,
                       is_power_of_two, periodize_spectrum)

__all__ = ['Plan3D', 'plan_3d', 'scatter_3d', 'paths_3d', 'Scattering3D']


@dataclass(frozen=True, eq=False)
class Plan3D:
    shape: tuple
    J: int
    L_max: int
    bank: object
    paths: tuple
    channels: dict
    schedule: tuple

    @property
    def output_shape(self):
        return tuple(n // 2 ** self.J for n in self.shape)


def plan_3d(shape, J, L_max=2):
    """
    Plan a 3D transform.

    Order-1 channels are sorted by ``(l, j)``; order-2 channels pair
    ``(j1, l)`` with ``(j2, l)`` for ``j2 > j1`` and are sorted by
    ``(l, j1, j2)``.
    """
    shape = tuple(int(n) for n in shape)
    J, L_max = int(J), int(L_max)
    if len(shape) != 3:
        raise ValueError('shape must have three entries, got {}'
                         .format(shape))
    if J < 1:
        raise ValueError('J must be at least 1, got J={}'.format(J))
    for n in shape:
        if not is_power_of_two(n):
            raise ValueError('axis length {} is not a power of two'.format(n))
        if n % 2 ** J:
            raise ValueError('axis length {} is not divisible by 2**J = {}'
                             .format(n, 2 ** J))
    if L_max < 0:
        raise ValueError('L_max must be non-negative')
    bank = build_bank_3d(shape, J, L_max)
    channels = {}
    for i, f in enumerate(bank.first_order):
        channels.setdefault((f.spec.j, f.spec.l), []).append(i)
    channels = {k: tuple(v) for k, v in channels.items()}

    stride = 2 ** J
    meta = [PathMeta(0, output_stride=stride)]
    order1 = [(j, l) for l in range(L_max + 1) for j in range(J)]
    meta += [PathMeta(1, key, output_stride=stride) for key in order1]
    rows1 = {key: 1 + i for i, key in enumerate(order1)}
    row = 1 + len(order1)
    children = {key: [] for key in order1}
    for l in range(L_max + 1):
        for j1 in range(J):
            for j2 in range(j1 + 1, J):
                meta.append(PathMeta(2, (j1, l), (j2, l),
                                     output_stride=stride))
                children[(j1, l)].append(((j2, l), row))
                row += 1
    schedule = tuple((key, rows1[key], tuple(children[key]))
                     for key in order1)
    return Plan3D(shape, J, L_max, bank, tuple(meta), channels, schedule)


def paths_3d(plan):
    return list(plan.paths)


def _aggregate(signal_f, filters, counter):
    acc = None
    for f in filters:
        z = dft_inverse(signal_f * f.spectra[0])
        counter.acquire()
        if acc is None:
            acc = complex_modulus(z) ** 2
            counter.acquire()
        else:
            acc += complex_modulus(z) ** 2
        del z
        counter.release()
    np.sqrt(acc, out=acc)
    return acc


def _average(U_f, phi, J):
    return dft_inverse(periodize_spectrum(U_f * phi.spectra[0],
                                          2 ** J)).real


def scatter_3d(plan, x, threads=1):
    """
    Coefficients of shape ``(P, D1 / 2**J, D2 / 2**J, D3 / 2**J)``.

    Rows follow ``plan.paths``: the lowpass average of ``x``, then the
    order-1 and order-2 channels.
    """
    x = check_signal(x, plan.shape)
    bank, J = plan.bank, plan.J
    coefficients = np.empty((len(plan.paths),) + plan.output_shape)
    X = dft_forward(x)
    coefficients[0] = _average(X, bank.lowpass, J)
    peaks = WorkerPeaks()

    def filters(key):
        return [bank.first_order[i] for i in plan.channels[key]]

    def work(item):
        key, row1, children = item
        counter = LiveCounter()
        rows = []
        U1 = _aggregate(X, filters(key), counter)
        U1_f = dft_forward(U1)
        counter.acquire()
        del U1
        counter.release()
        rows.append((row1, _average(U1_f, bank.lowpass, J)))
        for key2, row2 in children:
            U2 = _aggregate(U1_f, filters(key2), counter)
            U2_f = dft_forward(U2)
            counter.acquire()
            del U2
            counter.release()
            rows.append((row2, _average(U2_f, bank.lowpass, J)))
            del U2_f
            counter.release()
        del U1_f
        counter.release()
        peaks.record(counter.peak)
        return rows

    if threads is None or threads <= 1:
        results = [work(item) for item in plan.schedule]
    else:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            results = list(pool.map(work, plan.schedule))
    for rows in results:
        for row, values in rows:
            coefficients[row] = values
    return ScatteringOutput(coefficients, plan.paths, peaks.stats())


class Scattering3D:
    """3D solid harmonic scattering; ``S(x)`` returns the coefficients."""

    def __init__(self, J, shape, L_max=2, threads=1):
        self.plan = plan_3d(shape, J, L_max)
        self.threads = threads

    @property
    def meta(self):
        return self.plan.paths

    def transform(self, x):
        return scatter_3d(self.plan, x, self.threads)

    def __call__(self, x):
        x = np.asarray(x)
        batch = x.shape[:-3]
        flat = x.reshape((-1,) + x.shape[-3:])
        out = np.stack([self.transform(v).coefficients for v in flat])
        return out.reshape(batch + out.shape[1:])
