"""
Second-order 1D scattering with Morlet wavelets.

The cascade is evaluated depth-first: for each first-order wavelet the
envelope ``|x * psi1|`` is computed at its critical rate, averaged, and
decomposed by every admissible second-order wavelet before the next
first-order wavelet is touched.
"""
from dataclasses import dataclass

import numpy as np

from ._cascade import Node, Subtree, check_signal, run_cascade
from .filterbank import build_bank_1d
from .output import PathMeta
from .spectral import is_power_of_two

__all__ = ['Plan1D', 'plan_1d', 'scatter_1d', 'paths_1d', 'Scattering1D']


@dataclass(frozen=True, eq=False)
class Plan1D:
    N: int
    J: int
    Q: int
    oversampling: int
    bank: object
    paths: tuple
    schedule: tuple

    @property
    def shape(self):
        return (self.N,)

    @property
    def output_shape(self):
        return (self.N // 2 ** self.J,)


def plan_1d(N, J, Q=1, oversampling=0):
    """
    Build the filter bank and the path schedule for signals of length N.

    Second-order paths keep ``(lambda1, lambda2)`` only when the octave of
    ``lambda2`` exceeds the octave ``q // Q`` of ``lambda1``. After the
    first modulus a signal is held at stride
    ``2**max(j1 - oversampling, 0)``; every output is at stride ``2**J``.
    """
    N, J, Q, oversampling = int(N), int(J), int(Q), int(oversampling)
    if not is_power_of_two(N) or N < 2:
        raise ValueError('N must be a power of two, got {}'.format(N))
    if J < 1 or 2 ** J > N:
        raise ValueError('J must satisfy 1 <= J <= log2(N), got J={}'
                         .format(J))
    if Q < 1:
        raise ValueError('Q must be at least 1, got {}'.format(Q))
    if oversampling < 0:
        raise ValueError('oversampling must be non-negative')
    bank = build_bank_1d(N, J, Q)
    stride = 2 ** J
    n1 = len(bank.first_order)
    octaves1 = [f.spec.j for f in bank.first_order]
    octaves2 = [f.spec.j for f in bank.second_order]

    meta = [PathMeta(0, output_stride=stride)]
    meta += [PathMeta(1, q, output_stride=stride) for q in range(n1)]
    schedule = []
    row = 1 + n1
    for q1 in range(n1):
        j1 = octaves1[q1]
        k1 = max(j1 - oversampling, 0)
        children = []
        for q2, j2 in enumerate(octaves2):
            if j2 > j1:
                children.append(Node(q2, max(j2 - oversampling, 0), row))
                meta.append(PathMeta(2, q1, q2, output_stride=stride))
                row += 1
        schedule.append(Subtree(Node(q1, k1, 1 + q1), tuple(children)))
    return Plan1D(N, J, Q, oversampling, bank, tuple(meta), tuple(schedule))


def paths_1d(plan):
    return list(plan.paths)


def scatter_1d(plan, x, threads=1):
    """
    Scattering coefficients of a real signal.

    Parameters
    ----------
    plan : Plan1D
    x : array_like
        real signal of length ``plan.N``
    threads : int, optional
        worker count for the first-order subtrees. Output is identical for
        every value.

    Returns
    -------
    ScatteringOutput
        coefficients of shape ``(P, N / 2**J)`` with one row per path of
        ``plan.paths``
    """
    x = check_signal(x, plan.shape)
    return run_cascade(x, plan.bank, plan.schedule, plan.paths, threads)


class Scattering1D:
    """
    1D scattering transform object.

    >>> S = Scattering1D(J=3, shape=(64,))
    >>> S(np.zeros(64)).shape
    (7, 8)

    Inputs may carry leading batch dimensions.
    """

    def __init__(self, J, shape, Q=1, oversampling=0, threads=1):
        if isinstance(shape, int):
            shape = (shape,)
        if len(shape) != 1:
            raise ValueError('Scattering1D expects shape=(length,)')
        self.plan = plan_1d(shape[0], J, Q, oversampling)
        self.threads = threads

    @property
    def meta(self):
        return self.plan.paths

    def transform(self, x):
        return scatter_1d(self.plan, x, self.threads)

    def __call__(self, x):
        x = np.asarray(x)
        batch = x.shape[:-1]
        flat = x.reshape((-1,) + x.shape[-1:])
        out = np.stack([self.transform(v).coefficients for v in flat])
        return out.reshape(batch + out.shape[1:])
