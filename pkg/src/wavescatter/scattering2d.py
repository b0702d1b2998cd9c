"""Second-order 2D scattering with oriented Morlet wavelets."""
from dataclasses import dataclass

import numpy as np

from ._cascade import Node, Subtree, check_signal, run_cascade
from .filterbank import build_bank_2d
from .output import PathMeta
from .spectral import is_power_of_two

__all__ = ['Plan2D', 'plan_2d', 'scatter_2d', 'paths_2d', 'Scattering2D',
           'path_count_2d']


@dataclass(frozen=True, eq=False)
class Plan2D:
    shape: tuple
    J: int
    L: int
    oversampling: int
    bank: object
    paths: tuple
    schedule: tuple

    @property
    def output_shape(self):
        return tuple(n // 2 ** self.J for n in self.shape)


def path_count_2d(J, L):
    return 1 + J * L + L * L * J * (J - 1) // 2


def plan_2d(shape, J, L=8, oversampling=0):
    """
    Plan a 2D transform on an ``(H, W)`` grid.

    Both axes must be powers of two divisible by ``2**J``. Paths are
    indexed by ``(j, t)`` with orientation ``theta = pi t / L``; an
    order-2 path requires ``j2 > j1`` and leaves ``t2`` free.
    """
    shape = tuple(int(n) for n in shape)
    J, L, oversampling = int(J), int(L), int(oversampling)
    if len(shape) != 2:
        raise ValueError('shape must be (H, W), got {}'.format(shape))
    if J < 1:
        raise ValueError('J must be at least 1, got J={}'.format(J))
    for n in shape:
        if not is_power_of_two(n):
            raise ValueError('axis length {} is not a power of two'.format(n))
        if n % 2 ** J:
            raise ValueError('axis length {} is not divisible by 2**J = {}'
                             .format(n, 2 ** J))
    if L < 1:
        raise ValueError('L must be at least 1, got {}'.format(L))
    if oversampling < 0:
        raise ValueError('oversampling must be non-negative')
    bank = build_bank_2d(shape, J, L)
    stride = 2 ** J
    keys = [(j, t) for j in range(J) for t in range(L)]
    meta = [PathMeta(0, output_stride=stride)]
    meta += [PathMeta(1, key, output_stride=stride) for key in keys]
    schedule = []
    row = 1 + len(keys)
    for i1, (j1, t1) in enumerate(keys):
        children = []
        for i2, (j2, t2) in enumerate(keys):
            if j2 > j1:
                children.append(Node(i2, max(j2 - oversampling, 0), row))
                meta.append(PathMeta(2, (j1, t1), (j2, t2),
                                     output_stride=stride))
                row += 1
        node = Node(i1, max(j1 - oversampling, 0), 1 + i1)
        schedule.append(Subtree(node, tuple(children)))
    return Plan2D(shape, J, L, oversampling, bank, tuple(meta),
                  tuple(schedule))


def paths_2d(plan):
    return list(plan.paths)


def scatter_2d(plan, x, threads=1):
    """Coefficients of shape ``(P, H / 2**J, W / 2**J)``."""
    x = check_signal(x, plan.shape)
    return run_cascade(x, plan.bank, plan.schedule, plan.paths, threads)


class Scattering2D:
    """2D scattering transform object; ``S(x)`` returns the coefficients."""

    def __init__(self, J, shape, L=8, oversampling=0, threads=1):
        self.plan = plan_2d(shape, J, L, oversampling)
        self.threads = threads

    @property
    def meta(self):
        return self.plan.paths

    def transform(self, x):
        return scatter_2d(self.plan, x, self.threads)

    def __call__(self, x):
        x = np.asarray(x)
        batch = x.shape[:-2]
        flat = x.reshape((-1,) + x.shape[-2:])
        out = np.stack([self.transform(v).coefficients for v in flat])
        return out.reshape(batch + out.shape[1:])
