"""Path metadata, packed outputs and live-buffer accounting."""
import threading
from dataclasses import dataclass

import numpy as np

__all__ = ['PathMeta', 'ScatterStats', 'ScatteringOutput', 'LiveCounter']


@dataclass(frozen=True)
class PathMeta:
    """
    One scattering path.

    ``lambda1`` and ``lambda2`` identify the first- and second-order
    filters: an integer filter index in 1D, a ``(j, theta_index)`` pair in
    2D and a ``(j, l)`` channel in 3D.
    """
    order: int
    lambda1: object = None
    lambda2: object = None
    output_stride: int = 1

    def __post_init__(self):
        if self.order not in (0, 1, 2):
            raise ValueError('order must be 0, 1 or 2')
        if self.order == 0 and (self.lambda1 is not None
                                or self.lambda2 is not None):
            raise ValueError('order-0 path carries no filter index')
        if self.order == 1 and (self.lambda1 is None
                                or self.lambda2 is not None):
            raise ValueError('order-1 path needs lambda1 only')
        if self.order == 2 and (self.lambda1 is None or self.lambda2 is None):
            raise ValueError('order-2 path needs lambda1 and lambda2')

    def to_dict(self):
        def plain(v):
            return list(v) if isinstance(v, tuple) else v
        return {'order': self.order, 'lambda1': plain(self.lambda1),
                'lambda2': plain(self.lambda2),
                'output_stride': self.output_stride}


@dataclass(frozen=True)
class ScatterStats:
    # summed over workers, as the concurrency contract prescribes
    peak_live_intermediates: int
    # largest peak seen by any single worker; independent of thread count
    per_worker_peak: int
    workers: int = 1


@dataclass(frozen=True, eq=False)
class ScatteringOutput:
    coefficients: np.ndarray
    meta: tuple
    stats: ScatterStats

    def __len__(self):
        return len(self.meta)

    def rows(self, order):
        idx = [i for i, p in enumerate(self.meta) if p.order == order]
        return self.coefficients[idx]


class LiveCounter:
    """Counts intermediate buffers currently alive and remembers the peak."""

    def __init__(self):
        self.live = 0
        self.peak = 0

    def acquire(self, n=1):
        self.live += n
        if self.live > self.peak:
            self.peak = self.live

    def release(self, n=1):
        self.live -= n
        if self.live < 0:
            raise RuntimeError('released more buffers than acquired')


class WorkerPeaks:
    """Per-thread peak bookkeeping for parallel subtree evaluation."""

    def __init__(self):
        self._lock = threading.Lock()
        self._peaks = {}

    def record(self, peak):
        tid = threading.get_ident()
        with self._lock:
            self._peaks[tid] = max(self._peaks.get(tid, 0), peak)

    def stats(self):
        peaks = list(self._peaks.values()) or [0]
        return ScatterStats(sum(peaks), max(peaks), len(self._peaks) or 1)
