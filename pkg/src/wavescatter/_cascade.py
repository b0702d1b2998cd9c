"""
Depth-first Morlet cascade shared by the 1D and 2D transforms.

A schedule is a tuple of subtrees, one per first-order filter. Each node
records which filter to apply, the log2 stride at which its modulus is
held, and the output row it feeds. Subtrees are independent, so they may
be evaluated by a thread pool; results are written back by row index,
which keeps the output bitwise identical whatever the worker count.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .output import LiveCounter, ScatteringOutput, WorkerPeaks
from .spectral import (complex_modulus, dft_forward, dft_inverse,
                       periodize_spectrum)


@dataclass(frozen=True)
class Node:
    filter_index: int
    log2_stride: int
    row: int


@dataclass(frozen=True)
class Subtree:
    node: Node
    children: tuple


def check_signal(x, shape):
    x = np.asarray(x)
    if np.iscomplexobj(x):
        raise ValueError('input must be real-valued')
    if x.shape != tuple(shape):
        raise ValueError('input shape {} does not match plan shape {}'
                         .format(x.shape, tuple(shape)))
    x = x.astype(float)
    if not np.all(np.isfinite(x)):
        raise ValueError('input contains non-finite values')
    return x


def _average(U_f, phi, k, J):
    # U_f is held at log2 stride k; bring phi * U to stride J
    y = periodize_spectrum(U_f * phi.kernel(k), 2 ** (J - k))
    return dft_inverse(y).real


def _run_subtree(X, sub, bank, J, counter):
    rows = []
    node = sub.node
    psi1 = bank.first_order[node.filter_index]
    k1 = node.log2_stride
    z1 = dft_inverse(periodize_spectrum(X * psi1.spectra[0], 2 ** k1))
    counter.acquire()
    U1 = complex_modulus(z1)
    counter.acquire()
    del z1
    counter.release()
    U1_f = dft_forward(U1)
    counter.acquire()
    del U1
    counter.release()
    rows.append((node.row, _average(U1_f, bank.lowpass, k1, J)))
    for child in sub.children:
        psi2 = bank.second_order[child.filter_index]
        k2 = child.log2_stride
        z2 = dft_inverse(periodize_spectrum(U1_f * psi2.kernel(k1),
                                            2 ** (k2 - k1)))
        counter.acquire()
        U2 = complex_modulus(z2)
        counter.acquire()
        del z2
        counter.release()
        U2_f = dft_forward(U2)
        counter.acquire()
        del U2
        counter.release()
        rows.append((child.row, _average(U2_f, bank.lowpass, k2, J)))
        del U2_f
        counter.release()
    del U1_f
    counter.release()
    return rows


def run_cascade(x, bank, schedule, meta, threads=1):
    J = bank.J
    out_shape = tuple(n // 2 ** J for n in x.shape)
    coefficients = np.empty((len(meta),) + out_shape)
    X = dft_forward(x)
    coefficients[0] = _average(X, bank.lowpass, 0, J)
    peaks = WorkerPeaks()

    def work(sub):
        counter = LiveCounter()
        rows = _run_subtree(X, sub, bank, J, counter)
        peaks.record(counter.peak)
        return rows

    if threads is None or threads <= 1 or len(schedule) <= 1:
        results = [work(sub) for sub in schedule]
    else:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            results = list(pool.map(work, schedule))
    for rows in results:
        for row, values in rows:
            coefficients[row] = values
    return ScatteringOutput(coefficients, tuple(meta), peaks.stats())
