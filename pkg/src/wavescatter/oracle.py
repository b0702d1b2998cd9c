"""
Slow reference implementations used to check the fast transforms.

Nothing here goes through an FFT: the DFT is evaluated from its
definition and convolutions are explicit periodic sums. The reference
scattering evaluates each coefficient literally, layer after layer at
full resolution, and only subsamples the final averages. It shares the
filter bank with the fast path and nothing else.
"""
import functools

import numpy as np

from .output import LiveCounter, ScatteringOutput, ScatterStats

__all__ = ['naive_dft', 'naive_idft', 'direct_periodic_convolution',
           'reference_scatter']

# number of gathered products per block in direct_periodic_convolution
_BLOCK = 1 << 20


def _dft_along(x, axis, sign):
    n = x.shape[axis]
    k = np.arange(n)
    F = np.exp(sign * 2j * np.pi * np.outer(k, k) / n)
    return np.moveaxis(np.tensordot(F, x, axes=([1], [axis])), 0, axis)


def naive_dft(x):
    """DFT evaluated as explicit sums, one axis at a time."""
    X = np.asarray(x, dtype=complex)
    for axis in range(X.ndim):
        X = _dft_along(X, axis, -1)
    return X


def naive_idft(X):
    x = np.asarray(X, dtype=complex)
    for axis in range(x.ndim):
        x = _dft_along(x, axis, +1)
    return x / x.size


@functools.lru_cache(maxsize=8)
def _gather_blocks(shape, stride):
    """Flat indices of ``(n - m) mod N`` in blocks of source positions."""
    shape_a = np.array(shape)
    out_shape = tuple(n // stride for n in shape)
    n_idx = np.indices(out_shape).reshape(len(shape), -1) * stride
    m_idx = np.indices(shape).reshape(len(shape), -1)
    flat_stride = np.array([int(np.prod(shape[a + 1:]))
                            for a in range(len(shape))])
    block = max(1, _BLOCK // n_idx.shape[1])
    blocks = []
    for start in range(0, m_idx.shape[1], block):
        m = m_idx[:, start:start + block]
        diff = (n_idx[:, :, None] - m[:, None, :]) % shape_a[:, None, None]
        flat = np.tensordot(flat_stride, diff, axes=1).astype(np.int32)
        flat.setflags(write=False)
        blocks.append((start, flat))
    return out_shape, tuple(blocks)


def direct_periodic_convolution(x, h, stride=1):
    """
    Periodic convolution ``out[n] = sum_m x[m] h[(n - m) mod N]``.

    With ``stride > 1`` the sum is only evaluated for ``n`` on the
    subsampled lattice, which returns ``conv[::stride, ...]``.
    """
    x = np.asarray(x)
    h = np.asarray(h)
    if x.shape != h.shape:
        raise ValueError('shape mismatch: {} vs {}'.format(x.shape, h.shape))
    out_shape, blocks = _gather_blocks(tuple(int(n) for n in x.shape),
                                       int(stride))
    xf = x.reshape(-1)
    hf = h.reshape(-1)
    out = np.zeros(int(np.prod(out_shape)), dtype=np.result_type(x, h))
    for start, flat in blocks:
        out += hf[flat] @ xf[start:start + flat.shape[1]]
    return out.reshape(out_shape)


def _modulus(z):
    return np.sqrt(z.real ** 2 + z.imag ** 2)


def _channel(bank, order, key):
    """Filters making up one path index, located through their specs."""
    if bank.dim == 1:
        family = bank.first_order if order == 1 else bank.second_order
        return [family[key]]
    if bank.dim == 2:
        j, t = key
        L = bank.params['L']
        found = [f for f in bank.first_order
                 if f.spec.j == j and round(f.spec.theta * L / np.pi) == t]
    else:
        j, l = key
        found = [f for f in bank.first_order
                 if f.spec.j == j and f.spec.l == l]
    if not found:
        raise KeyError('no filter for index {}'.format(key))
    return found


def _rho(signal, spatial_filters):
    if len(spatial_filters) == 1:
        return _modulus(direct_periodic_convolution(signal,
                                                    spatial_filters[0]))
    acc = np.zeros(signal.shape)
    for h in spatial_filters:
        acc += _modulus(direct_periodic_convolution(signal, h)) ** 2
    return np.sqrt(acc)


def reference_scatter(bank, x, paths, max_axis=64):
    """
    Breadth-first full-resolution scattering.

    Parameters
    ----------
    bank : FilterBank
    x : array_like
        real input on ``bank.shape``
    paths : sequence of PathMeta
        the paths to evaluate, in output row order (normally a plan's
        ``paths``)
    max_axis : int
        refuse inputs with an axis longer than this; the cost grows as
        the square of the grid size

    Returns
    -------
    ScatteringOutput
        ``stats.peak_live_intermediates`` counts the envelopes held at once
    """
    x = np.asarray(x, dtype=float)
    if x.shape != tuple(bank.shape):
        raise ValueError('input shape {} does not match bank shape {}'
                         .format(x.shape, bank.shape))
    if max(x.shape) > max_axis:
        raise ValueError('reference_scatter is limited to axes of length '
                         '<= {}, got {}'.format(max_axis, x.shape))
    stride = 2 ** bank.J
    counter = LiveCounter()
    spatial = {}

    def filters(order, key):
        if (order, key) not in spatial:
            spatial[(order, key)] = [naive_idft(f.spectra[0])
                                     for f in _channel(bank, order, key)]
        return spatial[(order, key)]

    phi = naive_idft(bank.lowpass.spectra[0])

    # layer 1: every first-order envelope, all held at once
    U1 = {}
    for p in paths:
        if p.order >= 1 and p.lambda1 not in U1:
            U1[p.lambda1] = _rho(x, filters(1, p.lambda1))
            counter.acquire()
    # layer 2
    U2 = {}
    for p in paths:
        if p.order == 2:
            U2[(p.lambda1, p.lambda2)] = _rho(U1[p.lambda1],
                                              filters(2, p.lambda2))
            counter.acquire()

    rows = []
    for p in paths:
        if p.order == 0:
            signal = x
        elif p.order == 1:
            signal = U1[p.lambda1]
        else:
            signal = U2[(p.lambda1, p.lambda2)]
        rows.append(direct_periodic_convolution(signal, phi, stride).real)
    counter.release(counter.live)
    stats = ScatterStats(counter.peak, counter.peak, 1)
    return ScatteringOutput(np.array(rows), tuple(paths), stats)
