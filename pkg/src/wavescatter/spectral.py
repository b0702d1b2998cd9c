"""
Numerical kernels on periodic grids: DFT, Fourier-domain subsampling,
pointwise products and the complex modulus.

Grids are plain numpy arrays. Every function transforms over all axes of
its argument and returns a fresh array.
"""
import numpy as np
import scipy.fft

__all__ = ['dft_forward', 'dft_inverse', 'periodize_spectrum',
           'pointwise_multiply', 'complex_modulus', 'is_power_of_two']


def is_power_of_two(n):
    n = int(n)
    return n >= 1 and (n & (n - 1)) == 0


def dft_forward(x):
    """Unnormalized forward DFT, exp(-2 pi i k n / N) kernel, over all axes."""
    return scipy.fft.fftn(np.asarray(x, dtype=complex))


def dft_inverse(X):
    """Inverse DFT carrying the 1 / prod(N) factor."""
    return scipy.fft.ifftn(np.asarray(X, dtype=complex))


def _factors(k, ndim):
    if np.isscalar(k):
        return (int(k),) * ndim
    k = tuple(int(v) for v in k)
    if len(k) != ndim:
        raise ValueError('expected {} subsampling factors, got {}'.format(
            ndim, len(k)))
    return k


def periodize_spectrum(X, k):
    """
    Fold a spectrum so that it becomes the spectrum of a subsampled signal.

    With ``y[n] = x[k * n]`` along every axis, the DFT of ``y`` is

        Y[m] = (1 / prod(k)) * sum_r X[m + r * N / k]

    which this function evaluates without leaving the Fourier domain.

    Parameters
    ----------
    X : array_like
        Spectrum on a grid of shape ``(N_1, ..., N_d)``.
    k : int or sequence of int
        Subsampling factor, either shared by all axes or one per axis. Each
        factor must be a power of two dividing the matching axis length.

    Returns
    -------
    Y : ndarray
        Folded spectrum of shape ``(N_1 / k_1, ..., N_d / k_d)``.
    """
    X = np.asarray(X)
    ks = _factors(k, X.ndim)
    for n, f in zip(X.shape, ks):
        if not is_power_of_two(f):
            raise ValueError('subsampling factor {} is not a power of '
                             'two'.format(f))
        if n % f:
            raise ValueError('subsampling factor {} does not divide axis '
                             'length {}'.format(f, n))
    Y = X
    for axis, f in enumerate(ks):
        if f == 1:
            continue
        n = Y.shape[axis]
        shape = Y.shape[:axis] + (f, n // f) + Y.shape[axis + 1:]
        Y = Y.reshape(shape).mean(axis=axis)
    if Y is X:
        Y = X.copy()
    return Y


def pointwise_multiply(X, H):
    X = np.asarray(X)
    H = np.asarray(H)
    if X.shape != H.shape:
        raise ValueError('shape mismatch: {} vs {}'.format(X.shape, H.shape))
    return X * H


def complex_modulus(x):
    """Elementwise sqrt(re^2 + im^2), returned as a real array."""
    return np.abs(np.asarray(x))
