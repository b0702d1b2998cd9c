"""
Filter banks for the scattering cascade.

All filters live in the Fourier domain, sampled on the DFT bins of a
periodic grid (standard DFT ordering, angular frequencies in [-pi, pi)).
Each filter is stored at every resolution the cascade visits: level ``r``
holds the spectrum folded onto the grid subsampled by ``2**r`` per axis.

Three families are provided:

* 1D Morlet wavelets, built directly in the Fourier domain,
* 2D oriented Morlet wavelets, sampled in space and transformed,
* 3D solid harmonic wavelets (Gaussian times a solid harmonic), built in
  the Fourier domain.

Wavelets of a bank share one scale factor, chosen so that the
Littlewood-Paley sum of the bank never exceeds one while the lowpass
keeps unit DC gain.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import sph_harm_y

from .spectral import dft_forward, periodize_spectrum

__all__ = ['FilterSpec', 'PeriodizedFilter', 'FilterBank', 'gauss_spectrum',
           'morlet_spectrum_1d', 'morlet_spectrum_2d',
           'solid_harmonic_spectrum_3d', 'morlet_widths_1d', 'build_bank_1d',
           'build_bank_2d', 'build_bank_3d', 'littlewood_paley',
           'XI_MAX', 'LOWPASS_SIGMA0', 'SOLID_SIGMA0']

XI_MAX = 3 * np.pi / 4
# Lowpass width per unit of 2**J (1D and 2D). Large enough that at
# 2**J == N the lowpass is numerically a DC delta.
LOWPASS_SIGMA0 = 1.2
SOLID_SIGMA0 = 1.0
MORLET_2D_SIGMA0 = 0.8

# 1D Morlet quality factors (sigma * xi).
_OVERLAP_RATIO = 0.8
_MIN_BODY_QUALITY = 2.7
_EDGE_QUALITY = 1.5


@dataclass(frozen=True)
class FilterSpec:
    """Identity and design parameters of a single filter."""
    kind: str
    xi: float = 0.0
    sigma: float = 0.0
    j: int = 0
    theta: float = None
    slant: float = None
    l: int = None
    m: int = None


@dataclass(frozen=True, eq=False)
class PeriodizedFilter:
    """
    A filter spectrum stored at resolutions ``0 .. J``.

    ``spectra[r]`` is ``periodize_spectrum(spectra[0], 2**r)``, the
    spectrum of the spatially subsampled filter. Convolving a signal held
    at resolution ``r`` needs the alias sum instead, which is
    ``kernel(r)``.
    """
    spec: FilterSpec
    spectra: tuple

    @classmethod
    def from_spectrum(cls, spec, spectrum, levels):
        spectrum = np.asarray(spectrum, dtype=complex)
        spectra = []
        for r in range(levels + 1):
            s = periodize_spectrum(spectrum, 2 ** r)
            s.setflags(write=False)
            spectra.append(s)
        return cls(spec, tuple(spectra))

    @property
    def ndim(self):
        return self.spectra[0].ndim

    def kernel(self, r):
        return self.spectra[r] * float(2 ** (r * self.ndim))


@dataclass(frozen=True, eq=False)
class FilterBank:
    dim: int
    J: int
    shape: tuple
    first_order: tuple
    second_order: tuple
    lowpass: PeriodizedFilter
    params: dict = field(default_factory=dict)


def _omegas(shape):
    return [2 * np.pi * np.fft.fftfreq(n) for n in shape]


def _reflect(a):
    """Return a[-k mod N] along every axis."""
    idx = np.ix_(*[(-np.arange(n)) % n for n in a.shape])
    return a[idx]


def gauss_spectrum(shape, sigma):
    """
    Gaussian lowpass exp(-sigma^2 |omega|^2 / 2) on the DFT bins.

    ``sigma`` is the spatial width in samples. The value at the DC bin is
    exactly one.
    """
    if not sigma > 0:
        raise ValueError('sigma must be positive, got {}'.format(sigma))
    shape = tuple(int(n) for n in shape)
    r2 = np.zeros(shape)
    for axis, w in enumerate(_omegas(shape)):
        view = [1] * len(shape)
        view[axis] = -1
        r2 = r2 + (w ** 2).reshape(view)
    return np.exp(-0.5 * sigma ** 2 * r2).astype(complex)


def morlet_spectrum_1d(N, xi, sigma, periods=2):
    """
    Fourier transform of a 1D Morlet wavelet.

    The Gabor term ``g(omega - xi)`` minus ``kappa * g(omega)``, with
    ``g(omega) = exp(-sigma^2 omega^2 / 2)``. Both terms are periodized
    over ``omega + 2 pi p`` for ``|p| <= periods`` and ``kappa`` is chosen
    so the DC bin vanishes.

    Parameters
    ----------
    N : int
        grid length
    xi : float
        center frequency in radians per sample, in (0, pi]
    sigma : float
        spatial width of the Gaussian envelope, in samples

    Returns
    -------
    psi_f : ndarray
        complex array of shape (N,) in standard DFT order
    """
    if not 0 < xi <= np.pi:
        raise ValueError('xi must lie in (0, pi], got {}'.format(xi))
    if not sigma > 0:
        raise ValueError('sigma must be positive, got {}'.format(sigma))
    w = _omegas((N,))[0]
    gabor = np.zeros(N)
    low = np.zeros(N)
    for p in range(-periods, periods + 1):
        gabor += np.exp(-0.5 * (sigma * (w + 2 * np.pi * p - xi)) ** 2)
        low += np.exp(-0.5 * (sigma * (w + 2 * np.pi * p)) ** 2)
    kappa = gabor[0] / low[0]
    psi = gabor - kappa * low
    psi[0] = 0.0
    return psi.astype(complex)


def morlet_spectrum_2d(shape, xi, sigma, theta, slant):
    """
    Spectrum of an oriented 2D Morlet wavelet.

    The wavelet is sampled in space as

        (exp(i xi u1) - kappa) * exp(-(u1^2 + slant^2 u2^2) / (2 sigma^2))

    where ``(u1, u2)`` is the grid coordinate rotated by ``-theta``
    (axis 0 is ``u1`` at ``theta = 0``). Samples are summed over enough
    grid periods for the envelope to be negligible beyond them (never
    fewer than two on each side), ``kappa`` cancels the mean, and the
    result is scaled by ``slant / (2 pi sigma^2)`` so the spectral peak
    is close to one.
    """
    if not 0 < xi <= np.pi:
        raise ValueError('xi must lie in (0, pi], got {}'.format(xi))
    if not (sigma > 0 and slant > 0):
        raise ValueError('sigma and slant must be positive')
    if not 0 <= theta < np.pi:
        raise ValueError('theta must lie in [0, pi), got {}'.format(theta))
    H, W = (int(n) for n in shape)
    c, s = math.cos(theta), math.sin(theta)
    reach = sigma / min(1.0, slant)
    offsets = []
    for n in (H, W):
        K = max(2, int(math.ceil(9 * reach / n + 0.5)))
        centered = (np.arange(n) + n // 2) % n - n // 2
        offsets.append([centered + k * n for k in range(-K, K + 1)])
    wave = np.zeros((H, W), dtype=complex)
    env = np.zeros((H, W))
    for u1 in offsets[0]:
        for u2 in offsets[1]:
            a = c * u1[:, None] + s * u2[None, :]
            b = -s * u1[:, None] + c * u2[None, :]
            g = np.exp(-(a ** 2 + slant ** 2 * b ** 2) / (2 * sigma ** 2))
            env += g
            wave += np.exp(1j * xi * a) * g
    kappa = wave.sum() / env.sum()
    psi = (wave - kappa * env) * (slant / (2 * np.pi * sigma ** 2))
    psi_f = dft_forward(psi)
    psi_f[0, 0] = 0.0
    return psi_f


def _radial_power(l):
    # l = 0 uses |omega|^2 so that every filter of the bank is zero-mean
    return l if l > 0 else 2


def solid_harmonic_spectrum_3d(shape, j, l, sigma0=SOLID_SIGMA0):
    """
    Solid harmonic wavelets ``psi_{j,l,m}`` for ``m = -l .. l``.

        psi_f(omega) = C_l |2^j omega|^p Y_l^m(omega / |omega|)
                       exp(-(2^j sigma0)^2 |omega|^2 / 2)

    with ``p = l`` for ``l >= 1`` and ``p = 2`` for ``l = 0``, complex
    spherical harmonics with the Condon-Shortley phase, and ``C_l`` such
    that the maximum over ``omega`` of ``sum_m |psi_f|^2`` is one. Bins on
    a Nyquist plane are set to zero so the bank is exactly covariant under
    the axis-aligned rotations of the lattice.

    Returns
    -------
    list of 2l + 1 complex arrays, ordered by m.
    """
    if l < 0 or j < 0:
        raise ValueError('j and l must be non-negative, got j={}, l={}'
                         .format(j, l))
    shape = tuple(int(n) for n in shape)
    if len(shape) != 3:
        raise ValueError('shape must have three entries')
    w = np.meshgrid(*_omegas(shape), indexing='ij')
    scale = 2.0 ** j
    rho = scale * np.sqrt(w[0] ** 2 + w[1] ** 2 + w[2] ** 2)
    polar = np.arccos(np.clip(w[2] * scale / np.where(rho > 0, rho, 1.0),
                              -1.0, 1.0))
    azimuth = np.arctan2(w[1], w[0])
    p = _radial_power(l)
    const = math.sqrt(4 * np.pi / (2 * l + 1)
                      * (sigma0 ** 2 * math.e / p) ** p)
    radial = const * rho ** p * np.exp(-0.5 * (sigma0 * rho) ** 2)
    nyquist = np.zeros(shape, dtype=bool)
    for axis, n in enumerate(shape):
        if n % 2 == 0:
            idx = [slice(None)] * 3
            idx[axis] = n // 2
            nyquist[tuple(idx)] = True
    out = []
    for m in range(-l, l + 1):
        psi = radial * sph_harm_y(l, m, polar, azimuth)
        psi[rho == 0] = 0.0
        psi[nyquist] = 0.0
        out.append(psi.astype(complex))
    return out


def _lp_scale(wavelet_energy, phi_energy):
    """Largest gain c with phi_energy + c^2 * wavelet_energy <= 1."""
    mask = wavelet_energy > 1e-300
    if not mask.any():
        return 1.0
    ratio = (1.0 - phi_energy[mask]) / wavelet_energy[mask]
    return math.sqrt(max(ratio.min(), 0.0))


def morlet_widths_1d(J, Q):
    """
    Center frequencies and spatial widths of a 1D Morlet bank.

    Centers are ``XI_MAX * 2**(-q / Q)`` for ``q < J * Q``. Widths follow
    ``sigma_q = tau_q / xi_q``: a constant quality factor
    ``tau = max(0.8 / (2**(1/Q) - 1), 2.7)`` in the body of the bank,
    lowered to 1.5 for the top ``ceil(Q / 4)`` filters (which must reach
    the Nyquist frequency) and for the last octave (which must meet the
    lowpass).
    """
    q = np.arange(J * Q)
    xi = XI_MAX * 2.0 ** (-q / Q)
    body = max(_OVERLAP_RATIO / (2 ** (1.0 / Q) - 1), _MIN_BODY_QUALITY)
    tau = np.full(J * Q, body)
    edge = min(body, _EDGE_QUALITY)
    tau[:int(math.ceil(Q / 4))] = edge
    tau[(J - 1) * Q:] = edge
    return xi, tau / xi


def _check_bank_shape(shape, J):
    if J < 1:
        raise ValueError('J must be at least 1, got {}'.format(J))
    for n in shape:
        if n < 1 or n % 2 ** J:
            raise ValueError('grid shape {} is not divisible by 2**J = {}'
                             .format(tuple(shape), 2 ** J))


def _wavelet_family_1d(N, J, Q, phi_energy, levels):
    xis, sigmas = morlet_widths_1d(J, Q)
    spectra = [morlet_spectrum_1d(N, xi, s) for xi, s in zip(xis, sigmas)]
    energy = sum(np.abs(s) ** 2 for s in spectra)
    c = _lp_scale(0.5 * (energy + _reflect(energy)), phi_energy)
    out = []
    for q, (xi, s, spec) in enumerate(zip(xis, sigmas, spectra)):
        fs = FilterSpec('morlet', xi=float(xi), sigma=float(s), j=q // Q)
        out.append(PeriodizedFilter.from_spectrum(fs, c * spec, levels))
    return tuple(out)


def build_bank_1d(N, J, Q):
    """
    Morlet filter bank for 1D scattering.

    Order one has ``J * Q`` wavelets with octave index ``q // Q``; order
    two uses one wavelet per octave. The lowpass is a Gaussian of width
    ``LOWPASS_SIGMA0 * 2**J``. Each family is scaled so its
    Littlewood-Paley sum with the lowpass stays below one.
    """
    N, J, Q = int(N), int(J), int(Q)
    if N < 2 or N & (N - 1):
        raise ValueError('N must be a power of two, got {}'.format(N))
    if J < 1 or 2 ** J > N:
        raise ValueError('J must satisfy 1 <= J <= log2(N), got {}'.format(J))
    if Q < 1:
        raise ValueError('Q must be at least 1, got {}'.format(Q))
    phi = gauss_spectrum((N,), LOWPASS_SIGMA0 * 2 ** J)
    phi_energy = np.abs(phi) ** 2
    lowpass = PeriodizedFilter.from_spectrum(
        FilterSpec('gaussian-lowpass', sigma=LOWPASS_SIGMA0 * 2 ** J, j=J),
        phi, J)
    first = _wavelet_family_1d(N, J, Q, phi_energy, J)
    second = _wavelet_family_1d(N, J, 1, phi_energy, J)
    return FilterBank(1, J, (N,), first, second, lowpass, {'Q': Q})


def build_bank_2d(shape, J, L):
    """
    Oriented Morlet bank for 2D scattering.

    Wavelets ``psi_{j, t}`` for ``j < J`` and ``theta = pi t / L`` with
    ``xi = 3 pi / 4 / 2**j``, ``sigma = 0.8 * 2**j`` and ``slant = 4 / L``,
    ordered ``j``-major. The same bank serves both orders.
    """
    shape = tuple(int(n) for n in shape)
    J, L = int(J), int(L)
    if len(shape) != 2:
        raise ValueError('2D bank needs a (H, W) shape')
    _check_bank_shape(shape, J)
    if L < 1:
        raise ValueError('L must be at least 1, got {}'.format(L))
    phi = gauss_spectrum(shape, LOWPASS_SIGMA0 * 2 ** J)
    lowpass = PeriodizedFilter.from_spectrum(
        FilterSpec('gaussian-lowpass', sigma=LOWPASS_SIGMA0 * 2 ** J, j=J),
        phi, J)
    slant = 4.0 / L
    specs, spectra = [], []
    for j in range(J):
        xi = XI_MAX / 2 ** j
        sigma = MORLET_2D_SIGMA0 * 2 ** j
        for t in range(L):
            theta = np.pi * t / L
            specs.append(FilterSpec('morlet', xi=xi, sigma=sigma, j=j,
                                    theta=theta, slant=slant))
            spectra.append(morlet_spectrum_2d(shape, xi, sigma, theta, slant))
    energy = sum(np.abs(s) ** 2 for s in spectra)
    c = _lp_scale(0.5 * (energy + _reflect(energy)), np.abs(phi) ** 2)
    bank = tuple(PeriodizedFilter.from_spectrum(fs, c * s, J)
                 for fs, s in zip(specs, spectra))
    return FilterBank(2, J, shape, bank, bank, lowpass, {'L': L})


def build_bank_3d(shape, J, L_max):
    """
    Solid harmonic bank for 3D scattering.

    Filters ``psi_{j, l, m}`` for ``j < J``, ``l <= L_max``, ``|m| <= l``,
    ordered by ``(j, l, m)``, with ``sigma0 = 1`` and a Gaussian lowpass of
    width ``2**J``.
    """
    shape = tuple(int(n) for n in shape)
    J, L_max = int(J), int(L_max)
    if len(shape) != 3:
        raise ValueError('3D bank needs a (D1, D2, D3) shape')
    _check_bank_shape(shape, J)
    if L_max < 0:
        raise ValueError('L_max must be non-negative, got {}'.format(L_max))
    phi = gauss_spectrum(shape, SOLID_SIGMA0 * 2 ** J)
    lowpass = PeriodizedFilter.from_spectrum(
        FilterSpec('gaussian-lowpass', sigma=SOLID_SIGMA0 * 2 ** J, j=J),
        phi, J)
    specs, spectra = [], []
    for j in range(J):
        for l in range(L_max + 1):
            family = solid_harmonic_spectrum_3d(shape, j, l)
            for m, s in zip(range(-l, l + 1), family):
                specs.append(FilterSpec('solid-harmonic', sigma=SOLID_SIGMA0,
                                        j=j, l=l, m=m))
                spectra.append(s)
    energy = sum(np.abs(s) ** 2 for s in spectra)
    c = _lp_scale(energy, np.abs(phi) ** 2)
    bank = tuple(PeriodizedFilter.from_spectrum(fs, c * s, J)
                 for fs, s in zip(specs, spectra))
    return FilterBank(3, J, shape, bank, bank, lowpass, {'L_max': L_max})


def littlewood_paley(bank):
    """
    Frame bounds of the first-order family together with the lowpass.

    For 1D and 2D the wavelet term is symmetrized,
    ``LP = |phi|^2 + 1/2 sum (|psi(w)|^2 + |psi(-w)|^2)``, which is the
    relevant quantity for real inputs. In 3D the m-aggregated energy is
    already even and is used as is.

    Returns
    -------
    (A, B) : tuple of float
        minimum and maximum of LP over all bins
    """
    lp = np.abs(bank.lowpass.spectra[0]) ** 2
    if bank.first_order:
        energy = sum(np.abs(f.spectra[0]) ** 2 for f in bank.first_order)
        if bank.dim in (1, 2):
            energy = 0.5 * (energy + _reflect(energy))
        lp = lp + energy
    return float(lp.min()), float(lp.max())
