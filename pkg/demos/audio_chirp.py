"""
Scattering a synthetic chirp.

A linear chirp sweeps through the Morlet bank, so its first-order energy
moves across filters over time while the second-order coefficients pick
up the modulation that the first order averages away.
"""
import numpy as np

from wavescatter import Scattering1D

N = 2 ** 13
J, Q = 6, 8

t = np.arange(N) / N
chirp = np.cos(2 * np.pi * (50 * t + 900 * t ** 2))
# amplitude modulation at a rate well below 2**-J
chirp *= 1 + 0.5 * np.cos(2 * np.pi * 12 * t)

S = Scattering1D(J=J, shape=(N,), Q=Q)
out = S.transform(chirp)
print('paths:', len(out), 'time samples per path:', out.coefficients.shape[1])

S1 = out.rows(1)
peak = S1.argmax(axis=0)
print('dominant first-order filter, every 16th window:')
print(peak[::16])

for order in (0, 1, 2):
    energy = np.sum(out.rows(order) ** 2)
    print('order {} energy {:.4g}'.format(order, energy))
print('peak live intermediates:', out.stats.peak_live_intermediates)
