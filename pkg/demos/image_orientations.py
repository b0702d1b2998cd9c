"""
Oriented energy of a striped image.

Stripes at a fixed angle excite the first-order channel whose orientation
matches; rotating the image by a quarter turn moves the energy by L/2
orientation bins.
"""
import numpy as np

from wavescatter import Scattering2D

H = W = 64
J, L = 3, 8

u, v = np.meshgrid(np.arange(H), np.arange(W), indexing='ij')
stripes = np.cos(0.9 * u)

S = Scattering2D(J=J, shape=(H, W), L=L)
for name, img in [('stripes', stripes), ('rotated', stripes.T)]:
    out = S.transform(img)
    energy = {}
    for meta, row in zip(out.meta, out.coefficients):
        if meta.order == 1:
            j, t = meta.lambda1
            energy[t] = energy.get(t, 0.0) + np.sum(row ** 2)
    best = max(energy, key=energy.get)
    print('{:8s} strongest orientation t={} (theta={:.0f} deg)'
          .format(name, best, 180 * best / L))
