"""
Solid harmonic channels of two small "molecules".

Each volume is a sum of Gaussian blobs. The m-aggregated channels are
unchanged by a lattice rotation of the volume, which is what makes them
usable as rotation-invariant descriptors once spatially summed.
"""
import numpy as np

from wavescatter import Scattering3D

n = 32
grid = np.stack(np.meshgrid(*[np.arange(n)] * 3, indexing='ij'), -1)


def blobs(centers, width=1.5):
    vol = np.zeros((n, n, n))
    for c in centers:
        d2 = np.sum((grid - np.array(c)) ** 2, axis=-1)
        vol += np.exp(-d2 / (2 * width ** 2))
    return vol


linear = blobs([(16, 16, 10), (16, 16, 16), (16, 16, 22)])
bent = blobs([(16, 16, 10), (16, 16, 16), (16, 22, 16)])

S = Scattering3D(J=2, shape=(n, n, n), L_max=2)
for name, vol in [('linear', linear), ('bent', bent)]:
    out = S.transform(vol)
    rotated = S.transform(np.transpose(vol, (2, 1, 0))[:, :, ::-1])
    desc = out.coefficients.sum(axis=(1, 2, 3))
    desc_rot = rotated.coefficients.sum(axis=(1, 2, 3))
    print('{:6s}'.format(name), np.round(desc[1:7], 3))
    print('       rotation change {:.2e}'.format(np.abs(desc - desc_rot).max()))
