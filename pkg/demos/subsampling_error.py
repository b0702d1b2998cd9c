"""
What critical subsampling costs.

The fast cascade subsamples each envelope at the rate of its wavelet. The
modulus widens the spectrum, so this aliases a little. Comparing with the
direct full-resolution reference shows the discrepancy falling as the
intermediate rate is raised.
"""
import numpy as np

from wavescatter import plan_1d, scatter_1d
from wavescatter.oracle import reference_scatter

rng = np.random.default_rng(0)
x = rng.standard_normal(64)
J = 5
for oversampling in range(J):
    plan = plan_1d(64, J, Q=1, oversampling=oversampling)
    fast = scatter_1d(plan, x).coefficients
    ref = reference_scatter(plan.bank, x, plan.paths).coefficients
    err = np.linalg.norm(fast - ref) / np.linalg.norm(ref)
    print('oversampling {}  relative error {:.2e}'.format(oversampling, err))
