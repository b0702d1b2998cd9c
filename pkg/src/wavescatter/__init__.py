"""
Wavelet scattering transforms in one, two and three dimensions.

>>> import numpy as np
>>> from wavescatter import Scattering1D
>>> S = Scattering1D(J=6, shape=(4096,), Q=8)
>>> S(np.random.randn(4096)).shape
(169, 64)
"""
from .filterbank import (FilterBank, FilterSpec, PeriodizedFilter,
                         build_bank_1d, build_bank_2d, build_bank_3d,
                         littlewood_paley)
from .output import LiveCounter, PathMeta, ScatteringOutput, ScatterStats
from .scattering1d import Plan1D, Scattering1D, paths_1d, plan_1d, scatter_1d
from .scattering2d import Plan2D, Scattering2D, paths_2d, plan_2d, scatter_2d
from .scattering3d import Plan3D, Scattering3D, paths_3d, plan_3d, scatter_3d

__version__ = '0.1.0'

__all__ = ['FilterBank', 'FilterSpec', 'PeriodizedFilter', 'build_bank_1d',
           'build_bank_2d', 'build_bank_3d', 'littlewood_paley',
           'LiveCounter', 'PathMeta', 'ScatteringOutput', 'ScatterStats',
           'Plan1D', 'Scattering1D', 'paths_1d', 'plan_1d', 'scatter_1d',
           'Plan2D', 'Scattering2D', 'paths_2d', 'plan_2d', 'scatter_2d',
           'Plan3D', 'Scattering3D', 'paths_3d', 'plan_3d', 'scatter_3d']
