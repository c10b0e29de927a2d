"""
谱计算内核：变换、乘子、投影、调制、光滑鼓包
"""

from .core import (
    frequencies, forward_transform, inverse_transform, apply_multiplier, multiply_spectrum,
    project, project_spectrum, modulate, translate, upsample, evaluate_band, band_modulus, energy,
    spectral_energy,
)
from .bumps import make_transition, make_phi_partition, smooth_step

__all__ = [
    'frequencies', 'forward_transform', 'inverse_transform', 'apply_multiplier', 'multiply_spectrum',
    'project', 'project_spectrum', 'modulate', 'translate', 'upsample', 'evaluate_band', 'band_modulus',
    'energy', 'spectral_energy',
    'make_transition', 'make_phi_partition', 'smooth_step',
]
