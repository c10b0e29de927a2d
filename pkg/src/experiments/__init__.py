"""
实验与扫描：见证函数、下界统计量、加权一致性、幂律拟合
"""

from .fitting import FitResult, fit_affine, fit_exponent, fit_log_log
from .lower_bound import (
    LOWER_BOUND_COLUMNS, l1_kernel_oracle, log_scale_offset, lower_bound_point, lower_bound_scan,
    oracle_affine_fit, projection_l1_profile,
)
from .weighted import WeightedScanConfig, auxiliary_weighted_scan, band_limited_family, weighted_scan
from .witness import eta_witness, witness_lp_profile, witness_norm, witness_scan, witness_spectrum

__all__ = [
    'FitResult', 'fit_affine', 'fit_exponent', 'fit_log_log',
    'LOWER_BOUND_COLUMNS', 'l1_kernel_oracle', 'log_scale_offset', 'lower_bound_point', 'lower_bound_scan',
    'oracle_affine_fit', 'projection_l1_profile',
    'WeightedScanConfig', 'auxiliary_weighted_scan', 'band_limited_family', 'weighted_scan',
    'eta_witness', 'witness_lp_profile', 'witness_norm', 'witness_scan', 'witness_spectrum',
]
