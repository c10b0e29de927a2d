"""
数据模型
"""

from .grid import GridFunction, Spectrum, SmoothBump, is_power_of_two
from .intervals import FrequencyInterval, IntervalCollection, LacunarySpec, PartitionReport, SetKind, SignMode
from .trig import TrigPolynomial
from .lattice import DyadicLattice, lattice_triple
from .weight import Weight, WeightKind, A2Report
from .record import ExperimentRecord, WitnessSpec

__all__ = [
    'GridFunction', 'Spectrum', 'SmoothBump', 'is_power_of_two',
    'FrequencyInterval', 'IntervalCollection', 'LacunarySpec', 'PartitionReport', 'SetKind', 'SignMode',
    'TrigPolynomial',
    'DyadicLattice', 'lattice_triple',
    'Weight', 'WeightKind', 'A2Report',
    'ExperimentRecord', 'WitnessSpec',
]
