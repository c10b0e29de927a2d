"""
二进格：{[s + j·2^{-ν}, s + (j+1)·2^{-ν})}
"""
from dataclasses import dataclass

import numpy as np

from .intervals import FrequencyInterval


@dataclass(frozen=True)
class DyadicLattice:
    """平移二进格；同一尺度的格元铺满 ℝ，每个格元恰好分裂为下一尺度的两个格元"""
    shift: float = 0.0

    @staticmethod
    def cell_length(nu: int) -> float:
        return 2.0 ** (-nu)

    def cell(self, nu: int, j: int) -> FrequencyInterval:
        step = self.cell_length(nu)
        return FrequencyInterval(self.shift + j * step, self.shift + (j + 1) * step)

    def cell_index(self, nu: int, x) -> np.ndarray:
        """x 所在尺度 ν 格元的编号 j"""
        return np.floor((np.asarray(x, dtype=float) - self.shift) * 2.0 ** nu).astype(np.int64)

    def children(self, nu: int, j: int):
        return self.cell(nu + 1, 2 * j), self.cell(nu + 1, 2 * j + 1)


def lattice_triple():
    """三个平移格，平移量 {0, 1/3, -1/3}"""
    return (DyadicLattice(0.0), DyadicLattice(1.0 / 3.0), DyadicLattice(-1.0 / 3.0))
