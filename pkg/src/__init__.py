"""
lplab - 有限阶缺项集 Littlewood-Paley 平方函数数值实验室
"""

__version__ = "0.1.0"
