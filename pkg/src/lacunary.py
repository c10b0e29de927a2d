"""
缺项点集与其诱导的区间族

所有端点都是二进有理数；只要指数窗口宽度不超过 52，浮点表示就是精确的。
"""
import logging
from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Sequence, Union

import numpy as np

from .errors import IntervalError
from .models.intervals import (
    FrequencyInterval, IntervalCollection, LacunarySpec, PartitionReport, SetKind, SignMode,
)

logger = logging.getLogger(__name__)

# 双精度尾数 53 位：窗口内任意指数组合之和/差都能精确表示
MAX_EXPONENT_SPAN = 52
MAX_ABS_EXPONENT = 1000


def _check_exponents(lo: int, hi: int):
    if hi - lo > MAX_EXPONENT_SPAN:
        raise IntervalError(
            f"指数窗口 [{lo}, {hi}] 宽度超过 {MAX_EXPONENT_SPAN}，二进有理端点无法精确表示"
        )
    if max(abs(lo), abs(hi)) > MAX_ABS_EXPONENT:
        raise IntervalError(f"指数 {max(abs(lo), abs(hi))} 超出浮点范围")


def _positive_points(spec: LacunarySpec) -> List[float]:
    if spec.kind is SetKind.E1:
        _check_exponents(spec.k_min, spec.k_max)
        return [2.0 ** k for k in range(spec.k_min, spec.k_max + 1)]

    _check_exponents(spec.l_min, spec.k_max)
    if spec.kind is SetKind.E2:
        return [2.0 ** k - 2.0 ** l
                for k in range(spec.k_min, spec.k_max + 1)
                for l in range(spec.l_min, k)]

    # Ẽ_N：k_max >= k1 > ... > kN >= l_min，且 k1 >= k_min
    points = []
    for exps in combinations(range(spec.k_max, spec.l_min - 1, -1), spec.order):
        if exps[0] >= spec.k_min:
            points.append(float(sum(2.0 ** e for e in exps)))
    return points


def generate_points(spec: LacunarySpec) -> np.ndarray:
    """按 spec 生成升序、去重的点集"""
    positive = _positive_points(spec)
    if spec.sign_mode is SignMode.POSITIVE:
        values = positive
    elif spec.sign_mode is SignMode.NEGATIVE:
        values = [-p for p in positive]
    else:
        values = positive + [-p for p in positive]
    points = np.unique(np.asarray(values, dtype=float))
    if points.size == 0:
        raise IntervalError(f"点集为空：{spec}")
    logger.debug(f"[lacunary] {spec.name} k∈[{spec.k_min},{spec.k_max}] l_min={spec.l_min} → {points.size} 点")
    return points


def intervals_from_points(points: Sequence[float]) -> IntervalCollection:
    """𝓘_K 约定：相邻点之间的半开区间 [a_n, a_{n+1})"""
    pts = np.asarray(points, dtype=float)
    if pts.size < 2:
        raise IntervalError(f"至少需要 2 个点，得到 {pts.size}")
    if np.any(np.diff(pts) <= 0):
        raise IntervalError("点集必须严格递增（未排序或有重复）")
    return IntervalCollection(tuple(FrequencyInterval(float(a), float(b)) for a, b in zip(pts[:-1], pts[1:])))


def interval_plus(k: int, l: int) -> FrequencyInterval:
    """I⁺_{k,l} = [2^k - 2^l, 2^k - 2^{l-1})"""
    return FrequencyInterval(2.0 ** k - 2.0 ** l, 2.0 ** k - 2.0 ** (l - 1), (k, l, 1))


def interval_minus(k: int, l: int) -> FrequencyInterval:
    """I⁻_{k,l} = [-2^k + 2^{l-1}, -2^k + 2^l)"""
    return FrequencyInterval(-2.0 ** k + 2.0 ** (l - 1), -2.0 ** k + 2.0 ** l, (k, l, -1))


def enumerate_Ikl(k_range: Sequence[int], l_min: int,
                  sign: Union[SignMode, str] = SignMode.POSITIVE) -> IntervalCollection:
    """所有 k ∈ [k_lo, k_hi]、l ∈ [l_min, k-1] 的 I^±_{k,l}，按左端点排序"""
    k_lo, k_hi = k_range
    if isinstance(sign, str):
        sign = SignMode.from_string(sign)
    if k_hi < k_lo or l_min > k_hi - 1:
        raise IntervalError(f"空范围：k∈[{k_lo}, {k_hi}]，l_min={l_min}")
    _check_exponents(l_min - 1, k_hi)
    items = []
    for k in range(k_lo, k_hi + 1):
        for l in range(l_min, k):
            if sign in (SignMode.POSITIVE, SignMode.BOTH):
                items.append(interval_plus(k, l))
            if sign in (SignMode.NEGATIVE, SignMode.BOTH):
                items.append(interval_minus(k, l))
    if not items:
        raise IntervalError(f"空范围：k∈[{k_lo}, {k_hi}]，l_min={l_min}")
    return IntervalCollection(tuple(sorted(items, key=lambda I: I.a)))


def verify_partition(intervals: Union[IntervalCollection, Iterable[FrequencyInterval]],
                     band: FrequencyInterval) -> PartitionReport:
    """
    精确判定区间族在 band 上是否两两不交、是否覆盖，并列出缺口

    区间先裁剪到 band；所有比较都用 Fraction 完成。
    """
    lo, hi = band.as_fractions()
    clipped = []
    for I in intervals:
        a, b = I.as_fractions()
        a, b = max(a, lo), min(b, hi)
        if a < b:
            clipped.append((a, b))
    clipped.sort()

    gaps, overlaps = [], []
    cursor = lo
    reach = lo
    for a, b in clipped:
        if a < reach:
            overlaps.append((a, min(b, reach)))
        if a > cursor:
            gaps.append((cursor, a))
        cursor = max(cursor, b)
        reach = max(reach, b)
    if cursor < hi:
        gaps.append((cursor, hi))

    return PartitionReport(disjoint=not overlaps, covering=not gaps, gaps=gaps, overlaps=overlaps)


def collection_for(spec: LacunarySpec) -> IntervalCollection:
    """
    spec 对应的区间族 𝓘

    E2 用 I^±_{k,l} 闭式（带 (k,l,sign) 标签）；其余用相邻点区间，E1 的区间标签为 (k, None, ±1)。
    """
    if spec.kind is SetKind.E2:
        return enumerate_Ikl((spec.k_min, spec.k_max), spec.l_min, spec.sign_mode)
    collection = intervals_from_points(generate_points(spec))
    if spec.kind is SetKind.E1:
        labelled = []
        for I in collection:
            if I.a > 0:
                labelled.append(FrequencyInterval(I.a, I.b, (int(np.log2(I.b)), None, 1)))
            elif I.b < 0:
                labelled.append(FrequencyInterval(I.a, I.b, (int(np.log2(-I.a)), None, -1)))
            else:
                labelled.append(I)
        collection = IntervalCollection(tuple(labelled))
    return collection


def plateau_intervals(kind: SetKind, order: int, K: int) -> IntervalCollection:
    """
    进入增长统计量 B(N) 的区间（K = log₂N）

    E1: [2^{k-1}, 2^k)，k = 2..K
    E2: I⁺_{k,l}，2 <= k <= K，1 <= l < k
    Ẽ_r: Ẽ_r（l_min = 0）的相邻点区间中落在 [2, 2^K) 内者
    """
    if K < 2:
        raise IntervalError(f"K = log₂N 至少为 2，得到 {K}")
    if kind is SetKind.E1:
        return IntervalCollection(tuple(
            FrequencyInterval(2.0 ** (k - 1), 2.0 ** k, (k, None, 1)) for k in range(2, K + 1)
        ))
    if kind is SetKind.E2:
        return enumerate_Ikl((2, K), 1, SignMode.POSITIVE)
    spec = LacunarySpec(kind=kind, k_min=order - 1, k_max=K, l_min=0,
                        sign_mode=SignMode.POSITIVE, order=order)
    band = FrequencyInterval(2.0, 2.0 ** K)
    return intervals_from_points(generate_points(spec)).restricted_to(band)


def exact_union(intervals: Iterable[FrequencyInterval]) -> List[tuple]:
    """区间并的精确表示（合并相邻段），供测试和报告使用"""
    spans = sorted(I.as_fractions() for I in intervals)
    merged: List[List[Fraction]] = []
    for a, b in spans:
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return [tuple(s) for s in merged]
