"""
扫描点的并行执行：各点独立计算，结果按输入顺序返回
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from ..config_loader import get_worker_count

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """在线程池上计算 fn(item)，返回顺序与 items 一致"""
    items = list(items)
    workers = min(workers or get_worker_count(), max(1, len(items)))
    if workers == 1:
        return [fn(item) for item in items]
    logger.debug(f"[scan] {len(items)} 个扫描点，{workers} 个线程")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
