"""
Ordered fan-out for grid evaluations.

Results always come back in input order, so reductions over them are
independent of the worker schedule.
"""

from typing import Callable, Iterable, List, TypeVar

from joblib import Parallel, delayed

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(func: Callable[[T], R], items: Iterable[T], n_jobs: int = 1) -> List[R]:
    """
    Apply ``func`` to every item, optionally on worker threads.

    Args:
        func: Pure function of one item
        items: Inputs, consumed once
        n_jobs: Worker threads; 1 runs inline

    Returns:
        Results in the order of ``items``
    """
    items = list(items)
    if n_jobs == 1 or len(items) < 2:
        return [func(item) for item in items]
    return Parallel(n_jobs=n_jobs, backend="threading")(
        delayed(func)(item) for item in items
    )
