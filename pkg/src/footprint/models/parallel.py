from concurrent.futures import ThreadPoolExecutor


def parallel_map(fn, items, n_jobs=1):
    """Ordered map; results never depend on ``n_jobs``."""
    items = list(items)
    if n_jobs is None or n_jobs <= 1 or len(items) <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(fn, items))
