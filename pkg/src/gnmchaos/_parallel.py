from concurrent.futures import ProcessPoolExecutor


def ordered_map(fn, items, workers=1):
    """``list(map(fn, items))``, optionally spread over worker processes.

    Results are always returned in input order, so the output does not
    depend on ``workers``.
    """
    items = list(items)
    if workers is None or workers <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))
