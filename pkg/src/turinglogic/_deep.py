"""Run deeply recursive searches on a worker thread with a large stack."""
from __future__ import annotations

import sys
import threading

_SHALLOW = 600
_STACK_BYTES = 512 * 1024 * 1024
_lock = threading.Lock()


def call(fn, *args, depth_hint: int = 0, **kwargs):
    """``fn(*args, **kwargs)``, moved to a big-stack thread when the expected
    recursion depth exceeds what the default stack safely allows."""
    if depth_hint < _SHALLOW:
        return fn(*args, **kwargs)
    box = {}

    def run():
        try:
            box["value"] = fn(*args, **kwargs)
        except BaseException as err:  # re-raised on the calling thread
            box["error"] = err

    with _lock:
        need = 50 * depth_hint + 10_000
        if sys.getrecursionlimit() < need:
            sys.setrecursionlimit(need)
        old = threading.stack_size(_STACK_BYTES)
        try:
            worker = threading.Thread(target=run, name="turinglogic-search")
            worker.start()
        finally:
            threading.stack_size(old)
    worker.join()
    if "error" in box:
        raise box["error"]
    return box["value"]
