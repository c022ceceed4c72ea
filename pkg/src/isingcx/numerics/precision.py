from __future__ import annotations

import threading
from contextlib import contextmanager

from flint import ctx

_lock = threading.RLock()


@contextmanager
def working_precision(bits: int):
    """Temporarily raise flint's global working precision to at least ``bits``.

    flint keeps a single process-wide precision; the lock keeps concurrent
    callers from clobbering each other's setting.
    """
    with _lock:
        saved = ctx.prec
        ctx.prec = max(int(bits), saved)
        try:
            yield
        finally:
            ctx.prec = saved
