"""Shared sink for the one-line acceptance verdicts."""

import functools
import time

LINES: list[str] = []


def criterion(number: int, title: str, seconds: float):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                note = fn(*args, **kwargs)
            except BaseException as exc:
                elapsed = time.perf_counter() - start
                LINES.append(f"FAIL  criterion {number:>2}: {title} ({elapsed:.2f}s) -- {type(exc).__name__}: "
                             f"{str(exc).splitlines()[0] if str(exc) else ''}")
                raise
            elapsed = time.perf_counter() - start
            ok = elapsed < seconds
            extra = f" -- {note}" if note else ""
            LINES.append(f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {title} ({elapsed:.2f}s, "
                         f"limit {seconds:g}s){extra}")
            assert ok, f"took {elapsed:.2f}s, limit {seconds}s"
        return run
    return wrap
