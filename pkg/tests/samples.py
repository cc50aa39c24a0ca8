"""Shared algebra samples for the unit tests."""

from functools import lru_cache

from relcomm.algebra import is_associative
from relcomm.corpus import bundled_groups, corpus_loops


@lru_cache(maxsize=None)
def groups():
    return tuple(e.algebra() for e in bundled_groups())


@lru_cache(maxsize=None)
def loops(stride=97):
    """All loops of order <= 5 plus every ``stride``-th loop of order 6."""
    entries = corpus_loops(6)
    small = [e for e in entries if e.order <= 5]
    sixes = [e for e in entries if e.order == 6][::stride]
    return tuple(e.algebra() for e in small + sixes)


@lru_cache(maxsize=None)
def nonassociative_loops():
    return tuple(A for A in loops() if not is_associative(A))


def small():
    return groups() + loops()
