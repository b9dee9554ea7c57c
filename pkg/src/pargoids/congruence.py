"""Convergence-profile congruence of a pargoid.

Two elements are equivalent exactly when every unary polynomial operation
converges on both or neither, so the partition groups elements by their
convergence profile across the clone. It is computed only from fully
closed clones: a truncated clone would merge elements a missing operation
could separate.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .pargoid import _ix


@dataclass(frozen=True)
class Partition:
    """Canonical partition: members sorted, blocks ordered by smallest member."""

    blocks: tuple
    class_of: tuple


def make_partition(blocks, n):
    """Validate disjoint cover of range(n) and put it in canonical form."""
    blocks = tuple(sorted(tuple(sorted(set(b))) for b in blocks))
    class_of = [-1] * n
    for k, blk in enumerate(blocks):
        if not blk:
            raise InputError("partition blocks must be nonempty")
        for e in blk:
            if not 0 <= e < n:
                raise InputError(f"element index {e} out of range")
            if class_of[e] != -1:
                raise InputError(f"partition blocks overlap on element {e}")
            class_of[e] = k
    if -1 in class_of:
        raise InputError("partition blocks do not cover the carrier")
    return Partition(blocks, tuple(class_of))


def leibniz(g, clone):
    """Partition of the carrier by convergence profile over the clone.

    Refines the one-block partition by each op's domain; the result is
    order-independent since it equals profile equality.
    """
    if clone.budget_hit:
        raise InputError("the congruence needs a fully closed clone")
    blocks = [list(range(g.size))]
    for op in clone.ops:
        dom = set(op.domain)
        refined = []
        for blk in blocks:
            ins = [e for e in blk if e in dom]
            outs = [e for e in blk if e not in dom]
            if ins and outs:
                refined.append(ins)
                refined.append(outs)
            else:
                refined.append(blk)
        blocks = refined
    return make_partition(blocks, g.size)


def is_congruence(g, part):
    """Whether products respect the partition.

    True when equivalent pairs applied to equivalent pairs land in the
    same block; otherwise (False, (a, b, c, d)) for the first quadruple
    with a ≡ b, c ≡ d, both ac and bd defined, but ac not equivalent
    to bd.
    """
    if len(part.class_of) != g.size:
        raise InputError("partition does not match the carrier")
    cls = part.class_of
    first = {}
    for (a, c), ac in sorted(g.table.items()):
        key = (cls[a], cls[c])
        if key not in first:
            first[key] = (a, c, cls[ac])
        else:
            a0, c0, res_cls = first[key]
            if cls[ac] != res_cls:
                quad = (a0, a, c0, c)
                return False, tuple(g.element(e) for e in quad)
    return True, None


def separator(g, clone, a, c):
    """First clone op converging on exactly one of a and c, if any.

    Present exactly when the two elements have different convergence
    profiles, i.e. lie in different blocks of the partition.
    """
    if clone.budget_hit:
        raise InputError("separator search needs a fully closed clone")
    i, j = _ix(g, a), _ix(g, c)
    for op in clone.ops:
        if (op.graph[i] is None) != (op.graph[j] is None):
            return op
    return None
