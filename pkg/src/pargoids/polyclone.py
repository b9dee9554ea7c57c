"""Unary polynomial operations of a finite pargoid.

The unary polynomial clone is the least set of partial self-maps containing
the identity and every total constant map, closed under the pointwise
product (p.q)(x) = p(x).q(x). Operations are extensional: the clone is
deduplicated by graph, and each operation keeps the first term that
produced it as a witness.

Closure is a worklist fixpoint over graphs, vectorized with numpy: graphs
are uint8 matrix rows using the carrier size as the "undefined" sentinel,
so one fancy-indexed lookup computes a whole batch of pointwise products.
Recorded products (the factorization edges) take memory quadratic in the
final op count; the op budget is the practical bound.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import InputError, ResourceExhausted
from .pargoid import ElementId, _ix, apply

DEFAULT_BUDGET = 100_000
READINGS = ("total", "on-domain")

# uint8 graphs reserve one value for the undefined sentinel
MAX_CARRIER = 255

# The factorization table is int32 and m-by-m; past this many ops it would
# exceed 256 MiB, so closure stops there with budget_hit even when the
# requested op budget is larger.
MAX_EDGE_OPS = 8192


@dataclass(frozen=True)
class Var:
    """The single variable."""


@dataclass(frozen=True)
class Const:
    value: ElementId


@dataclass(frozen=True)
class Prod:
    left: "PolyTerm"
    right: "PolyTerm"


PolyTerm = Var | Const | Prod

VAR = Var()


def eval_term(g, t, e):
    """Value of the term at e, or None where evaluation diverges."""
    if isinstance(t, Var):
        return g.element(_ix(g, e))
    if isinstance(t, Const):
        return g.element(_ix(g, t.value))
    left = eval_term(g, t.left, e)
    if left is None:
        return None
    right = eval_term(g, t.right, e)
    if right is None:
        return None
    return apply(g, left, right)


def term_graph(g, t):
    """The term's value table over the whole carrier; None = diverges.

    Shared subterms are evaluated once, so witness terms of deep clones
    (one new product node per op, children shared by reference) stay
    linear instead of exponential.
    """
    val = {}
    stack = [t]
    while stack:
        node = stack.pop()
        if id(node) in val:
            continue
        if isinstance(node, Var):
            val[id(node)] = tuple(range(g.size))
        elif isinstance(node, Const):
            val[id(node)] = (_ix(g, node.value),) * g.size
        else:
            left = val.get(id(node.left))
            right = val.get(id(node.right))
            if left is None or right is None:
                stack.append(node)
                if left is None:
                    stack.append(node.left)
                if right is None:
                    stack.append(node.right)
            else:
                val[id(node)] = tuple(
                    None if left[i] is None or right[i] is None
                    else g.table.get((left[i], right[i]))
                    for i in range(g.size))
    return val[id(t)]


def term_size(t):
    """Node count: leaves are 1, a product is 1 + both sides."""
    if isinstance(t, Prod):
        return 1 + term_size(t.left) + term_size(t.right)
    return 1


def format_term(t):
    """Prefix syntax: var, (const b), (prod l r)."""
    if isinstance(t, Var):
        return "var"
    if isinstance(t, Const):
        return f"(const {t.value.name})"
    return f"(prod {format_term(t.left)} {format_term(t.right)})"


_TERM_WORD = re.compile(r"[A-Za-z0-9_]+")


def _tokenize_term(s):
    toks = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch in " \t":
            i += 1
        elif ch in "()":
            toks.append((ch, i))
            i += 1
        else:
            m = _TERM_WORD.match(s, i)
            if not m:
                raise InputError(f"unexpected character {ch!r} in term", 1, i + 1)
            toks.append((m.group(), i))
            i = m.end()
    return toks


def _parse_term_at(g, toks, k, end):
    if k >= len(toks):
        raise InputError("unexpected end of term", 1, end + 1)
    text, pos = toks[k]
    if text == "var":
        return VAR, k + 1
    if text != "(":
        raise InputError(f"expected 'var' or '(', got {text!r}", 1, pos + 1)
    if k + 1 >= len(toks):
        raise InputError("unexpected end of term", 1, end + 1)
    head, hpos = toks[k + 1]
    if head == "const":
        if k + 2 >= len(toks):
            raise InputError("unexpected end of term", 1, end + 1)
        name, npos = toks[k + 2]
        if name in "()":
            raise InputError("expected an element name", 1, npos + 1)
        try:
            term = Const(g.element(name))
        except InputError as exc:
            raise InputError(exc.message, 1, npos + 1) from None
        k += 3
    elif head == "prod":
        left, k = _parse_term_at(g, toks, k + 2, end)
        right, k = _parse_term_at(g, toks, k, end)
        term = Prod(left, right)
    else:
        raise InputError(f"expected 'const' or 'prod', got {head!r}", 1, hpos + 1)
    if k >= len(toks):
        raise InputError("unexpected end of term", 1, end + 1)
    if toks[k][0] != ")":
        raise InputError("expected ')'", 1, toks[k][1] + 1)
    return term, k + 1


def parse_term(g, s):
    """Inverse of format_term; constant names resolve against the carrier."""
    toks = _tokenize_term(s)
    term, k = _parse_term_at(g, toks, 0, len(s))
    if k != len(toks):
        raise InputError("trailing input after term", 1, toks[k][1] + 1)
    return term


@dataclass(frozen=True)
class UnaryPolyOp:
    """One clone member: value table, first witness term, and flags.

    graph maps each carrier index to a result index or None. The three
    flags are meaningful only after classify has run on the owning clone.
    """

    graph: tuple
    witness: PolyTerm
    is_trivial: bool = False
    is_constant: bool = False
    is_definite: bool = False

    @property
    def domain(self):
        return tuple(i for i, v in enumerate(self.graph) if v is not None)

    def converges_on(self, e):
        return self.graph[e if isinstance(e, int) else e.index] is not None


class CloneResult:
    """Clone ops in construction order plus the recorded product edges.

    Treated as immutable once built; the backing arrays are read-only.
    reading is None until classify fills the flags.
    """

    __slots__ = ("ops", "budget_hit", "reading", "carrier_size",
                 "_graphs", "_table", "_index")

    def __init__(self, ops, budget_hit, reading, carrier_size, graphs, table, index):
        self.ops = ops
        self.budget_hit = budget_hit
        self.reading = reading
        self.carrier_size = carrier_size
        self._graphs = graphs
        self._table = table
        self._index = index

    @property
    def op_count(self):
        return len(self.ops)

    def find(self, graph):
        """Index of the op with this graph, or None if absent."""
        if len(graph) != self.carrier_size:
            raise InputError("graph length does not match the carrier")
        key = bytes(self.carrier_size if v is None else v for v in graph)
        return self._index.get(key)

    def product_edge(self, i, j):
        """Recorded index of ops[i]·ops[j], or None when not recorded."""
        if not (0 <= i < len(self.ops) and 0 <= j < len(self.ops)):
            raise InputError("op index out of range")
        r = int(self._table[i, j])
        return None if r < 0 else r


def _graph_tuple(row, undef):
    return tuple(None if v == undef else int(v) for v in row)


def compute_clone(g, budget=DEFAULT_BUDGET, *, exact=False):
    """Close {identity, constants} under pointwise product, up to budget ops.

    Ops are numbered in discovery order: identity, then the constant map of
    each element (skipping graph duplicates), then products in worklist
    order — for the op under work, pairs (earlier, it) before (it, earlier).
    The budget counts ops, not products; reaching it sets budget_hit, or
    raises when the caller asked for exactness. Budgets above MAX_EDGE_OPS
    are clamped to it so the quadratic factorization table stays bounded.
    """
    n = g.size
    if n > MAX_CARRIER:
        raise InputError(f"carrier too large for clone computation (max {MAX_CARRIER})")
    if budget < n + 1:
        raise InputError(f"clone budget must be at least {n + 1}")
    op_cap = min(budget, MAX_EDGE_OPS)
    undef = n
    nn = n + 1
    mult = np.full(nn * nn, undef, dtype=np.uint8)
    for (a, b), c in g.table.items():
        mult[a * nn + b] = c

    cap = 256
    while cap < nn:
        cap *= 2
    graphs = np.full((cap, n), undef, dtype=np.uint8)
    table = np.full((cap, cap), -1, dtype=np.int32)
    witnesses = []
    index = {}
    m = 0

    def seed(row, term):
        nonlocal m
        key = row.tobytes()
        if key not in index:
            graphs[m] = row
            index[key] = m
            witnesses.append(term)
            m += 1

    seed(np.arange(n, dtype=np.uint8), VAR)
    for e in range(n):
        seed(np.full(n, e, dtype=np.uint8), Const(g.element(e)))

    budget_hit = False
    done = 0
    while done < m:
        i = done
        k = 2 * i + 1
        left = np.empty(k, dtype=np.intp)
        right = np.empty(k, dtype=np.intp)
        left[: i + 1] = np.arange(i + 1)
        right[: i + 1] = i
        left[i + 1:] = i
        right[i + 1:] = np.arange(i)
        rows = mult[graphs[left].astype(np.intp) * nn + graphs[right].astype(np.intp)]
        if n <= 8:
            # pack rows into single integers; uint64 unique sorts far
            # faster than the void-dtype row sort of unique(axis=0)
            padded = np.zeros((k, 8), dtype=np.uint8)
            padded[:, :n] = rows
            _, first, inv = np.unique(padded.reshape(-1).view(np.uint64),
                                      return_index=True, return_inverse=True)
        else:
            _, first, inv = np.unique(rows, axis=0, return_index=True,
                                      return_inverse=True)
        inv = inv.reshape(-1)
        res = np.full(len(first), -1, dtype=np.int64)
        for u in np.argsort(first, kind="stable"):
            p = int(first[u])
            key = rows[p].tobytes()
            op = index.get(key)
            if op is None:
                if m >= op_cap:
                    budget_hit = True
                    break
                if m == cap:
                    cap *= 2
                    grown = np.full((cap, n), undef, dtype=np.uint8)
                    grown[:m] = graphs[:m]
                    graphs = grown
                    grown = np.full((cap, cap), -1, dtype=np.int32)
                    grown[:m, :m] = table[:m, :m]
                    table = grown
                op = m
                graphs[m] = rows[p]
                index[key] = m
                witnesses.append(Prod(witnesses[int(left[p])], witnesses[int(right[p])]))
                m += 1
            res[u] = op
        results = res[inv]
        ok = results >= 0
        table[left[ok], right[ok]] = results[ok]
        if budget_hit:
            break
        done += 1

    if budget_hit and exact:
        raise ResourceExhausted("clone", budget)
    graphs = graphs[:m].copy()
    table = table[:m, :m].copy()
    graphs.setflags(write=False)
    table.setflags(write=False)
    ops = tuple(
        UnaryPolyOp(_graph_tuple(graphs[i], undef), witnesses[i]) for i in range(m)
    )
    return CloneResult(ops, budget_hit, None, n, graphs, table, index)


def classify(clone, reading="total"):
    """New CloneResult with trivial/constant/definite flags filled.

    Definiteness is the least fixpoint over all recorded factorization
    edges: a nontrivial op r = p·q becomes definite when q is nonconstant
    or p is already definite. Under the "total" reading a constant op is a
    total constant map; under "on-domain" any op with at most one distinct
    defined value counts as constant (the empty op vacuously so).
    """
    if reading not in READINGS:
        raise InputError(f"unknown constant reading {reading!r}")
    if clone.budget_hit:
        raise InputError("cannot classify a clone truncated by its budget")
    graphs = clone._graphs
    m, n = graphs.shape
    undef = n
    defined = graphs != undef
    total = defined.all(axis=1)
    ident = total & (graphs == np.arange(n, dtype=np.uint8)[None, :]).all(axis=1)
    const_total = total & (graphs == graphs[:, :1]).all(axis=1)
    trivial = ident | const_total
    if reading == "total":
        constant = const_total
    else:
        hi = np.where(defined, graphs, 0).max(axis=1)
        lo = np.where(defined, graphs, 255).min(axis=1)
        constant = ~defined.any(axis=1) | (hi == lo)

    table = clone._table
    nontrivial = ~trivial
    definite = np.zeros(m, dtype=bool)
    cols = np.flatnonzero(~constant)
    if cols.size:
        seeds = table[:, cols].ravel()
        seeds = np.unique(seeds[seeds >= 0])
        seeds = seeds[nontrivial[seeds]]
        definite[seeds] = True
    frontier = np.flatnonzero(definite)
    while frontier.size:
        res = table[frontier, :].ravel()
        res = np.unique(res[res >= 0])
        new = res[nontrivial[res] & ~definite[res]]
        definite[new] = True
        frontier = new

    ops = tuple(
        UnaryPolyOp(op.graph, op.witness,
                    bool(trivial[i]), bool(constant[i]), bool(definite[i]))
        for i, op in enumerate(clone.ops)
    )
    return CloneResult(ops, False, reading, clone.carrier_size,
                       graphs, table, clone._index)


def lemma2_check(clone):
    """Normal-form check for nonconstant indefinite ops.

    Every nonconstant indefinite op must be the identity or extensionally
    equal to q·(const b) for some nonconstant indefinite q and element b.
    Returns (True, None), or (False, first violating op) in op order.
    """
    if clone.reading is None:
        raise InputError("classify the clone before the normal-form check")
    n = clone.carrier_size
    flagged = [i for i, op in enumerate(clone.ops)
               if not op.is_constant and not op.is_definite]
    ident_idx = clone.find(tuple(range(n)))
    const_cols = np.array([clone.find((b,) * n) for b in range(n)], dtype=np.intp)
    rows = np.array(flagged, dtype=np.intp)
    reachable = set()
    if rows.size and const_cols.size:
        sub = clone._table[np.ix_(rows, const_cols)]
        reachable = {int(v) for v in np.unique(sub) if v >= 0}
    for i in flagged:
        if i != ident_idx and i not in reachable:
            return False, clone.ops[i]
    return True, None
