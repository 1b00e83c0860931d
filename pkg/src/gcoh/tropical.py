"""Min-plus expressions predicting p-torsion exponents.

The semiring is the integers with minimum as addition and integer sum as
multiplication; infinity is the additive zero.  To a graph we attach a
tropical rational function in its vertex variables whose value at the
weight valuations equals the p-torsion exponent of the first cohomology,
for every odd prime p.  The function is a tropical product of one factor
per connected bipartite proper subgraph: the clamped gap between the
subgraph's boundary valuation and its internal level.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Iterable, Mapping, Optional, Sequence, Union

from .graphs import (
    Subgraph,
    WeightedGraph,
    bipartition,
    components,
    edge_boundary,
    full_subgraph,
    is_connected,
)

DEFAULT_VERTEX_CAP = 10
CAP_ENV_VAR = "GCOH_MAX_SUBGRAPHS"


@dataclass(frozen=True, order=True)
class TropicalValue:
    """An integer or the absorbing infinity (the min-plus zero)."""

    finite: bool
    value: int = 0

    def __repr__(self) -> str:
        return str(self.value) if self.finite else "inf"


INF = TropicalValue(False)


def tval(x: Union[int, TropicalValue, None]) -> TropicalValue:
    if isinstance(x, TropicalValue):
        return x
    if x is None:
        return INF
    return TropicalValue(True, int(x))


def t_plus(a: TropicalValue, b: TropicalValue) -> TropicalValue:
    if not a.finite:
        return b
    if not b.finite:
        return a
    return TropicalValue(True, min(a.value, b.value))


def t_times(a: TropicalValue, b: TropicalValue) -> TropicalValue:
    if not a.finite or not b.finite:
        return INF
    return TropicalValue(True, a.value + b.value)


def t_quotient(a: TropicalValue, b: TropicalValue) -> TropicalValue:
    if not b.finite:
        raise ZeroDivisionError("tropical division by infinity")
    if not a.finite:
        return INF
    return TropicalValue(True, a.value - b.value)


# --- expressions -------------------------------------------------------------

class TropicalExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Var(TropicalExpr):
    name: str


@dataclass(frozen=True)
class Const(TropicalExpr):
    value: TropicalValue


@dataclass(frozen=True)
class Plus(TropicalExpr):
    children: tuple[TropicalExpr, ...]


@dataclass(frozen=True)
class Times(TropicalExpr):
    children: tuple[TropicalExpr, ...]


@dataclass(frozen=True)
class Quotient(TropicalExpr):
    numerator: TropicalExpr
    denominator: TropicalExpr


@dataclass(frozen=True)
class ClampAtZero(TropicalExpr):
    child: TropicalExpr


def plus(children: Iterable[TropicalExpr]) -> TropicalExpr:
    kids = tuple(children)
    if not kids:
        return Const(INF)  # empty minimum
    if len(kids) == 1:
        return kids[0]
    return Plus(kids)


def times(children: Iterable[TropicalExpr]) -> TropicalExpr:
    kids = tuple(children)
    if not kids:
        return Const(tval(0))  # empty product is the unit
    if len(kids) == 1:
        return kids[0]
    return Times(kids)


def tropical_max(children: Sequence[TropicalExpr]) -> TropicalExpr:
    """Maximum as a tropical quotient: the full product divided by the
    minimum of the products that omit one term."""
    if not children:
        raise ValueError("maximum of nothing")
    if len(children) == 1:
        return children[0]
    total = times(children)
    drop_one = plus(times(c for j, c in enumerate(children) if j != i)
                    for i in range(len(children)))
    return Quotient(total, drop_one)


def eval_expr(e: TropicalExpr,
              assignment: Mapping[str, Union[int, TropicalValue]]) -> TropicalValue:
    """Evaluate with the min-plus semantics.

    Expressions built here share subtrees aggressively (every edge
    monomial of a graph is one object), so results are memoized per node
    identity for the duration of the call.
    """
    cache: dict[int, TropicalValue] = {}

    def go(node: TropicalExpr) -> TropicalValue:
        key = id(node)
        hit = cache.get(key)
        if hit is not None:
            return hit
        if isinstance(node, Var):
            if node.name not in assignment:
                raise KeyError(f"unbound variable {node.name!r}")
            out = tval(assignment[node.name])
        elif isinstance(node, Const):
            out = node.value
        elif isinstance(node, Plus):
            out = INF
            for c in node.children:
                out = t_plus(out, go(c))
        elif isinstance(node, Times):
            out = tval(0)
            for c in node.children:
                out = t_times(out, go(c))
        elif isinstance(node, Quotient):
            out = t_quotient(go(node.numerator), go(node.denominator))
        elif isinstance(node, ClampAtZero):
            v = go(node.child)
            out = v if not v.finite else tval(max(v.value, 0))
        else:
            raise TypeError(f"not a tropical expression: {node!r}")
        cache[key] = out
        return out

    return go(e)


def eval_gcd_product(e: TropicalExpr, assignment: Mapping[str, int]) -> int:
    """The gcd/product-semiring shadow of a quotient- and clamp-free
    expression (sum becomes gcd, product becomes multiplication)."""
    if isinstance(e, Var):
        return int(assignment[e.name])
    if isinstance(e, Const):
        if not e.value.finite:
            return 0  # the zero of the gcd/product semiring
        raise ValueError("finite constants have no canonical preimage")
    if isinstance(e, Plus):
        out = 0
        for c in e.children:
            out = gcd(out, eval_gcd_product(c, assignment))
        return out
    if isinstance(e, Times):
        out = 1
        for c in e.children:
            out *= eval_gcd_product(c, assignment)
        return out
    raise ValueError("expression uses quotient or clamp")


def variables(e: TropicalExpr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Const):
        return set()
    if isinstance(e, Plus) or isinstance(e, Times):
        out: set[str] = set()
        for c in e.children:
            out |= variables(c)
        return out
    if isinstance(e, Quotient):
        return variables(e.numerator) | variables(e.denominator)
    if isinstance(e, ClampAtZero):
        return variables(e.child)
    raise TypeError(f"not a tropical expression: {e!r}")


# --- graph-attached expressions ----------------------------------------------

def _factor(vset, eset, boundary, mono, varcache) -> TropicalExpr:
    """One factor, built from shared monomial/variable nodes."""
    upper = plus(mono[e] for e in sorted(boundary))
    internal = [mono[e] for e in sorted(eset)]
    vertex_min = plus(varcache[v] for v in sorted(vset))
    lower = tropical_max(internal + [vertex_min])
    return ClampAtZero(Quotient(upper, lower))


def g_delta(d: Subgraph) -> TropicalExpr:
    """Factor of a connected bipartite proper subgraph: the clamped count
    of levels at which it is an admissible component.

    Numerator: minimum over boundary-edge monomials.  Denominator:
    maximum of the internal-edge monomials and the vertex minimum (the
    vertex term only binds when there are no internal edges).
    """
    if not is_connected(d) or bipartition(d) is None:
        raise ValueError("factor requires a connected bipartite subgraph")
    boundary = edge_boundary(d)
    if not boundary:
        raise ValueError("factor requires a proper subgraph (nonempty boundary)")
    mono = {e: Times((Var(e[0]), Var(e[1])))
            for e in set(boundary) | set(d.edge_set)}
    varcache = {v: Var(v) for v in d.vertex_set}
    return _factor(d.vertex_set, d.edge_set, boundary, mono, varcache)


def subgraph_cap(cap: Optional[int] = None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get(CAP_ENV_VAR)
    return int(env) if env else DEFAULT_VERTEX_CAP


class EnumerationCapExceeded(ValueError):
    pass


def _connected_two_colorable(vs: tuple, es: tuple) -> bool:
    adj: dict[str, list[str]] = {v: [] for v in vs}
    for u, w in es:
        adj[u].append(w)
        adj[w].append(u)
    colour = {vs[0]: 0}
    queue = [vs[0]]
    while queue:
        v = queue.pop()
        for w in adj[v]:
            if w not in colour:
                colour[w] = colour[v] ^ 1
                queue.append(w)
            elif colour[w] == colour[v]:
                return False
    return len(colour) == len(vs)


def _candidate_subgraphs(g: WeightedGraph) -> Iterable[tuple[tuple, tuple, list]]:
    """(vertices, edges, boundary) of every connected bipartite subgraph
    with an arbitrary subset of the induced edges, except the full graph.

    Factors whose edge set is not realized as a reduction level for a
    given valuation evaluate to zero there, so the over-enumeration is
    harmless for evaluation and faithful to the defining product.
    """
    verts = g.vertices
    all_edges = g.edges
    full_key = (verts, all_edges)
    for k in range(1, len(verts) + 1):
        for vs in combinations(verts, k):
            vset = set(vs)
            induced = tuple(e for e in all_edges
                            if e[0] in vset and e[1] in vset)
            touching = [e for e in all_edges
                        if e[0] in vset or e[1] in vset]
            for r in range(len(induced) + 1):
                for es in combinations(induced, r):
                    if (vs, es) == full_key:
                        continue
                    if not _connected_two_colorable(vs, es):
                        continue
                    chosen = set(es)
                    boundary = [e for e in touching if e not in chosen]
                    yield vs, es, boundary


def z_gamma(g: WeightedGraph, cap: Optional[int] = None) -> TropicalExpr:
    """Tropical product of the factors over all connected bipartite
    proper subgraphs; its value at the weight valuations is the p-torsion
    exponent for every odd prime p.

    A bipartite connected graph needs a correction: the factors count
    every admissible (subgraph, level) pair, but the pairs on the
    distinguished descent chain below the whole graph's infinite tail do
    not carry torsion, and there is exactly one such pair per level from
    just above the smallest vertex valuation up to the largest internal
    edge valuation.  Dividing by that gap (a tropical quotient) makes a
    single edge come out as min(a, b) = the gcd valuation, as it must.

    Disconnected graphs multiply their components' expressions.  Graphs
    with more vertices than the cap (default 10, GCOH_MAX_SUBGRAPHS
    overrides) are refused: the enumeration is exponential.
    """
    limit = subgraph_cap(cap)
    if len(g.vertices) > limit:
        raise EnumerationCapExceeded(
            f"{len(g.vertices)} vertices exceeds the enumeration cap {limit}; "
            f"raise {CAP_ENV_VAR} to override")
    comps = components(full_subgraph(g))
    if len(comps) > 1:
        return times(z_gamma(c.as_graph(), limit) for c in comps)
    mono = {e: Times((Var(e[0]), Var(e[1]))) for e in g.edges}
    varcache = {v: Var(v) for v in g.vertices}
    product = times(_factor(vs, es, boundary, mono, varcache)
                    for vs, es, boundary in _candidate_subgraphs(g))
    if g.edges and bipartition(full_subgraph(g)) is not None:
        chain_gap = Quotient(
            tropical_max([mono[e] for e in g.edges]),
            plus(varcache[v] for v in g.vertices))
        return Quotient(product, chain_gap)
    return product


def elementary_symmetric(i: int, vars: Sequence[str]) -> TropicalExpr:
    """Sum over i-subsets of the product of the subset: evaluates to the
    sum of the i smallest assigned values."""
    if not 1 <= i <= len(vars):
        raise ValueError(f"need 1 <= i <= {len(vars)}, got {i}")
    return plus(times(Var(v) for v in subset)
                for subset in combinations(vars, i))


def z_complete(n: int, names: Optional[Sequence[str]] = None) -> TropicalExpr:
    """Closed form for the complete graph on n >= 3 vertices: the minimum
    to the power n-3, times the sum of the three smallest."""
    if n < 3:
        raise ValueError("complete-graph formula needs n >= 3")
    if names is None:
        names = [f"v{i}" for i in range(n)]
    if len(names) != n:
        raise ValueError("name count does not match n")
    s1 = elementary_symmetric(1, names)
    s3 = elementary_symmetric(3, names)
    return times([s1] * (n - 3) + [s3])


# --- rendering / parsing ------------------------------------------------------

PLUS_SIGN = "⊕"   # (+)
TIMES_SIGN = "⊙"  # (.)
DIV_SIGN = "⊘"    # (/)


def render(e: TropicalExpr) -> str:
    """Fully parenthesized min-plus notation; `parse` reverses it."""
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Const):
        return "inf" if not e.value.finite else str(e.value.value)
    if isinstance(e, Plus):
        return "(" + f" {PLUS_SIGN} ".join(render(c) for c in e.children) + ")"
    if isinstance(e, Times):
        return "(" + f" {TIMES_SIGN} ".join(render(c) for c in e.children) + ")"
    if isinstance(e, Quotient):
        return f"({render(e.numerator)} {DIV_SIGN} {render(e.denominator)})"
    if isinstance(e, ClampAtZero):
        return f"max({render(e.child)}, 0)"
    raise TypeError(f"not a tropical expression: {e!r}")


def _tokenize(text: str) -> list[str]:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()," or ch in (PLUS_SIGN, TIMES_SIGN, DIV_SIGN):
            out.append(ch)
            i += 1
        elif text.startswith("max(", i):
            out.append("max(")
            i += 4
        else:
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] in "_-"):
                j += 1
            if j == i:
                raise ValueError(f"cannot tokenize at {text[i:i+10]!r}")
            out.append(text[i:j])
            i = j
    return out


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: Optional[str] = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected!r}, got {tok!r}")
        self.pos += 1
        return tok

    def atom(self) -> TropicalExpr:
        tok = self.take()
        if tok == "max(":
            child = self.expression()
            self.take(",")
            zero = self.take()
            if zero != "0":
                raise ValueError("clamp must be against 0")
            self.take(")")
            return ClampAtZero(child)
        if tok == "(":
            first = self.expression()
            op = self.peek()
            if op == ")":
                self.take(")")
                return first
            if op not in (PLUS_SIGN, TIMES_SIGN, DIV_SIGN):
                raise ValueError(f"unexpected token {op!r}")
            parts = [first]
            while self.peek() == op:
                self.take(op)
                parts.append(self.expression())
            self.take(")")
            if op == PLUS_SIGN:
                return plus(parts)
            if op == TIMES_SIGN:
                return times(parts)
            if len(parts) != 2:
                raise ValueError("quotient takes exactly two operands")
            return Quotient(parts[0], parts[1])
        if tok == "inf":
            return Const(INF)
        if tok.lstrip("-").isdigit():
            return Const(tval(int(tok)))
        return Var(tok)

    def expression(self) -> TropicalExpr:
        return self.atom()


def parse(text: str) -> TropicalExpr:
    parser = _Parser(_tokenize(text))
    expr = parser.expression()
    if parser.peek() is not None:
        raise ValueError(f"trailing tokens at {parser.pos}")
    return expr
