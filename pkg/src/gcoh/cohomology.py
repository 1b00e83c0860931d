"""Cochain complexes of weighted graphs and their cohomology.

The complex lives in degrees 0 and 1: degree 0 is spanned by vertices,
degree 1 by edges, and the differential sends a vertex v to the sum of
its incident edges e(v,w) weighted by the opposite endpoint's weight k_w.
H^0 is the kernel (always free), H^1 the cokernel, computed exactly via
Smith normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .graphs import (
    Edge,
    Subgraph,
    WeightedGraph,
    boundary_valuation,
    components,
    full_subgraph,
    reduce_graph,
    require_prime,
)
from .intlinalg import (
    AbelianGroup,
    IntMatrix,
    cokernel_structure,
    kernel_mod,
    matrix_from_columns,
    solve_mod,
    span_exponent_mod,
)

GENERATION_S_CAP = 4


@dataclass(frozen=True)
class Chain:
    """Coefficient vector on vertices (degree 0) or edges (degree 1).

    `modulus` is None for integer coefficients or (p, s) for Z/p**s, in
    which case coefficients are kept reduced into [0, p**s).
    """

    degree: int
    coefficients: Mapping
    modulus: Optional[tuple[int, int]] = None

    def __post_init__(self):
        if self.degree not in (0, 1):
            raise ValueError("chain degree must be 0 or 1")
        if self.modulus is not None:
            p, s = self.modulus
            ps = p ** s
            if any(not 0 <= c < ps for c in self.coefficients.values()):
                raise ValueError("coefficients not reduced modulo p**s")

    def coefficient(self, label) -> int:
        return self.coefficients.get(label, 0)

    def vector(self, labels) -> tuple[int, ...]:
        return tuple(self.coefficient(l) for l in labels)

    def reduced(self, p: int, s: int) -> "Chain":
        ps = p ** s
        return Chain(self.degree,
                     {l: c % ps for l, c in self.coefficients.items() if c % ps},
                     (p, s))


def chain_from_vector(degree: int, labels, vec,
                      modulus: Optional[tuple[int, int]] = None) -> Chain:
    return Chain(degree, {l: c for l, c in zip(labels, vec) if c}, modulus)


def d0_matrix(g: Subgraph) -> IntMatrix:
    """Matrix of the differential: rows are edges, columns vertices.

    The row of edge e(v,w) holds k_w in column v and k_v in column w.
    """
    verts = g.vertices
    edges = g.edges
    col = {v: i for i, v in enumerate(verts)}
    rows = []
    for u, v in edges:
        row = [0] * len(verts)
        row[col[u]] = g.parent.weight[v]
        row[col[v]] = g.parent.weight[u]
        rows.append(row)
    return IntMatrix(rows, ncols=len(verts), row_labels=edges, col_labels=verts)


def d0_edge_matrix(g: Subgraph) -> IntMatrix:
    """Edge-weighted variant: both endpoint columns carry k_v * k_w."""
    verts = g.vertices
    edges = g.edges
    col = {v: i for i, v in enumerate(verts)}
    rows = []
    for u, v in edges:
        kk = g.parent.weight[u] * g.parent.weight[v]
        row = [0] * len(verts)
        row[col[u]] = kk
        row[col[v]] = kk
        rows.append(row)
    return IntMatrix(rows, ncols=len(verts), row_labels=edges, col_labels=verts)


def apply_d0(g: Subgraph, z: Chain) -> Chain:
    """Differential of a degree-0 chain, as a chain on the edges of g."""
    if z.degree != 0:
        raise ValueError("apply_d0 expects a degree-0 chain")
    out: dict[Edge, int] = {}
    w = g.parent.weight
    for u, v in g.edge_set:
        c = w[v] * z.coefficient(u) + w[u] * z.coefficient(v)
        if z.modulus is not None:
            p, s = z.modulus
            c %= p ** s
        if c:
            out[(u, v)] = c
    return Chain(1, out, z.modulus)


def cohomology_groups(g: Subgraph) -> tuple[AbelianGroup, AbelianGroup]:
    """(H0, H1): the kernel is free, the cokernel carries the torsion."""
    a = d0_matrix(g)
    h1 = cokernel_structure(a)
    from .intlinalg import smith_normal_form
    h0 = AbelianGroup(a.cols - smith_normal_form(a).rank)
    return h0, h1


def torsion_order_p(g: Subgraph, p: int) -> int:
    """Exponent N such that the p-torsion of H1 has order p**N."""
    require_prime(p)
    _, h1 = cohomology_groups(g)
    return h1.p_exponent(p)


def critical_cohomology_dim(g: Subgraph, p: int, s: int) -> int:
    """Dimension over Z/p of coker(H0(Z/p**(s-1)) -> H0(Z/p**s)).

    The map includes coefficients by multiplication with p.  For s = 1
    the source is trivial and this is just dim H0(Z/p).
    """
    require_prime(p)
    if s < 1:
        raise ValueError("modulus exponent must be >= 1")
    a = d0_matrix(g)
    n = a.cols
    gens_s = kernel_mod(a, p, s)
    total = span_exponent_mod(gens_s, n, p, s)
    if s == 1:
        image = 0
    else:
        gens_prev = kernel_mod(a, p, s - 1)
        lifted = [tuple((p * x) % p ** s for x in gen) for gen in gens_prev]
        image = span_exponent_mod(lifted, n, p, s)
    return total - image


def reduction_subgraphs(g: WeightedGraph, p: int) -> list[Subgraph]:
    """All distinct subgraphs occurring as components of some reduction.

    Levels 1 .. (max edge valuation + 1) exhaust the distinct reductions;
    isolated-vertex components of the graph itself can first appear above
    that, so those levels are extended as needed.
    """
    top = 1
    if g.edges:
        top = max(g.edge_valuation(e, p) for e in g.edges) + 1
    for comp in components(full_subgraph(g)):
        if not comp.edge_set:
            top = max(top, comp.min_valuation(p) + 1)
    seen = {}
    for r in range(1, top + 1):
        for comp in components(reduce_graph(g, p, r)):
            seen.setdefault(comp.key(), comp)
    return [seen[k] for k in sorted(seen, key=lambda k: (sorted(k[0]), sorted(k[1])))]


def generation_check(g: WeightedGraph, p: int, s: int,
                     s_cap: int = GENERATION_S_CAP) -> bool:
    """Do scaled divided fundamental classes of reduction components span
    the mod-p**s cocycles?

    Candidates are p**d * (divided fundamental class of D) over d in
    [0, s) and components D of reductions that are Z/p**(s-d)-oriented
    with boundary valuation minus minimal weight valuation >= s - d.
    Returning False signals a bug: the underlying theorem asserts truth.
    """
    from .orientation import is_orientable

    require_prime(p)
    if s < 1:
        raise ValueError("modulus exponent must be >= 1")
    if s > s_cap:
        raise ValueError(f"generation_check capped at s <= {s_cap}")
    full = full_subgraph(g)
    a = d0_matrix(full)
    verts = full.vertices
    ps = p ** s
    candidates: list[tuple[int, ...]] = []
    for delta in reduction_subgraphs(g, p):
        r_delta = boundary_valuation(delta, p)  # None means empty boundary
        m_delta = delta.min_valuation(p)
        for d in range(s):
            if r_delta is not None and r_delta - m_delta < s - d:
                continue
            report = is_orientable(delta, p, s - d)
            if not report.orientable or report.orientation_class is None:
                continue
            vec = report.orientation_class.vector(verts)
            scaled = tuple(x * p ** d % ps for x in vec)
            if any(scaled):
                candidates.append(scaled)
    cand = matrix_from_columns(candidates, len(verts))
    for gen in kernel_mod(a, p, s):
        if solve_mod(cand, gen, p, s) is None:
            return False
    return True
