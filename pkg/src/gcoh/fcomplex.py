"""Three-term complex built from the fundamental forest.

Degrees -1, 0, 1.  Degree 1 has one class generator per counted
subgraph, degree 0 a class generator per subgraph plus one relator per
non-minimal subgraph, degree -1 one relator per non-minimal subgraph.
The differentials encode how chains in the forest telescope; the first
cohomology of this small complex is exactly the p-torsion of the graph's
first cohomology, and the comparison map `chi` realizes it inside the
ambient cochain complex by divided fundamental chains.

Cover terms in the differentials run over the full vertex-spanning cover
(forest.phi), which includes the degenerate single-vertex extras.  Those
carry acyclic generator pairs with unit differential, so they change no
cohomology, but without them the comparison map would not be a chain map.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graphs import Subgraph, WeightedGraph, full_subgraph, p_valuation
from .cohomology import Chain, apply_d0, d0_matrix
from .forest import FundamentalForest, build_forest
from .intlinalg import (
    AbelianGroup,
    IntMatrix,
    cokernel_structure,
    kernel_basis,
    matmul,
    matrix_from_columns,
    quotient_structure,
)

REL_NEG = "rel-1"
REL0 = "rel0"
CLS0 = "cls0"
CLS1 = "cls1"


class ChainMapError(AssertionError):
    """A built map failed its exact chain-map verification."""


@dataclass
class FundamentalComplex:
    forest: FundamentalForest
    gens_neg: tuple[Subgraph, ...]
    gens_zero: tuple[tuple[str, Subgraph], ...]
    gens_one: tuple[Subgraph, ...]
    d_neg: IntMatrix   # degree -1 -> 0
    d_zero: IntMatrix  # degree 0 -> 1

    def zero_index(self, kind: str, d: Subgraph) -> int:
        return self.gens_zero.index((kind, d))

    def one_index(self, d: Subgraph) -> Optional[int]:
        try:
            return self.gens_one.index(d)
        except ValueError:
            return None  # class is divided out (infinite tail)


def fundamental_complex(forest: FundamentalForest) -> FundamentalComplex:
    minimal_graphs = {n.graph for n in forest.minimal_nodes}
    bip = set(forest.bipartite_components)
    rel_graphs = tuple(d for d in forest.subgraphs if d not in minimal_graphs)
    cls_graphs = tuple(list(forest.subgraphs) + list(forest.extras))
    gens_zero = tuple([(REL0, d) for d in rel_graphs]
                      + [(CLS0, d) for d in cls_graphs])
    gens_one = tuple(d for d in cls_graphs if d not in bip)
    one_index = {d: i for i, d in enumerate(gens_one)}
    zero_index = {g: i for i, g in enumerate(gens_zero)}
    p = forest.prime

    cols_zero = []
    for kind, d in gens_zero:
        col = [0] * len(gens_one)
        sup = forest.sup_level[d]
        if kind == REL0:
            if sup is not None:
                col[one_index[d]] += p ** (sup - forest.lower_level[d])
            for child in forest.phi[d]:
                col[one_index[child]] -= 1
        else:
            if sup is not None:
                col[one_index[d]] += p ** (sup - forest.min_val[d])
        cols_zero.append(col)
    d_zero = matrix_from_columns(cols_zero, len(gens_one))

    cols_neg = []
    for d in rel_graphs:
        col = [0] * len(gens_zero)
        col[zero_index[(CLS0, d)]] += 1
        col[zero_index[(REL0, d)]] -= p ** (forest.lower_level[d]
                                            - forest.min_val[d])
        for child in forest.phi[d]:
            col[zero_index[(CLS0, child)]] -= p ** (forest.min_val[child]
                                                    - forest.min_val[d])
        cols_neg.append(col)
    d_neg = matrix_from_columns(cols_neg, len(gens_zero))

    if not matmul(d_zero, d_neg).is_zero():
        raise ChainMapError("fundamental complex differentials do not square to zero")
    return FundamentalComplex(forest, rel_graphs, gens_zero, gens_one,
                              d_neg, d_zero)


def complex_cohomology(fc: FundamentalComplex) -> tuple[AbelianGroup, AbelianGroup]:
    """(H0, H1) of the three-term complex, via the exact engine."""
    h1 = cokernel_structure(fc.d_zero)
    kernel = kernel_basis(fc.d_zero)
    image = fc.d_neg.columns()
    h0 = quotient_structure(kernel, image)
    return h0, h1


def p_part_graph(g: WeightedGraph, p: int) -> WeightedGraph:
    """Same graph with every weight replaced by its p-part."""
    return WeightedGraph(
        {v: p ** p_valuation(g.weight[v], p) for v in g.vertices}, g.edges)


@dataclass
class ComparisonMap:
    """chi: fundamental complex -> ambient cochain complex (p-part weights)."""

    complex: FundamentalComplex
    ambient: WeightedGraph
    ambient_d0: IntMatrix
    degree0: IntMatrix  # vertices x gens_zero
    degree1: IntMatrix  # edges x gens_one


def _fundamental_vector(forest: FundamentalForest, gp: WeightedGraph,
                        d: Subgraph) -> dict[str, int]:
    alpha = forest.orientation[d]
    return {v: alpha(v) * gp.weight[v] for v in d.vertex_set}


def chi(fc: FundamentalComplex) -> ComparisonMap:
    """Build the comparison map and verify it is a chain map.

    Degree-0 class generators map to divided fundamental chains, relators
    to zero, and degree-1 class generators to the boundary of the
    fundamental chain divided by p**(sup level); the division is checked
    to be exact before use.
    """
    forest = fc.forest
    p = forest.prime
    gp = p_part_graph(forest.graph, p)
    full_p = full_subgraph(gp)
    verts = gp.vertices
    edges = gp.edges

    cols0 = []
    for kind, d in fc.gens_zero:
        if kind == REL0:
            cols0.append([0] * len(verts))
            continue
        fund = _fundamental_vector(forest, gp, d)
        m = forest.min_val[d]
        cols0.append([fund.get(v, 0) // p ** m for v in verts])
    degree0 = matrix_from_columns(cols0, len(verts))

    cols1 = []
    for d in fc.gens_one:
        fund = Chain(0, _fundamental_vector(forest, gp, d))
        boundary = apply_d0(full_p, fund)
        sup = forest.sup_level[d]
        assert sup is not None
        ps = p ** sup
        col = []
        for e in edges:
            c = boundary.coefficient(e)
            if c % ps:
                raise ChainMapError(
                    f"boundary of {d} not divisible by p^{sup} on edge {e}")
            col.append(c // ps)
        cols1.append(col)
    degree1 = matrix_from_columns(cols1, len(edges))

    ambient_d0 = d0_matrix(full_p)
    if matmul(ambient_d0, degree0) != matmul(degree1, fc.d_zero):
        raise ChainMapError("comparison map fails the degree-0 square")
    if not matmul(degree0, fc.d_neg).is_zero():
        raise ChainMapError("comparison map fails the degree--1 square")
    return ComparisonMap(fc, gp, ambient_d0, degree0, degree1)


def chi_image_torsion_order(cm: ComparisonMap) -> int:
    """Order of the subgroup of coker(d0) generated by the chi images of
    the degree-1 class generators."""
    base = cokernel_structure(cm.ambient_d0).torsion_order
    combined_cols = cm.ambient_d0.columns() + cm.degree1.columns()
    bigger = cokernel_structure(
        matrix_from_columns(combined_cols, cm.ambient_d0.rows))
    quotient_torsion = bigger.torsion_order
    if base % quotient_torsion:
        raise AssertionError("torsion order did not divide out exactly")
    return base // quotient_torsion


@dataclass
class Restriction:
    """Matrices of the induced map between fundamental complexes."""

    source: FundamentalComplex  # complex of the big graph
    target: FundamentalComplex  # complex of the subgraph as its own graph
    subgraph: Subgraph
    map_neg: IntMatrix
    map_zero: IntMatrix
    map_one: IntMatrix

    def compose(self, inner: "Restriction") -> tuple[IntMatrix, IntMatrix, IntMatrix]:
        """Matrices of (this after inner) on the degree -1, 0, 1 parts."""
        return (matmul(self.map_neg, inner.map_neg),
                matmul(self.map_zero, inner.map_zero),
                matmul(self.map_one, inner.map_one))


class UnsupportedRestriction(ValueError):
    """The restriction's image needs generators the target complex lacks."""


def _intersection_components(omega: Subgraph, d: Subgraph,
                             target_graph: WeightedGraph) -> list[Subgraph]:
    from .graphs import components
    inter_v = omega.vertex_set & d.vertex_set
    inter_e = omega.edge_set & d.edge_set
    return components(Subgraph(target_graph, frozenset(inter_v),
                               frozenset(inter_e)))


def restrict(forest: FundamentalForest, d: Subgraph,
             target: Optional[FundamentalComplex] = None,
             source: Optional[FundamentalComplex] = None) -> Restriction:
    """Induced map from the complex of the ambient graph to the complex of
    the subgraph (with induced weights), verified to be a chain map.

    Known limitation, recorded with the build: for subgraphs that cut an
    infinite chain into pieces with different minimum valuations these
    formulas do not define a chain map and this raises
    ChainMapError; at p = 2 an intersection component can even fail to be
    oriented, which raises UnsupportedRestriction.
    """
    if d.parent is not forest.graph:
        raise ValueError("subgraph does not belong to the forest's graph")
    fc_big = source if source is not None else fundamental_complex(forest)
    dg = target.forest.graph if target is not None else d.as_graph()
    fc_small = target if target is not None else \
        fundamental_complex(build_forest(dg, forest.prime))
    small = fc_small.forest
    p = forest.prime

    small_all = set(small.subgraphs) | set(small.extras)

    def comps(omega: Subgraph) -> list[Subgraph]:
        return _intersection_components(omega, d, dg)

    n_one = len(fc_small.gens_one)
    cols_one = []
    for omega in fc_big.gens_one:
        col = [0] * n_one
        r_big = forest.sup_level[omega]
        for psi in comps(omega):
            if psi not in small_all:
                raise UnsupportedRestriction(
                    f"component {psi} of the restriction is not a generator")
            r_small = small.sup_level[psi]
            if r_small is None:
                continue  # class divided out in the target
            col[fc_small.one_index(psi)] += p ** (r_small - r_big)
        cols_one.append(col)
    map_one = matrix_from_columns(cols_one, n_one)

    n_zero = len(fc_small.gens_zero)
    small_rel = set(fc_small.gens_neg)
    cols_zero = []
    for kind, omega in fc_big.gens_zero:
        col = [0] * n_zero
        for psi in comps(omega):
            if psi not in small_all:
                raise UnsupportedRestriction(
                    f"component {psi} of the restriction is not a generator")
            if kind == CLS0:
                col[fc_small.zero_index(CLS0, psi)] += 1
            else:
                if psi not in small_rel:
                    continue  # no relator on the target side
                shift = small.lower_level[psi] - forest.lower_level[omega]
                if shift < 0:
                    continue  # target chain reaches deeper; no integral image
                col[fc_small.zero_index(REL0, psi)] += p ** shift
        cols_zero.append(col)
    map_zero = matrix_from_columns(cols_zero, n_zero)

    n_neg = len(fc_small.gens_neg)
    cols_neg = []
    for omega in fc_big.gens_neg:
        col = [0] * n_neg
        for psi in comps(omega):
            if psi in small_rel:
                col[fc_small.gens_neg.index(psi)] += 1
        cols_neg.append(col)
    map_neg = matrix_from_columns(cols_neg, n_neg)

    if matmul(fc_small.d_neg, map_neg) != matmul(map_zero, fc_big.d_neg):
        raise ChainMapError("restriction fails the degree--1 square")
    if matmul(fc_small.d_zero, map_zero) != matmul(map_one, fc_big.d_zero):
        raise ChainMapError("restriction fails the degree-0 square")
    return Restriction(fc_big, fc_small, d, map_neg, map_zero, map_one)
