"""The generalized cluster complex: vertices, compatibility, facets, links.

Vertices are almost-positive colored roots: a positive root with any color
in [1, m], or a negated simple root with color 1.  They carry a total order
refining a decomposition into m*h+2 blocks (negated white simples first,
then the positive roots once per color from m down to 1 in Steinberg order,
then the negated black simples), and the complex is the flag complex of the
compatibility relation.

Two independent implementations of compatibility are provided: the explicit
support/inner-product/absolute-order rules, and a definitional oracle that
walks the rotation orbit until a negated simple appears.  Facets likewise
come from two routes: decreasing reflection factorizations of the Coxeter
element, and maximal cliques of the compatibility graph.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .coxeter import (CoxeterSystem, CoxeterType, ProductSystem,
                      build_coxeter_system, parabolic_subsystem)
from .errors import (InvalidType, LemmaViolation, NotAFace, NotAnAutomorphism,
                     NotRecognized, OrbitExhausted)


@dataclass(frozen=True)
class ColoredRoot:
    """A root index together with a color in [1, m]."""

    root: int
    color: int


class VertexSet:
    """The ordered vertex set of the complex for one irreducible system.

    ``vertices`` lists all n + m*|Phi+| almost-positive colored roots in the
    total order; ``block`` assigns each position its block index in the
    (m*h+2)-block decomposition.
    """

    def __init__(self, sys: CoxeterSystem, m: int):
        if m < 1:
            raise InvalidType(f"color bound must be >= 1, got {m}")
        self.sys = sys
        self.m = m
        n, h = sys.rank, sys.h
        npos = sys.n_positive
        r = len(sys.white)

        by_pos = sys.steinberg_root
        neg_white = by_pos[:r]
        positives = by_pos[r:r + npos]
        neg_black = by_pos[r + npos:r + npos + n - r]

        verts: list[ColoredRoot] = [ColoredRoot(x, 1) for x in neg_white]
        for color in range(m, 0, -1):
            verts.extend(ColoredRoot(x, color) for x in positives)
        verts.extend(ColoredRoot(x, 1) for x in neg_black)
        self.vertices = tuple(verts)
        self.index_of = {v: i for i, v in enumerate(verts)}
        if len(self.index_of) != len(verts):
            raise InvalidType("duplicate vertices")

        sizes = [r] + [(n - r) if t % 2 else r for t in range(1, m * h + 1)] + [n - r]
        assert sum(sizes) == len(verts), "block sizes do not cover the vertex set"
        self.block_count = m * h + 2
        block = []
        for b, size in enumerate(sizes):
            block.extend([b] * size)
        self.block = tuple(block)
        self._rotation_perm: tuple[int, ...] | None = None

    # -- basic queries ---------------------------------------------------------

    def __len__(self):
        return len(self.vertices)

    def is_negative(self, v: ColoredRoot) -> bool:
        return not self.sys.roots[v.root].positive

    def negative_simple(self, v: ColoredRoot) -> int | None:
        """The simple position rho when v = -rho^1, else None."""
        if self.is_negative(v):
            pos_root = self.sys.negate(v.root)
            return self.sys.simple_indices.index(pos_root)
        return None

    def vertex_of_negative_simple(self, simple_pos: int) -> ColoredRoot:
        return ColoredRoot(self.sys.negate(self.sys.simple_indices[simple_pos]), 1)

    def block_index(self, v: ColoredRoot) -> int:
        return self.block[self.index_of[v]]

    def compare(self, u: ColoredRoot, v: ColoredRoot) -> int:
        """Total-order comparison (block-major, Steinberg within blocks)."""
        iu, iv = self.index_of[u], self.index_of[v]
        return (iu > iv) - (iu < iv)

    # -- the rotation ------------------------------------------------------------

    def rotate(self, v: ColoredRoot) -> ColoredRoot:
        """The defining self-bijection of the vertex set."""
        sys, m = self.sys, self.m
        root, i = v.root, v.color
        if sys.roots[root].positive:
            if i < m:
                return ColoredRoot(root, i + 1)
            pos = (sys.simple_indices.index(root)
                   if root in sys.simple_indices else None)
            if pos is not None and pos in sys.white:
                return ColoredRoot(sys.negate(root), 1)
            return ColoredRoot(sys.cox_element.perm[root], 1)
        # negative vertices always have color 1
        pos = sys.simple_indices.index(sys.negate(root))
        if pos in sys.black:
            return ColoredRoot(sys.negate(root), 1)
        return ColoredRoot(sys.cox_element.perm[root], 1)

    def rotation_perm(self) -> tuple[int, ...]:
        if self._rotation_perm is None:
            self._rotation_perm = tuple(self.index_of[self.rotate(v)]
                                        for v in self.vertices)
        return self._rotation_perm

    def rotation_orbits(self) -> list[list[int]]:
        perm = self.rotation_perm()
        seen = [False] * len(perm)
        orbits = []
        for start in range(len(perm)):
            if seen[start]:
                continue
            orb = [start]
            seen[start] = True
            cur = perm[start]
            while cur != start:
                seen[cur] = True
                orb.append(cur)
                cur = perm[cur]
            orbits.append(orb)
        return orbits

    def orbit_report(self) -> list[tuple[int, list[int]]]:
        """(orbit size, negative vertices it contains), with the structure
        guaranteed by the orbit lemma checked; violations signal a bug."""
        m, h = self.m, self.sys.h
        full, half = m * h + 2, (m * h + 2) // 2
        report = []
        for orb in self.rotation_orbits():
            negs = [p for p in orb if self.is_negative(self.vertices[p])]
            if len(negs) == 1:
                if 2 * len(orb) != full:
                    raise LemmaViolation(
                        f"orbit with one negative has size {len(orb)}, not {half}")
            elif len(negs) == 2:
                if len(orb) != full:
                    raise LemmaViolation(
                        f"orbit with two negatives has size {len(orb)}, not {full}")
                pair = set()
                for p in negs:
                    rho = self.sys.negate(self.vertices[p].root)
                    pair.add(self.sys.w0.perm[rho])
                if pair != {self.vertices[p].root for p in negs}:
                    raise LemmaViolation("negative pair is not (-rho, w0(rho))")
            else:
                raise LemmaViolation(f"orbit contains {len(negs)} negatives")
            report.append((len(orb), sorted(negs)))
        report.sort()
        return report

    def rotation_order(self) -> int:
        from math import lcm
        return lcm(*(len(o) for o in self.rotation_orbits()))


def enumerate_vertices(sys: CoxeterSystem, m: int) -> VertexSet:
    return VertexSet(sys, m)


# ---------------------------------------------------------------------------
# Compatibility
# ---------------------------------------------------------------------------


def compatible_rules(vs: VertexSet, u: ColoredRoot, v: ColoredRoot) -> bool:
    """The explicit compatibility rules.

    Negated simples are compatible with each other and with beta^j exactly
    when the simple root is outside the support of beta; positive pairs of
    equal color need a nonnegative inner product and one of the two
    reflection products below the Coxeter element; positive pairs of
    different colors need the lower-color reflection first.
    """
    if u == v:
        raise ValueError("compatibility is only defined for distinct vertices")
    sys = vs.sys
    nu, nv = vs.is_negative(u), vs.is_negative(v)
    if nu and nv:
        return True
    if nu or nv:
        neg, other = (u, v) if nu else (v, u)
        rho = vs.negative_simple(neg)
        return rho not in sys.support(other.root)
    if u.root == v.root:
        return False
    tu = sys.reflection_of_root(u.root)
    tv = sys.reflection_of_root(v.root)
    if u.color == v.color:
        if sys.inner_product_sign(u.root, v.root) < 0:
            return False
        return (sys.absolute_leq_c(sys.compose(tu, tv))
                or sys.absolute_leq_c(sys.compose(tv, tu)))
    lo, hi = (u, v) if u.color < v.color else (v, u)
    tlo = sys.reflection_of_root(lo.root)
    thi = sys.reflection_of_root(hi.root)
    return sys.absolute_leq_c(sys.compose(tlo, thi))


def compatible_orbit(vs: VertexSet, u: ColoredRoot, v: ColoredRoot) -> bool:
    """Definitional oracle: rotate the pair until one vertex is a negated
    simple, then apply the support rule.  Must agree with compatible_rules."""
    if u == v:
        raise ValueError("compatibility is only defined for distinct vertices")
    sys = vs.sys
    bound = 2 * (vs.m * sys.h + 2) + 1
    a, b = u, v
    for _ in range(bound):
        ra, rb = vs.negative_simple(a), vs.negative_simple(b)
        if ra is not None:
            if rb is not None:
                return True
            return ra not in sys.support(b.root)
        if rb is not None:
            return rb not in sys.support(a.root)
        a, b = vs.rotate(a), vs.rotate(b)
    raise OrbitExhausted("no negated simple appeared in the rotation orbit")


# ---------------------------------------------------------------------------
# The complex
# ---------------------------------------------------------------------------


class ClusterComplex:
    """The compatibility graph plus facet and link machinery.

    For reducible systems this is the join of the factors: vertices are the
    concatenation of the factor vertex sets and any cross-factor pair is
    compatible.  ``factor_blocks`` records the partition of vertex indices
    by irreducible factor.
    """

    def __init__(self, system, m: int, *, threads: int = 1):
        self.m = m
        self.threads = max(1, threads)
        if isinstance(system, ProductSystem):
            self.system = system
            self.components = [VertexSet(c, m) for c in system.components]
        else:
            self.system = system
            self.components = [VertexSet(system, m)]
        self.rank = sum(vs.sys.rank for vs in self.components)

        offsets = []
        total = 0
        for vs in self.components:
            offsets.append(total)
            total += len(vs)
        self.offsets = offsets
        self.n_vertices = total
        self.factor_blocks = [list(range(off, off + len(vs)))
                              for off, vs in zip(offsets, self.components)]

        adj = [0] * total
        for ci, (off, vs) in enumerate(zip(offsets, self.components)):
            for a in range(len(vs)):
                for b in range(a + 1, len(vs)):
                    if compatible_rules(vs, vs.vertices[a], vs.vertices[b]):
                        adj[off + a] |= 1 << (off + b)
                        adj[off + b] |= 1 << (off + a)
        # cross-factor pairs are always compatible (join)
        for i in range(len(self.components)):
            for j in range(i + 1, len(self.components)):
                for a in self.factor_blocks[i]:
                    for b in self.factor_blocks[j]:
                        adj[a] |= 1 << b
                        adj[b] |= 1 << a
        self.adj = adj
        self._facets: list[tuple[int, ...]] | None = None

    # -- structure ---------------------------------------------------------------

    @property
    def is_irreducible(self) -> bool:
        return len(self.components) == 1

    @property
    def vertex_set(self) -> VertexSet:
        if not self.is_irreducible:
            raise InvalidType("vertex_set is per irreducible complex")
        return self.components[0]

    def vertex(self, i: int) -> tuple[int, ColoredRoot]:
        """(component id, colored root) for a global vertex index."""
        for ci in reversed(range(len(self.components))):
            if i >= self.offsets[ci]:
                return ci, self.components[ci].vertices[i - self.offsets[ci]]
        raise IndexError(i)

    def adjacent(self, a: int, b: int) -> bool:
        return bool(self.adj[a] >> b & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n_vertices)
                for b in range(a + 1, self.n_vertices) if self.adj[a] >> b & 1]

    def is_face(self, face) -> bool:
        face = sorted(set(face))
        return all(self.adjacent(a, b) for a, b in itertools.combinations(face, 2))

    # -- facets ------------------------------------------------------------------

    def facets(self) -> list[tuple[int, ...]]:
        """All facets via decreasing reflection factorizations (cached)."""
        if self._facets is None:
            if self.is_irreducible:
                self._facets = facets_tzanaki(self)
            else:
                per_factor = []
                for off, vs in zip(self.offsets, self.components):
                    sub = ClusterComplex(vs.sys, self.m)
                    per_factor.append([tuple(off + i for i in f)
                                       for f in sub.facets()])
                self._facets = sorted(tuple(sorted(sum(combo, ())))
                                      for combo in itertools.product(*per_factor))
        return self._facets

    def graph(self):
        from .permgroup import Graph
        return Graph(self.n_vertices, self.adj)


def build_complex(system_or_type, m: int, *, swap_bipartition: bool = False,
                  threads: int = 1) -> ClusterComplex:
    """Build the complex for a type string, CoxeterType, or built system."""
    if isinstance(system_or_type, (str, CoxeterType)):
        system = build_coxeter_system(system_or_type,
                                      swap_bipartition=swap_bipartition)
    else:
        system = system_or_type
    return ClusterComplex(system, m, threads=threads)


def facets_tzanaki(cx: ClusterComplex) -> list[tuple[int, ...]]:
    """Facets as strictly decreasing vertex tuples whose reflections multiply
    to the Coxeter element, found by DFS with reflection-length pruning.

    A partial product p of k reflections survives only if l(p) = k and
    l(p^-1 c) = n - k; by the subword property this prunes exactly the
    prefixes that cannot extend to a factorization of c.
    """
    if not cx.is_irreducible:
        raise InvalidType("the factorization route is per irreducible factor")
    vs = cx.vertex_set
    sys = vs.sys
    n = sys.rank
    V = len(vs)
    c = sys.cox_element
    refl = [sys.reflection_of_root(v.root) for v in vs.vertices]

    def admissible(w, depth) -> bool:
        if sys.reflection_length(w) != depth:
            return False
        rest = sys.compose(sys.inverse(w), c)
        return sys.reflection_length(rest) == n - depth

    def descend(pos, w, depth, chosen, out):
        if depth == n:
            if w == c:
                out.append(tuple(sorted(chosen)))
            return
        # picking q at this depth must leave n-depth-1 smaller vertices
        for q in range(pos - 1, n - depth - 2, -1):
            w2 = sys.compose(w, refl[q])
            if admissible(w2, depth + 1):
                chosen.append(q)
                descend(q, w2, depth + 1, chosen, out)
                chosen.pop()

    roots_level = []
    ident = sys.identity()
    for q in range(V - 1, n - 2, -1):
        w = refl[q]
        if admissible(w, 1):
            roots_level.append((q, w))

    def run_root(args):
        q, w = args
        out: list[tuple[int, ...]] = []
        descend(q, w, 1, [q], out)
        return out

    if cx.threads > 1 and len(roots_level) > 1:
        with ThreadPoolExecutor(max_workers=cx.threads) as pool:
            chunks = list(pool.map(run_root, roots_level))
    else:
        chunks = [run_root(a) for a in roots_level]
    facets = sorted(f for chunk in chunks for f in chunk)
    return facets


def facets_cliques(cx: ClusterComplex) -> list[tuple[int, ...]]:
    """Independent oracle: maximal cliques of size n in the compatibility
    graph, via networkx Bron-Kerbosch."""
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(range(cx.n_vertices))
    g.add_edges_from(cx.edges())
    n = cx.rank
    out = []
    for clique in nx.find_cliques(g):
        if len(clique) == n:
            out.append(tuple(sorted(clique)))
        elif len(clique) > n:
            raise LemmaViolation(f"clique of size {len(clique)} exceeds the rank")
    return sorted(out)


def fuss_catalan(sys: CoxeterSystem, m: int) -> int:
    """prod_i (m*h + e_i + 1) / (e_i + 1) over the exponents."""
    if m < 1:
        raise InvalidType("color bound must be >= 1")
    val = Fraction(1)
    for e in sys.exponents:
        val *= Fraction(m * sys.h + e + 1, e + 1)
    if val.denominator != 1:
        raise LemmaViolation(f"facet-count product is not integral: {val}")
    return val.numerator


# ---------------------------------------------------------------------------
# Links
# ---------------------------------------------------------------------------


@dataclass
class LinkView:
    """An induced link: parent vertex indices and the induced adjacency."""

    parent_vertices: list[int]
    adj: list[int]

    @property
    def n_vertices(self) -> int:
        return len(self.parent_vertices)

    def edges(self):
        return [(a, b) for a in range(self.n_vertices)
                for b in range(a + 1, self.n_vertices) if self.adj[a] >> b & 1]

    def graph(self):
        from .permgroup import Graph
        return Graph(self.n_vertices, self.adj)


def link(cx: ClusterComplex, face) -> LinkView:
    """The link of a face: all vertices compatible with every face vertex."""
    face = sorted(set(face))
    if not cx.is_face(face):
        raise NotAFace(f"{face} is not a face")
    mask = 0
    for v in face:
        mask |= 1 << v
    keep = [v for v in range(cx.n_vertices)
            if not mask >> v & 1 and all(cx.adjacent(v, f) for f in face)]
    pos = {v: i for i, v in enumerate(keep)}
    adj = [0] * len(keep)
    for a in keep:
        for b in keep:
            if b > a and cx.adjacent(a, b):
                adj[pos[a]] |= 1 << pos[b]
                adj[pos[b]] |= 1 << pos[a]
    return LinkView(keep, adj)


def negative_simple_link_model(cx: ClusterComplex, simple_pos: int):
    """The link of -rho^1 with its vertex bijection onto the complex of the
    parabolic system on the remaining simple roots.

    Returns (link view, parabolic complex, bijection), with the bijection
    mapping link positions to parabolic-complex vertex indices; callers
    verify that it is a graph isomorphism.
    """
    if not cx.is_irreducible:
        raise InvalidType("per irreducible complex")
    vs = cx.vertex_set
    sys = vs.sys
    rho_vertex = vs.vertex_of_negative_simple(simple_pos)
    lk = link(cx, [vs.index_of[rho_vertex]])

    keep = [i for i in range(sys.rank) if i != simple_pos]
    comps = parabolic_subsystem(sys, keep)
    if not comps:
        return lk, None, []
    if len(comps) == 1:
        sub = ClusterComplex(comps[0].system, vs.m)
    else:
        ptype = CoxeterType.product([c.system.type for c in comps])
        sub = ClusterComplex(ProductSystemFromComponents(ptype, [c.system for c in comps]), vs.m)

    bijection = []
    for parent_idx in lk.parent_vertices:
        v = vs.vertices[parent_idx]
        neg = vs.negative_simple(v)
        if neg is not None:
            ci, local = _locate_simple(comps, neg)
            target = ColoredRoot(
                comps[ci].system.negate(comps[ci].system.simple_indices[local]), 1)
        else:
            supp = sys.support(v.root)
            ci = next(i for i, c in enumerate(comps)
                      if set(c.simple_map) >= set(supp))
            target = ColoredRoot(_restrict_root(sys, comps[ci], v.root), v.color)
        bijection.append(sub.offsets[ci] + sub.components[ci].index_of[target])
    return lk, sub, bijection


class ProductSystemFromComponents(ProductSystem):
    """A ProductSystem wrapping already-built component systems."""

    def __init__(self, ctype: CoxeterType, components):
        self.type = ctype
        self.components = list(components)
        self.rank = sum(c.rank for c in components)


def _locate_simple(comps, parent_simple_pos):
    for ci, comp in enumerate(comps):
        if parent_simple_pos in comp.simple_map:
            return ci, comp.simple_map[parent_simple_pos]
    raise NotAFace("simple root not in the parabolic")


def _restrict_root(sys: CoxeterSystem, comp, root_index: int) -> int:
    """Map a parent positive root supported on a component to the component's
    root index with the same coordinates."""
    sub = comp.system
    if sys.is_angle_model:
        # rank-1 parabolic of a dihedral system: only the kept simple fits
        [(parent_pos, _)] = comp.simple_map.items()
        assert sys.support(root_index) == {parent_pos}
        return sub.simple_indices[0]
    old = sys.roots[root_index].coords
    new = tuple(old[i] for i in sorted(comp.simple_map))
    return sub._coord_index[new]


# ---------------------------------------------------------------------------
# Monomiality and type recovery
# ---------------------------------------------------------------------------


def factor_partition_check(cx: ClusterComplex, perm) -> bool:
    """True iff the automorphism maps each factor vertex block onto a block."""
    perm = tuple(perm)
    for a in range(cx.n_vertices):
        for b in range(a + 1, cx.n_vertices):
            if cx.adjacent(a, b) != cx.adjacent(perm[a], perm[b]):
                raise NotAnAutomorphism("permutation does not preserve adjacency")
    blocks = [frozenset(b) for b in cx.factor_blocks]
    for block in blocks:
        if frozenset(perm[v] for v in block) not in blocks:
            return False
    return True


def _candidate_types(rank: int, n_vertices: int, m: int) -> list[CoxeterType]:
    """All finite types with the given rank whose complex has n_vertices."""

    def irreducible_options(r: int) -> list[CoxeterType]:
        opts = []
        if r == 1:
            opts.append(CoxeterType.simple("A", 1))
        elif r == 2:
            for k in range(3, (n_vertices - 2) // m + 1):
                opts.append(CoxeterType.dihedral(k))
        else:
            for fam in "ABDEFH":
                try:
                    opts.append(CoxeterType.simple(fam, r))
                except InvalidType:
                    pass
        return opts

    def vertex_count(t: CoxeterType) -> int:
        return t.rank + m * t.rank * t.coxeter_number // 2

    out = []

    def extend(partial: list[CoxeterType], rank_left: int, verts_left: int,
               min_key):
        if rank_left == 0:
            if verts_left == 0:
                out.append(CoxeterType.product(list(partial)))
            return
        for r in range(1, rank_left + 1):
            for t in irreducible_options(r):
                key = (t.family, t.rank, t.k or 0)
                if key < min_key:
                    continue
                vc = vertex_count(t)
                if vc <= verts_left:
                    partial.append(t)
                    extend(partial, rank_left - r, verts_left - vc, key)
                    partial.pop()

    extend([], rank, n_vertices, ("", 0, 0))
    seen = set()
    uniq = []
    for t in out:
        if t not in seen:
            seen.add(t)
            uniq.append(t)
    return uniq


def recover_type(graph) -> tuple[CoxeterType, int]:
    """Recover (type, m) from an unlabeled compatibility graph.

    The rank is the clique number, m+1 is the vertex count of the link of a
    codimension-1 face, and the type is pinned down by rebuilding every
    finite type with matching rank and vertex count and testing graph
    isomorphism; the reconstruction theorem guarantees at most one match.
    """
    from .permgroup import Graph, are_isomorphic
    import networkx as nx

    if not isinstance(graph, Graph):
        graph = Graph.from_edges(graph.n_vertices, graph.edges())
    V = graph.n
    if V == 0:
        raise NotRecognized("empty graph")

    g = nx.Graph()
    g.add_nodes_from(range(V))
    g.add_edges_from(graph.edges())
    best = max(nx.find_cliques(g), key=len)
    n = len(best)

    subface = sorted(best)[:-1]
    link_count = sum(
        1 for v in range(V)
        if v not in subface and all(graph.adjacent(v, f) for f in subface))
    m = link_count - 1
    if m < 1:
        raise NotRecognized("could not read a color bound off the graph")

    for cand in _candidate_types(n, V, m):
        cx = build_complex(cand, m)
        if are_isomorphic(graph, cx.graph()):
            return cand, m
    raise NotRecognized("graph matches no finite-type complex")
