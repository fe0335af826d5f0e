"""Named automorphisms of the complex and their group relations.

The cyclic rotation R, the involutions S and T, the color-reversing map
iota into the swapped-bipartition complex, extensions of Coxeter-graph
symmetries, and the canonical map coming from rho -> -w0(rho).  Every map
is materialized as a vertex permutation and validated against the
compatibility graph on construction; the defining relations (S^2 = 1,
SRS = R^-1, ST = R^m, and the even/odd commutation rules for diagram maps)
are checked rather than assumed.
"""
from __future__ import annotations

from dataclasses import dataclass

from .complexes import ClusterComplex, ColoredRoot, VertexSet
from .coxeter import DiagramSymmetry, canonical_diagram_map, diagram_symmetries
from .errors import (InvalidDiagramSymmetry, NotAFacet, NotAnAutomorphism,
                     RankTooSmall, RelationViolation)
from .permgroup import compose as p_compose
from .permgroup import identity_perm, inverse as p_inverse, perm_order


class VertexMap:
    """A named bijection of vertex indices, checked to preserve adjacency.

    ``source`` and ``target`` are the same complex for endomaps; the color
    flip into the swapped-bipartition complex is the one map with distinct
    source and target.  Equality and hashing use the permutation.
    """

    def __init__(self, name: str, perm, source: ClusterComplex,
                 target: ClusterComplex | None = None, *, check: bool = True):
        self.name = name
        self.perm = tuple(perm)
        self.source = source
        self.target = target if target is not None else source
        if check:
            self._validate()

    def _validate(self):
        src, dst = self.source, self.target
        if sorted(self.perm) != list(range(src.n_vertices)):
            raise NotAnAutomorphism(f"{self.name}: not a bijection")
        for a in range(src.n_vertices):
            for b in range(a + 1, src.n_vertices):
                if src.adjacent(a, b) != dst.adjacent(self.perm[a], self.perm[b]):
                    raise NotAnAutomorphism(
                        f"{self.name} breaks compatibility on ({a}, {b})")

    def __call__(self, i: int) -> int:
        return self.perm[i]

    def __eq__(self, other):
        return isinstance(other, VertexMap) and self.perm == other.perm

    def __hash__(self):
        return hash(self.perm)

    def compose(self, other: VertexMap) -> VertexMap:
        """(self o other): apply other first."""
        if other.target is not self.source:
            raise NotAnAutomorphism("composition sources do not match")
        return VertexMap(f"{self.name}*{other.name}",
                         p_compose(self.perm, other.perm),
                         other.source, self.target, check=False)

    def inverse(self) -> VertexMap:
        return VertexMap(f"{self.name}^-1", p_inverse(self.perm),
                         self.target, self.source, check=False)

    def power(self, e: int) -> VertexMap:
        if e < 0:
            return self.inverse().power(-e)
        label = f"{self.name}^{e}"
        out = VertexMap("id", identity_perm(len(self.perm)), self.source,
                        self.source, check=False)
        base = self
        while e:
            if e & 1:
                out = base.compose(out)
            base = base.compose(base)
            e >>= 1
        out.name = label
        return out

    def order(self) -> int:
        return perm_order(self.perm)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.perm))

    def __repr__(self):
        return f"<VertexMap {self.name} on {len(self.perm)} vertices>"


# ---------------------------------------------------------------------------
# Pointwise formulas
# ---------------------------------------------------------------------------


def _s_image(vs: VertexSet, v: ColoredRoot) -> ColoredRoot:
    sys, m = vs.sys, vs.m
    neg = vs.negative_simple(v)
    if neg is not None:
        if neg in sys.white:
            return v
        return ColoredRoot(sys.negate(v.root), m)
    pos = (sys.simple_indices.index(v.root)
           if v.root in sys.simple_indices else None)
    if pos is not None and pos in sys.black:
        if v.color == m:
            return ColoredRoot(sys.negate(v.root), 1)
        return ColoredRoot(v.root, m - v.color)
    return ColoredRoot(sys.c_black.perm[v.root], m + 1 - v.color)


def _t_image(vs: VertexSet, v: ColoredRoot) -> ColoredRoot:
    sys, m = vs.sys, vs.m
    neg = vs.negative_simple(v)
    if neg is not None:
        if neg in sys.black:
            return v
        return ColoredRoot(sys.negate(v.root), 1)
    pos = (sys.simple_indices.index(v.root)
           if v.root in sys.simple_indices else None)
    if pos is not None and pos in sys.white:
        if v.color == 1:
            return ColoredRoot(sys.negate(v.root), 1)
        return ColoredRoot(v.root, m + 2 - v.color)
    return ColoredRoot(sys.c_white.perm[v.root], m + 1 - v.color)


def _iota_image(vs: VertexSet, v: ColoredRoot) -> ColoredRoot:
    if vs.is_negative(v):
        return v
    return ColoredRoot(v.root, vs.m + 1 - v.color)


def _diagram_image(vs: VertexSet, d: DiagramSymmetry, v: ColoredRoot) -> ColoredRoot:
    sys = vs.sys
    root = _diagram_root_image(sys, d, v.root)
    if d.even or vs.is_negative(v):
        return ColoredRoot(root, v.color)
    return ColoredRoot(root, vs.m + 1 - v.color)


def _diagram_root_image(sys, d: DiagramSymmetry, root_index: int) -> int:
    if sys.is_angle_model:
        k = sys.k
        if d.is_identity:
            return root_index
        return (k - 1 - root_index) % (2 * k)
    r = sys.roots[root_index]
    new = [None] * sys.rank
    for i in range(sys.rank):
        new[d.perm[i]] = r.coords[i]
    return sys._coord_index[tuple(new)]


# ---------------------------------------------------------------------------
# Map constructors
# ---------------------------------------------------------------------------


def _endomap(cx: ClusterComplex, name: str, fn) -> VertexMap:
    vs = cx.vertex_set
    perm = [vs.index_of[fn(vs, v)] for v in vs.vertices]
    return VertexMap(name, perm, cx)


def rotation_map(cx: ClusterComplex) -> VertexMap:
    return _endomap(cx, "R", lambda vs, v: vs.rotate(v))


def involution_s(cx: ClusterComplex) -> VertexMap:
    return _endomap(cx, "S", _s_image)


def involution_t(cx: ClusterComplex) -> VertexMap:
    return _endomap(cx, "T", _t_image)


def iota_map(cx: ClusterComplex, cx_swapped: ClusterComplex) -> VertexMap:
    """The color-reversing isomorphism onto the swapped-bipartition complex."""
    vs, vs2 = cx.vertex_set, cx_swapped.vertex_set
    perm = [vs2.index_of[_iota_image(vs, v)] for v in vs.vertices]
    return VertexMap("iota", perm, cx, cx_swapped)


def diagram_vertex_map(cx: ClusterComplex, d: DiagramSymmetry) -> VertexMap:
    """Extend a Coxeter-graph symmetry to the complex (color flip if odd).

    Validates the commutation with the rotation: even maps commute, odd maps
    conjugate R to its inverse.
    """
    vs = cx.vertex_set
    sys = vs.sys
    n = sys.rank
    if (sorted(d.perm) != list(range(n))
            or any(sys.coxeter_matrix[d.perm[i]][d.perm[j]] != sys.coxeter_matrix[i][j]
                   for i in range(n) for j in range(n))):
        raise InvalidDiagramSymmetry("not a Coxeter-graph symmetry")
    name = "id" if d.is_identity else f"D{''.join(map(str, d.perm))}"
    out = _endomap(cx, name, lambda vs_, v: _diagram_image(vs_, d, v))
    r = rotation_map(cx)
    lhs = out.compose(r)
    rhs = r.compose(out) if d.even else r.inverse().compose(out)
    if lhs != rhs:
        kind = "even" if d.even else "odd"
        raise RelationViolation(f"{kind} diagram map fails its rotation relation")
    return out


def diagram_subgroup_maps(cx: ClusterComplex) -> list[VertexMap]:
    return [diagram_vertex_map(cx, d) for d in diagram_symmetries(cx.vertex_set.sys)]


def canonical_map(cx: ClusterComplex) -> VertexMap:
    """The diagram extension of rho -> -w0(rho); equals the half-turn power
    of the rotation whenever the Coxeter number is even (checked)."""
    vs = cx.vertex_set
    out = diagram_vertex_map(cx, canonical_diagram_map(vs.sys))
    out.name = "C"
    h, m = vs.sys.h, vs.m
    if h % 2 == 0:
        if rotation_map(cx).power((m * h + 2) // 2) != out:
            raise RelationViolation("canonical map differs from the half-turn")
    return out


def dihedral_generators(cx: ClusterComplex) -> tuple[VertexMap, VertexMap, VertexMap]:
    """(R, S, T) with all defining relations assert-checked."""
    r = rotation_map(cx)
    s = involution_s(cx)
    t = involution_t(cx)
    m, h = cx.vertex_set.m, cx.vertex_set.sys.h
    checks = [
        ("S^2 = id", s.compose(s).is_identity()),
        ("T^2 = id", t.compose(t).is_identity()),
        ("SRS = R^-1", s.compose(r).compose(s) == r.inverse()),
        ("ST = R^m", s.compose(t) == r.power(m)),
        ("R^(mh+2) = id", r.power(m * h + 2).is_identity()),
    ]
    for label, ok in checks:
        if not ok:
            raise RelationViolation(label)
    return r, s, t


def predicted_aut_order(cx_or_vs) -> int:
    """(m*h + 2) * omega; refuses rank 1, where the complex is edgeless and
    the formula does not apply."""
    vs = cx_or_vs.vertex_set if isinstance(cx_or_vs, ClusterComplex) else cx_or_vs
    if vs.sys.rank < 2:
        raise RankTooSmall("the order formula needs rank >= 2")
    omega = len(diagram_symmetries(vs.sys))
    return (vs.m * vs.sys.h + 2) * omega


# ---------------------------------------------------------------------------
# Canonical factorization of a facet
# ---------------------------------------------------------------------------


@dataclass
class FacetFactorization:
    """The coarsening of a facet's decreasing reflection product.

    ``black`` collects the factors from negated black simples, ``white``
    those from negated white simples, and ``per_color[j]`` is the pair
    (second, first) for color j+1, where ``first`` holds exactly the factors
    coming from black simple roots of that color.  The full product
    black * colors(1..m) * white equals the Coxeter element.
    """

    black: object
    per_color: list[tuple[object, object]]
    white: object

    def product(self, sys):
        out = self.black
        for second, first in self.per_color:
            out = sys.compose(out, sys.compose(second, first))
        return sys.compose(out, self.white)


def canonical_factorization(cx: ClusterComplex, facet) -> FacetFactorization:
    """Group a facet's decreasing reflection product by vertex class."""
    vs = cx.vertex_set
    sys = vs.sys
    facet = sorted(set(facet))
    if tuple(facet) not in set(cx.facets()):
        raise NotAFacet(f"{facet} is not a facet")
    desc = sorted(facet, reverse=True)  # decreasing vertex order

    ident = sys.identity()
    black = ident
    white = ident
    per_color = [[ident, ident] for _ in range(vs.m)]
    for pos in desc:
        v = vs.vertices[pos]
        t = sys.reflection_of_root(v.root)
        neg = vs.negative_simple(v)
        if neg is not None:
            if neg in sys.black:
                black = sys.compose(black, t)
            else:
                white = sys.compose(white, t)
            continue
        simple_pos = (sys.simple_indices.index(v.root)
                      if v.root in sys.simple_indices else None)
        slot = 1 if (simple_pos is not None and simple_pos in sys.black) else 0
        per_color[v.color - 1][slot] = sys.compose(per_color[v.color - 1][slot], t)
    out = FacetFactorization(black, [tuple(p) for p in per_color], white)
    if out.product(sys) != sys.cox_element:
        raise NotAFacet("factor product is not the Coxeter element")
    return out


def s_factorization_identities(cx: ClusterComplex, facet) -> bool:
    """Check the factor identities tying a facet's factorization to that of
    its image under S (white factor fixed, black and color factors permuted,
    mixed factors conjugate-inverted by c_black)."""
    vs = cx.vertex_set
    sys = vs.sys
    m = vs.m
    s = involution_s(cx)
    fac = canonical_factorization(cx, facet)
    image = sorted(s.perm[p] for p in facet)
    fac2 = canonical_factorization(cx, image)

    cb = sys.c_black
    conj = lambda w: sys.compose(cb, sys.compose(sys.inverse(w), cb))
    ok = fac2.white == fac.white
    ok = ok and fac2.black == fac.per_color[m - 1][1]
    ok = ok and fac2.per_color[m - 1][1] == fac.black
    for i in range(1, m):
        ok = ok and fac2.per_color[i - 1][1] == fac.per_color[m - i - 1][1]
    for i in range(1, m + 1):
        ok = ok and fac2.per_color[i - 1][0] == conj(fac.per_color[m - i][0])
    return ok
