"""Permutation groups and graph-automorphism search.

Groups are handled through a deterministic Schreier-Sims chain (base and
strong generating set), giving exact order, membership, stabilizer, orbit,
normality and intersection queries at the small degrees this library needs.

The automorphism search refines vertices by iterated (color, sorted multiset
of neighbor colors) until stable, then backtracks over color-compatible
images level by level, deepest stabilizer first; automorphisms found earlier
prune sibling branches through orbit computations, and the generators found
this way form a strong generating set for the full automorphism group.
A plain exhaustive backtracker over adjacency-consistent assignments is kept
as an independent oracle for small graphs.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import IncompatibleDegree

Perm = tuple[int, ...]


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose(a: Perm, b: Perm) -> Perm:
    """(a b): apply b first, then a."""
    return tuple(a[i] for i in b)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def is_identity(p: Perm) -> bool:
    return all(i == j for i, j in enumerate(p))


def perm_order(p: Perm) -> int:
    from math import lcm
    seen = [False] * len(p)
    out = 1
    for s in range(len(p)):
        if seen[s]:
            continue
        length = 0
        cur = s
        while not seen[cur]:
            seen[cur] = True
            cur = p[cur]
            length += 1
        out = lcm(out, length)
    return out


# ---------------------------------------------------------------------------
# Graphs
# ---------------------------------------------------------------------------


class Graph:
    """Undirected graph on 0..n-1 with bitmask adjacency rows."""

    def __init__(self, n: int, adj: list[int]):
        self.n = n
        self.adj = list(adj)
        for v in range(n):
            if self.adj[v] >> v & 1:
                raise ValueError("self-loops are not allowed")

    @classmethod
    def from_edges(cls, n: int, edges) -> Graph:
        adj = [0] * n
        for a, b in edges:
            if a == b:
                raise ValueError("self-loops are not allowed")
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return cls(n, adj)

    def adjacent(self, a: int, b: int) -> bool:
        return bool(self.adj[a] >> b & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n) for b in range(a + 1, self.n)
                if self.adj[a] >> b & 1]

    def neighbors(self, v: int):
        row = self.adj[v]
        while row:
            low = row & -row
            yield low.bit_length() - 1
            row ^= low


def refine_colors(g: Graph, colors=None) -> tuple[int, ...]:
    """Iterated neighborhood color refinement to a fixed point."""
    cur = list(colors) if colors is not None else [0] * g.n
    while True:
        sig = [(cur[v], tuple(sorted(cur[u] for u in g.neighbors(v))))
               for v in range(g.n)]
        palette = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [palette[s] for s in sig]
        if new == cur:
            return tuple(new)
        cur = new


# ---------------------------------------------------------------------------
# Schreier-Sims
# ---------------------------------------------------------------------------


@dataclass
class _Level:
    beta: int
    gens: list
    transversal: dict


def _orbit_transversal(beta: int, gens, degree: int) -> dict:
    transversal = {beta: identity_perm(degree)}
    queue = [beta]
    while queue:
        pt = queue.pop(0)
        rep = transversal[pt]
        for g in gens:
            img = g[pt]
            if img not in transversal:
                transversal[img] = compose(g, rep)
                queue.append(img)
    return transversal


class PermGroup:
    """A permutation group with a deterministic base/strong-generating chain."""

    def __init__(self, degree: int, generators, base_prefix=()):
        self.degree = degree
        self.generators = [tuple(g) for g in generators]
        for g in self.generators:
            if len(g) != degree:
                raise IncompatibleDegree(
                    f"generator degree {len(g)} != {degree}")
            if sorted(g) != list(range(degree)):
                raise ValueError("not a permutation")
        self._levels: list[_Level] | None = None
        self._base_prefix = tuple(base_prefix)

    # -- chain construction -----------------------------------------------------

    def _chain(self) -> list[_Level]:
        """Build the stabilizer chain and certify it by the Schreier lemma.

        A generator stored at level i fixes the base points of all earlier
        levels, so the group at level j is generated by the gens of levels
        >= j; transversals are recomputed accordingly and every Schreier
        generator must sift to the identity through the deeper levels.
        """
        if self._levels is not None:
            return self._levels
        levels = [_Level(b, [], {b: identity_perm(self.degree)})
                  for b in self._base_prefix]
        self._levels = levels

        def strong_gens_at(j):
            return [g for lv in levels[j:] for g in lv.gens]

        def insert(p) -> bool:
            i, reduced = self._sift(p, levels)
            if is_identity(reduced):
                return False
            if i == len(levels):
                beta = next(b for b in range(self.degree) if reduced[b] != b)
                levels.append(_Level(beta, [],
                                     {beta: identity_perm(self.degree)}))
            levels[i].gens.append(reduced)
            return True

        for g in self.generators:
            insert(g)
        while True:
            for j in range(len(levels)):
                levels[j].transversal = _orbit_transversal(
                    levels[j].beta, strong_gens_at(j), self.degree)
            # find one uncertified Schreier generator; with fresh transversals
            # every insertion strictly grows the certified order, so this
            # terminates after at most log2|G| sweeps
            inserted = False
            for j in range(len(levels)):
                lv = levels[j]
                gens_j = strong_gens_at(j)
                for pt in sorted(lv.transversal):
                    rep = lv.transversal[pt]
                    for g in gens_j:
                        schreier = compose(inverse(lv.transversal[g[pt]]),
                                           compose(g, rep))
                        if insert(schreier):
                            inserted = True
                            break
                    if inserted:
                        break
                if inserted:
                    break
            if not inserted:
                return levels

    def _sift(self, p: Perm, levels) -> tuple[int, Perm]:
        for i, lv in enumerate(levels):
            img = p[lv.beta]
            if img not in lv.transversal:
                return i, p
            p = compose(inverse(lv.transversal[img]), p)
        return len(levels), p

    # -- queries -----------------------------------------------------------------

    def order(self) -> int:
        out = 1
        for lv in self._chain():
            out *= len(lv.transversal)
        return out

    def contains(self, p) -> bool:
        p = tuple(p)
        if len(p) != self.degree:
            raise IncompatibleDegree(f"degree {len(p)} != {self.degree}")
        i, reduced = self._sift(p, self._chain())
        return is_identity(reduced)

    def elements(self):
        """Iterate all elements (products over the transversals)."""
        levels = self._chain()

        def rec(i):
            if i == len(levels):
                yield identity_perm(self.degree)
                return
            for tail in rec(i + 1):
                for rep in levels[i].transversal.values():
                    yield compose(rep, tail)

        yield from rec(0)

    def orbit(self, point: int) -> set[int]:
        out = {point}
        queue = [point]
        while queue:
            pt = queue.pop()
            for g in self.generators:
                img = g[pt]
                if img not in out:
                    out.add(img)
                    queue.append(img)
        return out

    def stabilizer(self, point: int) -> PermGroup:
        """The stabilizer of a point, via a chain rebuilt with that base."""
        rebuilt = PermGroup(self.degree, self.generators, base_prefix=(point,))
        levels = rebuilt._chain()
        gens = [g for lv in levels for g in lv.gens if g[point] == point]
        return PermGroup(self.degree, gens)

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return all(other.contains(g) for g in self.generators)

    def __len__(self):
        return self.order()


def is_normal(big: PermGroup, sub: PermGroup) -> bool:
    """Whether sub is normalized by big (conjugates of sub gens stay in sub)."""
    if big.degree != sub.degree:
        raise IncompatibleDegree("groups act on different vertex sets")
    for g in big.generators:
        ginv = inverse(g)
        for h in sub.generators:
            if not sub.contains(compose(g, compose(h, ginv))):
                return False
    return True


def intersection(a: PermGroup, b: PermGroup) -> PermGroup:
    """The intersection, by filtering the smaller group's elements."""
    if a.degree != b.degree:
        raise IncompatibleDegree("groups act on different vertex sets")
    small, big = (a, b) if a.order() <= b.order() else (b, a)
    found = [p for p in small.elements() if big.contains(p)]
    return PermGroup(a.degree, [p for p in found if not is_identity(p)])


def subgroup_product_order(a: PermGroup, b: PermGroup) -> int:
    """|A.B| = |A||B| / |A intersect B| (the size of the product set)."""
    inter = intersection(a, b)
    return a.order() * b.order() // inter.order()


# ---------------------------------------------------------------------------
# Automorphism search
# ---------------------------------------------------------------------------


def brute_force_automorphisms(g: Graph) -> list[Perm]:
    """All automorphisms by exhaustive assignment; the independence oracle."""
    n = g.n
    out = []
    image = [-1] * n
    used = [False] * n

    def rec(v):
        if v == n:
            out.append(tuple(image))
            return
        for w in range(n):
            if used[w]:
                continue
            if g.degree(w) != g.degree(v):
                continue
            if all(g.adjacent(v, t) == g.adjacent(w, image[t]) for t in range(v)):
                image[v] = w
                used[w] = True
                rec(v + 1)
                used[w] = False
                image[v] = -1

    rec(0)
    return out


def graph_automorphisms(g: Graph) -> PermGroup:
    """The full automorphism group, as a PermGroup with strong generators."""
    n = g.n
    if n == 0:
        return PermGroup(0, [])
    colors = refine_colors(g)
    # deterministic base: cells by size then least vertex
    cell_size = {c: colors.count(c) for c in set(colors)}
    base = sorted(range(n), key=lambda v: (cell_size[colors[v]], colors[v], v))
    pos_in_base = {v: i for i, v in enumerate(base)}

    def consistent(v, w, image):
        if colors[v] != colors[w]:
            return False
        for t, it in image.items():
            if g.adjacent(v, t) != g.adjacent(w, it):
                return False
        return True

    def complete(image, used, depth):
        """Find one full automorphism extending a partial image, or None."""
        if depth == n:
            return tuple(image[v] for v in range(n))
        v = base[depth]
        if v in image:
            return complete(image, used, depth + 1)
        for w in range(n):
            if w in used or not consistent(v, w, image):
                continue
            image[v] = w
            used.add(w)
            res = complete(image, used, depth + 1)
            if res is not None:
                return res
            del image[v]
            used.discard(w)
        return None

    gens: list[Perm] = []
    # deepest level first: when treating level i, generators fixing
    # base[0..i] are already known and prune the candidate images
    for i in range(n - 1, -1, -1):
        v = base[i]
        prefix = {base[t]: base[t] for t in range(i)}
        level_gens = [p for p in gens
                      if all(p[base[t]] == base[t] for t in range(i))]
        orbit = {v}
        stack = [v]
        while stack:
            pt = stack.pop()
            for p in level_gens:
                if p[pt] not in orbit:
                    orbit.add(p[pt])
                    stack.append(p[pt])
        taken = set(prefix.values())
        for w in range(n):
            if w == v or w in orbit or w in taken:
                continue
            if not consistent(v, w, prefix):
                continue
            image = dict(prefix)
            image[v] = w
            used = set(image.values())
            found = complete(image, used, i + 1)
            if found is not None:
                gens.append(found)
                level_gens.append(found)
                stack = list(orbit)
                while stack:
                    pt = stack.pop()
                    for p in level_gens:
                        if p[pt] not in orbit:
                            orbit.add(p[pt])
                            stack.append(p[pt])
    return PermGroup(n, gens, base_prefix=tuple(base))


def are_isomorphic(g1: Graph, g2: Graph) -> bool:
    """Graph isomorphism by joint refinement plus backtracking."""
    if g1.n != g2.n:
        return False
    n = g1.n
    if sorted(g1.degree(v) for v in range(n)) != sorted(g2.degree(v) for v in range(n)):
        return False
    union = Graph.from_edges(2 * n, list(g1.edges())
                             + [(a + n, b + n) for a, b in g2.edges()])
    colors = refine_colors(union)
    c1, c2 = colors[:n], colors[n:]
    if sorted(c1) != sorted(c2):
        return False

    order = sorted(range(n), key=lambda v: (c1[v], v))
    image: dict[int, int] = {}
    used: set[int] = set()

    def rec(depth):
        if depth == n:
            return True
        v = order[depth]
        for w in range(n):
            if w in used or c1[v] != c2[w]:
                continue
            if all(g1.adjacent(v, t) == g2.adjacent(w, it)
                   for t, it in image.items()):
                image[v] = w
                used.add(w)
                if rec(depth + 1):
                    return True
                del image[v]
                used.discard(w)
        return False

    return rec(0)
