"""Finite root systems with exact arithmetic.

Builds every finite Coxeter type from realization tables: crystallographic
families use integer coordinates in the simple-root basis, H3/H4 use
golden-ratio coordinates over Q(sqrt 5), and the dihedral types I2(k) use a
pure angle-index model (roots sit at angles j*pi/k and group elements are
rotation/reflection descriptors), which avoids general cyclotomic arithmetic.

The central object is :class:`CoxeterSystem`: the full root list, the
black/white bipartition of the simple roots, the bipartite Coxeter element
c = c_black * c_white, the Steinberg indexing of roots, reflection-length
and absolute-order queries, parabolic subsystems, and the symmetries of the
Coxeter graph.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidType, NegativeRoot
from .quadratic import QuadExt

# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

_FAMILY_RANKS = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
    "H": lambda n: n in (3, 4),
    "I": lambda n: n == 2,
}


@dataclass(frozen=True)
class CoxeterType:
    """A finite Coxeter type: one irreducible factor or a product.

    Irreducible types carry a family letter and rank (plus the edge label k
    for the dihedral family).  Products carry the sorted tuple of their
    irreducible factors and empty family/rank-0 markers are never exposed:
    use :meth:`simple`, :meth:`dihedral`, :meth:`product` or :meth:`parse`.
    """

    family: str = ""
    rank: int = 0
    k: int | None = None
    factors: tuple["CoxeterType", ...] = ()

    # -- constructors ---------------------------------------------------------

    @classmethod
    def simple(cls, family: str, rank: int) -> CoxeterType:
        family = {"C": "B"}.get(family, family)
        if family == "I":
            raise InvalidType("dihedral types need the edge label; use dihedral(k)")
        check = _FAMILY_RANKS.get(family)
        if check is None or not check(rank):
            raise InvalidType(f"{family}{rank} is not a finite Coxeter type")
        return cls(family, rank)

    @classmethod
    def dihedral(cls, k: int) -> CoxeterType:
        if k < 3:
            raise InvalidType(f"I2({k}) requires k >= 3")
        if k == 3:
            return cls("A", 2)
        if k == 4:
            return cls("B", 2)
        if k == 6:
            return cls("G", 2)
        return cls("I", 2, k)

    @classmethod
    def product(cls, parts: "list[CoxeterType] | tuple[CoxeterType, ...]") -> CoxeterType:
        flat: list[CoxeterType] = []
        for p in parts:
            flat.extend(p.factors if p.is_product else (p,))
        if not flat:
            raise InvalidType("empty product")
        if len(flat) == 1:
            return flat[0]
        flat.sort(key=lambda t: (t.family, t.rank, t.k or 0))
        return cls(rank=sum(t.rank for t in flat), factors=tuple(flat))

    @classmethod
    def parse(cls, text: str) -> CoxeterType:
        """Parse CLI type strings: "A5", "B3", "I2(7)", products "A1xA1"."""
        parts = []
        for token in text.strip().split("x"):
            token = token.strip()
            if not token:
                raise InvalidType(f"empty factor in {text!r}")
            if token.upper().startswith("I2(") and token.endswith(")"):
                inner = token[3:-1]
                if not inner.isdigit():
                    raise InvalidType(f"bad dihedral label in {token!r}")
                parts.append(cls.dihedral(int(inner)))
                continue
            fam = token[0].upper()
            rest = token[1:]
            if not rest.isdigit():
                raise InvalidType(f"cannot parse factor {token!r}")
            if fam == "I":
                raise InvalidType("write dihedral types as I2(k)")
            parts.append(cls.simple(fam, int(rest)))
        return cls.product(parts)

    # -- predicates and accessors ---------------------------------------------

    @property
    def is_product(self) -> bool:
        return bool(self.factors)

    @property
    def is_irreducible(self) -> bool:
        return not self.factors

    @property
    def irreducible_factors(self) -> tuple["CoxeterType", ...]:
        return self.factors if self.is_product else (self,)

    @property
    def coxeter_number(self) -> int:
        if self.is_product:
            raise InvalidType("Coxeter number is per irreducible factor")
        return _coxeter_number(self)

    @property
    def exponents(self) -> tuple[int, ...]:
        if self.is_product:
            raise InvalidType("exponents are per irreducible factor")
        return _exponents(self)

    def __str__(self) -> str:
        if self.is_product:
            return "x".join(str(f) for f in self.factors)
        if self.family == "I":
            return f"I2({self.k})"
        return f"{self.family}{self.rank}"


def _coxeter_number(t: CoxeterType) -> int:
    fam, n = t.family, t.rank
    if fam == "A":
        return n + 1
    if fam == "B":
        return 2 * n
    if fam == "D":
        return 2 * (n - 1)
    if fam == "E":
        return {6: 12, 7: 18, 8: 30}[n]
    if fam == "F":
        return 12
    if fam == "G":
        return 6
    if fam == "H":
        return {3: 10, 4: 30}[n]
    if fam == "I":
        return t.k
    raise InvalidType(f"unknown family {fam}")


def _exponents(t: CoxeterType) -> tuple[int, ...]:
    fam, n = t.family, t.rank
    if fam == "A":
        return tuple(range(1, n + 1))
    if fam == "B":
        return tuple(range(1, 2 * n, 2))
    if fam == "D":
        return tuple(sorted(list(range(1, 2 * n - 2, 2)) + [n - 1]))
    if fam == "E":
        return {
            6: (1, 4, 5, 7, 8, 11),
            7: (1, 5, 7, 9, 11, 13, 17),
            8: (1, 7, 11, 13, 17, 19, 23, 29),
        }[n]
    if fam == "F":
        return (1, 5, 7, 11)
    if fam == "G":
        return (1, 5)
    if fam == "H":
        return {3: (1, 5, 9), 4: (1, 11, 19, 29)}[n]
    if fam == "I":
        return (1, t.k - 1)
    raise InvalidType(f"unknown family {fam}")


# ---------------------------------------------------------------------------
# Realization tables for the coordinate engine
# ---------------------------------------------------------------------------


def coxeter_matrix_of(t: CoxeterType) -> tuple[tuple[int, ...], ...]:
    """Coxeter-matrix entries m_st for an irreducible type (m_ss = 1)."""
    if t.is_product:
        raise InvalidType("per irreducible factor only")
    n = t.rank
    m = [[2] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 1

    def edge(i, j, label):
        m[i][j] = m[j][i] = label

    fam = t.family
    if fam in ("A", "B", "F", "G", "H", "I"):
        labels = {
            "A": [3] * (n - 1),
            "B": [3] * (n - 2) + [4],
            "F": [3, 4, 3],
            "G": [6],
            "H": [5] + [3] * (n - 2),
            "I": [t.k],
        }[fam]
        for i, lab in enumerate(labels):
            edge(i, i + 1, lab)
    elif fam == "D":
        for i in range(n - 2):
            edge(i, i + 1, 3)
        edge(n - 1, n - 3, 3)
    elif fam == "E":
        for i in range(n - 2):
            edge(i, i + 1, 3)
        edge(n - 1, 2, 3)
    return tuple(tuple(row) for row in m)


def _simple_norms(t: CoxeterType) -> list[Fraction]:
    """Squared lengths of simple roots making all Cartan integers integral."""
    n = t.rank
    return {
        "A": [Fraction(2)] * n,
        "D": [Fraction(2)] * n,
        "E": [Fraction(2)] * n,
        "B": [Fraction(2)] * (n - 1) + [Fraction(1)],
        "F": [Fraction(2), Fraction(2), Fraction(1), Fraction(1)],
        "G": [Fraction(2), Fraction(6)],
        "H": [Fraction(1)] * n,
    }[t.family]


def _gram_from_labels(coxmat, norms, d: int):
    """Gram matrix <a_i|a_j> = -cos(pi/m_ij) * sqrt(L_i L_j)."""
    n = len(coxmat)
    cos = {
        3: QuadExt(Fraction(1, 2), 0, d),
        5: QuadExt(Fraction(1, 4), Fraction(1, 4), 5),
    }
    gram = [[QuadExt(0, 0, d) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        gram[i][i] = QuadExt(norms[i], 0, d)
    for i in range(n):
        for j in range(i + 1, n):
            lab = coxmat[i][j]
            if lab == 2:
                continue
            if lab in (3, 5):
                # -cos(pi/lab) * sqrt(L_i*L_j); the table norms keep the
                # square root rational for every label-3/label-5 edge
                val = -(cos[lab] * _exact_sqrt(norms[i] * norms[j]))
            elif lab == 4:
                # norms are (2,1) or (1,2): sqrt(2)*cos(pi/4) = 1
                assert sorted((norms[i], norms[j])) == [1, 2]
                val = QuadExt(-1, 0, d)
            elif lab == 6:
                # norms are (2,6): sqrt(12)*cos(pi/6) = 3
                assert sorted((norms[i], norms[j])) == [2, 6]
                val = QuadExt(-3, 0, d)
            else:
                raise InvalidType(f"unsupported edge label {lab} in coordinates")
            gram[i][j] = gram[j][i] = val
    return tuple(tuple(row) for row in gram)


def _exact_sqrt(q: Fraction) -> QuadExt:
    num, den = q.numerator, q.denominator
    rn = int(num ** 0.5 + 0.5)
    rd = int(den ** 0.5 + 0.5)
    if rn * rn != num or rd * rd != den:
        raise InvalidType(f"norm product {q} is not a perfect square")
    return QuadExt(Fraction(rn, rd))


# ---------------------------------------------------------------------------
# Roots and group elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Root:
    """One root: coordinates in the simple-root basis, or an angle index.

    ``coords`` is None exactly in the dihedral angle model, where ``angle``
    holds j for the root at angle j*pi/k (j in [0, 2k)).
    """

    index: int
    coords: tuple[QuadExt, ...] | None
    angle: int | None = None
    positive: bool = True

    def serialize_coords(self, k: int | None = None) -> list[str]:
        if self.coords is not None:
            return [c.serialize() for c in self.coords]
        # angle model: root_j = (sin((j+1)pi/k)*a + sin(j pi/k)*b) / sin(pi/k)
        j = self.angle
        return [f"sin({(j + 1) % (2 * k)}π/{k})/sin(π/{k})",
                f"sin({j}π/{k})/sin(π/{k})"]


class GroupElement:
    """A Coxeter-group element: a permutation of root indices plus either an
    exact matrix in the simple-root basis or a dihedral descriptor.

    Equality and hashing use the permutation only.
    """

    __slots__ = ("perm", "matrix", "dihedral", "_hash")

    def __init__(self, perm, matrix=None, dihedral=None):
        self.perm = tuple(perm)
        self.matrix = matrix
        self.dihedral = dihedral
        self._hash = hash(self.perm)

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.perm == other.perm

    def __hash__(self):
        return self._hash

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.perm))

    def __repr__(self):
        moved = sum(1 for i, j in enumerate(self.perm) if i != j)
        return f"<GroupElement moving {moved}/{len(self.perm)} roots>"


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum((a[i][l] * b[l][j] for l in range(n)), QuadExt(0)) for j in range(n))
        for i in range(n)
    )


def _mat_rank(m) -> int:
    """Rank of an exact matrix by Gaussian elimination."""
    rows = [list(r) for r in m]
    n = len(rows)
    rank = 0
    col = 0
    while rank < n and col < n:
        pivot = next((r for r in range(rank, n) if not rows[r][col].is_zero()), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for r in range(rank + 1, n):
            if not rows[r][col].is_zero():
                factor = rows[r][col] / pv
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


# ---------------------------------------------------------------------------
# The system itself
# ---------------------------------------------------------------------------


class CoxeterSystem:
    """An irreducible finite Coxeter system with bipartite Coxeter element.

    Attributes of note:

    - ``roots``: all roots, positives first (simple roots occupy the first
      ``rank`` slots of the positive range in the coordinate engine).
    - ``black`` / ``white``: the bipartition of simple-root positions; each
      class consists of pairwise orthogonal simple roots.
    - ``cox_element``: c = c_black * c_white, of order ``h``.
    - ``steinberg_pos``: root index -> position in Steinberg's indexing,
      seeded with -white simples then black simples and propagated by c.
    """

    def __init__(self, ctype: CoxeterType, *, swap_bipartition: bool = False,
                 _gram=None, _coxmat=None, _field_d=None, _black=None):
        if ctype.is_product:
            raise InvalidType("CoxeterSystem is per irreducible factor; use ProductSystem")
        self.type = ctype
        self.rank = ctype.rank
        self.h = ctype.coxeter_number
        self.exponents = ctype.exponents
        self.coxeter_matrix = _coxmat if _coxmat is not None else coxeter_matrix_of(ctype)

        if ctype.family == "I" and _gram is None:
            self._init_angle_model()
        else:
            self._init_coordinates(_gram, _field_d)

        self._init_bipartition(_black, swap_bipartition)
        self._init_elements()
        self._init_steinberg()
        self._length_cache: dict[tuple[int, ...], int] = {}

    # -- construction ----------------------------------------------------------

    def _init_coordinates(self, gram, field_d):
        n = self.rank
        d = field_d if field_d is not None else (5 if self.type.family == "H" else 1)
        self.field_d = d
        if gram is None:
            gram = _gram_from_labels(self.coxeter_matrix, _simple_norms(self.type), d)
        self.gram = gram
        zero, one = QuadExt(0, 0, d), QuadExt(1, 0, d)
        simples = [tuple(one if j == i else zero for j in range(n)) for i in range(n)]

        # closure of the simples under simple reflections
        seen = dict()
        queue = list(simples)
        for v in simples:
            seen[v] = True
        while queue:
            v = queue.pop()
            for i in range(n):
                w = self._reflect_coords_simple(i, v)
                if w not in seen:
                    seen[w] = True
                    queue.append(w)

        def is_positive(v):
            signs = [c.sign() for c in v]
            if all(s >= 0 for s in signs):
                return True
            if all(s <= 0 for s in signs):
                return False
            raise InvalidType("reflection closure produced a non-root vector")

        positives = [v for v in seen if is_positive(v)]
        simple_set = set(simples)

        def height(v):
            return sum(v, QuadExt(0, 0, d))

        rest = sorted((v for v in positives if v not in simple_set),
                      key=lambda v: (height(v), v))
        ordered_pos = simples + rest
        self.n_positive = len(ordered_pos)
        coords_list = ordered_pos + [tuple(-c for c in v) for v in ordered_pos]
        self.roots = [Root(i, v, None, i < self.n_positive)
                      for i, v in enumerate(coords_list)]
        self._coord_index = {r.coords: r.index for r in self.roots}
        self.simple_indices = list(range(n))
        if self.n_positive * 2 != len(self.roots):
            raise InvalidType("root count mismatch")
        if self.n_positive != n * self.h // 2:
            raise InvalidType(
                f"expected {n * self.h // 2} positive roots, found {self.n_positive}")

    def _reflect_coords_simple(self, i, v):
        # s_i(v) = v - (2<v, a_i>/<a_i, a_i>) e_i ; only coordinate i changes
        ip = sum((v[j] * self.gram[j][i] for j in range(self.rank)), QuadExt(0))
        coeff = (ip + ip) / self.gram[i][i]
        return tuple(c - coeff if j == i else c for j, c in enumerate(v))

    def _init_angle_model(self):
        k = self.type.k
        self.field_d = 1
        self.gram = None
        self.k = k
        self.n_positive = k
        self.roots = [Root(j, None, j, j < k) for j in range(2 * k)]
        self.simple_indices = [0, k - 1]

    def _init_bipartition(self, black, swap):
        n = self.rank
        # 2-color the Coxeter graph; the class of the first simple root is black
        color = [None] * n
        for start in range(n):
            if color[start] is not None:
                continue
            color[start] = 0
            stack = [start]
            while stack:
                u = stack.pop()
                for v in range(n):
                    if v != u and self.coxeter_matrix[u][v] > 2:
                        if color[v] is None:
                            color[v] = 1 - color[u]
                            stack.append(v)
                        elif color[v] == color[u]:
                            raise InvalidType("Coxeter graph is not bipartite")
        blackset = frozenset(i for i in range(n) if color[i] == 0)
        if black is not None:
            blackset = frozenset(black)
        if swap:
            blackset = frozenset(range(n)) - blackset
        self.black = blackset
        self.white = frozenset(range(n)) - blackset

    # -- element algebra --------------------------------------------------------

    def identity(self) -> GroupElement:
        n = len(self.roots)
        if self.is_angle_model:
            return GroupElement(range(n), dihedral=("rot", 0))
        one, zero = QuadExt(1, 0, self.field_d), QuadExt(0, 0, self.field_d)
        ident = tuple(tuple(one if i == j else zero for j in range(self.rank))
                      for i in range(self.rank))
        return GroupElement(range(n), matrix=ident)

    @property
    def is_angle_model(self) -> bool:
        return self.roots[0].coords is None

    def _element_from_matrix(self, matrix) -> GroupElement:
        perm = []
        for r in self.roots:
            img = tuple(
                sum((matrix[i][j] * r.coords[j] for j in range(self.rank)), QuadExt(0))
                for i in range(self.rank)
            )
            perm.append(self._coord_index[img])
        return GroupElement(perm, matrix=matrix)

    def _element_from_dihedral(self, kind: str, s: int) -> GroupElement:
        k = self.k
        s %= 2 * k
        if kind == "rot":
            perm = [(j + s) % (2 * k) for j in range(2 * k)]
        else:
            perm = [(s - j) % (2 * k) for j in range(2 * k)]
        return GroupElement(perm, dihedral=(kind, s))

    def _init_elements(self):
        n = self.rank
        if self.is_angle_model:
            k = self.k
            self._reflections = [self._element_from_dihedral("ref", (2 * j + k) % (2 * k))
                                 for j in range(self.n_positive)]
        else:
            refs = []
            for j in range(self.n_positive):
                a = self.roots[j].coords
                ga = tuple(sum((self.gram[i][l] * a[l] for l in range(n)), QuadExt(0))
                           for i in range(n))
                norm = sum((a[i] * ga[i] for i in range(n)), QuadExt(0))
                two = QuadExt(2, 0, self.field_d)
                mat = tuple(
                    tuple((QuadExt(1 if i == l else 0, 0, self.field_d)
                           - two * a[i] * ga[l] / norm) for l in range(n))
                    for i in range(n)
                )
                refs.append(self._element_from_matrix(mat))
            self._reflections = refs

        simple_refl = [self._reflections[self.simple_indices[i]] for i in range(n)]
        self.c_black = self._product([simple_refl[i] for i in sorted(self.black)])
        self.c_white = self._product([simple_refl[i] for i in sorted(self.white)])
        self.cox_element = self.compose(self.c_black, self.c_white)
        # order of c must be exactly the Coxeter number
        w = self.cox_element
        order = 1
        while not w.is_identity():
            w = self.compose(self.cox_element, w)
            order += 1
            if order > self.h:
                break
        if order != self.h:
            raise InvalidType(f"Coxeter element has order {order}, expected {self.h}")
        self.w0 = self._compute_longest()

    def _product(self, elems) -> GroupElement:
        out = self.identity()
        for e in elems:
            out = self.compose(out, e)
        return out

    def compose(self, u: GroupElement, v: GroupElement) -> GroupElement:
        """(u v): apply v first, then u — matching function composition."""
        perm = tuple(u.perm[i] for i in v.perm)
        if u.dihedral is not None:
            ku, su = u.dihedral
            kv, sv = v.dihedral
            if ku == "rot" and kv == "rot":
                dh = ("rot", (su + sv) % (2 * self.k))
            elif ku == "rot":
                dh = ("ref", (su + sv) % (2 * self.k))
            elif kv == "rot":
                dh = ("ref", (su - sv) % (2 * self.k))
            else:
                dh = ("rot", (su - sv) % (2 * self.k))
            return GroupElement(perm, dihedral=dh)
        return GroupElement(perm, matrix=_mat_mul(u.matrix, v.matrix))

    def inverse(self, w: GroupElement) -> GroupElement:
        n = len(w.perm)
        inv = [0] * n
        for i, j in enumerate(w.perm):
            inv[j] = i
        if w.dihedral is not None:
            kind, s = w.dihedral
            dh = ("rot", (-s) % (2 * self.k)) if kind == "rot" else ("ref", s)
            return GroupElement(inv, dihedral=dh)
        # the matrix of a root-system element is determined by the root perm
        mat = self._matrix_from_perm(inv)
        return GroupElement(inv, matrix=mat)

    def _matrix_from_perm(self, perm):
        # images of the simple roots give the columns
        n = self.rank
        cols = [self.roots[perm[i]].coords for i in range(n)]
        return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))

    def power(self, w: GroupElement, e: int) -> GroupElement:
        if e < 0:
            return self.power(self.inverse(w), -e)
        out = self.identity()
        base = w
        while e:
            if e & 1:
                out = self.compose(out, base)
            base = self.compose(base, base)
            e >>= 1
        return out

    def apply(self, w: GroupElement, root_index: int) -> int:
        return w.perm[root_index]

    def negate(self, root_index: int) -> int:
        np = self.n_positive
        return root_index + np if root_index < np else root_index - np

    def _compute_longest(self) -> GroupElement:
        """The longest element, built greedily; sends all positives to negatives."""
        n = self.rank
        w = self.identity()
        simple_refl = [self._reflections[self.simple_indices[i]] for i in range(n)]
        for _ in range(self.n_positive + 1):
            i = next((i for i in range(n)
                      if w.perm[self.simple_indices[i]] < self.n_positive), None)
            if i is None:
                break
            w = self.compose(w, simple_refl[i])
        if any(w.perm[j] < self.n_positive for j in range(self.n_positive)):
            raise InvalidType("failed to construct the longest element")
        return w

    # -- Steinberg indexing -------------------------------------------------------

    def _init_steinberg(self):
        n = self.rank
        seeds = ([self.negate(self.simple_indices[i]) for i in sorted(self.white)]
                 + [self.simple_indices[i] for i in sorted(self.black)])
        pos_of = [-1] * len(self.roots)
        current = seeds
        p = 0
        for _ in range(self.h):
            for ridx in current:
                if pos_of[ridx] != -1:
                    raise InvalidType("Steinberg propagation revisited a root")
                pos_of[ridx] = p
                p += 1
            current = [self.cox_element.perm[r] for r in current]
        if p != len(self.roots) or -1 in pos_of:
            raise InvalidType("Steinberg indexing did not cover the root system")
        self.steinberg_pos = pos_of
        self.steinberg_root = sorted(range(len(self.roots)), key=lambda r: pos_of[r])

    def steinberg_compare(self, a: int, b: int) -> int:
        pa, pb = self.steinberg_pos[a], self.steinberg_pos[b]
        return (pa > pb) - (pa < pb)

    # -- queries -----------------------------------------------------------------

    def inner_product_sign(self, a: int, b: int) -> int:
        ra, rb = self.roots[a], self.roots[b]
        if self.is_angle_model:
            k = self.k
            diff = (ra.angle - rb.angle) % (2 * k)
            diff = min(diff, 2 * k - diff)  # in [0, k]
            if 2 * diff < k:
                return 1
            if 2 * diff == k:
                return 0
            if 2 * diff < 3 * k:
                return -1
            return 1
        val = QuadExt(0, 0, self.field_d)
        for i in range(self.rank):
            for j in range(self.rank):
                val = val + ra.coords[i] * self.gram[i][j] * rb.coords[j]
        return val.sign()

    def support(self, root_index: int) -> frozenset[int]:
        """Simple positions with nonzero coefficient; equals supp of t_root."""
        r = self.roots[root_index]
        if not r.positive:
            raise NegativeRoot(f"root {root_index} is negative")
        if self.is_angle_model:
            if r.angle == 0:
                return frozenset({0})
            if r.angle == self.k - 1:
                return frozenset({1})
            return frozenset({0, 1})
        return frozenset(i for i, c in enumerate(r.coords) if not c.is_zero())

    def reflection_length(self, w: GroupElement) -> int:
        """n - dim Fix(w), by exact rank of (M - Id); 0/1/2 in the angle model."""
        cached = self._length_cache.get(w.perm)
        if cached is not None:
            return cached
        if w.dihedral is not None:
            kind, s = w.dihedral
            out = (0 if s == 0 else 2) if kind == "rot" else 1
        else:
            n = self.rank
            delta = tuple(
                tuple(w.matrix[i][j] - QuadExt(1 if i == j else 0, 0, self.field_d)
                      for j in range(n))
                for i in range(n)
            )
            out = _mat_rank(delta)
        self._length_cache[w.perm] = out
        return out

    def absolute_leq_c(self, w: GroupElement) -> bool:
        """w <= c in absolute order, via the length identity."""
        rest = self.compose(self.inverse(w), self.cox_element)
        return self.reflection_length(w) + self.reflection_length(rest) == self.rank

    def reflection_of_root(self, root_index: int) -> GroupElement:
        if root_index >= self.n_positive:
            root_index = self.negate(root_index)
        return self._reflections[root_index]

    def canonical_order(self) -> int:
        """Order of the diagram symmetry induced by rho -> -w0(rho) (1 or 2)."""
        return 1 if all(self.negate(self.w0.perm[self.simple_indices[i]])
                        == self.simple_indices[i] for i in range(self.rank)) else 2


# ---------------------------------------------------------------------------
# Reducible systems
# ---------------------------------------------------------------------------


class ProductSystem:
    """A reducible system: a tuple of irreducible CoxeterSystems."""

    def __init__(self, ctype: CoxeterType, *, swap_bipartition: bool = False):
        if not ctype.is_product:
            raise InvalidType("use CoxeterSystem for irreducible types")
        self.type = ctype
        self.components = [CoxeterSystem(f, swap_bipartition=swap_bipartition)
                           for f in ctype.factors]
        self.rank = ctype.rank

    @property
    def is_product(self) -> bool:
        return True


def build_coxeter_system(t: CoxeterType | str, *, swap_bipartition: bool = False):
    """Build an irreducible CoxeterSystem or a ProductSystem from a type."""
    if isinstance(t, str):
        t = CoxeterType.parse(t)
    if t.is_product:
        return ProductSystem(t, swap_bipartition=swap_bipartition)
    return CoxeterSystem(t, swap_bipartition=swap_bipartition)


# ---------------------------------------------------------------------------
# Parabolic subsystems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ParabolicComponent:
    system: CoxeterSystem
    simple_map: dict  # parent simple position -> new simple position


def parabolic_subsystem(sys: CoxeterSystem, keep) -> list[ParabolicComponent]:
    """Standard parabolic subsystem on a subset of the simple roots.

    Returns one entry per irreducible component, each a freshly built system
    over the induced Gram matrix with the bipartition inherited from the
    parent.  The empty subset yields an empty list.
    """
    keep = sorted(set(keep))
    if any(i < 0 or i >= sys.rank for i in keep):
        raise InvalidType("kept indices outside the simple-root range")
    if not keep:
        return []
    # connected components of the induced Coxeter graph
    comps: list[list[int]] = []
    unvisited = set(keep)
    while unvisited:
        start = min(unvisited)
        comp = [start]
        unvisited.remove(start)
        stack = [start]
        while stack:
            u = stack.pop()
            for v in list(unvisited):
                if sys.coxeter_matrix[u][v] > 2:
                    unvisited.remove(v)
                    comp.append(v)
                    stack.append(v)
        comps.append(sorted(comp))

    out = []
    for comp in comps:
        sub_coxmat = tuple(tuple(sys.coxeter_matrix[i][j] for j in comp) for i in comp)
        ctype = classify_coxeter_matrix(sub_coxmat)
        black = frozenset(pos for pos, i in enumerate(comp) if i in sys.black)
        if sys.is_angle_model:
            # rank-1 or the full system
            if len(comp) == 2:
                subsystem = CoxeterSystem(sys.type, _black=black)
            else:
                subsystem = CoxeterSystem(CoxeterType.simple("A", 1), _black=black)
        else:
            sub_gram = tuple(tuple(sys.gram[i][j] for j in comp) for i in comp)
            subsystem = CoxeterSystem(ctype, _gram=sub_gram, _coxmat=sub_coxmat,
                                      _field_d=sys.field_d, _black=black)
        out.append(ParabolicComponent(subsystem, {i: pos for pos, i in enumerate(comp)}))
    return out


def classify_coxeter_matrix(coxmat) -> CoxeterType:
    """Identify the finite type of an irreducible Coxeter matrix."""
    n = len(coxmat)
    if n == 1:
        return CoxeterType.simple("A", 1)
    if n == 2:
        return CoxeterType.dihedral(coxmat[0][1])
    candidates: list[CoxeterType] = [CoxeterType.simple("A", n)]
    for fam in ("B", "D", "E", "F", "H"):
        try:
            candidates.append(CoxeterType.simple(fam, n))
        except InvalidType:
            pass
    for cand in candidates:
        target = coxeter_matrix_of(cand)
        for p in itertools.permutations(range(n)):
            if all(target[p[i]][p[j]] == coxmat[i][j]
                   for i in range(n) for j in range(n)):
                return cand
    raise InvalidType("Coxeter matrix is not of finite type")


# ---------------------------------------------------------------------------
# Diagram symmetries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiagramSymmetry:
    """A permutation of the simple roots preserving the Coxeter matrix.

    ``even`` means the black/white classes are preserved; odd symmetries
    swap them (possible only when the two classes have equal sizes).
    """

    perm: tuple[int, ...]
    even: bool

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.perm))


def diagram_symmetries(sys: CoxeterSystem) -> list[DiagramSymmetry]:
    """All Coxeter-graph automorphisms, labeled even/odd; includes identity."""
    n = sys.rank
    out = []
    for p in itertools.permutations(range(n)):
        if all(sys.coxeter_matrix[p[i]][p[j]] == sys.coxeter_matrix[i][j]
               for i in range(n) for j in range(i + 1, n)):
            image_black = frozenset(p[i] for i in sys.black)
            if image_black == sys.black:
                out.append(DiagramSymmetry(p, True))
            elif image_black == sys.white:
                out.append(DiagramSymmetry(p, False))
            else:
                raise InvalidType("graph symmetry does not respect the bipartition")
    out.sort(key=lambda d: d.perm)
    return out


def canonical_diagram_map(sys: CoxeterSystem) -> DiagramSymmetry:
    """The diagram symmetry rho -> -w0(rho)."""
    n = sys.rank
    perm = []
    for i in range(n):
        img = sys.negate(sys.w0.perm[sys.simple_indices[i]])
        pos = sys.simple_indices.index(img) if img in sys.simple_indices else None
        if pos is None:
            raise InvalidType("w0 does not send the simples to their negatives")
        perm.append(pos)
    perm = tuple(perm)
    image_black = frozenset(perm[i] for i in sys.black)
    return DiagramSymmetry(perm, image_black == sys.black)
