"""Galois covers of closed surfaces as Delta-complexes.

Base surface of genus h: one vertex, loop edges a_1, b_1, ..., a_h, b_h, and a
4h-gon with boundary word a_1 b_1 a_1^-1 b_1^-1 ... .  The polygon is fanned
from corner 0 (diagonals to corners 2 .. 4h-2).  All diagonals point away from
corner 0, and the last side b_h^-1 does too, so corner 0 is a source in every
triangle and each triangle gets a genuine vertex order: (0, j, j+1) when side j
is a positive letter, (0, j+1, j) otherwise.

Cover cells are (sheet, base cell).  Corner k of sheet s lies over the vertex
``s * P_k`` where ``P_k`` is the monodromy of the first k boundary letters, so
lifts follow right translation and deck transformations act by left
multiplication on the sheet label.

First cohomology, cup product against the fundamental class and the deck
action give the symplectic module; a Fox-calculus complex gives twisted
homology dimensions for cross-checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .exactla import QuotientMap, RationalMatrix, Subspace, kernel
from .groups import FiniteGroup, GroupError
from .repcat import RationalRep
from .sympmod import SymplecticGModule

__all__ = [
    "CoverError",
    "CoverSpec",
    "CoverComplex",
    "build_cover",
    "symplectic_module_of_cover",
    "twisted_homology_dims",
    "surface_relator",
    "random_monodromy",
    "chevalley_weil_traces",
]


class CoverError(ValueError):
    pass


def surface_relator(h: int) -> list[tuple[int, int]]:
    """Letters (generator, +-1) of prod [a_i, b_i]; a_i is generator 2i, b_i is 2i+1."""
    word = []
    for i in range(h):
        a, b = 2 * i, 2 * i + 1
        word += [(a, 1), (b, 1), (a, -1), (b, -1)]
    return word


@dataclass(frozen=True)
class CoverSpec:
    base_genus: int
    group: FiniteGroup
    monodromy: tuple[int, ...]

    def __post_init__(self):
        h = self.base_genus
        if h < 1:
            raise CoverError("base genus must be at least 1")
        if len(self.monodromy) != 2 * h:
            raise CoverError(f"need {2 * h} monodromy images, got {len(self.monodromy)}")
        G = self.group
        for g in self.monodromy:
            if not 0 <= g < G.order:
                raise CoverError(f"monodromy image {g} is not an element index")
        if self.relator_value() != G.identity:
            raise CoverError("monodromy violates the surface relation prod [a_i, b_i] = 1")

    def relator_value(self) -> int:
        G = self.group
        return G.prod(G.commutator(self.monodromy[2 * i], self.monodromy[2 * i + 1]) for i in range(self.base_genus))

    @property
    def surjective(self) -> bool:
        return self.group.generates(self.monodromy)

    def image(self) -> list[int]:
        return self.group.closure(self.monodromy)


@dataclass(frozen=True, eq=False)
class CoverComplex:
    spec: CoverSpec
    n_vertices: int
    n_edges: int
    n_triangles: int
    edge_ends: tuple[tuple[int, int], ...]
    triangle_edges: tuple[tuple[int, int, int], ...]  # ([v0v1], [v1v2], [v0v2])
    orientation: tuple[int, ...]  # fundamental class coefficients
    base_edges: int
    base_triangles: int

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_triangles

    @property
    def cover_genus(self) -> int:
        return (2 - self.euler_characteristic) // 2

    def boundary_1(self) -> RationalMatrix:
        """Rows are edges, columns vertices: end minus start."""
        rows = []
        for s, t in self.edge_ends:
            r = [0] * self.n_vertices
            r[t] += 1
            r[s] -= 1
            rows.append(r)
        return RationalMatrix(rows, 1, self.n_vertices)

    def boundary_2(self) -> RationalMatrix:
        """Rows are triangles, columns edges: [v1v2] - [v0v2] + [v0v1]."""
        rows = []
        for e01, e12, e02 in self.triangle_edges:
            r = [0] * self.n_edges
            r[e12] += 1
            r[e02] -= 1
            r[e01] += 1
            rows.append(r)
        return RationalMatrix(rows, 1, self.n_edges)

    def deck_edge_perm(self, g: int) -> list[int]:
        """Edge index permutation of the deck transformation g (left multiplication)."""
        G = self.spec.group
        E = self.base_edges
        return [G.mul[g][c // E] * E + c % E for c in range(self.n_edges)]

    def deck_triangle_perm(self, g: int) -> list[int]:
        G = self.spec.group
        F = self.base_triangles
        return [G.mul[g][c // F] * F + c % F for c in range(self.n_triangles)]


def build_cover(spec: CoverSpec, require_connected: bool = True) -> CoverComplex:
    """The Delta-complex of the cover, with every counting invariant verified.

    Non-surjective monodromy gives a disconnected cover; that is an error
    unless ``require_connected`` is False.
    """
    G, h = spec.group, spec.base_genus
    if require_connected and not spec.surjective:
        raise CoverError(
            "monodromy does not generate the group (cover is disconnected); "
            "pass the generated subgroup instead (see groups.subgroup_generated)"
        )
    n = G.order
    letters = surface_relator(h)
    P = [G.identity]
    for gen, k in letters:
        P.append(G.mul[P[-1]][G.power(spec.monodromy[gen], k)])
    assert P[-1] == G.identity
    Eb = 2 * h + (4 * h - 3)
    Fb = 4 * h - 2

    def diag(j):  # diagonal from corner 0 to corner j, 2 <= j <= 4h-2
        return 2 * h + j - 2

    edge_ends = []
    for s in range(n):
        for gen in range(2 * h):
            edge_ends.append((s, G.mul[s][spec.monodromy[gen]]))
        for j in range(2, 4 * h - 1):
            edge_ends.append((s, G.mul[s][P[j]]))

    def side(s, k):
        gen, e = letters[k]
        sheet = G.mul[s][P[k] if e > 0 else P[k + 1]]
        return sheet * Eb + gen

    tri_edges = []
    orient = []
    for s in range(n):
        for j in range(1, 4 * h - 1):
            e0j = s * Eb + (0 if j == 1 else diag(j))
            e0j1 = s * Eb + (2 * h - 1 if j + 1 == 4 * h - 1 else diag(j + 1))
            sj = side(s, j)
            if letters[j][1] > 0:
                tri_edges.append((e0j, sj, e0j1))
                orient.append(1)
            else:
                tri_edges.append((e0j1, sj, e0j))
                orient.append(-1)
    C = CoverComplex(
        spec=spec,
        n_vertices=n,
        n_edges=n * Eb,
        n_triangles=n * Fb,
        edge_ends=tuple(edge_ends),
        triangle_edges=tuple(tri_edges),
        orientation=tuple(orient),
        base_edges=Eb,
        base_triangles=Fb,
    )
    _verify_complex(C, require_connected)
    return C


def _verify_complex(C: CoverComplex, connected: bool) -> None:
    n, h = C.spec.group.order, C.spec.base_genus
    if (C.n_vertices, C.n_edges, C.n_triangles) != (n, n * (6 * h - 3), n * (4 * h - 2)):
        raise CoverError("cell counts are wrong")
    if C.euler_characteristic != n * (2 - 2 * h):
        raise CoverError("Euler characteristic is not multiplicative")
    # Delta-complex face consistency: every triangle's edges meet at its vertices
    for e01, e12, e02 in C.triangle_edges:
        a0, a1 = C.edge_ends[e01]
        b1, b2 = C.edge_ends[e12]
        c0, c2 = C.edge_ends[e02]
        if not (a0 == c0 and a1 == b1 and b2 == c2):
            raise CoverError("triangle faces do not close up")
    D1, D2 = C.boundary_1(), C.boundary_2()
    if not (D2 @ D1).is_zero():
        raise CoverError("boundary of boundary is not zero")
    z = RationalMatrix([list(C.orientation)], 1, C.n_triangles)
    if not (z @ D2).is_zero():
        raise CoverError("orientation class is not a cycle")
    comps = 1 if connected else len(C.spec.group.closure(C.spec.monodromy))
    comps = 1 if connected else C.spec.group.order // comps
    if D1.rank() != C.n_vertices - comps:
        raise CoverError("rank H^0 is wrong")
    if D2.rank() != C.n_triangles - comps:
        raise CoverError("rank H^2 is wrong")


def symplectic_module_of_cover(C: CoverComplex) -> SymplecticGModule:
    """H^1 of the cover with the cup-product pairing and the deck action.

    Coordinates are taken in a basis of cocycle representatives complementary
    to the coboundaries.  ``g`` acts by pulling back along the deck
    transformation ``g``; ``v -> v @ A_g`` is then a right action and the
    matrices compose like the group.
    """
    D1, D2 = C.boundary_1(), C.boundary_2()
    cocycles = kernel(D2)
    coboundaries = Subspace.span(D1.T, C.n_edges)
    q = QuotientMap(cocycles, coboundaries)
    alpha = q.lift  # rows: cocycle representatives on edges
    n = q.dim
    t01 = [t[0] for t in C.triangle_edges]
    t12 = [t[1] for t in C.triangle_edges]
    X01 = alpha.take_cols(t01)
    X12 = alpha.take_cols(t12)
    z = RationalMatrix.block_diag([RationalMatrix([[c]]) for c in C.orientation]) if C.n_triangles else None
    omega = X01 @ z @ X12.T
    G = C.spec.group
    action = []
    for g in G.elements():
        perm = C.deck_edge_perm(g)
        pulled = alpha.take_cols(perm)  # (alpha . g)(cell) = alpha(g cell)
        action.append(q(pulled))
    V = SymplecticGModule(G, omega, tuple(action))
    if C.spec.surjective:
        expected = 2 + (2 * C.spec.base_genus - 2) * G.order
        if n != expected:
            raise CoverError(f"H^1 has dimension {n}, expected {expected}")
    return V


def chevalley_weil_traces(V: SymplecticGModule) -> list[Fraction]:
    return [A.trace() for A in V.action]


def _fox_matrices(spec: CoverSpec, rep: RationalRep) -> tuple[RationalMatrix, RationalMatrix]:
    h, d = spec.base_genus, rep.dim
    phi = [rep.matrices[g] for g in spec.monodromy]
    phi_inv = [rep.matrices[spec.group.inv[g]] for g in spec.monodromy]
    derivs = [RationalMatrix.zeros(d, d) for _ in range(2 * h)]
    prefix = RationalMatrix.identity(d)
    for gen, e in surface_relator(h):
        if e > 0:
            derivs[gen] = derivs[gen] + prefix
            prefix = prefix @ phi[gen]
        else:
            prefix = prefix @ phi_inv[gen]
            derivs[gen] = derivs[gen] - prefix
    I = RationalMatrix.identity(d)
    d2 = RationalMatrix.hstack(derivs)
    d1 = RationalMatrix.vstack([M - I for M in phi])
    if not (d2 @ d1).is_zero():
        raise CoverError("Fox complex is not a complex")
    return d2, d1


def twisted_homology_dims(spec: CoverSpec, rep: RationalRep) -> tuple[int, int, int]:
    """(dim H_0, dim H_1, dim H_2) of the surface with coefficients in ``rep``.

    Complex Q^d -> Q^{2hd} -> Q^d with boundary maps from Fox derivatives of
    the surface relator, evaluated through monodromy then ``rep``.
    """
    if rep.group.mul != spec.group.mul:
        raise CoverError("representation is over a different group")
    d2, d1 = _fox_matrices(spec, rep)
    r1, r2 = d1.rank(), d2.rank()
    d = rep.dim
    h0, h2 = d - r1, d - r2
    h1 = 2 * spec.base_genus * d - r1 - r2
    assert h0 - h1 + h2 == (2 - 2 * spec.base_genus) * d
    return h0, h1, h2


def random_monodromy(G: FiniteGroup, h: int, rng: random.Random, max_tries: int = 10000) -> tuple[int, ...]:
    """A seeded random surjective monodromy satisfying the surface relation.

    The first h-1 handles are drawn uniformly; the last pair is drawn among
    pairs whose commutator cancels the rest.
    """
    n = G.order
    comm: dict[int, list[tuple[int, int]]] = {}
    for a in range(n):
        for b in range(n):
            comm.setdefault(G.commutator(a, b), []).append((a, b))
    for _ in range(max_tries):
        imgs = [rng.randrange(n) for _ in range(2 * (h - 1))]
        partial = G.prod(G.commutator(imgs[2 * i], imgs[2 * i + 1]) for i in range(h - 1))
        need = G.inv[partial]
        if need not in comm:
            continue
        a, b = rng.choice(comm[need])
        imgs += [a, b]
        if G.generates(imgs):
            return tuple(imgs)
    raise GroupError("no surjective monodromy found")
