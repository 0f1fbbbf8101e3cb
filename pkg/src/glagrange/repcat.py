"""Irreducible rational representations, central idempotents, invariant forms.

Representation matrices compose like the group: ``rho(g) @ rho(h) == rho(gh)``.
Cyclotomic fields ``Q(zeta_d)`` are realized on the power basis
``1, zeta, ..., zeta^(phi(d)-1)``, with ``zeta`` acting as the companion matrix
of the d-th cyclotomic polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from .exactla import RationalMatrix, kernel
from .groups import FiniteGroup, dihedral

__all__ = [
    "RationalRep",
    "GroupAlgebraElement",
    "RepError",
    "cyclotomic_poly",
    "companion",
    "rep_from_generators",
    "catalog_reps",
    "central_idempotents",
    "averaged_invariant_form",
    "commutant_basis",
    "intertwiners",
    "adjoint_trace_check",
    "dimension_identity",
]


class RepError(ValueError):
    pass


# -- cyclotomic plumbing -------------------------------------------------


def _poly_divmod(a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    # coefficient lists, lowest degree first; b monic
    a = a[:]
    q = [0] * max(len(a) - len(b) + 1, 1)
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1]
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return q, a[: len(b) - 1]


@lru_cache(maxsize=None)
def cyclotomic_poly(d: int) -> tuple[int, ...]:
    """Integer coefficients of the d-th cyclotomic polynomial, lowest degree first."""
    num = [-1] + [0] * (d - 1) + [1]
    for e in range(1, d):
        if d % e == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_poly(e)))
            assert not any(rem)
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return tuple(num)


def companion(d: int) -> RationalMatrix:
    """Multiplication by zeta_d on the power basis (column j = coordinates of zeta^(j+1))."""
    return _power_map(d, 1)


def _power_coords(d: int, k: int) -> list[int]:
    phi = cyclotomic_poly(d)
    deg = len(phi) - 1
    mono = [0] * (k % d) + [1]
    if len(mono) <= deg:
        return mono + [0] * (deg - len(mono))
    _, rem = _poly_divmod(mono, list(phi))
    return rem + [0] * (deg - len(rem))


def _power_map(d: int, k: int) -> RationalMatrix:
    # multiplication by zeta^k
    deg = len(cyclotomic_poly(d)) - 1
    cols = [_power_coords(d, j + k) for j in range(deg)]
    return RationalMatrix([list(r) for r in zip(*cols)])


def _galois_map(d: int, r: int) -> RationalMatrix:
    # field automorphism zeta -> zeta^r
    deg = len(cyclotomic_poly(d)) - 1
    cols = [_power_coords(d, r * j) for j in range(deg)]
    return RationalMatrix([list(r_) for r_ in zip(*cols)])


def _euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


# -- representations ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RationalRep:
    group: FiniteGroup
    dim: int
    matrices: tuple[RationalMatrix, ...]
    label: str
    endo_dim: int | None = None

    def __call__(self, g: int) -> RationalMatrix:
        return self.matrices[g]

    def character(self) -> tuple[Fraction, ...]:
        return tuple(M.trace() for M in self.matrices)

    @property
    def multiplicity_ratio(self) -> Fraction:
        """dim V / dim D: the number of copies of V in the group algebra block."""
        return Fraction(self.dim, self.endo_dim)

    def is_homomorphism(self) -> bool:
        G = self.group
        if self.matrices[G.identity] != RationalMatrix.identity(self.dim):
            return False
        return all(
            self.matrices[a] @ self.matrices[b] == self.matrices[G.mul[a][b]]
            for a in G.elements()
            for b in G.elements()
        )


def rep_from_generators(
    G: FiniteGroup,
    images: Sequence[RationalMatrix],
    label: str,
    gens: Sequence[int] | None = None,
    check: bool = True,
) -> RationalRep:
    """Extend generator images to all of G and verify the homomorphism property."""
    gens = list(G.generator_indices if gens is None else gens)
    if len(gens) != len(images):
        raise RepError(f"{label}: {len(images)} images for {len(gens)} generators")
    d = images[0].rows
    for M in images:
        if M.shape != (d, d):
            raise RepError(f"{label}: generator images must be {d}x{d}")
    mats: dict[int, RationalMatrix] = {G.identity: RationalMatrix.identity(d)}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g, M in zip(gens, images):
                b = G.mul[a][g]
                if b not in mats:
                    mats[b] = mats[a] @ M
                    nxt.append(b)
        frontier = nxt
    if len(mats) != G.order:
        raise RepError(f"{label}: generators do not reach every group element")
    rep = RationalRep(G, d, tuple(mats[g] for g in G.elements()), label)
    if check and not rep.is_homomorphism():
        raise RepError(f"{label}: generator images violate the group relations")
    return RationalRep(G, d, rep.matrices, label, len(commutant_basis(rep.matrices, gens)))


def intertwiners(
    A: Sequence[RationalMatrix], B: Sequence[RationalMatrix]
) -> list[RationalMatrix]:
    """Basis of ``{X : A[k] @ X == X @ B[k] for all k}`` (X is dim A x dim B)."""
    da, db = A[0].rows, B[0].rows
    rows: list[list[Fraction]] = []
    for Ak, Bk in zip(A, B):
        a, b = Ak.tolist(), Bk.tolist()
        for i in range(da):
            for j in range(db):
                eq = [Fraction(0)] * (da * db)
                for k in range(da):
                    if a[i][k]:
                        eq[k * db + j] += a[i][k]
                for k in range(db):
                    if b[k][j]:
                        eq[i * db + k] -= b[k][j]
                rows.append(eq)
    sol = kernel(RationalMatrix.from_rows(rows, cols=da * db))
    return [
        RationalMatrix.from_rows([v[i * db:(i + 1) * db] for i in range(da)])
        for v in sol.basis.row_vectors()
    ]


def commutant_basis(matrices: Sequence[RationalMatrix], gens: Sequence[int] | None = None) -> list[RationalMatrix]:
    """Basis of the matrices commuting with the given ones (all, or those at ``gens``)."""
    mats = list(matrices) if gens is None else [matrices[g] for g in gens]
    return intertwiners(mats, mats)


def _pullback(G: FiniteGroup, rep: RationalRep, quotient: Sequence[int], label: str) -> RationalRep:
    mats = tuple(rep.matrices[quotient[g]] for g in G.elements())
    return RationalRep(G, rep.dim, mats, label, rep.endo_dim)


def _cyclic_catalog(G: FiniteGroup) -> list[RationalRep]:
    n = G.order
    reps = []
    for d in range(1, n + 1):
        if n % d == 0:
            reps.append(rep_from_generators(G, [companion(d)], f"Q(zeta_{d})" if d > 2 else ("trivial" if d == 1 else "sign")))
    return reps


def _abelian_product_catalog(G: FiniteGroup, m: int, n: int) -> list[RationalRep]:
    # characters (i, j) -> s*i/m + t*j/n mod 1; one representative per kernel
    seen = set()
    reps = []
    for s in range(m):
        for t in range(n):
            def val(a: int) -> Fraction:
                i, j = divmod(a, n)
                return (Fraction(s * i, m) + Fraction(t * j, n)) % 1
            ker = frozenset(a for a in G.elements() if val(a) == 0)
            if ker in seen:
                continue
            seen.add(ker)
            order = max((val(a).denominator for a in G.elements()), default=1)
            Z = companion(order)
            images = [Z ** int(val(g) * order) for g in G.generator_indices]
            lab = "trivial" if order == 1 else f"chi({s}/{m},{t}/{n})"
            reps.append(rep_from_generators(G, images, lab))
    return reps


def _dihedral_catalog(G: FiniteGroup) -> list[RationalRep]:
    m = G.order // 2
    reps = []
    for d in range(1, m + 1):
        if m % d:
            continue
        if d <= 2:
            for sy in (1, -1):
                x = RationalMatrix.scalar(1, 1 if d == 1 else -1)
                y = RationalMatrix.scalar(1, sy)
                lab = f"lin(x={'+' if d == 1 else '-'},y={'+' if sy == 1 else '-'})"
                reps.append(rep_from_generators(G, [x, y], lab))
        else:
            reps.append(rep_from_generators(G, [companion(d), _galois_map(d, -1)], f"dihedral Q(zeta_{d})"))
    return reps


def _quotient_to_dihedral(G: FiniteGroup) -> tuple[FiniteGroup, list[int]]:
    # G/<x^(m/2)> for the semidihedral and quaternion families is dihedral of order m
    m = G.order // 2
    D = dihedral(m)
    half = m // 2
    q = [(g % m) % half + half * (g // m) for g in G.elements()]
    return D, q


def _family_catalog(G: FiniteGroup) -> list[RationalRep]:
    fam = G.family
    kind = fam[0]
    if kind == "cyclic":
        return _cyclic_catalog(G)
    if kind == "dihedral":
        return _dihedral_catalog(G)
    if kind in ("semidihedral", "quaternion"):
        m = G.order // 2
        D, q = _quotient_to_dihedral(G)
        reps = [_pullback(G, r, q, r.label) for r in _dihedral_catalog(D)]
        C = companion(m)
        if kind == "semidihedral":
            faithful = rep_from_generators(G, [C, _galois_map(m, m // 2 - 1)], f"faithful SD Q(zeta_{m})")
        else:
            J = _galois_map(m, -1)
            Z = RationalMatrix.zeros(J.rows, J.rows)
            x = RationalMatrix.block_diag([C, C])
            y = RationalMatrix.vstack([
                RationalMatrix.hstack([Z, -J]),
                RationalMatrix.hstack([J, Z]),
            ])
            faithful = rep_from_generators(G, [x, y], f"faithful quaternionic Q(zeta_{m})^2")
        return reps + [faithful]
    if kind == "product" and all(f[0] == "cyclic" for f in fam[1:]):
        return _abelian_product_catalog(G, fam[1][1], fam[2][1])
    raise RepError(
        f"no built-in representation catalog for group {G.label()}; supply representations"
    )


def catalog_reps(G: FiniteGroup, user_reps: Sequence[Sequence[RationalMatrix]] | None = None) -> list[RationalRep]:
    """Complete list of irreducible rational representations of ``G``.

    ``user_reps`` (per-generator matrices) replaces the built-in catalog; the
    result is checked against the dimension identity either way.
    """
    if user_reps:
        reps = [rep_from_generators(G, list(imgs), f"user{k}") for k, imgs in enumerate(user_reps)]
    else:
        reps = _family_catalog(G)
    if dimension_identity(reps) != G.order:
        raise RepError(
            f"catalog for {G.label()} fails the Artin-Wedderburn count: "
            f"sum dim^2/endo_dim = {dimension_identity(reps)} != {G.order}"
        )
    chars = [r.character() for r in reps]
    if len(set(chars)) != len(chars):
        raise RepError("catalog contains isomorphic representations")
    return reps


def dimension_identity(reps: Sequence[RationalRep]) -> Fraction:
    return sum((Fraction(r.dim * r.dim, r.endo_dim) for r in reps), Fraction(0))


# -- group algebra --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupAlgebraElement:
    group: FiniteGroup
    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coefficients) != self.group.order:
            raise ValueError("coefficient list length must equal the group order")

    @classmethod
    def basis(cls, G: FiniteGroup, g: int) -> "GroupAlgebraElement":
        c = [Fraction(0)] * G.order
        c[g] = Fraction(1)
        return cls(G, tuple(c))

    @classmethod
    def one(cls, G: FiniteGroup) -> "GroupAlgebraElement":
        return cls.basis(G, G.identity)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupAlgebraElement) and self.group is other.group and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __add__(self, other):
        return GroupAlgebraElement(self.group, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other):
        return GroupAlgebraElement(self.group, tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def __mul__(self, other):
        if not isinstance(other, GroupAlgebraElement):
            c = Fraction(other)
            return GroupAlgebraElement(self.group, tuple(a * c for a in self.coefficients))
        G = self.group
        out = [Fraction(0)] * G.order
        for a, ca in enumerate(self.coefficients):
            if ca:
                row = G.mul[a]
                for b, cb in enumerate(other.coefficients):
                    if cb:
                        out[row[b]] += ca * cb
        return GroupAlgebraElement(G, tuple(out))

    __rmul__ = __mul__

    def conjugate(self) -> "GroupAlgebraElement":
        """The involution g -> g^-1 extended linearly."""
        G = self.group
        out = [Fraction(0)] * G.order
        for g, c in enumerate(self.coefficients):
            out[G.inv[g]] = c
        return GroupAlgebraElement(G, tuple(out))

    def is_central(self) -> bool:
        return all(
            self * GroupAlgebraElement.basis(self.group, g) == GroupAlgebraElement.basis(self.group, g) * self
            for g in self.group.generator_indices
        )

    def act(self, matrices: Sequence[RationalMatrix]) -> RationalMatrix:
        """Image under a representation: sum of coefficient * matrix."""
        out = None
        for g, c in enumerate(self.coefficients):
            if c:
                term = matrices[g] * c
                out = term if out is None else out + term
        if out is None:
            return RationalMatrix.zeros(matrices[0].rows, matrices[0].cols)
        return out

    def identity_coefficient(self) -> Fraction:
        return self.coefficients[self.group.identity]


def central_idempotents(G: FiniteGroup, reps: Sequence[RationalRep]) -> list[GroupAlgebraElement]:
    """One central idempotent per catalog representation, validated exactly.

    ``e_i = (dim V_i / endo_dim V_i) / |G| * sum_g tr(rho_i(g^-1)) g``.
    """
    if dimension_identity(reps) != G.order:
        raise RepError("incomplete catalog: dimension identity fails")
    n = G.order
    idems = []
    for r in reps:
        c = r.multiplicity_ratio / n
        idems.append(GroupAlgebraElement(G, tuple(c * r.matrices[G.inv[g]].trace() for g in G.elements())))
    one = GroupAlgebraElement.one(G)
    total = idems[0]
    for e in idems[1:]:
        total = total + e
    if total != one:
        raise RepError("idempotents do not sum to 1")
    for i, e in enumerate(idems):
        if e * e != e or not e.is_central():
            raise RepError(f"e_{i} is not a central idempotent")
        for j, r in enumerate(reps):
            img = e.act(r.matrices)
            want = RationalMatrix.identity(r.dim) if i == j else RationalMatrix.zeros(r.dim, r.dim)
            if img != want:
                raise RepError(f"e_{i} acts wrongly on representation {j}")
    for i in range(len(idems)):
        for j in range(len(idems)):
            if i != j and not all(c == 0 for c in (idems[i] * idems[j]).coefficients):
                raise RepError(f"e_{i} e_{j} != 0")
    return idems


def averaged_invariant_form(rep: RationalRep) -> RationalMatrix:
    """Symmetric positive-definite B with rho(g) B rho(g)^T == B for all g."""
    total = None
    for M in rep.matrices:
        t = M @ M.T
        total = t if total is None else total + t
    return total * Fraction(1, rep.group.order)


def adjoint_trace_check(G: FiniteGroup, reps: Sequence[RationalRep], idems=None) -> list[bool]:
    """Check the block formula for the trace pairing on Q[G].

    For a, b in the block e_i Q[G], the coefficient pairing sum_g a_g b_g must
    equal (dim V_i / endo_dim V_i) / |G| * tr(rho_i(a) rho_i(b)^*), where the
    adjoint is taken with respect to the averaged invariant form.  Checked on
    the spanning set {e_i g}.
    """
    if idems is None:
        idems = central_idempotents(G, reps)
    results = []
    for r, e in zip(reps, idems):
        B = averaged_invariant_form(r)
        Binv = B.inverse()
        n_i = r.multiplicity_ratio
        span = [e * GroupAlgebraElement.basis(G, g) for g in G.elements()]
        imgs = [s.act(r.matrices) for s in span]
        adjs = [B @ M.T @ Binv for M in imgs]
        ok = True
        for a, Ma in zip(span, imgs):
            for b, Mb_adj in zip(span, adjs):
                lhs = sum((x * y for x, y in zip(a.coefficients, b.coefficients)), Fraction(0))
                rhs = n_i / G.order * (Ma @ Mb_adj).trace()
                if lhs != rhs:
                    ok = False
                    break
            if not ok:
                break
        results.append(ok)
    return results
