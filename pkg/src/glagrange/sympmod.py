"""Symplectic Q[G]-modules and the constructions around invariant Lagrangians.

Conventions: vectors are rows, ``omega(v, w) = v @ Omega @ w.T``, and group
element ``g`` acts by ``v -> v @ A_g``.  The action matrices form a
homomorphism (``A_g @ A_h == A_gh``), so this is a right action, and
invariance of the form reads ``A_g @ Omega @ A_g.T == Omega``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactla import QuotientMap, RationalMatrix, Subspace, kernel
from .groups import FiniteGroup
from .repcat import GroupAlgebraElement, RationalRep

__all__ = [
    "ModuleError",
    "CertificateError",
    "SymplecticGModule",
    "LagrangianCertificate",
    "standard_form",
    "perp",
    "classify_subspace",
    "is_invariant",
    "orbit_span",
    "check_lagrangian",
    "certify",
    "coisotropic_reduction",
    "karoubi_lagrangian",
    "transverse_invariant_lagrangian",
    "opposite",
    "direct_sum",
    "hyperbolic",
    "induction",
    "right_cosets",
    "group_ring_form",
    "trace_pairing",
]


class ModuleError(ValueError):
    pass


class CertificateError(RuntimeError):
    """A certificate check failed; ``failure`` names the property and a witness."""

    def __init__(self, message: str, failure: dict | None = None):
        super().__init__(message)
        self.failure = failure or {}


def standard_form(n_pairs: int) -> RationalMatrix:
    """Block form with omega(e_{2k}, e_{2k+1}) = 1."""
    J = RationalMatrix.from_rows([[0, 1], [-1, 0]])
    return RationalMatrix.block_diag([J] * n_pairs) if n_pairs else RationalMatrix.zeros(0, 0)


@dataclass(frozen=True, eq=False)
class SymplecticGModule:
    group: FiniteGroup
    omega: RationalMatrix
    action: tuple[RationalMatrix, ...]

    def __post_init__(self):
        self.validate()

    @property
    def dim(self) -> int:
        return self.omega.rows

    def A(self, g: int) -> RationalMatrix:
        return self.action[g]

    def form(self, v: RationalMatrix, w: RationalMatrix) -> RationalMatrix:
        """Matrix of pairings between the rows of v and the rows of w."""
        return v @ self.omega @ w.T

    def validate(self) -> None:
        G, W, n = self.group, self.omega, self.omega.rows
        if W.rows != W.cols:
            raise ModuleError("form matrix must be square")
        if n % 2:
            raise ModuleError("symplectic dimension must be even")
        if not W.is_skew():
            raise ModuleError("form is not skew-symmetric")
        if n and not W.is_invertible():
            raise ModuleError("form is degenerate")
        if len(self.action) != G.order:
            raise ModuleError("need one action matrix per group element")
        for M in self.action:
            if M.shape != (n, n):
                raise ModuleError("action matrix has the wrong size")
        if self.action[G.identity] != RationalMatrix.identity(n):
            raise ModuleError("identity does not act trivially")
        # A_{g s} = A_g A_s for every g and generator s forces the full table
        for s in G.generator_indices:
            As = self.action[s]
            for g in G.elements():
                if self.action[G.mul[g][s]] != self.action[g] @ As:
                    raise ModuleError(f"action is not a homomorphism at ({g}, {s})")
        for g, M in enumerate(self.action):
            if M @ W @ M.T != W:
                raise ModuleError(f"element {g} does not preserve the form")

    def action_of(self, a: GroupAlgebraElement) -> RationalMatrix:
        return a.act(self.action)


@dataclass(frozen=True)
class LagrangianCertificate:
    lagrangian: Subspace
    checks: dict
    provenance: str
    module: SymplecticGModule | None = field(default=None, compare=False, repr=False)
    failure: dict | None = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        return self.lagrangian.dim

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _match(V: SymplecticGModule, S: Subspace) -> None:
    if S.ambient_dim != V.dim:
        raise ModuleError(f"subspace lives in Q^{S.ambient_dim}, module has dimension {V.dim}")


def perp(V: SymplecticGModule, S: Subspace) -> Subspace:
    _match(V, S)
    if S.dim == 0:
        return Subspace.full(V.dim)
    return kernel(S.basis @ V.omega.T)


def is_invariant(V: SymplecticGModule, S: Subspace) -> bool:
    _match(V, S)
    return all(S.contains(S.basis @ V.action[g]) for g in V.group.generator_indices)


def orbit_span(V: SymplecticGModule, vectors: RationalMatrix) -> Subspace:
    """Smallest invariant subspace containing the given rows."""
    S = Subspace.span(vectors, V.dim)
    while True:
        grown = S
        for g in V.group.generator_indices:
            grown = grown + S.image(V.action[g])
        if grown.dim == S.dim:
            return S
        S = grown


def classify_subspace(V: SymplecticGModule, S: Subspace) -> dict:
    P = perp(V, S)
    iso = P.contains_subspace(S)
    coiso = S.contains_subspace(P)
    return {
        "isotropic": iso,
        "coisotropic": coiso,
        "lagrangian": iso and coiso,
        "g_invariant": is_invariant(V, S),
    }


def check_lagrangian(V: SymplecticGModule, L: Subspace) -> tuple[dict, dict | None]:
    """Recompute dimension, isotropy and invariance from scratch.

    Returns the check flags and, on failure, a witness for the first violated
    property.
    """
    _match(V, L)
    checks = {"dimension": L.dim * 2 == V.dim, "isotropic": True, "invariant": True}
    failure = None
    if L.dim:
        gram = V.form(L.basis, L.basis)
        bad = next(
            ((i, j) for i in range(L.dim) for j in range(i + 1, L.dim) if gram[i, j] != 0),
            None,
        )
        if bad is not None:
            checks["isotropic"] = False
            i, j = bad
            failure = failure or {
                "property": "isotropic",
                "witness": [L.basis.row(i), L.basis.row(j)],
                "value": gram[i, j],
            }
        for g in V.group.elements():
            moved = L.basis @ V.action[g]
            resid = L.reduce(moved)
            if not resid.is_zero():
                checks["invariant"] = False
                k = next(i for i in range(resid.rows) if not resid.row(i).is_zero())
                failure = failure or {
                    "property": "invariant",
                    "witness": [L.basis.row(k), moved.row(k)],
                    "element": g,
                }
                break
    if not checks["dimension"] and failure is None:
        failure = {"property": "dimension", "expected": V.dim // 2, "actual": L.dim}
    return checks, failure


def certify(V: SymplecticGModule, L: Subspace, provenance: str) -> LagrangianCertificate:
    """Verify ``L`` and wrap it in a certificate, raising CertificateError on failure."""
    checks, failure = check_lagrangian(V, L)
    if failure is not None:
        raise CertificateError(f"{provenance}: {failure['property']} check failed", failure)
    return LagrangianCertificate(L, checks, provenance, V)


def coisotropic_reduction(V: SymplecticGModule, I: Subspace) -> tuple[SymplecticGModule, QuotientMap]:
    """The module ``I^perp / I`` with its descended form and action."""
    P = perp(V, I)
    if not P.contains_subspace(I):
        raise ModuleError("reduction needs I contained in its perpendicular")
    if not is_invariant(V, I):
        raise ModuleError("reduction needs a G-invariant subspace")
    q = QuotientMap(P, I)
    U = q.lift
    d = q.dim
    if d == 0:
        z = RationalMatrix.zeros(0, 0)
        return SymplecticGModule(V.group, z, tuple(z for _ in V.group.elements())), q
    omega = V.form(U, U)
    action = tuple(q(U @ M) for M in V.action)
    return SymplecticGModule(V.group, omega, action), q


def opposite(V: SymplecticGModule) -> SymplecticGModule:
    return SymplecticGModule(V.group, -V.omega, V.action)


def direct_sum(V: SymplecticGModule, W: SymplecticGModule) -> SymplecticGModule:
    if V.group is not W.group and V.group.mul != W.group.mul:
        raise ModuleError("direct sum of modules over different groups")
    return SymplecticGModule(
        V.group,
        RationalMatrix.block_diag([V.omega, W.omega]),
        tuple(RationalMatrix.block_diag([a, b]) for a, b in zip(V.action, W.action)),
    )


def hyperbolic(rep: RationalRep) -> SymplecticGModule:
    """``L + L^*`` with form [[0, I], [-I, 0]] and g acting by rho(g) on L, rho(g)^-T on L^*."""
    n = rep.dim
    I, Z = RationalMatrix.identity(n), RationalMatrix.zeros(n, n)
    omega = RationalMatrix.vstack([RationalMatrix.hstack([Z, I]), RationalMatrix.hstack([-I, Z])])
    action = tuple(RationalMatrix.block_diag([M, M.inverse().T]) for M in rep.matrices)
    return SymplecticGModule(rep.group, omega, action)


def karoubi_lagrangian(
    V: SymplecticGModule, I: Subspace, J: Subspace
) -> tuple[LagrangianCertificate, SymplecticGModule]:
    """Diagonal Lagrangian in ``I^perp/I + -(J^perp/J)``.

    Returns the certificate and the module it lives in.
    """
    for name, S in (("I", I), ("J", J)):
        c = classify_subspace(V, S)
        if not (c["isotropic"] and c["g_invariant"]):
            raise ModuleError(f"{name} must be G-invariant and contained in its perpendicular")
    W1, q1 = coisotropic_reduction(V, I)
    W2, q2 = coisotropic_reduction(V, J)
    target = direct_sum(W1, opposite(W2))
    common = perp(V, I) & perp(V, J)
    if common.dim:
        rows = RationalMatrix.hstack([q1(common.basis), q2(common.basis)])
        delta = Subspace.span(rows, target.dim)
    else:
        delta = Subspace.zero(target.dim)
    return certify(target, delta, "karoubi-diagonal"), target


def _transverse_lagrangian(V: SymplecticGModule, L: Subspace) -> RationalMatrix:
    # standard complement on L's non-pivot coordinates, corrected to be isotropic:
    # C' = C + (1/2) S P^-T L with S = C W C^T, P = C W L^T
    n = V.dim
    idx = L.complement_coordinates()
    C = RationalMatrix.identity(n).take_rows(idx)
    S = V.form(C, C)
    P = V.form(C, L.basis)
    X = S @ P.inverse().T * Fraction(1, 2)
    return C + X @ L.basis


def transverse_invariant_lagrangian(V: SymplecticGModule, L: Subspace) -> LagrangianCertificate:
    """A G-invariant Lagrangian meeting the invariant Lagrangian ``L`` only in 0.

    Each translate of a fixed transverse Lagrangian is the graph of a map into
    ``L``; the graph of the averaged map is invariant.
    """
    checks, failure = check_lagrangian(V, L)
    if failure is not None:
        raise ModuleError(f"L is not a G-invariant Lagrangian ({failure['property']})")
    k = L.dim
    if k == 0:
        M = Subspace.zero(V.dim)
        return LagrangianCertificate(M, {"dimension": True, "isotropic": True, "invariant": True, "transverse": True}, "orbit-average", V)
    M0 = _transverse_lagrangian(V, L)
    splitting = RationalMatrix.vstack([M0, L.basis])
    to_split = splitting.inverse()
    total = None
    for A in V.action:
        coords = (M0 @ A) @ to_split
        alpha = coords.submatrix(0, k, 0, k)
        beta = coords.submatrix(0, k, k, 2 * k)
        phi = alpha.inverse() @ beta
        total = phi if total is None else total + phi
    avg = total * Fraction(1, V.group.order)
    M = Subspace.span(M0 + avg @ L.basis, V.dim)
    cert = certify(V, M, "orbit-average")
    if (L & M).dim != 0:
        raise CertificateError("averaged Lagrangian is not transverse", {"property": "transverse"})
    return LagrangianCertificate(M, {**cert.checks, "transverse": True}, cert.provenance, V)


def right_cosets(G: FiniteGroup, embedding: Sequence[int]) -> list[int]:
    """Representatives of H\\G: the smallest element index of each coset, ascending."""
    H = set(embedding)
    seen: set[int] = set()
    reps = []
    for g in G.elements():
        if g in seen:
            continue
        reps.append(g)
        seen.update(G.mul[h][g] for h in H)
    return reps


def induction(V: SymplecticGModule, G: FiniteGroup, embedding: Sequence[int]) -> SymplecticGModule:
    """Induced module: one copy of V per right coset representative of H in G.

    With ``r g = h r'`` the block of ``r`` is sent to the block of ``r'`` by ``A_h``.
    """
    H = V.group
    emb = list(embedding)
    if len(emb) != H.order or len(set(emb)) != H.order:
        raise ModuleError("embedding is not injective")
    for a in H.elements():
        for b in H.elements():
            if emb[H.mul[a][b]] != G.mul[emb[a]][emb[b]]:
                raise ModuleError("embedding is not a homomorphism")
    reps = right_cosets(G, emb)
    # coset lookup: element -> (h, index of representative) with element = h r
    decomp = {}
    for i, r in enumerate(reps):
        for h in H.elements():
            decomp[G.mul[emb[h]][r]] = (h, i)
    n, k = V.dim, len(reps)
    omega = RationalMatrix.block_diag([V.omega] * k)
    action = []
    zero = RationalMatrix.zeros(n, n)
    for g in G.elements():
        grid = [[zero] * k for _ in range(k)]
        for i, r in enumerate(reps):
            h, j = decomp[G.mul[r][g]]
            grid[i][j] = V.action[h]
        action.append(RationalMatrix.vstack([RationalMatrix.hstack(row) for row in grid]))
    return SymplecticGModule(G, omega, tuple(action))


def group_ring_form(V: SymplecticGModule, x: RationalMatrix, y: RationalMatrix) -> GroupAlgebraElement:
    """``sum_g omega(x, y A_g) g`` as a group algebra element."""
    if x.cols != V.dim or y.cols != V.dim:
        raise ModuleError("vector length does not match module dimension")
    xw = x @ V.omega
    coeffs = tuple((xw @ (y @ A).T)[0, 0] for A in V.action)
    return GroupAlgebraElement(V.group, coeffs)


def trace_pairing(a: GroupAlgebraElement, b: GroupAlgebraElement) -> Fraction:
    """``<g, h> = 1`` if g == h else 0, extended bilinearly."""
    return sum((x * y for x, y in zip(a.coefficients, b.coefficients)), Fraction(0))
