"""Search for G-invariant Lagrangians.

The module is split into isotypic blocks (images of the central idempotents),
each block is handled on its own, and the block Lagrangians are summed.  Per
block the strategies are tried in the configured order:

``field_symplectic``
    every group element acts as +1 or -1, so any Lagrangian is invariant and a
    symplectic-basis halving finds one.
``orbit_reduce``
    scan small integer vectors; when the orbit span W of v is isotropic, pass to
    the reduction W^perp / W and recurse, then pull the answer back.  Greedy:
    the first isotropic orbit at each level is kept.
``enumerate``
    the same scan with backtracking over the choice made at each level.

All three share one iteration budget per block.  Exhaustion raises
:class:`SearchExhausted`; nothing here ever claims that no Lagrangian exists.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .exactla import RationalMatrix, Subspace
from .repcat import RationalRep, RepError, catalog_reps, central_idempotents
from .sympmod import (
    CertificateError,
    LagrangianCertificate,
    ModuleError,
    SymplecticGModule,
    certify,
    check_lagrangian,
    coisotropic_reduction,
    direct_sum,
    is_invariant,
    opposite,
    orbit_span,
    perp,
)

__all__ = [
    "STRATEGIES",
    "SearchConfig",
    "SearchExhausted",
    "BlockDecomposition",
    "WittResult",
    "isotypic_blocks",
    "restrict_module",
    "candidate_vectors",
    "find_invariant_lagrangian",
    "verify_certificate",
    "witt_equivalent",
]

STRATEGIES = ("field_symplectic", "orbit_reduce", "enumerate")


class SearchExhausted(RuntimeError):
    """The search budget ran out.  ``report`` says where and how much was spent."""

    def __init__(self, message: str, report: dict):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    height_bound: int = 4
    max_iterations: int = 10**5
    strategies: tuple[str, ...] = STRATEGIES

    def __post_init__(self):
        if self.height_bound < 1 or self.max_iterations < 1:
            raise ValueError("height_bound and max_iterations must be positive")
        strategies = tuple(self.strategies)
        if not strategies:
            raise ValueError("at least one strategy is required")
        unknown = [s for s in strategies if s not in STRATEGIES]
        if unknown:
            raise ValueError(f"unknown strategies {unknown}; choose from {STRATEGIES}")
        if len(set(strategies)) != len(strategies):
            raise ValueError("strategies must not repeat")
        object.__setattr__(self, "strategies", strategies)


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple[tuple[str, Subspace], ...]
    certified_orthogonal: bool
    reps: tuple[RationalRep, ...] = field(default=(), compare=False, repr=False)

    def dims(self) -> dict[str, int]:
        return {label: S.dim for label, S in self.blocks}


# -- isotypic splitting ----------------------------------------------------


def isotypic_blocks(V: SymplecticGModule, reps: Sequence[RationalRep] | None = None) -> BlockDecomposition:
    """Split ``V`` by the central idempotents of the catalog and verify the split."""
    G = V.group
    reps = list(reps) if reps is not None else catalog_reps(G)
    idems = central_idempotents(G, reps)
    blocks = []
    for r, e in zip(reps, idems):
        S = Subspace.span(V.action_of(e), V.dim) if V.dim else Subspace.zero(0)
        if not is_invariant(V, S):
            raise ModuleError(f"block {r.label} is not G-invariant")
        blocks.append((r.label, S))
    if sum(S.dim for _, S in blocks) != V.dim:
        raise ModuleError(f"block dimensions {[S.dim for _, S in blocks]} do not add up to {V.dim}")
    total = Subspace.zero(V.dim)
    for _, S in blocks:
        total = total + S
    if total.dim != V.dim:
        raise ModuleError("blocks do not span the module")
    for (a, S), (b, T) in itertools.combinations(blocks, 2):
        if S.dim and T.dim:
            pairing = V.form(S.basis, T.basis)
            if not pairing.is_zero():
                i, j = next((i, j) for i in range(S.dim) for j in range(T.dim) if pairing[i, j] != 0)
                raise ModuleError(
                    f"blocks {a} and {b} are not orthogonal: "
                    f"omega(row {i}, row {j}) = {pairing[i, j]}"
                )
    return BlockDecomposition(tuple(blocks), True, tuple(reps))


def restrict_module(V: SymplecticGModule, S: Subspace) -> SymplecticGModule:
    """The invariant nondegenerate subspace ``S`` as a module in its own coordinates."""
    if S.dim == 0:
        z = RationalMatrix.zeros(0, 0)
        return SymplecticGModule(V.group, z, tuple(z for _ in V.group.elements()))
    omega = V.form(S.basis, S.basis)
    action = tuple(S.coordinates(S.basis @ A) for A in V.action)
    return SymplecticGModule(V.group, omega, action)


# -- candidate enumeration -------------------------------------------------


def candidate_vectors(n: int, height_bound: int, seed: int = 0) -> Iterator[tuple[int, ...]]:
    """Nonzero integer vectors of Q^n up to sign, smallest height first.

    Within one height, vectors with fewer nonzero entries come first and ties
    are broken lexicographically over a seeded permutation of the coordinates.
    The first nonzero entry is positive, since v and -v span the same line.
    """
    order = list(range(n))
    random.Random(seed).shuffle(order)
    for h in range(1, height_bound + 1):
        values = [x for x in range(-h, h + 1) if x]
        for k in range(1, n + 1):
            for support in itertools.combinations(order, k):
                for vals in itertools.product(values, repeat=k):
                    if vals[0] < 0 or max(abs(x) for x in vals) != h:
                        continue
                    v = [0] * n
                    for pos, x in zip(support, vals):
                        v[pos] = x
                    yield tuple(v)


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self) -> bool:
        self.used += 1
        return self.used <= self.limit


def _integer_stack(mats: Sequence[RationalMatrix]) -> np.ndarray:
    """Integer arrays proportional to the given matrices (exact; object dtype if large)."""
    rows = [list(M.numerators) for M in mats]
    big = max((abs(x) for M in rows for r in M for x in r), default=0)
    dtype = np.int64 if big < 2**24 else object
    return np.array(rows, dtype=dtype)


class _OrbitTest:
    """Fast necessary-and-sufficient test that the orbit span of v is isotropic.

    omega(v A_g, v A_h) = omega(v, v A_h A_g^-1), so the span is isotropic iff
    v Omega A_g^T v^T = 0 for every g.
    """

    def __init__(self, B: SymplecticGModule):
        mats = [B.omega @ A.T for A in B.action if A != RationalMatrix.identity(B.dim)]
        self.forms = _integer_stack(mats) if mats else None

    def __call__(self, v: tuple[int, ...]) -> bool:
        if self.forms is None:
            return True
        x = np.array(v, dtype=self.forms.dtype)
        return not np.any(self.forms @ x @ x)


# -- per-block strategies --------------------------------------------------


def _is_scalar_action(B: SymplecticGModule) -> bool:
    n = B.dim
    plus, minus = RationalMatrix.identity(n), -RationalMatrix.identity(n)
    return all(A == plus or A == minus for A in B.action)


def _symplectic_halving(B: SymplecticGModule) -> Subspace:
    """A Lagrangian of the bare symplectic space via Gram-Schmidt on basis vectors."""
    n = B.dim
    remaining = [RationalMatrix.identity(n).row(i) for i in range(n)]
    chosen = []
    while remaining:
        v = remaining.pop(0)
        pairings = [B.form(v, w)[0, 0] for w in remaining]
        k = next((i for i, c in enumerate(pairings) if c != 0), None)
        if k is None:
            # v pairs trivially with everything left, so it is already in the span of pairs taken
            continue
        w = remaining.pop(k) * (1 / pairings[k])
        chosen.append(v)
        # project the rest off span(v, w): u -> u - omega(u, w) v + omega(u, v) w
        projected = []
        for u in remaining:
            u = u - v * B.form(u, w)[0, 0] + w * B.form(u, v)[0, 0]
            if not u.is_zero():
                projected.append(u)
        remaining = projected
    return Subspace.span(RationalMatrix.vstack(chosen), n) if chosen else Subspace.zero(n)


def _orbit_search(B: SymplecticGModule, cfg: SearchConfig, budget: _Budget, backtrack: bool, depth: int = 0):
    """Lagrangian of B (in B's coordinates) or None when the budget or the scan runs out."""
    n = B.dim
    if n == 0:
        return Subspace.zero(0)
    test = _OrbitTest(B)
    seen: set[Subspace] = set()
    for v in candidate_vectors(n, cfg.height_bound, cfg.seed + depth):
        if not budget.tick():
            return None
        if not test(v):
            continue
        W = orbit_span(B, RationalMatrix.from_rows([v]))
        if W in seen:
            continue
        seen.add(W)
        if not perp(B, W).contains_subspace(W):
            raise CertificateError("fast isotropy test disagrees with exact check", {"vector": v})
        if 2 * W.dim == n:
            return W
        reduced, q = coisotropic_reduction(B, W)
        sub = _orbit_search(reduced, cfg, budget, backtrack, depth + 1)
        if sub is None:
            if backtrack and budget.used <= budget.limit:
                continue
            return None
        L = W + Subspace.span(sub.basis @ q.lift, n) if sub.dim else W
        checks, failure = check_lagrangian(B, L)
        if failure is not None:
            raise CertificateError("pulled-back Lagrangian failed verification", failure)
        return L
    return None


def _solve_block(B: SymplecticGModule, cfg: SearchConfig) -> tuple[Subspace, str, int]:
    spent = 0
    for strategy in cfg.strategies:
        budget = _Budget(cfg.max_iterations)
        if strategy == "field_symplectic":
            if _is_scalar_action(B):
                return _symplectic_halving(B), strategy, spent
            continue
        L = _orbit_search(B, cfg, budget, backtrack=(strategy == "enumerate"))
        spent += min(budget.used, budget.limit)
        if L is not None:
            return L, strategy, spent
    raise SearchExhausted(
        "no invariant Lagrangian found within the search budget",
        {"block_dim": B.dim, "iterations": spent, "strategies": list(cfg.strategies)},
    )


# -- public entry points ---------------------------------------------------


def _split(V: SymplecticGModule, reps):
    try:
        return isotypic_blocks(V, reps)
    except RepError:
        if reps is not None:
            raise
        # no catalog for this group: search on the whole module
        return BlockDecomposition((("whole", Subspace.full(V.dim)),), True)


def find_invariant_lagrangian(
    V: SymplecticGModule,
    reps: Sequence[RationalRep] | None = None,
    cfg: SearchConfig | None = None,
) -> LagrangianCertificate:
    """Verified G-invariant Lagrangian of ``V``, or :class:`SearchExhausted`."""
    cfg = cfg or SearchConfig()
    if V.dim == 0:
        return certify(V, Subspace.zero(0), "empty")
    decomposition = _split(V, reps)
    pieces = []
    notes = []
    for label, S in decomposition.blocks:
        if S.dim == 0:
            continue
        B = restrict_module(V, S)
        try:
            L, strategy, _ = _solve_block(B, cfg)
        except SearchExhausted as exc:
            exc.report.update({"block": label, "module_dim": V.dim, "seed": cfg.seed, "height_bound": cfg.height_bound})
            raise SearchExhausted(f"block {label}: {exc}", exc.report) from None
        if L.dim:
            pieces.append(L.basis @ S.basis)
        notes.append(f"{label}:{strategy}")
    L = Subspace.span(RationalMatrix.vstack(pieces), V.dim)
    return certify(V, L, "; ".join(notes))


def verify_certificate(V: SymplecticGModule, L: Subspace) -> LagrangianCertificate:
    """Recheck dimension, isotropy and invariance from scratch.

    Never raises on a failed check: the returned certificate has ``passed``
    False and ``failure`` naming the property and a witness.
    """
    if L.ambient_dim != V.dim:
        raise ModuleError(f"subspace lives in Q^{L.ambient_dim}, module has dimension {V.dim}")
    checks, failure = check_lagrangian(V, L)
    return LagrangianCertificate(L, checks, "verify", V, failure)


@dataclass(frozen=True)
class WittResult:
    equivalent: bool
    certificate: LagrangianCertificate | None = None
    report: dict | None = None
    module: SymplecticGModule | None = field(default=None, repr=False)


def _same_module(V: SymplecticGModule, W: SymplecticGModule) -> bool:
    return V.omega == W.omega and V.action == W.action


def witt_equivalent(
    V: SymplecticGModule,
    W: SymplecticGModule,
    cfg: SearchConfig | None = None,
    reps: Sequence[RationalRep] | None = None,
) -> WittResult:
    """Semi-decision: look for an invariant Lagrangian of V + (-W).

    A negative answer only means the search was exhausted.
    """
    if V.group.mul != W.group.mul:
        raise ModuleError("Witt comparison needs modules over the same group")
    cfg = cfg or SearchConfig()
    M = direct_sum(V, opposite(W))
    if _same_module(V, W):
        diag = RationalMatrix.hstack([RationalMatrix.identity(V.dim)] * 2) if V.dim else RationalMatrix.zeros(0, 0)
        L = Subspace.span(diag, M.dim) if V.dim else Subspace.zero(0)
        return WittResult(True, certify(M, L, "diagonal"), None, M)
    try:
        return WittResult(True, find_invariant_lagrangian(M, reps, cfg), None, M)
    except SearchExhausted as exc:
        return WittResult(False, None, {"reason": "exhausted", **exc.report}, M)
