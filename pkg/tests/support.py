"""Shared builders for the test suites."""

import random
from functools import lru_cache

from glagrange.cover import CoverSpec, build_cover, symplectic_module_of_cover
from glagrange.exactla import RationalMatrix, Subspace
from glagrange.groups import build_group
from glagrange.repcat import catalog_reps
from glagrange.sympmod import SymplecticGModule, classify_subspace, direct_sum, hyperbolic, orbit_span, perp


def standard_module(n_pairs, group=None):
    from glagrange.groups import cyclic
    from glagrange.sympmod import standard_form

    G = group or cyclic(1)
    n = 2 * n_pairs
    return SymplecticGModule(G, standard_form(n_pairs), tuple(RationalMatrix.identity(n) for _ in G.elements()))


def change_basis(V, P):
    """The same module written in the basis given by the rows of P^-1 (Omega -> P Omega P^T)."""
    Pinv = P.inverse()
    return SymplecticGModule(V.group, P @ V.omega @ P.T, tuple(P @ A @ Pinv for A in V.action))


def random_invertible(n, rng):
    while True:
        rows = [[rng.choice([0, 0, 1, -1, 2]) if i != j else rng.choice([1, 1, -1, 2]) for j in range(n)] for i in range(n)]
        P = RationalMatrix.from_rows(rows, n)
        if P.is_invertible():
            return P


def random_metabolic(rng):
    """Hyperbolic module over one or two random catalog reps, in a scrambled basis.

    Returns the module and the images of its two standard invariant Lagrangians.
    """
    G = build_group(rng.choice(["C1", "C2", "C3", "C4", "C2xC2", "D8", "Q8", "S3"]))
    reps = catalog_reps(G)
    chosen = [rng.choice(reps) for _ in range(rng.choice([1, 2]))]
    V = hyperbolic(chosen[0])
    for r in chosen[1:]:
        V = direct_sum(V, hyperbolic(r))
    # coordinates of the L and L* halves in the block sum
    offs, lrows, drows = 0, [], []
    n = V.dim
    for r in chosen:
        d = r.dim
        for i in range(d):
            lrows.append([1 if j == offs + i else 0 for j in range(n)])
            drows.append([1 if j == offs + d + i else 0 for j in range(n)])
        offs += 2 * d
    P = random_invertible(n, rng)
    W = change_basis(V, P)
    Pinv = P.inverse()
    L = RationalMatrix.from_rows(lrows, n) @ Pinv
    D = RationalMatrix.from_rows(drows, n) @ Pinv
    return W, L, D


def grow_isotropic(V, sources, rng, steps):
    """Grow an invariant isotropic subspace by orbit closures of sampled vectors."""
    I = Subspace.zero(V.dim)
    for _ in range(steps):
        src = rng.choice(sources)
        coeffs = RationalMatrix.from_rows([[rng.choice([0, 1, -1, 2]) for _ in range(src.rows)]], src.rows)
        v = coeffs @ src
        if v.is_zero():
            continue
        cand = orbit_span(V, RationalMatrix.vstack([I.basis, v]) if I.dim else v)
        if classify_subspace(V, cand)["isotropic"]:
            I = cand
    assert perp(V, I).contains_subspace(I)
    return I


def coisotropic_pair_instance(seed):
    rng = random.Random(seed)
    V, L, D = random_metabolic(rng)
    full = RationalMatrix.identity(V.dim)
    I = grow_isotropic(V, [L, D, full], rng, rng.randint(0, 3))
    J = grow_isotropic(V, [L, D, full], rng, rng.randint(0, 3))
    return V, I, J


@lru_cache(maxsize=None)
def cover_module(group_name, h, monodromy, connected=True):
    G = build_group(group_name)
    return symplectic_module_of_cover(build_cover(CoverSpec(h, G, tuple(monodromy)), require_connected=connected))


# criterion number -> "criterion N: PASS/FAIL ..." line, filled by the acceptance suite
ACCEPTANCE_LINES: dict[int, str] = {}


def report_criterion(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES[n] = line
    print(line)
    return ok
