"""The built-in corpus of cover specs and the per-case checks run on it."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .cover import (
    CoverSpec,
    build_cover,
    chevalley_weil_traces,
    random_monodromy,
    symplectic_module_of_cover,
    twisted_homology_dims,
)
from .exactla import Subspace
from .groups import FiniteGroup, GroupWord, build_group, eval_word
from .lagfind import SearchConfig, find_invariant_lagrangian, isotypic_blocks, verify_certificate
from .sympmod import SymplecticGModule, transverse_invariant_lagrangian

# (group, base genus, monodromy words or None for a seeded random choice)
CORPUS_CASES: tuple[tuple[str, int, tuple[str, ...] | None], ...] = (
    ("C2", 1, ("x", "e")),
    ("C3", 1, ("x", "x")),
    ("C4", 1, ("x", "x^2")),
    ("C8", 1, ("x^3", "x^2")),
    ("C2xC2", 1, ("x", "y")),
    ("C2", 2, ("x", "e", "e", "e")),
    ("C3", 2, ("x", "e", "x", "x^2")),
    ("C4", 2, ("x", "x^2", "x^3", "e")),
    ("C8", 3, ("x", "e", "x^2", "x^5", "e", "x")),
    ("C2xC2", 2, ("x", "y", "xy", "e")),
    ("D8", 2, ("x", "y", "y", "x")),
    ("D16", 2, ("x", "y", "y", "x")),
    ("Q8", 2, ("x", "y", "y", "x")),
    ("SD16", 2, ("x", "y", "y", "x")),
    ("S3", 2, ("x", "y", "y", "x")),
    ("D8", 3, ("x", "e", "y", "e", "e", "x")),
    ("Q8", 3, ("x", "x", "y", "y", "xy", "e")),
    ("SD16", 3, None),
    ("D16", 3, None),
    ("S3", 3, None),
    ("C8", 2, None),
    ("Q8", 2, None),
    ("C4", 3, None),
    ("D8", 2, None),
    ("C2xC2", 3, None),
)


@dataclass(frozen=True)
class CorpusCase:
    index: int
    group: FiniteGroup
    base_genus: int
    monodromy: tuple[int, ...]
    random_seed: int | None

    @property
    def name(self) -> str:
        how = f"random seed {self.random_seed}" if self.random_seed is not None else "fixed"
        return f"{self.index:02d} {self.group.label()} h={self.base_genus} ({how})"

    def spec(self) -> CoverSpec:
        return CoverSpec(self.base_genus, self.group, self.monodromy)


def monodromy_from_words(G: FiniteGroup, words) -> tuple[int, ...]:
    return tuple(eval_word(G, GroupWord.parse(w, G.gen_names)) for w in words)


def corpus(seed: int = 0) -> list[CorpusCase]:
    """Corpus cases; the random ones draw from ``Random(seed + index)``."""
    cases = []
    for i, (gname, h, words) in enumerate(CORPUS_CASES):
        G = build_group(gname)
        if words is None:
            mono = random_monodromy(G, h, random.Random(seed + i))
            cases.append(CorpusCase(i, G, h, mono, seed + i))
        else:
            cases.append(CorpusCase(i, G, h, monodromy_from_words(G, words), None))
    return cases


def expected_traces(G: FiniteGroup, h: int) -> list[Fraction]:
    """Character of Q^2 + Q[G]^(2h-2)."""
    return [Fraction(2 + (2 * h - 2) * G.order if g == G.identity else 2) for g in G.elements()]


def form_sanity(V: SymplecticGModule) -> bool:
    W = V.omega
    if not (W.is_skew() and W.is_invertible()):
        return False
    return all(A @ W @ A.T == W for A in V.action)


def fox_cross_check(case_spec: CoverSpec, V: SymplecticGModule) -> list[dict]:
    """Per catalog rep: block dimension against twisted H_1 times dim/endo_dim."""
    decomposition = isotypic_blocks(V)
    rows = []
    for rep, (label, S) in zip(decomposition.reps, decomposition.blocks):
        _, h1, _ = twisted_homology_dims(case_spec, rep)
        expected = h1 * rep.multiplicity_ratio
        rows.append({"rep": label, "block_dim": S.dim, "twisted_h1": h1, "expected": expected, "ok": S.dim == expected})
    return rows


def run_case(case: CorpusCase, cfg: SearchConfig | None = None) -> dict:
    """All corpus checks for one case; verdicts are booleans, details are exact."""
    cfg = cfg or SearchConfig()
    spec = case.spec()
    C = build_cover(spec)
    V = symplectic_module_of_cover(C)
    traces = chevalley_weil_traces(V)
    cert = find_invariant_lagrangian(V, cfg=cfg)
    check = verify_certificate(V, cert.lagrangian)
    transverse = transverse_invariant_lagrangian(V, cert.lagrangian)
    fox = fox_cross_check(spec, V)
    verdicts = {
        "lagrangian_certified": check.passed,
        "chevalley_weil": traces == expected_traces(case.group, case.base_genus),
        "form_sanity": form_sanity(V),
        "transverse": transverse.passed and (transverse.lagrangian & cert.lagrangian) == Subspace.zero(V.dim),
        "fox": all(r["ok"] for r in fox),
    }
    return {
        "case": case.name,
        "cells": {"vertices": C.n_vertices, "edges": C.n_edges, "triangles": C.n_triangles},
        "euler_characteristic": C.euler_characteristic,
        "module_dim": V.dim,
        "traces": traces,
        "lagrangian": cert.lagrangian,
        "provenance": cert.provenance,
        "fox": fox,
        "verdicts": verdicts,
        "module": V,
    }
