import itertools
import random

import pytest
from support import cover_module

from glagrange.corpus import expected_traces, form_sanity, monodromy_from_words
from glagrange.cover import (
    CoverError,
    CoverSpec,
    build_cover,
    chevalley_weil_traces,
    random_monodromy,
    symplectic_module_of_cover,
    twisted_homology_dims,
)
from glagrange.exactla import RationalMatrix
from glagrange.groups import build_group, cyclic
from glagrange.repcat import catalog_reps, rep_from_generators


def spec(name, h, words):
    G = build_group(name)
    return CoverSpec(h, G, monodromy_from_words(G, words))


def regular_rep(G):
    mats = []
    for g in G.generator_indices:
        rows = [[1 if G.mul[a][g] == b else 0 for b in range(G.order)] for a in range(G.order)]
        mats.append(RationalMatrix.from_rows(rows))
    return rep_from_generators(G, mats, "regular")


def test_torus_counts():
    C = build_cover(spec("C1", 1, ["e", "e"]))
    assert (C.n_vertices, C.n_edges, C.n_triangles, C.euler_characteristic) == (1, 3, 2, 0)
    V = symplectic_module_of_cover(C)
    assert V.dim == 2
    assert V.omega in (RationalMatrix.from_rows([[0, 1], [-1, 0]]), RationalMatrix.from_rows([[0, -1], [1, 0]]))


def test_double_cover_of_torus():
    C = build_cover(spec("C2", 1, ["x", "e"]))
    assert (C.n_vertices, C.n_edges, C.n_triangles) == (2, 6, 4)
    assert C.euler_characteristic == 2 * 0
    V = symplectic_module_of_cover(C)
    assert V.dim == 2
    assert V.action[1] == RationalMatrix.identity(2)


def test_double_cover_of_genus_two():
    C = build_cover(spec("C2", 2, ["x", "e", "e", "e"]))
    # Euler multiplicativity oracle
    assert C.euler_characteristic == 2 * (2 - 2 * 2) == -4
    assert C.cover_genus == 3
    V = symplectic_module_of_cover(C)
    assert V.dim == 6 and V.action[1].trace() == 2


CASES = [
    ("C3", 2, ("x", "e", "x", "x^2")),
    ("D8", 2, ("x", "y", "y", "x")),
    ("Q8", 2, ("x", "y", "y", "x")),
    ("S3", 2, ("x", "y", "y", "x")),
    ("C2xC2", 1, ("x", "y")),
    ("C4", 1, ("x", "x^2")),
]


@pytest.mark.parametrize("name,h,words", CASES)
def test_cell_counts_and_complex(name, h, words):
    s = spec(name, h, words)
    C = build_cover(s)
    n = s.group.order
    assert (C.n_vertices, C.n_edges, C.n_triangles) == (n, n * (6 * h - 3), n * (4 * h - 2))
    assert C.euler_characteristic == n * (2 - 2 * h)
    assert (C.boundary_2() @ C.boundary_1()).is_zero()


@pytest.mark.parametrize("name,h,words", CASES)
def test_deck_action_and_form(name, h, words):
    V = cover_module(name, h, monodromy_from_words(build_group(name), words))
    G = V.group
    assert V.dim == 2 + (2 * h - 2) * G.order
    assert form_sanity(V)
    for a, b in itertools.product(G.elements(), repeat=2):
        assert V.action[a] @ V.action[b] == V.action[G.mul[a][b]]
    assert chevalley_weil_traces(V) == expected_traces(G, h)


def test_deck_permutations_are_a_left_action():
    C = build_cover(spec("S3", 2, ("x", "y", "y", "x")))
    G = C.spec.group
    for a, b in itertools.product(G.elements(), repeat=2):
        pa, pb, pab = C.deck_edge_perm(a), C.deck_edge_perm(b), C.deck_edge_perm(G.mul[a][b])
        assert [pa[pb[c]] for c in range(C.n_edges)] == pab


def test_relation_and_surjectivity_errors():
    G = build_group("D8")
    x, y = G.generator_indices
    with pytest.raises(CoverError):
        CoverSpec(1, G, (x, y))  # x and y do not commute
    with pytest.raises(CoverError):
        CoverSpec(2, G, (x, y))
    with pytest.raises(CoverError, match="subgroup"):
        build_cover(CoverSpec(1, G, (x, G.identity)))


def test_disconnected_cover_when_allowed():
    G = cyclic(4)
    C = build_cover(CoverSpec(2, G, (2, 0, 0, 0)), require_connected=False)
    V = symplectic_module_of_cover(C)
    # two copies of a genus-3 surface
    assert V.dim == 2 * 6
    assert form_sanity(V)


@pytest.mark.parametrize("name,h", [("C4", 1), ("D8", 2), ("D8", 3), ("Q8", 2)])
def test_fox_trivial_rep(name, h):
    G = build_group(name)
    s = CoverSpec(h, G, random_monodromy(G, h, random.Random(h)))
    triv = catalog_reps(G)[0]
    h0, h1, h2 = twisted_homology_dims(s, triv)
    assert (h0, h1, h2) == (1, 2 * h, 1)


@pytest.mark.parametrize("name,h,words", CASES)
def test_fox_regular_rep(name, h, words):
    s = spec(name, h, words)
    _, h1, _ = twisted_homology_dims(s, regular_rep(s.group))
    assert h1 == 2 + (2 * h - 2) * s.group.order


def test_fox_sign_rep_on_double_torus_cover():
    s = spec("C2", 1, ["x", "e"])
    sign = [r for r in catalog_reps(s.group) if r.matrices[1] == RationalMatrix.from_rows([[-1]])][0]
    assert twisted_homology_dims(s, sign) == (0, 0, 0)


def test_fox_rejects_foreign_rep():
    s = spec("C2", 1, ["x", "e"])
    with pytest.raises(CoverError):
        twisted_homology_dims(s, catalog_reps(cyclic(3))[1])


def test_random_monodromy_is_seeded_and_valid():
    G = build_group("SD16")
    a = random_monodromy(G, 3, random.Random(5))
    assert a == random_monodromy(G, 3, random.Random(5))
    s = CoverSpec(3, G, a)
    assert s.surjective
    # a torus cannot map onto a nonabelian group
    with pytest.raises(Exception, match="no surjective"):
        random_monodromy(build_group("D8"), 1, random.Random(0), max_tries=50)
