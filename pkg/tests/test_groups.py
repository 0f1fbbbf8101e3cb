import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glagrange.groups import (
    GroupError,
    GroupWord,
    build_group,
    cyclic,
    dihedral,
    eval_word,
    from_permutations,
    from_table,
    quaternion,
    semidihedral,
    subgroup_generated,
)

ALL_GROUPS = ["C1", "C2", "C3", "C4", "C8", "C2xC2", "C2xC4", "D8", "D16", "Q8", "Q16", "SD16", "S3"]


def word(G, s):
    return eval_word(G, GroupWord.parse(s, G.gen_names))


@pytest.mark.parametrize("name", ALL_GROUPS)
def test_group_axioms_exhaustive(name):
    G = build_group(name)
    n = G.order
    for a, b, c in itertools.product(range(n), repeat=3):
        assert G.mul[G.mul[a][b]][c] == G.mul[a][G.mul[b][c]]
    for a in range(n):
        assert G.mul[a][G.identity] == a == G.mul[G.identity][a]
        assert G.mul[a][G.inv[a]] == G.identity
    assert G.generates(G.generator_indices)


def test_cyclic4():
    G = cyclic(4)
    assert G.order == 4
    assert word(G, "x^4") == G.identity and word(G, "x^2") != G.identity


@pytest.mark.parametrize("order", [4, 8, 16, 32, 6, 12])
def test_dihedral_relations(order):
    G = dihedral(order)
    m = order // 2
    assert G.order == order
    assert word(G, f"x^{m}") == G.identity and word(G, "y^2") == G.identity
    assert word(G, "y x y^-1") == word(G, "x^-1")


@pytest.mark.parametrize("order", [16, 32])
def test_semidihedral_relations(order):
    G = semidihedral(order)
    m = order // 2
    assert word(G, f"x^{m}") == G.identity and word(G, "y^2") == G.identity
    assert word(G, "y x y^-1") == word(G, f"x^{m // 2 - 1}")


@pytest.mark.parametrize("order", [8, 16, 32])
def test_quaternion_relations(order):
    G = quaternion(order)
    m = order // 2
    assert word(G, f"x^{m // 2}") == word(G, "y^2") == word(G, "x y x y")
    assert word(G, "y x y^-1") == word(G, "x^-1")
    assert word(G, f"x^{m}") == G.identity
    # exactly one involution
    assert sum(1 for g in G.elements() if G.element_order(g) == 2) == 1


@pytest.mark.parametrize("bad", [lambda: semidihedral(8), lambda: quaternion(4), lambda: dihedral(7), lambda: cyclic(0), lambda: cyclic(300)])
def test_out_of_range_parameters(bad):
    with pytest.raises(GroupError):
        bad()


def test_table_axioms_are_enforced():
    with pytest.raises(GroupError):
        from_table([[0, 1], [1, 1]])
    # a latin square that is not associative
    bad = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(GroupError):
        from_table(bad)


def test_permutation_input_matches_s3():
    G = from_permutations([[1, 0, 2], [1, 2, 0]])
    assert G.order == 6 and not G.is_abelian()


def test_eval_word_examples():
    C4, D8 = cyclic(4), dihedral(8)
    assert eval_word(C4, GroupWord()) == C4.identity
    assert word(C4, "x^3 x") == C4.identity
    assert word(D8, "y x y^-1 x") == D8.identity
    with pytest.raises(GroupError):
        eval_word(D8, GroupWord.parse("x y", D8.gen_names), {0: 1})


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_eval_word_is_multiplicative(data):
    G = build_group(data.draw(st.sampled_from(["D8", "Q8", "SD16", "S3", "C2xC4"])))
    letter = st.tuples(st.integers(0, len(G.gen_names) - 1), st.integers(-5, 5).filter(bool))
    w1 = GroupWord(tuple(data.draw(st.lists(letter, max_size=6))))
    w2 = GroupWord(tuple(data.draw(st.lists(letter, max_size=6))))
    assign = [data.draw(st.integers(0, G.order - 1)) for _ in G.gen_names]
    assert eval_word(G, w1 * w2, assign) == G.mul[eval_word(G, w1, assign)][eval_word(G, w2, assign)]
    assert eval_word(G, w1.inverse(), assign) == G.inv[eval_word(G, w1, assign)]


def test_subgroup_examples():
    C8, D8 = cyclic(8), dihedral(8)
    H, emb = subgroup_generated(C8, [C8.identity])
    assert H.order == 1
    H, emb = subgroup_generated(C8, [word(C8, "x^2")])
    assert H.order == 4 and H.family[0] == "cyclic"
    H, emb = subgroup_generated(D8, [word(D8, "x")])
    assert H.order == 4 and D8.order // H.order == 2


@pytest.mark.parametrize("name", ["D8", "Q8", "SD16", "D16", "S3", "C2xC2"])
def test_subgroups_lagrange_and_embedding(name):
    G = build_group(name)
    for a, b in itertools.combinations(G.elements(), 2):
        H, emb = subgroup_generated(G, [a, b])
        assert G.order % H.order == 0
        assert len(set(emb)) == H.order
        for x in H.elements():
            for y in H.elements():
                assert emb[H.mul[x][y]] == G.mul[emb[x]][emb[y]]
