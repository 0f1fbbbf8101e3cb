"""Finite groups as multiplication tables.

Element indices are canonical per constructor:

* ``cyclic(n)``: index ``k`` is ``x^k``.
* ``dihedral(N)``, ``semidihedral(N)``, ``quaternion(N)`` (``N`` the order,
  ``m = N // 2``): index ``i + m*j`` is ``x^i y^j``.
* ``product(G, H)``: index ``i*|H| + j`` is ``(g_i, h_j)``.
* groups generated by permutations or subsets: breadth-first closure order
  from the identity, generators taken in the given order.
"""

from __future__ import annotations

import random
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GroupError",
    "FiniteGroup",
    "GroupWord",
    "cyclic",
    "dihedral",
    "semidihedral",
    "quaternion",
    "product",
    "from_table",
    "from_permutations",
    "build_group",
    "eval_word",
    "subgroup_generated",
    "MAX_ORDER",
]

MAX_ORDER = 256


class GroupError(ValueError):
    pass


def _check_table(mul: np.ndarray) -> tuple[int, np.ndarray]:
    n = mul.shape[0]
    if mul.shape != (n, n):
        raise GroupError("multiplication table must be square")
    if n == 0:
        raise GroupError("empty group")
    if n > MAX_ORDER:
        raise GroupError(f"group order {n} exceeds the cap of {MAX_ORDER}")
    if mul.min() < 0 or mul.max() >= n:
        raise GroupError("table entries must be element indices")
    ar = np.arange(n)
    ids = [e for e in range(n) if (mul[e] == ar).all() and (mul[:, e] == ar).all()]
    if not ids:
        raise GroupError("no identity element")
    e = ids[0]
    inv = np.full(n, -1)
    for a in range(n):
        hits = np.nonzero(mul[a] == e)[0]
        if len(hits) != 1 or mul[hits[0], a] != e:
            raise GroupError(f"element {a} has no two-sided inverse")
        inv[a] = hits[0]
    for a in range(n):
        # (a*b)*c == a*(b*c) for all b, c
        if not (mul[mul[a]] == mul[a][mul]).all():
            raise GroupError("multiplication is not associative")
    return e, inv


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A validated finite group.

    ``family`` is a tag such as ``("cyclic", 4)``, ``("dihedral", 8)``,
    ``("product", ("cyclic", 2), ("cyclic", 2))`` or ``("custom",)``.
    """

    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]
    identity: int
    generator_indices: tuple[int, ...]
    family: tuple = ("custom",)
    gen_names: tuple[str, ...] = ()
    element_names: tuple[str, ...] = field(default=(), repr=False)

    @property
    def order(self) -> int:
        return len(self.mul)

    def __len__(self) -> int:
        return len(self.mul)

    def elements(self) -> range:
        return range(len(self.mul))

    def m(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def prod(self, elems: Iterable[int]) -> int:
        out = self.identity
        for g in elems:
            out = self.mul[out][g]
        return out

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv[a], -k
        out = self.identity
        for _ in range(k):
            out = self.mul[out][a]
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul[x][a]
            k += 1
        return k

    def commutator(self, a: int, b: int) -> int:
        return self.prod([a, b, self.inv[a], self.inv[b]])

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.mul[a][b] == self.mul[b][a] for a in range(n) for b in range(a))

    def name(self, a: int) -> str:
        return self.element_names[a] if self.element_names else str(a)

    def label(self) -> str:
        tag = self.family
        if tag[0] == "product":
            return "x".join(_tag_label(t) for t in tag[1:])
        return _tag_label(tag)

    def closure(self, gens: Iterable[int]) -> list[int]:
        """Elements generated by ``gens``, in breadth-first order from the identity."""
        gens = list(gens)
        seen = {self.identity}
        order = [self.identity]
        queue = deque(order)
        while queue:
            a = queue.popleft()
            for g in gens:
                b = self.mul[a][g]
                if b not in seen:
                    seen.add(b)
                    order.append(b)
                    queue.append(b)
        return order

    def generates(self, elems: Iterable[int]) -> bool:
        return len(self.closure(elems)) == self.order

    def random_element(self, rng: random.Random) -> int:
        return rng.randrange(self.order)

    def element_by_name(self, s: str) -> int:
        s = s.replace(" ", "")
        if s in self.element_names:
            return self.element_names.index(s)
        return eval_word(self, GroupWord.parse(s, self.gen_names))


def _tag_label(tag: tuple) -> str:
    short = {"cyclic": "C", "dihedral": "D", "semidihedral": "SD", "quaternion": "Q"}
    if tag[0] in short:
        return f"{short[tag[0]]}{tag[1]}"
    return tag[0]


def _make(mul, gens, family, gen_names=(), names=()) -> FiniteGroup:
    arr = np.asarray(mul, dtype=np.int64)
    e, inv = _check_table(arr)
    return FiniteGroup(
        mul=tuple(tuple(int(v) for v in row) for row in arr),
        inv=tuple(int(v) for v in inv),
        identity=int(e),
        generator_indices=tuple(gens),
        family=family,
        gen_names=tuple(gen_names),
        element_names=tuple(names),
    )


def _power_name(base: str, k: int) -> str:
    if k == 0:
        return ""
    return base if k == 1 else f"{base}^{k}"


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic(n) needs n >= 1")
    mul = [[(a + b) % n for b in range(n)] for a in range(n)]
    names = ["e"] + [_power_name("x", k) for k in range(1, n)]
    return _make(mul, [1 % n], ("cyclic", n), ("x",), names)


def _metacyclic(m: int, r: int, z: int, family: tuple) -> FiniteGroup:
    # x^i y^j <-> i + m*j ; y x y^-1 = x^r ; y^2 = x^z
    n = 2 * m
    mul = [[0] * n for _ in range(n)]
    for a in range(m):
        for b in range(2):
            for c in range(m):
                for d in range(2):
                    i = a + c * (r if b else 1) + (z if b and d else 0)
                    mul[a + m * b][c + m * d] = i % m + m * ((b + d) % 2)
    names = []
    for j in range(2):
        for i in range(m):
            s = _power_name("x", i) + _power_name("y", j)
            names.append(s or "e")
    return _make(mul, [1 % m, m], family, ("x", "y"), names)


def _log2(n: int) -> int | None:
    if n < 1 or n & (n - 1):
        return None
    return n.bit_length() - 1


def dihedral(order: int) -> FiniteGroup:
    """Dihedral group of the given order, ``<x, y | x^m = y^2 = 1, yxy^-1 = x^-1>``.

    Any even order >= 4 is accepted, so ``dihedral(6)`` is the symmetric group S3.
    """
    if order < 4 or order % 2:
        raise GroupError("dihedral(N) needs an even order N >= 4")
    m = order // 2
    return _metacyclic(m, m - 1, 0, ("dihedral", order))


def semidihedral(order: int) -> FiniteGroup:
    """``<x, y | x^m = y^2 = 1, yxy^-1 = x^(m/2 - 1)>`` with ``m = order/2``, order 2^n, n >= 4."""
    n = _log2(order)
    if n is None or n < 4:
        raise GroupError("semidihedral(N) needs N = 2^n with n >= 4")
    m = order // 2
    return _metacyclic(m, m // 2 - 1, 0, ("semidihedral", order))


def quaternion(order: int) -> FiniteGroup:
    """Generalized quaternion group, ``x^(m/2) = y^2 = (xy)^2`` with ``m = order/2``, order 2^n, n >= 3."""
    n = _log2(order)
    if n is None or n < 3:
        raise GroupError("quaternion(N) needs N = 2^n with n >= 3")
    m = order // 2
    return _metacyclic(m, m - 1, m // 2, ("quaternion", order))


def product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    nh = H.order
    n = G.order * nh
    mul = [[0] * n for _ in range(n)]
    for a in range(G.order):
        for b in range(nh):
            for c in range(G.order):
                for d in range(nh):
                    mul[a * nh + b][c * nh + d] = G.mul[a][c] * nh + H.mul[b][d]
    gens = [g * nh + H.identity for g in G.generator_indices]
    gens += [G.identity * nh + h for h in H.generator_indices]
    if len(G.generator_indices) == 1 and len(H.generator_indices) == 1:
        gen_names = ("x", "y")
    else:
        gen_names = tuple(f"{s}1" for s in G.gen_names) + tuple(f"{s}2" for s in H.gen_names)
    names = [f"({G.name(a)},{H.name(b)})" for a in range(G.order) for b in range(nh)]
    return _make(mul, gens, ("product", G.family, H.family), gen_names, names)


def from_table(table: Sequence[Sequence[int]], generators: Sequence[int] | None = None) -> FiniteGroup:
    arr = np.asarray(table, dtype=np.int64)
    if arr.ndim != 2:
        raise GroupError("multiplication table must be a square array")
    e, _ = _check_table(arr)
    n = len(arr)
    if generators is None:
        generators = [a for a in range(n) if a != e] or [e]
    gens = list(generators)
    names = ["e" if a == e else f"g{a}" for a in range(n)]
    grp = _make(arr, gens, ("custom",), tuple(f"g{k}" for k in range(len(gens))), names)
    if not grp.generates(gens):
        raise GroupError("listed generators do not generate the group")
    return grp


def from_permutations(perms: Sequence[Sequence[int]]) -> FiniteGroup:
    """Group generated by permutations of ``range(d)`` (composition: apply left factor first)."""
    if not perms:
        raise GroupError("need at least one permutation")
    d = len(perms[0])
    gens = []
    for p in perms:
        p = tuple(int(v) for v in p)
        if len(p) != d or sorted(p) != list(range(d)):
            raise GroupError(f"not a permutation of range({d}): {p}")
        gens.append(p)
    ident = tuple(range(d))
    elems = [ident]
    index = {ident: 0}
    queue = deque([ident])
    while queue:
        a = queue.popleft()
        for g in gens:
            b = tuple(g[a[i]] for i in range(d))  # a then g
            if b not in index:
                if len(elems) >= MAX_ORDER:
                    raise GroupError(f"generated group exceeds order {MAX_ORDER}")
                index[b] = len(elems)
                elems.append(b)
                queue.append(b)
    n = len(elems)
    mul = [[index[tuple(b[a[i]] for i in range(d))] for b in elems] for a in elems]
    gen_idx = [index[g] for g in gens]
    names = ["e"] + [f"p{k}" for k in range(1, n)]
    return _make(mul, gen_idx, ("custom",), tuple(f"g{k}" for k in range(len(gens))), names)


_FAMILIES = {
    "cyclic": cyclic,
    "dihedral": dihedral,
    "semidihedral": semidihedral,
    "quaternion": quaternion,
}


def build_group(spec) -> FiniteGroup:
    """Build a group from a family spec, explicit table or permutation generators.

    Accepted forms: ``{"family": "dihedral", "order": 8}``,
    ``{"family": "product", "factors": [{...}, {...}]}``,
    ``{"table": [[...], ...]}``, ``{"permutations": [[...], ...]}`` or the
    short string form ``"D8"``, ``"C2xC2"``, ``"SD16"``, ``"Q8"``, ``"S3"``.
    """
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, str):
        return _parse_group_name(spec)
    if not isinstance(spec, dict):
        raise GroupError(f"unrecognised group spec {spec!r}")
    if "table" in spec:
        return from_table(spec["table"], spec.get("generators"))
    if "permutations" in spec:
        return from_permutations(spec["permutations"])
    fam = spec.get("family")
    if fam == "product":
        factors = spec.get("factors") or []
        if len(factors) != 2:
            raise GroupError("product needs exactly two factors")
        return product(build_group(factors[0]), build_group(factors[1]))
    if fam == "symmetric" and spec.get("degree", spec.get("n")) == 3:
        return dihedral(6)
    if fam not in _FAMILIES:
        raise GroupError(f"unknown group family {fam!r}")
    param = spec.get("order", spec.get("n"))
    if not isinstance(param, int):
        raise GroupError(f"family {fam} needs an integer 'order'")
    return _FAMILIES[fam](param)


def _parse_group_name(s: str) -> FiniteGroup:
    s = s.replace(" ", "")
    if "x" in s or "×" in s:
        parts = re.split(r"[x×]", s)
        if len(parts) != 2:
            raise GroupError("only products of two factors are supported")
        return product(_parse_group_name(parts[0]), _parse_group_name(parts[1]))
    if s == "S3":
        return dihedral(6)
    m = re.fullmatch(r"(C|D|SD|Q)(\d+)", s)
    if not m:
        raise GroupError(f"unrecognised group name {s!r}")
    fam = {"C": cyclic, "D": dihedral, "SD": semidihedral, "Q": quaternion}[m.group(1)]
    return fam(int(m.group(2)))


@dataclass(frozen=True)
class GroupWord:
    """A word in generator symbols: a tuple of ``(generator, exponent)`` letters."""

    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for g, k in self.letters:
            if k == 0:
                raise GroupError("word exponents must be nonzero")

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((g, -k) for g, k in reversed(self.letters)))

    @classmethod
    def parse(cls, s: str, gen_names: Sequence[str]) -> "GroupWord":
        """Parse ``"x^2 y^-1 x"`` (spaces or ``*`` optional) against generator names."""
        s = s.replace(" ", "").replace("*", "")
        if s in ("", "e", "1"):
            return cls()
        names = sorted(gen_names, key=len, reverse=True)
        letters = []
        pos = 0
        while pos < len(s):
            for nm in names:
                if s.startswith(nm, pos):
                    pos += len(nm)
                    break
            else:
                raise GroupError(f"cannot parse word {s!r} at position {pos}")
            m = re.match(r"\^\(?(-?\d+)\)?", s[pos:])
            k = 1
            if m:
                k = int(m.group(1))
                pos += m.end()
            if k:
                letters.append((list(gen_names).index(nm), k))
        return cls(tuple(letters))


def eval_word(G: FiniteGroup, w: GroupWord, assignment: dict[int, int] | Sequence[int] | None = None) -> int:
    """Evaluate ``w`` left to right, generator ``i`` sent to ``assignment[i]``.

    Without an assignment the group's own generators are used.
    """
    if assignment is None:
        assignment = G.generator_indices
    out = G.identity
    for gen, k in w.letters:
        try:
            a = assignment[gen]
        except (KeyError, IndexError):
            raise GroupError(f"generator {gen} is not assigned") from None
        out = G.mul[out][G.power(a, k)]
    return out


def subgroup_generated(G: FiniteGroup, gens: Iterable[int]) -> tuple[FiniteGroup, tuple[int, ...]]:
    """Subgroup generated by ``gens`` and its embedding (subgroup index -> G index).

    A subgroup generated by one element comes back as a tagged cyclic group with
    ``x`` the generator; otherwise elements are in breadth-first order.
    """
    gens = [g for g in gens]
    if not gens:
        raise GroupError("need at least one generator")
    if len(gens) == 1:
        a = gens[0]
        k = G.element_order(a)
        emb = tuple(G.power(a, i) for i in range(k))
        return cyclic(k), emb
    elems = G.closure(gens)
    pos = {g: i for i, g in enumerate(elems)}
    mul = [[pos[G.mul[a][b]] for b in elems] for a in elems]
    names = [G.name(a) for a in elems]
    H = _make(mul, [pos[g] for g in gens], ("custom",), tuple(f"g{k}" for k in range(len(gens))), names)
    return H, tuple(elems)
