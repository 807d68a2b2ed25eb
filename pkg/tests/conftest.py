import functools

import numpy as np
import pytest

from fusionsharp import catalog, corpus
from fusionsharp.fusion import FusionSystem


@functools.lru_cache(maxsize=None)
def group(name, p):
    return catalog.catalog(name, p)


@functools.lru_cache(maxsize=None)
def small_corpus():
    return corpus.corpus(4)


@functools.lru_cache(maxsize=None)
def sylow_g2_inner():
    S = group("sylow_g2", 5)
    return FusionSystem.inner(S)


@pytest.fixture
def es3():
    return group("extraspecial_plus", 3)


@pytest.fixture
def wr3():
    return group("wreath_cp_cp", 3)


@pytest.fixture
def ab9():
    return group("elementary_abelian(2)", 3)


@pytest.fixture
def g2_5():
    return group("sylow_g2", 5)


def systems_for(name):
    for label, S, systems in small_corpus():
        if label == name:
            return S, systems
    raise KeyError(name)


# -- brute-force oracles, independent of the pc machinery ---------------------------------------


def mul_table(S):
    """Full multiplication table of S (element ints)."""
    a = S.all
    return S.mul(a[:, None], a[None, :])


def closure(table, gens):
    """Subgroup generated by ``gens`` (frozenset), by naive product closure."""
    H = {0}
    frontier = [0]
    gens = list(gens)
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = int(table[x, g])
                if y not in H:
                    H.add(y)
                    new.append(y)
        frontier = new
    return frozenset(H)


def all_subgroups_brute(table):
    n = table.shape[0]
    found = {frozenset([0])}
    frontier = [frozenset([0])]
    while frontier:
        new = []
        for H in frontier:
            for g in range(n):
                if g not in H:
                    K = closure(table, list(H) + [g])
                    if K not in found:
                        found.add(K)
                        new.append(K)
        frontier = new
    return found


def unitriangular_model(p):
    """Upper unitriangular 3x3 matrices over F_p for the generators of extraspecial_plus(p)."""
    I = np.eye(3, dtype=np.int64)
    g1 = I.copy(); g1[0, 1] = 1
    g2 = I.copy(); g2[1, 2] = 1

    def inv(m):
        return np.round(np.linalg.inv(m)).astype(np.int64) % p

    c = inv(g2) @ inv(g1) @ g2 @ g1 % p      # [g2, g1] = g3^(p-1)
    g3 = inv(c)

    def image(exps):
        m = I.copy()
        for g, e in zip((g1, g2, g3), exps):
            m = m @ np.linalg.matrix_power(g, int(e)) % p
        return m

    return image
