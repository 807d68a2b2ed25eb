"""Ambient groups for the small test corpus and helpers to derive generator data.

Every ambient is a permutation group together with permutation images of the
pc generators of the catalog group it contains as a Sylow subgroup.
"""

from __future__ import annotations

import itertools

import numpy as np

from .catalog import catalog
from .errors import InputError
from .fusion import FusionSystem
from .perm import AmbientOracle, holomorph_like
from .pgroup import PcGroup


def _cycle_perm(n, *cycles):
    g = list(range(n))
    for c in cycles:
        for i, a in enumerate(c):
            g[a] = c[(i + 1) % len(c)]
    return g


def sym3_x_sym3(S: PcGroup) -> AmbientOracle:
    """C_3 x C_3 inside Sym(3) x Sym(3) acting on 6 points."""
    if S.p != 3 or S.n != 2 or S.commutators:
        raise InputError("sym3_x_sym3 needs S = C_3 x C_3")
    return AmbientOracle(S, [_cycle_perm(6, (0, 1)), _cycle_perm(6, (3, 4))],
                         [_cycle_perm(6, (0, 1, 2)), _cycle_perm(6, (3, 4, 5))])


def _projective_points(p, dim=3):
    pts = []
    for v in itertools.product(range(p), repeat=dim):
        if any(v):
            lead = next(x for x in v if x)
            if lead == 1:
                pts.append(v)
    return pts


def _matrix_perm(M, pts, p):
    index = {v: i for i, v in enumerate(pts)}
    out = []
    for v in pts:
        w = [int(x) % p for x in np.asarray(M) @ np.array(v)]
        lead = next(x for x in w if x)
        inv = pow(lead, p - 2, p)
        out.append(index[tuple((x * inv) % p for x in w)])
    return out


def sl3_on_points(S: PcGroup) -> AmbientOracle:
    """3^{1+2} (as ``extraspecial_plus``) inside SL_3(p) acting on projective points.

    g1 = I + E12, g2 = I + E23, g3 = I + E13.
    """
    p = S.p
    pts = _projective_points(p)

    def E(i, j):
        M = np.eye(3, dtype=np.int64)
        M[i, j] = 1
        return M

    upper = [E(0, 1), E(1, 2), E(0, 2)]
    lower = [E(1, 0), E(2, 1)]
    return AmbientOracle(S, [_matrix_perm(M, pts, p) for M in lower],
                         [_matrix_perm(M, pts, p) for M in upper], max_order=10**4)


def extraspecial_holomorph(S: PcGroup) -> AmbientOracle:
    """S extended by the automorphism inverting g1 and g2 (order 2|S|), on |S| points."""
    inv = [S.inverse(S.gen(0)), S.inverse(S.gen(1)), S.gen(2)]
    return holomorph_like(S, [inv])


def sym3_wreath_c3(S: PcGroup) -> AmbientOracle:
    """C_3 wr C_3 inside Sym(3) wr C_3 on 9 points (order 648)."""
    if S.p != 3 or S.n != 4:
        raise InputError("sym3_wreath_c3 needs S = wreath_cp_cp at p = 3")
    n = 9
    t = np.array(_cycle_perm(n, (0, 3, 6), (1, 4, 7), (2, 5, 8)))
    b0 = np.array(_cycle_perm(n, (0, 1, 2)))

    def inv(g):
        return np.argsort(g)

    def comm(a, b):
        # [a, b] = a^-1 b^-1 a b with (x * y)[i] = x[y[i]]
        return inv(a)[inv(b)[a[b]]]

    g2 = b0
    g3 = comm(g2, t)
    g4 = comm(g3, t)
    return AmbientOracle(S, [_cycle_perm(n, (0, 1))], [t, g2, g3, g4])


AMBIENTS = {
    ("elementary_abelian(2)", 3): [("sym3_x_sym3", sym3_x_sym3)],
    ("extraspecial_plus", 3): [("sl3_on_points", sl3_on_points), ("holomorph", extraspecial_holomorph)],
    ("wreath_cp_cp", 3): [("sym3_wreath_c3", sym3_wreath_c3)],
}


def ambient_names(name: str, p: int) -> list[str]:
    return [a for a, _ in AMBIENTS.get((_norm(name), p), [])]


def _norm(name):
    return "elementary_abelian(2)" if name == "elementary_abelian" else name


def default_ambient(S: PcGroup, name: str, p: int, which: str | None = None) -> AmbientOracle:
    options = AMBIENTS.get((_norm(name), p))
    if not options:
        raise InputError(f"no ambient group known for {name} at p = {p}")
    for a, build in options:
        if which is None or a == which:
            return build(S)
    raise InputError(f"unknown ambient {which!r} for {name}; known: {[a for a, _ in options]}")


def corpus(max_log: int = 4):
    """(label, S, [fusion systems]) for the small corpus: inner and every known ambient."""
    out = []
    for name in ("elementary_abelian(2)", "extraspecial_plus", "wreath_cp_cp"):
        S = catalog(name, 3)
        if S.n > max_log:
            continue
        systems = [FusionSystem.inner(S)]
        for a, build in AMBIENTS[(name, 3)]:
            F = FusionSystem.from_ambient(build(S))
            F.name = f"F_S(G) on {S.name}, G = {a}"
            systems.append(F)
        out.append((name, S, systems))
    return out


def alperin_generators(F: FusionSystem, subgroups=None):
    """Generator data (S and every fully normalized essential E, with Aut_F) read off F."""
    S = F.S
    subs = subgroups if subgroups is not None else S.all_subgroups()
    data = []
    for E in [S.whole] + F.essentials(subs):
        A = F.automizer(E)
        data.append((E, [A.morphism(a) for a in A.auts]))
    return data
