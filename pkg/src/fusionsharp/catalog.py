"""Named p-groups used throughout the tests and the CLI."""

from __future__ import annotations

import re

from .errors import InputError
from .pgroup import DEFAULT_MAX_ORDER, PcGroup

# Positive roots of G_2 in pc order (a short, b long):
#   g1 = x_a, g2 = x_b, g3 = x_{a+b}, g4 = x_{2a+b}, g5 = x_{3a+b}, g6 = x_{3a+2b}.
# Chevalley commutator relations at t = u = 1, written as [g_j, g_i] with i < j.
# The sign pattern is one of the consistent choices; consistency is re-checked
# at construction and the maximal-class facts are asserted in sylow_g2().
G2_COMMUTATORS = {
    (1, 0): [(2, -1), (3, -1), (4, 1), (5, -1)],
    (2, 0): [(3, 2), (4, 3), (5, 3)],
    (3, 0): [(4, 3)],
    (4, 1): [(5, 1)],
    (3, 2): [(5, 3)],
}

# Character of the maximal torus on each root subgroup, as exponents of (lambda, mu).
G2_ROOT_WEIGHTS = [(1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2)]


def elementary_abelian(n: int, p: int) -> PcGroup:
    return PcGroup(p, [[] for _ in range(n)], {}, name=f"elementary_abelian({n})_{p}")


def extraspecial_plus(p: int) -> PcGroup:
    """Extraspecial group of order p^3 and exponent p (unitriangular 3x3 over F_p).

    g1 = I + E12, g2 = I + E23, g3 = I + E13, so [g2, g1] = g3^-1.
    """
    return PcGroup(p, [[], [], []], {(1, 0): [(2, p - 1)]}, name=f"extraspecial_plus_{p}")


def wreath_cp_cp(p: int) -> PcGroup:
    """C_p wr C_p, order p^(p+1): g1 the top generator, g2..g_{p+1} a base basis
    with [g_{k}, g1] = g_{k+1}."""
    n = p + 1
    comms = {(k, 0): [(k + 1, 1)] for k in range(1, n - 1)}
    return PcGroup(p, [[] for _ in range(n)], comms, name=f"wreath_cp_cp_{p}")


def sylow_g2(p: int, max_order: int = DEFAULT_MAX_ORDER) -> PcGroup:
    if p < 5:
        raise InputError(f"sylow_g2 needs p >= 5, got {p}")
    G = PcGroup(p, [[] for _ in range(6)], G2_COMMUTATORS, name=f"sylow_g2_{p}",
                max_order=max(max_order, p**6))
    data = G.central_series()
    problems = []
    if not data.maximal_class:
        problems.append("not of maximal class")
    if data.gamma1 is None or not G.is_extraspecial(data.gamma1):
        problems.append("gamma_1(S) not extraspecial")
    elif G.center(data.gamma1) is not G.center():
        problems.append("Z(gamma_1(S)) != Z(S)")
    if not data.exceptional:
        problems.append("not exceptional")
    if problems:
        raise InputError("sylow_g2 presentation fails structural checks: " + "; ".join(problems))
    return G


def torus_automorphism_images(G: PcGroup, lam: int, mu: int) -> list[int]:
    """Images of the pc generators of sylow_g2 under the torus element (lam, mu)."""
    p = G.p
    return [G.pow(G.gen(k), pow(lam, a, p) * pow(mu, b, p)) for k, (a, b) in enumerate(G2_ROOT_WEIGHTS)]


_NAME_RE = re.compile(r"^(elementary_abelian)(?:\((\d+)\))?$")

CATALOG_NAMES = ("elementary_abelian(n)", "extraspecial_plus", "wreath_cp_cp", "sylow_g2")


def catalog(name: str, p: int, max_order: int = DEFAULT_MAX_ORDER) -> PcGroup:
    """Look up a catalog group: ``elementary_abelian(n)``, ``extraspecial_plus``,
    ``wreath_cp_cp`` or ``sylow_g2``."""
    m = _NAME_RE.match(name)
    if m:
        n = int(m.group(2) or 2)
        if n < 1:
            raise InputError("elementary_abelian rank must be positive")
        G = elementary_abelian(n, p)
    elif name == "extraspecial_plus":
        G = extraspecial_plus(p)
    elif name == "wreath_cp_cp":
        G = wreath_cp_cp(p)
    elif name == "sylow_g2":
        G = sylow_g2(p, max_order)
    else:
        raise InputError(f"unknown catalog group {name!r}; known: {', '.join(CATALOG_NAMES)}")
    if G.order > max_order:
        from .errors import ResourceError
        raise ResourceError(f"catalog group {name} at p={p} exceeds order budget {max_order}", bound=max_order)
    return G
