"""Small permutation groups used as ambient groups G >= S.

Permutations are numpy int arrays of point images; the product ``a * b``
applies b first, so ``(a * b)[i] = a[b[i]]``.
"""

from __future__ import annotations

from math import gcd

import numpy as np

from .errors import InputError, ResourceError
from .pgroup import PcGroup, product_table

DEFAULT_MAX_AMBIENT = 10**6


def _check_perm(g, degree):
    g = np.asarray(g, dtype=np.int64)
    if g.shape != (degree,) or not np.array_equal(np.sort(g), np.arange(degree)):
        raise InputError(f"not a permutation of {degree} points: {g.tolist()}")
    return g


class PermGroup:
    """All elements of the group generated by ``gens``, enumerated by closure."""

    def __init__(self, gens, degree: int | None = None, max_order: int = DEFAULT_MAX_AMBIENT):
        gens = [np.asarray(g, dtype=np.int64) for g in gens]
        if degree is None:
            if not gens:
                raise InputError("need a degree or at least one generator")
            degree = gens[0].size
        self.degree = degree
        self.gens = [_check_perm(g, degree) for g in gens]
        ident = np.arange(degree, dtype=np.int64)
        seen = {ident.tobytes(): 0}
        elems = [ident]
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.gens:
                    y = x[g]  # x * g
                    k = y.tobytes()
                    if k not in seen:
                        seen[k] = len(elems)
                        elems.append(y)
                        nxt.append(y)
                        if len(elems) > max_order:
                            raise ResourceError(f"ambient group order exceeds {max_order}", bound=max_order,
                                                partial=True, counts={"enumerated": len(elems)})
            frontier = nxt
        self.elements = np.array(elems, dtype=np.int64)
        self.order = len(elems)
        self._index = seen

    def index(self, g) -> int:
        k = self._index.get(np.asarray(g, dtype=np.int64).tobytes())
        if k is None:
            raise InputError("permutation is not in the group")
        return k

    def __contains__(self, g) -> bool:
        return np.asarray(g, dtype=np.int64).tobytes() in self._index


class AmbientOracle:
    """A finite group G (permutation group) containing S as a Sylow p-subgroup.

    ``sylow_images[k]`` is the permutation representing the pc generator g_{k+1}.
    The table ``conj[i, s]`` holds the element ``g_i s g_i^-1`` of S, or -1.
    """

    def __init__(self, S: PcGroup, gens, sylow_images, degree: int | None = None,
                 max_order: int = 10**4):
        self.S = S
        if len(sylow_images) != S.n:
            raise InputError(f"need {S.n} permutation images of the pc generators, got {len(sylow_images)}")
        G = PermGroup(list(gens) + list(sylow_images), degree, max_order=max_order)
        self.G = G
        d = G.degree
        ims = [_check_perm(x, d) for x in sylow_images]
        # permutation of every element of S in normal-form order: g1^e1 ... gn^en
        perms = np.arange(d, dtype=np.int64)[None, :]
        for y in ims:
            pw = [np.arange(d, dtype=np.int64)]
            for _ in range(S.p - 1):
                pw.append(pw[-1][y])
            # new row (i, e) is perms[i] * y^e; the last generator varies fastest,
            # matching the integer encoding of S elements
            perms = perms[:, np.array(pw)].reshape(-1, d)
        self.sperms = perms
        lookup = {}
        for s in range(S.order):
            k = perms[s].tobytes()
            if k in lookup:
                raise InputError("the given permutations do not define a faithful image of S")
            lookup[k] = s
        self._s_of = lookup
        self._check_hom(ims)
        if G.order % S.order or gcd(G.order // S.order, S.p) != 1:
            raise InputError(f"S (order {S.order}) is not Sylow in G (order {G.order})")
        self.conj = self._conj_table()

    def _check_hom(self, ims):
        # the map is a homomorphism iff products agree on generator * element
        S = self.S
        for k in range(S.n):
            lhs = S.mul(S.gen(k), S.all)
            prod = ims[k][self.sperms]  # ims[k] * perm(s)
            for s in range(S.order):
                if self._s_of.get(prod[s].tobytes()) != lhs[s]:
                    raise InputError(f"permutation images violate the pc relations (generator g{k + 1})")

    def _conj_table(self):
        S, G = self.S, self.G
        out = np.full((G.order, S.order), -1, dtype=np.int64)
        inv = np.argsort(G.elements, axis=1)
        for i in range(G.order):
            g, gi = G.elements[i], inv[i]
            c = g[self.sperms[:, gi]]  # g s g^-1
            for s in range(S.order):
                out[i, s] = self._s_of.get(c[s].tobytes(), -1)
        return out

    def element_of_s(self, s: int) -> int:
        """Index in G of the element s of S."""
        return self.G.index(self.sperms[s])

    def to_json(self) -> dict:
        return {
            "degree": self.G.degree,
            "generators": [g.tolist() for g in self.G.gens[: len(self.G.gens) - self.S.n]],
            "sylow_images": [g.tolist() for g in self.G.gens[len(self.G.gens) - self.S.n:]],
        }


def holomorph_like(S: PcGroup, auts) -> AmbientOracle:
    """S extended by the automorphism group generated by ``auts`` (each a list of
    generator images), acting on the points of S by x -> a(x) and x -> s x."""
    N = S.order
    left = [S.mul(S.gen(k), S.all) for k in range(S.n)]
    extra = []
    for images in auts:
        tab = product_table(S, images)  # image of the k-th normal-form element
        extra.append(np.asarray(tab, dtype=np.int64))
    return AmbientOracle(S, extra, left, degree=N)
