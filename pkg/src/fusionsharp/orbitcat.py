"""Orbit categories: objects are subgroups in a collection X, morphisms are
F-morphisms modulo post-composition with inner automorphisms of the target."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, InternalError, ResourceError
from .fusion import FMorphism, FusionSystem
from .pgroup import Subgroup

DEFAULT_MAX_DEGREE = 4
DEFAULT_CHAIN_CAP = 10**6


@dataclass(frozen=True)
class OrbitMorphism:
    """Class [phi] of ``phi: source -> target``; ``images`` is the least row of the Inn(target)-orbit."""

    source: Subgroup
    target: Subgroup
    images: tuple

    def fmorphism(self) -> FMorphism:
        return FMorphism(self.source, self.target, self.images)

    def is_identity(self) -> bool:
        return self.source is self.target and self.images == tuple(self.source.gens)

    def is_iso(self) -> bool:
        return self.source.order == self.target.order

    @property
    def key(self):
        return (self.source.mask, self.target.mask, self.images)

    def __eq__(self, other):
        return isinstance(other, OrbitMorphism) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        G = self.source.group
        return f"[{[G.exponents(x) for x in self.images]}]"


def inn_orbit(rows: np.ndarray, Q: Subgroup) -> np.ndarray:
    """All rows c_q o phi for q in Q (sorted, distinct)."""
    G = Q.group
    rows = np.atleast_2d(np.asarray(rows, dtype=np.int64))
    if rows.shape[1] == 0:
        return rows[:1]
    allr = G.conj(rows[:, None, :], Q.elements[None, :, None]).reshape(-1, rows.shape[1])
    return np.unique(allr, axis=0)


def canonical(f: FMorphism) -> OrbitMorphism:
    orb = inn_orbit(np.array(f.images, dtype=np.int64), f.target)
    return OrbitMorphism(f.source, f.target, tuple(int(x) for x in orb[0]))


class OrbitCategory:
    """orb(X) for an F-overconjugacy-closed collection X.

    ``universe`` (default: the objects plus every subgroup of S already known to
    the group) is only used to validate closure under overgroups.
    """

    def __init__(self, F: FusionSystem, objects, universe=None, check: bool = True):
        self.F = F
        self.objects = sorted(set(objects), key=Subgroup.sort_key)
        self._obj = {P.mask for P in self.objects}
        self._hom: dict = {}
        self._comp: dict = {}
        if check:
            self._check_closed(universe)

    def __contains__(self, P: Subgroup) -> bool:
        return P.mask in self._obj

    def _check_closed(self, universe):
        F = self.F
        for P in self.objects:
            for Y in F.f_class(P):
                if Y.mask not in self._obj:
                    raise InputError(f"collection not closed under F-conjugacy: {Y!r} missing (conjugate of {P!r})")
        if universe is not None:
            for P in self.objects:
                for H in universe:
                    if P <= H and H.mask not in self._obj:
                        raise InputError(f"collection not closed under overgroups: {H!r} contains {P!r}")

    # -- morphisms ------------------------------------------------------------------

    def hom(self, P: Subgroup, Q: Subgroup) -> list[OrbitMorphism]:
        """Hom_orb(P, Q), sorted by canonical image rows."""
        key = (P.mask, Q.mask)
        out = self._hom.get(key)
        if out is None:
            rows = self.F.hom_rows(P)
            if rows.shape[1]:
                rows = rows[Q.member[rows].all(axis=1)]
            seen = set()
            out = []
            left = {tuple(int(x) for x in r) for r in rows}
            for r in sorted(left):
                if r in seen:
                    continue
                orb = inn_orbit(np.array(r, dtype=np.int64), Q)
                members = {tuple(int(x) for x in o) for o in orb}
                if not members <= left:
                    raise InternalError("Hom_F(P, Q) is not closed under Inn(Q)")
                seen |= members
                out.append(OrbitMorphism(P, Q, tuple(int(x) for x in orb[0])))
            self._hom[key] = out
        return out

    def identity(self, P: Subgroup) -> OrbitMorphism:
        return OrbitMorphism(P, P, tuple(P.gens))

    def compose(self, g: OrbitMorphism, f: OrbitMorphism) -> OrbitMorphism:
        """[g] o [f]."""
        if f.target is not g.source:
            raise InputError("morphisms are not composable")
        key = (g.key, f.key)
        c = self._comp.get(key)
        if c is None:
            c = canonical(g.fmorphism().compose(f.fmorphism()))
            self._comp[key] = c
        return c

    def check_composition(self, g: OrbitMorphism, f: OrbitMorphism) -> bool:
        """Composition is independent of representatives of [g] and [f]."""
        want = self.compose(g, f)
        gf = g.fmorphism()
        for fr in inn_orbit(np.array(f.images, dtype=np.int64), f.target):
            fm = FMorphism(f.source, f.target, fr)
            for gr in inn_orbit(np.array(g.images, dtype=np.int64), g.target):
                if canonical(FMorphism(g.source, g.target, gr).compose(fm)) != want:
                    return False
            if canonical(gf.compose(fm)) != want:
                return False
        return True

    def morphism_count(self, P: Subgroup, Q: Subgroup) -> int:
        return len(self.hom(P, Q))

    def factor(self, f: OrbitMorphism):
        """[f] = [incl] o [iso]: returns (iso onto the image, image subgroup)."""
        fm = f.fmorphism()
        im = fm.image()
        return FMorphism(f.source, im, f.images), im

    # -- skeleton ---------------------------------------------------------------------

    def skeleton(self) -> "Skeleton":
        F = self.F
        reps = []
        retraction = {}
        done = set()
        for P in self.objects:
            if P.mask in done:
                continue
            cls = F.f_class(P)
            R = F.fully_normalized_rep(P)
            reps.append(R)
            isos = F.iso_from(R)
            for Y in cls:
                done.add(Y.mask)
                # iso Y -> R, as the inverse of the fixed R -> Y
                retraction[Y.mask] = canonical(isos[Y.mask].inverse().with_target(R))
        cat = OrbitCategory(F, reps, check=False)
        return Skeleton(cat, self, retraction)

    # -- chains -------------------------------------------------------------------------

    def nonidentity_homs(self, P: Subgroup) -> list[OrbitMorphism]:
        """Non-identity morphisms out of P, grouped by target in object order."""
        out = []
        for Q in self.objects:
            for f in self.hom(P, Q):
                if not f.is_identity():
                    out.append(f)
        return out

    def chain_counts(self, n: int, normalized: bool = True) -> list[int]:
        """Number of chains of each degree 0..n (by the last-arrow recursion)."""
        objs = self.objects
        idx = {P.mask: i for i, P in enumerate(objs)}
        m = len(objs)
        A = np.zeros((m, m), dtype=object)
        for i, P in enumerate(objs):
            for Q in objs:
                c = self.morphism_count(P, Q)
                if normalized and Q is P:
                    c -= 1
                A[i, idx[Q.mask]] = c
        counts = [m]
        v = np.ones(m, dtype=object)
        for _ in range(n):
            v = A @ v
            counts.append(int(v.sum()))
        return counts

    def chains(self, n: int, normalized: bool = True, max_degree: int = DEFAULT_MAX_DEGREE,
               cap: int = DEFAULT_CHAIN_CAP) -> list[tuple]:
        """All chains x0 -> x1 -> ... -> xn as tuples of n OrbitMorphisms (degree 0: objects)."""
        if n > max_degree:
            raise InputError(f"chain degree {n} exceeds the configured maximum {max_degree}")
        counts = self.chain_counts(n, normalized)
        if counts[n] > cap:
            raise ResourceError(f"{counts[n]} chains of degree {n} exceed the cap {cap}", bound=cap,
                                counts={"per_degree": counts})
        if n == 0:
            return [(P,) for P in self.objects]
        out = []
        outgoing = {P.mask: (self.nonidentity_homs(P) if normalized else
                             [f for Q in self.objects for f in self.hom(P, Q)]) for P in self.objects}

        def extend(chain):
            if len(chain) == n:
                out.append(tuple(chain))
                return
            for f in outgoing[chain[-1].target.mask]:
                chain.append(f)
                extend(chain)
                chain.pop()

        for P in self.objects:
            for f in outgoing[P.mask]:
                extend([f])
        return out


@dataclass
class Skeleton:
    """One object per F-class, with the retraction isomorphisms P -> rep(P)."""

    category: OrbitCategory
    full: OrbitCategory
    retraction: dict  # mask of P -> OrbitMorphism P -> rep

    def rep(self, P: Subgroup) -> Subgroup:
        return self.retraction[P.mask].target
