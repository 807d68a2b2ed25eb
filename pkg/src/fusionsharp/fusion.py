"""Fusion systems on a PcGroup S.

Three sources of morphisms are supported:

* ``inner``: conjugation by elements of S;
* ``ambient``: conjugation by elements of a permutation group G containing S
  as a Sylow subgroup (see ``perm.AmbientOracle``);
* ``generators``: the closure of a list of automorphisms of subgroups E <= S
  under composition and restriction.

A morphism P -> Q is stored by the images of the canonical generators of P.
``Hom_F(P, S)`` is computed once per P as an integer array of such image rows;
every other hom-set is a row filter of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import InputError, InternalError, ResourceError
from .fplin import FiniteGroup
from .pgroup import PcGroup, Subgroup, product_table

DEFAULT_CLOSURE_CAP = 2_000_000


class FMorphism:
    """An injective homomorphism ``source -> target`` given by generator images."""

    __slots__ = ("source", "target", "images", "_table")

    def __init__(self, source: Subgroup, target: Subgroup, images):
        self.source = source
        self.target = target
        self.images = tuple(int(x) for x in images)
        if len(self.images) != len(source.gens):
            raise InputError("wrong number of generator images")
        self._table = None

    @property
    def group(self) -> PcGroup:
        return self.source.group

    @property
    def table(self) -> np.ndarray:
        """Images of ``source.words`` (position-aligned)."""
        if self._table is None:
            self._table = product_table(self.group, self.images)
        return self._table

    def __call__(self, x):
        r = self.table[self.source.sift(x)]
        return int(r) if np.ndim(x) == 0 else r

    def image(self) -> Subgroup:
        return self.group._intern(self.table)

    def compose(self, other: "FMorphism") -> "FMorphism":
        """``self o other``."""
        return FMorphism(other.source, self.target, self(np.array(other.images, dtype=np.int64)))

    def inverse(self) -> "FMorphism":
        """Inverse isomorphism ``image -> source``."""
        im = self.image()
        pos = np.empty(self.group.order, dtype=np.int64)
        pos[self.table] = np.arange(self.table.size)
        return FMorphism(im, self.source, self.source.words[pos[np.array(im.gens, dtype=np.int64)]])

    def restrict(self, P: Subgroup, target: Subgroup | None = None) -> "FMorphism":
        if not P <= self.source:
            raise InputError("restriction to a subgroup not contained in the source")
        return FMorphism(P, target or self.target, self(np.array(P.gens, dtype=np.int64)))

    def with_target(self, target: Subgroup) -> "FMorphism":
        return FMorphism(self.source, target, self.images)

    def is_identity(self) -> bool:
        return self.source is self.target and self.images == tuple(self.source.gens)

    @property
    def key(self):
        return (self.source.mask, self.target.mask, self.images)

    def __eq__(self, other):
        return isinstance(other, FMorphism) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        G = self.group
        return f"<FMorphism {[G.exponents(x) for x in self.images]}>"


def conjugation(P: Subgroup, g: int, target: Subgroup | None = None) -> FMorphism:
    """``c_g|_P : x -> g x g^-1``."""
    G = P.group
    im = G.conj(np.array(P.gens, dtype=np.int64), g) if P.gens else []
    if target is None:
        target = G.conjugate_subgroup(P, g)
    return FMorphism(P, target, im)


def inclusion(P: Subgroup, Q: Subgroup) -> FMorphism:
    if not P <= Q:
        raise InputError("inclusion needs P <= Q")
    return FMorphism(P, Q, P.gens)


def morphism_from_images(E: Subgroup, gens, images, target: Subgroup | None = None) -> FMorphism:
    """Homomorphism on E determined by ``gens -> images`` (any generating set of E).

    Raises InputError when the assignment does not extend to an injective homomorphism.
    """
    G = E.group
    gens = [int(x) for x in gens]
    images = [int(y) for y in images]
    if len(gens) != len(images):
        raise InputError("generator and image lists differ in length")
    if G.subgroup(gens) is not E:
        raise InputError("listed elements do not generate the subgroup")
    phi = np.full(G.order, -1, dtype=np.int64)
    phi[0] = 0
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        nxt = []
        for x, y in zip(gens, images):
            a = G.mul(frontier, x)
            b = G.mul(phi[frontier], y)
            known = phi[a] >= 0
            if np.any(phi[a[known]] != b[known]):
                raise InputError("generator images do not define a homomorphism")
            new = ~known
            a, b = a[new], b[new]
            a, first = np.unique(a, return_index=True)
            phi[a] = b[first]
            # the same element reached twice in one step must agree
            nxt.append(a)
        frontier = np.unique(np.concatenate(nxt)) if nxt else frontier[:0]
    # multiplicativity on generator * element
    for x, y in zip(gens, images):
        if np.any(phi[G.mul(E.elements, x)] != G.mul(phi[E.elements], y)):
            raise InputError("generator images do not define a homomorphism")
    if np.unique(phi[E.elements]).size != E.order:
        raise InputError("generator images do not define an injective map")
    f = FMorphism(E, target or E, phi[np.array(E.gens, dtype=np.int64)])
    if target is not None and not np.all(target.member[f.table]):
        raise InputError("image not contained in the target")
    return f


@dataclass
class Automizer:
    """Aut_F(P), Inn(P) and Out_F(P) with a multiplication table.

    Out elements are cosets of Inn(P); each is represented by its
    lexicographically least automorphism (image tuple).  Index 0 is the
    trivial class.
    """

    P: Subgroup
    auts: list            # image tuples, sorted
    inner: list           # image tuples of Inn(P), sorted
    out_reps: list        # image tuple per Out class
    out_of: dict          # image tuple -> Out index
    out_group: FiniteGroup

    @property
    def order(self) -> int:
        return len(self.auts)

    @property
    def out_order(self) -> int:
        return len(self.out_reps)

    def morphism(self, images) -> FMorphism:
        return FMorphism(self.P, self.P, images)

    def out_index(self, images) -> int:
        try:
            return self.out_of[tuple(int(x) for x in images)]
        except KeyError:
            raise InputError("automorphism is not in Aut_F(P)") from None


def _unique_rows(A: np.ndarray) -> np.ndarray:
    if A.shape[0] == 0:
        return A
    return np.unique(A, axis=0)


class FusionSystem:
    """A fusion system on S.  Build with ``inner``, ``from_ambient`` or ``from_generators``."""

    def __init__(self, S: PcGroup, mode: str, oracle=None, generators=None,
                 closure_cap: int = DEFAULT_CLOSURE_CAP, name: str | None = None):
        if mode not in ("inner", "ambient", "generators"):
            raise InputError(f"unknown fusion mode {mode!r}")
        self.S = S
        self.mode = mode
        self.oracle = oracle
        self.generators = generators or []
        self.closure_cap = closure_cap
        self.name = name or f"{mode}:{S.name}"
        self._homs: dict[int, np.ndarray] = {}
        self._classes: dict[int, list] = {}
        self._autos: dict[int, Automizer] = {}
        self._centric: dict[int, bool] = {}
        self._iso_from: dict[int, dict] = {}
        self._orbit_reps: dict[int, np.ndarray] = {}
        self.unvalidated = False
        if mode == "generators":
            self._prepare_generators()

    # -- constructors ---------------------------------------------------------

    @classmethod
    def inner(cls, S: PcGroup) -> "FusionSystem":
        return cls(S, "inner", name=f"F_S(S) on {S.name}")

    @classmethod
    def from_ambient(cls, oracle) -> "FusionSystem":
        return cls(oracle.S, "ambient", oracle=oracle, name=f"F_S(G) on {oracle.S.name}, |G| = {oracle.G.order}")

    @classmethod
    def from_generators(cls, S: PcGroup, generators, closure_cap: int = DEFAULT_CLOSURE_CAP,
                        name: str | None = None) -> "FusionSystem":
        """``generators``: list of (Subgroup E, list of FMorphism E -> E)."""
        return cls(S, "generators", generators=generators, closure_cap=closure_cap,
                   name=name or f"generated on {S.name}")

    def _prepare_generators(self):
        S = self.S
        whole = S.whole
        seen_S = False
        gens = []
        for E, autos in self.generators:
            if E.group is not S:
                raise InputError("generator subgroup belongs to another group")
            for a in autos:
                if a.source is not E or a.image() is not E:
                    raise InputError("generator is not an automorphism of its subgroup")
                gens.append((E, a))
            seen_S |= E is whole
        if not seen_S:
            raise InputError("generator list must contain an entry for S itself")
        self._gen_list = gens
        inn = {tuple(S.conj(np.array(whole.gens), g)) for g in whole.gens}
        autS = self._closure_rows_plain(whole, [a for E, a in gens if E is whole], cap=self.closure_cap)
        have = {tuple(r) for r in autS}
        self._has_inner = inn <= have
        self.unvalidated = S.order > S.p**4

    # -- Hom_F(P, S) ----------------------------------------------------------

    def hom_rows(self, P: Subgroup) -> np.ndarray:
        """All F-morphisms P -> S as rows of generator images (sorted, distinct)."""
        rows = self._homs.get(P.mask)
        if rows is None:
            rows = self._compute_hom_rows(P)
            self._homs[P.mask] = rows
        return rows

    def _compute_hom_rows(self, P):
        S = self.S
        g = np.array(P.gens, dtype=np.int64)
        if g.size == 0:
            return np.zeros((1, 0), dtype=np.int64)
        if self.mode == "inner":
            return _unique_rows(S.conj(g[None, :], S.all[:, None]))
        if self.mode == "ambient":
            T = self.oracle.conj[:, g]
            return _unique_rows(T[np.all(T >= 0, axis=1)])
        if self._has_inner:
            return self._closure_rows_orbits(P)
        return self._closure_rows_plain(P, [a for _, a in self._gen_list], cap=self.closure_cap,
                                        subgroups=[E for E, _ in self._gen_list])

    def _closure_rows_plain(self, P, autos, cap, subgroups=None):
        """BFS over image rows starting from the inclusion."""
        start = tuple(P.gens)
        seen = {start}
        frontier = [start]
        if subgroups is None:
            subgroups = [a.source for a in autos]
        while frontier:
            nxt = []
            for row in frontier:
                arr = np.array(row, dtype=np.int64)
                for E, a in zip(subgroups, autos):
                    if arr.size and not E.member[arr].all():
                        continue
                    new = tuple(a(arr)) if arr.size else ()
                    if new not in seen:
                        seen.add(new)
                        nxt.append(new)
                        if len(seen) > cap:
                            raise ResourceError(f"closure budget {cap} exceeded", bound=cap, partial=True,
                                                counts={"morphisms": len(seen)})
            frontier = nxt
        return np.array(sorted(seen), dtype=np.int64).reshape(len(seen), len(start))

    def _closure_rows_orbits(self, P):
        """BFS over Inn(S)-orbits of morphisms; valid once Inn(S) lies in the generated system."""
        S = self.S
        whole = S.whole
        autS = [a for E, a in self._gen_list if E is whole]
        local = [(E, a) for E, a in self._gen_list if E is not whole]

        def orbit(row):
            return _unique_rows(S.conj(np.asarray(row, dtype=np.int64)[None, :], S.all[:, None]))

        start = orbit(P.gens)
        seen = {tuple(start[0]): start}
        frontier = [start]
        total = start.shape[0]
        while frontier:
            nxt = []
            for orb in frontier:
                cands = [a(orb[0]) for a in autS]
                for E, a in local:
                    inside = orb[E.member[orb].all(axis=1)]
                    if inside.shape[0]:
                        cands.extend(a(inside))
                for r in cands:
                    o = orbit(r)
                    k = tuple(o[0])
                    if k not in seen:
                        seen[k] = o
                        nxt.append(o)
                        total += o.shape[0]
                        if total > self.closure_cap:
                            raise ResourceError(f"closure budget {self.closure_cap} exceeded",
                                                bound=self.closure_cap, partial=True, counts={"morphisms": total})
            frontier = nxt
        self._orbit_reps[P.mask] = np.array(sorted(seen), dtype=np.int64)
        return _unique_rows(np.vstack(list(seen.values())))

    # -- hom-sets ---------------------------------------------------------------

    def hom(self, P: Subgroup, Q: Subgroup) -> list[FMorphism]:
        rows = self.hom_rows(P)
        if rows.shape[1]:
            rows = rows[Q.member[rows].all(axis=1)]
        return [FMorphism(P, Q, r) for r in rows]

    def iso(self, P: Subgroup, Q: Subgroup) -> list[FMorphism]:
        if P.order != Q.order:
            return []
        return self.hom(P, Q)

    def is_morphism(self, f: FMorphism) -> bool:
        rows = self.hom_rows(f.source)
        if rows.shape[1] == 0:
            return True
        return bool(np.any(np.all(rows == np.array(f.images), axis=1))) and bool(f.target.member[list(f.images)].all())

    def image_of_row(self, P: Subgroup, row) -> Subgroup:
        return P.group._intern(product_table(P.group, row))

    def f_class(self, P: Subgroup) -> list[Subgroup]:
        """F-conjugacy class of P, sorted by ``Subgroup.sort_key``."""
        cls = self._classes.get(P.mask)
        if cls is None:
            S = self.S
            if self.mode == "inner":
                cls = S.subgroup_class(P)
            else:
                found = {}
                for Y in S.subgroup_class(P):
                    found[Y.mask] = Y
                rows = self._orbit_reps.get(P.mask)
                if rows is None:
                    rows = self.hom_rows(P)
                for r in rows:
                    Y = self.image_of_row(P, r)
                    if Y.mask not in found:
                        for Z in S.subgroup_class(Y):
                            found[Z.mask] = Z
                cls = sorted(found.values(), key=Subgroup.sort_key)
            for Y in cls:
                self._classes[Y.mask] = cls
        return cls

    def is_f_conjugate(self, P: Subgroup, Q: Subgroup) -> bool:
        return P.order == Q.order and any(Y is Q for Y in self.f_class(P))

    def f_classes(self, subgroups) -> list[list[Subgroup]]:
        """Partition into F-classes; classes ordered by their least member.

        Members outside ``subgroups`` are included when a class leaves the list.
        """
        done = set()
        out = []
        for H in sorted(subgroups, key=Subgroup.sort_key):
            if H.mask in done:
                continue
            cls = self.f_class(H)
            done.update(Y.mask for Y in cls)
            out.append(cls)
        return out

    def iso_from(self, Q: Subgroup) -> dict:
        """A fixed F-isomorphism Q -> L for every L in the F-class of Q: the identity on Q, else the first row in sorted order."""
        d = self._iso_from.get(Q.mask)
        if d is None:
            d = {}
            S = self.S
            if self.mode == "inner":
                # the least conjugating element for every class member: walk the
                # left cosets of N_S(Q) by their least elements
                N = S.normalizer(Q).elements
                covered = np.zeros(S.order, dtype=bool)
                g = 0
                while g < S.order:
                    Y = S.conjugate_subgroup(Q, g)
                    d[Y.mask] = conjugation(Q, g, Y)
                    covered[S.mul(g, N)] = True
                    nxt = np.flatnonzero(~covered[g:])
                    g = g + int(nxt[0]) if nxt.size else S.order
            else:
                # alpha_Q is the identity, so V keeps its own labelling
                d[Q.mask] = FMorphism(Q, Q, Q.gens)
                for r in self.hom_rows(Q):
                    Y = self.image_of_row(Q, r)
                    if Y.mask not in d:
                        d[Y.mask] = FMorphism(Q, Y, r)
            self._iso_from[Q.mask] = d
        return d

    # -- automizers -------------------------------------------------------------

    def automizer(self, P: Subgroup) -> Automizer:
        A = self._autos.get(P.mask)
        if A is None:
            A = self._build_automizer(P)
            self._autos[P.mask] = A
        return A

    def _build_automizer(self, P):
        S = self.S
        g = np.array(P.gens, dtype=np.int64)
        rows = self.hom_rows(P)
        if g.size:
            rows = rows[P.member[rows].all(axis=1)]
        auts = [tuple(int(x) for x in r) for r in rows]
        if g.size:
            inner_rows = _unique_rows(S.conj(g[None, :], P.elements[:, None]))
        else:
            inner_rows = np.zeros((1, 0), dtype=np.int64)
        inner = [tuple(int(x) for x in r) for r in inner_rows]
        have = set(auts)
        if not set(inner) <= have:
            raise InternalError("Aut_F(P) does not contain Inn(P)")
        # cosets of Inn(P): c_x o a for x in P
        canon = {}
        for a in auts:
            if a in canon:
                continue
            if g.size:
                coset = _unique_rows(S.conj(np.array(a, dtype=np.int64)[None, :], P.elements[:, None]))
            else:
                coset = np.zeros((1, 0), dtype=np.int64)
            members = [tuple(int(x) for x in r) for r in coset]
            rep = members[0]
            for m in members:
                canon[m] = rep
        reps = sorted(set(canon.values()))
        ident = tuple(P.gens)
        reps.remove(canon[ident])
        reps.insert(0, canon[ident])
        index = {r: i for i, r in enumerate(reps)}
        out_of = {a: index[canon[a]] for a in auts}
        if len(auts) != len(inner) * len(reps):
            raise InternalError("|Aut_F(P)| != |Inn(P)| |Out_F(P)|")
        m = len(reps)
        tables = [product_table(S, r) for r in reps]
        pos = P.sift(np.array(reps, dtype=np.int64).reshape(m, -1)) if g.size else None
        table = np.zeros((m, m), dtype=np.int64)
        for i in range(m):
            for j in range(m):
                if g.size:
                    comp = tuple(int(x) for x in tables[i][pos[j]])
                else:
                    comp = ()
                table[i, j] = out_of[comp]
        return Automizer(P, sorted(auts), sorted(inner), reps, out_of, FiniteGroup(table))

    def aut_S(self, P: Subgroup) -> list:
        """Aut_S(P) as image tuples."""
        S = self.S
        N = S.normalizer(P)
        g = np.array(P.gens, dtype=np.int64)
        if g.size == 0:
            return [()]
        return [tuple(int(x) for x in r) for r in _unique_rows(S.conj(g[None, :], N.elements[:, None]))]

    # -- centric / normalized / essential --------------------------------------

    def is_centric(self, P: Subgroup) -> bool:
        c = self._centric.get(P.mask)
        if c is None:
            S = self.S
            if self.mode == "inner":
                c = S.is_self_centralizing(P)
                members = S.subgroup_class(P)
            else:
                members = self.f_class(P)
                c = all(S.is_self_centralizing(Y) for Y in members)
            for Y in members:
                self._centric[Y.mask] = c
        return c

    def centric_collection(self, subgroups) -> list[Subgroup]:
        return [H for H in subgroups if self.is_centric(H)]

    def normalizer_order(self, P: Subgroup) -> int:
        return int(self.S._normalizer_mask(P).sum())

    def is_fully_normalized(self, P: Subgroup) -> bool:
        return self.normalizer_order(P) == max(self.normalizer_order(Y) for Y in self.f_class(P))

    def is_fully_centralized(self, P: Subgroup) -> bool:
        S = self.S
        return S.centralizer(P).order == max(S.centralizer(Y).order for Y in self.f_class(P))

    def fully_normalized_rep(self, P: Subgroup) -> Subgroup:
        """Member of the F-class with largest |N_S|, ties broken by ``sort_key``."""
        cls = self.f_class(P)
        return min(cls, key=lambda Y: (-self.normalizer_order(Y), Y.sort_key()))

    def is_essential(self, E: Subgroup, max_out: int = 5000) -> bool:
        if not self.is_centric(E) or not self.is_fully_normalized(E):
            return False
        A = self.automizer(E)
        if A.out_order > max_out:
            raise ResourceError(f"|Out_F(E)| = {A.out_order} exceeds {max_out}", bound=max_out)
        return bool(strongly_p_embedded(A.out_group, self.S.p))

    def essentials(self, subgroups) -> list[Subgroup]:
        """Fully normalized essential class representatives among ``subgroups`` (E < S)."""
        out = []
        for cls in self.f_classes([H for H in subgroups if H is not self.S.whole]):
            E = self.fully_normalized_rep(cls[0])
            if self.is_essential(E):
                out.append(E)
        return out

    # -- L(P, Q) ----------------------------------------------------------------

    def l_set(self, P: Subgroup, Q: Subgroup) -> list[Subgroup]:
        """F-conjugates L of Q with L <= P and C_P(L) <= L."""
        S = self.S
        out = []
        for L in self.f_class(Q):
            if L <= P and S.centralizer(L, within=P) <= L:
                out.append(L)
        return out

    # -- saturation ---------------------------------------------------------------

    def check_saturation(self, subgroups=None, max_order: int | None = None) -> dict:
        """Sylow and extension axioms over every subgroup (|S| <= p^4 by default)."""
        S = self.S
        if self.mode == "ambient":
            return {"saturated": True, "checked": False, "note": "realized by a finite group; saturation is automatic"}
        if self.mode == "generators" and not self._has_inner:
            return {"saturated": False, "checked": True, "witness": "S", "axiom": "Inn(S) <= Aut_F(S)",
                    "note": "generator data for S does not generate all inner automorphisms"}
        limit = max_order if max_order is not None else S.p**4
        if S.order > limit:
            return {"saturated": None, "checked": False,
                    "note": f"|S| = {S.order} exceeds the full-check bound {limit}; unvalidated"}
        subs = subgroups if subgroups is not None else S.all_subgroups()
        for cls in self.f_classes(subs):
            for P in cls:
                if self.is_fully_normalized(P):
                    if not self.is_fully_centralized(P):
                        return self._sat_fail(P, "fully normalized but not fully centralized")
                    A = self.automizer(P)
                    autS = len(self.aut_S(P))
                    order = A.order
                    while order % S.p == 0:
                        order //= S.p
                    if autS != A.order // order:
                        return self._sat_fail(P, "Aut_S(P) is not a Sylow subgroup of Aut_F(P)")
            for P in cls:
                for r in self.hom_rows(P):
                    phi = FMorphism(P, S.whole, r)
                    Y = phi.image()
                    if not self.is_fully_centralized(Y):
                        continue
                    if not self._extends(phi, Y):
                        return self._sat_fail(P, "morphism to a fully centralized subgroup does not extend to N_phi",
                                              morphism=[S.exponents(x) for x in r])
        return {"saturated": True, "checked": True}

    def _sat_fail(self, P, axiom, **extra):
        S = self.S
        out = {"saturated": False, "checked": True, "axiom": axiom,
               "witness": [S.exponents(x) for x in P.gens]}
        out.update(extra)
        return out

    def _extends(self, phi: FMorphism, Y: Subgroup) -> bool:
        S = self.S
        P = phi.source
        if not P.gens:
            N_phi = S.whole
        else:
            autSY = set(self.aut_S(Y))
            inv = phi.inverse()
            NP = S.normalizer(P)
            keep = []
            yg = np.array(Y.gens, dtype=np.int64)
            pre = inv(yg)
            for gel in NP.elements:
                conj = phi(S.conj(pre, int(gel)))
                if tuple(int(x) for x in conj) in autSY:
                    keep.append(int(gel))
            N_phi = S.subgroup(keep)
        rows = self.hom_rows(N_phi)
        if not P.gens:
            return rows.shape[0] > 0
        target = np.array(phi.images, dtype=np.int64)
        pg = np.array(P.gens, dtype=np.int64)
        idx = N_phi.sift(pg)
        for r in rows:
            if np.array_equal(product_table(S, r)[idx], target):
                return True
        return False

    # -- description -----------------------------------------------------------------

    def describe(self) -> dict:
        d = {"mode": self.mode, "group": self.S.name, "name": self.name}
        if self.mode == "ambient":
            d["ambient_order"] = self.oracle.G.order
        if self.mode == "generators":
            d["unvalidated"] = self.unvalidated
            d["generator_count"] = len(self._gen_list)
        return d


# -- strongly p-embedded subgroups -------------------------------------------------------


def all_subgroups_of(Gf: FiniteGroup) -> list[frozenset]:
    """Every subgroup of a small table group, by joining cyclic subgroups."""
    cyc = {}
    for g in range(Gf.order):
        H = frozenset(Gf.closure([g]))
        cyc[H] = g
    subs = set(cyc)
    frontier = list(subs)
    cyc_gens = sorted(cyc.values())
    while frontier:
        nxt = []
        for H in frontier:
            for g in cyc_gens:
                if g in H:
                    continue
                K = frozenset(Gf.closure(sorted(H) + [g]))
                if K not in subs:
                    subs.add(K)
                    nxt.append(K)
        frontier = nxt
    return sorted(subs, key=lambda H: (len(H), sorted(H)))


def strongly_p_embedded(Gf: FiniteGroup, p: int):
    """A strongly p-embedded subgroup M < G (as a frozenset) or None, by brute force."""
    if Gf.order % p:
        return None
    T = Gf.table
    inv = Gf.inverse
    for M in all_subgroups_of(Gf):
        if len(M) == Gf.order or len(M) % p:
            continue
        Ml = np.array(sorted(M))
        ok = True
        for g in range(Gf.order):
            if g in M:
                continue
            conj = set(int(x) for x in T[T[g, Ml], inv[g]])
            if len(M & conj) % p == 0:
                ok = False
                break
        if ok:
            return M
    return None


def p_subgroup_poset_disconnected(Gf: FiniteGroup, p: int) -> bool:
    """Whether the graph on subgroups of order p, joined when they commute, is disconnected.

    For p | |G| this is equivalent to G having a strongly p-embedded subgroup.
    """
    if Gf.order % p:
        return False
    T = Gf.table
    order_p = sorted({frozenset(Gf.closure([g])) for g in range(1, Gf.order) if Gf.element_order(g) == p},
                     key=sorted)
    k = len(order_p)
    if k == 0:
        return False
    gens = [min(x for x in H if x) for H in order_p]
    parent = list(range(k))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in combinations(range(k), 2):
        if T[gens[i], gens[j]] == T[gens[j], gens[i]]:
            parent[find(i)] = find(j)
    return len({find(i) for i in range(k)}) > 1
