"""The simple Mackey functors S_{Q,V} with every structure map as an F_p matrix.

Values.  For P <= S the value is the direct sum, over P-classes of
F-conjugates L of Q inside P, of the trace image tr_L^{N_P(L)}(V_L), where
V_L is V with the twisted action of Out_F(L): x in N_P(L) acts by
rho([alpha_L^-1 c_x alpha_L]).  Each summand is stored with the RREF basis of
its image, so coordinates are read at the pivot columns.

Structure maps.  ``ind(T, R)``, ``res(T, P)`` and ``iso(phi)`` are matrices in
those bases; general orbit-category morphisms factor as inclusion after
isomorphism.  ``covariant`` is (Ind, Iso), ``contravariant`` is (Res, Iso^-1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fplin
from .errors import InputError, InternalError
from .fplin import FpGroupRep, FpSubspace
from .fusion import FMorphism, FusionSystem
from .orbitcat import OrbitMorphism
from .pgroup import Subgroup


@dataclass
class Summand:
    L: Subgroup
    conj: dict            # mask of each P-conjugate of L -> x in P with x L x^-1 = it
    space: FpSubspace     # tr image inside V (ambient dim = dim V)
    offset: int = 0

    @property
    def dim(self) -> int:
        return self.space.dim


@dataclass
class Value:
    P: Subgroup
    summands: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return sum(s.dim for s in self.summands)

    def summand_at(self, L: Subgroup):
        """The summand whose P-class contains L, or None."""
        for s in self.summands:
            if L.mask in s.conj:
                return s
        return None


class SqvFunctor:
    """S_{Q,V} for a fusion system F, a subgroup Q and an F_p Out_F(Q)-module V."""

    def __init__(self, F: FusionSystem, Q: Subgroup, V: FpGroupRep, alphas: dict | None = None,
                 check_lemma: bool = True):
        self.F = F
        self.S = F.S
        self.Q = Q
        self.p = F.S.p
        self.aut = F.automizer(Q)
        if V.group.order != self.aut.out_order or not np.array_equal(V.group.table, self.aut.out_group.table):
            raise InputError("V is not a module for Out_F(Q)")
        self.V = V
        self.d = V.dim
        self.members = F.f_class(Q)
        self.alpha = dict(alphas) if alphas is not None else dict(F.iso_from(Q))
        for L in self.members:
            a = self.alpha.get(L.mask)
            if a is None or a.source is not Q or a.image() is not L or not F.is_morphism(a):
                raise InputError("alpha must give an F-isomorphism Q -> L for every F-conjugate L")
        self.alpha_inv = {m: a.inverse() for m, a in self.alpha.items()}
        self._alpha_im = {m: np.array(a.images, dtype=np.int64) for m, a in self.alpha.items()}
        self.check_lemma = check_lemma
        self._values: dict = {}
        self._labels: dict = {}
        self._res: dict = {}
        self._ind: dict = {}
        self._rho_cache: dict = {}
        self._member_masks = [L.mask for L in self.members]

    # -- twisting -------------------------------------------------------------------

    def rho(self, o: int) -> np.ndarray:
        return self.V.matrix(o)

    def twist_index(self, L: Subgroup, Lp: Subgroup, theta: FMorphism | None = None, x: int | None = None) -> int:
        """Out_F(Q)-index of alpha_{Lp}^-1 o theta o alpha_L, theta: L -> Lp (or c_x)."""
        a = self._alpha_im[L.mask]
        if a.size == 0:
            return 0
        if theta is None:
            y = self.S.conj(a, x)
        else:
            y = theta(a)
        return self.aut.out_index(self.alpha_inv[Lp.mask](y))

    def twist_matrix(self, L, Lp, theta=None, x=None) -> np.ndarray:
        return self.rho(self.twist_index(L, Lp, theta, x))

    def twisted_rep(self, L: Subgroup) -> FpGroupRep:
        """V_L as an Out_F(L)-module: [gamma] acts by rho([alpha^-1 gamma alpha])."""
        AL = self.F.automizer(L)
        a = self.alpha[L.mask]
        ainv = self.alpha_inv[L.mask]
        mats = []
        for rep in AL.out_reps:
            gamma = FMorphism(L, L, rep)
            o = self.aut.out_index(ainv(gamma(np.array(a.images, dtype=np.int64)))) if a.images else 0
            mats.append(self.rho(o))
        return FpGroupRep.from_all(AL.out_group, mats, self.p)

    def _label_data(self, L: Subgroup):
        """Elements of N_S(L) and the Out_F(Q)-index of the twist of c_x for each."""
        d = self._labels.get(L.mask)
        if d is None:
            S = self.S
            N = S.normalizer(L)
            K = S.subgroup(L.gens + S.centralizer(L).gens)
            labels = np.full(S.order, -1, dtype=np.int64)
            for t in S.left_transversal(K, N):
                labels[S.mul(t, K.elements)] = self.twist_index(L, L, x=t)
            d = (N, labels)
            self._labels[L.mask] = d
        return d

    def trace_matrix(self, L: Subgroup, big: Subgroup, small: Subgroup | None = None) -> np.ndarray:
        """Sum of rho over coset representatives of small (default L) in N_big(L), acting on V_L."""
        S = self.S
        N, labels = self._label_data(L)
        nb = N.elements[big.member[N.elements]]
        if small is None:
            counts = np.bincount(labels[nb], minlength=self.V.group.order) // L.order
        else:
            NB = S._intern(nb)
            NT = S._intern(nb[small.member[nb]])
            reps = np.array(S.left_transversal(NT, NB), dtype=np.int64)
            counts = np.bincount(labels[reps], minlength=self.V.group.order)
        T = np.zeros((self.d, self.d), dtype=np.int64)
        for o in np.flatnonzero(counts % self.p):
            T = (T + int(counts[o]) * self.rho(int(o))) % self.p
        return T

    # -- values -------------------------------------------------------------------------

    def contained_members(self, P: Subgroup) -> list[Subgroup]:
        m = P.mask
        return [L for L, lm in zip(self.members, self._member_masks) if lm & m == lm]

    def value(self, P: Subgroup) -> Value:
        val = self._values.get(P.mask)
        if val is None:
            val = self._build_value(P)
            self._values[P.mask] = val
        return val

    def _build_value(self, P):
        S = self.S
        inside = self.contained_members(P)
        left = {L.mask: L for L in inside}
        val = Value(P)
        off = 0
        for L in inside:
            if L.mask not in left:
                continue
            conj = {L.mask: 0}
            frontier = [L]
            while frontier:
                nxt = []
                for X in frontier:
                    for g in P.gens:
                        Y = S.conjugate_subgroup(X, g)
                        if Y.mask not in conj:
                            conj[Y.mask] = S.mul(g, conj[X.mask])
                            nxt.append(Y)
                frontier = nxt
            for m in conj:
                left.pop(m, None)
            space = fplin.image(self.trace_matrix(L, P), self.p)
            if self.check_lemma and space.dim and not S.centralizer(L, within=P) <= L:
                raise InternalError(f"nonzero trace image at L with C_P(L) not inside L: {L!r} in {P!r}")
            val.summands.append(Summand(L, conj, space, off))
            off += space.dim
        return val

    def dim(self, P: Subgroup) -> int:
        return self.value(P).dim

    # -- structure maps ---------------------------------------------------------------------

    def _block(self, src: Summand, dst: Summand, M: np.ndarray) -> np.ndarray:
        """Coordinates in dst of M applied to the basis of src."""
        if src.dim == 0 or dst.dim == 0:
            return np.zeros((dst.dim, src.dim), dtype=np.int64)
        W = fplin.matmul(M, src.space.columns, self.p)
        try:
            return dst.space.coords(W)
        except InputError:
            raise InternalError("structure map leaves the target summand") from None

    def res(self, T: Subgroup, P: Subgroup) -> np.ndarray:
        """Res_T^P : S(P) -> S(T)."""
        if not T <= P:
            raise InputError("res needs T <= P")
        key = (T.mask, P.mask)
        M = self._res.get(key)
        if M is None:
            vP, vT = self.value(P), self.value(T)
            M = np.zeros((vT.dim, vP.dim), dtype=np.int64)
            for s in vP.summands:
                if s.dim == 0:
                    continue
                for t in vT.summands:
                    x = s.conj.get(t.L.mask)
                    if x is None or t.dim == 0:
                        continue
                    B = self._block(s, t, self.twist_matrix(s.L, t.L, x=x))
                    M[t.offset:t.offset + t.dim, s.offset:s.offset + s.dim] = B
            self._res[key] = M
        return M

    def ind(self, T: Subgroup, R: Subgroup) -> np.ndarray:
        """Ind_T^R : S(T) -> S(R)."""
        if not T <= R:
            raise InputError("ind needs T <= R")
        key = (T.mask, R.mask)
        M = self._ind.get(key)
        if M is None:
            S = self.S
            vT, vR = self.value(T), self.value(R)
            M = np.zeros((vR.dim, vT.dim), dtype=np.int64)
            for t in vT.summands:
                if t.dim == 0:
                    continue
                s = vR.summand_at(t.L)
                if s is None or s.dim == 0:
                    continue
                tr = self.trace_matrix(t.L, R, small=T)
                y = s.conj[t.L.mask]
                r = S.inverse(y)
                tw = fplin.matmul(self.twist_matrix(t.L, s.L, x=r), tr, self.p)
                M[s.offset:s.offset + s.dim, t.offset:t.offset + t.dim] = self._block(t, s, tw)
            self._ind[key] = M
        return M

    def iso(self, phi: FMorphism) -> np.ndarray:
        """Iso(phi) : S(P) -> S(P') for an F-isomorphism phi: P -> P'."""
        S = self.S
        P = phi.source
        Pp = phi.image()
        vP, vPp = self.value(P), self.value(Pp)
        M = np.zeros((vPp.dim, vP.dim), dtype=np.int64)
        phiP = FMorphism(P, Pp, phi.images)
        for s in vP.summands:
            if s.dim == 0:
                continue
            theta = phiP.restrict(s.L)
            img = theta.image()
            t = vPp.summand_at(img)
            if t is None:
                raise InternalError("image of a conjugate of Q is not F-conjugate to Q")
            r = S.inverse(t.conj[img.mask])
            # c_r o phi|_L : L -> t.L
            a = self._alpha_im[s.L.mask]
            y = S.conj(theta(a), r) if a.size else a
            o = self.aut.out_index(self.alpha_inv[t.L.mask](y)) if a.size else 0
            M[t.offset:t.offset + t.dim, s.offset:s.offset + s.dim] = self._block(s, t, self.rho(o))
        return M

    def covariant(self, f: OrbitMorphism) -> np.ndarray:
        """M_*([f]) = Ind_{f(P)}^{Q'} o Iso(f: P -> f(P))."""
        fm = f.fmorphism()
        im = fm.image()
        return fplin.matmul(self.ind(im, f.target), self.iso(fm), self.p) if self.dim(f.source) else \
            np.zeros((self.dim(f.target), 0), dtype=np.int64)

    def contravariant(self, f: OrbitMorphism) -> np.ndarray:
        """M^*([f]) = Iso(f^-1: f(P) -> P) o Res_{f(P)}^{Q'}."""
        fm = f.fmorphism()
        im = fm.image()
        back = FMorphism(im, im, fm.inverse().images)
        back = FMorphism(im, f.source, back.images)
        return fplin.matmul(self.iso(back), self.res(im, f.target), self.p)

    # -- dump ------------------------------------------------------------------------------

    def dump(self, objects, morphisms=()) -> dict:
        S = self.S
        out = {"Q": [list(S.exponents(x)) for x in self.Q.gens], "V_dim": self.d, "objects": [], "morphisms": []}
        for P in objects:
            v = self.value(P)
            out["objects"].append({
                "P": [list(S.exponents(x)) for x in P.gens],
                "summands": [{"L": [list(S.exponents(x)) for x in s.L.gens], "dim": s.dim,
                              "basis": s.space.basis.tolist()} for s in v.summands if s.dim],
            })
        for kind, a, b, M in morphisms:
            out["morphisms"].append({"kind": kind, "source": [list(S.exponents(x)) for x in a.gens],
                                     "target": [list(S.exponents(x)) for x in b.gens], "matrix": M.tolist()})
        return out


# -- simple modules and the family of all S_{Q,V} ---------------------------------------------


def simple_modules_for(F: FusionSystem, Q: Subgroup, seed: int = 0, max_dim: int = 600) -> list[FpGroupRep]:
    A = F.automizer(Q)
    return fplin.simple_modules(A.out_group, F.S.p, seed=seed, max_dim=max_dim)


def all_functors(F: FusionSystem, subgroups, seed: int = 0, max_dim: int = 600):
    """(Q, V-index, SqvFunctor) for every F-class of ``subgroups`` and every simple V."""
    out = []
    for cls in F.f_classes(subgroups):
        Q = F.fully_normalized_rep(cls[0])
        for i, V in enumerate(simple_modules_for(F, Q, seed, max_dim)):
            out.append((Q, i, SqvFunctor(F, Q, V)))
    return out


# -- axiom verification ---------------------------------------------------------------------------


def verify_axioms(M: SqvFunctor, X, reading: str = "intersection_in_R", max_failures: int = 5,
                  check_isos: bool = True) -> dict:
    """Check bivariance, the isomorphism axiom and the X-truncated double coset formula.

    ``reading`` selects which subgroup must lie in X for a double coset RxQ to
    contribute: ``intersection_in_R`` uses R cap xQx^-1, ``intersection_in_Q``
    uses Q cap xRx^-1.
    """
    if reading not in ("intersection_in_R", "intersection_in_Q"):
        raise InputError(f"unknown reading {reading!r}")
    S = M.S
    p = M.p
    X = sorted(set(X), key=Subgroup.sort_key)
    inX = {H.mask for H in X}
    failures = []
    triples = 0
    for P in X:
        below = [H for H in X if H <= P]
        for A in below:
            indA = M.ind(A, P)
            for B in below:
                triples += 1
                lhs = fplin.matmul(M.res(B, P), indA, p)
                rhs = np.zeros_like(lhs)
                for x in S.double_cosets(B, P, A):
                    xA = S.conjugate_subgroup(A, x)
                    I = B & xA
                    test = I if reading == "intersection_in_R" else A & S.conjugate_subgroup(B, x)
                    if test.mask not in inX:
                        continue
                    cx = FMorphism(A, xA, S.conj(np.array(A.gens, dtype=np.int64), x) if A.gens else [])
                    term = fplin.matmul(M.ind(I, B), fplin.matmul(M.res(I, xA), M.iso(cx), p), p)
                    rhs = (rhs + term) % p
                if not np.array_equal(lhs, rhs):
                    if len(failures) < max_failures:
                        failures.append({"P": [S.exponents(g) for g in P.gens], "Q": [S.exponents(g) for g in A.gens],
                                         "R": [S.exponents(g) for g in B.gens], "lhs": lhs.tolist(),
                                         "rhs": rhs.tolist()})
                    else:
                        failures.append(None)
    iso_fail = 0
    iso_checked = 0
    if check_isos:
        iso_checked, iso_fail = _check_iso_axioms(M, X)
    nfail = len(failures)
    return {"triples": triples, "failures": nfail, "examples": [f for f in failures if f],
            "iso_checked": iso_checked, "iso_failures": iso_fail, "reading": reading,
            "ok": nfail == 0 and iso_fail == 0}


def _check_iso_axioms(M: SqvFunctor, X):
    """Iso(phi^-1) Iso(phi) = 1, contravariant = covariant of the inverse, and
    independence of the representative modulo Inn(target)."""
    F, S, p = M.F, M.S, M.p
    checked = fails = 0
    seen = set()
    for P in X:
        if P.mask in seen:
            continue
        for Y in F.f_class(P):
            seen.add(Y.mask)
        for f in F.iso(P, P)[:8] + [F.iso(P, Y)[0] for Y in F.f_class(P)[:4] if Y is not P]:
            checked += 1
            inv = f.inverse()
            A = M.iso(f)
            B = M.iso(FMorphism(inv.source, inv.target, inv.images))
            d = M.dim(P)
            if not np.array_equal(fplin.matmul(B, A, p), np.eye(d, dtype=np.int64) % p):
                fails += 1
                continue
            Y = f.image()
            om = OrbitMorphism(P, Y, f.images)
            back = OrbitMorphism(Y, P, inv.images)
            if not np.array_equal(M.contravariant(om), M.covariant(back)):
                fails += 1
                continue
            for r in Y.gens[:2]:
                g = FMorphism(P, Y, S.conj(np.array(f.images, dtype=np.int64), r)) if f.images else f
                if not np.array_equal(M.iso(g), A):
                    fails += 1
                    break
    return checked, fails


def check_functoriality(M: SqvFunctor, category, max_pairs: int | None = None) -> dict:
    """Covariant images compose, contravariant images compose in the opposite order,
    over all composable pairs of an orbit category (first ``max_pairs`` if given)."""
    p = M.p
    checked = fails = 0
    for P in category.objects:
        for Y in category.objects:
            for f in category.hom(P, Y):
                for Z in category.objects:
                    for g in category.hom(Y, Z):
                        if max_pairs is not None and checked >= max_pairs:
                            return {"pairs": checked, "failures": fails, "ok": fails == 0, "complete": False}
                        checked += 1
                        gf = category.compose(g, f)
                        co = fplin.matmul(M.covariant(g), M.covariant(f), p)
                        contra = fplin.matmul(M.contravariant(f), M.contravariant(g), p)
                        if not (np.array_equal(co, M.covariant(gf)) and np.array_equal(contra, M.contravariant(gf))):
                            fails += 1
    return {"pairs": checked, "failures": fails, "ok": fails == 0, "complete": True}


def natural_isomorphism(M1: SqvFunctor, M2: SqvFunctor, P: Subgroup) -> np.ndarray:
    """Intertwiner S(P) -> S'(P) between two constructions differing only in the fixed alpha_L.

    On the summand at L it is rho(alpha_L^-1 alpha'_L)^-1, written in the two bases.
    """
    if M1.Q is not M2.Q or M1.V is not M2.V:
        raise InputError("functors must share Q and V")
    v1, v2 = M1.value(P), M2.value(P)
    out = np.zeros((v2.dim, v1.dim), dtype=np.int64)
    for s in v1.summands:
        t = v2.summand_at(s.L)
        if s.dim == 0:
            continue
        if t is None or t.L is not s.L:
            raise InternalError("summand representatives differ between the two constructions")
        a2 = M2._alpha_im[s.L.mask]
        o = M1.aut.out_index(M1.alpha_inv[s.L.mask](a2)) if a2.size else 0
        u_inv = M1.rho(int(M1.V.group.inverse[o]))
        out[t.offset:t.offset + t.dim, s.offset:s.offset + s.dim] = M1._block(s, t, u_inv) if t.dim else 0
    return out


def check_natural_isomorphism(M1: SqvFunctor, M2: SqvFunctor, X) -> dict:
    """The intertwiners commute with every Res, Ind and Iso between members of X."""
    p = M1.p
    T = {P.mask: natural_isomorphism(M1, M2, P) for P in X}
    checked = fails = 0
    for P in X:
        if fplin.rank(T[P.mask], p) != M1.dim(P) or M1.dim(P) != M2.dim(P):
            fails += 1
        for H in X:
            if H <= P:
                for a, b in ((M1.res(H, P), M2.res(H, P)), ):
                    checked += 1
                    fails += not np.array_equal(fplin.matmul(T[H.mask], a, p), fplin.matmul(b, T[P.mask], p))
                checked += 1
                fails += not np.array_equal(fplin.matmul(T[P.mask], M1.ind(H, P), p),
                                            fplin.matmul(M2.ind(H, P), T[H.mask], p))
        for f in M1.F.iso(P, P)[:6]:
            checked += 1
            fails += not np.array_equal(fplin.matmul(T[P.mask], M1.iso(f), p), fplin.matmul(M2.iso(f), T[P.mask], p))
    return {"checked": checked, "failures": int(fails), "ok": fails == 0}
