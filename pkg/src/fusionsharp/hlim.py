"""Higher limits of contravariant F_p-valued functors over finite categories,
via the normalized bar cochain complex.

For a chain c = (x0 -f1-> x1 -f2-> ... -fn-> xn) of non-identity morphisms a
cochain takes a value theta(c) in M(x0), and

  (d theta)(f1, ..., f_{n+1}) = M(f1) theta(f2, ..., f_{n+1})
                                + sum_{i=1..n} (-1)^i theta(..., f_{i+1} o f_i, ...)
                                + (-1)^{n+1} theta(f1, ..., fn),

where terms whose composite is an identity vanish (normalized cochains).
Chains starting at an object with M(x0) = 0 carry no coordinates and are
never enumerated.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from . import fplin
from .errors import InputError, InternalError, ResourceError

DEFAULT_DEGREE = 3
DEFAULT_CHAIN_CAP = 10**6
DEFAULT_MAX_ENTRIES = 4 * 10**7   # dense differential size budget


class ToyCategory:
    """A finite category given by a composition table, for small hand-made examples.

    ``morphisms``: list of (name, source, target); ``compose[(g, f)]`` = name of g o f.
    Identities are named ``id_<object>`` and added automatically.
    """

    def __init__(self, objects, morphisms, compose):
        self.objects = list(objects)
        self._mor = {name: (s, t) for name, s, t in morphisms}
        for x in self.objects:
            self._mor[f"id_{x}"] = (x, x)
        self._comp = dict(compose)
        known = set(self.objects)
        for name, (s, t) in self._mor.items():
            if s not in known or t not in known:
                raise InputError(f"morphism {name} has an endpoint outside the object list")
        for (g, f), h in self._comp.items():
            if self.target(f) != self.source(g) or (self.source(f), self.target(g)) != self._ends(h):
                raise InputError(f"composite {g} o {f} = {h} has the wrong endpoints")

    def _ends(self, f):
        try:
            return self._mor[f]
        except KeyError:
            raise InputError(f"unknown morphism {f!r}") from None

    def source(self, f):
        return self._ends(f)[0]

    def target(self, f):
        return self._ends(f)[1]

    def is_identity(self, f):
        return f.startswith("id_")

    def nonidentity_homs(self, x):
        return [f for f, (s, _) in self._mor.items() if s == x and not self.is_identity(f)]

    def compose(self, g, f):
        if self.target(f) != self.source(g):
            raise InputError("morphisms are not composable")
        if self.is_identity(f):
            return g
        if self.is_identity(g):
            return f
        try:
            return self._comp[(g, f)]
        except KeyError:
            raise InputError(f"composite {g} o {f} missing from the table") from None

    def key(self, f):
        return f


class OrbitCategoryView:
    """Adapter giving an orbitcat.OrbitCategory the ToyCategory interface."""

    def __init__(self, cat):
        self.cat = cat
        self.objects = list(cat.objects)

    def source(self, f):
        return f.source

    def target(self, f):
        return f.target

    def is_identity(self, f):
        return f.is_identity()

    def nonidentity_homs(self, x):
        return self.cat.nonidentity_homs(x)

    def compose(self, g, f):
        return self.cat.compose(g, f)

    def key(self, f):
        return f.key


@dataclass
class FunctorData:
    """A contravariant functor: ``dim(x)`` and ``matrix(f)``, a dim(source) x dim(target) matrix."""

    p: int
    dim: callable
    matrix: callable


@dataclass
class CochainComplex:
    p: int
    chains: list                      # chains[n]: list of tuples of morphisms (degree 0: (object,))
    offsets: list                     # offsets[n][i]: first coordinate of chain i
    dims: list                        # dims[n] = dim C^n
    differentials: list = field(default_factory=list)   # d[n]: C^n -> C^{n+1}


def _obj_key(cat, x):
    return getattr(x, "mask", x)


def chain_counts(cat, F: FunctorData, n: int) -> list[int]:
    """Normalized chains of degree 0..n with nonzero value at the source."""
    objs = cat.objects
    idx = {_obj_key(cat, x): i for i, x in enumerate(objs)}
    m = len(objs)
    A = np.zeros((m, m), dtype=object)
    for i, x in enumerate(objs):
        for f in cat.nonidentity_homs(x):
            A[i, idx[_obj_key(cat, cat.target(f))]] += 1
    live = np.array([1 if F.dim(x) else 0 for x in objs], dtype=object)
    v = np.ones(m, dtype=object)
    counts = [int((live * v).sum())]
    for _ in range(n):
        v = A @ v
        counts.append(int((live * v).sum()))
    return counts


def _enumerate(cat, F, n, cap):
    counts = chain_counts(cat, F, n)
    if max(counts) > cap:
        raise ResourceError(f"chain counts {counts} exceed the cap {cap}", bound=cap, counts={"per_degree": counts})
    out = [[(x,) for x in cat.objects if F.dim(x)]]
    outgoing = {_obj_key(cat, x): cat.nonidentity_homs(x) for x in cat.objects}
    prev = [(f,) for x in cat.objects if F.dim(x) for f in outgoing[_obj_key(cat, x)]]
    if n >= 1:
        out.append(prev)
    for _ in range(2, n + 1):
        cur = []
        for c in prev:
            for f in outgoing[_obj_key(cat, cat.target(c[-1]))]:
                cur.append(c + (f,))
        out.append(cur)
        prev = cur
    return out, counts


def build_complex(cat, F: FunctorData, N: int = DEFAULT_DEGREE, cap: int = DEFAULT_CHAIN_CAP,
                  check: bool = True, max_entries: int = DEFAULT_MAX_ENTRIES) -> CochainComplex:
    """Cochains in degrees 0..N and the differentials d^0..d^{N-1}."""
    p = F.p
    chains, counts = _enumerate(cat, F, N, cap)
    key = lambda c: tuple(cat.key(f) for f in c)
    src = lambda n, c: c[0] if n == 0 else cat.source(c[0])
    offsets, dims, index = [], [], []
    for n, cs in enumerate(chains):
        off, ix, pos = [], {}, 0
        for i, c in enumerate(cs):
            off.append(pos)
            ix[_obj_key(cat, c[0]) if n == 0 else key(c)] = i
            pos += F.dim(src(n, c))
        offsets.append(off)
        dims.append(pos)
        index.append(ix)
    for n in range(N):
        if dims[n + 1] * dims[n] > max_entries:
            raise ResourceError(f"differential d^{n} would be {dims[n + 1]} x {dims[n]}, over the budget {max_entries}",
                                bound=max_entries, counts={"per_degree": counts, "cochain_dims": dims})
    cx = CochainComplex(p, chains, offsets, dims)
    mat_cache: dict = {}

    def M(f):
        k = cat.key(f)
        A = mat_cache.get(k)
        if A is None:
            A = np.asarray(F.matrix(f), dtype=np.int64) % p
            if A.shape != (F.dim(cat.source(f)), F.dim(cat.target(f))):
                raise InputError("functor matrix has the wrong shape")
            mat_cache[k] = A
        return A

    for n in range(N):
        D = np.zeros((dims[n + 1], dims[n]), dtype=np.int64)
        for r, c in enumerate(chains[n + 1]):
            x0 = cat.source(c[0])
            row = offsets[n + 1][r]
            h = F.dim(x0)

            def add(face, coeff, mat=None):
                if n == 0:
                    j = index[0].get(_obj_key(cat, face))
                else:
                    j = index[n].get(key(face))
                if j is None:
                    return  # face starts at a zero value
                c0 = offsets[n][j]
                w = F.dim(face if n == 0 else cat.source(face[0]))
                block = (coeff * (mat if mat is not None else np.eye(h, w, dtype=np.int64))) % p
                D[row:row + h, c0:c0 + w] = (D[row:row + h, c0:c0 + w] + block) % p

            # first face: drop f1, apply M(f1)
            first = cat.target(c[0]) if n == 0 else c[1:]
            add(first, 1, M(c[0]))
            # inner faces
            for i in range(1, n + 1):
                comp = cat.compose(c[i], c[i - 1])
                if cat.is_identity(comp):
                    continue
                add(c[:i - 1] + (comp,) + c[i + 1:], (-1) ** i)
            # last face: drop f_{n+1}
            last = x0 if n == 0 else c[:-1]
            add(last, (-1) ** (n + 1))
        cx.differentials.append(D)
    if check:
        for n in range(N - 1):
            if np.any(fplin.matmul(cx.differentials[n + 1], cx.differentials[n], p)):
                raise InternalError(f"d o d != 0 in degree {n}")
    return cx


def cohomology(cx: CochainComplex) -> dict:
    """dim lim^i for i < N, with a per-degree rank-nullity audit."""
    p = cx.p
    N = len(cx.differentials)
    ranks = [fplin.rank(D, p) if D.size else 0 for D in cx.differentials]
    degrees, audit = [], []
    for i in range(N):
        ker = cx.dims[i] - ranks[i]
        img = ranks[i - 1] if i else 0
        degrees.append({"i": i, "dim": ker - img})
        audit.append({"i": i, "cochains": cx.dims[i], "rank_d": ranks[i], "kernel": ker, "image_in": img})
    euler = sum((-1) ** i * d["dim"] for i, d in enumerate(degrees))
    expect = sum((-1) ** i * cx.dims[i] for i in range(N)) - (-1) ** (N - 1) * ranks[N - 1] if N else 0
    return {"degrees": degrees, "ranks": ranks, "audit": audit, "euler_ok": euler == expect}


def equalizer_lim0(cat, F: FunctorData) -> int:
    """dim of {(m_x) : M(f) m_y = m_x for every morphism f: x -> y}, via sympy over GF(p)."""
    p = F.p
    objs = [x for x in cat.objects]
    offs, pos = {}, 0
    for x in objs:
        offs[_obj_key(cat, x)] = pos
        pos += F.dim(x)
    if pos == 0:
        return 0
    rows = []
    for x in objs:
        hx = F.dim(x)
        if hx == 0:
            continue
        for f in cat.nonidentity_homs(x):
            y = cat.target(f)
            hy = F.dim(y)
            for a in range(hx):
                row = [0] * pos
                row[offs[_obj_key(cat, x)] + a] = -1
                if hy:
                    A = np.asarray(F.matrix(f), dtype=np.int64) % p
                    for b in range(hy):
                        row[offs[_obj_key(cat, y)] + b] += int(A[a, b])
                rows.append([v % p for v in row])
    if not rows:
        return pos
    K = GF(p)
    dm = DomainMatrix([[K(v) for v in r] for r in rows], (len(rows), pos), K)
    return pos - dm.rank()


def limits(cat, F: FunctorData, N: int = DEFAULT_DEGREE, cap: int = DEFAULT_CHAIN_CAP,
           max_entries: int = DEFAULT_MAX_ENTRIES) -> dict:
    """lim^i for i < N plus the independent lim^0; JSON-ready."""
    t0 = time.perf_counter()
    cx = build_complex(cat, F, N, cap, max_entries=max_entries)
    coh = cohomology(cx)
    eq = equalizer_lim0(cat, F)
    coh["lim0_equalizer"] = eq
    coh["lim0_match"] = eq == coh["degrees"][0]["dim"] if coh["degrees"] else eq == 0
    coh["chain_counts"] = [len(c) for c in cx.chains]
    coh["cochain_dims"] = cx.dims
    coh["seconds"] = round(time.perf_counter() - t0, 3)
    return coh


def sqv_functor_data(M) -> FunctorData:
    """The contravariant part of an S_{Q,V} functor on orbit-category objects."""
    return FunctorData(M.p, M.dim, M.contravariant)


def higher_limits(F, M, N: int = DEFAULT_DEGREE, collection=None, cap: int = DEFAULT_CHAIN_CAP,
                  skeletal: bool = True, max_entries: int = DEFAULT_MAX_ENTRIES) -> dict:
    """lim^i over the (skeletal) orbit category of the F-centric subgroups.

    Warns when some Res-then-Ind composite across a non-centric intersection
    is nonzero, since then the restricted functor need not be Mackey.
    """
    from .orbitcat import OrbitCategory
    from .sharp import composition, prepare_scan

    S = F.S
    lattice = collection if collection is not None else S.all_subgroups()
    setup = prepare_scan(F, lattice)
    warnings = []
    bad = sum(1 for P, R, _ in setup.pairs if np.any(composition(M, P, R)))
    if bad:
        warnings.append(f"{bad} composites across non-centric intersections are nonzero; "
                        "the centric restriction may fail to be a Mackey functor")
    cat = OrbitCategory(F, setup.centric, check=True)
    if skeletal:
        cat = cat.skeleton().category
    out = limits(OrbitCategoryView(cat), sqv_functor_data(M), N, cap, max_entries)
    out["objects"] = len(cat.objects)
    out["warnings"] = warnings
    out["Q"] = [list(S.exponents(x)) for x in M.Q.gens]
    out["V_dim"] = M.d
    return out
