"""Exact linear algebra over F_p and small group representations.

Matrices are ``numpy`` int64 arrays with entries in ``[0, p)``; maps act on
column vectors.  Subspaces are stored by a basis in reduced row-echelon form
(``FpSubspace.basis`` has the basis vectors as rows), so equality is a plain
array comparison and coordinates of a member vector are read off at the pivot
columns.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import sympy

from .errors import CertificateError, InputError, ResourceError


def _mod(A, p):
    return np.asarray(A, dtype=np.int64) % p


def rref(A, p: int):
    """Reduced row-echelon form of A over F_p; returns ``(R, pivots)``."""
    R = _mod(A, p).copy()
    if R.ndim != 2:
        raise InputError("rref expects a 2-d matrix")
    rows, cols = R.shape
    inv = _inverses(p)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = (R[r] * inv[R[r, c]]) % p
        col = R[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col)
        if nzr.size:
            R[nzr] = (R[nzr] - np.outer(col[nzr], R[r])) % p
        pivots.append(c)
        r += 1
    return R[:r], pivots


_INV_CACHE: dict[int, np.ndarray] = {}


def _inverses(p):
    t = _INV_CACHE.get(p)
    if t is None:
        t = np.zeros(p, dtype=np.int64)
        for a in range(1, p):
            t[a] = pow(a, p - 2, p)
        _INV_CACHE[p] = t
    return t


def rank(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def kernel(A, p: int) -> np.ndarray:
    """Basis of the right null space ``{x : A x = 0}`` as columns (RREF-canonical)."""
    A = _mod(A, p)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = rref(A, p)
    free = [c for c in range(cols) if c not in set(piv)]
    K = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        K[f, j] = 1
        for i, c in enumerate(piv):
            K[c, j] = (-R[i, f]) % p
    if K.shape[1]:
        K = rref(K.T, p)[0].T
    return K


def matmul(A, B, p: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[1] == 0 or A.shape[0] == 0 or B.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    if A.shape[1] * (p - 1) ** 2 < 2**52 and max(A.shape + B.shape) > 64:
        return (A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64) % p
    return (A @ B) % p


def inverse(A, p: int) -> np.ndarray:
    n = A.shape[0]
    R, piv = rref(np.hstack([_mod(A, p), np.eye(n, dtype=np.int64)]), p)
    if len(piv) < n or piv[n - 1] != n - 1:
        raise InputError("matrix is singular")
    return R[:n, n:]


@dataclass(frozen=True)
class FpSubspace:
    """Subspace of F_p^dim; ``basis`` rows form the RREF basis."""

    p: int
    dim_ambient: int
    basis: np.ndarray
    pivots: tuple

    @classmethod
    def span(cls, vectors, p: int, dim_ambient: int | None = None) -> "FpSubspace":
        """Span of the rows of ``vectors``."""
        V = np.asarray(vectors, dtype=np.int64)
        if dim_ambient is None:
            dim_ambient = V.shape[1]
        if V.size == 0:
            return cls.zero(p, dim_ambient)
        if V.shape[1] != dim_ambient:
            raise InputError("dimension mismatch in span")
        R, piv = rref(V, p)
        return cls(p, dim_ambient, R, tuple(piv))

    @classmethod
    def zero(cls, p, d):
        return cls(p, d, np.zeros((0, d), dtype=np.int64), ())

    @classmethod
    def full(cls, p, d):
        return cls(p, d, np.eye(d, dtype=np.int64), tuple(range(d)))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def columns(self) -> np.ndarray:
        """Basis as a ``dim_ambient x dim`` matrix of column vectors."""
        return self.basis.T

    def coords(self, v) -> np.ndarray:
        """Coordinates of column vector(s) v; raises if v is not in the subspace."""
        v = _mod(v, self.p)
        c = v[list(self.pivots)]
        back = matmul(self.columns, c.reshape(self.dim, -1), self.p) if self.dim else np.zeros_like(v)
        if not np.array_equal(back.reshape(v.shape), v):
            raise InputError("vector not in subspace")
        return c

    def contains(self, v) -> bool:
        try:
            self.coords(v)
            return True
        except InputError:
            return False

    def __add__(self, other: "FpSubspace") -> "FpSubspace":
        self._check(other)
        return FpSubspace.span(np.vstack([self.basis, other.basis]), self.p, self.dim_ambient)

    def __and__(self, other: "FpSubspace") -> "FpSubspace":
        """Intersection via the kernel of the stacked bases."""
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return FpSubspace.zero(self.p, self.dim_ambient)
        K = kernel(np.hstack([self.columns, (-other.columns) % self.p]), self.p)
        vecs = matmul(self.columns, K[: self.dim], self.p).T
        return FpSubspace.span(vecs, self.p, self.dim_ambient)

    def __le__(self, other):
        self._check(other)
        return all(other.contains(b) for b in self.basis)

    def __eq__(self, other):
        return (isinstance(other, FpSubspace) and self.p == other.p and self.dim_ambient == other.dim_ambient
                and np.array_equal(self.basis, other.basis))

    def __hash__(self):
        return hash((self.p, self.dim_ambient, self.basis.tobytes()))

    def _check(self, other):
        if self.p != other.p or self.dim_ambient != other.dim_ambient:
            raise InputError("subspaces live in different spaces")


def image(A, p: int) -> FpSubspace:
    """Column space of A."""
    A = _mod(A, p)
    return FpSubspace.span(A.T, p, A.shape[0])


def kernel_space(A, p: int) -> FpSubspace:
    A = _mod(A, p)
    K = kernel(A, p)
    return FpSubspace.span(K.T, p, A.shape[1])


def trace_map(action, p: int) -> np.ndarray:
    """Sum of the given matrices (the relative trace over the listed coset representatives)."""
    action = list(action)
    if not action:
        raise InputError("trace_map needs at least one coset representative")
    d = action[0].shape
    out = np.zeros(d, dtype=np.int64)
    for M in action:
        if M.shape != d:
            raise InputError("trace_map matrices differ in shape")
        out += M
    return out % p


def norm_image(action, p: int) -> FpSubspace:
    return image(trace_map(action, p), p)


# -- finite groups by multiplication table ------------------------------------


class FiniteGroup:
    """A small group given by its multiplication table; element 0 is the identity."""

    def __init__(self, table, labels=None):
        T = np.asarray(table, dtype=np.int64)
        m = T.shape[0]
        if T.shape != (m, m) or not np.array_equal(T[0], np.arange(m)) or not np.array_equal(T[:, 0], np.arange(m)):
            raise InputError("multiplication table must be square with identity 0")
        self.table = T
        self.order = m
        self.labels = labels
        inv = np.argmax(T == 0, axis=1)
        if not np.all(T[np.arange(m), inv] == 0):
            raise InputError("multiplication table has no inverses")
        self.inverse = inv

    def mul(self, a, b):
        return int(self.table[a, b])

    @cached_property
    def generators(self) -> list[int]:
        """A small generating set, greedily chosen in element order."""
        gens = []
        H = {0}
        for g in range(self.order):
            if g not in H:
                gens.append(g)
                H = self.closure(gens)
            if len(H) == self.order:
                break
        return gens

    def closure(self, gens) -> set:
        H = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for h in frontier:
                for g in gens:
                    x = int(self.table[h, g])
                    if x not in H:
                        H.add(x)
                        nxt.append(x)
            frontier = nxt
        return H

    def element_order(self, g) -> int:
        o, x = 1, g
        while x != 0:
            x = int(self.table[x, g])
            o += 1
        return o

    def words(self) -> list[list[int]]:
        """Word in ``generators`` for each element (BFS, shortest first)."""
        gens = self.generators
        words = [None] * self.order
        words[0] = []
        frontier = [0]
        while frontier:
            nxt = []
            for h in frontier:
                for i, g in enumerate(gens):
                    x = int(self.table[h, g])
                    if words[x] is None:
                        words[x] = words[h] + [i]
                        nxt.append(x)
            frontier = nxt
        return words

    def is_group(self) -> bool:
        T = self.table
        m = self.order
        if not all(np.array_equal(np.sort(T[i]), np.arange(m)) for i in range(m)):
            return False
        left = T[T]        # left[x, y, z] = (xy)z
        right = T[:, T]    # right[x, y, z] = x(yz)
        return bool(np.array_equal(left, right))


def cyclic_group(m: int) -> FiniteGroup:
    a = np.arange(m)
    return FiniteGroup((a[:, None] + a[None, :]) % m)


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]])


# -- representations ----------------------------------------------------------


class FpGroupRep:
    """A representation of a FiniteGroup over F_p, one matrix per generator.

    Relations are verified on construction: the generator matrices are
    extended to all elements along BFS words and every table entry is checked.
    """

    def __init__(self, group: FiniteGroup, gen_matrices, p: int, check: bool = True, label: str = ""):
        self.group = group
        self.p = p
        gens = group.generators
        if len(gen_matrices) != len(gens):
            raise InputError(f"expected {len(gens)} generator matrices, got {len(gen_matrices)}")
        self.gen_matrices = [_mod(M, p) for M in gen_matrices]
        self.dim = self.gen_matrices[0].shape[0] if gens else (gen_matrices and gen_matrices[0].shape[0]) or 0
        self.label = label
        self._all = None
        if check:
            self.check()

    @classmethod
    def from_all(cls, group, all_matrices, p, check=True, label=""):
        rep = cls(group, [all_matrices[g] for g in group.generators], p, check=False, label=label)
        rep._all = [_mod(M, p) for M in all_matrices]
        if not group.generators:
            rep.dim = rep._all[0].shape[0]
        if check:
            rep.check()
        return rep

    @property
    def matrices(self) -> list[np.ndarray]:
        if self._all is None:
            G = self.group
            d = self.dim
            mats = [None] * G.order
            mats[0] = np.eye(d, dtype=np.int64)
            gens = G.generators
            frontier = [0]
            while frontier:
                nxt = []
                for h in frontier:
                    for i, g in enumerate(gens):
                        x = int(G.table[h, g])
                        if mats[x] is None:
                            mats[x] = matmul(mats[h], self.gen_matrices[i], self.p)
                            nxt.append(x)
                frontier = nxt
            self._all = mats
        return self._all

    def matrix(self, g: int) -> np.ndarray:
        return self.matrices[g]

    def check(self):
        G = self.group
        mats = self.matrices
        for M in self.gen_matrices:
            if M.shape != (self.dim, self.dim):
                raise InputError("generator matrices have inconsistent shapes")
        for x in range(G.order):
            for i, g in enumerate(G.generators):
                if not np.array_equal(matmul(mats[x], self.gen_matrices[i], self.p), mats[int(G.table[x, g])]):
                    raise InputError(f"relation violated: rho({x}) rho({g}) != rho({int(G.table[x, g])})")

    def fixed_space(self) -> FpSubspace:
        d = self.dim
        if d == 0 or not self.gen_matrices:
            return FpSubspace.full(self.p, d)
        eye = np.eye(d, dtype=np.int64)
        return kernel_space(np.vstack([(M - eye) % self.p for M in self.gen_matrices]), self.p)

    def is_trivial(self) -> bool:
        return all(np.array_equal(M, np.eye(self.dim, dtype=np.int64)) for M in self.gen_matrices)

    def __repr__(self):
        return f"<FpGroupRep dim {self.dim} over F_{self.p} of group order {self.group.order}{' ' + self.label if self.label else ''}>"


def regular_rep(group: FiniteGroup, p: int) -> FpGroupRep:
    """Left regular representation: rho(g) e_h = e_{gh}."""
    m = group.order
    mats = []
    for g in range(m):
        M = np.zeros((m, m), dtype=np.int64)
        M[group.table[g], np.arange(m)] = 1
        mats.append(M)
    return FpGroupRep.from_all(group, mats, p, check=False, label="regular")


def rep_from_action(group: FiniteGroup, action, p: int, check: bool = True) -> FpGroupRep:
    """Representation from a permutation action (``action[g]`` a list of point images)
    or a matrix action (``action[g]`` a square matrix), one entry per group element."""
    mats = []
    for a in action:
        a = np.asarray(a)
        if a.ndim == 1:
            k = a.size
            M = np.zeros((k, k), dtype=np.int64)
            M[a, np.arange(k)] = 1
        else:
            M = a
        mats.append(M)
    return FpGroupRep.from_all(group, mats, p, check=check)


def trivial_rep(group: FiniteGroup, p: int) -> FpGroupRep:
    return FpGroupRep.from_all(group, [np.eye(1, dtype=np.int64)] * group.order, p, check=False, label="trivial")


def hom_space_dim(U: FpGroupRep, W: FpGroupRep) -> int:
    """dim Hom_G(U, W), solving X rho_U(g) = rho_W(g) X on generators."""
    p = U.p
    a, b = U.dim, W.dim
    if a == 0 or b == 0:
        return 0
    rows = []
    # vec(X) column-major: X[i, j] -> index j * b + i
    for MU, MW in zip(U.gen_matrices, W.gen_matrices):
        # X MU - MW X = 0  ->  (MU^T kron I - I kron MW) vec(X) = 0
        rows.append((np.kron(MU.T, np.eye(b, dtype=np.int64)) - np.kron(np.eye(a, dtype=np.int64), MW)) % p)
    if not rows:
        return a * b
    return a * b - rank(np.vstack(rows), p)


def is_isomorphic_simple(U: FpGroupRep, W: FpGroupRep, sample=None) -> bool:
    """Isomorphism test for simple modules: cheap invariants, then Hom != 0 (Schur)."""
    if U.dim != W.dim or U.group is not W.group:
        return False
    p = U.p
    for g in sample or range(U.group.order):
        if rank((U.matrix(g) - np.eye(U.dim, dtype=np.int64)) % p, p) != rank(
                (W.matrix(g) - np.eye(W.dim, dtype=np.int64)) % p, p):
            return False
    return hom_space_dim(U, W) > 0


# -- chopping ---------------------------------------------------------------------


def spin(vectors, gens, p) -> FpSubspace:
    """Smallest subspace containing the rows of ``vectors`` and stable under the
    column action of ``gens`` (v -> M v)."""
    d = gens[0].shape[0] if gens else np.asarray(vectors).shape[1]
    W = FpSubspace.span(vectors, p, d)
    frontier = list(W.basis)
    while frontier:
        new = []
        for v in frontier:
            for M in gens:
                w = matmul(M, v.reshape(-1, 1), p).ravel()
                if not W.contains(w):
                    W = FpSubspace.span(np.vstack([W.basis, w]), p, d)
                    new.append(w)
        frontier = new
        if W.dim == d:
            break
    return W


def _sub_and_quotient(rep: FpGroupRep, W: FpSubspace):
    """Actions on the invariant subspace W and on V / W."""
    p, d = rep.p, rep.dim
    B = W.columns  # d x k
    k = W.dim
    # complement basis: standard vectors at non-pivot columns
    comp = [c for c in range(d) if c not in set(W.pivots)]
    C = np.zeros((d, len(comp)), dtype=np.int64)
    C[comp, np.arange(len(comp))] = 1
    full = np.hstack([B, C])
    full_inv = inverse(full, p)
    subs, quots = [], []
    for M in rep.gen_matrices:
        X = matmul(full_inv, matmul(M, full, p), p)
        if np.any(X[k:, :k]):
            raise CertificateError("spun subspace is not invariant")
        subs.append(X[:k, :k])
        quots.append(X[k:, k:])
    return subs, quots


def _charpoly(M, p):
    """Characteristic polynomial of M over F_p (sympy Poly)."""
    x = sympy.Symbol("x")
    n = M.shape[0]
    # Krylov blocks: the product of relative minimal polynomials is the char poly.
    basis = FpSubspace.zero(p, n)
    poly = sympy.Poly(1, x, modulus=p)
    for e in range(n):
        if basis.dim == n:
            break
        v = np.zeros(n, dtype=np.int64)
        v[e] = 1
        if basis.contains(v):
            continue
        chain = [v]
        while True:
            w = matmul(M, chain[-1].reshape(-1, 1), p).ravel()
            stack = np.vstack([basis.basis] + [np.array(chain)]) if basis.dim else np.array(chain)
            # express w modulo basis + chain
            A = np.vstack([stack, w]).T
            K = kernel(A, p)
            dep = None
            for j in range(K.shape[1]):
                if K[-1, j]:
                    dep = K[:, j]
                    break
            if dep is None:
                chain.append(w)
                continue
            c = (dep * _inverses(p)[dep[-1]]) % p  # normalize coefficient of w to 1
            coeffs = c[basis.dim:basis.dim + len(chain)]
            # w + sum coeffs_i M^i v in span(basis) => x^m + sum coeffs_i x^i
            rel = sympy.Poly([1] + [int(a) for a in coeffs[::-1]], x, modulus=p)
            poly = poly * rel
            basis = FpSubspace.span(np.vstack([basis.basis] + chain) if basis.dim else np.array(chain), p, n)
            break
    return poly


def _poly_eval(f, M, p):
    n = M.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for c in f.all_coeffs():
        out = (matmul(out, M, p) + int(c) % p * np.eye(n, dtype=np.int64)) % p
    return out


@dataclass
class ChopResult:
    """Composition factors with multiplicities (pairwise non-isomorphic simples)."""

    simples: list
    multiplicities: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.simples)

    def __len__(self):
        return len(self.simples)


def _split_or_certify(rep: FpGroupRep, rng: random.Random, retries: int):
    """Return an invariant proper subspace, or None when rep is certified irreducible."""
    p, d = rep.p, rep.dim
    if d <= 1:
        return None
    mats = rep.matrices
    gens = rep.gen_matrices
    gensT = [M.T.copy() for M in gens]
    G = rep.group
    for _ in range(retries):
        A = np.zeros((d, d), dtype=np.int64)
        for _ in range(min(G.order, 4)):
            A = (A + rng.randrange(p) * mats[rng.randrange(G.order)]) % p
        A = (A + rng.randrange(1, p) * mats[rng.randrange(G.order)]) % p
        cp = _charpoly(A, p)
        _, factors = cp.factor_list()
        factors = sorted(factors, key=lambda fe: (fe[0].degree(), str(fe[0])))
        for f, _mult in factors:
            fA = _poly_eval(f, A, p)
            N = kernel(fA, p)
            if N.shape[1] == 0:
                continue
            v = N[:, 0]
            W = spin(v.reshape(1, -1), gens, p)
            if W.dim < d:
                return W
            NT = kernel(fA.T, p)
            wT = spin(NT[:, 0].reshape(1, -1), gensT, p)
            if wT.dim < d:
                # annihilator of an invariant subspace of the dual is invariant
                ann = kernel(wT.basis, p)
                return FpSubspace.span(ann.T, p, d)
            if N.shape[1] == f.degree():
                return None  # Norton's irreducibility certificate
    raise CertificateError(f"no irreducibility certificate after {retries} tries (dim {d})")


def chop_simples(rep: FpGroupRep, seed: int = 0, max_dim: int = 600, retries: int = 40) -> ChopResult:
    """Composition factors of ``rep`` up to isomorphism, each certified irreducible."""
    if rep.dim > max_dim:
        raise ResourceError(f"chop budget: dimension {rep.dim} > {max_dim}", bound=max_dim)
    rng = random.Random(seed)
    simples: list[FpGroupRep] = []
    mult: list[int] = []
    sample = list(range(min(rep.group.order, 12)))
    todo = [rep]
    while todo:
        M = todo.pop()
        if M.dim == 0:
            continue
        W = None
        if M.dim > 1:
            fix = M.fixed_space()
            if 0 < fix.dim < M.dim:
                W = fix
        if W is None:
            W = _split_or_certify(M, rng, retries)
        if W is None:
            for i, S in enumerate(simples):
                if is_isomorphic_simple(S, M, sample):
                    mult[i] += 1
                    break
            else:
                simples.append(M)
                mult.append(1)
            continue
        subs, quots = _sub_and_quotient(M, W)
        todo.append(FpGroupRep(M.group, quots, M.p, check=False))
        todo.append(FpGroupRep(M.group, subs, M.p, check=False))
    order = sorted(range(len(simples)), key=lambda i: (simples[i].dim, _rep_key(simples[i])))
    out = ChopResult([simples[i] for i in order], [mult[i] for i in order])
    for S in out.simples:
        S._all = None
        S.check()
    return out


def _rep_key(rep):
    return tuple(tuple(M.ravel()) for M in rep.gen_matrices)


_SIMPLE_CACHE: dict = {}


def _is_p_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def simple_modules(group: FiniteGroup, p: int, seed: int = 0, max_dim: int = 600,
                   use_shortcut: bool = True) -> list[FpGroupRep]:
    """All simple F_p G-modules, from chopping the regular module.

    For a p-group the trivial module is the only simple one and the chop is skipped.
    """
    if group.order == 1 or (use_shortcut and _is_p_power(group.order, p)):
        return [trivial_rep(group, p)]
    key = (group.table.tobytes(), group.order, p, seed, max_dim)
    out = _SIMPLE_CACHE.get(key)
    if out is None:
        out = chop_simples(regular_rep(group, p), seed=seed, max_dim=max_dim).simples
        _SIMPLE_CACHE[key] = out
    return list(out)
