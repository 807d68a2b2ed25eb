"""Finite p-groups given by power-commutator presentations.

Elements are encoded as integers: the exponent vector ``(a_1, ..., a_n)`` of the
normal form ``g_1^a_1 ... g_n^a_n`` read as a base-p number with ``a_1`` most
significant.  Multiplication uses tables ``x -> x * g_k^e`` built once by
collection, so every product is ``n`` table lookups and vectorizes over numpy
arrays.

Conventions: ``[a, b] = a^-1 b^-1 a b`` and ``c_g(x) = g x g^-1`` (left
conjugation, so ``conjugate_subgroup(H, g)`` is ``gHg^-1``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, InternalError, ResourceError

DEFAULT_MAX_ORDER = 5**6


def _expand(tail):
    """Letters of a tail ``[(gen, exp), ...]``."""
    out = []
    for g, e in tail:
        out.extend([g] * e)
    return out


class PcGroup:
    """A finite p-group from a consistent weighted pc presentation.

    ``powers[i]`` is the tail of ``g_i^p`` and ``commutators[(j, i)]`` (``i < j``)
    is the tail of ``[g_j, g_i]``; tails are lists of ``(generator, exponent)``
    pairs with 0-based generator indices strictly above the relation's own
    generators.  Missing commutators are trivial.
    """

    def __init__(self, p: int, powers, commutators=None, name: str | None = None,
                 max_order: int = DEFAULT_MAX_ORDER):
        if p < 3 or p % 2 == 0 or any(p % q == 0 for q in range(3, int(p**0.5) + 1, 2)):
            raise InputError(f"prime must be odd, got {p}")
        self.p = p
        self.n = n = len(powers)
        self.name = name or f"pc({p}^{n})"
        if p**n > max_order:
            raise ResourceError(f"group order {p}^{n} exceeds budget {max_order}", bound=max_order)
        self.powers = [self._check_tail(t, i, f"g{i + 1}^p") for i, t in enumerate(powers)]
        self.commutators = {}
        for (j, i), t in (commutators or {}).items():
            if not (0 <= i < j < n):
                raise InputError(f"commutator index pair ({j + 1}, {i + 1}) must satisfy i < j <= n")
            t = self._check_tail(t, j, f"[g{j + 1}, g{i + 1}]")
            if t:
                self.commutators[(j, i)] = t
        self.order = p**n
        self.weights = np.array([p ** (n - 1 - k) for k in range(n)], dtype=np.int64)
        idx = np.arange(self.order, dtype=np.int64)
        self.digits = ((idx[:, None] // self.weights[None, :]) % p).astype(np.int64)
        nz = self.digits != 0
        self.depth = np.where(nz.any(axis=1), nz.argmax(axis=1), n)
        self.lead = np.where(self.depth < n, self.digits[idx, np.minimum(self.depth, n - 1)], 0)
        self._build_tables()
        self._check_consistency()
        self._subgroups: dict[int, Subgroup] = {}
        self.all = idx

    # -- construction -------------------------------------------------------

    def _check_tail(self, tail, floor, what):
        out = []
        for item in tail:
            try:
                g, e = int(item[0]), int(item[1])
            except (TypeError, ValueError, IndexError):
                raise InputError(f"malformed tail entry {item!r} in {what}") from None
            if not (floor < g < self.n):
                raise InputError(f"tail of {what} uses g{g + 1}; only g{floor + 2}..g{self.n} allowed")
            e %= self.p
            if e:
                out.append((g, e))
        return tuple(out)

    def _build_tables(self):
        n, p, N = self.n, self.p, self.order
        rmul = [None] * n
        idx = np.arange(N, dtype=np.int64)
        for k in range(n - 1, -1, -1):
            w = self.weights[k]
            dk = self.digits[:, k]
            # prefix through g_k with a_k -> a_k + 1, suffix cleared
            y = ((idx // (w * p)) * p + (dk + 1) % p) * w
            over = dk == p - 1
            for g in _expand(self.powers[k]):
                y[over] = rmul[g][y[over]]
            # suffix w conjugated by g_k: product of (g_j [g_j, g_k])^{a_j}
            for j in range(k + 1, n):
                word = [j] + _expand(self.commutators.get((j, k), ()))
                dj = self.digits[:, j]
                for e in range(p - 1):
                    m = dj > e
                    if not m.any():
                        continue
                    sub = y[m]
                    for g in word:
                        sub = rmul[g][sub]
                    y[m] = sub
            rmul[k] = y
        for k, t in enumerate(rmul):
            if np.bincount(t, minlength=N).max() != 1:
                raise InputError(f"inconsistent presentation: right multiplication by g{k + 1} is not bijective")
        rpow = np.empty((n, p, N), dtype=np.int64)
        ripow = np.empty((n, p, N), dtype=np.int64)
        for k in range(n):
            inv = np.empty(N, dtype=np.int64)
            inv[rmul[k]] = idx
            rpow[k, 0] = idx
            ripow[k, 0] = idx
            for e in range(1, p):
                rpow[k, e] = rmul[k][rpow[k, e - 1]]
                ripow[k, e] = inv[ripow[k, e - 1]]
        self.rpow = rpow
        self.ripow = ripow
        r = np.zeros(N, dtype=np.int64)
        for k in range(n - 1, -1, -1):
            r = ripow[k, self.digits[:, k], r]
        self.inv = r

    def collect(self, word: Iterable[int], start: int = 0) -> int:
        """Normal form of ``start * g_{w1} * g_{w2} ...`` (0-based letters)."""
        x = start
        for g in word:
            if not (0 <= g < self.n):
                raise InputError(f"generator index {g} out of range for rank {self.n}")
            x = int(self.rpow[g, 1, x])
        return x

    def word_of(self, x: int) -> list[int]:
        return _expand((k, int(d)) for k, d in enumerate(self.digits[x]))

    def _check_consistency(self):
        n, p = self.n, self.p
        nf = lambda w: self.word_of(self.collect(w))
        tails = [_expand(t) for t in self.powers]
        fails = []
        for i in range(n):
            if self.collect([i] + tails[i]) != self.collect(tails[i] + [i]):
                fails.append(f"g{i + 1} g{i + 1}^p")
        for i in range(n):
            for j in range(i + 1, n):
                if self.collect(tails[j] + [i]) != self.collect([j] * (p - 1) + nf([j, i])):
                    fails.append(f"g{j + 1}^p g{i + 1}")
                if self.collect([j] + tails[i]) != self.collect(nf([j] + [i] * (p - 1)) + [i]):
                    fails.append(f"g{j + 1} g{i + 1}^p")
                for k in range(j + 1, n):
                    if self.collect([k, j, i]) != self.collect([k] + nf([j, i])):
                        fails.append(f"g{k + 1} g{j + 1} g{i + 1}")
        if fails:
            raise InputError("inconsistent presentation; failing overlaps: " + ", ".join(fails[:8]))

    # -- I/O ------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "prime": self.p,
            "rank": self.n,
            "powers": [[[g + 1, e] for g, e in t] for t in self.powers],
            "commutators": [[i + 1, j + 1, [[g + 1, e] for g, e in t]]
                            for (j, i), t in sorted(self.commutators.items(), key=lambda kv: (kv[0][1], kv[0][0]))],
        }

    @classmethod
    def from_json(cls, data, name=None, max_order=DEFAULT_MAX_ORDER) -> "PcGroup":
        """Parse ``{prime, rank, powers, commutators}`` with 1-based generator indices."""
        if isinstance(data, str):
            data = json.loads(data)
        try:
            p, n = int(data["prime"]), int(data["rank"])
            powers = data.get("powers") or [[] for _ in range(n)]
            if len(powers) != n:
                raise InputError(f"expected {n} power relations, got {len(powers)}")
            pw = [[(g - 1, e) for g, e in t] for t in powers]
            comms = {}
            for i, j, t in data.get("commutators", []):
                if not i < j:
                    raise InputError(f"commutator entry [{i}, {j}, ...] needs i < j")
                comms[(j - 1, i - 1)] = [(g - 1, e) for g, e in t]
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed group JSON: {exc}") from None
        return cls(p, pw, comms, name=name, max_order=max_order)

    # -- element arithmetic -------------------------------------------------

    @property
    def identity(self) -> int:
        return 0

    def element(self, exponents: Sequence[int]) -> int:
        if len(exponents) != self.n:
            raise InputError(f"exponent vector {list(exponents)} has wrong length for rank {self.n}")
        return int(sum(int(e) % self.p * int(w) for e, w in zip(exponents, self.weights)))

    def exponents(self, x: int) -> tuple[int, ...]:
        return tuple(int(d) for d in self.digits[x])

    def gen(self, k: int) -> int:
        return int(self.weights[k])

    @property
    def generators(self) -> list[int]:
        return [self.gen(k) for k in range(self.n)]

    def mul(self, x, y):
        """Product ``x * y``; broadcasts over arrays."""
        scalar = np.ndim(x) == 0 and np.ndim(y) == 0
        X, Y = np.broadcast_arrays(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64))
        r = X.copy()
        d = self.digits[Y]
        for k in range(self.n):
            r = self.rpow[k, d[..., k], r]
        return int(r) if scalar else r

    def pow(self, x, e: int):
        e %= self.element_order(x) if np.ndim(x) == 0 else self.p**self.n
        r = np.zeros_like(np.asarray(x, dtype=np.int64))
        b = np.asarray(x, dtype=np.int64)
        while e:
            if e & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            e >>= 1
        return int(r) if np.ndim(x) == 0 else r

    def inverse(self, x):
        return int(self.inv[x]) if np.ndim(x) == 0 else self.inv[np.asarray(x)]

    def conj(self, x, g):
        """``g x g^-1``."""
        return self.mul(self.mul(g, x), self.inverse(g))

    def comm(self, x, y):
        """``[x, y] = x^-1 y^-1 x y``."""
        return self.mul(self.mul(self.inverse(x), self.inverse(y)), self.mul(x, y))

    def element_order(self, x: int) -> int:
        o, y = 1, int(x)
        while y != 0:
            y = self.mul(y, x)
            o += 1
        return o

    @cached_property
    def pth_powers(self) -> np.ndarray:
        r = self.all
        out = np.zeros(self.order, dtype=np.int64)
        for _ in range(self.p):
            out = self.mul(out, r)
        return out

    # -- subgroups ----------------------------------------------------------

    def _intern(self, elements: np.ndarray) -> "Subgroup":
        elements = np.unique(np.asarray(elements, dtype=np.int64))
        mask = _mask_of(elements, self.order)
        h = self._subgroups.get(mask)
        if h is None:
            h = Subgroup(self, elements, mask)
            self._subgroups[mask] = h
        return h

    def subgroup_from_mask(self, mask: int) -> "Subgroup":
        h = self._subgroups.get(mask)
        if h is None:
            h = self._intern(_elements_of(mask, self.order))
        return h

    def subgroup(self, gens: Iterable[int]) -> "Subgroup":
        """Subgroup generated by ``gens``."""
        gens = [int(g) for g in gens]
        cur = np.array([0], dtype=np.int64)
        member = np.zeros(self.order, dtype=bool)
        member[0] = True
        frontier = cur
        while frontier.size:
            new = np.unique(self.mul(frontier[:, None], np.array(gens, dtype=np.int64)[None, :]).ravel()) if gens else frontier[:0]
            new = new[~member[new]]
            member[new] = True
            frontier = new
        return self._intern(np.flatnonzero(member))

    @cached_property
    def whole(self) -> "Subgroup":
        return self._intern(self.all)

    @cached_property
    def trivial(self) -> "Subgroup":
        return self._intern(np.array([0]))

    def membership(self, H: "Subgroup") -> np.ndarray:
        return H.member

    def conjugate_subgroup(self, H: "Subgroup", g: int) -> "Subgroup":
        if g == 0:
            return H
        return self._intern(self.conj(H.elements, g))

    def _commutes_all(self, h: int) -> np.ndarray:
        """Boolean array over S: which elements commute with ``h``."""
        return self.mul(self.all, h) == self.mul(h, self.all)

    def element_centralizer(self, h: int) -> np.ndarray:
        """Sorted elements of C_S(h) (cached per element)."""
        c = self._ccache.get(h)
        if c is None:
            c = np.flatnonzero(self._commutes_all(h)).astype(np.int64)
            self._ccache[h] = c
        return c

    @cached_property
    def _ccache(self):
        return {}

    def centralizer(self, H: "Subgroup", within: "Subgroup | None" = None) -> "Subgroup":
        self._check_ambient(H)
        cand = within.elements if within is not None else self.all
        gens = sorted(H.gens, key=lambda h: self.element_centralizer(h).size)
        for k, h in enumerate(gens):
            if k == 0:
                c = self.element_centralizer(h)
                cand = c if within is None else c[within.member[c]]
            else:
                cand = cand[self.mul(cand, h) == self.mul(h, cand)]
        return self._intern(cand)

    def is_self_centralizing(self, H: "Subgroup") -> bool:
        """``C_S(H) <= H``."""
        gens = sorted(H.gens, key=lambda h: self.element_centralizer(h).size)
        if not gens:
            return self.order == 1
        cand = self.element_centralizer(gens[0])
        cand = cand[~H.member[cand]]
        for h in gens[1:]:
            if cand.size == 0:
                break
            cand = cand[self.mul(cand, h) == self.mul(h, cand)]
        return cand.size == 0

    def normalizer(self, H: "Subgroup", within: "Subgroup | None" = None) -> "Subgroup":
        self._check_ambient(H)
        m = self._normalizer_mask(H)
        if within is not None:
            m = m & within.member
        return self._intern(np.flatnonzero(m))

    def _normalizer_mask(self, H):
        m = H._nmask
        if m is None:
            m = np.ones(self.order, dtype=bool)
            for h in H.gens:
                m &= H.member[self.conj(h, self.all)]
            H._nmask = m
        return m

    def center(self, K: "Subgroup | None" = None) -> "Subgroup":
        K = K or self.whole
        return self.centralizer(K, within=K)

    def _check_ambient(self, H):
        if H.group is not self:
            raise InputError("subgroup belongs to a different ambient group")

    def is_normal(self, H: "Subgroup", K: "Subgroup | None" = None) -> bool:
        K = K or self.whole
        return all(H.member[self.conj(h, g)] for g in K.gens for h in H.gens)

    def commutator_subgroup(self, A: "Subgroup", B: "Subgroup") -> "Subgroup":
        """``[A, B]`` for A, B normalizing each other (normal closure of generator commutators)."""
        gens = [self.comm(a, b) for a in A.gens for b in B.gens]
        N = self.subgroup(gens)
        return self.normal_closure(N, self.subgroup(A.gens + B.gens))

    def normal_closure(self, H: "Subgroup", K: "Subgroup | None" = None) -> "Subgroup":
        K = K or self.whole
        cur = H
        while True:
            gens = set(cur.gens)
            for g in K.gens:
                gens.update(int(x) for x in self.conj(np.array(cur.gens), g))
            nxt = self.subgroup(sorted(gens))
            if nxt is cur:
                return cur
            cur = nxt

    def centralizer_mod(self, H: "Subgroup", N: "Subgroup") -> "Subgroup":
        """``{x in S : [x, h] in N for all h in H}`` (preimage of C_{S/N}(HN/N)), N normal."""
        m = np.ones(self.order, dtype=bool)
        for h in H.gens:
            m &= N.member[self.comm(self.all, h)]
        return self._intern(np.flatnonzero(m))

    def subgroup_class(self, H: "Subgroup", K: "Subgroup | None" = None) -> list["Subgroup"]:
        """K-conjugacy class of H, sorted by ``Subgroup.sort_key``."""
        K = K or self.whole
        seen = {H.mask: H}
        frontier = [H]
        while frontier:
            nxt = []
            for X in frontier:
                for g in K.gens:
                    Y = self.conjugate_subgroup(X, g)
                    if Y.mask not in seen:
                        seen[Y.mask] = Y
                        nxt.append(Y)
            frontier = nxt
        return sorted(seen.values(), key=Subgroup.sort_key)

    def conjugacy_classes(self, subgroups: Sequence["Subgroup"], K: "Subgroup | None" = None) -> list[list["Subgroup"]]:
        """Partition ``subgroups`` into K-classes; classes ordered by representative."""
        done = set()
        out = []
        for H in sorted(subgroups, key=Subgroup.sort_key):
            if H.mask in done:
                continue
            cls = self.subgroup_class(H, K)
            done.update(X.mask for X in cls)
            out.append(cls)
        return out

    def all_subgroups(self, order_filter=None, containing: "Subgroup | None" = None,
                      max_ambient: int | None = None) -> list["Subgroup"]:
        """Every subgroup (containing ``containing``), bottom-up by cyclic extension.

        Sorted by ``Subgroup.sort_key``; ``order_filter`` is an int or a set of ints.
        """
        if max_ambient is not None and self.order > max_ambient:
            raise ResourceError(f"subgroup enumeration budget: ambient order {self.order} > {max_ambient}",
                                bound=max_ambient)
        key = ("all", containing.mask if containing is not None else None)
        cached = self._lattice_cache.get(key)
        if cached is None:
            base = containing if containing is not None else self.trivial
            layer = [base]
            found = [base]
            ppow = self.pth_powers
            while layer:
                nxt = {}
                for H in layer:
                    cand = self._normalizer_mask(H) & ~H.member & H.member[ppow]
                    while True:
                        hit = np.flatnonzero(cand)
                        if hit.size == 0:
                            break
                        x = int(hit[0])
                        xp = [0]
                        for _ in range(self.p - 1):
                            xp.append(self.mul(xp[-1], x))
                        K = self._intern(self.mul(H.elements[:, None], np.array(xp)[None, :]).ravel())
                        cand[K.elements] = False
                        nxt[K.mask] = K
                layer = sorted(nxt.values(), key=Subgroup.sort_key)
                found.extend(layer)
            cached = sorted(found, key=Subgroup.sort_key)
            self._lattice_cache[key] = cached
        if order_filter is None:
            return list(cached)
        if isinstance(order_filter, int):
            order_filter = {order_filter}
        return [H for H in cached if H.order in order_filter]

    @cached_property
    def _lattice_cache(self):
        return {}

    def double_cosets(self, R: "Subgroup", P: "Subgroup", Q: "Subgroup") -> list[int]:
        """Least element of each double coset ``R x Q`` in P, ascending."""
        if not (R <= P and Q <= P):
            raise InputError("double cosets need R, Q <= P")
        left = np.ones(self.order, dtype=bool)
        left &= P.member
        reps = []
        for x in P.elements:
            if not left[x]:
                continue
            reps.append(int(x))
            rx = self.mul(R.elements, int(x))
            left[self.mul(rx[:, None], Q.elements[None, :]).ravel()] = False
        return reps

    def left_transversal(self, H: "Subgroup", K: "Subgroup") -> list[int]:
        """Least element of each left coset ``xH`` in K."""
        if not H <= K:
            raise InputError("transversal needs H <= K")
        left = K.member.copy()
        reps = []
        for x in K.elements:
            if left[x]:
                reps.append(int(x))
                left[self.mul(int(x), H.elements)] = False
        return reps

    # -- series -------------------------------------------------------------

    def lower_central_series(self) -> list["Subgroup"]:
        """``[gamma_1 = S, gamma_2, ...]`` down to the trivial group (the list index i-1 holds gamma_i)."""
        S = self.whole
        series = [S]
        while series[-1].order > 1:
            nxt = self.commutator_subgroup(series[-1], S)
            if nxt is series[-1]:
                break
            series.append(nxt)
        return series

    def upper_central_series(self) -> list["Subgroup"]:
        """``[Z_0 = 1, Z_1, ..., S]``."""
        series = [self.trivial]
        while series[-1] is not self.whole:
            nxt = self.centralizer_mod(self.whole, series[-1])
            if nxt is series[-1]:
                raise InternalError("upper central series stalled (group not nilpotent?)")
            series.append(nxt)
        return series

    def central_series(self) -> "MaxClassData":
        lower = self.lower_central_series()
        upper = self.upper_central_series()
        n = self.n
        cls = len(lower) - 1 if lower[-1].order == 1 else None
        maxcls = cls == n - 1 and n >= 2
        g1 = cz2 = None
        exceptional = None
        if maxcls and n >= 4:
            g1 = self.centralizer_mod(lower[1], lower[3])
            cz2 = self.centralizer(upper[2])
            exceptional = g1 is not cz2
        return MaxClassData(
            lower=lower, upper=upper, nilpotency_class=cls, maximal_class=maxcls,
            gamma1=g1, centralizer_z2=cz2, exceptional=exceptional,
        )

    def is_abelian(self, H: "Subgroup | None" = None) -> bool:
        H = H or self.whole
        g = H.gens
        return all(self.mul(a, b) == self.mul(b, a) for i, a in enumerate(g) for b in g[i + 1:])

    def frattini(self, H: "Subgroup | None" = None) -> "Subgroup":
        H = H or self.whole
        gens = [int(self.pth_powers[h]) for h in H.gens]
        gens += [self.comm(a, b) for a in H.gens for b in H.gens]
        return self.normal_closure(self.subgroup(gens), H)

    def is_extraspecial(self, H: "Subgroup | None" = None) -> bool:
        H = H or self.whole
        Z = self.center(H)
        if Z.order != self.p:
            return False
        D = self.normal_closure(self.subgroup([self.comm(a, b) for a in H.gens for b in H.gens]), H)
        return D is Z and self.frattini(H) is Z

    def __repr__(self):
        return f"<PcGroup {self.name} order {self.p}^{self.n}>"


def _mask_of(elements: np.ndarray, N: int) -> int:
    b = np.zeros(N, dtype=bool)
    b[elements] = True
    return int.from_bytes(np.packbits(b, bitorder="little").tobytes(), "little")


def _elements_of(mask: int, N: int) -> np.ndarray:
    raw = np.frombuffer(mask.to_bytes((N + 7) // 8, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little")[:N]).astype(np.int64)


class Subgroup:
    """A subgroup of a PcGroup, interned per ambient: equal subgroups are identical objects."""

    __slots__ = ("group", "elements", "mask", "order", "_gens", "_member", "_nmask", "_words",
                 "_sift_tabs", "__weakref__")

    def __init__(self, group: PcGroup, elements: np.ndarray, mask: int):
        self.group = group
        self.elements = elements
        self.mask = mask
        self.order = int(elements.size)
        self._gens = None
        self._member = None
        self._nmask = None
        self._words = None
        self._sift_tabs = None

    @property
    def member(self) -> np.ndarray:
        if self._member is None:
            m = np.zeros(self.group.order, dtype=bool)
            m[self.elements] = True
            self._member = m
        return self._member

    @property
    def gens(self) -> list[int]:
        """Canonical induced generating sequence: per occurring depth, the least
        element of that depth with leading exponent 1."""
        if self._gens is None:
            G = self.group
            e = self.elements
            d = G.depth[e]
            ok = G.lead[e] == 1
            gens = []
            for dep in np.unique(d[d < G.n]):
                gens.append(int(e[(d == dep) & ok][0]))
            self._gens = gens
        return self._gens

    @property
    def pivots(self) -> list[int]:
        return [int(self.group.depth[h]) for h in self.gens]

    def sort_key(self):
        return (self.order, tuple(self.gens))

    @property
    def log_order(self) -> int:
        return len(self.gens)

    def __contains__(self, x) -> bool:
        return bool(self.member[int(x)])

    def __le__(self, other: "Subgroup") -> bool:
        return (self.mask & other.mask) == self.mask

    def __lt__(self, other: "Subgroup") -> bool:
        return self.mask != other.mask and self <= other

    def __and__(self, other: "Subgroup") -> "Subgroup":
        return self.group.subgroup_from_mask(self.mask & other.mask)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.group is self.group and other.mask == self.mask

    def __hash__(self):
        return hash(self.mask)

    # word coordinates over the canonical generators
    @property
    def words(self) -> np.ndarray:
        """Elements listed as ``h_1^e1 ... h_k^ek`` in mixed-radix order of (e1, ..., ek)."""
        if self._words is None:
            self._words = product_table(self.group, self.gens)
        return self._words

    def sift(self, X) -> np.ndarray:
        """Word index (into ``words``) of each element of X; X must lie in the subgroup."""
        G = self.group
        if self._sift_tabs is None:
            tabs = []
            for h in self.gens:
                hinv = G.inverse(h)
                pw = [0]
                for _ in range(G.p - 1):
                    pw.append(G.mul(pw[-1], hinv))
                tabs.append((G.depth[h], np.array(pw, dtype=np.int64)))
            self._sift_tabs = tabs
        R = np.asarray(X, dtype=np.int64).copy()
        idx = np.zeros(R.shape, dtype=np.int64)
        for dep, pw in self._sift_tabs:
            e = G.digits[R, dep]
            idx = idx * G.p + e
            R = G.mul(pw[e], R)
        if np.any(R != 0):
            raise InputError("sift: element not in subgroup")
        return idx

    def __repr__(self):
        G = self.group
        return f"<Subgroup order {G.p}^{self.log_order} gens {[G.exponents(h) for h in self.gens]}>"


def product_table(G: PcGroup, images: Sequence[int]) -> np.ndarray:
    """All products ``y_1^e1 ... y_k^ek`` in mixed-radix order (e1 most significant)."""
    W = np.array([0], dtype=np.int64)
    for y in images:
        pw = [0]
        for _ in range(G.p - 1):
            pw.append(G.mul(pw[-1], int(y)))
        W = G.mul(W[:, None], np.array(pw, dtype=np.int64)[None, :]).ravel()
    return W


@dataclass
class MaxClassData:
    lower: list  # lower[i-1] = gamma_i(S), lower[0] = S
    upper: list  # upper[i] = Z_i(S), upper[0] = 1
    nilpotency_class: int | None
    maximal_class: bool
    gamma1: Subgroup | None
    centralizer_z2: Subgroup | None
    exceptional: bool | None

    def gamma(self, i: int) -> Subgroup:
        """gamma_i(S) for i >= 2 (gamma_1 is the maximal-class gamma_1, not S)."""
        if i == 1:
            return self.gamma1
        if i - 1 < len(self.lower):
            return self.lower[i - 1]
        return self.lower[-1]

    def z(self, i: int) -> Subgroup:
        return self.upper[min(i, len(self.upper) - 1)]

    def summary(self) -> dict:
        G = self.lower[0].group
        out = {
            "order": f"{G.p}^{G.n}",
            "nilpotency_class": self.nilpotency_class,
            "maximal_class": self.maximal_class,
            "lower_central_orders": [H.log_order for H in self.lower],
            "upper_central_orders": [H.log_order for H in self.upper],
        }
        if self.gamma1 is not None:
            out["gamma1_order"] = self.gamma1.log_order
            out["centralizer_z2_order"] = self.centralizer_z2.log_order
            out["gamma1_abelian"] = G.is_abelian(self.gamma1)
            out["gamma1_extraspecial"] = G.is_extraspecial(self.gamma1)
            out["gamma1_center_is_center"] = G.center(self.gamma1) is G.center()
            out["exceptional"] = self.exceptional
        return out
