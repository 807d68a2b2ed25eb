import numpy as np
import pytest

from fusionsharp.errors import InputError, ResourceError
from fusionsharp.fusion import FMorphism, FusionSystem
from fusionsharp.orbitcat import OrbitCategory, canonical

from conftest import mul_table, systems_for


def brute_orbit_homs(S, P, Q):
    """Inner orbit-category morphisms P -> Q as frozensets of image tuples (Inn(Q)-orbits)."""
    T = mul_table(S)
    inv = S.inverse(S.all)

    def conj(g, xs):
        return tuple(int(T[T[g, x], inv[g]]) for x in xs)

    maps = {conj(g, P.gens) for g in range(S.order)}
    maps = {m for m in maps if all(Q.member[x] for x in m)}
    return {frozenset(conj(int(q), m) for q in Q.elements) for m in maps}


def centric(F):
    return [H for H in F.S.all_subgroups() if F.is_centric(H)]


def test_single_object(ab9):
    F = FusionSystem.inner(ab9)
    C = OrbitCategory(F, [ab9.whole])
    assert C.hom(ab9.whole, ab9.whole) == [C.identity(ab9.whole)]
    assert C.chain_counts(3) == [1, 0, 0, 0]
    assert C.chains(2) == []


def test_center_to_s_has_one_morphism(es3):
    F = FusionSystem.inner(es3)
    Z = es3.center()
    C = OrbitCategory(F, [Z, es3.whole], check=False)
    assert len(C.hom(Z, es3.whole)) == 1
    assert C.hom(es3.whole, Z) == []


@pytest.mark.parametrize("name", ["extraspecial_plus", "wreath_cp_cp"])
def test_inner_homs_against_brute_force(name):
    S, systems = systems_for(name)
    F = systems[0]
    subs = centric(F)
    C = OrbitCategory(F, subs)
    for P in subs:
        for Q in subs:
            got = {frozenset(tuple(int(x) for x in r) for r in [f.images]) for f in C.hom(P, Q)}
            want = brute_orbit_homs(S, P, Q)
            # each canonical row lies in exactly one brute-force orbit, and orbits are hit once
            assert len(got) == len(want)
            assert all(any(next(iter(g)) in w for w in want) for g in got)


@pytest.mark.parametrize("name", ["extraspecial_plus", "wreath_cp_cp"])
def test_composition_well_defined_and_associative(name):
    S, systems = systems_for(name)
    for F in systems:
        C = OrbitCategory(F, centric(F))
        objs = C.objects
        rng = np.random.default_rng(0)
        for _ in range(30):
            P, Q, R = (objs[rng.integers(len(objs))] for _ in range(3))
            fs, gs = C.hom(P, Q), C.hom(Q, R)
            if not fs or not gs:
                continue
            f, g = fs[rng.integers(len(fs))], gs[rng.integers(len(gs))]
            assert C.check_composition(g, f)
            assert C.compose(C.identity(Q), f) == f == C.compose(f, C.identity(P))
            for h in C.hom(R, R)[:2]:
                assert C.compose(h, C.compose(g, f)) == C.compose(C.compose(h, g), f)


def test_canonical_is_orbit_minimum(es3):
    F = FusionSystem.inner(es3)
    P = es3.whole
    for r in F.hom_rows(P):
        c = canonical(FMorphism(P, P, r))
        assert c.is_identity()   # every inner automorphism of S is trivial in orb


@pytest.mark.parametrize("name,expected", [("elementary_abelian(2)", [1, 1]),
                                           ("extraspecial_plus", [5, 4]),
                                           ("wreath_cp_cp", None)])
def test_skeleton_counts(name, expected):
    S, systems = systems_for(name)
    for F in systems[:2]:
        C = OrbitCategory(F, centric(F))
        sk = C.skeleton()
        classes = F.f_classes(C.objects)
        assert len(sk.category.objects) == len(classes)
        for P in C.objects:
            R = sk.rep(P)
            assert F.is_f_conjugate(P, R) and F.is_fully_normalized(R)
            assert sk.retraction[P.mask].source is P
    if expected is not None:
        got = [len(OrbitCategory(F, centric(F)).skeleton().category.objects) for F in systems[:2]]
        assert got == expected


@pytest.mark.parametrize("name", ["extraspecial_plus", "wreath_cp_cp"])
def test_chain_enumeration_matches_counts(name):
    S, systems = systems_for(name)
    F = systems[-1]
    C = OrbitCategory(F, centric(F)).skeleton().category
    counts = C.chain_counts(3)
    for n in range(1, 4):
        ch = C.chains(n)
        assert len(ch) == counts[n]
        for c in ch:
            assert all(c[k].target is c[k + 1].source for k in range(n - 1))
            assert not any(f.is_identity() for f in c)


def test_chain_limits(es3):
    F = FusionSystem.inner(es3)
    C = OrbitCategory(F, centric(F))
    with pytest.raises(InputError):
        C.chains(9)
    with pytest.raises(ResourceError):
        C.chains(2, cap=1)


def test_closure_violations(es3):
    F = systems_for("extraspecial_plus")[1][1]   # SL_3(3): a diagonal element fuses two order-9 subgroups
    A = next(H for H in centric(F) if len(F.f_class(H)) == 2)
    with pytest.raises(InputError):
        OrbitCategory(F, [A, es3.whole])
    Fi = FusionSystem.inner(es3)
    with pytest.raises(InputError):
        OrbitCategory(Fi, [A], universe=es3.all_subgroups())


def test_compose_requires_matching_ends(es3):
    F = FusionSystem.inner(es3)
    objs = centric(F)
    C = OrbitCategory(F, objs)
    A = next(H for H in objs if H.order == 9)
    with pytest.raises(InputError):
        C.compose(C.identity(A), C.identity(es3.whole))
