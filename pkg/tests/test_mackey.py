import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fusionsharp import fplin
from fusionsharp.errors import InputError
from fusionsharp.fusion import FMorphism, FusionSystem
from fusionsharp.mackey import (SqvFunctor, all_functors, check_functoriality, check_natural_isomorphism,
                                simple_modules_for, verify_axioms)
from fusionsharp.orbitcat import OrbitCategory

from conftest import systems_for


def centric(F):
    return [H for H in F.S.all_subgroups() if F.is_centric(H)]


def eye(d, p):
    return np.eye(d, dtype=np.int64) % p


# -- twisting ------------------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["extraspecial_plus", "wreath_cp_cp"])
def test_twist_of_alpha_and_identity_is_trivial(name):
    S, systems = systems_for(name)
    F = systems[-1]
    for Q in S.all_subgroups(order_filter=9):
        V = simple_modules_for(F, Q)[0]
        M = SqvFunctor(F, Q, V)
        for L in M.members:
            assert M.twist_index(L, L, x=0) == 0
            assert M.twist_index(Q, L, theta=M.alpha[L.mask]) == M.twist_index(Q, Q, x=0) == 0


def test_twist_is_multiplicative():
    S, systems = systems_for("extraspecial_plus")
    F = systems[1]   # SL_3(3)
    table = None
    for Q in S.all_subgroups(order_filter=9):
        M = SqvFunctor(F, Q, simple_modules_for(F, Q)[0])
        table = M.aut.out_group.table
        for L in M.members:
            for Lp in M.members:
                for s in F.iso(L, Lp)[:4]:
                    for Lpp in M.members:
                        for t in F.iso(Lp, Lpp)[:4]:
                            ts = t.compose(s)
                            i = M.twist_index(L, Lpp, theta=ts)
                            assert i == table[M.twist_index(Lp, Lpp, theta=t), M.twist_index(L, Lp, theta=s)]
    assert table is not None


def test_twisted_rep_is_a_rep():
    S, systems = systems_for("extraspecial_plus")
    F = systems[1]
    for Q in S.all_subgroups(order_filter=9):
        for V in simple_modules_for(F, Q):
            M = SqvFunctor(F, Q, V)
            for L in M.members:
                W = M.twisted_rep(L)
                W.check()
                assert W.dim == V.dim


# -- values --------------------------------------------------------------------------------------


def test_value_at_center_in_inner_system(es3):
    F = FusionSystem.inner(es3)
    Z = es3.center()
    [V] = simple_modules_for(F, Z)
    M = SqvFunctor(F, Z, V)
    # tr over P/Z of the trivial module is |P : Z| = 0 mod 3 unless P = Z
    for P in es3.all_subgroups():
        assert M.dim(P) == (1 if P is Z else 0)


def test_value_for_q_equal_s():
    S, systems = systems_for("elementary_abelian(2)")
    F = systems[1]   # Sym3 x Sym3
    Vs = simple_modules_for(F, S.whole)
    assert sorted(V.dim for V in Vs) == [1, 1, 1, 1]
    for V in Vs:
        M = SqvFunctor(F, S.whole, V)
        assert M.dim(S.whole) == 1
        assert all(M.dim(P) == 0 for P in S.all_subgroups() if P is not S.whole)


def test_value_for_coordinate_line():
    S, systems = systems_for("elementary_abelian(2)")
    F = systems[1]
    L = next(H for H in S.all_subgroups(order_filter=3) if len(F.f_class(H)) == 1)
    for V in simple_modules_for(F, L):
        M = SqvFunctor(F, L, V)
        assert M.dim(L) == 1
        # S centralizes L, so the trace over S/L is multiplication by 3
        assert M.dim(S.whole) == 0


@pytest.mark.parametrize("name", ["extraspecial_plus", "wreath_cp_cp"])
def test_nonzero_summands_are_self_centralizing(name):
    S, systems = systems_for(name)
    for F in systems:
        for Q, _, M in all_functors(F, S.all_subgroups(order_filter=9)):
            for P in S.all_subgroups():
                for s in M.value(P).summands:
                    if s.dim:
                        assert S.centralizer(s.L, within=P) <= s.L


# -- structure maps ------------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["extraspecial_plus", "wreath_cp_cp"])
def test_identities(name):
    S, systems = systems_for(name)
    for F in systems:
        for Q, _, M in all_functors(F, centric(F))[:6]:
            for P in centric(F):
                d = M.dim(P)
                assert np.array_equal(M.res(P, P), eye(d, M.p))
                assert np.array_equal(M.ind(P, P), eye(d, M.p))
                ident = FMorphism(P, P, P.gens)
                assert np.array_equal(M.iso(ident), eye(d, M.p))


def test_res_and_ind_need_containment(es3):
    F = FusionSystem.inner(es3)
    M = all_functors(F, [es3.whole])[0][2]
    A = next(H for H in es3.all_subgroups(order_filter=9))
    B = next(H for H in es3.all_subgroups(order_filter=9) if H is not A)
    with pytest.raises(InputError):
        M.res(A, B)
    with pytest.raises(InputError):
        M.ind(B, A)


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_res_and_ind_are_transitive(seed):
    S, systems = systems_for("wreath_cp_cp")
    F = systems[1]
    fun = all_functors(F, S.all_subgroups(order_filter=27))
    rng = np.random.default_rng(seed)
    Q, _, M = fun[rng.integers(len(fun))]
    subs = S.all_subgroups()
    R = subs[rng.integers(len(subs))]
    mids = [H for H in subs if H <= R]
    P = mids[rng.integers(len(mids))]
    lows = [H for H in subs if H <= P]
    T = lows[rng.integers(len(lows))]
    p = M.p
    assert np.array_equal(fplin.matmul(M.res(T, P), M.res(P, R), p), M.res(T, R))
    assert np.array_equal(fplin.matmul(M.ind(P, R), M.ind(T, P), p), M.ind(T, R))


@pytest.mark.parametrize("name,which", [("extraspecial_plus", 1), ("extraspecial_plus", 2), ("wreath_cp_cp", 1)])
def test_functoriality_on_centric_orbit_category(name, which):
    S, systems = systems_for(name)
    F = systems[which]
    C = OrbitCategory(F, centric(F)).skeleton().category
    for Q, _, M in all_functors(F, centric(F)):
        res = check_functoriality(M, C, max_pairs=400)
        assert res["ok"], (Q, res)


# -- Mackey axioms ---------------------------------------------------------------------------


@pytest.mark.parametrize("reading", ["intersection_in_R", "intersection_in_Q"])
def test_axioms_small_systems(reading):
    S, systems = systems_for("elementary_abelian(2)")
    for F in systems:
        for Q, _, M in all_functors(F, S.all_subgroups()):
            res = verify_axioms(M, S.all_subgroups(), reading=reading)
            assert res["ok"] and res["triples"] == sum(
                1 for P in S.all_subgroups() for A in S.all_subgroups() if A <= P
                for B in S.all_subgroups() if B <= P)


def test_axioms_extraspecial_ambient():
    S, systems = systems_for("extraspecial_plus")
    F = systems[1]
    X = centric(F)
    for Q, _, M in all_functors(F, S.all_subgroups(order_filter=9))[:4]:
        res = verify_axioms(M, X)
        assert res["ok"] and res["iso_checked"] > 0


def test_unknown_reading(es3):
    F = FusionSystem.inner(es3)
    M = all_functors(F, [es3.whole])[0][2]
    with pytest.raises(InputError):
        verify_axioms(M, [es3.whole], reading="both")


# -- construction choices ------------------------------------------------------------------


def test_wrong_module_rejected(es3):
    S, systems = systems_for("extraspecial_plus")
    F = systems[1]
    A = next(H for H in centric(F) if H.order == 9 and F.automizer(H).out_order > 2)
    Z = S.center()
    with pytest.raises(InputError):
        SqvFunctor(F, Z, simple_modules_for(F, A)[0])
    M = SqvFunctor(F, A, simple_modules_for(F, A)[0])
    with pytest.raises(InputError):
        SqvFunctor(F, A, M.V, alphas={})


@pytest.mark.parametrize("which", [1, 2])
def test_other_alpha_gives_isomorphic_functor(which):
    S, systems = systems_for("extraspecial_plus")
    F = systems[which]
    X = centric(F)
    for Q in [H for H in X if H.order == 9 and F.automizer(H).out_order > 1]:
        A = F.automizer(Q)
        gamma = A.morphism(A.out_reps[-1])
        for V in simple_modules_for(F, Q):
            M1 = SqvFunctor(F, Q, V)
            M2 = SqvFunctor(F, Q, V, alphas={m: a.compose(gamma) for m, a in M1.alpha.items()})
            res = check_natural_isomorphism(M1, M2, X)
            assert res["ok"] and res["checked"] > 0
