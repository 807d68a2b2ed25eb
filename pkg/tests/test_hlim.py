import numpy as np
import pytest

from fusionsharp import fplin, hlim
from fusionsharp.errors import InputError, ResourceError
from fusionsharp.fusion import FusionSystem
from fusionsharp.hlim import FunctorData, ToyCategory
from fusionsharp.mackey import SqvFunctor, all_functors, simple_modules_for
from fusionsharp.orbitcat import OrbitCategory

from conftest import systems_for


def group_category(n):
    """The cyclic group C_n as a one-object category; a^k is named "a<k>"."""
    mors = [(f"a{k}", "x", "x") for k in range(1, n)]
    name = lambda k: "id_x" if k % n == 0 else f"a{k % n}"
    comp = {(name(j), name(k)): name(j + k) for j in range(1, n) for k in range(1, n)}
    return ToyCategory(["x"], mors, comp)


def cyclic_functor(n, p, rho):
    """Contravariant functor from a right action: a^k -> rho(-k)."""
    d = rho(0).shape[0]
    return FunctorData(p, lambda x: d, lambda f: rho(-int(f[1:])) % p)


def dims(res):
    return [d["dim"] for d in res["degrees"]]


# -- hand examples with known answers ---------------------------------------------------------


def test_identity_only_category():
    cat = ToyCategory(["x"], [], {})
    res = hlim.limits(cat, FunctorData(5, lambda x: 3, None), N=3)
    assert dims(res) == [3, 0, 0] and res["lim0_match"]


def test_c2_over_f3_is_acyclic():
    # |C_2| is prime to 3: only lim^0 survives, and the sign module has none
    cat = group_category(2)
    triv = cyclic_functor(2, 3, lambda k: np.eye(1, dtype=np.int64))
    sign = cyclic_functor(2, 3, lambda k: np.array([[(-1) ** (k % 2)]]))
    assert dims(hlim.limits(cat, triv, N=3)) == [1, 0, 0]
    assert dims(hlim.limits(cat, sign, N=3)) == [0, 0, 0]


def test_c3_over_f3_trivial_module():
    # H^i(C_3; F_3) = F_3 in every degree
    cat = group_category(3)
    triv = cyclic_functor(3, 3, lambda k: np.eye(1, dtype=np.int64))
    res = hlim.limits(cat, triv, N=4)
    assert dims(res) == [1, 1, 1, 1]
    assert res["euler_ok"] and res["lim0_match"]


def test_c3_over_f3_free_module():
    cat = group_category(3)
    reg = fplin.regular_rep(fplin.cyclic_group(3), 3)
    free = cyclic_functor(3, 3, lambda k: reg.matrix(k % 3))
    assert dims(hlim.limits(cat, free, N=4)) == [1, 0, 0, 0]


def test_arrow_and_parallel_pair():
    one = lambda f: np.eye(1, dtype=np.int64)
    arrow = ToyCategory(["x", "y"], [("f", "x", "y")], {})
    assert dims(hlim.limits(arrow, FunctorData(3, lambda x: 1, one), N=3)) == [1, 0, 0]
    zero_map = FunctorData(3, lambda x: 1, lambda f: np.zeros((1, 1), dtype=np.int64))
    assert dims(hlim.limits(arrow, zero_map, N=3)) == [1, 0, 0]
    # two parallel arrows: the nerve is a circle
    pair = ToyCategory(["x", "y"], [("f", "x", "y"), ("g", "x", "y")], {})
    assert dims(hlim.limits(pair, FunctorData(3, lambda x: 1, one), N=3)) == [1, 1, 0]


def test_zero_functor():
    cat = group_category(3)
    res = hlim.limits(cat, FunctorData(3, lambda x: 0, None), N=3)
    assert dims(res) == [0, 0, 0] and res["cochain_dims"] == [0, 0, 0, 0]
    assert res["lim0_equalizer"] == 0


def test_bad_inputs():
    cat = group_category(3)
    wrong = FunctorData(3, lambda x: 2, lambda f: np.eye(1, dtype=np.int64))
    with pytest.raises(InputError):
        hlim.build_complex(cat, wrong, N=2)
    with pytest.raises(InputError):
        cat.compose("a1", "missing")
    with pytest.raises(InputError):
        ToyCategory(["x"], [("f", "x", "y")], {})
    with pytest.raises(InputError):
        ToyCategory(["x", "y"], [("f", "x", "y"), ("g", "y", "x")], {("g", "f"): "f"})
    with pytest.raises(ResourceError):
        hlim.build_complex(cat, cyclic_functor(3, 3, lambda k: np.eye(1, dtype=np.int64)), N=3, cap=2)
    with pytest.raises(ResourceError):
        hlim.build_complex(cat, cyclic_functor(3, 3, lambda k: np.eye(1, dtype=np.int64)), N=3, max_entries=3)


def test_d_squared_zero_on_orbit_category():
    S, systems = systems_for("extraspecial_plus")
    F = systems[2]
    X = [H for H in S.all_subgroups() if F.is_centric(H)]
    C = hlim.OrbitCategoryView(OrbitCategory(F, X).skeleton().category)
    for Q, _, M in all_functors(F, X):
        cx = hlim.build_complex(C, hlim.sqv_functor_data(M), N=3, check=False)
        for n in range(2):
            assert not np.any(fplin.matmul(cx.differentials[n + 1], cx.differentials[n], 3))


# -- S_{Q,V} over centric orbit categories -----------------------------------------------------


def test_noncentric_q_gives_empty_complex(es3):
    F = FusionSystem.inner(es3)
    Z = es3.center()
    M = SqvFunctor(F, Z, simple_modules_for(F, Z)[0])
    res = hlim.higher_limits(F, M, N=3)
    assert res["cochain_dims"] == [0, 0, 0, 0] and dims(res) == [0, 0, 0]
    assert res["warnings"] == []


def test_q_equal_s_control():
    S, systems = systems_for("elementary_abelian(2)")
    F = systems[1]   # Out_F(S) = C_2 x C_2, prime to 3
    for V in simple_modules_for(F, S.whole):
        res = hlim.higher_limits(F, SqvFunctor(F, S.whole, V), N=3)
        assert dims(res) == ([1, 0, 0] if V.is_trivial() else [0, 0, 0])
        assert res["lim0_match"]


def test_centric_q_inner_extraspecial(es3):
    F = FusionSystem.inner(es3)
    A = next(H for H in es3.all_subgroups(order_filter=9))
    [V] = simple_modules_for(F, A)
    res = hlim.higher_limits(F, SqvFunctor(F, A, V), N=3)
    assert dims(res) == [0, 0, 0]
    assert res["chain_counts"] == [1, 3, 6, 12]


def test_skeleton_does_not_change_limits():
    S, systems = systems_for("extraspecial_plus")
    F = systems[2]   # holomorph: small automizers keep the full category cheap
    X = [H for H in S.all_subgroups() if F.is_centric(H)]
    for Q, _, M in all_functors(F, X):
        a = hlim.higher_limits(F, M, N=2, skeletal=True)
        b = hlim.higher_limits(F, M, N=2, skeletal=False)
        assert dims(a) == dims(b)
        assert a["objects"] <= b["objects"]
