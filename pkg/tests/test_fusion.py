import numpy as np
import pytest

from fusionsharp import corpus
from fusionsharp.errors import InputError
from fusionsharp.fplin import FiniteGroup
from fusionsharp.fusion import (FMorphism, FusionSystem, conjugation, inclusion, morphism_from_images,
                                p_subgroup_poset_disconnected, strongly_p_embedded)

from conftest import group, mul_table, systems_for
from test_fplin import sl2, sym3


def brute_ambient_homs(oracle, P):
    """Hom_G(P, S) image rows, by conjugating permutations directly."""
    S = oracle.S
    perms = oracle.sperms
    lookup = {perms[s].tobytes(): s for s in range(S.order)}
    rows = set()
    for g in oracle.G.elements:
        gi = np.argsort(g)
        ims = []
        for x in P.elements:
            c = g[perms[int(x)][gi]]
            ims.append(lookup.get(c.tobytes()))
        if None in ims:
            continue
        pos = {int(x): k for k, x in enumerate(P.elements)}
        rows.add(tuple(ims[pos[int(x)]] for x in P.gens))
    return rows


# -- morphisms ---------------------------------------------------------------------------------


def test_conjugation_and_inclusion(es3):
    Z = es3.center()
    f = conjugation(es3.whole, es3.gen(0))
    assert f.image() is es3.whole
    assert f.compose(f.inverse()).is_identity()
    i = inclusion(Z, es3.whole)
    assert i.image() is Z
    with pytest.raises(InputError):
        inclusion(es3.whole, Z)


def test_morphism_from_images_errors(es3):
    S = es3.whole
    a, b = es3.gen(0), es3.gen(1)
    # swapping g1 and g2 is an automorphism (inverts the centre)
    f = morphism_from_images(S, [a, b], [b, a])
    assert f.image() is S
    with pytest.raises(InputError):
        morphism_from_images(S, [a, b], [a])
    with pytest.raises(InputError):
        morphism_from_images(S, [a], [a])          # does not generate S
    with pytest.raises(InputError):
        morphism_from_images(S, [a, b], [a, a])    # not injective
    W = group("wreath_cp_cp", 3)
    x = next(int(g) for g in W.all if W.element_order(int(g)) == 3)
    y = next(int(g) for g in W.all if W.element_order(int(g)) == 9)
    with pytest.raises(InputError):
        # an element of order 3 cannot go to one of order 9
        morphism_from_images(W.subgroup([x]), [x], [y], target=W.whole)


def test_morphism_from_images_target(es3):
    Z = es3.center()
    with pytest.raises(InputError):
        morphism_from_images(es3.whole, [es3.gen(0), es3.gen(1)], [es3.gen(0), es3.gen(1)], target=Z)


# -- hom sets against brute force --------------------------------------------------------------


def test_inner_homs_brute_force(es3):
    F = FusionSystem.inner(es3)
    T = mul_table(es3)
    inv = es3.inverse(es3.all)
    for P in es3.all_subgroups():
        want = {tuple(int(T[T[g, x], inv[g]]) for x in P.gens) for g in range(27)}
        assert {tuple(int(x) for x in r) for r in F.hom_rows(P)} == want


@pytest.mark.parametrize("name", ["elementary_abelian(2)", "extraspecial_plus"])
def test_ambient_homs_brute_force(name):
    S, systems = systems_for(name)
    for F in systems[1:]:
        for P in S.all_subgroups():
            got = {tuple(int(x) for x in r) for r in F.hom_rows(P)}
            assert got == brute_ambient_homs(F.oracle, P)


def test_sym3_x_sym3_hom_counts(ab9):
    F = FusionSystem.from_ambient(corpus.sym3_x_sym3(ab9))
    assert len(F.automizer(ab9.whole).auts) == 4
    assert F.automizer(ab9.whole).out_group.order == 4
    # the two coordinate lines are F-classes of size one; the two diagonals fuse
    lines = ab9.all_subgroups(order_filter=3)
    sizes = sorted(len(F.f_class(L)) for L in lines)
    assert sizes == [1, 1, 2, 2]


def test_f_class_matches_g_conjugation():
    S, systems = systems_for("extraspecial_plus")
    F = systems[1]   # SL_3(3)
    o = F.oracle
    for P in S.all_subgroups():
        brute = set()
        for i in range(o.G.order):
            row = o.conj[i, P.elements]
            if np.all(row >= 0):
                brute.add(frozenset(int(x) for x in row))
        assert brute == {frozenset(int(x) for x in Y.elements) for Y in F.f_class(P)}


def test_iso_from_is_an_isomorphism(wr3):
    F = FusionSystem.inner(wr3)
    for Q in wr3.all_subgroups(order_filter=9):
        d = F.iso_from(Q)
        assert set(d) == {Y.mask for Y in F.f_class(Q)}
        for mask, f in d.items():
            assert f.source is Q and f.image().mask == mask and F.is_morphism(f)


# -- centric, essential, L(P, Q) ---------------------------------------------------------------


def test_centric_extraspecial(es3):
    F = FusionSystem.inner(es3)
    Z = es3.center()
    cen = {H for H in es3.all_subgroups() if F.is_centric(H)}
    assert cen == {H for H in es3.all_subgroups() if H.order >= 9 and Z <= H}
    assert len(cen) == 5


def test_centric_abelian_only_s(ab9):
    F = FusionSystem.inner(ab9)
    assert [H for H in ab9.all_subgroups() if F.is_centric(H)] == [ab9.whole]


def test_strongly_embedded_small_groups():
    s3 = sym3()
    assert strongly_p_embedded(s3, 3) is None
    assert strongly_p_embedded(s3, 2) is not None
    assert p_subgroup_poset_disconnected(s3, 2)
    assert strongly_p_embedded(sl2(3), 3) is not None
    assert p_subgroup_poset_disconnected(sl2(3), 3)
    c9 = FiniteGroup(np.add.outer(np.arange(9), np.arange(9)) % 9)
    assert strongly_p_embedded(c9, 3) is None and not p_subgroup_poset_disconnected(c9, 3)
    # C_3 x C_3 has a connected commuting graph
    t = np.array([[3 * ((a // 3 + b // 3) % 3) + (a + b) % 3 for b in range(9)] for a in range(9)])
    assert strongly_p_embedded(FiniteGroup(t), 3) is None


@pytest.mark.parametrize("name", ["extraspecial_plus", "wreath_cp_cp"])
def test_quillen_criterion_matches_brute_force(name):
    S, systems = systems_for(name)
    for F in systems:
        for H in S.all_subgroups():
            if H.order < 9 or not F.is_centric(H):
                continue
            A = F.automizer(H).out_group
            assert (strongly_p_embedded(A, 3) is not None) == p_subgroup_poset_disconnected(A, 3)


def test_essentials_known_cases():
    S, systems = systems_for("extraspecial_plus")
    assert systems[0].essentials(S.all_subgroups()) == []
    ess = systems[1].essentials(S.all_subgroups())   # SL_3(3): the two parabolic radicals
    assert sorted(E.order for E in ess) == [9, 9]
    W, wsys = systems_for("wreath_cp_cp")
    ess = wsys[1].essentials(W.all_subgroups())
    assert [E.order for E in ess] == [27]
    assert W.is_abelian(ess[0])


def test_l_set_examples(es3):
    F = FusionSystem.inner(es3)
    Z = es3.center()
    Q = next(H for H in es3.all_subgroups(order_filter=3) if H is not Z)
    assert F.l_set(es3.whole, Q) == []
    A = next(H for H in es3.all_subgroups(order_filter=9) if Q <= H)
    # Q is self-centralizing in no order-9 overgroup either
    assert F.l_set(A, Q) == []
    assert F.l_set(A, A) == [A]
    assert F.l_set(es3.whole, es3.whole) == [es3.whole]


# -- saturation and generators -----------------------------------------------------------------


@pytest.mark.parametrize("name", ["elementary_abelian(2)", "extraspecial_plus", "wreath_cp_cp"])
def test_inner_saturated(name):
    S, systems = systems_for(name)
    res = systems[0].check_saturation()
    assert res["saturated"] and res["checked"]


def test_ambient_saturation_is_automatic():
    S, systems = systems_for("extraspecial_plus")
    assert systems[1].check_saturation()["checked"] is False


def test_generated_system_without_inner_rejected_as_unsaturated(es3):
    swap = morphism_from_images(es3.whole, [es3.gen(0), es3.gen(1)], [es3.gen(1), es3.gen(0)])
    F = FusionSystem.from_generators(es3, [(es3.whole, [swap])])
    res = F.check_saturation()
    assert res["saturated"] is False


def test_generators_need_s(es3):
    Z = es3.center()
    with pytest.raises(InputError):
        FusionSystem.from_generators(es3, [(Z, [FMorphism(Z, Z, Z.gens)])])


def test_non_saturated_generated_system(ab9):
    # on C_3 x C_3, an automorphism of one line alone (inverting it) is not extendable
    L = ab9.subgroup([ab9.gen(0)])
    inv_L = morphism_from_images(L, [ab9.gen(0)], [ab9.inverse(ab9.gen(0))])
    ident = FMorphism(ab9.whole, ab9.whole, ab9.whole.gens)
    F = FusionSystem.from_generators(ab9, [(ab9.whole, [ident]), (L, [inv_L])])
    res = F.check_saturation()
    assert res["saturated"] is False and res["checked"]


@pytest.mark.parametrize("name", ["elementary_abelian(2)", "extraspecial_plus", "wreath_cp_cp"])
def test_oracle_and_generator_paths_agree(name):
    S, systems = systems_for(name)
    for F in systems[1:]:
        G = FusionSystem.from_generators(S, corpus.alperin_generators(F))
        for P in S.all_subgroups():
            a = {tuple(int(x) for x in r) for r in F.hom_rows(P)}
            b = {tuple(int(x) for x in r) for r in G.hom_rows(P)}
            assert a == b, P
