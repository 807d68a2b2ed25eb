"""Vanishing of Res-then-Ind composites across non-centric intersections,
with structural validators for the configurations such a composite could hit.

The scan iterates over
  Q: representatives of non-centric F-classes,
  V: simple F_p Out_F(Q)-modules,
  (P, R): ordered pairs of F-centric subgroups with T = P cap R not F-centric,
and computes Ind_T^R o Res_T^P.  When one of the three values S_{Q,V}(P),
S_{Q,V}(T), S_{Q,V}(R) is zero the composite is zero without any matrix
work; such tuples are counted, and only tuples with three nonzero values are
listed individually.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import fplin
from .errors import ResourceError
from .fusion import FusionSystem
from .mackey import SqvFunctor, simple_modules_for
from .pgroup import PcGroup, Subgroup


def composition(M: SqvFunctor, P: Subgroup, R: Subgroup) -> np.ndarray:
    """Ind_T^R o Res_T^P for T = P cap R."""
    T = P & R
    return fplin.matmul(M.ind(T, R), M.res(T, P), M.p)


def scan_lattice(S: PcGroup, full_limit: int | None = None) -> list[Subgroup]:
    """Subgroups the scan needs: all of them for small S, otherwise those containing Z(S).

    Any subgroup L carrying a nonzero summand at a centric P, or at an
    intersection of two centric subgroups, satisfies Z(S) <= C(L) <= L, so the
    restricted lattice loses nothing.
    """
    limit = full_limit if full_limit is not None else 3**5
    if S.order <= limit:
        return S.all_subgroups()
    return S.all_subgroups(containing=S.center())


def fmt(S: PcGroup, H: Subgroup) -> list:
    return [list(S.exponents(x)) for x in H.gens]


@dataclass
class ScanSetup:
    F: FusionSystem
    lattice: list
    centric: list
    q_reps: list          # non-centric F-class representatives (fully normalized)
    pairs: list           # (P, R, T), sorted by (|T|, T, P, R)
    subgroups: list       # distinct subgroups occurring in pairs
    index: np.ndarray     # pairs x 3 indices into subgroups (P, R, T)


def prepare_scan(F: FusionSystem, lattice=None) -> ScanSetup:
    S = F.S
    lattice = lattice if lattice is not None else scan_lattice(S)
    centric = [H for H in lattice if F.is_centric(H)]
    classes = F.f_classes([H for H in lattice if not F.is_centric(H)])
    q_reps = [F.fully_normalized_rep(c[0]) for c in classes]
    cmask = {H.mask for H in centric}
    pairs = []
    for i, P in enumerate(centric):
        for R in centric:
            if R is P:
                continue
            T = P & R
            if T.mask in cmask:
                continue
            pairs.append((P, R, T))
    pairs.sort(key=lambda t: (t[2].order, t[2].sort_key(), t[0].sort_key(), t[1].sort_key()))
    pos: dict = {}
    subgroups = []
    index = np.zeros((len(pairs), 3), dtype=np.int64)
    for k, trip in enumerate(pairs):
        for j, H in enumerate(trip):
            i = pos.get(H.mask)
            if i is None:
                i = pos[H.mask] = len(subgroups)
                subgroups.append(H)
            index[k, j] = i
    return ScanSetup(F, lattice, centric, q_reps, pairs, subgroups, index)


def annotate(F: FusionSystem, P, R, T, data=None) -> list[str]:
    """Structural facts about a tuple, named after the property they test."""
    S = F.S
    out = []
    if S.is_abelian(T):
        out.append("T_abelian")
    if S.is_normal(T, P) and S.is_normal(T, R):
        out.append("T_normal_in_P_and_R")
    if S.is_abelian(P) or S.is_abelian(R):
        out.append("P_or_R_abelian")
    if not S.center() <= T:
        out.append("Z(S)_not_in_T")
    if not (S.centralizer(P) <= T and S.centralizer(R) <= T):
        out.append("C_S(P)_or_C_S(R)_not_in_T")
    if T.order < S.p**2:
        out.append("T_order_below_p^2")
    if data is not None and data.maximal_class and S.n >= 4:
        gammas = [data.gamma(i) for i in range(2, S.n + 1)]
        if any(T is g for g in gammas):
            out.append("T_is_gamma_i")
        if T <= data.gamma1 or T <= data.centralizer_z2:
            out.append("T_in_gamma1_or_C_S(Z2)")
        if S.is_self_centralizing(T):
            out.append("T_S-centric")
    return out


def _task(F, setup, qi, Q, vi, V, sample, seed, explicit_cap):
    """One (Q, V): verdicts over the (sampled) pairs."""
    M = SqvFunctor(F, Q, V)
    pairs = setup.pairs
    sel = np.ones(len(pairs), dtype=bool)
    if sample is not None and sample < 1.0:
        rng = np.random.default_rng(np.random.SeedSequence([seed, qi, vi]))
        sel = rng.random(len(pairs)) < sample
    dims = np.array([M.dim(H) for H in setup.subgroups], dtype=np.int64)
    live = (dims[setup.index] > 0).all(axis=1) & sel if len(pairs) else sel
    vanishing = int(sel.sum() - live.sum())
    listed = []
    nonzero = 0
    for k in np.flatnonzero(live):
        P, R, T = pairs[k]
        C = composition(M, P, R)
        nz = bool(np.any(C))
        nonzero += nz
        listed.append((int(k), nz, C if nz else None))
        if len(listed) > explicit_cap:
            raise ResourceError("explicit tuple cap exceeded", bound=explicit_cap, partial=True)
    return {"qi": qi, "vi": vi, "V_dim": V.dim, "evaluated": int(sel.sum()), "vanishing": vanishing,
            "nonzero": nonzero, "listed": listed}


def scan(F: FusionSystem, lattice=None, sample: float | None = None, seed: int = 0, workers: int = 1,
         chop_seed: int = 0, chop_max_dim: int = 600, explicit_cap: int = 10**7,
         time_budget: float | None = None, extra_modules=None) -> dict:
    """Run the scan; returns a JSON-ready report (deterministic for fixed arguments).

    ``extra_modules`` maps a Q-representative index to additional (not
    necessarily simple) modules; such tuples are labelled ``supplied``.
    """
    t0 = time.perf_counter()
    S = F.S
    setup = prepare_scan(F, lattice)
    data = S.central_series()
    tasks = []
    for qi, Q in enumerate(setup.q_reps):
        for vi, V in enumerate(simple_modules_for(F, Q, seed=chop_seed, max_dim=chop_max_dim)):
            tasks.append((qi, Q, vi, V, "simple"))
        for j, V in enumerate((extra_modules or {}).get(qi, [])):
            tasks.append((qi, Q, 1000 + j, V, "supplied"))
    results = []
    partial = False
    if workers > 1 and len(tasks) > 1:
        results = _run_pool(F, setup, tasks, sample, seed, explicit_cap, workers)
    else:
        for qi, Q, vi, V, _ in tasks:
            if time_budget is not None and time.perf_counter() - t0 > time_budget:
                partial = True
                break
            results.append(_task(F, setup, qi, Q, vi, V, sample, seed, explicit_cap))
    results.sort(key=lambda r: (r["qi"], r["vi"]))
    kinds = {(qi, vi): kind for qi, _, vi, _, kind in tasks}
    tuples = []
    total = zero = nonzero = 0
    per_q = []
    for r in results:
        Q = setup.q_reps[r["qi"]]
        total += r["evaluated"]
        nonzero += r["nonzero"]
        zero += r["evaluated"] - r["nonzero"]
        per_q.append({"Q": fmt(S, Q), "V_index": r["vi"], "V_dim": r["V_dim"], "module": kinds[(r["qi"], r["vi"])],
                      "evaluated": r["evaluated"], "zero_by_vanishing_value": r["vanishing"],
                      "computed": len(r["listed"]), "nonzero": r["nonzero"]})
        for k, nz, C in r["listed"]:
            P, R, T = setup.pairs[k]
            entry = {"Q": fmt(S, Q), "V_index": r["vi"], "V_dim": r["V_dim"], "P": fmt(S, P), "R": fmt(S, R),
                     "T": fmt(S, T), "verdict": "nonzero" if nz else "zero",
                     "annotations": annotate(F, P, R, T, data)}
            if nz:
                entry["witness"] = C.tolist()
            tuples.append(entry)
    full_total = len(setup.pairs) * len(tasks)
    report = {
        "fusion": F.describe(),
        "lattice": {"subgroups": len(setup.lattice), "centric": len(setup.centric),
                    "noncentric_class_reps": len(setup.q_reps), "pairs": len(setup.pairs),
                    "restricted_to_overgroups_of_center": len(setup.lattice) < S.order and
                    all(S.center() <= H for H in setup.lattice)},
        "tuples": tuples,
        "per_module": per_q,
        "summary": {"total": total, "zero": zero, "nonzero": nonzero,
                    "skipped": full_total - total, "modules": len(tasks)},
        "coverage": {"sample": sample if sample is not None else 1.0,
                     "evaluated": total, "population": full_total,
                     "fraction": (total / full_total) if full_total else 1.0},
        "partial": partial,
    }
    if partial:
        report["warnings"] = ["time budget exhausted: report covers a prefix of the (Q, V) tasks"]
    return report


_POOL_STATE = {}


def _pool_run(args):
    F, setup = _POOL_STATE["F"], _POOL_STATE["setup"]
    qi, vi, sample, seed, cap = args
    Q = setup.q_reps[qi]
    V = _POOL_STATE["modules"][(qi, vi)]
    return _task(F, setup, qi, Q, vi, V, sample, seed, cap)


def _run_pool(F, setup, tasks, sample, seed, cap, workers):
    import multiprocessing as mp

    _POOL_STATE["F"] = F
    _POOL_STATE["setup"] = setup
    _POOL_STATE["modules"] = {(qi, vi): V for qi, _, vi, V, _ in tasks}
    ctx = mp.get_context("fork")
    with ctx.Pool(workers) as pool:
        out = pool.map(_pool_run, [(qi, vi, sample, seed, cap) for qi, _, vi, _, _ in tasks], chunksize=1)
    return out


# -- lemma validation ------------------------------------------------------------------------------


def validate_lemmas(F: FusionSystem, lattice=None, functors=None, seed: int = 0, max_failures: int = 20) -> dict:
    """Direct checks of the unconditional statements over every configuration.

    Checks (each counted separately):
      trace_nonzero_self_centralizing: nonzero summand at L in P => C_P(L) <= L
      l_set_nonempty: S_{Q,V}(P) != 0 => L(P, Q) nonempty
      l_set_conjugation: L(P, Q) closed under P-conjugation
      l_set_descends: L in L(P, Q), L <= T <= P => L in L(T, Q)
      abelian_support: K abelian, S_{Q,V}(K) != 0 => K in Q^F, and then S_{Q,V}(K) = V twisted
      trace_vanishing: T abelian in Q^F, T < C_K(T) <= K => Ind_T^K = 0
      trace_nilpotence: T normal in P, T < P => (Res_T^P Ind_T^P)^2 = 0
    The first four are tested for every Q-class; the last three for non-centric Q.
    """
    S = F.S
    p = S.p
    lattice = lattice if lattice is not None else S.all_subgroups()
    counts = {k: [0, 0] for k in ("trace_nonzero_self_centralizing", "l_set_nonempty", "l_set_conjugation",
                                  "l_set_descends", "abelian_support", "trace_vanishing", "trace_nilpotence")}
    failures = []

    def record(name, ok, detail):
        counts[name][0] += 1
        if not ok:
            counts[name][1] += 1
            if len(failures) < max_failures:
                failures.append({"check": name, **detail})

    if functors is None:
        functors = []
        for cls in F.f_classes(lattice):
            Q = F.fully_normalized_rep(cls[0])
            for i, V in enumerate(simple_modules_for(F, Q, seed=seed)):
                functors.append((Q, i, SqvFunctor(F, Q, V, check_lemma=False)))
    abelian = {H.mask: S.is_abelian(H) for H in lattice}
    for Q, vi, M in functors:
        noncentric = not F.is_centric(Q)
        qf = {L.mask for L in F.f_class(Q)}
        for P in lattice:
            val = M.value(P)
            for s in val.summands:
                ok = s.dim == 0 or S.centralizer(s.L, within=P) <= s.L
                record("trace_nonzero_self_centralizing", ok, {"Q": fmt(S, Q), "P": fmt(S, P), "L": fmt(S, s.L)})
            lset = F.l_set(P, Q)
            if val.dim:
                record("l_set_nonempty", bool(lset), {"Q": fmt(S, Q), "P": fmt(S, P)})
            lmasks = {L.mask for L in lset}
            for L in lset:
                ok = all(S.conjugate_subgroup(L, g).mask in lmasks for g in P.gens)
                record("l_set_conjugation", ok, {"Q": fmt(S, Q), "P": fmt(S, P), "L": fmt(S, L)})
                for T in lattice:
                    if L <= T <= P:
                        ok = any(X is L for X in F.l_set(T, Q))
                        record("l_set_descends", ok, {"Q": fmt(S, Q), "P": fmt(S, P), "T": fmt(S, T), "L": fmt(S, L)})
            if not noncentric:
                continue
            if abelian[P.mask] and val.dim:
                nz = [s for s in val.summands if s.dim]
                ok = P.mask in qf and len(nz) == 1 and nz[0].L is P and nz[0].dim == M.d
                record("abelian_support", ok, {"Q": fmt(S, Q), "K": fmt(S, P)})
        if not noncentric:
            continue
        for T in lattice:
            if T.mask not in qf or not abelian[T.mask] or M.dim(T) == 0:
                continue
            for K in lattice:
                if T < K and T < S.centralizer(T, within=K):
                    ok = not np.any(M.ind(T, K))
                    record("trace_vanishing", ok, {"Q": fmt(S, Q), "T": fmt(S, T), "K": fmt(S, K)})
        for P in lattice:
            for T in lattice:
                if T < P and S.is_normal(T, P) and M.dim(T):
                    A = fplin.matmul(M.res(T, P), M.ind(T, P), p)
                    ok = not np.any(fplin.matmul(A, A, p))
                    record("trace_nilpotence", ok, {"Q": fmt(S, Q), "T": fmt(S, T), "P": fmt(S, P)})
    nfail = sum(v[1] for v in counts.values())
    return {"fusion": F.describe(), "functors": len(functors),
            "checks": {k: {"checked": v[0], "failures": v[1]} for k, v in counts.items()},
            "failures": failures, "ok": nfail == 0}


def contrapositive_checks(F: FusionSystem, Q, P, R, T, data=None) -> dict:
    """Conclusions that must hold for any tuple with a nonzero composite; a
    False entry on such a tuple refutes the corresponding statement."""
    S = F.S
    res = {
        "T_proper_in_P_and_R": T < P and T < R,
        "Z(S)_in_T": S.center() <= T,
        "P_R_nonabelian": not S.is_abelian(P) and not S.is_abelian(R),
        "centralizers_in_T": S.centralizer(P) <= T and S.centralizer(R) <= T,
        "T_order_at_least_p^2": T.order >= S.p**2,
    }
    if S.is_abelian(T):
        res["T_abelian_in_Q_class"] = any(T is L for L in F.f_class(Q))
        nP, nR = S.is_normal(T, P), S.is_normal(T, R)
        if nP:
            res["T_self_centralizing_in_P"] = S.centralizer(T, within=P) is T
        if nR:
            res["T_self_centralizing_in_R"] = S.centralizer(T, within=R) is T
        if nP and nR:
            res["Out_P(T)_ne_Out_R(T)"] = _out_image(F, T, P) != _out_image(F, T, R)
    if data is not None and data.maximal_class and S.n >= 4:
        res["gamma1_nonabelian"] = not S.is_abelian(data.gamma1)
        res["T_is_gamma_i"] = any(T is data.gamma(i) for i in range(2, S.n + 1))
        res["T_in_gamma1_or_C_S(Z2)"] = T <= data.gamma1 or T <= data.centralizer_z2
        res["T_not_S_centric"] = not S.is_self_centralizing(T)
    return res


def _out_image(F, T, U):
    S = F.S
    N = S.normalizer(T, within=U)
    A = F.automizer(T)
    g = np.array(T.gens, dtype=np.int64)
    return frozenset(A.out_index(S.conj(g, int(x))) for x in N.elements)


# -- essential subgroups of maximal class groups -----------------------------------------------------


def essential_crosscheck(F: FusionSystem, lattice=None) -> dict:
    """Each essential E: |E| <= p^3, or E = gamma_1(S), or E = C_S(Z_2(S)); and |E| != p^3 when S is exceptional."""
    S = F.S
    data = S.central_series()
    lattice = lattice if lattice is not None else scan_lattice(S)
    out = {"fusion": F.describe(), "maximal_class": data.maximal_class, "order": S.order,
           "exceptional": data.exceptional, "essentials": [], "violations": []}
    if not data.maximal_class or S.n < 4:
        out["applicable"] = False
        out["ok"] = True
        return out
    out["applicable"] = True
    ess = F.essentials(lattice)
    p3 = S.p**3
    for E in ess:
        which = "gamma1" if E is data.gamma1 else "C_S(Z2)" if E is data.centralizer_z2 else None
        entry = {"E": fmt(S, E), "order": E.order, "is": which,
                 "quillen_disconnected": _quillen(F, E)}
        out["essentials"].append(entry)
        ok = E.order <= p3 or which is not None
        if data.exceptional and E.order == p3:
            ok = False
        if not ok or not entry["quillen_disconnected"]:
            out["violations"].append(entry)
    out["ok"] = not out["violations"]
    return out


def _quillen(F, E):
    from .fusion import p_subgroup_poset_disconnected
    return p_subgroup_poset_disconnected(F.automizer(E).out_group, F.S.p)


def structural_facts(S: PcGroup) -> dict:
    """Maximal-class data used by the validators, as a report."""
    data = S.central_series()
    out = data.summary()
    out["order"] = S.order
    maximal = S.all_subgroups(order_filter=S.order // S.p, containing=S.frattini())
    out["maximal_subgroups"] = len(maximal)
    gamma2 = data.gamma(2) if data.maximal_class else S.commutator_subgroup(S.whole, S.whole)
    out["maximal_pairwise_intersection_is_gamma2"] = all(
        (A & B) is gamma2 for i, A in enumerate(maximal) for B in maximal[i + 1:])
    return out


def mackey_bridge(F: FusionSystem, lattice=None, seed: int = 0, reading: str = "intersection_in_R") -> dict:
    """For each non-centric Q and simple V: are all scan composites zero, and does
    S_{Q,V} restricted to the centric subgroups satisfy the truncated Mackey formula?

    All-zero composites must imply the truncated formula; the reverse
    implication is recorded but not required.
    """
    from .mackey import verify_axioms

    S = F.S
    setup = prepare_scan(F, lattice)
    rows = []
    for Q in setup.q_reps:
        for vi, V in enumerate(simple_modules_for(F, Q, seed=seed)):
            M = SqvFunctor(F, Q, V)
            zero = all(not np.any(composition(M, P, R)) for P, R, _ in setup.pairs)
            mk = verify_axioms(M, setup.centric, reading=reading, check_isos=False)
            rows.append({"Q": fmt(S, Q), "V_index": vi, "V_dim": V.dim, "composites_zero": zero,
                         "truncated_mackey": mk["ok"], "triples": mk["triples"]})
    ok = all(r["truncated_mackey"] for r in rows if r["composites_zero"])
    return {"fusion": F.describe(), "functors": rows, "ok": ok}


def _from_fmt(S, gens):
    return S.subgroup([S.element(e) for e in gens])


def lemma_suite(F: FusionSystem, lattice=None, seed: int = 0, direct: bool = True, bridge: bool = True,
                scan_report: dict | None = None) -> dict:
    """Direct checks, contrapositive checks on every nonzero scan tuple, the
    essential-subgroup crosscheck and (optionally) the centric Mackey bridge."""
    S = F.S
    lattice = lattice if lattice is not None else scan_lattice(S)
    rep = scan_report if scan_report is not None else scan(F, lattice=lattice, chop_seed=seed)
    data = S.central_series()
    contra = []
    for t in rep["tuples"]:
        if t["verdict"] != "nonzero":
            continue
        Q, P, R, T = (_from_fmt(S, t[k]) for k in ("Q", "P", "R", "T"))
        checks = contrapositive_checks(F, Q, P, R, T, data)
        contra.append({"Q": t["Q"], "P": t["P"], "R": t["R"], "T": t["T"],
                       "violated": sorted(k for k, v in checks.items() if v is False)})
    out = {"fusion": F.describe(), "scan_summary": rep["summary"], "contrapositive": contra,
           "essentials": essential_crosscheck(F, lattice)}
    ok = rep["summary"]["nonzero"] == 0 and out["essentials"]["ok"]
    if direct:
        out["direct"] = validate_lemmas(F, lattice, seed=seed)
        ok = ok and out["direct"]["ok"]
    if bridge:
        out["mackey_bridge"] = mackey_bridge(F, lattice, seed=seed)
        ok = ok and out["mackey_bridge"]["ok"]
    out["ok"] = ok
    return out
