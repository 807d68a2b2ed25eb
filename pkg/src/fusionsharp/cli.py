"""Command-line interface.

    fusionsharp group inspect     --catalog sylow_g2 --p 5
    fusionsharp fusion build      --catalog extraspecial_plus --p 3 --mode ambient
    fusionsharp fusion centrics | essentials
    fusionsharp mackey verify     --catalog extraspecial_plus --p 3 --mode inner
    fusionsharp sharp scan        --catalog sylow_g2 --p 5 --mode inner [--sample 0.01]
    fusionsharp sharp lemmas
    fusionsharp hlim compute      --catalog extraspecial_plus --p 3 --mode ambient

Every command writes a JSON report to ``--output`` (when given) and a
short summary to stdout.  Exit codes: see EXIT_CODES.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import CertificateError, InputError, InternalError, ResourceError

SCHEMA_VERSION = 1

EXIT_CODES = {
    "ok": 0,
    "check_failed": 1,
    "usage": 2,          # argparse
    InputError: 3,
    ResourceError: 4,
    InternalError: 5,
    CertificateError: 6,
}

PROFILE_ENV = "FUSIONSHARP_PROFILE"

PROFILES = {
    "desk": dict(max_order=5**6, closure_cap=2 * 10**6, chop_max_dim=600, chain_cap=10**6,
                 max_entries=4 * 10**7, time_budget=None),
    "ci": dict(max_order=5**6, closure_cap=10**6, chop_max_dim=400, chain_cap=2 * 10**5,
               max_entries=10**7, time_budget=1200.0),
    "full": dict(max_order=7**6, closure_cap=10**7, chop_max_dim=1500, chain_cap=10**7,
                 max_entries=2 * 10**8, time_budget=None),
}


@dataclass
class RunConfig:
    command: str
    prime: int | None
    catalog: str | None
    group_file: str | None
    fusion_file: str | None
    mode: str
    ambient: str | None
    profile: str
    max_order: int
    closure_cap: int
    chop_max_dim: int
    chain_cap: int
    max_entries: int
    time_budget: float | None
    seed: int
    sample: float | None
    degree: int
    reading: str
    include_centric: bool
    output: str | None

    def validate(self):
        if self.prime is not None and (self.prime < 3 or self.prime % 2 == 0):
            raise InputError(f"prime must be odd, got {self.prime}")
        for k in ("max_order", "closure_cap", "chop_max_dim", "chain_cap", "max_entries", "degree"):
            if getattr(self, k) <= 0:
                raise InputError(f"{k} must be positive")
        if self.time_budget is not None and self.time_budget <= 0:
            raise InputError("time_budget must be positive")
        if self.sample is not None and not 0 < self.sample <= 1:
            raise InputError("--sample must lie in (0, 1]")
        if self.fusion_file is None and self.catalog is None and self.group_file is None:
            raise InputError("give --catalog, --group-file or --fusion-file")

    def to_json(self) -> dict:
        d = dataclasses.asdict(self)
        d.pop("output")
        return d


# -- input ---------------------------------------------------------------------------------------


def load_json_file(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_group(cfg: RunConfig, spec=None):
    from .catalog import catalog
    from .pgroup import PcGroup

    if spec is None:
        if cfg.group_file:
            spec = load_json_file(cfg.group_file)
        else:
            spec = cfg.catalog
    if isinstance(spec, str):
        if cfg.prime is None:
            raise InputError("--p is required with a catalog group")
        return catalog(spec, cfg.prime, max_order=cfg.max_order), spec
    G = PcGroup.from_json(spec, name="input", max_order=cfg.max_order)
    if cfg.prime is not None and G.p != cfg.prime:
        raise InputError(f"--p {cfg.prime} disagrees with the group's prime {G.p}")
    if G.p % 2 == 0:
        raise InputError("only odd primes are supported")
    return G, "input"


def _elements(S, vecs, what):
    try:
        return [S.element(v) for v in vecs]
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed {what}: {exc}") from None


def load_fusion(cfg: RunConfig):
    from .corpus import default_ambient
    from .fusion import FusionSystem, conjugation, morphism_from_images
    from .perm import AmbientOracle

    data = load_json_file(cfg.fusion_file) if cfg.fusion_file else {}
    S, gname = load_group(cfg, data.get("group"))
    mode = data.get("mode", cfg.mode)
    if mode == "inner":
        return FusionSystem.inner(S)
    if mode == "ambient":
        amb = data.get("ambient", cfg.ambient)
        if amb is None or isinstance(amb, str):
            oracle = default_ambient(S, gname, S.p, amb)
        else:
            try:
                oracle = AmbientOracle(S, amb["generators"], amb["sylow_images"], amb.get("degree"))
            except (KeyError, TypeError) as exc:
                raise InputError(f"malformed ambient data: {exc}") from None
        return FusionSystem.from_ambient(oracle)
    if mode == "generators":
        gens = [(S.whole, [conjugation(S.whole, g, S.whole) for g in S.whole.gens])]
        for k, entry in enumerate(data.get("generators", [])):
            try:
                sub = _elements(S, entry["subgroup"], f"generators[{k}].subgroup")
                E = S.subgroup(sub)
                autos = [morphism_from_images(E, sub, _elements(S, a, f"generators[{k}].autos"), E)
                         for a in entry["autos"]]
            except (KeyError, TypeError) as exc:
                raise InputError(f"malformed generators[{k}]: {exc}") from None
            gens.append((E, autos))
        return FusionSystem.from_generators(S, gens, closure_cap=cfg.closure_cap)
    raise InputError(f"unknown fusion mode {mode!r}")


# -- commands ------------------------------------------------------------------------------------


def _fmt(S, H):
    return [list(S.exponents(x)) for x in H.gens]


def cmd_group_inspect(cfg):
    from .sharp import structural_facts

    S, _ = load_group(cfg)
    facts = structural_facts(S)
    facts["name"] = S.name
    facts["presentation"] = S.to_json()
    summary = f"{S.name}: order {S.p}^{S.n}, maximal class {facts['maximal_class']}"
    if "exceptional" in facts:
        summary += f", exceptional {facts['exceptional']}"
    return facts, True, summary


def cmd_fusion_build(cfg):
    F = load_fusion(cfg)
    S = F.S
    subs = S.all_subgroups()
    classes = F.f_classes(subs)
    out = {"fusion": F.describe(), "subgroups": len(subs), "f_classes": len(classes),
           "centric_classes": sum(1 for c in classes if F.is_centric(c[0]))}
    ok = True
    if S.order <= S.p**4:
        sat = F.check_saturation(subs)
        out["saturation"] = sat
        ok = sat["saturated"] is not False
    return out, ok, f"{F.name}: {len(classes)} classes of subgroups, {out['centric_classes']} centric"


def cmd_fusion_centrics(cfg):
    from .sharp import scan_lattice

    F = load_fusion(cfg)
    S = F.S
    lattice = scan_lattice(S)
    reps = [F.fully_normalized_rep(c[0]) for c in F.f_classes([H for H in lattice if F.is_centric(H)])]
    out = {"fusion": F.describe(), "centric_classes": [
        {"rep": _fmt(S, P), "order": P.order, "class_size": len(F.f_class(P)),
         "out_order": F.automizer(P).out_order} for P in reps]}
    return out, True, f"{F.name}: {len(reps)} centric classes"


def cmd_fusion_essentials(cfg):
    from .sharp import essential_crosscheck, scan_lattice

    F = load_fusion(cfg)
    S = F.S
    lattice = scan_lattice(S)
    ess = F.essentials(lattice)
    out = {"fusion": F.describe(), "essentials": [
        {"E": _fmt(S, E), "order": E.order, "out_order": F.automizer(E).out_order} for E in ess],
        "crosscheck": essential_crosscheck(F, lattice)}
    return out, out["crosscheck"]["ok"], f"{F.name}: {len(ess)} essential classes"


def cmd_mackey_verify(cfg):
    from .mackey import SqvFunctor, simple_modules_for, verify_axioms

    F = load_fusion(cfg)
    S = F.S
    subs = S.all_subgroups()
    rows = []
    ok = True
    for cls in F.f_classes(subs):
        Q = F.fully_normalized_rep(cls[0])
        for i, V in enumerate(simple_modules_for(F, Q, seed=cfg.seed, max_dim=cfg.chop_max_dim)):
            M = SqvFunctor(F, Q, V)
            r = verify_axioms(M, subs, reading=cfg.reading)
            ok = ok and r["ok"]
            rows.append({"Q": _fmt(S, Q), "V_index": i, "V_dim": V.dim, **r})
    fails = sum(r["failures"] + r["iso_failures"] for r in rows)
    out = {"fusion": F.describe(), "functors": rows, "failures": fails}
    return out, ok, f"{F.name}: {len(rows)} functors, {sum(r['triples'] for r in rows)} triples, {fails} failures"


def cmd_sharp_scan(cfg, workers=1):
    from .sharp import scan

    F = load_fusion(cfg)
    rep = scan(F, sample=cfg.sample, seed=cfg.seed, workers=workers, chop_seed=cfg.seed,
               chop_max_dim=cfg.chop_max_dim, time_budget=cfg.time_budget)
    s = rep["summary"]
    ok = s["nonzero"] == 0 and not rep["partial"]
    msg = (f"{F.name}: total {s['total']}, zero {s['zero']}, nonzero {s['nonzero']}, skipped {s['skipped']}"
           f" (coverage {rep['coverage']['fraction']:.4f})" + (" PARTIAL" if rep["partial"] else ""))
    return rep, ok, msg


def cmd_sharp_lemmas(cfg, workers=1):
    from .sharp import lemma_suite, scan, scan_lattice

    F = load_fusion(cfg)
    lattice = scan_lattice(F.S)
    small = F.S.order <= 3**4
    rep = scan(F, lattice=lattice, sample=cfg.sample, seed=cfg.seed, workers=workers, chop_seed=cfg.seed,
               chop_max_dim=cfg.chop_max_dim)
    out = lemma_suite(F, lattice, seed=cfg.seed, direct=small, bridge=small, scan_report=rep)
    if not small:
        out["note"] = "direct lemma checks and the Mackey bridge run only for |S| <= 3^4"
    bad = [c for c in out["contrapositive"] if c["violated"]]
    return out, out["ok"], f"{F.name}: lemma suite ok={out['ok']}, {len(bad)} tuples with violated conclusions"


def cmd_hlim_compute(cfg):
    from .hlim import higher_limits
    from .mackey import SqvFunctor, simple_modules_for

    F = load_fusion(cfg)
    S = F.S
    subs = S.all_subgroups()
    rows = []
    ok = True
    for cls in F.f_classes(subs):
        Q = F.fully_normalized_rep(cls[0])
        centric = F.is_centric(Q)
        if centric and not cfg.include_centric:
            continue
        for i, V in enumerate(simple_modules_for(F, Q, seed=cfg.seed, max_dim=cfg.chop_max_dim)):
            M = SqvFunctor(F, Q, V)
            try:
                r = higher_limits(F, M, N=cfg.degree, collection=subs, cap=cfg.chain_cap,
                                  max_entries=cfg.max_entries)
            except ResourceError as exc:
                rows.append({"Q": _fmt(S, Q), "V_index": i, "V_dim": V.dim, "Q_centric": centric,
                             "error": str(exc), "counts": exc.counts})
                ok = False
                continue
            r.update({"V_index": i, "Q_centric": centric})
            if not centric:
                ok = ok and all(d["dim"] == 0 for d in r["degrees"][1:])
            ok = ok and r["lim0_match"] and r["euler_ok"]
            rows.append(r)
    out = {"fusion": F.describe(), "functors": rows}
    return out, ok, f"{F.name}: {len(rows)} functors, all checks pass: {ok}"


COMMANDS = {
    ("group", "inspect"): cmd_group_inspect,
    ("fusion", "build"): cmd_fusion_build,
    ("fusion", "centrics"): cmd_fusion_centrics,
    ("fusion", "essentials"): cmd_fusion_essentials,
    ("mackey", "verify"): cmd_mackey_verify,
    ("sharp", "scan"): cmd_sharp_scan,
    ("sharp", "lemmas"): cmd_sharp_lemmas,
    ("hlim", "compute"): cmd_hlim_compute,
}


# -- driver ---------------------------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


def _strip_timing(obj):
    """Drop wall-clock fields so that reports are reproducible byte for byte."""
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k != "seconds"}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fusionsharp", description="Fusion systems and Mackey functor checks over F_p.")
    ap.add_argument("--version", action="version", version=f"fusionsharp {__version__}")
    sub = ap.add_subparsers(dest="area", required=True)
    actions = {}
    for area, action in COMMANDS:
        actions.setdefault(area, []).append(action)
    for area, acts in actions.items():
        sp = sub.add_parser(area).add_subparsers(dest="action", required=True)
        for act in acts:
            p = sp.add_parser(act)
            p.add_argument("--catalog", help="catalog group name")
            p.add_argument("--group-file", help="pc presentation JSON")
            p.add_argument("--fusion-file", help="fusion system JSON")
            p.add_argument("--p", type=int, dest="prime")
            p.add_argument("--mode", default="inner", choices=["inner", "ambient", "generators"])
            p.add_argument("--ambient", help="named ambient group for --mode ambient")
            p.add_argument("--profile", choices=sorted(PROFILES), default=None,
                           help=f"budget profile (default: ${PROFILE_ENV} or desk)")
            for k in ("max-order", "closure-cap", "chop-max-dim", "chain-cap", "max-entries"):
                p.add_argument(f"--{k}", type=int, default=None)
            p.add_argument("--time-budget", type=float, default=None)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--sample", type=float, default=None)
            p.add_argument("--workers", type=int, default=1)
            p.add_argument("--degree", type=int, default=3, help="hlim: complex built in degrees 0..N")
            p.add_argument("--reading", default="intersection_in_R",
                           choices=["intersection_in_R", "intersection_in_Q"])
            p.add_argument("--include-centric", action="store_true", help="hlim: also run centric Q (control)")
            p.add_argument("--output", "-o", default=None)
            p.add_argument("--timing", action="store_true", help="keep wall-clock fields in the report")
    return ap


def make_config(args) -> RunConfig:
    profile = args.profile or os.environ.get(PROFILE_ENV, "desk")
    if profile not in PROFILES:
        raise InputError(f"unknown budget profile {profile!r}; known: {sorted(PROFILES)}")
    b = dict(PROFILES[profile])
    for k in ("max_order", "closure_cap", "chop_max_dim", "chain_cap", "max_entries", "time_budget"):
        v = getattr(args, k)
        if v is not None:
            b[k] = v
    cfg = RunConfig(command=f"{args.area} {args.action}", prime=args.prime, catalog=args.catalog,
                    group_file=args.group_file, fusion_file=args.fusion_file, mode=args.mode,
                    ambient=args.ambient, profile=profile, seed=args.seed, sample=args.sample,
                    degree=args.degree, reading=args.reading, include_centric=args.include_centric,
                    output=args.output, **b)
    cfg.validate()
    return cfg


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = make_config(args)
        if args.workers < 1:
            raise InputError("--workers must be positive")
        fn = COMMANDS[(args.area, args.action)]
        t0 = time.perf_counter()
        if fn in (cmd_sharp_scan, cmd_sharp_lemmas):
            result, ok, msg = fn(cfg, workers=args.workers)
        else:
            result, ok, msg = fn(cfg)
        elapsed = time.perf_counter() - t0
    except tuple(k for k in EXIT_CODES if isinstance(k, type)) as exc:
        code = EXIT_CODES[type(exc)] if type(exc) in EXIT_CODES else \
            next(v for k, v in EXIT_CODES.items() if isinstance(k, type) and isinstance(exc, k))
        err = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ResourceError):
            err.update(bound=exc.bound, partial=exc.partial, counts=exc.counts)
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        if getattr(args, "output", None):
            _write(args.output, {"schema_version": SCHEMA_VERSION, "tool": "fusionsharp", "version": __version__,
                                 "ok": False, **err})
        return code
    report = {"schema_version": SCHEMA_VERSION, "tool": "fusionsharp", "version": __version__,
              "config": cfg.to_json(), "ok": bool(ok),
              "result": result if args.timing else _strip_timing(result)}
    if args.timing:
        report["seconds"] = round(elapsed, 3)
    if cfg.output:
        _write(cfg.output, report)
    print(msg)
    print(f"{'PASS' if ok else 'FAIL'} ({elapsed:.1f} s)")
    return EXIT_CODES["ok"] if ok else EXIT_CODES["check_failed"]


def _write(path, report):
    text = json.dumps(report, indent=1, default=_jsonable)
    with open(path, "w") as fh:
        fh.write(text + "\n")


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
