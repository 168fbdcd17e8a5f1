"""Command-line front end.  Output is JSON (``--human`` for a table).

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from fractions import Fraction

from . import __version__
from . import bounds as B
from .bgmap import BGMorphism, parse_labeled_complex, validate_labeling
from .chains import ChainMap, verify_chain_homotopy
from .ez_models import PAPER_DELTA_EZ, ModelError, build_table, delta_ez, model_product, paper_table
from .groups import build_tower, parse_group
from .homotopies import (
    PhiTower,
    TowerTooShallow,
    conj_homotopy,
    delta_bdh,
    delta_bdh_corrected,
    delta_bdh_table,
    induced_map,
    verify_phi,
)
from .simplicial import BarComplex, moore_complex

SEED_ENV = "CONTROLLED_CHAINS_SEED"

REF_TABLE = "reference table"
REF_DERIVED = "derived"


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


class Report:
    def __init__(self, command: str):
        self.command = command
        self.checks: list = []
        self.data: dict = {}
        self.partial = False

    def check(self, name, expected, computed, provenance, ok=None):
        ok = (expected == computed) if ok is None else bool(ok)
        self.checks.append(
            {"name": name, "expected": _jsonable(expected), "computed": _jsonable(computed),
             "provenance": provenance, "ok": ok}
        )
        return ok

    @property
    def ok(self):
        return all(c["ok"] for c in self.checks)

    @property
    def status(self):
        if not self.ok:
            return "fail"
        return "partial" if self.partial else "pass"

    def to_dict(self):
        return {
            "command": self.command,
            "version": __version__,
            "status": self.status,
            "checks": self.checks,
            "data": _jsonable(self.data),
        }


def _emit(rep: Report, args, elapsed: float):
    d = rep.to_dict()
    if getattr(args, "timing", False):
        d["seconds"] = round(elapsed, 3)
    if getattr(args, "human", False):
        lines = [f"{rep.command}: {rep.status}"]
        for c in rep.checks:
            mark = "ok  " if c["ok"] else "FAIL"
            lines.append(f"  [{mark}] {c['name']}: computed {c['computed']} expected {c['expected']} ({c['provenance']})")
        for k, v in d["data"].items():
            lines.append(f"  {k}: {json.dumps(v)}")
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write(json.dumps(d, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_delta_tables(args, rep: Report):
    t = paper_table(4)
    ez = [delta_ez(t, k) for k in range(5)]
    rep.check("delta_EZ", list(PAPER_DELTA_EZ), ez, REF_TABLE)
    rep.check("delta_BDH", [0, 6, 26, 186, 3410], delta_bdh_table(4), REF_TABLE)
    rep.data["delta_BDH_shuffle_degree_corrected"] = [delta_bdh_corrected(k) for k in range(5)]


def cmd_rho_bound(args, rep: Report):
    framings = None
    if args.framings is not None:
        try:
            framings = [int(x) for x in args.framings.split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"bad --framings {args.framings!r}") from None
    if args.surgery_crossings is None and framings is not None:
        raise UsageError("--framings requires --surgery-crossings")
    writhes = None
    if args.writhes is not None:
        try:
            writhes = [int(x) for x in args.writhes.split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"bad --writhes {args.writhes!r}") from None
        if framings is None or len(writhes) != len(framings):
            raise UsageError("--writhes needs one value per framing")
    try:
        b = B.rho_bound(args.simplicial, args.heegaard, args.surgery_crossings, framings, args.blackboard)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if b.kind == "surgery" and writhes is not None and writhes == framings:
        # framings are the blackboard framings, so the sharper count applies
        bb = B.rho_bound(blackboard=args.surgery_crossings)
        if bb.value <= b.value:
            bb.notes = b.notes + [f"framings equal the diagram writhes; general bound {b.value}"]
            b = bb
    rep.data.update(kind=b.kind, bound=b.value, derivation=[list(s) for s in b.derivation])
    if b.notes:
        rep.data["notes"] = b.notes
    if b.kind == "surgery":
        bb = B.rho_bound(blackboard=args.surgery_crossings)
        rep.data["blackboard_bound"] = bb.value
        rep.data["blackboard_note"] = "valid when the framings are the blackboard framings; pass --writhes to apply"
    bad = B.check_constant_chain()
    rep.check("constant chain", [], bad, REF_DERIVED)


def cmd_lens_rho(args, rep: Report):
    if args.n < 1:
        raise UsageError("n must be positive")
    v = B.lens_rho(args.n)
    rep.check(f"lens_rho({args.n})", B.sawtooth_rho(args.n), v, "oracle: sawtooth sum")
    rep.data["rho"] = v


def cmd_complexity_bounds(args, rep: Report):
    if args.n <= 3:
        raise UsageError("complexity-bounds needs n > 3")
    r = B.complexity_lower_bounds(args.n)
    rep.check("lens lower <= upper", True, r["lens_lower"] <= r["lens_upper"], REF_DERIVED)
    rep.check("|rho|/209139840 >= (n-3)/627419520", True, r["complexity_lower_from_rho"] >= r["lens_lower"], REF_DERIVED)
    mp = r.pop("matveev_pervova")
    rep.data.update(r)
    rep.data["matveev_pervova"] = f"{mp:.15g}"
    rep.data["matveev_pervova_note"] = "floating point, +-1 ulp at 15 significant digits"


def cmd_ledger(args, rep: Report):
    if args.dz < 0 or args.du < 0:
        raise UsageError("diameters must be non-negative")
    L = B.handle_ledger(args.dz, args.du)
    rep.check("total = 195 dz + 975 du", 195 * args.dz + 975 * args.du, L.total_bound, REF_DERIVED)
    rep.check("steps within total", True, L.total <= L.total_bound, REF_DERIVED)
    rep.data.update(n2=L.n2, n1=L.n1, step2=L.step2, step3=L.step3, total_bound=L.total_bound, over_a3=L.over_a3)


def cmd_verify_ez(args, rep: Report):
    k, method = args.k, args.method
    if not 0 <= k:
        raise UsageError("k must be non-negative")
    if method == "paper" and k > 4:
        raise UsageError("published models exist for k <= 4 only")
    if method in ("linear", "reduce") and k > 3 and not args.allow_large:
        raise UsageError("linear solves beyond k = 3 need --allow-large")
    try:
        if method == "paper":
            t = paper_table(k)
        else:
            t = build_table(k, method, budget=args.budget)
    except ModelError as exc:
        rep.check(f"{method} model up to k={k}", "solution", str(exc), REF_DERIVED, ok=False)
        return
    bad = t.verify()
    rep.check(f"model equation k<={k}", [], bad, "exact chain arithmetic")
    rep.data["diameters"] = t.diameters()
    if method == "paper":
        rep.check("delta_EZ", list(PAPER_DELTA_EZ[: k + 1]), t.diameters(), REF_TABLE)
    elif method == "reduce":
        rep.check("reduced diameters <= reference", True,
                  all(d <= PAPER_DELTA_EZ[i] for i, d in enumerate(t.diameters()) if i < 5), REF_TABLE)
    if args.export is not None:
        X = model_product(k)
        rep.data["chain"] = [[c, X.format_key(s)] for s, c in sorted(t.entry(k).items())]


def _parse_dims(text: str, default_hi: int):
    if text is None:
        return list(range(default_hi + 1))
    if "-" in text:
        a, b = text.split("-", 1)
        return list(range(int(a), int(b) + 1))
    return [int(x) for x in text.split(",")]


def cmd_verify_homotopy(args, rep: Report):
    try:
        G = parse_group(args.group)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    seed = args.seed
    rng = random.Random(seed)
    if args.kind == "conj":
        dims = _parse_dims(args.dims, args.n)
        Bc = BarComplex(G)
        C = moore_complex(Bc)
        gs = G.elements() if (G.finite and args.samples is None) else [G.random_element(rng) for _ in range(3)]
        for g in gs:
            S = conj_homotopy(G, g)
            mu = induced_map(lambda h, g=g: G.mul(G.mul(g, h), G.inv(g)))
            for k in dims:
                keys = Bc.simplices(k) if args.samples is None else None
                if keys is None:
                    keys = [Bc.random_simplex(k, rng) for _ in range(args.samples or 100)]
                r = verify_chain_homotopy(S, ChainMap.identity(), mu, C, C, keys)
                rep.check(f"dS+Sd = mu_g - id, g={G.format(g)}, k={k}", True, r.ok, "exact chain arithmetic")
                rep.check(f"d_S({k}) <= {k + 1}, g={G.format(g)}", True, r.diameters.get(k, 0) <= k + 1, REF_DERIVED)
        return
    n = args.n
    dims = _parse_dims(args.dims, n)
    if any(k > n for k in dims):
        raise UsageError(f"Phi^{n} is defined in degrees <= {n}")
    phis = PhiTower(G, n)
    if args.bounds_only:
        rep.partial = True
        Bg = BarComplex(G)
        for k in dims:
            keys = Bg.simplices(k) if args.samples is None else None
            if keys is None:
                keys = [Bg.random_simplex(k, rng) for _ in range(args.samples or 100)]
            dmax = max(sum(abs(c) for c in phis[n](s).values()) for s in keys)
            _diameter_checks(rep, n, k, dmax)
        return
    if n > 2:
        raise UsageError(
            f"Phi^{n} needs a witness tower of depth {n}; regular witnesses stop at depth 2 "
            "because the next level would need the previous ambient enumerated. "
            "Pass --bounds-only to check diameters only"
        )
    try:
        tower = build_tower(G, n)
    except (MemoryError, ValueError) as exc:
        raise UsageError(f"cannot build a witness tower of depth {n}: {exc}") from None
    try:
        r = verify_phi(G, n, tower, dims, args.samples, seed, phis)
    except TowerTooShallow as exc:
        raise UsageError(str(exc)) from None
    rep.check(f"dPhi+Phid = i^{n} - e after projection", True, r.ok, "witness projection")
    for k in dims:
        _diameter_checks(rep, n, k, r.diameters.get(k, 0))
    rep.data["checked"] = r.checked


def _diameter_checks(rep: Report, n: int, k: int, dmax: int):
    rep.data.setdefault("diameters", {})[k] = dmax
    rep.check(f"d_Phi^{n}({k}) <= delta_BDH({k})", True, dmax <= delta_bdh(k), REF_TABLE)
    rep.check(f"d_Phi^{n}({k}) <= corrected recurrence({k})", True, dmax <= delta_bdh_corrected(k), REF_DERIVED)


def cmd_bg_morphism(args, rep: Report):
    try:
        G = parse_group(args.group)
        with open(args.complex, encoding="utf-8") as fh:
            L = parse_labeled_complex(fh.read(), G)
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    v = validate_labeling(L)
    rep.check("labeling is a cocycle", [], [list(map(str, x)) for x in v.violations], REF_DERIVED)
    if not v or args.check_only:
        return
    f1, f2 = BGMorphism(L, "last-edge"), BGMorphism(L, "first-edge")
    rep.check("simplicial identities", [], [list(map(str, b)) for b in f1.check()], "exhaustive")
    X = L.X
    diff = [s for n in range(X.dim + 1) for s in X.simplices(n) if f1(s) != f2(s)]
    rep.check("recursion forms agree", [], [list(s) for s in diff], "exhaustive")
    rep.data["top_simplices"] = {
        X.format_key(s): BarComplex(G).format_key(f1(s)) for s in X.nondegenerate(X.dim)
    }


# ---------------------------------------------------------------------------
# suites


def suite_ez(args, rep):
    t = paper_table(4)
    rep.check("models P_0..P_4 solve the model equation", [], t.verify(), "exact chain arithmetic")
    rep.check("delta_EZ", list(PAPER_DELTA_EZ), t.diameters(), REF_TABLE)


def suite_conj(args, rep):
    from .groups import CyclicGroup

    G = CyclicGroup(3)
    Bc = BarComplex(G)
    C = moore_complex(Bc)
    ok, dok = True, True
    for g in G.elements():
        S = conj_homotopy(G, g)
        mu = induced_map(lambda h, g=g: G.mul(G.mul(g, h), G.inv(g)))
        keys = [s for k in range(4) for s in Bc.simplices(k)]
        r = verify_chain_homotopy(S, ChainMap.identity(), mu, C, C, keys)
        ok &= r.ok
        dok &= all(d <= k + 1 for k, d in r.diameters.items())
    rep.check("conjugation homotopy on BZ_3, k<=3", True, ok, "exhaustive")
    rep.check("d_S(k) <= k+1", True, dok, REF_DERIVED)


def suite_phi(args, rep):
    from .groups import CyclicGroup

    G = CyclicGroup(2)
    max_n = args.max_n
    tower = build_tower(G, max_n)
    phis = PhiTower(G, max_n)
    for n in range(1, max_n + 1):
        r = verify_phi(G, n, tower, phis=phis)
        rep.check(f"Phi^{n} identity on BZ_2", True, r.ok, "witness projection")
        for k, d in sorted(r.diameters.items()):
            _diameter_checks(rep, n, k, d)


def suite_bounds(args, rep):
    for d, got, want in B.constant_chain():
        rep.check(d, want, got, REF_DERIVED)
    rep.check("delta_BDH", [0, 6, 26, 186, 3410], delta_bdh_table(4), REF_TABLE)


def suite_lens(args, rep):
    bad = [n for n in range(1, 201) if B.lens_rho(n) != B.sawtooth_rho(n)]
    rep.check("lens_rho = sawtooth oracle, 1 <= n <= 200", [], bad, "oracle: sawtooth sum")
    rep.data["checked"] = 200
    rep.data["samples"] = {str(n): B.lens_rho(n) for n in (1, 2, 3, 4, 5, 10, 100, 200)}


SUITES = {"ez": suite_ez, "conj": suite_conj, "phi": suite_phi, "bounds": suite_bounds, "lens": suite_lens}


def cmd_suite(args, rep: Report):
    names = list(SUITES) if args.name == "all" else [args.name]
    for name in names:
        SUITES[name](args, rep)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="controlled-chains", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--human", action="store_true", help="table output instead of JSON")
    common.add_argument("--timing", action="store_true", help="include wall time (breaks byte stability)")
    common.add_argument("--seed", type=int, default=int(os.environ.get(SEED_ENV, "0")))
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("delta-tables", parents=[common], help="delta_EZ and delta_BDH tables")
    s.set_defaults(func=cmd_delta_tables)

    s = sub.add_parser("rho-bound", parents=[common], help="universal rho bound")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--simplicial", type=int)
    g.add_argument("--heegaard", type=int)
    g.add_argument("--surgery-crossings", type=int)
    g.add_argument("--blackboard", type=int)
    s.add_argument("--framings", help="comma-separated framings, e.g. \"0,-2\"")
    s.add_argument("--writhes", help="comma-separated diagram writhes per component")
    s.set_defaults(func=cmd_rho_bound)

    s = sub.add_parser("lens-rho", parents=[common], help="rho2 of L(n,1)")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_lens_rho)

    s = sub.add_parser("complexity-bounds", parents=[common], help="complexity bracket for L(n,1)")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_complexity_bounds)

    s = sub.add_parser("ledger", parents=[common], help="2-handle ledger")
    s.add_argument("dz", type=int)
    s.add_argument("du", type=int)
    s.set_defaults(func=cmd_ledger)

    s = sub.add_parser("verify-ez", parents=[common], help="check model solutions")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--method", choices=["paper", "cone", "linear", "reduce"], default="paper")
    s.add_argument("--budget", type=int, default=100_000)
    s.add_argument("--allow-large", action="store_true", help="permit k >= 4 linear solves")
    s.add_argument("--export", action="store_const", const=True, help="include the top chain")
    s.set_defaults(func=cmd_verify_ez)

    s = sub.add_parser("verify-homotopy", parents=[common], help="check conjugation or tower homotopies")
    s.add_argument("--kind", choices=["conj", "phi"], required=True)
    s.add_argument("--group", required=True)
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--dims")
    s.add_argument("--samples", type=int)
    s.add_argument("--bounds-only", action="store_true", help="skip the identity (any n)")
    s.set_defaults(func=cmd_verify_homotopy)

    s = sub.add_parser("bg-morphism", parents=[common], help="build X -> BG from a labeled complex")
    s.add_argument("--complex", required=True)
    s.add_argument("--group", required=True)
    s.add_argument("--check-only", action="store_true")
    s.set_defaults(func=cmd_bg_morphism)

    s = sub.add_parser("suite", parents=[common], help="run a verification suite")
    s.add_argument("name", choices=["all", *SUITES])
    s.add_argument("--max-n", type=int, default=2)
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    rep = Report(args.command)
    t0 = time.perf_counter()
    try:
        args.func(args, rep)
    except UsageError as exc:
        sys.stderr.write(f"{parser.prog} {args.command}: error: {exc}\n")
        return 2
    _emit(rep, args, time.perf_counter() - t0)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
