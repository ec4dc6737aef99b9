"""Command-line interface.

One executable, ten subcommands, JSON artifacts plus CSV tables and
figures under --out, and a run manifest with input/output digests.
Flags only; no environment-variable overrides, so a manifest pins a run.

Exit codes: 0 success, 2 validation error, 3 internal inconsistency,
64 usage.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

from . import __version__, bounds, covers, grids, hyperbolic, maps, quaddiff, spaces
from .covers import InternalInconsistencyError
from .selfcheck import run_selftest

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INTERNAL = 3
EXIT_USAGE = 64


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


class Run:
    """Collects artifacts for one invocation and writes the manifest."""

    def __init__(self, args, subcommand: str):
        self.args = args
        self.subcommand = subcommand
        self.out = Path(args.out)
        self.out.mkdir(parents=True, exist_ok=True)
        self.input_digests = {}
        self.aux_files = []

    def read_input(self, path: str) -> str:
        data = Path(path).read_bytes()
        self.input_digests[str(path)] = _digest(data)
        return data.decode()

    def aux(self, name: str) -> Path:
        self.aux_files.append(name)
        return self.out / name

    def finish(self, artifact: dict, parameters: dict) -> Path:
        body = _dump(artifact)
        primary = self.out / f"{self.subcommand}.json"
        primary.write_text(body)
        manifest = {
            "subcommand": self.subcommand,
            "parameters": parameters,
            "seed": self.args.seed,
            "threads": self.args.threads,
            "tool_version": __version__,
            "input_digests": self.input_digests,
            "output_digest": _digest(body.encode()),
            "aux_files": sorted(self.aux_files),
        }
        (self.out / "manifest.json").write_text(_dump(manifest))
        if self.args.format == "table":
            _print_table(artifact)
        else:
            sys.stdout.write(body)
        return primary


def _print_table(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _scalar_list(v):
                print(f"{pad}{k}:")
                _print_table(v, indent + 1)
            else:
                print(f"{pad}{k:<24} {v}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            if isinstance(v, (dict, list)):
                print(f"{pad}- [{i}]")
                _print_table(v, indent + 1)
            else:
                print(f"{pad}- {v}")


def _scalar_list(v):
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _parse_ids(text):
    if text is None:
        return None
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            out.append(int(tok))
        except ValueError:
            out.append(tok)
    return tuple(out)


def _parse_floats(text):
    return [float(t) for t in text.split(",") if t.strip()]


# -- subcommand handlers -----------------------------------------------


def _cmd_cover(args):
    run = Run(args, "cover")
    space = spaces.FiniteMetricSpace.from_json(run.read_input(args.space))
    E = _parse_ids(args.subset)
    ambient = _parse_ids(args.ambient)
    solver = spaces.covering_number_greedy if args.greedy \
        else spaces.covering_number_exact
    count, cert = solver(space, E=E, ambient=ambient, r=args.radius,
                         ball_kind=args.kind, max_points=args.max_points)
    covered = E if E is not None else (ambient if ambient is not None
                                       else space.point_ids)
    artifact = {
        "count": count,
        "exact": not args.greedy,
        "radius": args.radius,
        "ball_kind": args.kind,
        "certificate": json.loads(cert.to_json()),
        "certificate_valid": cert.validate(space, covered, ambient),
    }
    run.finish(artifact, {
        "space": args.space, "radius": args.radius, "kind": args.kind,
        "subset": args.subset, "ambient": args.ambient, "greedy": args.greedy,
    })
    return EXIT_OK


def _cmd_pack(args):
    run = Run(args, "pack")
    space = spaces.FiniteMetricSpace.from_json(run.read_input(args.space))
    E = _parse_ids(args.subset)
    count, cert = spaces.packing_number_exact(space, E=E, r=args.radius,
                                              max_points=args.max_points)
    artifact = {
        "count": count,
        "radius": args.radius,
        "certificate": json.loads(cert.to_json()),
        "certificate_valid": cert.validate(space),
    }
    run.finish(artifact, {"space": args.space, "radius": args.radius,
                          "subset": args.subset})
    return EXIT_OK


def _cmd_chain(args):
    run = Run(args, "chain")
    space = spaces.FiniteMetricSpace.from_json(run.read_input(args.space))
    x = _parse_ids(args.x)[0]
    chk = spaces.verify_chain_inequality(space, x, args.r, args.p, args.q,
                                         ball_kind=args.kind)
    artifact = {
        "lhs": chk.lhs,
        "rhs": chk.rhs,
        "holds": chk.holds,
        "base_count": chk.base_count,
        "sup_two_step": chk.sup_two_step,
        "reachability_hypothesis": spaces.chain_reachable(
            space, x, args.r, args.p, args.kind),
    }
    run.finish(artifact, {"space": args.space, "x": args.x, "r": args.r,
                          "p": args.p, "q": args.q, "kind": args.kind})
    return EXIT_OK


def _cmd_grid(args):
    from . import report
    run = Run(args, "grid")
    if args.complex_dim:
        plan = grids.complex_sup_cover_bound(args.complex_dim, args.R, args.r)
        chk = grids.verify_complex_cover(plan, n_samples=args.samples,
                                         seed=args.seed)
        artifact = {
            "mode": "complex",
            "n": args.complex_dim,
            "R": args.R,
            "r": args.r,
            "closed_form_bound": plan.bound,
            "ball_budget": plan.ball_budget,
            "constructed_count": plan.constructed_count,
            "grid": json.loads(plan.grid.to_json()),
            "verification": {
                "covered": chk.covered,
                "worst_margin": chk.worst_margin,
                "samples": chk.samples,
            },
        }
        params = {"complex": args.complex_dim, "R": args.R, "r": args.r}
    else:
        grid = grids.real_grid_cover(args.m, args.R, args.r, args.delta)
        res = args.resolution or max(min(args.r, args.delta) / 2, args.R / 200)
        chk = grids.verify_cover(grid, args.R, res)
        artifact = {
            "mode": "real",
            "m": args.m,
            "R": args.R,
            "r": args.r,
            "delta": args.delta,
            "closed_form_bound": grids.simplified_count_bound(args.m, args.R, args.r),
            "constructed_count": grid.count,
            "volume_lower_bound": grids.volume_lower_bound(
                args.m, args.R, grid.ball_radius)
            if args.R > grid.ball_radius else 1.0,
            "grid": json.loads(grid.to_json()),
            "verification": {
                "covered": chk.covered,
                "worst_margin": chk.worst_margin,
                "certified_margin": chk.certified_margin,
                "step": chk.step,
                "samples": chk.samples,
                "counterexample": chk.counterexample,
            },
        }
        report.write_csv(run.aux("grid_summary.csv"),
                         ["quantity", "value"],
                         [["constructed_count", grid.count],
                          ["closed_form_bound", artifact["closed_form_bound"]],
                          ["volume_lower_bound", artifact["volume_lower_bound"]],
                          ["worst_margin", chk.worst_margin]])
        if args.m == 2 and args.figures:
            report.save_figure(report.grid_cover_figure(grid, args.R),
                               run.aux("grid_cover.png"))
        params = {"m": args.m, "R": args.R, "r": args.r, "delta": args.delta}
    run.finish(artifact, params)
    return EXIT_OK


def _cmd_hyp(args):
    from . import report
    run = Run(args, "hyp")
    eps_values = _parse_floats(args.theta_eps)
    theta_rows = []
    for eps in eps_values:
        res = hyperbolic.min_angle_bound(eps)
        theta_rows.append([eps, res.theta, *res.minimizer])
    deltas = _parse_floats(args.push_deltas)
    push_rows = []
    for d in deltas:
        push_rows.append([d, hyperbolic.point_push(args.push_a, d).K_estimate])
    artifact = {
        "theta_table": [{"eps": r[0], "theta": r[1],
                         "minimizer": r[2:]} for r in theta_rows],
        "push_sweep": [{"delta": r[0], "K": r[1]} for r in push_rows],
        "push_ball_radius": args.push_a,
    }
    report.write_csv(run.aux("theta_table.csv"),
                     ["eps", "theta", "side_a", "side_b", "side_c"],
                     theta_rows)
    report.write_csv(run.aux("push_sweep.csv"), ["delta", "K"], push_rows)
    if args.figures:
        report.save_figure(
            report.theta_table_figure([r[0] for r in theta_rows],
                                      [r[1] for r in theta_rows]),
            run.aux("theta_table.png"))
        report.save_figure(
            report.push_sweep_figure([r[0] for r in push_rows],
                                     [r[1] for r in push_rows], args.push_a),
            run.aux("push_sweep.png"))
    run.finish(artifact, {"theta_eps": args.theta_eps,
                          "push_a": args.push_a,
                          "push_deltas": args.push_deltas})
    return EXIT_OK


def _cmd_qd(args):
    from . import report
    run = Run(args, "qd")
    xi = args.xi
    delta = quaddiff.variation_delta_for_xi(xi)
    phis, norms = quaddiff.random_family(args.trials, degree=args.degree,
                                         seed=args.seed)
    observed = quaddiff.empirical_variation(
        phis, delta, trials=args.pairs, seed=args.seed + 1)
    region = hyperbolic.hyp_radius(quaddiff.attainment_radius(args.degree)) + 1e-9
    net = hyperbolic.disk_net(region, delta,
                              validation_samples=min(1000, 50 * args.trials),
                              seed=args.seed)
    chk = quaddiff.empirical_bilipschitz(phis, net, q_norms=norms)
    artifact = {
        "xi": xi,
        "delta": delta,
        "lower": chk.lower,
        "upper": chk.upper,
        "trials": args.trials,
        "seed": args.seed,
        "degree": args.degree,
        "observed_variation": observed,
        "norm_rel_error": chk.norm_rel_error,
        "net_size": chk.net_size,
        "net_region_radius": region,
        "net_worst_sampled_gap": net.worst_sampled_gap,
    }
    sups = quaddiff.family_net_sups(phis, net)
    rows = [[i, float(s / n.value)] for i, (s, n) in
            enumerate(zip(sups, norms))]
    report.write_csv(run.aux("qd_ratios.csv"), ["phi_index", "ratio"], rows)
    if args.figures:
        report.save_figure(
            report.ratio_histogram_figure([r[1] for r in rows], 1 - xi),
            run.aux("qd_ratios.png"))
    run.finish(artifact, {"xi": xi, "degree": args.degree,
                          "trials": args.trials, "pairs": args.pairs})
    return EXIT_OK


def _cmd_maps(args):
    from . import report
    run = Run(args, "maps")
    classes = maps.enumerate_triangulation_classes(
        args.genus, max_edges=args.max_edges, max_degree=args.max_degree,
        threads=args.threads)
    by_edges = {}
    for c in classes:
        by_edges[c.edges] = by_edges.get(c.edges, 0) + 1
    artifact = {
        "genus": args.genus,
        "max_edges": args.max_edges,
        "max_degree": args.max_degree,
        "class_count": len(classes),
        "classes_by_edges": {str(k): v for k, v in sorted(by_edges.items())},
        "classes": [c.to_json_dict() for c in classes],
    }
    report.write_csv(run.aux("maps_classes.csv"),
                     ["canonical", "vertices", "edges", "faces", "genus",
                      "max_degree"],
                     [[c.canonical, c.vertices, c.edges, c.faces, c.genus,
                       c.max_degree] for c in classes])
    if args.figures and by_edges:
        report.save_figure(report.class_size_figure(by_edges),
                           run.aux("maps_classes.png"))
    run.finish(artifact, {"genus": args.genus, "max_edges": args.max_edges,
                          "max_degree": args.max_degree})
    return EXIT_OK


def _cmd_covers(args):
    from . import report
    run = Run(args, "covers")
    manifest = covers.census(args.degree)
    hom, trans, sub = [], [], []
    degs = list(range(1, args.degree + 1))
    hs = [covers.mednykh_hom_count(n) for n in degs]
    ts = covers.hall_transitive_counts(hs)
    ss = covers.subgroup_counts(ts)
    report.write_csv(run.aux("covers_counts.csv"),
                     ["degree", "hom", "transitive", "subgroup"],
                     list(zip(degs, hs, ts, ss)))
    if args.figures:
        report.save_figure(report.census_figure(degs, hs, ts, ss),
                           run.aux("covers_counts.png"))
    run.finish(manifest, {"degree": args.degree})
    return EXIT_OK


def _cmd_bounds(args):
    run = Run(args, "bounds")
    kv = {}
    for item in args.params:
        if "=" not in item:
            raise ValueError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        kv[k] = float(v)

    def need(*names):
        missing = [n for n in names if n not in kv]
        if missing:
            raise ValueError(f"{args.name} needs parameters: {missing}")
        return [kv[n] for n in names]

    g = int(kv.get("g", 0))
    if args.name == "main":
        c1, c2 = need("c1", "c2")
        lo, hi = bounds.growth_envelope_bounds(g, c1, c2)
        reports = [lo, hi]
    elif args.name == "lower-composition":
        P, D = need("P", "D")
        reports = [bounds.lower_bound_composition(P, D, g)]
    elif args.name == "diameter":
        c1, d2 = need("c1", "d2")
        reports = [bounds.diameter_chain(g, c1, d2)]
    elif args.name == "ball":
        d1, d2 = need("d1", "d2")
        reports = list(bounds.ball_cover_bounds(g, d1, d2))
    elif args.name == "packing-budget":
        D, Q, r = need("D", "Q", "r")
        reports = [bounds.packing_budget(D, Q, g, r)]
    else:
        raise ValueError(f"unknown bound name {args.name!r}")
    artifact = {
        "name": args.name,
        "defaults": bounds.DEFAULT_CONSTANTS,
        "reports": [r.to_json_dict() for r in reports],
    }
    run.finish(artifact, {"name": args.name, "params": sorted(args.params)})
    return EXIT_OK


def _cmd_selftest(args):
    run = Run(args, "selftest")
    results = run_selftest(seed=args.seed, threads=args.threads)
    for name, ok, detail in results:
        print(f"{'ok  ' if ok else 'FAIL'} {name}: {detail}")
    artifact = {
        "passed": all(ok for _, ok, _ in results),
        "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in results],
    }
    run.finish(artifact, {})
    return EXIT_OK if artifact["passed"] else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="thickcover",
        description="Desk-scale covering/packing computations: metric "
                    "spaces, sup-norm grids, hyperbolic triangles, "
                    "quadratic differentials, surface maps, cover census.")
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", default="out")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--no-figures", dest="figures", action="store_false",
                        help="skip figure rendering")

    sub = ap.add_subparsers(dest="cmd")

    p = sub.add_parser("cover", parents=[common],
                       help="exact or greedy covering number of a space file")
    p.add_argument("--space", required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--kind", choices=("closed", "open"), default="closed")
    p.add_argument("--subset", default=None)
    p.add_argument("--ambient", default=None)
    p.add_argument("--greedy", action="store_true")
    p.add_argument("--max-points", type=int, default=spaces.DEFAULT_MAX_POINTS)
    p.set_defaults(fn=_cmd_cover)

    p = sub.add_parser("pack", parents=[common],
                       help="exact packing number of a space file")
    p.add_argument("--space", required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--subset", default=None)
    p.add_argument("--max-points", type=int, default=spaces.DEFAULT_MAX_POINTS)
    p.set_defaults(fn=_cmd_pack)

    p = sub.add_parser("chain", parents=[common],
                       help="evaluate the layered-cover comparison")
    p.add_argument("--space", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--kind", choices=("closed", "open"), default="closed")
    p.set_defaults(fn=_cmd_chain)

    p = sub.add_parser("grid", parents=[common],
                       help="lattice cover of a sup-norm ball")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--resolution", type=float, default=None)
    p.add_argument("--complex", dest="complex_dim", type=int, default=None,
                   help="complex dimension n: budget for the C^n sup ball")
    p.add_argument("--samples", type=int, default=10_000)
    p.set_defaults(fn=_cmd_grid)

    p = sub.add_parser("hyp", parents=[common],
                       help="minimum-angle table and point-push sweep")
    p.add_argument("--theta-eps", default="0.1,0.5,1,2")
    p.add_argument("--push-a", type=float, default=1.0)
    p.add_argument("--push-deltas", default="0.1,0.01,0.001")
    p.set_defaults(fn=_cmd_hyp)

    p = sub.add_parser("qd", parents=[common],
                       help="variation and sampling-map pinch experiment")
    p.add_argument("--xi", type=float, default=0.1)
    p.add_argument("--degree", type=int, default=quaddiff.DEFAULT_DEGREE_CAP)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--pairs", type=int, default=32)
    p.set_defaults(fn=_cmd_qd)

    p = sub.add_parser("maps", parents=[common],
                       help="enumerate triangle-faced maps up to isomorphism")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--max-edges", type=int, default=9)
    p.add_argument("--max-degree", type=int, default=12)
    p.set_defaults(fn=_cmd_maps)

    p = sub.add_parser("covers", parents=[common],
                       help="genus-2 cover census at one degree")
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(fn=_cmd_covers)

    p = sub.add_parser("bounds", parents=[common],
                       help="log-scale bound reports from named constants")
    p.add_argument("name", choices=("main", "lower-composition", "diameter",
                                    "ball", "packing-budget"))
    p.add_argument("params", nargs="*",
                   help="key=value constants, e.g. g=12 c1=0.5 c2=2")
    p.set_defaults(fn=_cmd_bounds)

    p = sub.add_parser("selftest", parents=[common],
                       help="run the condensed invariant suite")
    p.set_defaults(fn=_cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage problems
        code = exc.code if isinstance(exc.code, int) else 1
        return EXIT_OK if code == 0 else EXIT_USAGE
    if not getattr(args, "cmd", None):
        ap.print_usage()
        return EXIT_USAGE
    try:
        return args.fn(args)
    except (ValueError, KeyError, OSError, spaces.MetricValidationError,
            spaces.UncoverableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InternalInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
