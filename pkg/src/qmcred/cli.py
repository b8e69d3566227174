"""Command-line front end.

Exit status: 0 when every claim passes (or a non-verifying command
succeeds), 1 when a claim fails, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .cloud import blow_up_hamiltonian, verify_sandwich
from .graphs import (ExpanderError, Graph, InputError, SpectralCertificate, load_graph,
                     make_bipartite_expander, make_named_graph)
from .ptas import (Constants, ReductionBundle, build_reduction, plan_parameters, verify_bipartite_samples,
                   verify_end_to_end, verify_lemma_main)
from .quantum import LocalHamiltonian, opt, opt_prod, qmc_hamiltonian, xy_hamiltonian
from .rankcut import assignment_to_json, solve_exact_rank1, solve_rankk, verify_triangle
from .report import Report, _jsonable
from .spin import (two_j_of, verify_block_decomposition, verify_lieb, verify_lieb_all,
                   verify_opt_maxJ)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(exc.strerror or "cannot read", "--input") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON ({exc.msg} at line {exc.lineno})", str(path)) from None


def _load_graph(args) -> Graph:
    if not args.input:
        raise UsageError("--input is required")
    try:
        return load_graph(args.input)
    except OSError as exc:
        raise InputError(exc.strerror or "cannot read", "--input") from None


def _load_hamiltonian(args):
    """``(h, graph)``: a Hamiltonian file, or a graph turned into its QMC (or XY) Hamiltonian."""
    if not args.input:
        raise UsageError("--input is required")
    data = _read_json(args.input)
    if isinstance(data, dict) and "terms" in data:
        return LocalHamiltonian.from_json(data), None
    g = Graph.from_json(data.get("graph", data) if isinstance(data, dict) else data)
    build = xy_hamiltonian if args.model == "xy" else qmc_hamiltonian
    return build(g), (g if args.model == "qmc" else None)


def _tol(args, default: float) -> float:
    return default if args.tol is None else args.tol


def _write(path, payload) -> None:
    if path:
        text = payload if isinstance(payload, str) else json.dumps(payload, indent=1, default=_jsonable) + "\n"
        Path(path).write_text(text)


def _finish(args, rep: Report) -> int:
    _write(args.out, rep.dumps())
    print(rep.summary())
    return EXIT_OK if rep.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# commands

def cmd_gen(args) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    if args.kind == "expander":
        g, cert = make_bipartite_expander(args.n, args.d, args.gap, seed=args.seed)
        payload = {"graph": g.to_json(), "certificate": cert.to_json()}
        print(f"expander: {g.n} vertices, {g.m} edges, lambda_max {cert.lambda_max:.12g}, gap {cert.gap:.12g}")
    else:
        g = make_named_graph(args.kind, args.n, p=args.p, seed=args.seed)
        payload = g.to_json()
        print(f"{args.kind}: {g.n} vertices, {g.m} edges")
    _write(args.out, payload)
    return EXIT_OK


def cmd_reduce_ptas(args) -> int:
    g = _load_graph(args)
    bundle = build_reduction(g, args.eta, args.d, args.gap, seed=args.seed)
    if args.out:
        bundle.save(args.out)
    c = bundle.constants
    print(f"G': {bundle.g_prime.n} vertices, {bundle.g_prime.m} edges (eta {bundle.eta}, d {bundle.d})")
    print(f"lambda_max {c.lambda_max:.12g}, gap {c.gap:.12g}, C {c.C:.12g}, c {c.c:.12g}")
    return EXIT_OK


def cmd_reduce_cloud(args) -> int:
    h, _ = _load_hamiltonian(args)
    hp, _ = blow_up_hamiltonian(h, args.T)
    if args.out:
        hp.save(args.out)
    print(f"H': {hp.n} qubits, {len(hp.terms)} terms (T = {args.T})")
    return EXIT_OK


def cmd_solve_rankcut(args) -> int:
    g = _load_graph(args)
    if args.exact:
        if args.k != 1:
            raise UsageError("--exact applies to k = 1 only")
        value, x = solve_exact_rank1(g)
        payload = {"value": value, "k": 1, "provenance": "brute-force", "assignment": assignment_to_json(x)}
    else:
        res = solve_rankk(g, args.k, restarts=args.restarts, seed=args.seed, tol=_tol(args, 1e-10))
        payload = {"value": res.value, "k": args.k, "provenance": "ascent-lower-bound",
                   "converged": res.converged, "assignment": assignment_to_json(res.x)}
    _write(args.out, payload)
    print(f"Max-Cut_{args.k} value {payload['value']!r} ({payload['provenance']})")
    return EXIT_OK


def cmd_solve_qmc_exact(args) -> int:
    h, _ = _load_hamiltonian(args)
    value = opt(h)
    _write(args.out, {"value": value, "n": h.n, "provenance": "exact"})
    print(f"OPT = {value!r} ({h.n} qubits, dense diagonalisation)")
    return EXIT_OK


def cmd_solve_product(args) -> int:
    h, _ = _load_hamiltonian(args)
    res = opt_prod(h, restarts=args.restarts, seed=args.seed)
    _write(args.out, {**res.to_json(), "provenance": "ascent-lower-bound"})
    print(f"OPTprod >= {res.value!r} (best of {args.restarts} product ascents)")
    return EXIT_OK


def cmd_verify_triangle(args) -> int:
    rep = verify_triangle(args.samples or 100, tol=_tol(args, 1e-6))
    return _finish(args, rep)


def cmd_verify_bipartite(args) -> int:
    if args.input:
        data = _read_json(args.input)
        if not isinstance(data, dict) or "certificate" not in data:
            raise InputError("expander file needs 'graph' and 'certificate'", "certificate")
        g = Graph.from_json(data.get("graph"))
        cert = SpectralCertificate.from_json(data["certificate"])
    else:
        if args.n is None:
            raise UsageError("give --input (an expander file from gen) or --n half-size")
        g, cert = make_bipartite_expander(args.n, args.d, args.gap, seed=args.seed)
    rep = verify_bipartite_samples(g, cert, k=args.k or 3, n_random=args.samples or 100,
                                   n_ascended=args.trials if args.trials is not None else 20,
                                   seed=args.seed, tol=_tol(args, 1e-9))
    return _finish(args, rep)


def cmd_verify_ptas(args) -> int:
    if not args.bundle:
        raise UsageError("--bundle is required")
    try:
        bundle = ReductionBundle.load(args.bundle)
    except OSError as exc:
        raise InputError(exc.strerror or "cannot read", "--bundle") from None
    rep = verify_lemma_main(bundle, args.k or 1, args.trials or 200, seed=args.seed, tol=_tol(args, 1e-9))
    return _finish(args, rep)


def cmd_verify_sandwich(args) -> int:
    h, g = _load_hamiltonian(args)
    rep = verify_sandwich(h, args.T, restarts=args.restarts, seed=args.seed, graph=g, tol=_tol(args, 1e-8))
    return _finish(args, rep)


def cmd_verify_lieb(args) -> int:
    h, _ = _load_hamiltonian(args)
    tol = _tol(args, 1e-8)
    if args.J:
        try:
            two_js = [two_j_of(s) for s in args.J.split(",")]
        except ValueError as exc:
            raise InputError(str(exc), "--J") from None
        rep = verify_lieb(h, two_js, restarts=args.restarts, seed=args.seed, tol=tol).finish()
    else:
        rep = verify_lieb_all(h, max_two_j=args.max_two_j, restarts=args.restarts, seed=args.seed, tol=tol)
    return _finish(args, rep)


def cmd_verify_blocks(args) -> int:
    rep = verify_block_decomposition(args.T, tol=_tol(args, 1e-10))
    if args.input:
        h, _ = _load_hamiltonian(args)
        sub = verify_opt_maxJ(h, args.T, tol=_tol(args, 1e-8))
        rep.extend(sub)
        rep.meta["opt_maxJ"] = sub.meta
        rep.finish()
    return _finish(args, rep)


def cmd_verify_end_to_end(args) -> int:
    g = _load_graph(args)
    rep = verify_end_to_end(g, args.beta, k=args.k or 1, d=args.d, gap_target=args.gap, seed=args.seed,
                            samples=args.samples or 24, tol=_tol(args, 1e-9))
    return _finish(args, rep)


def cmd_plan(args) -> int:
    if args.beta is None:
        raise UsageError("--beta is required")
    if args.bundle:
        try:
            bundle = ReductionBundle.load(args.bundle)
        except OSError as exc:
            raise InputError(exc.strerror or "cannot read", "--bundle") from None
        constants, source = bundle.constants, f"certificate of {args.bundle}"
    else:
        constants, source = Constants.from_spectrum(2.0 * args.d, args.gap), f"worst case for d={args.d}, gap>={args.gap}"
    plan = plan_parameters(args.beta, constants, eta=args.eta)
    payload = {**plan.to_json(), "constants": constants.to_json(), "constants_source": source}
    _write(args.out, payload)
    print(f"beta  = {plan.beta!r}")
    print(f"eta   = {plan.eta} (bound {plan.eta_min:.6g}; constants from {source})")
    print(f"alpha = {plan.alpha!r}")
    print(f"alpha with eta dropped = {plan.alpha_as_printed!r}")
    print(plan.guarantee)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="graph (JSON or edge list) or Hamiltonian JSON")
    p.add_argument("--out", help="write the JSON report or result here")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None, help="override the default tolerance")
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--eta", type=int, default=None)
    p.add_argument("--d", type=int, default=8)
    p.add_argument("--gap", type=float, default=1.0, help="expander gap target")
    p.add_argument("--T", type=int, default=2, help="cloud size")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--model", choices=("qmc", "xy"), default="qmc",
                   help="Hamiltonian built when --input is a graph")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmcred", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qmcred {__version__}")
    top = parser.add_subparsers(dest="command", required=True)

    def leaf(sub, name, func, help_):
        p = sub.add_parser(name, help=help_)
        _common(p)
        p.set_defaults(func=func)
        return p

    p = leaf(top, "gen", cmd_gen, "generate a graph or certified bipartite expander")
    p.add_argument("--kind", choices=("complete", "cycle", "path", "erdos_renyi", "expander"), required=True)
    p.add_argument("--n", type=int, help="vertex count (half size for expanders)")
    p.add_argument("--p", type=float, default=None, help="edge probability for erdos_renyi")

    red = top.add_parser("reduce", help="build reductions").add_subparsers(dest="what", required=True)
    p = leaf(red, "ptas", cmd_reduce_ptas, "rank-k to rank-(k+1) reduction bundle")
    p.set_defaults(eta=2)
    leaf(red, "cloud", cmd_reduce_cloud, "cloud blow-up of a Hamiltonian")

    sol = top.add_parser("solve", help="solvers").add_subparsers(dest="what", required=True)
    p = leaf(sol, "rankcut", cmd_solve_rankcut, "rank-k Max-Cut by multi-start ascent")
    p.add_argument("--exact", action="store_true", help="brute force (k = 1)")
    p.set_defaults(k=1)
    leaf(sol, "qmc-exact", cmd_solve_qmc_exact, "largest eigenvalue by dense diagonalisation")
    leaf(sol, "product", cmd_solve_product, "best product state by Bloch-vector ascent")

    ver = top.add_parser("verify", help="numerical verification").add_subparsers(dest="what", required=True)
    leaf(ver, "triangle", cmd_verify_triangle, "triangle gadget closed form and bound")
    p = leaf(ver, "bipartite", cmd_verify_bipartite, "expander energy bound")
    p.add_argument("--n", type=int, help="half size when generating the expander")
    p.set_defaults(d=4, gap=0.1)
    p = leaf(ver, "ptas", cmd_verify_ptas, "witness identity and pullback bound on a bundle")
    p.add_argument("--bundle")
    leaf(ver, "sandwich", cmd_verify_sandwich, "product-state sandwich for the cloud Hamiltonian")
    p = leaf(ver, "lieb", cmd_verify_lieb, "Lieb inequality over spin vectors")
    p.add_argument("--J", help="comma separated spins, e.g. 1,1/2; default enumerates all")
    p.add_argument("--max-two-j", type=int, default=6, help="largest 2J in the enumeration")
    leaf(ver, "blocks", cmd_verify_blocks, "spin-block decomposition (and block maxima with --input)")
    p = leaf(ver, "end-to-end", cmd_verify_end_to_end, "ratio transfer through planned parameters")
    p.set_defaults(beta=0.9)

    p = leaf(top, "plan", cmd_plan, "eta and alpha for a target ratio beta")
    p.add_argument("--bundle")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
    except (ValueError, ExpanderError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
