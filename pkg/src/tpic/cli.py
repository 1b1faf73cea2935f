"""Command line front end.

Exit codes: 0 success (including a CERTIFIED_NO verdict), 1 domain error,
2 UNRESOLVED verdict, 3 I/O or file format error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable

import numpy as np

from . import config, constructions, io, weyl
from .determination import (
    DEFAULT_TRIALS,
    Status,
    TaskPremise,
    count_classes,
    decide,
    implication_lattice,
)
from .exceptions import BadZeroSet, FormatError, TpicError
from .linalg import rank_signature
from .observables import (
    annihilator,
    observable_from_annihilator,
    operator_system_dim,
    validate,
)

EXIT_OK, EXIT_DOMAIN, EXIT_UNRESOLVED, EXIT_IO = 0, 1, 2, 3


def _emit(args, doc: dict, text: str | None = None) -> None:
    if args.format == "text" and text is not None:
        print(text)
    else:
        sys.stdout.write(io.dumps(doc))


def _save_or_print(args, doc: dict, summary: dict, text: str) -> None:
    """Write ``doc`` to ``--out`` and report ``summary``; print ``doc`` if no file."""
    if args.out:
        io.save_file(args.out, doc)
        _emit(args, {**summary, "file": args.out}, f"{text}\nwrote {args.out}")
    else:
        _emit(args, doc, io.dumps(doc).rstrip("\n"))


def parse_points(text: str, d: int, symmetrize: bool = False):
    """Parse ``"x,xi;x,xi"``. Strict by default: the set must already be symmetric."""
    pts = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        try:
            x, xi = (int(v) for v in chunk.split(","))
        except ValueError as exc:
            raise BadZeroSet(f"cannot parse point {chunk!r}, expected 'x,xi'") from exc
        pts.append((x, xi))
    if symmetrize:
        return weyl.ZeroSet.symmetrized(d, pts)
    return weyl.ZeroSet(d, pts)


def _parse_point(text: str) -> tuple[int, int]:
    try:
        x, xi = (int(v) for v in text.split(","))
    except ValueError as exc:
        raise BadZeroSet(f"cannot parse point {text!r}, expected 'x,xi'") from exc
    return x, xi


def _verdict_text(v) -> str:
    lines = [f"status: {v.status.value}", f"method: {v.method}", f"trials used: {v.trials_used}"]
    if v.witness is not None:
        lines.append(f"witness signature: {tuple(rank_signature(v.witness))}")
        lines.append("witness eigenvalues: " + " ".join(
            f"{e:+.6f}" for e in np.linalg.eigvalsh(v.witness)[::-1]))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    table = implication_lattice(args.dim)
    doc = table.to_dict()
    doc["count"] = count_classes(args.dim)
    _emit(args, doc, table.render())
    return EXIT_OK


def cmd_validate(args) -> int:
    doc = io.load_file(args.file)
    kind = io.detect_kind(doc)
    if kind == "observable":
        obs = io.observable_from_json(doc)
        rep = validate(obs)
        x = annihilator(obs)
        out = {
            "kind": kind, "valid": rep.valid, "dim": obs.dim, "outcomes": obs.n_outcomes,
            "psd_violations": [[k, m] for k, m in rep.psd_violations],
            "completeness_error": rep.completeness_error,
            "operator_system_dim": operator_system_dim(obs), "annihilator_dim": x.dimension,
        }
        text = (f"observable on C^{obs.dim}, {obs.n_outcomes} outcomes: "
                f"{'valid' if rep.valid else 'INVALID'}\n"
                f"completeness error {rep.completeness_error:.3e}, "
                f"{len(rep.psd_violations)} non-positive effects\n"
                f"operator system dim {out['operator_system_dim']}, annihilator dim {x.dimension}")
        _emit(args, out, text)
        return EXIT_OK if rep.valid else EXIT_DOMAIN
    if kind == "subspace":
        x = io.subspace_from_json(doc)
        out = {"kind": kind, "valid": True, "dim": x.dim_space, "subspace_dim": x.dimension}
        _emit(args, out, f"subspace of traceless Hermitians on C^{x.dim_space}, dimension {x.dimension}")
        return EXIT_OK
    if kind == "matrix":
        m = io.matrix_from_json(doc)
        tau = weyl.FiducialState(m)
        out = {"kind": "state", "valid": True, "dim": tau.dim}
        _emit(args, out, f"state on C^{tau.dim}")
        return EXIT_OK
    if kind == "zero_set":
        z = io.zero_set_from_json(doc)
        _emit(args, {"kind": kind, "valid": True, "dim": z.dim, "size": len(z)},
              f"zero set in Z_{z.dim} x Z_{z.dim} with {len(z)} points")
        return EXIT_OK
    mu = io.noise_from_json(doc)
    _emit(args, {"kind": kind, "valid": True, "dim": mu.dim}, f"noise on Z_{mu.dim} x Z_{mu.dim}")
    return EXIT_OK


def cmd_check(args) -> int:
    obs = io.observable_from_json(io.load_file(args.file))
    rep = validate(obs)
    if not rep.valid:
        print(f"error: not a valid observable (completeness error {rep.completeness_error:.3e}, "
              f"{len(rep.psd_violations)} non-positive effects)", file=sys.stderr)
        return EXIT_DOMAIN
    tp = TaskPremise(args.t, args.p, obs.dim)
    v = decide(annihilator(obs), tp, trials=args.trials, seed=args.seed)
    _emit(args, v.to_dict(), _verdict_text(v))
    return EXIT_UNRESOLVED if v.status is Status.UNRESOLVED else EXIT_OK


def _subspace_summary(x, label: str) -> tuple[dict, dict, str]:
    doc = io.subspace_to_json(x)
    sigs = [list(rank_signature(b)) for b in x.basis]
    summary = {"kind": "subspace", "construction": label, "annihilator_dim": x.dimension,
               "outcomes": x.dim_space ** 2 - x.dimension, "signatures": sigs}
    text = (f"{label}: {x.dimension}-dimensional subspace on C^{x.dim_space} "
            f"(realizable with {summary['outcomes']} outcomes)")
    return doc, summary, text


def _observable_summary(obs, label: str) -> tuple[dict, dict, str]:
    x = annihilator(obs)
    summary = {"kind": "observable", "construction": label, "outcomes": obs.n_outcomes,
               "annihilator_dim": x.dimension}
    text = f"{label}: {obs.n_outcomes} outcomes, annihilator dimension {x.dimension}"
    return io.observable_to_json(obs), summary, text


def cmd_construct(args) -> int:
    kind = args.kind
    if kind == "premise-cex":
        res = _subspace_summary(constructions.premise_counterexample(args.dim, args.p1), kind)
    elif kind == "task-cex":
        res = _subspace_summary(constructions.task_counterexample(args.dim, args.t1), kind)
    elif kind == "rank-deficit-d4":
        res = _subspace_summary(constructions.rank_deficit_d4(), kind)
    elif kind == "nprime":
        res = _subspace_summary(constructions.n_prime_subspace(), kind)
    elif kind == "minimal-d4":
        obs = constructions.minimal_d4_observable(args.minimal_kind)
        res = _observable_summary(obs, f"minimal-d4 {args.minimal_kind}")
    else:  # from-annihilator
        x = io.subspace_from_json(io.load_file(args.input))
        res = _observable_summary(observable_from_annihilator(x), kind)
    _save_or_print(args, *res)
    return EXIT_OK


def _zero_set_arg(args, required: bool = True):
    if args.zeros is None:
        if required:
            raise BadZeroSet("--zeros is required")
        return weyl.ZeroSet(args.dim, [])
    return parse_points(args.zeros, args.dim, args.symmetrize)


def _load_state(path: str):
    return weyl.FiducialState(io.matrix_from_json(io.load_file(path)))


def cmd_weyl(args) -> int:
    sub = args.weyl_command
    if sub == "fiducial":
        z = _zero_set_arg(args, required=False)
        alpha = weyl.SYNTHESIS_ALPHA if args.alpha is None else args.alpha
        tau = weyl.fiducial_with_zero_set(args.dim, z, alpha)
        summary = {"kind": "state", "dim": args.dim, "zero_set": [list(p) for p in z.sorted()]}
        text = f"fiducial on C^{args.dim} with zero set {z.sorted()}"
        _save_or_print(args, io.matrix_to_json(tau.tau), summary, text)
    elif sub == "covariant":
        alpha = weyl.SYNTHESIS_ALPHA if args.alpha is None else args.alpha
        tau = _load_state(args.state) if args.state else weyl.coherent_fiducial(args.dim, alpha)
        obs = weyl.covariant_observable(tau)
        _save_or_print(args, *_observable_summary(obs, "covariant"))
    elif sub == "zero-set":
        z = weyl.zero_set(_load_state(args.state), args.zero_tol)
        doc = io.zero_set_to_json(z)
        _emit(args, doc, "; ".join(f"{x},{xi}" for x, xi in z.sorted()) or "(empty)")
    elif sub == "smear":
        tau0 = _load_state(args.state)
        mu = io.noise_from_json(io.load_file(args.noise))
        tau = weyl.smear(tau0, mu)
        summary = {"kind": "state", "dim": tau.dim}
        _save_or_print(args, io.matrix_to_json(tau.tau), summary, f"smeared state on C^{tau.dim}")
    elif sub == "analyze-single":
        rep = weyl.single_point_analysis(args.dim, _parse_point(args.point))
        doc = {"dim": rep.dim, "point": list(rep.point), "signature": list(rep.signature),
               "certified_t": rep.certified_t, "refuted_t": rep.refuted_t, "summary": rep.summary}
        text = (f"single-point zero set {{{rep.point}}} in d={rep.dim}\n"
                f"generator signature {tuple(rep.signature)}\n{rep.summary}")
        _emit(args, doc, text)
    else:  # analyze-pair
        rep = weyl.two_point_prime_analysis(args.dim, _parse_point(args.point), args.theta_grid)
        doc = {"dim": rep.dim, "point": list(rep.point), "theta_grid": len(rep.thetas),
               "min_rank_down": rep.min_rank_down, "balanced_theta": rep.balanced_theta,
               "cosine_agreement": rep.cosine_agreement, "certified_t": rep.certified_t,
               "refuted_t": rep.refuted_t, "summary": rep.summary}
        text = (f"two-point zero set {{p, -p}}, p = {rep.point}, d = {rep.dim}\n"
                f"cosine spectra confirmed on {len(rep.thetas)} angles: {rep.cosine_agreement}\n"
                f"{rep.summary}")
        _emit(args, doc, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                        help="override the default 1e-10 tolerance family")
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--trials", type=int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="tpic", parents=[common], allow_abbrev=False,
        description="Rank-restricted informational completeness of quantum observables.")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("classify", parents=[common], allow_abbrev=False,
                            help="inequivalent (t, p) properties and their implications")
    p.add_argument("--dim", type=int, required=True)
    p.set_defaults(func=cmd_classify)

    p = commands.add_parser("check", parents=[common], allow_abbrev=False,
                            help="decide (t, p)-completeness of an observable file")
    p.add_argument("file")
    p.add_argument("--t", "-t", type=int, required=True)
    p.add_argument("--p", "-p", type=int, required=True)
    p.set_defaults(func=cmd_check)

    p = commands.add_parser("validate", parents=[common], allow_abbrev=False, help="validate an exchange file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = commands.add_parser("construct", parents=[common], allow_abbrev=False, help="build explicit examples")
    p.add_argument("kind", choices=("premise-cex", "task-cex", "rank-deficit-d4", "nprime",
                                    "minimal-d4", "from-annihilator"))
    p.add_argument("--dim", type=int)
    p.add_argument("--p1", type=int)
    p.add_argument("--t1", type=int)
    p.add_argument("--kind", dest="minimal_kind", default="pure-vs-all",
                   choices=[k.value for k in constructions.MinimalKind])
    p.add_argument("--input", help="subspace file for from-annihilator")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_construct)

    p = commands.add_parser("weyl", parents=[common], allow_abbrev=False, help="finite phase-space tools")
    wsub = p.add_subparsers(dest="weyl_command", required=True)
    for name, help_ in (("fiducial", "state with a prescribed zero set"),
                        ("covariant", "covariant phase-space observable"),
                        ("zero-set", "zero set of a state's inverse Weyl transform"),
                        ("smear", "apply a noise measure to a state"),
                        ("analyze-single", "one self-symmetric zero"),
                        ("analyze-pair", "zero pair {p, -p} at odd prime d")):
        w = wsub.add_parser(name, parents=[common], allow_abbrev=False, help=help_)
        w.set_defaults(func=cmd_weyl)
        if name in ("fiducial", "covariant", "analyze-single", "analyze-pair"):
            w.add_argument("--dim", type=int, required=name != "covariant")
        if name in ("fiducial", "covariant"):
            w.add_argument("--alpha", type=complex, default=None,
                           help="coherent-state parameter, e.g. 0.5 or 0.3+0.5j")
        if name == "fiducial":
            w.add_argument("--zeros", help='points "x,xi;x,xi"')
            w.add_argument("--symmetrize", action="store_true",
                           help="add the missing partners -p instead of rejecting")
        if name in ("covariant", "zero-set", "smear"):
            w.add_argument("--state", required=name != "covariant")
        if name == "zero-set":
            w.add_argument("--zero-tol", type=float, default=None)
        if name == "smear":
            w.add_argument("--noise", required=True)
        if name.startswith("analyze"):
            w.add_argument("--point", required=True)
        if name == "analyze-pair":
            w.add_argument("--theta-grid", type=int, default=720)
        if name in ("fiducial", "covariant", "smear"):
            w.add_argument("--out", "-o")
    return parser


def _check_args(args) -> None:
    if args.command == "construct":
        need = {"premise-cex": ("dim", "p1"), "task-cex": ("dim", "t1"),
                "from-annihilator": ("input",)}.get(args.kind, ())
        missing = [n for n in need if getattr(args, n) is None]
        if missing:
            raise argparse.ArgumentError(None, f"construct {args.kind} needs --{missing[0]}")
    if args.command == "weyl" and args.weyl_command == "covariant":
        if args.dim is None and args.state is None:
            raise argparse.ArgumentError(None, "covariant needs --dim or --state")


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _check_args(args)
    except argparse.ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except SystemExit as exc:
        # argparse exits with 2 on usage errors, which would read as UNRESOLVED
        return EXIT_OK if exc.code == 0 else EXIT_DOMAIN
    args.format = getattr(args, "format", "json")
    args.seed = getattr(args, "seed", 0)
    args.trials = getattr(args, "trials", DEFAULT_TRIALS)
    overrides = {}
    if hasattr(args, "tol"):
        overrides = dict(hermit=args.tol, trace=args.tol, spect=args.tol, orth=args.tol,
                         psd=args.tol, completeness=args.tol, prob=args.tol)
    handler: Callable = args.func
    try:
        with config.tolerances(**overrides):
            return handler(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except TpicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
