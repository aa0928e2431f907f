"""Command-line front end.

Exit codes: 0 success, 2 invalid spec or flags, 3 numerical failure or a
failed verification, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .chain import ChainSpec, Normalization, make_chain, make_uniform_bose, make_xx_engineered, number_to_json, one_excitation
from .design import engineered_heisenberg, optimize_mirror_fidelity
from .dynamics import fidelity_scan, mirror_time
from .errors import (DegenerateInput, InternalInconsistency, InvalidAmplitude, InvalidSite, InvalidSpec,
                     NotMirrorSymmetric, NumericalFailure, UnsupportedNormalization)
from .nogo import certificate, randomized_identity_suite, spmc_classify
from .parity import fold, identities
from .spectral import commensurability, eigensystem, endpoint_overlap_check

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

PRESETS = ("bose", "xx", "xx-raw", "heisenberg", "rescue")


class VerificationFailed(Exception):
    pass


def _load_spec(args) -> ChainSpec:
    path = args.spec
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        return ChainSpec.from_json(text)
    if args.preset is None:
        raise InvalidSpec("give --spec FILE or --preset NAME")
    if args.n is None:
        raise InvalidSpec("--preset needs --n")
    n = args.n
    if args.preset == "bose":
        return make_uniform_bose(n, args.j, args.b)
    if args.preset == "xx":
        return make_xx_engineered(n, unit_spacing=True)
    if args.preset == "xx-raw":
        return make_xx_engineered(n, unit_spacing=False)
    if args.preset == "heisenberg":
        return make_chain(n, 1, [args.j] * (n - 1), [0] * n)
    return engineered_heisenberg(n)


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("chain")
    g.add_argument("--spec", "--file", dest="spec", metavar="FILE", help="ChainSpec JSON file")
    g.add_argument("--preset", choices=PRESETS, help="built-in chain instead of a file")
    g.add_argument("--n", type=int, help="site count for --preset")
    g.add_argument("--j", default="1", help="coupling scale for presets (accepts p/q)")
    g.add_argument("--b", default="0", help="uniform field for the bose preset")


def _add_output_args(p: argparse.ArgumentParser, formats=("json", "text")) -> None:
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", metavar="FILE", help="write to FILE instead of standard output")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spinmirror", description="State-transfer analysis of spin-1/2 chains")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="verb", required=True, metavar="VERB")

    p = sub.add_parser("spec", help="validate (and canonicalize) a chain spec")
    _add_spec_args(p)
    p.add_argument("--canonicalize", action="store_true", help="emit the canonical JSON form")
    _add_output_args(p)

    p = sub.add_parser("spectrum", help="one-excitation spectrum and commensurability")
    _add_spec_args(p)
    p.add_argument("--normalization", choices=[x.value for x in Normalization], default="physical")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--q-max", type=int, default=10**6)
    _add_output_args(p, ("json", "csv", "text"))

    p = sub.add_parser("fold", help="even/odd parity blocks of a symmetric chain")
    _add_spec_args(p)
    p.add_argument("--normalization", choices=[x.value for x in Normalization], default="laplacian")
    _add_output_args(p)

    p = sub.add_parser("identities", help="exact trace and determinant identities")
    _add_spec_args(p)
    _add_output_args(p)

    p = sub.add_parser("spmc", help="spectrum parity-matching verdict")
    _add_spec_args(p)
    p.add_argument("--normalization", choices=[x.value for x in Normalization], default="physical")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--q-max", type=int, default=10**6)
    _add_output_args(p)

    p = sub.add_parser("certificate", help="parity-contradiction certificate for n sites")
    p.add_argument("--n", type=int, required=True)
    _add_output_args(p)

    p = sub.add_parser("scan", help="transfer amplitude and fidelity over a time grid")
    _add_spec_args(p)
    p.add_argument("--source", type=int, default=1)
    p.add_argument("--target", type=int, default=None, help="default: last site")
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--no-refine", action="store_true")
    p.add_argument("--uncompensated", action="store_true", help="keep the transfer phase in F")
    _add_output_args(p, ("csv", "json", "text"))

    p = sub.add_parser("mirror", help="half-period mirror time, if any")
    _add_spec_args(p)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--q-max", type=int, default=10**6)
    _add_output_args(p)

    p = sub.add_parser("design", help="search couplings (and fields) for end-to-end transfer")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--fields", action=argparse.BooleanOptionalAction, default=False)
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--restarts", type=int, default=8)
    _add_output_args(p)

    p = sub.add_parser("verify", help="randomized exact-identity and SPMC sweep")
    p.add_argument("--n", type=int, nargs="+", default=list(range(3, 13)))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--dynamics", action="store_true", help="also cross-check mirror times")
    _add_output_args(p)
    return ap


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if hasattr(x, "numerator") and not isinstance(x, (int, bool)):
        return number_to_json(x)
    return x


def _text(payload: dict, indent: str = "") -> str:
    lines = []
    for k, v in payload.items():
        if isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            lines.append(_text(v, indent + "  "))
        else:
            lines.append(f"{indent}{k}: {v}")
    return "\n".join(lines)


def _emit(args, payload: dict, stream) -> None:
    payload = _jsonable(payload)
    if args.format == "json":
        stream.write(json.dumps(payload, indent=2) + "\n")
    else:
        stream.write(_text(payload) + "\n")


def _cmd_spec(args, out):
    spec = _load_spec(args)
    if args.canonicalize:
        out.write(spec.to_json() + "\n")
        return
    _emit(args, {"spec": spec.to_dict(), "symmetric": spec.is_symmetric, "exact": spec.is_exact}, out)


def _cmd_spectrum(args, out):
    spec = _load_spec(args)
    h = one_excitation(spec, args.normalization)
    sd = eigensystem(h)
    comm = commensurability(sd.eigenvalues, args.tol, args.q_max)
    ov = endpoint_overlap_check(sd)
    if args.format == "csv":
        out.write("k,eigenvalue,first_component\n")
        for k, (e, c) in enumerate(zip(sd.eigenvalues, sd.eigenvectors[0])):
            out.write(f"{k},{e:.17g},{c:.17g}\n")
        return
    _emit(args, {
        "params": {"normalization": args.normalization, "tol": args.tol, "q_max": args.q_max},
        "vacuum_energy": float(h.vacuum_energy),
        "eigenvalues": sd.eigenvalues,
        "commensurate": comm.commensurate,
        "base": comm.base, "integers": comm.integers, "period": comm.period,
        "endpoint_overlap": {"ok": ov.ok, "minimum": ov.minimum},
    }, out)


def _block_payload(b):
    d = {"diag": b.diag, "offdiag": b.offdiag}
    if b.exact_diag is not None:
        d["exact_diag"] = list(b.exact_diag)
        d["exact_offsq"] = list(b.exact_offsq)
    return d


def _cmd_fold(args, out):
    spec = _load_spec(args)
    blocks = fold(one_excitation(spec, args.normalization), spec)
    _emit(args, {"n": spec.n, "normalization": args.normalization,
                 "even": _block_payload(blocks.even), "odd": _block_payload(blocks.odd),
                 "residual": blocks.residual}, out)


def _cmd_identities(args, out):
    spec = _load_spec(args)
    blocks = fold(one_excitation(spec, Normalization.LAPLACIAN), spec)
    _emit(args, identities(blocks, spec).to_dict(), out)


def _cmd_spmc(args, out):
    spec = _load_spec(args)
    blocks = fold(one_excitation(spec, args.normalization), spec)
    v = spmc_classify(blocks, args.tol, args.q_max)
    _emit(args, {"params": {"normalization": args.normalization, "tol": args.tol, "q_max": args.q_max},
                 "satisfied": v.satisfied, "scale": v.scale, "shift": v.shift,
                 "even_integers": v.even_integers, "odd_integers": v.odd_integers,
                 "failure_reason": v.failure_reason.value}, out)


def _cmd_certificate(args, out):
    _emit(args, certificate(args.n).to_dict(), out)


def _cmd_scan(args, out, stdout):
    spec = _load_spec(args)
    rep = fidelity_scan(spec, args.source, args.target, args.t_max, args.points,
                        refine=not args.no_refine, phase_compensated=not args.uncompensated)
    summary = {
        "params": {"source": args.source, "target": args.target or spec.n, "t_max": args.t_max,
                   "points": len(rep.times), "refine": not args.no_refine,
                   "phase_compensated": rep.phase_compensated},
        "peak_time": rep.peak_time, "peak_fidelity": rep.peak_fidelity, "peak_abs_f": rep.peak_abs_f,
    }
    if args.format == "csv":
        rep.write_csv(out)
        if args.out:
            stdout.write(_text(_jsonable(summary)) + "\n")
        return
    if args.format == "json":
        summary["series"] = {"t": rep.times, "re_f": rep.amplitude.real, "im_f": rep.amplitude.imag,
                             "abs_f": rep.abs_f, "avg_fidelity": rep.fidelity}
    _emit(args, summary, out)


def _cmd_mirror(args, out):
    spec = _load_spec(args)
    t = mirror_time(spec, args.tol, args.q_max)
    _emit(args, {"params": {"tol": args.tol, "q_max": args.q_max}, "mirror_time": t,
                 "mirror_time_over_pi": None if t is None else t / math.pi}, out)


def _cmd_design(args, out):
    res = optimize_mirror_fidelity(args.n, args.fields, args.budget, args.seed, args.restarts)
    payload = res.to_dict()
    payload["params"] = {"n": args.n, "fields": args.fields, "budget": args.budget,
                         "seed": args.seed, "restarts": args.restarts}
    _emit(args, payload, out)


def _cmd_verify(args, out):
    reports = [randomized_identity_suite(n, args.trials, args.seed, args.dynamics) for n in args.n]
    failed = []
    for r in reports:
        if r.identities_exact != r.trials or (r.n != 2 and r.spmc_satisfied) \
                or (r.consistent is not None and r.consistent != r.trials):
            failed.append(r.n)
    _emit(args, {"params": {"trials": args.trials, "seed": args.seed, "dynamics": args.dynamics},
                 "reports": {str(r.n): r.to_dict() for r in reports},
                 "ok": not failed, "failed_n": failed}, out)
    if failed:
        raise VerificationFailed(f"verification failed for n = {failed}")


_COMMANDS = {
    "spec": _cmd_spec,
    "spectrum": _cmd_spectrum,
    "fold": _cmd_fold,
    "identities": _cmd_identities,
    "spmc": _cmd_spmc,
    "certificate": _cmd_certificate,
    "mirror": _cmd_mirror,
    "design": _cmd_design,
    "verify": _cmd_verify,
}


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out_path = getattr(args, "out", None)
    out = io.StringIO() if out_path else stdout
    code = EXIT_OK
    try:
        if args.verb == "scan":
            _cmd_scan(args, out, stdout)
        else:
            _COMMANDS[args.verb](args, out)
    except (InvalidSpec, UnsupportedNormalization, NotMirrorSymmetric, InvalidSite, InvalidAmplitude,
            DegenerateInput, ValueError) as exc:
        stderr.write(f"spinmirror {args.verb}: error: {exc}\n")
        return EXIT_INVALID
    except VerificationFailed as exc:
        # the report itself is still written below
        stderr.write(f"spinmirror {args.verb}: {exc}\n")
        code = EXIT_NUMERIC
    except (NumericalFailure, InternalInconsistency, ArithmeticError) as exc:
        stderr.write(f"spinmirror {args.verb}: failure: {exc}\n")
        return EXIT_NUMERIC
    except OSError as exc:
        stderr.write(f"spinmirror {args.verb}: I/O error: {exc}\n")
        return EXIT_IO
    if out_path:
        try:
            with open(out_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(out.getvalue())
        except OSError as exc:
            stderr.write(f"spinmirror {args.verb}: I/O error: {exc}\n")
            return EXIT_IO
    return code


def main() -> None:
    sys.exit(run())
