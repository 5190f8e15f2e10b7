"""``asq`` command line: generate schemes, analyze them, check certificates, sweep.

Exit codes are shared by every subcommand: 0 when all checks pass, 1 when a
mathematical check fails (or a construction is impossible), 2 for usage,
I/O and format errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from . import __version__
from .channel import normalize_kraus, operator_system, verify_channel
from .errors import AsqError, BadDivisor, FormatError, HashMismatch, NonSymmetric, NotPrime, SizeCap
from .field import make_field, prime_power_decomposition
from .independence import (
    alpha_q,
    bounds_report,
    build_alpha_certificate,
    build_alpha_u_certificate,
    cert_from_dict,
    cert_to_dict,
    verify_alpha_certificate,
    verify_alpha_q_certificate,
    verify_alpha_u_certificate,
    verify_certificate,
)
from .matkernel import default_tol
from .report import VerificationReport
from .scheme import (
    cyclotomic_scheme,
    hamming_scheme,
    load_scheme,
    one_class_scheme,
    save_scheme,
    scheme_hash,
    verify_axioms,
)
from .spectral import decompose, pseudocyclic_profile, spectral_to_dict, verify_spectral

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CSV_HEADER = ["q", "D", "t", "alpha", "alpha_q", "alpha_u_lower", "ratio"]
DEFAULT_SEED = 42


class UsageError(Exception):
    pass


def resolve_tol(flag: float | None, dim: int) -> float:
    """``--tol`` beats ``ASQ_TOL`` beats ``1e-8 * max(1, dim)``."""
    if flag is not None:
        return flag
    env = os.environ.get("ASQ_TOL")
    if env:
        try:
            value = float(env)
        except ValueError:
            raise UsageError(f"ASQ_TOL={env!r} is not a number") from None
        if not value > 0:
            raise UsageError("ASQ_TOL must be positive")
        return value
    return default_tol(dim)


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def _write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")


# -- generate


def cmd_generate(args) -> int:
    try:
        if args.kind == "cyclotomic":
            if args.p is None or args.d is None:
                raise UsageError("cyclotomic needs --p and --d")
            s = cyclotomic_scheme(make_field(args.p, args.f), args.d)
        elif args.kind == "hamming":
            if args.n is None:
                raise UsageError("hamming needs --n")
            s = hamming_scheme(args.n)
        else:
            if args.N is None:
                raise UsageError("one-class needs --N")
            s = one_class_scheme(args.N)
    except NonSymmetric as exc:
        print(f"error: NonSymmetric: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (NotPrime, SizeCap, BadDivisor, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        save_scheme(s, args.output)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"N={s.n} d={s.d} symmetric={str(s.is_symmetric).lower()}")
    return EXIT_OK


# -- analyze


def analyze_scheme(s, seed: int, tol: float, cert_dir=None, spectral_out=None) -> dict:
    """Run the full pipeline on one scheme and return the JSON report body."""
    rep = VerificationReport(
        metadata={
            "n": s.n,
            "d": s.d,
            "scheme_hash": scheme_hash(s),
            "seed": seed,
            "tol": tol,
            "version": __version__,
        }
    )
    rep.extend(verify_axioms(s), "axioms/")
    body: dict = {"report": None}
    if not rep.overall:
        body["report"] = rep.to_dict()
        body["_table"] = rep.format_table()
        return body
    sd = decompose(s, seed=seed, tol=tol)
    rep.extend(verify_spectral(s, sd, tol), "spectral/")
    S = operator_system(sd)
    ch = normalize_kraus(s, sd, tol)
    rep.extend(verify_channel(ch, S, tol), "channel/")

    h = scheme_hash(s)
    certs = {}
    a_cert = build_alpha_certificate(sd)
    rep.extend(verify_alpha_certificate(a_cert, S, tol), "alpha/")
    certs["alpha"] = a_cert
    aq_value, aq_cert = alpha_q(sd)
    rep.extend(verify_alpha_q_certificate(aq_cert, S, tol), "alpha_q/")
    certs["alpha_q"] = aq_cert
    bounds = bounds_report(sd, S)
    prof = pseudocyclic_profile(sd)
    if bounds.ratio is not None:
        u_cert = build_alpha_u_certificate(sd, S, tol)
        u_rep = verify_alpha_u_certificate(u_cert, S, tol)
        u_rep.add("size", abs(u_cert.size - bounds.alpha_u_lower), 0)
        rep.extend(u_rep, "alpha_u/")
        certs["alpha_u"] = u_cert
    rep.extend(bounds.ordering_checks(), "bounds/")

    if cert_dir is not None:
        out = Path(cert_dir)
        out.mkdir(parents=True, exist_ok=True)
        for kind, cert in certs.items():
            _write_json(out / f"{kind}.json", cert_to_dict(cert, h))
    if spectral_out is not None:
        _write_json(spectral_out, spectral_to_dict(sd))

    body["report"] = rep.to_dict()
    body["spectrum"] = {
        "multiplicities": list(sd.multiplicities),
        "eigentable": sd.eigentable.tolist(),
        "pseudocyclic": prof.is_pseudocyclic,
        "t": prof.t,
    }
    body["bounds"] = bounds.to_dict()
    body["skipped"] = [] if "alpha_u" in certs else ["alpha_u"]
    body["_table"] = rep.format_table()
    return body


def _summary(body) -> str:
    lines = []
    sp, b = body.get("spectrum"), body.get("bounds")
    if sp:
        lines.append(f"multiplicities: {tuple(sp['multiplicities'])}")
        flag = f"yes (t={sp['t']})" if sp["pseudocyclic"] else "no"
        lines.append(f"pseudocyclic:   {flag}")
    if b:
        lines.append(f"alpha   = {b['alpha']}  (<= D = {b['alpha_upper_trivial']})")
        lines.append(f"alpha_q = {b['alpha_q']}")
        if b["ratio"] is not None:
            lines.append(
                f"alpha_u in [{b['alpha_u_lower']}, {b['alpha_u_upper_trivial']}]"
                f"  ratio t^2 d / D^2 = {b['ratio']:.6f}"
            )
        else:
            lines.append(
                f"alpha_u in [{b['alpha_u_lower']}, {b['alpha_u_upper_trivial']}]"
                "  (unitary construction skipped: needs pseudocyclic, t >= 2)"
            )
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    try:
        s = load_scheme(args.scheme)
        tol = resolve_tol(args.tol, s.n)
    except (OSError, FormatError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        body = analyze_scheme(s, args.seed, tol, args.cert_dir, args.spectral_out)
    except AsqError as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    table = body.pop("_table")
    report = body["report"]
    print(f"scheme: N={s.n} d={s.d} hash={scheme_hash(s)}")
    summary = _summary(body)
    if summary:
        print(summary)
    print(table)
    print("overall:", "PASS" if report["overall"] else "FAIL")
    if args.output:
        try:
            _write_json(args.output, body)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    return EXIT_OK if report["overall"] else EXIT_FAIL


# -- check-cert


def cmd_check_cert(args) -> int:
    try:
        s = load_scheme(args.scheme)
        tol = resolve_tol(args.tol, s.n)
        try:
            doc = json.loads(Path(args.cert).read_text())
        except json.JSONDecodeError as exc:
            raise FormatError(f"{args.cert}: invalid JSON ({exc})") from exc
        cert, h = cert_from_dict(doc)
        if h != scheme_hash(s):
            raise HashMismatch(
                f"certificate is for scheme hash {h}, this scheme hashes to {scheme_hash(s)}"
            )
    except (OSError, FormatError, HashMismatch, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        sd = decompose(s, seed=args.seed, tol=tol)
        rep = verify_certificate(cert, operator_system(sd), tol)
    except AsqError as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(f"certificate kind={doc['kind']} size={rep.metadata.get('size', rep.metadata.get('rank'))}")
    print(rep.format_table())
    print("overall:", "PASS" if rep.overall else "FAIL")
    return EXIT_OK if rep.overall else EXIT_FAIL


# -- sweep


def sweep_rows(d: int, qs, seed: int = DEFAULT_SEED, certify: bool = False, warn=None):
    """Yield ``(row_dict, report)`` for each admissible ``q``; warn about the rest."""
    warn = warn or (lambda msg: print(f"warning: {msg}", file=sys.stderr))
    for q in qs:
        pf = prime_power_decomposition(q)
        if pf is None:
            warn(f"q={q} skipped: not a prime power")
            continue
        try:
            s = cyclotomic_scheme(make_field(*pf), d)
        except AsqError as exc:
            warn(f"q={q} skipped: {exc}")
            continue
        sd = decompose(s, seed=seed)
        S = operator_system(sd)
        b = bounds_report(sd, S)
        if b.ratio is None:
            warn(f"q={q} skipped: t = {b.t} is too small for the unitary construction")
            continue
        rep = b.ordering_checks()
        if certify:
            cert = build_alpha_u_certificate(sd, S)
            rep.extend(verify_alpha_u_certificate(cert, S), "alpha_u/")
            rep.add("alpha_u/size", abs(cert.size - b.alpha_u_lower), 0)
        row = {
            "q": q,
            "D": b.D,
            "t": b.t,
            "alpha": b.alpha,
            "alpha_q": b.alpha_q,
            "alpha_u_lower": b.alpha_u_lower,
            "ratio": b.ratio,
        }
        yield row, rep


def cmd_sweep(args) -> int:
    ok = True
    try:
        fh = open(args.output, "w", newline="") if args.output else sys.stdout
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for row, rep in sweep_rows(args.d, args.q, args.seed, args.certify):
            writer.writerow([row[c] for c in CSV_HEADER])
            if not rep.overall:
                ok = False
                print(f"q={row['q']}: failed checks {[c.name for c in rep.failed()]}", file=sys.stderr)
            elif args.output:
                print(f"q={row['q']}: D={row['D']} t={row['t']} ratio={row['ratio']:.6f}")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asq", description="Quantum channels and independence numbers of association schemes."
    )
    parser.add_argument("--version", action="version", version=f"asq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="construct a scheme and write it as JSON")
    g.add_argument("kind", choices=["cyclotomic", "hamming", "one-class"])
    g.add_argument("--p", type=int, help="field characteristic (cyclotomic)")
    g.add_argument("--f", type=int, default=1, help="extension degree (cyclotomic)")
    g.add_argument("--d", type=int, help="number of classes (cyclotomic)")
    g.add_argument("--n", type=int, help="word length (hamming)")
    g.add_argument("--N", type=int, help="number of points (one-class)")
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="decompose a scheme and certify its independence numbers")
    a.add_argument("scheme")
    a.add_argument("--seed", type=int, default=DEFAULT_SEED)
    a.add_argument("--tol", type=_positive_float)
    a.add_argument("-o", "--output", help="JSON report path")
    a.add_argument("--cert-dir", help="directory for alpha/alpha_q/alpha_u certificate files")
    a.add_argument("--spectral-out", help="path for the spectral data JSON export")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("check-cert", help="re-verify a certificate file against a scheme")
    c.add_argument("scheme")
    c.add_argument("cert")
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)
    c.add_argument("--tol", type=_positive_float)
    c.set_defaults(func=cmd_check_cert)

    w = sub.add_parser("sweep", help="ratio table over a cyclotomic family with fixed d")
    w.add_argument("--d", type=int, required=True)
    w.add_argument("--q", type=int, nargs="*", default=[])
    w.add_argument("--seed", type=int, default=DEFAULT_SEED)
    w.add_argument("--certify", action="store_true", help="also build and verify each certificate")
    w.add_argument("-o", "--output", help="CSV path (default: standard output)")
    w.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
