"""Batch entry point: build artifacts, synthesize gate lists, schedule,
verify, and emit parameter tables and reports.

Exit codes: 0 success, 2 configuration error, 3 build/axiom failure,
4 verification failure.  All randomness sits behind --seed; sampled modes
refuse to run without one.  The default artifact directory can be overridden
with the AGCCZ_ARTIFACT_DIR environment variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import AxiomViolation, ConfigError, VerificationFailure

EXIT_CONFIG = 2
EXIT_AXIOM = 3
EXIT_VERIFY = 4


def artifact_dir(override: str | None) -> Path:
    base = override or os.environ.get("AGCCZ_ARTIFACT_DIR") or "."
    path = Path(base)
    path.mkdir(parents=True, exist_ok=True)
    return path


def parse_gamma(text: str) -> int:
    try:
        return int(text, 16)
    except ValueError:
        raise ConfigError(f"gamma {text!r} is not a hex field element") from None


def t_for_r(r: int) -> int:
    t = r.bit_length() - 1
    if r < 2 or (1 << t) != r:
        raise ConfigError(f"r={r} must be a power of two >= 2")
    return t


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="agccz", description=__doc__)
    p.add_argument("--version", action="version", version=f"agccz {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    pp = sub.add_parser("params", help="exact rational parameter tables")
    pp.add_argument("--r", type=int, action="append", required=True,
                    help="field parameter r (repeatable)")
    pp.add_argument("--tower-file", help="JSON file with tower level descriptions")
    pp.add_argument("--s", type=int, help="also emit the curve-instance row for this pole bound")
    pp.add_argument("--out", help="CSV output path (default stdout)")
    pp.add_argument("--json", action="store_true", help="emit full JSON instead of CSV")

    pb = sub.add_parser("build", help="build curve + CSS artifacts")
    pb.add_argument("--r", type=int, help="field parameter r (power of two)")
    pb.add_argument("--s", type=int, help="pole bound of the one-point divisor")
    pb.add_argument("--kind", default="artin_schreier_hermitian",
                    choices=["artin_schreier_hermitian", "exhaustive_toy"])
    pb.add_argument("--toy-file", help="toy backend data (default: the built-in r=2 toy)")
    pb.add_argument("--beta-x", help="x-coordinate (hex) of the distinguished fiber")
    pb.add_argument("--out-dir", help="artifact directory")

    ps = sub.add_parser("synth", help="synthesize a physical CCZ gate list")
    ps.add_argument("--css", required=True)
    ps.add_argument("--pattern", required=True, help="intra/111, two_block/112, three_block/123")
    ps.add_argument("--A", type=int, required=True)
    ps.add_argument("--B", type=int, required=True)
    ps.add_argument("--C", type=int, required=True)
    ps.add_argument("--gamma", required=True, help="hex field element")
    ps.add_argument("--keep-zero", action="store_true",
                    help="retain zero-coefficient identity gates")
    ps.add_argument("--out", help="gate list path (default gates.json in the artifact dir)")

    pc = sub.add_parser("schedule", help="layer a gate list into qudit-disjoint rounds")
    pc.add_argument("--gates", required=True)
    pc.add_argument("--out", help="schedule path (default schedule.json)")

    pv = sub.add_parser("verify", help="certify that a gate list is the logical gate")
    pv.add_argument("--css", required=True)
    pv.add_argument("--gates", help="gate list to verify")
    pv.add_argument("--all-triples", action="store_true",
                    help="sweep every (A,B,C) in [k]^3 and all three patterns")
    pv.add_argument("--gammas", help="comma-separated hex gammas, or 'all' for the full "
                                     "nonzero sweep (default: 1 and one fixed "
                                     "non-subfield element)")
    pv.add_argument("--state-oracle", action="store_true",
                    help="also run the state-level phase oracle")
    pv.add_argument("--samples", type=int, default=10_000)
    pv.add_argument("--budget", type=int, default=2**20)
    pv.add_argument("--seed", type=int)
    pv.add_argument("--out", help="certificate path (default certificate.json)")

    pr = sub.add_parser("report", help="sweep an instance; CSV plus figures")
    pr.add_argument("--css", required=True)
    pr.add_argument("--curve", help="curve artifact (default: resolved from curve_ref)")
    pr.add_argument("--out-dir", help="report directory")
    pr.add_argument("--seed", type=int, default=0)
    return p


def frac_str(x) -> str:
    return str(Fraction(x))


def cmd_params(args) -> int:
    from .artifacts import load_json
    from .css import TowerParams, default_tower_params, hermitian_designed_bounds, tower_calculator
    from .curve import genus, num_places

    rows = []
    full = []
    for r in args.r:
        t_for_r(r)  # validates
        if args.tower_file:
            levels = load_json(args.tower_file)
            tps = [TowerParams(**{**lvl, "r": r}) for lvl in levels]
        else:
            tps = [default_tower_params(r)]
        for tp in tps:
            out = tower_calculator(tp)
            full.append({k: (frac_str(v) if isinstance(v, Fraction) else v)
                         for k, v in out.items()})
            rows.append([r, f"i={out['i']}", out["N"], out["k"], out["n"],
                         frac_str(out["rate_lb"]), frac_str(out["rel_dist_lb"]),
                         out["ineq1"], out["ineq2"], out["good"]])
        if args.s is not None:
            N, g = num_places(r), genus(r)
            bounds = hermitian_designed_bounds(r, args.s)
            k = r
            rel = Fraction(bounds["d_q_lb"], N - k)
            rows.append([r, f"s={args.s}", N, k, N - k,
                         frac_str(Fraction(k, N)), frac_str(rel),
                         args.s < N, 4 * args.s <= N + 2 * g - 2, rel > 0])
            full.append({"r": r, "s": args.s, **{k2: v for k2, v in bounds.items()}})

    if args.json:
        from .artifacts import canonical_dumps

        text = canonical_dumps(full)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["r", "i_or_s", "N", "k", "n", "rate_lb", "rel_dist_lb",
                         "ineq1", "ineq2", "good"])
        writer.writerows(rows)
        text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_build(args) -> int:
    from .artifacts import css_to_dict, curve_to_dict, load_json, save_json
    from .css import build_css
    from .curve import HERMITIAN, CurveSpec, build_backend, builtin_toy_r2, toy_spec
    from .field import field

    if args.kind == HERMITIAN:
        if args.r is None or args.s is None:
            raise ConfigError("the curve backend needs --r and --s")
        gf = field(t_for_r(args.r))
        beta_x = int(args.beta_x, 16) if args.beta_x else None
        spec = CurveSpec(gf, kind=HERMITIAN, s=args.s, beta_x=beta_x)
    else:
        data = load_json(args.toy_file) if args.toy_file else builtin_toy_r2()
        spec = toy_spec(data)
    backend = build_backend(spec)
    css = build_css(backend)

    out = artifact_dir(args.out_dir)
    curve_dict = curve_to_dict(backend)
    curve_hash = save_json(out / "curve.json", curve_dict)
    css_dict = css_to_dict(css, curve_ref={"path": "curve.json", "sha256": curve_hash})
    save_json(out / "css.json", css_dict)
    md = css.metadata
    warn = "  (degenerate: no stabilizer rows)" if md["degenerate"] else ""
    print(f"built [[{md['n']},{md['k']}]] qudit CSS code over GF({css.gf.q}) "
          f"-> {out / 'css.json'}{warn}")
    return 0


def cmd_synth(args) -> int:
    from .artifacts import css_from_dict, gatelist_to_dict, load_json, save_json, sha256_of
    from .synth import synth

    css_dict = load_json(args.css)
    css = css_from_dict(css_dict)
    gl = synth(css, args.pattern, args.A, args.B, args.C, parse_gamma(args.gamma),
               keep_zero=args.keep_zero)
    out = Path(args.out) if args.out else artifact_dir(None) / "gates.json"
    instance = {"css_sha256": sha256_of(css_dict), "kind": css.kind, "r": css.r, "s": css.s}
    save_json(out, gatelist_to_dict(gl, instance))
    print(f"{gl.pattern} gate list with {len(gl)} gates -> {out}")
    return 0


def cmd_schedule(args) -> int:
    from .artifacts import gatelist_from_dict, load_json, save_json, schedule_to_dict
    from .scheduler import greedy_schedule, validate_schedule

    gl = gatelist_from_dict(load_json(args.gates))
    sched = greedy_schedule(gl)
    report = validate_schedule(gl, sched)
    if not report.passed:
        raise AxiomViolation("schedule-validation", "; ".join(report.errors))
    out = Path(args.out) if args.out else artifact_dir(None) / "schedule.json"
    save_json(out, schedule_to_dict(sched))
    print(f"depth {sched.depth} schedule ({len(gl)} gates) -> {out}")
    return 0


def default_gammas(gf, text: str | None) -> list[int]:
    if text == "all":
        return [a for a in gf.elements() if a != 0]
    if text:
        return [parse_gamma(tok) for tok in text.split(",") if tok]
    return [1, gf.nonsubfield_element()]


def cmd_verify(args) -> int:
    from .artifacts import (
        certificate_to_dict,
        css_from_dict,
        gatelist_from_dict,
        load_json,
        save_json,
        sha256_of,
    )
    from .synth import synth
    from .verifier import verify_logical_ccz, verify_state_oracle

    css_dict = load_json(args.css)
    css = css_from_dict(css_dict)
    instance = {"css_sha256": sha256_of(css_dict), "kind": css.kind, "r": css.r, "s": css.s}
    out = Path(args.out) if args.out else artifact_dir(None) / "certificate.json"

    def run_one(gl):
        certs = [verify_logical_ccz(css, gl)]
        if args.state_oracle:
            certs.append(verify_state_oracle(css, gl, budget=args.budget,
                                             samples=args.samples, seed=args.seed))
        return certs

    if args.all_triples:
        gammas = default_gammas(css.gf, args.gammas)
        runs = []
        ok = True
        for pattern in ["intra", "two_block", "three_block"]:
            for (A, B, C) in itertools.product(range(1, css.k + 1), repeat=3):
                for gamma in gammas:
                    for cert in run_one(synth(css, pattern, A, B, C, gamma)):
                        runs.append(certificate_to_dict(cert, instance))
                        ok = ok and cert.passed
        save_json(out, {"instance": instance, "all_pass": ok, "runs": runs})
        print(f"{len(runs)} certificates ({'all PASS' if ok else 'FAILURES'}) -> {out}")
        if not ok:
            raise VerificationFailure(f"sweep failed; witnesses in {out}")
        return 0

    if not args.gates:
        raise ConfigError("verify needs --gates or --all-triples")
    gl = gatelist_from_dict(load_json(args.gates))
    certs = run_one(gl)
    payload = [certificate_to_dict(c, instance) for c in certs]
    save_json(out, payload if len(payload) > 1 else payload[0])
    ok = all(c.passed for c in certs)
    print(f"{gl.pattern} [A={gl.target['A']} B={gl.target['B']} C={gl.target['C']}] "
          f"{'PASS' if ok else 'FAIL'} -> {out}")
    if not ok:
        raise VerificationFailure(f"verification failed; witness in {out}")
    return 0


def cmd_report(args) -> int:
    from .report import write_report

    paths = write_report(args.css, curve_path=args.curve,
                         out_dir=artifact_dir(args.out_dir), seed=args.seed)
    for p in paths:
        print(p)
    return 0


COMMANDS = {
    "params": cmd_params,
    "build": cmd_build,
    "synth": cmd_synth,
    "schedule": cmd_schedule,
    "verify": cmd_verify,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AxiomViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AXIOM
    except VerificationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
