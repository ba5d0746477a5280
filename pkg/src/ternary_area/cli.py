"""Command line entry point.

Exit codes: 0 success, 1 a verification failed, 2 bad usage or malformed input.
Data goes to ``--out`` or stdout; the human summary goes to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import drawing, fixedpoint, lower, oracle, pareto, staircase, upper


class UsageError(Exception):
    pass


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_fronts(a) -> int:
    fr = pareto.compute_fronts(a.max_level)
    _emit(pareto.fronts_csv(fr), a.out)
    if a.exact_dir:
        d = Path(a.exact_dir)
        d.mkdir(parents=True, exist_ok=True)
        for f in fr:
            (d / f"front_{f.level:02d}.csv").write_text(staircase.to_csv(f.staircase()))
    _say("sizes: " + " ".join(f"{f.level}:{len(f)}" for f in fr))
    return 0


def cmd_scatter(a) -> int:
    fr = pareto.compute_fronts(a.max_level)
    _emit(pareto.scatter_export(fr), a.out)
    _say(f"{sum(len(f) for f in fr)} points over levels 1..{a.max_level}")
    return 0


def cmd_draw(a) -> int:
    if a.width % 2 == 0:
        raise UsageError("width must be odd so the root can sit on the middle column")
    fr = pareto.compute_fronts(a.level)
    try:
        idx, tree = pareto.witness_for_size(fr, a.level, a.width, a.height)
    except KeyError:
        _say(f"T_{a.level} does not fit in {a.width} x {a.height}")
        return 1
    d = drawing.generate(tree)
    if (d.width, d.height) != (a.width, a.height):
        _say(f"front point ({d.width}, {d.height}) drawn inside the {a.width} x {a.height} grid")
        # centring keeps the root on the middle column; the top stays flush for the ray
        d = d.translated((a.width - d.width) // 2, 0, a.width, a.height)
    rep = drawing.validate(d)
    if a.format == "json":
        text = d.to_json() + "\n"
    else:
        text = drawing.render(d, a.format)
    _emit(text, a.out)
    _say(f"checks: {''.join(k for k, v in rep.checks.items() if v)} passed; tree {tree!r}")
    return 0 if rep.predicate else 1


def cmd_certify_upper(a) -> int:
    cert = upper.induction_certificate(a.base_level)
    ok = upper.verify_induction(cert)
    _emit(cert.to_json() + "\n", a.out)
    rep = upper.exponent_of_factor(cert.rho)
    _say(f"rho = {cert.rho}  delta = {rep.delta:.10f}  exponent = {rep.exponent:.6f}  verified = {ok}")
    return 0 if ok else 1


def cmd_solve_lower(a) -> int:
    c = lower.solve_constants(a.tolerance)
    ineq = lower.verify_lower_lemma(c, a.grid)
    base = lower.verify_base_case(c)
    _emit(c.to_json() + "\n", a.out)
    _say(f"sigma = {c.sigma:.10f}  epsilon = {c.epsilon:.10f}  delta = {c.delta:.10f}  "
         f"exponent = {c.exponent:.7f}")
    _say(f"lower inequality (numerical check): {ineq}  base case: {base}")
    return 0 if ineq and base else 1


def cmd_fixed_point(a) -> int:
    def progress(k, d, r, g):
        if a.verbose and k % 50 == 0:
            _say(f"  iter {k}: delta {d:.12f} residual {r:.3e} drift {g:.2e}")

    c = lower.solve_constants(1e-12)
    res, cert = fixedpoint.certify(c, samples=a.grid, span=tuple(a.span), tol=a.tol, max_iters=a.max_iters,
                                   offset=a.offset, window=tuple(a.window), callback=progress)
    _say(f"fixed point: {res.iterations} iterations, residual {res.residual:.3e}, "
         f"converged {res.converged}, rate {res.delta:.12f}")
    rep = fixedpoint.verify_certificate(cert)
    if a.out:
        fixedpoint.save_certificate(cert, a.out)
    else:
        sys.stdout.write(cert.to_json() + "\n")
    _say(f"certificate: {len(cert.points)} points, rho = {cert.rho}, checked {rep.checked}, "
         f"passed {rep.passed}, exponent {rep.exponent.exponent:.6f}")
    return 0 if rep.passed else 1


def cmd_verify(a) -> int:
    path = Path(a.certificate) if a.certificate else fixedpoint.shipped_certificate_path()
    raw = path.read_bytes()
    if raw[:2] == b"\x1f\x8b":
        import gzip
        raw = gzip.decompress(raw)
    try:
        doc = json.loads(raw)
    except ValueError as e:
        raise UsageError(f"format: {e}") from None
    if isinstance(doc, dict) and "base_level" in doc:
        cert = upper.InductionCertificate.from_json(raw.decode())
        ok = upper.verify_induction(cert)
        rep = upper.exponent_of_factor(cert.rho)
        out = {"kind": "induction", "passed": ok, "rho": str(cert.rho), "delta": rep.delta,
               "exponent": rep.exponent}
        _emit(json.dumps(out, indent=1) + "\n", a.out)
        _say(f"induction certificate: passed {ok}, exponent {rep.exponent:.6f}")
        return 0 if ok else 1
    cert = fixedpoint.UpperCertificate.from_json(raw.decode())
    rep = fixedpoint.verify_certificate(cert)
    _emit(rep.to_json() + "\n", a.out)
    _say(f"upper certificate: passed {rep.passed}, checked {rep.checked}, "
         f"exponent {rep.exponent.exponent:.6f} (with epsilon {rep.exponent_with_margin.exponent:.6f})")
    for w in rep.warnings:
        _say(f"warning: {w}")
    return 0 if rep.passed else 1


def cmd_oracle(a) -> int:
    spec = oracle.SearchSpec(a.levels, a.caps[0], a.caps[1], not a.no_predicate)
    if a.count:
        n = oracle.count_drawings(spec, *a.count)
        _emit(f"{n}\n", a.out)
        return 0
    s = oracle.enumerate_min_grids(spec)
    _emit("w,h\n" + "".join(f"{p.w},{p.h}\n" for p in s.points), a.out)
    mine = pareto.compute_fronts(a.levels)[-1].points()
    inside = [(w, h) for w, h in mine if w <= a.caps[0] and h <= a.caps[1]]
    agree = [(int(p.w), int(p.h)) for p in s.points] == inside
    if spec.require_predicate:
        _say(f"oracle front {[(int(p.w), int(p.h)) for p in s.points]}; agrees with computed front: {agree}")
        return 0 if agree else 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ternary-area", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("fronts", help="exact Pareto fronts per level")
    s.add_argument("--max-level", type=int, default=19)
    s.add_argument("--exact-dir", help="also write one staircase CSV per level here")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_fronts)

    s = sub.add_parser("scatter", help="level,w,h,construction rows for plotting")
    s.add_argument("--max-level", type=int, default=10)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_scatter)

    s = sub.add_parser("draw", help="draw T_level inside a width x height grid")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--width", type=int, required=True)
    s.add_argument("--height", type=int, required=True)
    s.add_argument("--format", choices=("svg", "ascii", "json"), default="ascii")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_draw)

    s = sub.add_parser("certify-upper", help="induction certificate between two consecutive fronts")
    s.add_argument("--base-level", type=int, default=18)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_certify_upper)

    s = sub.add_parser("solve-lower", help="solve for sigma, epsilon, delta and check the lower inequality")
    s.add_argument("--tolerance", type=float, default=1e-10)
    s.add_argument("--grid", type=int, default=10_000)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_solve_lower)

    s = sub.add_parser("fixed-point", help="iterate P, extract and verify an upper certificate")
    s.add_argument("--grid", type=int, default=4001, help="omega samples")
    s.add_argument("--span", type=float, nargs=2, default=(-25.0, 25.0), metavar=("LO", "HI"))
    s.add_argument("--window", type=float, nargs=2, default=(-1.5, 1.5), metavar=("LO", "HI"),
                   help="log-width window checked by the certificate")
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--max-iters", type=int, default=2000)
    s.add_argument("--offset", type=float, default=1e-4, help="added to the fixed-point rate before rounding")
    s.add_argument("--verbose", action="store_true")
    s.add_argument("--out", help="certificate path (.json or .json.gz)")
    s.set_defaults(fn=cmd_fixed_point)

    s = sub.add_parser("verify", help="verify an induction or upper certificate (default: the shipped one)")
    s.add_argument("certificate", nargs="?")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("oracle", help="exhaustive search on tiny trees")
    s.add_argument("--levels", type=int, required=True)
    s.add_argument("--caps", type=int, nargs=2, default=(7, 7), metavar=("W", "H"))
    s.add_argument("--no-predicate", action="store_true")
    s.add_argument("--count", type=int, nargs=2, metavar=("W", "H"))
    s.add_argument("--out")
    s.set_defaults(fn=cmd_oracle)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    try:
        return a.fn(a)
    except (UsageError, FileNotFoundError, staircase.StaircaseError, oracle.SearchError,
            upper.CertificateError, drawing.DrawingError) as e:
        _say(f"error: {e}")
        return 2
    except fixedpoint.FixedPointError as e:
        _say(f"error: {e}")
        return 2 if str(e).startswith("format") else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
