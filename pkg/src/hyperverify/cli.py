"""Command-line front end: evaluate functions, run condition checks and the
identity catalog.

Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 evaluation error.
"""
import argparse
import os
import sys
import warnings
from dataclasses import dataclass, fields, replace

import numpy as np

from .conditions import (MuntzSpec, am_check, cm_functions, cm_probe, muntz_nonneg,
                         pfp_cm_hypotheses, weak_supermajorization)
from .identities import CATALOG, emit_report, exit_code, resolve_id, run_cases
from .meijerg import gspec, meijer_g
from .pfq import hyp

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_EVAL = 0, 1, 2, 3
FORMATS = ("json", "csv", "text")


class UsageError(Exception):
    pass


# ---- parsing helpers ---------------------------------------------------------

def parse_number(text):
    """Real or complex scalar; complex is written re+imi (e.g. 1-0.5i, 2i)."""
    s = text.strip().replace(" ", "")
    if not s:
        raise UsageError("empty number")
    try:
        if s.endswith("i") and not s.lower().endswith("inf"):
            v = complex(s[:-1] + "j")
        else:
            v = float(s)
    except ValueError:
        raise UsageError(f"cannot parse number {text!r}") from None
    if isinstance(v, complex) and v.imag == 0.0:
        return v.real
    return v


def parse_vector(text):
    """Comma-separated numbers; an empty string is the empty vector."""
    if text is None or not text.strip():
        return ()
    return tuple(parse_number(t) for t in text.split(","))


def _real_vector(text, name):
    v = parse_vector(text)
    if any(isinstance(x, complex) for x in v):
        raise UsageError(f"--{name} must be real")
    return v


def format_number(v, digits=9):
    v = complex(v)
    if v.imag == 0.0:
        return f"{v.real:.{digits}g}"
    sign = "-" if v.imag < 0 or (v.imag == 0 and str(v.imag).startswith("-")) else "+"
    return f"{v.real:.{digits}g}{sign}{abs(v.imag):.{digits}g}i"


# ---- configuration ------------------------------------------------------------

@dataclass
class RunConfig:
    cases: tuple = ()          # empty means all
    seed: int = None
    rel_tol: float = None      # None keeps each case's own tolerance
    output: str = None
    format: str = "json"
    parallelism: int = 1
    timings: bool = False


def _coerce(name, value):
    if name == "cases":
        if isinstance(value, (tuple, list)):
            return tuple(value)
        value = value.strip()
        return () if value in ("", "all") else tuple(v.strip() for v in value.split(",") if v.strip())
    if value is None:
        return None
    try:
        if name in ("seed", "parallelism"):
            return int(value)
        if name == "rel_tol":
            return float(value)
        if name == "timings":
            if isinstance(value, bool):
                return value
            if value.strip().lower() in ("1", "true", "yes", "on"):
                return True
            if value.strip().lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(value)
    except ValueError:
        raise UsageError(f"bad value for {name}: {value!r}") from None
    if name == "format" and value not in FORMATS:
        raise UsageError(f"format must be one of {', '.join(FORMATS)}")
    return value


def parse_config_text(text):
    """Flat key=value lines; '#' starts a comment."""
    known = {f.name for f in fields(RunConfig)}
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise UsageError(f"config line {n}: unknown key {key!r}")
        out[key] = _coerce(key, value)
    return out


def build_config(args, environ=None):
    """Defaults < HYPERVERIFY_SEED < config file < command-line flags."""
    environ = os.environ if environ is None else environ
    cfg = RunConfig()
    if environ.get("HYPERVERIFY_SEED", "").strip():
        cfg = replace(cfg, seed=_coerce("seed", environ["HYPERVERIFY_SEED"]))
    if args.config:
        try:
            with open(args.config) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        cfg = replace(cfg, **parse_config_text(text))
    flags = {}
    if args.all:
        flags["cases"] = ()
    elif args.cases is not None:
        flags["cases"] = _coerce("cases", args.cases)
    for name in ("seed", "rel_tol", "output", "format", "parallelism"):
        val = getattr(args, name)
        if val is not None:
            flags[name] = _coerce(name, val)
    if args.timings:
        flags["timings"] = True
    cfg = replace(cfg, **flags)
    if cfg.parallelism < 1:
        raise UsageError("parallelism must be >= 1")
    return cfg


# ---- commands ------------------------------------------------------------------

def cmd_eval(args):
    if args.kind == "pfq":
        if args.z is None:
            raise UsageError("eval pfq needs --z")
        a, b, z = parse_vector(args.a), parse_vector(args.b), parse_number(args.z)
        value = lambda: hyp(a, b, z)
    else:
        if args.shape is None or args.x is None:
            raise UsageError("eval meijerg needs --shape and --x")
        shape = _real_vector(args.shape, "shape")
        if len(shape) != 4 or any(v != int(v) or v < 0 for v in shape):
            raise UsageError("--shape is m,n,p,q with nonnegative integers")
        m, n, p, q = (int(v) for v in shape)
        top, bottom = parse_vector(args.top), parse_vector(args.bottom)
        if len(top) != p or len(bottom) != q:
            raise UsageError(f"--top needs {p} entries and --bottom {q}")
        x = parse_number(args.x)
        try:
            spec = gspec(m, n, top, bottom)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        value = lambda: meijer_g(spec, x)
    try:
        v = value()
    except Exception as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    print(format_number(v, args.digits))
    return EXIT_PASS


def _verdict(passed, witness=None, detail=""):
    print("PASS" if passed else "FAIL", end="")
    if detail:
        print(f" {detail}", end="")
    if witness is not None:
        print(f" witness {witness}", end="")
    print()
    return EXIT_PASS if passed else EXIT_FAIL


def cmd_check(args):
    kind = args.kind
    if kind == "am":
        coeffs = _real_vector(args.coeffs, "coeffs")
        if not coeffs:
            raise UsageError("check am needs --coeffs")
        v = am_check(coeffs)
        return _verdict(v.passed, v.witness, f"orders 0..{v.max_order_checked}")
    a, b = _real_vector(args.a, "a"), _real_vector(args.b, "b")
    if kind == "muntz":
        try:
            ok, cert = muntz_nonneg(MuntzSpec(a, b))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        w = None if ok else f"t={cert.t_min:.6g} v={cert.v_min:.6g}"
        return _verdict(ok, w, f"min v={cert.v_min:.6g} at t={cert.t_min:.6g}" if ok else "")
    if kind == "supermaj":
        try:
            ok = weak_supermajorization(a, b)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if ok:
            return _verdict(True)
        sa, sb = np.cumsum(sorted(a)), np.cumsum(sorted(b))
        k = int(np.argmax(sa > sb))
        return _verdict(False, f"prefix {k + 1}: {sa[k]:.6g} > {sb[k]:.6g}")
    # cm
    if not a or len(a) != len(b):
        raise UsageError("check cm needs --a and --b of equal length")
    grid = np.geomspace(args.lo, args.hi, args.points)
    print(f"hypotheses {'hold' if pfp_cm_hypotheses(a, b) else 'do not hold'}")
    code = EXIT_PASS
    try:
        for name, f in cm_functions(a, b).items():
            v = cm_probe(f, grid, max_order=args.order)
            print(f"{name}: ", end="")
            if _verdict(v.passed, v.witness) != EXIT_PASS:
                code = EXIT_FAIL
    except Exception as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    return code


def cmd_verify(args):
    cfg = build_config(args)
    try:
        ids = [resolve_id(c) for c in cfg.cases] if cfg.cases else list(CATALOG)
    except KeyError as exc:
        raise UsageError(f"unknown case id {exc.args[0]!r}") from None
    reports = run_cases(ids, cfg.seed, cfg.parallelism, cfg.timings, cfg.rel_tol)
    doc = emit_report(reports, cfg.format)
    if cfg.output:
        try:
            with open(cfg.output, "w", newline="") as fh:
                fh.write(doc)
        except OSError as exc:
            print(f"cannot write report: {exc}", file=sys.stderr)
            return EXIT_EVAL
        if cfg.format != "text":
            sys.stdout.write(emit_report(reports, "text"))
    else:
        sys.stdout.write(doc)
    return exit_code(reports, explicit=ids if cfg.cases else ())


# ---- parser --------------------------------------------------------------------

def catalog_listing():
    width = max(len(c) for c in CATALOG)
    lines = ["catalog cases:"]
    for cid, case in CATALOG.items():
        mark = " [known discrepancy]" if case.flagged else ""
        lines.append(f"  {cid:<{width}}  {case.anchor}{mark}")
    return "\n".join(lines)


def _digits(text):
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("digits must be an integer") from None
    if not 1 <= d <= 15:
        raise argparse.ArgumentTypeError("digits must be between 1 and 15")
    return d


def build_parser():
    raw = argparse.RawDescriptionHelpFormatter
    parser = argparse.ArgumentParser(
        prog="hyperverify", formatter_class=raw,
        description="Evaluate pFq and Meijer G functions and verify hypergeometric identities.",
        epilog=catalog_listing() + "\n\nexit codes: 0 pass, 1 failure, 2 usage error, 3 evaluation error")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate pFq or a Meijer G function")
    ev.add_argument("kind", choices=("pfq", "meijerg"))
    ev.add_argument("--a", default="", help="pFq numerator parameters, comma separated")
    ev.add_argument("--b", default="", help="pFq denominator parameters")
    ev.add_argument("--z", help="pFq argument (complex as re+imi)")
    ev.add_argument("--shape", help="Meijer G orders m,n,p,q")
    ev.add_argument("--top", default="", help="Meijer G upper parameters (p of them)")
    ev.add_argument("--bottom", default="", help="Meijer G lower parameters (q of them)")
    ev.add_argument("--x", help="Meijer G argument")
    ev.add_argument("--digits", type=_digits, default=9, help="significant digits (1-15)")

    ck = sub.add_parser("check", help="test a parameter hypothesis")
    ck.add_argument("kind", choices=("muntz", "supermaj", "cm", "am"))
    ck.add_argument("--a", default="")
    ck.add_argument("--b", default="")
    ck.add_argument("--coeffs", default="", help="Taylor coefficients for the am check")
    ck.add_argument("--order", type=int, default=8, help="highest derivative order for cm")
    ck.add_argument("--lo", type=float, default=0.1, help="cm grid start")
    ck.add_argument("--hi", type=float, default=10.0, help="cm grid end")
    ck.add_argument("--points", type=int, default=12, help="cm grid size")

    vf = sub.add_parser("verify", help="run catalog cases and emit a report",
                        formatter_class=raw, epilog=catalog_listing())
    sel = vf.add_mutually_exclusive_group()
    sel.add_argument("--cases", help="comma-separated case ids")
    sel.add_argument("--all", action="store_true", help="run every case (default)")
    vf.add_argument("--seed", help="run seed (falls back to HYPERVERIFY_SEED)")
    vf.add_argument("--rel-tol", dest="rel_tol", help="override each case's tolerance")
    vf.add_argument("--format", choices=FORMATS)
    vf.add_argument("--output", help="report path (default: standard output)")
    vf.add_argument("--config", help="key=value configuration file")
    vf.add_argument("--parallelism", help="worker processes")
    vf.add_argument("--timings", action="store_true", help="record wall-clock durations")
    return parser


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


VALUE_FLAGS = ("--a", "--b", "--z", "--x", "--top", "--bottom", "--coeffs")


def _attach_values(argv):
    """Join `--z -3+1i` into `--z=-3+1i`: argparse only accepts a leading '-'
    in a value when it parses as a plain negative number."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None):
    warnings.showwarning = _show_warning
    parser = build_parser()
    args = parser.parse_args(_attach_values(sys.argv[1:] if argv is None else list(argv)))
    handler = {"eval": cmd_eval, "check": cmd_check, "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"hyperverify: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
