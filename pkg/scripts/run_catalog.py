"""Run the identity catalog and write a JSON report plus a text summary.

    python scripts/run_catalog.py --seed 42 --out reports/catalog.json
"""
import argparse
import pathlib
import sys

from hyperverify.identities import CATALOG, emit_report, exit_code, run_cases


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--out", default="reports/catalog.json")
    ap.add_argument("--parallelism", type=int, default=1)
    ap.add_argument("--timings", action="store_true")
    args = ap.parse_args()

    reports = run_cases(list(CATALOG), args.seed, args.parallelism, args.timings)
    out = pathlib.Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(emit_report(reports))
    sys.stdout.write(emit_report(reports, "text"))
    print(f"report written to {out}")
    return exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
