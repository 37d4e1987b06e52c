"""Run the verification battery and write a JSON report."""
import argparse
import json
from pathlib import Path

from multirel.cli import plain
from multirel.suite import run_suite, suite_keys


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("suite_report.json"))
    ap.add_argument("--only", nargs="*", choices=suite_keys())
    args = ap.parse_args()
    results = run_suite(only=args.only, progress=lambda r: print(f"{r.key:26s} {r.status:6s} {r.seconds:7.1f}s", flush=True))
    doc = [dict(key=r.key, status=r.status, scope=r.scope, seconds=round(r.seconds, 2), details=plain(r.details)) for r in results]
    args.out.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
