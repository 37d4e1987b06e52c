"""Regenerate the bundled corpus under src/multirel/data/corpus."""
import argparse
import shutil
from pathlib import Path

from multirel import corpus

DEFAULT = Path(__file__).resolve().parents[1] / "src" / "multirel" / "data" / "corpus"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=DEFAULT)
    args = ap.parse_args()
    if args.out.exists():
        shutil.rmtree(args.out)
    written = corpus.write(corpus.build(), args.out)
    print(f"wrote {len(written)} files to {args.out}")


if __name__ == "__main__":
    main()
