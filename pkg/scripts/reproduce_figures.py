"""Run every configs/fig*.cfg and write the tables to out/ (or --out DIR).

    python3 scripts/reproduce_figures.py [--out DIR] [fig1 fig3 ...]
"""
import argparse
import sys
import time
from pathlib import Path

from sjcm.cli import run_command

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("names", nargs="*", help="config stems, default all")
    ap.add_argument("--out", default=str(ROOT / "out"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfgs = sorted((ROOT / "configs").glob("fig*.cfg"))
    if args.names:
        cfgs = [c for c in cfgs if c.stem in args.names]
    status = 0
    for cfg in cfgs:
        t0 = time.perf_counter()
        code = run_command(["--config", str(cfg), "-o", str(out / (cfg.stem + ".csv"))])
        print(f"{cfg.stem}: exit {code}, {time.perf_counter() - t0:.1f} s")
        status = status or code
    sys.exit(status)


if __name__ == "__main__":
    main()
