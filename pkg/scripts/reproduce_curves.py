#!/usr/bin/env python3
"""Regenerate the bundled winning/cheating curve CSVs through the CLI presets.

Writes into out/ (created next to the repository root by default).  The k=3
preset solves 61 cheating SDPs in dimension 64 and takes hours; it is skipped
unless --include-k3 is given.  Everything is seeded or deterministic, so
reruns reproduce the files byte for byte.
"""

import argparse
import pathlib
import sys
import time

from qrgames import cli

FAST_PRESETS = ("fig5", "fig7", "fig8", "fig9")
SLOW_PRESETS = ("fig6",)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--out-dir", default="out", help="directory for the CSV/SVG files")
    parser.add_argument(
        "--include-k3",
        action="store_true",
        help="also run the k=3 preset (hours of SDP solves)",
    )
    parser.add_argument("--plot", action="store_true", help="write SVG plots next to the CSVs")
    args = parser.parse_args(argv)

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    presets = FAST_PRESETS + (SLOW_PRESETS if args.include_k3 else ())

    for preset in presets:
        csv_path = out_dir / f"{preset}.csv"
        argv_cli = ["curves", "--preset", preset, "--out", str(csv_path)]
        if args.plot:
            argv_cli += ["--plot", str(out_dir / f"{preset}.svg")]
        print(f"[{preset}] running ...", flush=True)
        start = time.perf_counter()
        code = cli.main(argv_cli)
        if code != 0:
            print(f"[{preset}] failed with exit code {code}", file=sys.stderr)
            return code
        print(f"[{preset}] done in {time.perf_counter() - start:.0f}s -> {csv_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
