"""Golden-mean butterfly: bands of levels 0..depth over a coupling grid, as CSV and SVG.

    python scripts/butterfly_sweep.py --depth 6 --v-min 0.2 --v-max 8 --points 120 --out-dir runs/butterfly
"""
from __future__ import annotations

import argparse
import collections
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from sturmspec.cli import butterfly_rows, butterfly_svg, fmt
from sturmspec.contfrac import parse_alpha


@dataclass
class SweepConfig:
    alpha: str = "golden"
    depth: int = 6
    v_min: float = 0.2
    v_max: float = 8.0
    points: int = 120
    workers: int = 4
    out_dir: str = "runs/butterfly"


def run(cfg: SweepConfig) -> dict:
    digits = parse_alpha(cfg.alpha)
    grid = np.linspace(cfg.v_min, cfg.v_max, cfg.points)
    rows = butterfly_rows(digits, cfg.depth, grid, cfg.workers)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with (out / "bands.csv").open("w") as fh:
        fh.write("cf,V,left,right,type\n")
        for cf, V, left, right, typ in rows:
            fh.write(f"{cf},{fmt(V)},{fmt(left)},{fmt(right)},{typ}\n")
    (out / "butterfly.svg").write_text(butterfly_svg(rows))
    types = collections.Counter(r[4] or "untyped" for r in rows)
    return {"config": asdict(cfg), "rows": len(rows), "types": dict(types)}


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in asdict(SweepConfig()).items():
        p.add_argument("--" + name.replace("_", "-"), type=type(default), default=default)
    summary = run(SweepConfig(**vars(p.parse_args())))
    print(summary)


if __name__ == "__main__":
    main()
