"""Gap labels across levels and couplings, written as one CSV per (k, V).

For each gap of sigma_k U sigma_{k+1} the open-chain IDS at the gap centre is
matched to l*alpha mod 1; the summary line reports how many gaps exist, how
many carry a label and which small labels are missing.

    python scripts/gap_labels.py --levels 6 8 10 --couplings 0.5 1 3 5 8
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from pathlib import Path

from sturmspec.contfrac import denominators, parse_alpha
from sturmspec.ids import dry_tmp_verify


@dataclass
class LabelConfig:
    alpha: str = "golden"
    levels: list[int] = field(default_factory=lambda: [6, 8, 10])
    couplings: list[float] = field(default_factory=lambda: [0.5, 1.0, 3.0, 5.0, 8.0])
    small: int = 5
    out_dir: str = "runs/gap_labels"


def run(cfg: LabelConfig) -> list[dict]:
    digits = parse_alpha(cfg.alpha)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = []
    for k in cfg.levels:
        qs = denominators(digits, k + 1)
        for V in cfg.couplings:
            v = dry_tmp_verify(digits, k, V, cfg.small)
            (out / f"k{k}_V{V:g}.csv").write_text(v.report.to_csv())
            summary.append({
                "k": k, "V": V, "status": v.status, "gaps": len(v.report.gaps),
                "q_k+1 - 1": qs[-1] - 1, "unmatched": v.unmatched, "missing": list(v.missing),
            })
    return summary


def main() -> None:
    p = argparse.ArgumentParser(description="gap labels over levels and couplings")
    p.add_argument("--alpha", default="golden")
    p.add_argument("--levels", type=int, nargs="+", default=[6, 8, 10])
    p.add_argument("--couplings", type=float, nargs="+", default=[0.5, 1.0, 3.0, 5.0, 8.0])
    p.add_argument("--small", type=int, default=5)
    p.add_argument("--out-dir", default="runs/gap_labels")
    a = p.parse_args()
    for row in run(LabelConfig(a.alpha, a.levels, a.couplings, a.small, a.out_dir)):
        print(row)


if __name__ == "__main__":
    main()
