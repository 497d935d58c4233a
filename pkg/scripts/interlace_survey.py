"""Exhaustive interlacing survey over every admissible phase triple.

Enumerates c with small digits, m, n >= 1 and q(c,m,n) <= max_size, and
counts interlacing violations and non-strict simple eigenvalues.
"""
from __future__ import annotations

import argparse
import itertools
import time
from dataclasses import dataclass

from sturmspec.bandscan import period
from sturmspec.contfrac import make_contfrac
from sturmspec.interlace import admissible_triples, interlacing_check


@dataclass
class SurveyConfig:
    max_size: int = 40
    max_digit: int = 3
    max_level: int = 3
    couplings: tuple[float, ...] = (0.5, 1.0, 5.0)


def instances(cfg: SurveyConfig):
    for level in range(0, cfg.max_level + 1):
        for ds in itertools.product(range(1, cfg.max_digit + 1), repeat=level):
            c = make_contfrac((0, 0) + ds)
            for m in range(1, cfg.max_size + 1):
                if period(c.extend(m)) > cfg.max_size:
                    break
                for n in range(1, cfg.max_size + 1):
                    if period(c.extend(m, n)) > cfg.max_size:
                        break
                    yield c, m, n


def run(cfg: SurveyConfig) -> dict:
    total = violations = not_strict = 0
    t0 = time.perf_counter()
    for c, m, n in instances(cfg):
        for V in cfg.couplings:
            for th in admissible_triples():
                rep = interlacing_check(c, m, n, V, th)
                total += 1
                violations += not rep.holds
                not_strict += not rep.strict
    return {"instances": total, "violations": violations, "not_strict": not_strict,
            "seconds": round(time.perf_counter() - t0, 1)}


def main() -> None:
    p = argparse.ArgumentParser(description="interlacing survey")
    p.add_argument("--max-size", type=int, default=40)
    a = p.parse_args()
    print(run(SurveyConfig(max_size=a.max_size)))


if __name__ == "__main__":
    main()
