"""Run every invariant suite and print a pass table.

    python3 scripts/lemma_suites.py --trials 200 --seed 0 --jobs 1
"""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from bipcert.suites import SUITES, run_suite


@dataclass(frozen=True)
class SuitesConfig:
    trials: int = 200
    seed: int = 0
    jobs: int = 1


def main(cfg: SuitesConfig) -> int:
    failed = 0
    for lemma in SUITES:
        start = time.perf_counter()
        trials = min(cfg.trials, 40) if lemma == "prop6.1" else cfg.trials
        rep = run_suite(lemma, trials, cfg.seed, cfg.jobs)
        failed += not rep.ok
        print(f"{lemma:>8}: {rep.passed}/{rep.trials}  {time.perf_counter() - start:6.2f}s")
        for f in rep.failures[:3]:
            print(f"          trial {f['trial']}: {'; '.join(f['problems'])}")
    return 1 if failed else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=SuitesConfig.trials)
    ap.add_argument("--seed", type=int, default=SuitesConfig.seed)
    ap.add_argument("--jobs", type=int, default=SuitesConfig.jobs)
    a = ap.parse_args()
    raise SystemExit(main(SuitesConfig(a.trials, a.seed, a.jobs)))
