"""Exact Zarankiewicz table for K_{s,t}, checked against the Furedi bound.

    python3 scripts/z_table.py --max-total 10 --s 2 --t 2 --out runs/z_table
"""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from bipcert.extremal import furedi_bound, furedi_holds, kst_family, write_z_table, z_table


@dataclass(frozen=True)
class ZTableConfig:
    max_total: int = 10
    s: int = 2
    t: int = 2
    jobs: int = 1
    out: Path = Path("runs/z_table")


def main(cfg: ZTableConfig) -> None:
    start = time.perf_counter()
    records = z_table(cfg.max_total, kst_family(cfg.s, cfg.t), jobs=cfg.jobs)
    path = write_z_table(records, cfg.out)
    print(f"{'m':>3} {'n':>3} {'z':>4} {'bound':>8}  ok")
    for r in records:
        bound = furedi_bound(r.m, r.n, cfg.s, cfg.t)
        print(f"{r.m:>3} {r.n:>3} {r.value:>4} {bound:>8.3f}  {furedi_holds(r.value, r.m, r.n, cfg.s, cfg.t)}")
    print(f"{len(records)} records in {time.perf_counter() - start:.1f}s -> {path}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-total", type=int, default=ZTableConfig.max_total)
    ap.add_argument("--s", type=int, default=ZTableConfig.s)
    ap.add_argument("--t", type=int, default=ZTableConfig.t)
    ap.add_argument("--jobs", type=int, default=ZTableConfig.jobs)
    ap.add_argument("--out", type=Path, default=ZTableConfig.out)
    a = ap.parse_args()
    main(ZTableConfig(a.max_total, a.s, a.t, a.jobs, a.out))
