"""Self-orthogonal and LCD span codes from the Deza families: sizes, dimensions, distances."""

from __future__ import annotations

import argparse
import time
from collections import Counter
from dataclasses import dataclass

from dezacodes import codes, deza
from dezacodes.gf import make_field

FIELDS = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1)}


@dataclass(frozen=True)
class Config:
    qs: tuple[int, ...] = (2, 3, 4)
    lcd: bool = True
    mindist: bool = True
    sample: int | None = None
    seed: int = 0


def describe(name: str, code: codes.SubspaceCode, verdict, cfg: Config, start: float) -> None:
    dims = ", ".join(f"{d}x{c}" for d, c in sorted(Counter(code.dimensions).items()))
    line = f"  {name:<4} members={len(code):<4} dims[{dims}] {'PASS' if verdict else 'FAIL'}"
    if cfg.mindist and len(code) > 1:
        d, i, j = codes.closest_pair(code)
        line += f" d={d} at ({i},{j})"
    print(line + f"  {time.perf_counter() - start:.1f}s")


def run(cfg: Config) -> None:
    span = codes.SpanConfig(sample=cfg.sample, seed=cfg.seed)
    for q in cfg.qs:
        field = make_field(*FIELDS[q])
        fam = list(deza.build_family(field).members)
        print(f"q={q}: {len(fam)} matrices of order {fam[0].rows} over {field}")
        start = time.perf_counter()
        so = codes.build_so_code(fam, field, span)
        describe("SO", so, codes.is_self_orthogonal(so), cfg, start)
        if cfg.lcd:
            start = time.perf_counter()
            lcd = codes.build_lcd_code(fam, field, span)
            describe("LCD", lcd, codes.is_lcd(lcd), cfg, start)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, nargs="+", default=list(Config.qs), choices=sorted(FIELDS))
    ap.add_argument("--no-lcd", action="store_true")
    ap.add_argument("--no-mindist", action="store_true", help="skip the pairwise distance scan")
    ap.add_argument("--sample", type=int, help="random span elements instead of full enumeration")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    run(Config(tuple(args.q), not args.no_lcd, not args.no_mindist, args.sample, args.seed))


if __name__ == "__main__":
    main()
