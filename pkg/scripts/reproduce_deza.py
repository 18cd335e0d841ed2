"""Build the Deza families for several q and print their verified parameters."""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from dezacodes import deza
from dezacodes.gf import make_field


@dataclass(frozen=True)
class Config:
    qs: tuple[int, ...] = (2, 3, 4, 5)
    suite: bool = False


def field_for(q: int):
    for p in (2, 3, 5, 7, 11, 13):
        m, r = 0, q
        while r % p == 0:
            r //= p
            m += 1
        if r == 1 and m:
            return make_field(p, m)
    raise SystemExit(f"q={q} is not a small prime power")


def run(cfg: Config) -> bool:
    ok = True
    print(f"{'q':>3} {'n':>5} {'k':>4} {'b':>3} {'a':>3}  commutative  seconds")
    for q in cfg.qs:
        start = time.perf_counter()
        field = field_for(q)
        fam = deza.build_family(field)
        params = {deza.verify_deza(m).astuple() for m in fam.members}
        comm = deza.check_commutativity(fam)
        elapsed = time.perf_counter() - start
        want = deza.expected_params(q).astuple()
        good = params == {want}
        ok &= good
        n, k, b, a = want
        print(f"{q:>3} {n:>5} {k:>4} {b:>3} {a:>3}  {str(comm):>11}  {elapsed:7.2f}{'' if good else '  MISMATCH ' + str(params)}")
        if cfg.suite:
            checks, _ = deza.run_suite(field)
            for c in checks:
                print("    " + c.line())
            ok &= all(c.ok for c in checks)
    return ok


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, nargs="+", default=list(Config.qs))
    ap.add_argument("--suite", action="store_true", help="also print every lemma/theorem check")
    args = ap.parse_args()
    raise SystemExit(0 if run(Config(tuple(args.q), args.suite)) else 1)


if __name__ == "__main__":
    main()
