#!/usr/bin/env python3
"""Exact minimum strong s-blocking set sizes for tiny parameters.

Exhaustive search, so sizes are ground truth (useful for pinning expected
values in tests).  The gap column compares against the general lower bound
(q^(s+1)-1)(k-s)/(q-1).
"""

import argparse
import time

import blockforge as bf

DEFAULT_CASES = [(2, 2, 1), (2, 3, 1), (3, 2, 1), (3, 3, 1), (2, 3, 2)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--budget", type=int, default=2_000_000)
    args = ap.parse_args()
    print(f"{'q':>3} {'k':>2} {'s':>2} {'optimum':>7} {'bound':>5} {'gap':>4} "
          f"{'tested':>8} {'exact':>5} {'sec':>7}")
    for q, k, s in DEFAULT_CASES:
        fld = bf.field_create(q)
        t0 = time.perf_counter()
        res = bf.minimum_size_search(fld, k, s, budget=args.budget)
        elapsed = time.perf_counter() - t0
        lb = bf.lower_bound(q, k, s)
        print(f"{q:>3} {k:>2} {s:>2} {res.size:>7} {lb:>5} {res.size - lb:>4} "
              f"{res.candidates_tested:>8} {str(res.exact):>5} {elapsed:>7.2f}")


if __name__ == "__main__":
    main()
