"""Exhaustive search near a Harnack distribution for (4,4,2) grid data.

P starts as the Harnack distribution (+ exactly at i = a, j = b mod 2) on
[0,8]x[0,3], a few of its signs in rows 0..2 are flipped, and four of the
resulting even squares become nodes.  H continues the same distribution.
"""

import argparse
import itertools
import sys

sys.path.insert(0, __file__.rsplit("/", 1)[0])
from search_442 import score  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-flips", type=int, default=2)
    ap.add_argument("--a", type=int, default=1)
    ap.add_argument("--b", type=int, default=1)
    args = ap.parse_args()
    a, b = args.a, args.b

    def base(i, j):
        return 1 if i % 2 == a and j % 2 == b else -1

    ps0 = [[base(i, j) for i in range(9)] for j in range(4)]
    hs = [ps0[2][:], ps0[3][:]]
    pts = [(i, j) for j in range(3) for i in range(9)]
    best = None
    for r in range(1, args.max_flips + 1):
        for flips in itertools.combinations(pts, r):
            ps = [row[:] for row in ps0]
            for i, j in flips:
                ps[j][i] *= -1
            evens = [(i, j) for j in range(3) for i in range(8)
                     if ps[j][i] * ps[j][i + 1] * ps[j + 1][i] * ps[j + 1][i + 1] > 0]
            if len(evens) < 4:
                continue
            for nodes in itertools.combinations(evens, 4):
                for fill in "AB":
                    pc = [["-"] * 8 for _ in range(3)]
                    for i, j in evens:
                        pc[j][i] = "N" if (i, j) in nodes else fill
                    hc = [["A"] * 8 for _ in range(2)]
                    c, info = score(ps, pc, hs, hc)
                    if best is None or c < best[0]:
                        best = (c, flips, nodes, fill, sorted(info[1]) if info else None)
                        print(best, flush=True)
                    if c == 0:
                        print("FOUND", ps, pc, hs, hc, flush=True)
                        return


if __name__ == "__main__":
    main()
