"""Overlap percentages from set sizes and intersection counts alone.

Usage: overlap_from_counts.py SIZE_A SIZE_B COUNT [SIZE_A SIZE_B COUNT ...]
"""

import argparse

from topiknet.compare import overlap
from topiknet.terms import Term


def synthetic_pair(size_a, size_b, count):
    shared = [Term(f"S{i}") for i in range(count)]
    return (shared + [Term(f"A{i}") for i in range(size_a - count)],
            shared + [Term(f"B{i}") for i in range(size_b - count)])


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("values", type=int, nargs="+")
    args = ap.parse_args()
    if len(args.values) % 3:
        ap.error("expected triples of SIZE_A SIZE_B COUNT")
    print("size_a\tsize_b\tcount\tpct")
    for i in range(0, len(args.values), 3):
        a, b, c = args.values[i:i + 3]
        if not 0 <= c <= min(a, b):
            ap.error(f"count {c} impossible for sizes {a}, {b}")
        r = overlap(*synthetic_pair(a, b, c))
        print(f"{a}\t{b}\t{c}\t{r.pct_text}")
