"""Count types of k-tuples in the ordered tree structure.

A type is a labeled tree shape on k points together with one of its convex
orders, so the count is (2k-3)!! * 2^(k-1).
"""

import time

from leafrel import count_trees, enumerate_tuple_types

for k in range(1, 7):
    start = time.perf_counter()
    ordered = len(enumerate_tuple_types(k))
    unordered = len(enumerate_tuple_types(k, ordered=False))
    took = time.perf_counter() - start
    print(f"k={k}: ordered {ordered:6d}  unordered {unordered:4d}  "
          f"shapes*2^(k-1) {count_trees(k) * 2 ** (k - 1):6d}  ({took:.2f}s)")
