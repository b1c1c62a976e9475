#!/usr/bin/env python3
"""Survey the tame case classification over a grid of (p, q, alpha) and,
for small instances, cross-check every presentation against the lift
enumeration oracle at n = 2.

Useful for seeing how thin some branches are: for p = 5 the diagonal
case with q not 1 mod p is empty, and the first instances live at p = 7.
"""

import sys
import time
from collections import Counter

from pndeform.errors import HypothesisViolated
from pndeform.localdef import classify_tame_case, enumerate_lifts, residual_pair, verify_presentation
from pndeform.ring import is_prime


def main() -> int:
    start = time.perf_counter()
    census = Counter()
    verified = 0
    for p in (3, 5, 7):
        for q in (x for x in range(2, 50) if is_prime(x) and x != p):
            for alpha in range(1, p):
                try:
                    case, pres = classify_tame_case(q, alpha, p)
                except HypothesisViolated:
                    census[(p, "hypothesis")] += 1
                    continue
                branch = case.label
                if case.label == "I":
                    branch += " (q=1 mod p)" if case.q_is_1_mod_p else " (q!=1 mod p)"
                census[(p, branch)] += 1
                if pres is not None and p <= 5 and q <= 23:
                    enum = enumerate_lifts(*residual_pair(p, q, alpha), 2, q)
                    report = verify_presentation(case, pres, enum)
                    assert report.matched
                    verified += 1
    for (p, label), count in sorted(census.items(), key=str):
        print(f"p={p}: {label:18s} {count}")
    print(f"\n{verified} presentations verified against the enumeration "
          f"oracle at n = 2 in {time.perf_counter() - start:.1f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
