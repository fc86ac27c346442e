#!/usr/bin/env python3
"""Print the closed-form transgression coefficients A_ij for small degrees,
cross-checked on the fly against the exact beta-integral derivation."""

import sys

from transgress.transgression import coefficient_A, coefficient_A_by_integration


def main() -> int:
    max_k = int(sys.argv[1]) if len(sys.argv) > 1 else 6
    for k in range(1, max_k + 1):
        print(f"degree k = {k}")
        for i in range(k):
            row = []
            for j in range(k - i):
                closed = coefficient_A(k, i, j)
                integrated = coefficient_A_by_integration(k, i, j)
                if closed != integrated:
                    print(f"  MISMATCH at (i={i}, j={j}): "
                          f"{closed.render()} vs {integrated.render()}")
                    return 1
                row.append(f"A[{i},{j}] = {closed.render()}")
            print("  " + "   ".join(row))
    return 0


if __name__ == "__main__":
    sys.exit(main())
