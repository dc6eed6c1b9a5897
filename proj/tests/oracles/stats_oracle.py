#!/usr/bin/env python3
"""Reference chi-square tail probabilities and quantiles (scipy) used to
validate the C++ regularized-incomplete-gamma implementation.

Run:  python3 stats_oracle.py
"""

from scipy import stats

CASES = [(0.5, 1), (3.5, 2), (7.2, 7), (20.0902, 8), (18.4753, 7),
         (77.0463, 99), (123.225, 99), (150.0, 100), (4.0, 4), (1e-3, 3)]

QUANTILES = [(0.05, 99), (0.01, 8), (0.01, 3), (0.01, 7), (0.05, 49),
             (0.95, 99), (0.99, 8)]


def main():
    print("# chi2 survival function sf(x, k)")
    for x, k in CASES:
        print(f"  sf({x}, {k}) = {stats.chi2.sf(x, k):.15g}")
    print("\n# chi2 quantiles ppf(p, k)")
    for p, k in QUANTILES:
        print(f"  ppf({p}, {k}) = {stats.chi2.ppf(p, k):.15g}")


if __name__ == "__main__":
    main()
