#!/usr/bin/env python3
"""Independent reference for the canonical-ensemble computations.

Exact-fraction enumeration of Z_{n,K} for small systems, exact conditional
marginals, and a float log-space DP for the large equivalence-of-ensembles
trend.  Run:  python3 canonical_oracle.py
"""

from fractions import Fraction
from itertools import product

import numpy as np


def gfact_frac(b_num, b_den, kmax):
    """g!(k) as exact fractions for g(k) = 1 + b/k with b = b_num/b_den."""
    out = [Fraction(1)]
    for k in range(1, kmax + 1):
        out.append(out[-1] * (Fraction(1) + Fraction(b_num, b_den) / k))
    return out


def enumerate_Z(n, K, gf):
    """Full enumeration of Z_{n,K} = sum over occupancies of prod 1/g!(eta_x)."""
    total = Fraction(0)
    for occ in product(range(K + 1), repeat=n):
        if sum(occ) == K:
            w = Fraction(1)
            for k in occ:
                w /= gf[k]
            total += w
    return total


def marginal(n, K, gf):
    """P(eta_1 = j) = Z_{n-1,K-j} / (g!(j) Z_{n,K}) by enumeration."""
    Zn = enumerate_Z(n, K, gf)
    return [enumerate_Z(n - 1, K - j, gf) / (gf[j] * Zn) for j in range(K + 1)]


def dp_logZ(n, K, b):
    """Log-space DP over sites: logZ[m][k], row m from row m-1."""
    lg = np.zeros(K + 1)
    for k in range(1, K + 1):
        lg[k] = lg[k - 1] + np.log(1.0 + b / k)
    row = -lg.copy()  # n = 1
    for _ in range(2, n + 1):
        new = np.empty(K + 1)
        for k in range(K + 1):
            terms = row[: k + 1][::-1] - lg[: k + 1]
            m = terms.max()
            new[k] = m + np.log(np.exp(terms - m).sum())
        row = new
    return row  # logZ[n][0..K]


def main():
    for b_num, b_den, tag in [(0, 1, "b=0"), (4, 1, "b=4")]:
        gf = gfact_frac(b_num, b_den, 8)
        print(f"# exact Z_n_K, {tag}  (rows n=1..3, cols K=0..6)")
        for n in range(1, 4):
            vals = [enumerate_Z(n, K, gf) for K in range(7)]
            print(f"n={n}: " + ", ".join(f"{float(v):.17g}" for v in vals))
        print(f"  as fractions n=2: {[str(enumerate_Z(2, K, gf)) for K in range(4)]}")

    gf0 = gfact_frac(0, 1, 8)
    print("\n# b=0 n=2 K=3 marginal of eta(0) [expect uniform 1/4]")
    print([str(m) for m in marginal(2, 3, gf0)])
    print("# b=0 n=2 K=3: E[g] = Z_{2,2}/Z_{2,3} =",
          float(enumerate_Z(2, 2, gf0) / enumerate_Z(2, 3, gf0)))

    gf4 = gfact_frac(4, 1, 8)
    print("\n# b=4 n=4 K=8 marginal of eta(0) (chi^2 reference, exact)")
    marg = marginal(4, 8, gf4)
    for j, m in enumerate(marg):
        print(f"  P(eta=~{j}) = {float(m):.17g}   ({m})")
    print("  sum =", float(sum(marg)))

    print("\n# b=4 equivalence-of-ensembles trend: dev(n) = |Z_{n,n-1}/Z_{n,n} - 1|")
    for n in [50, 100, 200, 400]:
        row = dp_logZ(n, n, 4.0)
        dev = abs(np.exp(row[n - 1] - row[n]) - 1.0)
        print(f"  n={n:4d}: E[g] = {np.exp(row[n-1]-row[n]):.12f}  dev = {dev:.12f}")

    print("\n# b=0 rho=0.5: E_{nu_{200,100}}[g] vs Phi(0.5)=1/3")
    row = dp_logZ(200, 100, 0.0)
    eg = np.exp(row[99] - row[100])
    print(f"  E[g] = {eg:.12f}   |dev from 1/3| = {abs(eg - 1/3):.3e}")

    print("\n# DP vs enumeration spot check (b=4, n=3, K=6)")
    row = dp_logZ(3, 6, 4.0)
    print(f"  dp   = {np.exp(row[6]):.17g}")
    print(f"  enum = {float(enumerate_Z(3, 6, gf4)):.17g}")


if __name__ == "__main__":
    main()
