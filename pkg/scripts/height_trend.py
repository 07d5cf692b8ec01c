#!/usr/bin/env python3
"""Sweep the degree parameter for the dyadic construction and tabulate how
the measured height of the constructed polynomial approaches the main term
log(2)/(p-1) = log 2 as the degree grows.

Usage: python scripts/height_trend.py [rho ...]
"""

import math
import sys
import time

from padic_heights.construct import PrimeSpec, run_construction
from padic_heights.numfield import nf_init
from padic_heights import verify


def main(rhos):
    K = nf_init([-1, 1])
    main_term = math.log(2)
    print(f"{'rho':>6} {'deg':>6} {'m':>6} {'height':>12} {'gap to log2':>12} {'seconds':>8}")
    for rho in rhos:
        t0 = time.time()
        res = run_construction(K, [PrimeSpec(p=2)], rho=rho, epsilon=0.5, seed=1)
        cert = verify.verify_splitting(res.contexts[0], res.gpoly, res.plan.c)
        assert cert.all_ok, "splitting certificate failed"
        h, _, _ = verify.exact_height(K, list(res.gpoly.coeffs))
        dt = time.time() - t0
        ctx = res.contexts[0]
        print(
            f"{rho:>6} {res.gpoly.degree:>6} {ctx.m:>6} {h:>12.6f} "
            f"{h - main_term:>12.6f} {dt:>8.1f}"
        )


if __name__ == "__main__":
    rhos = [int(a) for a in sys.argv[1:]] or [12, 24, 50, 100, 200]
    main(rhos)
