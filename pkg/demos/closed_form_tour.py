"""Tour of the closed-form machinery: kernels, gains, and the toy identity.

Walks the smallest interesting cases and prints everything, so the numbers
can be eyeballed against the library's tests.
"""

import math

import numpy as np

from hbfsim import (dirichlet, g_full, g_partial, ratio_exact,
                    angles_from_kappa, centered_reference_angle)

D = 0.5

print("=" * 70)
print("Dirichlet kernel Z_M(x) = sin(pi d M x) / sin(pi d x), d = 1/2")
print("=" * 70)
for m in (2, 8):
    xs = [0.0, 0.25, 1.0, 2.0]
    vals = ", ".join(f"Z_{m}({x}) = {dirichlet(m, D, x):+.4f}" for x in xs)
    print(f"  M={m:2d}: {vals}")
print("  Z_M(0) = M by the limit; Z_2(x) = 2 cos(pi d x) identically.")

print()
print("=" * 70)
print("Two-antenna toy: M = 2, l_bs = K = 2, single-antenna subarrays")
print("=" * 70)
print(f"  {'beta':>6} {'g_full':>10} {'g_partial':>10} {'ratio':>8} {'identity':>9}")
for beta in (0.2, 0.5, 1.0, 1.5, 1.8):
    kappa = 2 * beta
    angles = angles_from_kappa(kappa, 2, 2, centered_reference_angle(kappa, 2, 2))
    gf = g_full(2, D, angles)[0]
    gp = g_partial(2, 2, D, angles)[0]
    identity = (1 - math.cos(math.pi * D * beta) ** 2) \
        / (1 + math.cos(math.pi * D * beta) ** 2)
    print(f"  {beta:6.2f} {gf:10.4f} {gp:10.4f} {gf / gp:8.4f} {identity:9.4f}")
print("  The ratio never exceeds 1: with two antennas the full structure")
print("  amplifies the collinearity of the two UEs' effective channels.")

print()
print("=" * 70)
print("Array growth at fixed cosine gap beta = 0.1 (K = l_bs = 2)")
print("=" * 70)
for m in (8, 32, 128, 512, 4096):
    kappa = 0.1 * m
    angles = angles_from_kappa(kappa, 2, m, centered_reference_angle(kappa, 2, m))
    r = ratio_exact(m, 2, D, angles)[0]
    print(f"  M={m:5d}: ratio = {r:8.5f}")
print("  The ratio approaches l_bs = 2: with enough aperture the full")
print("  structure recovers its factor-of-l_bs beamforming advantage.")
