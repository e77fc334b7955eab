"""Radial mean bodies interpolate between a point and the difference body.

For each exponent p the star body R_p K averages the directional reach of
K over its interior points; p = infinity recovers the full difference body
and the scaled copies c_{n,p} R_p K squeeze between DK and the scaled polar
projection body.  On a simplex the whole scaled chain collapses to a single
body, which is the equality case the chain report detects.
"""

import numpy as np

import projbodies as pb

grid = pb.sphere_directions(2, 64)
triangle = pb.standard_simplex(2)
square = pb.cube(2)

print("rho_{R_p}(e1) for the unit square, p from -0.5 to infinity:")
for p in (-0.5, 0.0, 0.5, 1.0, 2.0, 4.0, np.inf):
    r = pb.radial_mean_body(square, p, grid, tol=1e-9)
    print(f"  p = {p:>4}: rho = {r.star.radii[0]:.6f}")

print("\nscaled chain at e1 for the triangle (collapses: simplex equality):")
rho_dk = pb.radial(pb.difference_body(triangle), np.array([1.0, 0.0]))
print(f"  rho_DK            = {rho_dk:.9f}")
for p in (0, 1, 2):
    r = pb.radial_mean_body(triangle, p, grid, tol=1e-10)
    print(f"  c_(2,{p}) rho_R_{p}   = {pb.c_np(2, p) * r.star.radii[0]:.9f}")
zon = pb.projection_zonoid(triangle)
print(f"  2 Vol rho_polar   = "
      f"{2 * triangle.volume / float(zon.support(np.array([[1.0, 0.0]]))[0]):.9f}")

for name, K in (("triangle", triangle), ("square", square),
                ("pentagon", pb.regular_polygon(5))):
    rep = pb.inclusion_chain_report(K, [0, 1, 2], grid)
    spread = rep.witnesses["equality_spread"].value
    print(f"\n{name}: chain {'holds' if rep.passed else 'FAILS'}; "
          f"worst margin {rep.margin:+.2e}; equality spread {spread:.2e}")
