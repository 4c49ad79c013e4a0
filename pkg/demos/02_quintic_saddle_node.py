"""Saddle-node of cycles in the quintic family F(x) = -0.4x + 2.5x^3 - kx^5.

The averaging analysis in the canonical plane predicts two cycle radii
r^2 = (15 +- sqrt(225 - 64k)) / (10k) that collide when 225 = 64k, i.e.
k = 3.515625.  Sweeping k through the fold shows the two detected cycles
approaching, merging into one semi-stable cycle, and vanishing.  The true
flow's fold sits slightly below the asymptotic prediction (the prediction is
only exact as the perturbation size goes to zero), which is why k = 3.515625
itself already shows the merged, semi-stable remnant.
"""

from lienard_lab import builtin, find_limit_cycles, quintic_radii, scan_cycles

for k in (3.0, 3.3, 3.5, 3.515625, 3.57, 3.65):
    system = builtin("quintic", {"k": k})
    cycles = find_limit_cycles(system)
    r1, r2, disc = quintic_radii(k)
    predicted = "none" if r1 is None else f"r1={r1:.5f} r2={r2:.5f}"
    print(f"k={k:<9g} detected {len(cycles)} cycle(s): "
          + "  ".join(f"y+={c.y_plus0:.6f} amp={c.amplitude:.6f}"
                      f" [{c.stability}]" for c in cycles))
    print(f"{'':9s}   averaging radii: {predicted}  (discriminant {disc:+.3f})")

# the displacement map D(y0) = half_return(y0) - y0 makes the fold visible:
# its dip bottoms out near zero exactly where the two cycles merge
print("\nD(y0) dip near the fold (k = 3.515625):")
scan = scan_cycles(builtin("quintic", {"k": 3.515625}))
ys, dv = scan.y_grid, scan.D_values
window = (ys > 0.55) & (ys < 0.75)
for y, d in list(zip(ys[window], dv[window]))[::4]:
    bar = "#" * min(60, max(0, int(40 + 8e3 * d))) if d == d else ""
    print(f"  y0={y:.4f}  D={d: .3e}  {bar}")
