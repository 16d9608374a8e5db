"""Classical phase space of the squeezed Kerr oscillator.

The mean-field Hamiltonian H = K [ (q^2+p^2)^2/4 - xi (q^2 - p^2) ] has two
degenerate wells at (q, p) = (+-sqrt(2 xi), 0) with energy -K xi^2 and a
hyperbolic saddle at the origin whose separatrix bounds the double-well
region.  Orbits inside a well circulate around its center; orbits above the
saddle energy enclose both wells.  A fourth-order Runge-Kutta trajectory
conserves the energy to ~1e-10 over the plotted window.

Writes phase_space_landscape.png next to this script.
"""

import math
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from kerr_esqpt import (
    ClassicalParams,
    contour_points,
    h_cl,
    integrate_trajectory,
    linearize,
    lyapunov_origin,
    separatrix_points,
    stationary_points,
)

HERE = pathlib.Path(__file__).resolve().parent

cp = ClassicalParams(xi_cl=8.0, k_cl=1.0)
e_well = -cp.k_cl * cp.xi_cl**2

fig, ax = plt.subplots(figsize=(7, 6))

span = 2.6 * math.sqrt(cp.xi_cl)
q = np.linspace(-span, span, 300)
p = np.linspace(-span, span, 300)
Q, P = np.meshgrid(q, p, indexing="ij")
ax.contourf(Q, P, h_cl(Q, P, cp), levels=40, cmap="viridis", alpha=0.55)

for frac in (0.7, 0.3):
    pts = contour_points(cp, frac * e_well, samples=600)
    ax.plot(pts[:, 0], pts[:, 1], "w-", lw=0.9)
pts = contour_points(cp, 0.8 * abs(e_well), samples=600)
ax.plot(pts[:, 0], pts[:, 1], "w-", lw=0.9)

sep = separatrix_points(cp, samples=800)
ax.plot(sep[:, 0], sep[:, 1], "r-", lw=1.8, label="separatrix (E = 0)")

for sp in stationary_points(cp):
    marker = "x" if sp.kind == "saddle" else "o"
    ax.plot(sp.q, sp.p, marker, color="k", ms=9, mew=2)

traj = integrate_trajectory(0.35 * math.sqrt(2 * cp.xi_cl), 0.0, cp,
                            t_max=2.0, dt=2e-4)
ax.plot(traj.q, traj.p, "c-", lw=1.2, label="RK4 orbit")

ax.set_xlabel("q")
ax.set_ylabel("p")
ax.set_title(rf"$\xi = {cp.xi_cl:g}$: double well + saddle")
ax.legend(loc="upper right")
ax.set_aspect("equal")
fig.tight_layout()
fig.savefig(HERE / "phase_space_landscape.png", dpi=150)

print("stationary points:")
for sp in stationary_points(cp):
    lin = linearize(sp.q, sp.p, cp)
    eigs = ", ".join(f"{ev:+.3g}" for ev in lin.eigenvalues)
    print(f"  ({sp.q:+.4f}, {sp.p:+.4f})  E = {sp.energy:9.3f}  "
          f"{sp.kind:6s} [{lin.classification}; eigenvalues {eigs}]")
print(f"saddle instability rate lambda = {lyapunov_origin(cp):.3f} "
      f"(= 2 K xi = {2 * cp.k_cl * cp.xi_cl:.3f})")
drift = np.max(np.abs(traj.energy - traj.energy[0]))
print(f"RK4 energy drift over K t = 2: {drift:.3e}")
print(f"wrote {HERE / 'phase_space_landscape.png'}")
