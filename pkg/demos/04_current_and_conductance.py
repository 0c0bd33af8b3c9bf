"""Stationary current between the two leads and its derivatives.

Landauer-Buttiker current through the triangular resonator (leads at the
lowest vertex and the center of mass): bias dependence at several Fermi
levels, the gate-voltage threshold, and finite-difference conductance
against the linear-response integral.  Writes a PNG into demos/output/.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import geoscat as gs

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

tri = gs.Triangle()
table = gs.enumerate_modes(tri, 1e5)
x1, x2 = gs.Junction(0.1, 0.2), gs.Junction(1.0, 5.0 / np.sqrt(3.0))
coupling = gs.CouplingParams.natural(0.05)
beta = 25.0

print("current vs bias (ballistic, beta = 25):")
biases = np.linspace(0.0, 12.0, 40)
fig, ax = plt.subplots(figsize=(7, 4))
for mu1 in (1.0, 5.0, 10.0, 15.0):
    vals = [gs.current(table, x1, x2, coupling,
                       gs.BathPair(beta, mu1, mu1 + float(v))).value
            for v in biases]
    ax.plot(biases, vals, label=f"$\\mu_1 = {mu1:g}$", lw=1.0)
    print(f"  mu1={mu1:5.1f}: I(V=12) = {vals[-1]:.4f}")
ax.set_xlabel("$V$")
ax.set_ylabel("$I$")
ax.legend()
fig.tight_layout()
fig.savefig(out_dir / "current_vs_bias.png", dpi=150)
print(f"wrote {out_dir}/current_vs_bias.png")

print("\ngate-voltage threshold (V = 1, mu1 = 5, beta = 25):")
mu2 = 6.0
for v_g in (0.0, 4.0, 8.0, 11.9, 2 * mu2, 2 * mu2 + 2.0):
    rep = gs.current(table, x1, x2, coupling,
                     gs.BathPair(beta, 5.0, mu2, v_g=v_g))
    print(f"  V_g = {v_g:5.1f}: I = {rep.value:.3e}  "
          f"({rep.evaluations} integrand evaluations, "
          f"{len(rep.poles)} poles bracketed)")

print("\nconductance at mu = 8 (V -> 0):")
sigma_fd = gs.conductance(table, x1, x2, coupling,
                          gs.BathPair(beta, 8.0, 8.0), dv=0.004)
sigma_lr = gs.linear_response_conductance(table, x1, x2, coupling, 8.0, beta)
print(f"  finite difference: {sigma_fd:.6f}")
print(f"  linear response:   {sigma_lr.value:.6f}")

print("\nzero-temperature limit check (mu window 6..11):")
cold = gs.current(table, x1, x2, coupling, gs.BathPair(1e4, 6.0, 11.0))
frozen = gs.zero_temperature_current(table, x1, x2, coupling, 6.0, 11.0)
print(f"  I(beta=1e4) = {cold.value:.6f}   I_0 = {frozen.value:.6f}")
