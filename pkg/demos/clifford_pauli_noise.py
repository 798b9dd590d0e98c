"""Why Clifford brickworks do not reproduce the Haar curves.

A Clifford U maps a Pauli on qubit 0 to a Pauli string, which factorizes as
P_A (x) P_B across the cut. Conjugating by such a product cannot move an
operator from A into B, so every Pauli channel (depolarizing included) gives
an A-OTOC of exactly zero. A Z rotation e^{i theta Z} = cos(theta) + i
sin(theta) Z only scrambles through the cross term, so its curve rises and
falls back to zero at theta = pi/2.
"""

import numpy as np

from aotoc import CircuitParams, QubitLayout, aotoc_exact, g_finite, make_depolarizing, make_rotation
from aotoc.circuits import EnsembleKind, GateEnsemble, build_brickwork

L = 6
layout = QubitLayout(L)
u = build_brickwork(L, GateEnsemble(EnsembleKind.BRICKWORK_CLIFFORD), seed=3).unitary()
z0 = np.kron(np.diag([1.0, -1.0]), np.eye(2 ** (L - 1)))
string = u.conj().T @ z0 @ u
d_a, d_b = layout.d_A, layout.d_B
schmidt = np.linalg.svd(string.reshape(d_a, d_b, d_a, d_b).transpose(0, 2, 1, 3).reshape(d_a**2, d_b**2), compute_uv=False)
print("operator Schmidt rank of U^dagger Z_0 U across the cut:", int(np.sum(schmidt > 1e-9)))

print("\ndepolarizing p   clifford   haar closed form")
for p in (0.25, 0.5, 1.0):
    c = make_depolarizing(p)
    print(f"  {p:<14} {aotoc_exact(u, c, 1, layout):9.2e}   {g_finite(c, CircuitParams(L, 1)):.4f}")

print("\nrotation theta   clifford   haar closed form")
for th in np.linspace(0, np.pi / 2, 5):
    c = make_rotation((0, 0, 1), th)
    print(f"  {th:<14.4f} {aotoc_exact(u, c, 1, layout) + 0.0:9.4f}   {g_finite(c, CircuitParams(L, 1)):.4f}")
