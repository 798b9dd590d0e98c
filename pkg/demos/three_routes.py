"""Three independent routes to the same Haar average.

1. The closed-form finite-chain expression.
2. Exact Weingarten calculus over the four-copy permutation algebra.
3. Monte Carlo: sample global Haar unitaries and evaluate each circuit exactly.
"""

from aotoc import CircuitParams, g_finite, haar_averaged_g_exact, haar_mc_average_g, make_depolarizing, make_rotation

for chan in (make_depolarizing(0.3), make_rotation((0, 0, 1), 0.7)):
    for L, k in ((4, 1), (4, 2), (6, 1)):
        p = CircuitParams(L, k)
        closed = g_finite(chan, p)
        exact = haar_averaged_g_exact(chan, p)
        mc = haar_mc_average_g(chan, p, 20, seed=7)
        print(
            f"{chan.name:<22} L={L} k={k}  closed {closed:.10f}  weingarten {exact:.10f}"
            f"  monte carlo {mc.value:.4f} +- {mc.stderr:.4f}"
        )
