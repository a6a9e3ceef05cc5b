"""How the stochastic estimators behave as the probe batch grows.

Diagonal and trace estimates are quadratic forms in Gaussian probes
pushed through the Gibbs factor Y; they are unbiased for diag(X) and
(Tr X, Tr X^2), with error shrinking like 1/sqrt(batch).
"""

import numpy as np

from entrosdp.linop import DualShiftedOperator
from entrosdp.matfunc import HALF_EXPONENTIAL, GibbsFactorOperator, dense_reference
from entrosdp.maxcut import erdos_renyi
from entrosdp.sketch import diag_estimate, draw_probes, trace_pair_estimate


def main():
    n, beta = 128, 4.0
    c = erdos_renyi(n, 6.0 / n, seed=0).C
    op = DualShiftedOperator(c, "scalar", 0.0)
    ref = dense_reference(op, beta, HALF_EXPONENTIAL)
    y = GibbsFactorOperator(op, beta, HALF_EXPONENTIAL)
    truth = np.diag(ref.x)

    print(f"X = exp(-beta H), n={n}, beta={beta}, Tr X = {ref.trace_x:.3f}")
    print("\nbatch size vs median relative diagonal error (20 trials):")
    for size in (1, 4, 16, 64):
        errs = [
            np.linalg.norm(diag_estimate(y, draw_probes(n, size, seed=1, iteration=t)) - truth)
            / np.linalg.norm(truth)
            for t in range(20)
        ]
        print(f"  N={size:3d}: {np.median(errs):.4f}")

    t1, t2 = trace_pair_estimate(y, draw_probes(n, 256, seed=2))
    print(f"\ntrace pair at N=256: Tr X ~ {t1:.3f} (exact {ref.trace_x:.3f}), "
          f"Tr X^2 ~ {t2:.3f} (exact {ref.trace_x2:.3f})")


if __name__ == "__main__":
    main()
