"""Independent dense-grid oracle for the Delsarte LP bound.

Solves  min f(1)  s.t.  c_0 = 1, c_k >= 0, f(t_j) <= 0  on a uniform grid of
2000 points in [-1, cos(theta)], with f = sum_k c_k C_k^{n/2-1}, using scipy's
HiGHS solver and scipy.special.eval_gegenbauer. The resulting certificate is
re-checked on a 20000-point grid. Values printed here are frozen into the C++
tests.
"""
import numpy as np
from scipy.optimize import linprog
from scipy.special import eval_gegenbauer


def delsarte(n, theta, dmax, grid=2000, check=20000):
    alpha = n / 2 - 1
    ts = np.linspace(-1.0, np.cos(theta), grid)
    ks = np.arange(1, dmax + 1)
    scale = np.array([eval_gegenbauer(k, alpha, 1.0) for k in ks])
    A = np.array([[eval_gegenbauer(k, alpha, t) / s for k, s in zip(ks, scale)] for t in ts])
    res = linprog(np.ones(dmax), A_ub=A, b_ub=-np.ones(grid), bounds=[(0, None)] * dmax,
                  method="highs")
    assert res.status == 0, res.message
    c = res.x / scale
    fine = np.linspace(-1.0, np.cos(theta), check)
    f = 1 + sum(ck * eval_gegenbauer(k, alpha, fine) for k, ck in zip(ks, c))
    f1 = 1 + sum(ck * eval_gegenbauer(k, alpha, 1.0) for k, ck in zip(ks, c))
    return f1, f.max()


if __name__ == "__main__":
    for n in (3, 4, 8):
        bound, viol = delsarte(n, np.pi / 3, 12)
        print(f"n={n} theta=pi/3 dmax=12 bound={bound:.6f} max_violation_20000={viol:.3e}")
