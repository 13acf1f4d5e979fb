"""Modular data of small standard subspaces, computed in complex arithmetic at 40 digits.

With H the real span of the columns of an invertible complex matrix B, the
Tomita operator is S v = A conj(v), A = B conj(B)^-1, hence Delta = A^T conj(A),
and the cutting projection onto H is (1 + S)(1 - Delta)^-1.
"""

import numpy as np
import mpmath as mp

mp.mp.dps = 40


def _complex_basis(real_basis):
    X = np.asarray(real_basis, float)
    n = X.shape[1]
    return mp.matrix([[mp.mpc(X[i, j], X[n + i, j]) for j in range(n)] for i in range(n)])


def _conj(M):
    return M.apply(mp.conj)


def modular(real_basis):
    B = _complex_basis(real_basis)
    A = B * mp.inverse(_conj(B))
    delta = A.T * _conj(A)
    delta = (delta + delta.H) / 2
    lam, U = mp.eighe(delta)
    return A, lam, U


def log_eigenvalues(real_basis):
    _, lam, _ = modular(real_basis)
    return sorted(float(mp.log(x)) for x in lam)


def entropy(real_basis, k_real):
    """-Im(k, P_H i log(Delta) k) with the product antilinear in the first slot."""
    A, lam, U = modular(real_basis)
    n = len(lam)
    k = mp.matrix([mp.mpc(k_real[i], k_real[n + i]) for i in range(n)])
    D = lambda fn: U * mp.diag([fn(x) for x in lam]) * U.H
    w = mp.mpc(0, 1) * (D(mp.log) * k)
    y = D(lambda x: 1 / (1 - x)) * w
    Pw = y + A * _conj(y)
    val = (k.H * Pw)[0]
    return float(-mp.im(val))


def run():
    rng = np.random.default_rng(2024)
    basis2 = rng.normal(size=(4, 2))
    rng = np.random.default_rng(31)
    basis4 = rng.normal(size=(8, 4))
    k4 = rng.normal(size=8)
    return {
        "C2_basis": basis2.tolist(),
        "C2_log_eigenvalues": log_eigenvalues(basis2),
        "C4_basis": basis4.tolist(),
        "C4_vector": k4.tolist(),
        "C4_entropy": entropy(basis4, k4),
        "C4_log_eigenvalues": log_eigenvalues(basis4),
    }


if __name__ == "__main__":
    import json

    print(json.dumps(run(), indent=1))
