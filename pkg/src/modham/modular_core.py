"""Finite-dimensional standard subspaces and their modular data.

A complex space C^n is handled as R^{2n} with a complex structure ``J``
and a real metric ``g``. The complex scalar product is
``<x, y> = g(x, y) + i*beta(x, y)`` with ``beta(x, y) = g(Jx, y)``, so it is
antilinear in the first slot. Every operator below is a real ``2n x 2n``
matrix acting on column vectors.
"""

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np
import scipy.linalg as sl

from .config import DEFAULT_TOLERANCES
from .errors import NearDegenerate, NotFactorial, NotInvariant, RankDeficient


def standard_complex_structure(n):
    z, i = np.zeros((n, n)), np.eye(n)
    return np.block([[z, -i], [i, z]])


@dataclass(frozen=True)
class ComplexSpace:
    J: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        J = np.asarray(self.J, dtype=float)
        g = np.asarray(self.g, dtype=float)
        if J.ndim != 2 or J.shape != g.shape or J.shape[0] != J.shape[1] or J.shape[0] % 2:
            raise ValueError("J and g must be equal, even-sized square matrices")
        tol = DEFAULT_TOLERANCES.structure
        scale = max(1.0, np.abs(g).max())
        if np.abs(J @ J + np.eye(len(J))).max() > tol * 10 * np.abs(J).max() ** 2:
            raise ValueError("J must square to -1")
        if np.abs(g - g.T).max() > tol * scale:
            raise ValueError("g must be symmetric")
        if np.abs(J.T @ g @ J - g).max() > tol * 10 * scale * np.abs(J).max() ** 2:
            raise ValueError("g must be J-invariant")
        np.linalg.cholesky(0.5 * (g + g.T))  # raises if not positive definite
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "g", 0.5 * (g + g.T))

    @classmethod
    def standard(cls, n):
        return cls(standard_complex_structure(n), np.eye(2 * n))

    @property
    def n(self):
        return self.J.shape[0] // 2

    @property
    def real_dim(self):
        return self.J.shape[0]

    def beta(self, x, y):
        return float((self.J @ x) @ self.g @ y)

    def inner(self, x, y):
        return complex(x @ self.g @ y, self.beta(x, y))

    def adjoint(self, A):
        """Adjoint of a real operator with respect to ``g``."""
        return np.linalg.solve(self.g, A.T @ self.g)

    def is_complex_linear(self, A, tol=1e-10):
        return np.abs(A @ self.J - self.J @ A).max() <= tol * max(1.0, np.abs(A).max())

    def complex_frame(self):
        """g-orthonormal real basis ``[q_1..q_n, Jq_1..Jq_n]`` (columns)."""
        n, g, J = self.n, self.g, self.J
        qs = []
        for e in np.eye(2 * n):
            v = e.copy()
            for _ in range(2):
                for q in qs:
                    for w in (q, J @ q):
                        v -= (w @ g @ v) * w
            norm = math.sqrt(max(v @ g @ v, 0.0))
            if norm > 1e-8:
                qs.append(v / norm)
            if len(qs) == n:
                break
        Q = np.column_stack(qs)
        return np.hstack([Q, J @ Q])

    def to_complex_vector(self, x, frame=None):
        U = self.complex_frame() if frame is None else frame
        c = U.T @ self.g @ x
        return c[: self.n] + 1j * c[self.n:]

    def to_complex_operator(self, A, frame=None):
        """Matrix of a complex-linear real operator in the complex frame."""
        U = self.complex_frame() if frame is None else frame
        M = U.T @ self.g @ A @ U
        n = self.n
        return M[:n, :n] + 1j * M[n:, :n]

    @staticmethod
    def random_compatible(n, rng):
        """Random ambient with the standard J and a random J-invariant metric."""
        J = standard_complex_structure(n)
        X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        A = X.conj().T @ X + n * np.eye(n)
        g = np.block([[A.real, -A.imag], [A.imag, A.real]])
        return ComplexSpace(J, g)


@dataclass(frozen=True)
class StandardSubspace:
    ambient: ComplexSpace
    basis: np.ndarray
    condition: float

    @property
    def dim(self):
        return self.basis.shape[1]

    def contains(self, x, tol=1e-8):
        return self.distance(x) <= tol * max(1.0, math.sqrt(abs(x @ self.ambient.g @ x)))

    def projector(self):
        """g-orthogonal projection onto the real span of the basis."""
        B, g = self.basis, self.ambient.g
        return B @ np.linalg.solve(B.T @ g @ B, B.T @ g)

    def distance(self, x):
        r = x - self.projector() @ x
        return math.sqrt(max(r @ self.ambient.g @ r, 0.0))

    def symplectic_complement(self):
        """Basis of H' = iH^perp (perp taken with the real part of the product)."""
        g, J, B = self.ambient.g, self.ambient.J, self.basis
        perp = sl.null_space(B.T @ g)
        return J @ perp


def make_standard_subspace(ambient, basis, tolerances=DEFAULT_TOLERANCES):
    basis = np.atleast_2d(np.asarray(basis, dtype=float))
    if basis.shape[0] != ambient.real_dim and basis.shape[1] == ambient.real_dim:
        basis = basis.T
    if basis.shape != (ambient.real_dim, ambient.n):
        raise RankDeficient(
            f"need {ambient.n} basis columns of length {ambient.real_dim}, got {basis.shape}"
        )
    T = np.hstack([basis, ambient.J @ basis])
    cond = np.linalg.cond(T)
    if not np.isfinite(cond) or cond > tolerances.rank_cond:
        raise RankDeficient(f"[B | JB] is singular (cond = {cond:.3e}); H meets iH")
    return StandardSubspace(ambient, basis.copy(), float(cond))


def random_standard_subspace(n, rng, ambient=None, tolerances=DEFAULT_TOLERANCES, retries=20):
    ambient = ComplexSpace.standard(n) if ambient is None else ambient
    for _ in range(retries):
        q, _ = np.linalg.qr(rng.normal(size=(2 * n, n)))
        try:
            return make_standard_subspace(ambient, q, tolerances)
        except RankDeficient:
            continue
    raise RankDeficient("could not draw a standard subspace")


@dataclass(frozen=True)
class ModularData:
    subspace: StandardSubspace
    tomita: np.ndarray
    delta: np.ndarray
    jconj: np.ndarray
    log_eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # g-orthonormal columns, one per eigenvalue
    spectral_gap: float
    factorial: bool
    _whiten: tuple = field(repr=False, default=None)

    @property
    def ambient(self):
        return self.subspace.ambient

    def function(self, fn):
        """Real matrix of ``fn(Delta)`` for a real function of the eigenvalues."""
        C, Ci, W, lam = self._whiten
        F = Ci @ (W * fn(lam)) @ W.T @ C
        # fn(Delta) is complex linear; drop the antilinear part left by roundoff
        J = self.ambient.J
        return 0.5 * (F - J @ F @ J)

    def log_delta(self):
        return self.function(np.log)

    def delta_it(self, s):
        """Delta^{is} = cos(s log Delta) + J sin(s log Delta)."""
        return self.function(lambda lam: np.cos(s * np.log(lam))) + self.ambient.J @ self.function(
            lambda lam: np.sin(s * np.log(lam))
        )

    def require_factorial(self):
        if not self.factorial:
            raise NotFactorial(f"1 is (numerically) in spec(Delta); gap {self.spectral_gap:.3e}")


def modular_data(H, tolerances=DEFAULT_TOLERANCES, require_factorial=False):
    amb = H.ambient
    g, J, B = amb.g, amb.J, H.basis
    n = amb.n
    C = np.linalg.cholesky(g).T  # g = C^T C
    Ci = np.linalg.inv(C)
    # Tomita operator in g-orthonormal coordinates; its SVD is the polar decomposition
    # S = J Delta^(1/2), which avoids squaring the conditioning by forming S* S
    Tw = C @ np.hstack([B, J @ B])
    Sw = np.linalg.solve(Tw.T, (Tw * np.r_[np.ones(n), -np.ones(n)]).T).T
    U, sig, Vt = np.linalg.svd(Sw)
    if sig.min() <= 0:
        raise RankDeficient("modular operator lost positivity; subspace too ill-conditioned")
    W, lam = Vt.T, sig**2
    S = Ci @ Sw @ C
    delta = Ci @ (W * lam) @ W.T @ C
    jconj = Ci @ U @ Vt @ C
    gap = float(np.min(np.abs(lam - 1.0)))
    factorial = gap >= tolerances.factorial
    md = ModularData(
        subspace=H,
        tomita=S,
        delta=delta,
        jconj=jconj,
        log_eigenvalues=np.log(lam),
        eigenvectors=Ci @ W,
        spectral_gap=gap,
        factorial=bool(factorial),
        _whiten=(C, Ci, W, lam),
    )
    if require_factorial and not factorial:
        raise NearDegenerate(f"eigenvalue of Delta within {gap:.3e} of 1")
    return md


# -- projections -----------------------------------------------------------


def projection_E(md):
    """Real-orthogonal projection onto H."""
    a = md.function(lambda l: 1.0 / (1.0 + l))
    b = md.function(lambda l: np.sqrt(l) / (1.0 + l))
    return a + md.jconj @ b


def projection_P(md):
    """Cutting projection H + H' -> H."""
    md.require_factorial()
    a = md.function(lambda l: 1.0 / (1.0 - l))
    b = md.function(lambda l: np.sqrt(l) / (1.0 - l))
    return a + md.jconj @ b


def projection_Q(md):
    return 0.5 * (np.eye(md.ambient.real_dim) + md.tomita)


def coth_half_log(md):
    return md.function(lambda l: 1.0 / np.tanh(0.5 * np.log(l)))


# -- entropy ---------------------------------------------------------------


def _entropy_kernels(lam):
    """a(l) log l and b(l) log l, continued to l = 1 by their limits."""
    lam = np.asarray(lam, dtype=float)
    log = np.log(lam)
    near = np.abs(lam - 1.0) < 1e-7
    safe = np.where(near, 2.0, lam)
    a = np.where(near, -1.0 + 0.5 * (lam - 1.0), np.log(safe) / (1.0 - safe))
    b = np.where(near, -1.0, np.sqrt(safe) * np.log(safe) / (1.0 - safe))
    return a, b, log


def vector_entropy(md, k):
    """Entropy of the vector ``k`` with respect to H, via the spectral sums.

    Returns ``-Re(k, a(Delta) log Delta k) + Re(k, J_H b(Delta) log Delta k)``,
    which is nonnegative (a positive quadratic form on H + H').
    """
    md.require_factorial()
    a_log = md.function(lambda l: _entropy_kernels(l)[0])
    b_log = md.function(lambda l: _entropy_kernels(l)[1])
    g = md.ambient.g
    return float(-(k @ g @ a_log @ k) + k @ g @ md.jconj @ b_log @ k)


def vector_entropy_direct(md, k):
    """Same quantity from the matrices: ``-Im(k, P_H i log(Delta) k)``."""
    P = projection_P(md)
    return -md.ambient.beta(k, P @ md.ambient.J @ md.log_delta() @ k)


# -- invariance and passivity ---------------------------------------------


@dataclass(frozen=True)
class InvarianceReport:
    group_invariant: bool
    resolvent_invariant: bool
    skew_on_subspace: bool
    group_residual: float
    resolvent_residual: float
    skew_residual: float

    @property
    def consistent(self):
        return self.group_invariant == self.resolvent_invariant == self.skew_on_subspace


def _leak(H, X):
    """Relative size of the component of the columns of X outside H."""
    P = H.projector()
    g = H.ambient.g
    R = X - P @ X
    num = np.sqrt(max(np.trace(R.T @ g @ R), 0.0))
    den = np.sqrt(max(np.trace(X.T @ g @ X), 1e-300))
    return float(num / den)


def invariance_equivalence_check(H, A, samples=(0.1, -0.1, 1.0, -1.0, 5.0, -5.0), tol=1e-8):
    """Compare three characterisations of ``exp(isA) H = H``."""
    amb = H.ambient
    if not amb.is_complex_linear(A, max(tol, 1e-10)):
        raise ValueError("A must commute with the complex structure")
    K = amb.J @ A
    B = H.basis
    group = max(_leak(H, sl.expm(s * K) @ B) for s in samples)
    eye = np.eye(amb.real_dim)
    resolvent = max(_leak(H, np.linalg.solve(K + sgn * eye, B)) for sgn in (1.0, -1.0))
    inside = _leak(H, K @ B)
    G = B.T @ amb.g @ B
    KH = np.linalg.lstsq(B, K @ B, rcond=None)[0]
    skew = np.abs(G @ KH + KH.T @ G).max() / max(np.abs(G @ KH).max(), 1e-300)
    skew_res = max(inside, float(skew))
    return InvarianceReport(
        group_invariant=group <= tol,
        resolvent_invariant=resolvent <= tol,
        skew_on_subspace=skew_res <= tol,
        group_residual=group,
        resolvent_residual=resolvent,
        skew_residual=skew_res,
    )


@dataclass(frozen=True)
class PassivityReport:
    tensor_power: int
    samples: int
    min_value: float
    max_value: float
    passive: bool  # (xi, A_n xi) <= 0 on every sample
    active: bool  # (xi, A_n xi) >= 0 on every sample
    lemma_pos_min_eigenvalue: float  # min eigenvalue of A log(Delta)


def leibniz_expectation(Ac, xi, n):
    """``(xi, A_n xi)`` for the n-fold Leibniz generator acting on a tensor."""
    out = 0.0
    for axis in range(n):
        Axi = np.moveaxis(np.tensordot(Ac, xi, axes=([1], [axis])), 0, axis)
        out += np.vdot(xi, Axi).real
    return out


def passivity_check(md, A, n=1, samples=1000, rng=None, tol=1e-9):
    """Sample the sign of ``(xi, A_n xi)`` on real spans of product vectors from H."""
    if n not in (1, 2, 3):
        raise ValueError("tensor power must be 1, 2 or 3")
    H = md.subspace
    amb = H.ambient
    inv = invariance_equivalence_check(H, A)
    if not inv.group_invariant:
        raise NotInvariant(f"exp(isA) does not preserve H (residual {inv.group_residual:.2e})")
    rng = np.random.default_rng() if rng is None else rng
    frame = amb.complex_frame()
    Ac = amb.to_complex_operator(A, frame)
    Ld = amb.to_complex_operator(md.log_delta(), frame)
    hs = [amb.to_complex_vector(b, frame) for b in H.basis.T]
    monomials = list(product(range(len(hs)), repeat=n))
    tensors = []
    for idx in monomials:
        t = hs[idx[0]]
        for j in idx[1:]:
            t = np.multiply.outer(t, hs[j])
        tensors.append(t)
    tensors = np.array(tensors)
    values = np.empty(samples)
    scale = np.abs(Ac).max() or 1.0
    for s in range(samples):
        coeffs = rng.normal(size=len(monomials))
        xi = np.tensordot(coeffs, tensors, axes=1)
        values[s] = leibniz_expectation(Ac, xi, n) / (scale * np.vdot(xi, xi).real)
    prod_ = Ac @ Ld
    herm = 0.5 * (prod_ + prod_.conj().T)
    return PassivityReport(
        tensor_power=n,
        samples=samples,
        min_value=float(values.min()),
        max_value=float(values.max()),
        passive=bool(values.max() <= tol),
        active=bool(values.min() >= -tol),
        lemma_pos_min_eigenvalue=float(np.linalg.eigvalsh(herm).min()),
    )


# -- the symplectic-spectrum route ---------------------------------------


@dataclass(frozen=True)
class SymplecticSpectrum:
    """Modular data of H read off from its real Gram matrix and symplectic form.

    For ``h`` in H with coordinates ``x``:
    ``-(h, log Delta h) = x^T C^T W diag(2 s artanh s) W^T C x``,
    where ``G = C^T C`` and ``s`` are the singular values of the whitened
    symplectic matrix. This avoids forming Delta, whose eigenvalues
    ``((1 - s)/(1 + s))^{+-1}`` overflow double precision when ``s -> 1``.
    """

    sigma: np.ndarray
    modes: np.ndarray
    whiten: np.ndarray  # C
    unwhiten: np.ndarray  # C^{-1}
    symplectic: np.ndarray  # whitened beta (antisymmetric)
    gram_condition: float
    saturated: int

    @property
    def log_eigenvalue_magnitudes(self):
        return 2.0 * np.arctanh(self.sigma)

    def entropy_matrix(self):
        s = self.sigma
        C, W = self.whiten, self.modes
        return C.T @ (W * (2.0 * s * np.arctanh(s))) @ W.T @ C

    def log_delta_form(self, x):
        """``-(h, log Delta h)`` for ``h`` with basis coordinates ``x``."""
        return float(x @ self.entropy_matrix() @ x)

    def generator(self):
        """Matrix of ``i log Delta`` restricted to H, in basis coordinates."""
        s = self.sigma
        ratio = np.where(s > 1e-12, 2.0 * np.arctanh(s) / np.where(s > 1e-12, s, 1.0), 2.0)
        Kw = self.symplectic @ (self.modes * ratio) @ self.modes.T
        return self.unwhiten @ Kw @ self.whiten


def symplectic_spectrum(gram, beta, gram_cond_limit=DEFAULT_TOLERANCES.gram_cond):
    """Build a :class:`SymplecticSpectrum` from ``Re`` and ``Im`` Gram matrices."""
    from .errors import IllConditioned

    gram = 0.5 * (np.asarray(gram, float) + np.asarray(gram, float).T)
    beta = 0.5 * (np.asarray(beta, float) - np.asarray(beta, float).T)
    ev, Q = np.linalg.eigh(gram)
    if ev.min() <= 0:
        raise IllConditioned("real Gram matrix is not positive definite")
    cond = float(ev.max() / ev.min())
    if cond > gram_cond_limit:
        raise IllConditioned(f"real Gram condition number {cond:.3e} exceeds {gram_cond_limit:.1e}")
    C = (Q * np.sqrt(ev)).T
    Ci = Q / np.sqrt(ev)
    A = Ci.T @ beta @ Ci
    s2, W = np.linalg.eigh(A.T @ A)
    s = np.sqrt(np.clip(s2, 0.0, None))
    cap = 1.0 - 1e-16
    saturated = int(np.sum(s >= cap))
    return SymplecticSpectrum(
        sigma=np.minimum(s, cap),
        modes=W,
        whiten=C,
        unwhiten=Ci,
        symplectic=A,
        gram_condition=cond,
        saturated=saturated,
    )


def subspace_forms(H):
    """Real Gram and symplectic matrices of a subspace's basis."""
    B, g, J = H.basis, H.ambient.g, H.ambient.J
    return B.T @ g @ B, (J @ B).T @ g @ B


# -- serialization --------------------------------------------------------


def subspace_to_dict(H):
    return {
        "n": H.ambient.n,
        "J": H.ambient.J.tolist(),
        "g": H.ambient.g.tolist(),
        "basis": H.basis.tolist(),
        "condition": H.condition,
    }


def subspace_from_dict(doc, tolerances=DEFAULT_TOLERANCES):
    amb = ComplexSpace(np.array(doc["J"], float), np.array(doc["g"], float))
    return make_standard_subspace(amb, np.array(doc["basis"], float), tolerances)


def modular_data_to_dict(md):
    return {
        "subspace": subspace_to_dict(md.subspace),
        "logEigenvalues": md.log_eigenvalues.tolist(),
        "spectralGap": md.spectral_gap,
        "factorial": md.factorial,
        "delta": md.delta.tolist(),
        "jconj": md.jconj.tolist(),
    }
