"""Independent numerical oracles the tests check the package against.

Nothing here reuses the package's transfer-matrix path: the monodromy
oracle integrates the ODE with an adaptive Runge-Kutta scheme, the
spectral oracle diagonalizes a finite-difference discretization, the
Fourier oracle integrates by adaptive quadrature, and the mass oracle
fits the dispersion curvature through the quasimomentum map alone.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.sparse import csc_matrix
from scipy.sparse.linalg import eigsh

from nanoband.potential import PotentialSpec
from nanoband.quasimomentum import k_eval


def ode_monodromy(q: PotentialSpec, lam: float,
                  rtol: float = 1e-12, atol: float = 1e-13):
    """(theta1, theta1', phi1, phi1') by DOP853 integration, piece by
    piece so the integrator never steps across a discontinuity."""
    y = np.array([1.0, 0.0, 0.0, 1.0])  # theta, theta', phi, phi'

    def rhs_factory(v):
        def rhs(_t, y):
            return [y[1], (v - lam) * y[0], y[3], (v - lam) * y[2]]
        return rhs

    for w, v in q.pieces:
        sol = solve_ivp(rhs_factory(v), (0.0, w), y, method="DOP853",
                        rtol=rtol, atol=atol, dense_output=False)
        y = sol.y[:, -1]
    return y[0], y[1], y[2], y[3]


def fd_periodic_eigenvalues(q: PotentialSpec, mesh: int = 4096,
                            k: int = 6) -> np.ndarray:
    """Lowest k eigenvalues of -y'' + q y on [0, 2] with periodic
    boundary conditions, second-order central differences."""
    h = 2.0 / mesh
    t = (np.arange(mesh) + 0.5) * h
    qv = np.array([q.value_at(x) for x in t])
    main = 2.0 / h ** 2 + qv
    off = -np.ones(mesh - 1) / h ** 2
    a = np.diag(main) + np.diag(off, 1) + np.diag(off, -1)
    a[0, -1] = a[-1, 0] = -1.0 / h ** 2
    a_sp = csc_matrix(a)
    sigma = float(qv.min()) - 1.0
    vals = eigsh(a_sp, k=k, sigma=sigma, which="LM",
                 return_eigenvectors=False)
    return np.sort(vals)


def quad_fourier(q: PotentialSpec, n: int):
    """(q_hat_n, q_tilde_cn) by adaptive quadrature over each piece."""
    pts = q.breakpoints
    re = im = co = 0.0
    for (w, v), t0, t1 in zip(q.pieces, pts, pts[1:]):
        re += quad(lambda t, v=v: v * math.cos(2 * math.pi * n * t),
                   t0, t1, epsabs=1e-13, epsrel=1e-13)[0]
        im += quad(lambda t, v=v: v * math.sin(2 * math.pi * n * t),
                   t0, t1, epsabs=1e-13, epsrel=1e-13)[0]
        co += quad(lambda t, v=v: v * math.cos(math.pi * n * t),
                   t0, t1, epsabs=1e-13, epsrel=1e-13)[0]
    return complex(re, im), co


def mass_from_curvature(q, cfg, bs, n: int, sign: int,
                        rel_offset: float = 1e-4) -> float:
    """Effective mass from the dispersion curvature near edge (n, sign).

    Samples lambda on the band side of the edge, computes the real
    in-band quasimomentum offset kappa = k - pi n, and extrapolates
    kappa^2 / (2 dlambda) to the edge with a linear fit in dlambda.
    """
    if n == 0:
        edge = bs.lambda0
        if sign != +1:
            raise ValueError("edge (0,-) does not exist")
    else:
        edge = bs.plus[n - 1] if sign > 0 else bs.minus[n - 1]
    scale = rel_offset * max(1.0, abs(edge))
    deltas = [scale / 4 ** i for i in range(4)]
    xs, ys = [], []
    for d in deltas:
        lam = edge + sign * d
        kappa = k_eval(bs.q, cfg, lam, bs=bs).real - math.pi * n
        xs.append(sign * d)
        ys.append(kappa * kappa / (2.0 * sign * d))
    xs = np.asarray(xs)
    ys = np.asarray(ys)
    slope, intercept = np.polyfit(xs, ys, 1)
    return float(intercept)
