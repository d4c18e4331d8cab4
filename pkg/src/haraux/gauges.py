"""Residual gauges for composite inclusions 0 in Ax + Bx and for
primal-dual Kuhn-Tucker systems, built from warped resolvents.

Each gauge lower-bounds the Haraux-type membership function and vanishes
exactly on the solution set, so it can serve as a computable optimality
residual."""

from dataclasses import dataclass

import numpy as np

from .core import DualPair, as_vector, pairing
from .functions import SeparableFunction
from .operators import (
    AffineOp,
    GradientOp,
    MonotoneOperator,
    SkewPDOp,
    SubdifferentialOp,
    UniformModulus,
)
from .solvers import (
    DEFAULT_CONFIG,
    ResolventProblem,
    bregman_prox,
    resolvent_residual,
    solve_resolvent,
)
from .bounds import BoundResult, _finalize


@dataclass
class InclusionInstance:
    """Data for gauging membership of x in zer(A + B)."""

    A: MonotoneOperator
    B: MonotoneOperator
    W: MonotoneOperator
    gamma: float
    modulus: UniformModulus = None
    f: SeparableFunction = None

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        dims = {self.A.dim_in, self.B.dim_in, self.W.dim_in}
        if len(dims) != 1:
            raise ValueError("A, B and W must act on the same space")


@dataclass
class KTInstance:
    """Primal-dual data: C on the primal space, D^{-1} on the dual space,
    coupling matrix L, and single-valued kernels for each block."""

    C: MonotoneOperator
    D_inv: MonotoneOperator
    L: np.ndarray
    gamma: float
    W_X: MonotoneOperator
    W_Ystar: MonotoneOperator
    f: SeparableFunction = None
    g_star: SeparableFunction = None

    def __post_init__(self):
        self.L = np.atleast_2d(np.asarray(self.L, dtype=float))
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        m, n = self.L.shape
        if self.C.dim_in != n or self.W_X.dim_in != n:
            raise ValueError("primal block dimensions do not match L")
        if self.D_inv.dim_in != m or self.W_Ystar.dim_in != m:
            raise ValueError("dual block dimensions do not match L")


def primal_primal_bound(inst, x, y, cfg=DEFAULT_CONFIG):
    """Lower bound on H_A(x, -B(y)), the two-argument membership function
    for the direct-sum operator; the diagonal y = x gives the gauge."""
    x = as_vector(x)
    y = as_vector(y)
    W, A, B, gamma = inst.W, inst.A, inst.B, inst.gamma
    u = -B.apply(y)
    rhs = W.apply(x) + gamma * u
    z = solve_resolvent(ResolventProblem(W, A, gamma, rhs), cfg)
    value = pairing(x - z, W.apply(x) - W.apply(z)) / gamma
    diag = {"residual": resolvent_residual(W, A, gamma, z, rhs)}
    if inst.modulus is not None:
        diag["modulus_value"] = inst.modulus(float(np.linalg.norm(x - z))) / gamma
    if inst.f is not None:
        diag["bregman_value"] = (
            inst.f.bregman(x, z) + inst.f.bregman(z, x)
        ) / gamma
    return _finalize(value, z, "theta", gamma, diag)


def theta_bound(inst, x, cfg=DEFAULT_CONFIG):
    """Gauge of the membership of x in zer(A + B): the pairing bound at
    u* = -B(x), with z the warped resolvent of x."""
    return primal_primal_bound(inst, x, x, cfg)


def kt_gauge_bound(inst, x, y_star, cfg=DEFAULT_CONFIG):
    """Sum of the two per-block pairing bounds, divided by gamma; zero
    exactly on the Kuhn-Tucker set."""
    x = as_vector(x)
    y_star = as_vector(y_star)
    gamma, L = inst.gamma, inst.L

    rhs_x = inst.W_X.apply(x) - gamma * (L.T @ y_star)
    zx = solve_resolvent(ResolventProblem(inst.W_X, inst.C, gamma, rhs_x), cfg)
    comp_x = pairing(x - zx, inst.W_X.apply(x) - inst.W_X.apply(zx)) / gamma

    rhs_y = inst.W_Ystar.apply(y_star) + gamma * (L @ x)
    zy = solve_resolvent(
        ResolventProblem(inst.W_Ystar, inst.D_inv, gamma, rhs_y), cfg
    )
    comp_y = pairing(
        y_star - zy, inst.W_Ystar.apply(y_star) - inst.W_Ystar.apply(zy)
    ) / gamma

    diag = {
        "component_primal": max(comp_x, 0.0),
        "component_dual": max(comp_y, 0.0),
        "residual": max(
            resolvent_residual(inst.W_X, inst.C, gamma, zx, rhs_x),
            resolvent_residual(inst.W_Ystar, inst.D_inv, gamma, zy, rhs_y),
        ),
    }
    return _finalize(
        comp_x + comp_y, np.concatenate([zx, zy]), "kt_gauge", gamma, diag
    )


def fr_gauge_bound(f, g_star, phi, psi_star, L, gamma, x, y_star,
                   cfg=DEFAULT_CONFIG):
    """Fenchel-Rockafellar gauge: symmetrized-Bregman sum over the primal
    block (kernel f, function phi) and the dual block (kernel g*,
    function psi*), divided by gamma."""
    L = np.atleast_2d(np.asarray(L, dtype=float))
    x = as_vector(x)
    y_star = as_vector(y_star)
    if gamma <= 0:
        raise ValueError("gamma must be positive")

    sx = f.gradient(x) - gamma * (L.T @ y_star)
    zx = bregman_prox(f, phi, gamma, sx, cfg)
    sy = g_star.gradient(y_star) + gamma * (L @ x)
    zy = bregman_prox(g_star, psi_star, gamma, sy, cfg)

    comp_x = (f.bregman(x, zx) + f.bregman(zx, x)) / gamma
    comp_y = (g_star.bregman(y_star, zy) + g_star.bregman(zy, y_star)) / gamma
    from .bounds import _near_boundary

    diag = {
        "component_primal": max(comp_x, 0.0),
        "component_dual": max(comp_y, 0.0),
        "near_boundary": _near_boundary(f, zx) or _near_boundary(g_star, zy),
    }
    return _finalize(
        comp_x + comp_y, np.concatenate([zx, zy]), "fr_gauge", gamma, diag
    )


def stacked_inclusion(inst):
    """The product-space inclusion equivalent to a KT instance, for
    consistency checks: A = blockdiag(C, D^{-1}), B = the skew coupling,
    W = blockdiag of the kernels. Blocks must be affine or gradients of
    separable functions."""

    def _stack(op1, op2):
        if isinstance(op1, AffineOp) and isinstance(op2, AffineOp):
            n, m = op1.dim_in, op2.dim_in
            M = np.zeros((n + m, n + m))
            M[:n, :n] = op1.M
            M[n:, n:] = op2.M
            return AffineOp(M, np.concatenate([op1.b, op2.b]), check=False)
        if isinstance(op1, GradientOp) and isinstance(op2, GradientOp):
            parts = list(op1.f.parts) + list(op2.f.parts)
            cls = SubdifferentialOp if isinstance(op1, SubdifferentialOp) else GradientOp
            return cls(SeparableFunction(parts))
        raise TypeError("can only stack affine or separable-gradient blocks")

    return InclusionInstance(
        A=_stack(inst.C, inst.D_inv),
        B=SkewPDOp(inst.L),
        W=_stack(inst.W_X, inst.W_Ystar),
        gamma=inst.gamma,
    )


def linear_quadratic_kt_instance(x_bar, y_bar, L, gamma=1.0):
    """Build a primal-dual instance whose Kuhn-Tucker point is known by
    construction: C = Id - c0 and D^{-1} = Id - d0 with offsets back-solved
    from the prescribed solution (x_bar, y_bar)."""
    x_bar = as_vector(x_bar)
    y_bar = as_vector(y_bar)
    L = np.atleast_2d(np.asarray(L, dtype=float))
    m, n = L.shape
    c0 = x_bar + L.T @ y_bar
    d0 = y_bar - L @ x_bar
    return KTInstance(
        C=AffineOp(np.eye(n), -c0),
        D_inv=AffineOp(np.eye(m), -d0),
        L=L,
        gamma=gamma,
        W_X=AffineOp(np.eye(n)),
        W_Ystar=AffineOp(np.eye(m)),
    )
