"""The L1,q difference formula on the geometric mesh.

The mesh 0 = t_0 < t_1 < ... < t_N = b with t_k = b q^(N-k) lives on the
time scale; the discrete fractional operator is

    D^alpha x^n  ~=  (1/Gamma_q(1-alpha)) * sum_k b_k (x^k - x^{k-1}),

with weights b_k = (1/dt_k) int_{t_{k-1}}^{t_k} (t_n - qs)^(-alpha) d_q s.
For k >= 2 the weight collapses to the closed form (t_n - q t_k)^(-alpha)
because t_{k-1} = q t_k; the first subinterval starts at 0, so b_1 keeps
its Jackson series (one shifted-factorial evaluation per term).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._kernels import b1_weight as _b1_weight
from .errors import MonotonicityError
from .qcore import (
    DEFAULT_CONTROL,
    QScale,
    SeriesControl,
    q_gamma,
    shifted_factorial_real,
)


@dataclass(frozen=True)
class QMesh:
    """Geometric partition of [0, b]; immutable after construction."""

    scale: QScale
    N: int
    nodes: np.ndarray   # t_0 .. t_N, with t_0 = 0 exactly
    steps: np.ndarray   # dt_1 .. dt_N

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.steps.setflags(write=False)


@dataclass(frozen=True)
class L1qCoefficients:
    """Difference weights b_1 .. b_n targeting node index n."""

    n: int
    alpha: float
    weights: np.ndarray  # weights[k-1] = b_k

    def __post_init__(self):
        self.weights.setflags(write=False)


@dataclass(frozen=True)
class TruncationBound:
    """Worst-case remainder of the difference formula at node n."""

    n: int
    value: float
    m2: float


def build_mesh(scale: QScale, N: int) -> QMesh:
    """Mesh t_0 = 0, t_k = b q^(N-k) for k = 1..N."""
    if N < 1:
        raise ValueError(f"mesh needs N >= 1, got {N}")
    k = np.arange(1, N + 1)
    nodes = np.concatenate(([0.0], scale.b * scale.q ** (N - k).astype(float)))
    return QMesh(scale=scale, N=N, nodes=nodes, steps=np.diff(nodes))


@lru_cache(maxsize=4096)
def _weights_cached(q: float, b: float, N: int, n: int, alpha: float,
                    rel_tol: float, max_terms: int) -> tuple:
    t = build_mesh(QScale(q=q, b=b), N).nodes
    ctl = SeriesControl(rel_tol=rel_tol, max_terms=max_terms)
    w = np.empty(n)
    w[0] = _b1_weight(t[n], t[1], alpha, q, rel_tol, max_terms)
    for j in range(2, n + 1):
        w[j - 1] = shifted_factorial_real(t[n], q * t[j], -alpha, q, ctl)
    return tuple(w)


def coefficients(mesh: QMesh, n: int, alpha: float,
                 ctl: SeriesControl = DEFAULT_CONTROL) -> L1qCoefficients:
    """Weights b_1 .. b_n for target node n; cached per (mesh, n, alpha).

    b_k for k >= 2 uses the closed form (t_n - q t_k)^(-alpha); b_1 is
    the Jackson series.  The strict chain t_n^(-alpha) < b_1 < ... < b_n
    is asserted after computation as a corruption detector.
    """
    if not 1 <= n <= mesh.N:
        raise ValueError(f"target index must satisfy 1 <= n <= {mesh.N}, got {n}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"fractional order must be in (0, 1), got {alpha}")
    scale = mesh.scale
    w = np.array(_weights_cached(scale.q, scale.b, mesh.N, n, alpha,
                                 ctl.rel_tol, ctl.max_terms))
    floor = mesh.nodes[n] ** (-alpha)
    if w[0] <= floor or np.any(np.diff(w) <= 0.0):
        raise MonotonicityError(
            f"weight chain t_n^-alpha < b_1 < ... < b_n violated at n={n} "
            f"(check the truncation tolerance)")
    return L1qCoefficients(n=n, alpha=alpha, weights=w)


def l1q_apply(samples: np.ndarray, coeffs: L1qCoefficients, q: float,
              alpha: float, ctl: SeriesControl = DEFAULT_CONTROL):
    """Apply the difference formula to samples x^0 .. x^n (componentwise).

    Returns (1/Gamma_q(1-alpha)) * sum_k b_k (x^k - x^{k-1}).
    """
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] != coeffs.n + 1:
        raise ValueError(
            f"need {coeffs.n + 1} samples x^0..x^n, got {samples.shape[0]}")
    diffs = np.diff(samples, axis=0)
    out = np.tensordot(coeffs.weights, diffs, axes=(0, 0)) / q_gamma(1.0 - alpha, q, ctl)
    return float(out) if np.ndim(out) == 0 else out


def rearranged_step_weights(coeffs: L1qCoefficients):
    """Weights of the solved-for-x^n form of the difference equation.

    b_n x^n = b_1 x^0 + sum_k (b_{k+1} - b_k) x^k + Gamma_q(1-alpha) f^n
    maps to (lead, history, init) = (b_n, diffs of consecutive weights, b_1).
    """
    w = coeffs.weights
    return w[-1], np.diff(w), w[0]


def truncation_bound(mesh: QMesh, n: int, alpha: float, m2: float,
                     ctl: SeriesControl = DEFAULT_CONTROL) -> TruncationBound:
    """Remainder bound for the difference formula at node n.

    |R^n| <= m2 * t_n^(-alpha) * dt_n^2 /
             (4 Gamma_q(1-alpha) (1 - q^2) (q^alpha - q)),
    where m2 bounds |D_q^2 x| on [0, t_n].
    """
    if m2 < 0.0:
        raise ValueError(f"m2 must be >= 0, got {m2}")
    if not 1 <= n <= mesh.N:
        raise ValueError(f"target index must satisfy 1 <= n <= {mesh.N}, got {n}")
    q = mesh.scale.q
    t_n = mesh.nodes[n]
    dt_n = mesh.steps[n - 1]
    value = (m2 * t_n ** (-alpha) * dt_n ** 2
             / (4.0 * q_gamma(1.0 - alpha, q, ctl) * (1.0 - q * q) * (q ** alpha - q)))
    return TruncationBound(n=n, value=value, m2=m2)
