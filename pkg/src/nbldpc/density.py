"""Density evolution over message dimensions for GL-labelled ensembles on the BEC.

The state is a probability vector ``p`` of length m+1 where ``p[k]`` is the
probability that a variable-to-check message has a k-dimensional support.
Check nodes sum subspaces, variable nodes intersect them; after a uniformly
random invertible label every subspace of a given dimension is equally
likely, so the dimension law is a closed recursion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .ensemble import (
    EnsembleSpec,
    UnsupportedConfiguration,
    lambda_prime_zero,
    node_perspective,
    rho_prime_one,
)
from .kernels import gaussian_binomial, kernel_table

__all__ = [
    "DeOptions",
    "DeTrace",
    "channel_distribution",
    "check_update",
    "var_update",
    "evolve",
    "bp_threshold",
    "stability_factor",
    "stability_unstable",
    "stability_bound",
    "extrinsic_fixed_point",
    "decision_distribution",
    "expected_dimension",
    "coordinate_undetermined",
    "predicted_bit_erasure",
    "check_supported",
]


@dataclass(frozen=True)
class DeOptions:
    """Stopping rule for :func:`evolve`.

    A run succeeds when the expected message dimension drops below
    ``success_threshold``. A run that stalls (max change below
    ``stall_tolerance``) or exhausts ``max_iters`` still counts as a success
    when it is within ``certify_radius`` of the zero-dimension point and the
    linearised recursion there is contracting; otherwise it fails. Set
    ``certify_radius=0`` for the plain rule.
    """

    max_iters: int = 10_000
    success_threshold: float = 1e-8
    stall_tolerance: float = 1e-12
    certify_radius: float = 1e-3

    def __post_init__(self):
        if self.max_iters < 1 or self.success_threshold <= 0 or self.stall_tolerance <= 0:
            raise ValueError("DeOptions values must be positive")
        if self.certify_radius < 0:
            raise ValueError("certify_radius must be >= 0")


@dataclass
class DeTrace:
    """Per-iteration dimension laws of one density-evolution run.

    ``p_v[l]`` is the variable-to-check law entering round ``l + 1`` (row 0
    is the channel law) and ``p_c[l]`` the check-to-variable law that round
    produces. ``status`` is one of ``converged``, ``certified``, ``stalled``
    or ``max_iters``.
    """

    ensemble: EnsembleSpec
    epsilon: float
    p_v: np.ndarray
    p_c: np.ndarray
    status: str
    final_p_c: np.ndarray = field(repr=False)

    @property
    def success(self) -> bool:
        return self.status in ("converged", "certified")

    @property
    def iterations(self) -> int:
        return len(self.p_c)

    @property
    def expected_dim(self) -> np.ndarray:
        return self.p_v @ np.arange(self.p_v.shape[1])

    @property
    def prob_nonzero(self) -> np.ndarray:
        return 1.0 - self.p_v[:, 0]

    @property
    def final(self) -> np.ndarray:
        return self.p_v[-1]


def expected_dimension(p: np.ndarray) -> float:
    return float(p @ np.arange(len(p)))


def check_supported(e: EnsembleSpec):
    if e.is_field and e.m > 3:
        raise UnsupportedConfiguration(
            f"dimension-only density evolution is exact for field labels only when m <= 3 (m = {e.m})"
        )


def channel_distribution(m: int, eps: float) -> np.ndarray:
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"erasure probability {eps} outside [0, 1]")
    return np.array([math.comb(m, i) * eps**i * (1.0 - eps) ** (m - i) for i in range(m + 1)])


def _fold(K: np.ndarray, acc: np.ndarray, p: np.ndarray) -> np.ndarray:
    # sum_ij acc[i] p[j] K[i, j, k]
    n = len(acc)
    return p @ (acc @ K.reshape(n, n * n)).reshape(n, n)


class _Stepper:
    """One DE round with kernels and degree schedules bound up front."""

    def __init__(self, m: int, lam: Mapping[int, float], rho: Mapping[int, float]):
        n = m + 1
        kt = kernel_table(m)
        self.n = n
        self.K_int = kt.intersect.reshape(n, n * n)
        self.K_sum = kt.sum.reshape(n, n * n)
        self.lam = self._schedule(lam, 1)
        self.rho = self._schedule(rho, 2)

    @staticmethod
    def _schedule(weights, offset):
        # (extra folds since previous degree, weight) in increasing degree order
        out, done = [], 0
        for d in sorted(weights):
            out.append((d - offset - done, weights[d]))
            done = d - offset
        return out

    def _average(self, K, start, p, schedule):
        n = self.n
        acc = start
        out = np.zeros(n)
        for folds, w in schedule:
            for _ in range(folds):
                acc = p @ (acc @ K).reshape(n, n)
            out += w * acc
        return out / out.sum()

    def check(self, p_v):
        return self._average(self.K_sum, p_v, p_v, self.rho)

    def var(self, p_c, channel):
        return self._average(self.K_int, channel, p_c, self.lam)


def check_update(p_v: np.ndarray, rho: Mapping[int, float]) -> np.ndarray:
    """Edge-averaged check-to-variable law from the variable-to-check law."""
    m = len(p_v) - 1
    return _Stepper(m, {2: 1.0}, rho).check(p_v)


def var_update(p_c: np.ndarray, lam: Mapping[int, float], eps: float) -> np.ndarray:
    """Edge-averaged variable-to-check law from the check-to-variable law."""
    m = len(p_c) - 1
    return _Stepper(m, lam, {2: 1.0}).var(p_c, channel_distribution(m, eps))


def stability_factor(e: EnsembleSpec, battacharyya: float) -> float:
    """lambda'(0) rho'(1) ((1+B)^m - 1) / (2^m - 1).

    On the BEC with B = eps this is the spectral radius of the linearised
    recursion at the zero-dimension point.
    """
    m = e.m
    return lambda_prime_zero(e) * rho_prime_one(e) * ((1.0 + battacharyya) ** m - 1.0) / (2.0**m - 1.0)


def stability_unstable(e: EnsembleSpec, battacharyya: float) -> bool:
    if not 0.0 <= battacharyya <= 1.0:
        raise ValueError(f"Battacharyya constant {battacharyya} outside [0, 1]")
    return stability_factor(e, battacharyya) > 1.0


def stability_bound(e: EnsembleSpec) -> float:
    """Largest BEC erasure probability allowed by the stability condition."""
    c = lambda_prime_zero(e) * rho_prime_one(e)
    if c <= 0:
        return 1.0
    m = e.m
    # (1 + eps)^m - 1 = (2^m - 1) / c, solved in closed form
    root = (1.0 + (2.0**m - 1.0) / c) ** (1.0 / m) - 1.0
    return min(root, 1.0)


def evolve(e: EnsembleSpec, eps: float, opts: DeOptions = DeOptions()) -> DeTrace:
    check_supported(e)
    m = e.m
    dims = np.arange(m + 1)
    p = channel_distribution(m, eps)
    linear_rate = stability_factor(e, eps)
    step = _Stepper(m, e.lam, e.rho)
    p_v = [p]
    p_c = []
    status = "max_iters"
    if p @ dims < opts.success_threshold:
        status = "converged"
    else:
        for _ in range(opts.max_iters):
            pc = step.check(p)
            nxt = step.var(pc, p_v[0])
            p_c.append(pc)
            p_v.append(nxt)
            if nxt @ dims < opts.success_threshold:
                status = "converged"
                break
            if np.max(np.abs(nxt - p)) < opts.stall_tolerance:
                status = "stalled"
                p = nxt
                break
            p = nxt
        if status != "converged":
            E = p @ dims
            decreasing = len(p_v) < 2 or p_v[-1] @ dims <= p_v[-2] @ dims
            if E < opts.certify_radius and linear_rate < 1.0 and decreasing:
                status = "certified"
    final_pc = step.check(p_v[-1])
    return DeTrace(
        ensemble=e,
        epsilon=eps,
        p_v=np.array(p_v),
        p_c=np.array(p_c).reshape(-1, m + 1),
        status=status,
        final_p_c=final_pc,
    )


def bp_threshold(e: EnsembleSpec, opts: DeOptions = DeOptions(), steps: int = 32) -> float:
    """Bisection for the largest erasure probability at which DE succeeds."""
    check_supported(e)
    lo, hi = 0.0, 1.0
    if evolve(e, hi, opts).success:
        return 1.0
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if evolve(e, mid, opts).success:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _point_mass(m: int, k: int) -> np.ndarray:
    out = np.zeros(m + 1)
    out[k] = 1.0
    return out


def _node_fold(e: EnsembleSpec, start: np.ndarray, p_c: np.ndarray) -> np.ndarray:
    # node-perspective average of `start` intersected with d check messages
    K = kernel_table(e.m).intersect
    out = np.zeros(e.m + 1)
    for d, w in node_perspective(e.lam).items():
        acc = start
        for _ in range(d):
            acc = _fold(K, acc, p_c)
        out += w * acc
    return out / out.sum()


def extrinsic_fixed_point(
    e: EnsembleSpec, eps: float, opts: DeOptions = DeOptions(), trace: DeTrace | None = None
) -> np.ndarray:
    """Dimension law of a random symbol's decision from its check messages only."""
    tr = trace if trace is not None else evolve(e, eps, opts)
    if tr.success:
        return _point_mass(e.m, 0)
    return _node_fold(e, _point_mass(e.m, e.m), tr.final_p_c)


def decision_distribution(e: EnsembleSpec, p_c: np.ndarray, eps: float) -> np.ndarray:
    """Dimension law of a symbol's full decision (channel plus all checks)."""
    return _node_fold(e, channel_distribution(e.m, eps), p_c)


def coordinate_undetermined(c: int, t: int) -> float:
    """P(a uniform t-dim subspace of a c-dim coordinate space is nonzero on a
    given coordinate of that space)."""
    if t == 0 or c == 0:
        return 0.0
    return 1.0 - gaussian_binomial(c - 1, t) / gaussian_binomial(c, t)


def predicted_bit_erasure(e: EnsembleSpec, p_c: np.ndarray, eps: float) -> float:
    """Fraction of code bits left undetermined by the full symbol decisions.

    The decision is the channel's coordinate subspace (erased bits) meet the
    intersection of the check messages, which is uniform given its dimension.
    """
    m = e.m
    K = kernel_table(m).intersect
    checks_only = _node_fold(e, _point_mass(m, m), p_c)
    chan = channel_distribution(m, eps)
    total = 0.0
    for c in range(1, m + 1):
        for k in range(m + 1):
            w = chan[c] * checks_only[k]
            if w == 0.0:
                continue
            for t in range(1, min(c, k) + 1):
                total += w * K[c, k, t] * c * coordinate_undetermined(c, t)
    return total / m
