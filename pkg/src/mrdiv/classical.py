"""Classical Renyi divergences on finite measures.

Every measured quantity in the package bottoms out here, so the edge cases
(orthogonal supports, absolute-continuity failures, the alpha = 1 and
alpha = infinity branches) follow the exact conventions rather than numerical
limits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping

import numpy as np

from .errors import DomainError, StructuralError, ValidationError

ZERO_FLOOR = 1e-15  # weights at or below this count as exact zero
NORM_TOL = 1e-10


@dataclass(frozen=True)
class ExtReal:
    """A real value in nats, or +infinity."""

    value: float

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.value)

    def __float__(self) -> float:
        return float(self.value)

    def __repr__(self) -> str:
        return "ExtReal(+inf)" if self.is_inf else f"ExtReal({self.value!r})"


INF = ExtReal(math.inf)


class FiniteMeasure:
    """Nonnegative weights on a finite label set."""

    __slots__ = ("weights",)

    def __init__(self, weights: Mapping[Hashable, float] | Iterable[tuple]):
        if not isinstance(weights, Mapping):
            weights = dict(weights)
        w = {}
        for label, wv in weights.items():
            wv = float(wv)
            if wv < 0.0:
                raise ValidationError(f"negative weight {wv!r} at label {label!r}")
            w[label] = wv
        self.weights = w

    @classmethod
    def from_array(cls, arr, labels=None) -> "FiniteMeasure":
        arr = np.asarray(arr, dtype=float).ravel()
        if labels is None:
            labels = list(range(arr.size))
        return cls(dict(zip(labels, arr.tolist())))

    @property
    def total(self) -> float:
        return float(sum(self.weights.values()))

    @property
    def normalized(self) -> bool:
        return abs(self.total - 1.0) <= NORM_TOL

    def support(self) -> set:
        return {z for z, w in self.weights.items() if w > ZERO_FLOOR}

    def coarse_grain(self, f: Callable[[Hashable], Hashable]) -> "FiniteMeasure":
        """Push forward along a label map (merging labels sums their weights)."""
        out: dict = {}
        for z, w in self.weights.items():
            key = f(z)
            out[key] = out.get(key, 0.0) + w
        return FiniteMeasure(out)

    def __len__(self) -> int:
        return len(self.weights)

    def __repr__(self) -> str:
        return f"FiniteMeasure({self.weights!r})"


def product_measure(mu: FiniteMeasure, nu: FiniteMeasure) -> FiniteMeasure:
    """Product measure on the label product, labels as (x, y) tuples."""
    out = {}
    for x, wx in mu.weights.items():
        for y, wy in nu.weights.items():
            out[(x, y)] = wx * wy
    return FiniteMeasure(out)


def tv_distance(mu: FiniteMeasure, nu: FiniteMeasure) -> float:
    labels = set(mu.weights) | set(nu.weights)
    return 0.5 * sum(abs(mu.weights.get(z, 0.0) - nu.weights.get(z, 0.0)) for z in labels)


def _check_pair(mu: FiniteMeasure, nu: FiniteMeasure) -> list:
    if set(mu.weights) != set(nu.weights):
        raise StructuralError("measures must share one label alphabet")
    return list(mu.weights)


def q_alpha(mu: FiniteMeasure, nu: FiniteMeasure, alpha: float) -> ExtReal:
    """Q_alpha = sum_z mu(z)^alpha nu(z)^(1-alpha), with the conventions:
    mu(z) = 0 contributes 0 for alpha in (0,1); for alpha > 1 a label with
    mu(z) > 0 and nu(z) = 0 makes the sum +infinity."""
    alpha = float(alpha)
    if not (0.0 < alpha and alpha != 1.0) or math.isinf(alpha):
        raise DomainError(f"q_alpha needs alpha in (0,1) or (1,oo), got {alpha}")
    labels = _check_pair(mu, nu)
    total = 0.0
    for z in labels:
        m = mu.weights[z]
        n = nu.weights[z]
        if m <= ZERO_FLOOR:
            continue
        if n <= ZERO_FLOOR:
            if alpha > 1.0:
                return INF
            continue  # alpha < 1: nu-exponent positive, the term is 0
        total += m**alpha * n ** (1.0 - alpha)
    return ExtReal(total)


def renyi(mu: FiniteMeasure, nu: FiniteMeasure, alpha: float) -> ExtReal:
    """Renyi divergence of order alpha in nats.

    alpha = 1 is the Kullback-Leibler divergence (0 log 0 = 0); alpha = inf is
    the max-divergence sup_z log(mu(z)/nu(z)) over mu(z) > 0.  Infinite cases:
    alpha in (0,1) with orthogonal measures, alpha >= 1 when mu is not
    absolutely continuous w.r.t. nu.
    """
    if not mu.normalized or not nu.normalized:
        raise DomainError(
            f"renyi needs normalized inputs (totals {mu.total!r}, {nu.total!r})"
        )
    alpha = float(alpha)
    if alpha <= 0.0:
        raise DomainError(f"alpha must be positive, got {alpha}")

    if math.isinf(alpha):
        labels = _check_pair(mu, nu)
        best = 0.0
        any_support = False
        for z in labels:
            m = mu.weights[z]
            if m <= ZERO_FLOOR:
                continue
            n = nu.weights[z]
            if n <= ZERO_FLOOR:
                return INF
            ratio = math.log(m / n)
            best = ratio if not any_support else max(best, ratio)
            any_support = True
        return ExtReal(best)

    if alpha == 1.0:
        labels = _check_pair(mu, nu)
        total = 0.0
        for z in labels:
            m = mu.weights[z]
            if m <= ZERO_FLOOR:
                continue
            n = nu.weights[z]
            if n <= ZERO_FLOOR:
                return INF
            total += m * math.log(m / n)
        return ExtReal(total)

    q = q_alpha(mu, nu, alpha)
    if q.is_inf:
        return INF
    if q.value <= 0.0:
        # orthogonal supports; only reachable for alpha < 1
        return INF
    return ExtReal(math.log(q.value) / (alpha - 1.0))
