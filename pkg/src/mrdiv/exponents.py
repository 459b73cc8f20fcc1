"""Hypothesis-testing exponents under locality-constrained measurements.

Connects the divergence machinery to binary discrimination: evaluating a
fixed two-outcome test on n copies, converting a divergence value into a
bound on the trade-off between the two error kinds, and the two asymptotic
rates (the type-II rate at vanishing type-I error, and the strong-converse
rate penalty above it).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .classical import INF, ExtReal
from .closedform import _golden_max
from .errors import DomainError
from .linops import as_op, trace_product
from .states import tensor_power

SC_PROBE_ALPHAS = (1.5, 4.0, 64.0, 1024.0)
CONST_SPREAD_TOL = 1e-12
SC_GOLDEN_ITERS = 160

STEIN_FAMILIES = ("phi_vs_iso", "phi_vs_perp", "anti_vs_werner")


@dataclass
class TestReport:
    """Error pair of one binary test on n copies."""

    __test__ = False  # keep pytest from collecting this as a test class

    n: int
    type_i: float  # probability of rejecting the first hypothesis when true
    type_ii: float  # probability of accepting it under the alternative

    @property
    def type_ii_rate(self) -> float:
        """Per-copy exponent -log(type_ii)/n; +inf for an exact test."""
        if self.type_ii <= 0.0:
            return math.inf
        return -math.log(self.type_ii) / self.n

    def to_json(self) -> dict:
        r = self.type_ii_rate
        return {
            "n": self.n,
            "type_i": self.type_i,
            "type_ii": self.type_ii,
            "type_ii_rate": "inf" if math.isinf(r) else r,
        }


def evaluate_test(rho, sigma, povm, n: int = 1) -> TestReport:
    """Error probabilities of a binary POVM whose first element accepts rho.

    ``povm`` acts on the n-copy space; the single-copy states are raised to
    the n-th tensor power here (dimension cap applies).
    """
    n = int(n)
    if n < 1:
        raise DomainError(f"need n >= 1 copies, got {n}")
    if len(povm.elements) != 2:
        raise DomainError(
            f"a binary test needs exactly 2 outcomes, got {len(povm.elements)}"
        )
    rn = tensor_power(rho, n) if n > 1 else rho
    sn = tensor_power(sigma, n) if n > 1 else sigma
    t = povm.elements[0]
    if t.dim != as_op(rn).dim:
        raise DomainError(
            f"test dimension {t.dim} does not match the {n}-copy space "
            f"of dimension {as_op(rn).dim}"
        )
    a = 1.0 - trace_product(as_op(rn), t)
    b = trace_product(as_op(sn), t)
    clip = lambda v: min(max(v, 0.0), 1.0)
    return TestReport(n=n, type_i=clip(a), type_ii=clip(b))


def error_tradeoff_bound(divergence_nats, alpha: float, type_i: float) -> ExtReal:
    """Upper bound on -log(type_ii) from a divergence of order alpha > 1.

    For any test in a class M with divergence D = D_alpha^M(rho||sigma):
    -log(beta) <= D + (alpha/(alpha-1)) * log(1/(1-alpha_err)).  Tight tests
    exist only up to this line, so it converts a divergence value into an
    impossibility statement for the type-II error.
    """
    if not alpha > 1.0:
        raise DomainError(f"the trade-off bound needs alpha > 1, got {alpha}")
    if not 0.0 <= type_i < 1.0:
        raise DomainError(
            f"type-I error must lie in [0, 1), got {type_i}; at type_i = 1 "
            "every test is admissible and the bound is vacuous"
        )
    d = float(divergence_nats)
    if math.isinf(d):
        return INF
    if math.isinf(alpha):
        penalty = math.log(1.0 / (1.0 - type_i))
    else:
        penalty = (alpha / (alpha - 1.0)) * math.log(1.0 / (1.0 - type_i))
    return ExtReal(d + penalty)


@dataclass
class DivergenceCurve:
    """An order-indexed divergence alpha -> D_alpha in nats.

    ``provenance`` states what the evaluator returns: "exact" for the true
    curve, "lower"/"upper" for one-sided bounds, "heuristic" otherwise.
    The asymptotic formulas below only accept exact curves, since a bound
    plugged into a rate formula silently loses its direction.
    """

    fn: Callable[[float], float]
    provenance: str = "exact"
    label: str = ""

    def __post_init__(self):
        if self.provenance not in ("exact", "lower", "upper", "heuristic"):
            raise DomainError(f"unknown provenance {self.provenance!r}")

    @classmethod
    def constant(cls, value: float, label: str = "") -> "DivergenceCurve":
        return cls(fn=lambda _a: value, provenance="exact", label=label)


@dataclass
class ExponentResult:
    """An asymptotic rate with its validity flag.

    ``valid`` is False when the requested parameters fall outside the region
    where the closed form is known to be the true rate; the value is then
    NaN rather than an unproven number.
    """

    kind: str  # "stein" | "sc"
    value_nats: float
    valid: bool
    family: str | None = None
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "value_nats": self.value_nats if math.isfinite(self.value_nats) else None,
            "valid": self.valid,
            "family": self.family,
            "params": self.params,
        }


def _stein_preset(family: str, d: int, q: float | None):
    d = int(d)
    if d < 2:
        raise DomainError(f"need local dimension d >= 2, got {d}")
    if family == "phi_vs_perp":
        if q is not None:
            raise DomainError("phi_vs_perp takes no q")
        return math.log(d + 1.0), True, {"d": d}
    if q is None:
        raise DomainError(f"family {family!r} needs q")
    q = float(q)
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"q must lie in [0, 1], got {q}")
    if family == "phi_vs_iso":
        # rate formula proven only up to the separability threshold q = 1/d^2
        valid = q <= 1.0 / d**2 + 1e-15
        value = math.log((d + 1.0) / (q * d + 1.0)) if valid else math.nan
        return value, valid, {"d": d, "q": q}
    if family == "anti_vs_werner":
        valid = q >= (d + 1.0) / (d + 2.0) - 1e-15
        value = math.log((d + 1.0) / (d + 1.0 - 2.0 * q)) if valid else math.nan
        return value, valid, {"d": d, "q": q}
    raise DomainError(f"unknown family {family!r}; choose from {STEIN_FAMILIES}")


def stein_exponent(family: str | None = None, d: int | None = None,
                   q: float | None = None,
                   curve: DivergenceCurve | None = None) -> ExponentResult:
    """Best type-II rate with vanishing type-I error.

    Preset mode evaluates the known closed-form rates and flags validity;
    curve mode takes the exact per-copy divergence curve of the pair under
    the class in question and reads off its order-one point (the curves
    handled here are continuous at one, so this is the right limit).
    """
    if curve is not None:
        if family is not None or d is not None or q is not None:
            raise DomainError("pass either a preset family or a curve, not both")
        if curve.provenance != "exact":
            raise DomainError(
                f"a {curve.provenance!r} curve cannot attest a rate; "
                "the Stein exponent needs the exact divergence curve"
            )
        return ExponentResult(kind="stein", value_nats=float(curve.fn(1.0)),
                              valid=True, family=curve.label or None)
    if family is None or d is None:
        raise DomainError("preset mode needs family and d")
    value, valid, params = _stein_preset(family, d, q)
    return ExponentResult(kind="stein", value_nats=value, valid=valid,
                          family=family, params=params)


def strong_converse_exponent(r: float, family: str | None = None,
                             d: int | None = None, q: float | None = None,
                             curve: DivergenceCurve | None = None) -> ExponentResult:
    """Exponent of the success probability decay at rates r above the Stein rate.

    zeta(r) = sup over alpha > 1 of ((alpha-1)/alpha) * (r - D_alpha).  A
    curve that is constant in alpha (the symmetric families here) gives the
    closed form max(r - D, 0); otherwise the supremum runs over the
    substituted variable u = (alpha-1)/alpha on (0, 1).
    """
    r = float(r)
    if not r >= 0.0:
        raise DomainError(f"the rate must be nonnegative, got {r}")
    if curve is not None:
        if family is not None or d is not None or q is not None:
            raise DomainError("pass either a preset family or a curve, not both")
        if curve.provenance != "exact":
            raise DomainError(
                f"a {curve.provenance!r} curve cannot attest a rate; "
                "the strong-converse exponent needs the exact divergence curve"
            )
        fam, params = curve.label or None, {"r": r}
    else:
        if family is None or d is None:
            raise DomainError("preset mode needs family and d")
        value, valid, params = _stein_preset(family, d, q)
        params["r"] = r
        if not valid:
            return ExponentResult(kind="sc", value_nats=math.nan, valid=False,
                                  family=family, params=params)
        curve = DivergenceCurve.constant(value, label=family)
        fam = family

    probes = [float(curve.fn(a)) for a in SC_PROBE_ALPHAS]
    finite = [v for v in probes if math.isfinite(v)]
    if len(finite) == len(probes) and max(finite) - min(finite) <= CONST_SPREAD_TOL:
        val = max(r - probes[0], 0.0)
        return ExponentResult(kind="sc", value_nats=val, valid=True,
                              family=fam, params=params)

    def g(u: float) -> float:
        dval = float(curve.fn(1.0 / (1.0 - u)))
        if not math.isfinite(dval):
            return -math.inf
        return u * (r - dval)

    best = _golden_max(g, 1e-9, 1.0 - 1e-9, SC_GOLDEN_ITERS)
    return ExponentResult(kind="sc", value_nats=max(best, 0.0), valid=True,
                          family=fam, params=params)
