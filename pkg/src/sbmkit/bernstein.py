"""Laplace exponents of subordinators: catalog, calculus, hypothesis checks.

The toolkit works with a small catalog of closed-form complete Bernstein
functions ``phi`` (Laplace exponents of driftless subordinators).  This
module evaluates ``phi`` and its first two derivatives exactly, derives the
radial kernel proxies and the renewal-function surrogate used by the bound
evaluators, computes the ladder-height exponent by quadrature, and fits the
scaling indices that the two-sided kernel bounds require.

All comparability constants are normalized to 1.  Empirical constants are
measured by callers, never assumed here.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, asdict

import numpy as np
from scipy import integrate

__all__ = [
    "LaplaceExponentSpec",
    "LevyDensity",
    "QuadratureConfig",
    "QuadratureError",
    "ScalingReport",
    "SignCheckReport",
    "check_A3",
    "check_A4",
    "check_A5",
    "check_bernstein",
    "eta1",
    "eta2",
    "eval_phi",
    "eval_phi_prime",
    "eval_phi_second",
    "exact_jump_density_gamma",
    "green_proxy",
    "jump_proxy",
    "ladder_exponent_kappa",
    "parse_family",
    "renewal_proxy_V",
]

MAX_ITERATED_DEPTH = 4

STABLE = "stable"
GEOMETRIC_STABLE = "geom"
ITERATED_GEOMETRIC_STABLE = "itgeom"
RELATIVISTIC_GEOMETRIC_STABLE = "relgeom"
GAMMA = "gamma"

_FAMILIES = (
    STABLE,
    GEOMETRIC_STABLE,
    ITERATED_GEOMETRIC_STABLE,
    RELATIVISTIC_GEOMETRIC_STABLE,
    GAMMA,
)

#: Formula variants for the relativistic geometric stable family.  The
#: "literal" variant keeps the inner exponent 2/alpha as published even
#: though check_bernstein rejects it for small mass; "standard" uses the
#: usual relativistic exponent (lam + m^{2/alpha})^{alpha/2} - m, which is
#: completely monotone-compatible and is the only variant that can be
#: sampled as a subordinator.
RELATIVISTIC_VARIANTS = ("literal", "standard")


@dataclass(frozen=True)
class LaplaceExponentSpec:
    """A closed-form Laplace exponent family with parameters and zero drift.

    Families
    --------
    stable            phi(lam) = lam^(alpha/2),                 0 < alpha < 2
    geom              phi(lam) = log(1 + lam^(alpha/2)),        0 < alpha <= 2
    itgeom            depth-fold composition of geom(alpha),    depth in 1..4
    relgeom           log(1 + (lam + c)^p - m), see RELATIVISTIC_VARIANTS
    gamma             phi(lam) = log(1 + lam)   (alias geom(2))
    """

    family: str
    alpha: float = 2.0
    depth: int = 1
    mass: float = 0.0
    variant: str = "literal"

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == STABLE and not 0.0 < self.alpha < 2.0:
            raise ValueError("stable family requires 0 < alpha < 2")
        if self.family in (GEOMETRIC_STABLE, ITERATED_GEOMETRIC_STABLE):
            if not 0.0 < self.alpha <= 2.0:
                raise ValueError("geometric families require 0 < alpha <= 2")
        if self.family == ITERATED_GEOMETRIC_STABLE:
            if not 1 <= self.depth <= MAX_ITERATED_DEPTH:
                raise ValueError(
                    f"iterated depth must be in 1..{MAX_ITERATED_DEPTH}"
                )
        if self.family == RELATIVISTIC_GEOMETRIC_STABLE:
            if not 0.0 < self.alpha < 2.0:
                raise ValueError("relativistic family requires 0 < alpha < 2")
            if self.mass <= 0.0:
                raise ValueError("relativistic family requires mass > 0")
            if self.variant not in RELATIVISTIC_VARIANTS:
                raise ValueError(f"unknown relativistic variant {self.variant!r}")

    # -- constructors -----------------------------------------------------

    @classmethod
    def stable(cls, alpha):
        return cls(STABLE, alpha=float(alpha))

    @classmethod
    def geometric_stable(cls, alpha):
        return cls(GEOMETRIC_STABLE, alpha=float(alpha))

    @classmethod
    def iterated_geometric_stable(cls, alpha, depth):
        return cls(ITERATED_GEOMETRIC_STABLE, alpha=float(alpha), depth=int(depth))

    @classmethod
    def relativistic_geometric_stable(cls, alpha, mass, variant="literal"):
        return cls(
            RELATIVISTIC_GEOMETRIC_STABLE,
            alpha=float(alpha),
            mass=float(mass),
            variant=variant,
        )

    @classmethod
    def gamma_subordinator(cls):
        return cls(GAMMA, alpha=2.0)

    def id_string(self) -> str:
        """Canonical CLI/report identifier, inverse of :func:`parse_family`."""
        if self.family == STABLE:
            return f"stable{{{self.alpha:g}}}"
        if self.family == GEOMETRIC_STABLE:
            return f"geom{{{self.alpha:g}}}"
        if self.family == ITERATED_GEOMETRIC_STABLE:
            return f"itgeom{{{self.alpha:g},{self.depth}}}"
        if self.family == RELATIVISTIC_GEOMETRIC_STABLE:
            return f"relgeom{{{self.alpha:g},{self.mass:g},{self.variant}}}"
        return "gamma"


def parse_family(text: str) -> LaplaceExponentSpec:
    """Parse a family literal such as ``stable{1}`` or ``relgeom{alpha=1,m=1}``.

    Accepted ids: ``stable{alpha}``, ``geom{alpha}``, ``itgeom{alpha,n}``,
    ``relgeom{alpha,m[,variant]}``, ``gamma``.  Parameters may be positional
    or ``key=value``.
    """
    text = text.strip()
    if text == GAMMA:
        return LaplaceExponentSpec.gamma_subordinator()
    if "{" not in text or not text.endswith("}"):
        raise ValueError(f"malformed family literal {text!r}")
    head, body = text[:-1].split("{", 1)
    head = head.strip()
    tokens = [t.strip() for t in body.split(",") if t.strip()]
    positional, named = [], {}
    for tok in tokens:
        if "=" in tok:
            key, val = tok.split("=", 1)
            named[key.strip()] = val.strip()
        else:
            positional.append(tok)

    def _num(value, token):
        try:
            return float(value)
        except ValueError:
            raise ValueError(f"malformed parameter {token!r} in {text!r}") from None

    def _take(name, aliases, idx, default=None):
        for key in (name,) + aliases:
            if key in named:
                return named.pop(key)
        if idx < len(positional):
            return positional[idx]
        if default is not None:
            return default
        raise ValueError(f"family {head!r} is missing parameter {name!r}")

    if head == STABLE:
        spec = LaplaceExponentSpec.stable(_num(_take("alpha", (), 0), text))
    elif head == GEOMETRIC_STABLE:
        spec = LaplaceExponentSpec.geometric_stable(_num(_take("alpha", (), 0), text))
    elif head == ITERATED_GEOMETRIC_STABLE:
        alpha = _num(_take("alpha", (), 0), text)
        depth = _take("n", ("depth",), 1)
        spec = LaplaceExponentSpec.iterated_geometric_stable(alpha, int(float(depth)))
    elif head == RELATIVISTIC_GEOMETRIC_STABLE:
        alpha = _num(_take("alpha", (), 0), text)
        mass = _num(_take("m", ("mass",), 1), text)
        variant = _take("variant", (), 2, default="literal")
        spec = LaplaceExponentSpec.relativistic_geometric_stable(alpha, mass, variant)
    else:
        raise ValueError(f"unknown family id {head!r}")
    if named:
        raise ValueError(f"unknown parameter {sorted(named)[0]!r} in {text!r}")
    return spec


# -- evaluation ------------------------------------------------------------


def _validated_positive(values, name):
    arr = np.asarray(values, dtype=float)
    if arr.size and (np.any(~np.isfinite(arr)) or np.any(arr <= 0.0)):
        raise ValueError(f"{name} must be positive and finite")
    return arr


def _maybe_scalar(out, template):
    if np.isscalar(template) or np.asarray(template).ndim == 0:
        return float(out)
    return out


def _relativistic_params(spec):
    # inner function (lam + c)^p - mass; the two variants differ in (c, p)
    if spec.variant == "standard":
        return spec.mass ** (2.0 / spec.alpha), spec.alpha / 2.0
    return spec.mass ** (spec.alpha / 2.0), 2.0 / spec.alpha


def _geom_phi(lam, a):
    return np.log1p(lam**a)


def _geom_phi_prime(lam, a):
    return a * lam ** (a - 1.0) / (1.0 + lam**a)


def _geom_phi_second(lam, a):
    u = lam**a
    fp = a * lam ** (a - 1.0)
    fpp = a * (a - 1.0) * lam ** (a - 2.0)
    return (fpp * (1.0 + u) - fp * fp) / (1.0 + u) ** 2


def _phi(spec, lam):
    if spec.family == STABLE:
        return lam ** (spec.alpha / 2.0)
    if spec.family == GAMMA:
        return np.log1p(lam)
    if spec.family == GEOMETRIC_STABLE:
        return _geom_phi(lam, spec.alpha / 2.0)
    if spec.family == ITERATED_GEOMETRIC_STABLE:
        val = lam
        for _ in range(spec.depth):
            val = _geom_phi(val, spec.alpha / 2.0)
        return val
    c, p = _relativistic_params(spec)
    return np.log1p((lam + c) ** p - spec.mass)


def _phi_prime(spec, lam):
    if spec.family == STABLE:
        a = spec.alpha / 2.0
        return a * lam ** (a - 1.0)
    if spec.family == GAMMA:
        return 1.0 / (1.0 + lam)
    if spec.family == GEOMETRIC_STABLE:
        return _geom_phi_prime(lam, spec.alpha / 2.0)
    if spec.family == ITERATED_GEOMETRIC_STABLE:
        a = spec.alpha / 2.0
        val, der = lam, np.ones_like(lam)
        for _ in range(spec.depth):
            der = _geom_phi_prime(val, a) * der
            val = _geom_phi(val, a)
        return der
    c, p = _relativistic_params(spec)
    f = (lam + c) ** p - spec.mass
    return p * (lam + c) ** (p - 1.0) / (1.0 + f)


def _phi_second(spec, lam):
    if spec.family == STABLE:
        a = spec.alpha / 2.0
        return a * (a - 1.0) * lam ** (a - 2.0)
    if spec.family == GAMMA:
        return -1.0 / (1.0 + lam) ** 2
    if spec.family == GEOMETRIC_STABLE:
        return _geom_phi_second(lam, spec.alpha / 2.0)
    if spec.family == ITERATED_GEOMETRIC_STABLE:
        a = spec.alpha / 2.0
        val = lam
        der = np.ones_like(lam)
        sec = np.zeros_like(lam)
        for _ in range(spec.depth):
            new_sec = _geom_phi_second(val, a) * der**2 + _geom_phi_prime(val, a) * sec
            der = _geom_phi_prime(val, a) * der
            val = _geom_phi(val, a)
            sec = new_sec
        return sec
    c, p = _relativistic_params(spec)
    f = (lam + c) ** p - spec.mass
    fp = p * (lam + c) ** (p - 1.0)
    fpp = p * (p - 1.0) * (lam + c) ** (p - 2.0)
    return (fpp * (1.0 + f) - fp * fp) / (1.0 + f) ** 2


def eval_phi(spec: LaplaceExponentSpec, lam):
    """Evaluate phi(lam).  Accepts scalars or arrays of positive reals."""
    arr = _validated_positive(lam, "lam")
    return _maybe_scalar(_phi(spec, arr), lam)


def eval_phi_prime(spec: LaplaceExponentSpec, lam):
    """Exact first derivative phi'(lam); positive for every valid family."""
    arr = _validated_positive(lam, "lam")
    return _maybe_scalar(_phi_prime(spec, arr), lam)


def eval_phi_second(spec: LaplaceExponentSpec, lam):
    """Exact second derivative phi''(lam).

    Negative everywhere for every complete Bernstein member of the catalog;
    the literal relativistic variant can violate this, which is exactly what
    :func:`check_bernstein` is for.
    """
    arr = _validated_positive(lam, "lam")
    return _maybe_scalar(_phi_second(spec, arr), lam)


def renewal_proxy_V(spec: LaplaceExponentSpec, r):
    """Renewal-function surrogate V(r) = 1/sqrt(phi(r^-2)), constant = 1.

    Nondecreasing in r since phi is increasing.
    """
    arr = _validated_positive(r, "r")
    return _maybe_scalar(1.0 / np.sqrt(_phi(spec, arr**-2.0)), r)


def eta1(spec: LaplaceExponentSpec, lam):
    """lam^2 phi'(lam); nondecreasing for special Bernstein functions."""
    arr = _validated_positive(lam, "lam")
    return _maybe_scalar(arr**2 * _phi_prime(spec, arr), lam)


def eta2(spec: LaplaceExponentSpec, lam):
    """lam^2 phi'(lam)/phi(lam)^2; nondecreasing companion of :func:`eta1`."""
    arr = _validated_positive(lam, "lam")
    return _maybe_scalar(arr**2 * _phi_prime(spec, arr) / _phi(spec, arr) ** 2, lam)


# -- radial kernel proxies ---------------------------------------------------


def _check_dim(d):
    if int(d) != d or d < 1:
        raise ValueError("dimension d must be a positive integer")
    return int(d)


def jump_proxy(spec: LaplaceExponentSpec, r, d: int):
    """Small-radius jump kernel shape r^(-d-2) phi'(r^-2), constant = 1.

    Intended regime is r <= 1; larger radii evaluate fine but are outside
    the range where the shape matches the true kernel.
    """
    d = _check_dim(d)
    arr = _validated_positive(r, "r")
    if np.any(arr > 1.0):
        warnings.warn(
            "jump/green proxies are small-radius shapes; r > 1 requested",
            RuntimeWarning,
            stacklevel=2,
        )
    log_val = -(d + 2.0) * np.log(arr) + np.log(_phi_prime(spec, arr**-2.0))
    return _maybe_scalar(np.exp(log_val), r)


def green_proxy(spec: LaplaceExponentSpec, r, d: int):
    """Small-radius free Green kernel shape r^(-d-2) phi'(r^-2)/phi(r^-2)^2."""
    d = _check_dim(d)
    arr = _validated_positive(r, "r")
    if np.any(arr > 1.0):
        warnings.warn(
            "jump/green proxies are small-radius shapes; r > 1 requested",
            RuntimeWarning,
            stacklevel=2,
        )
    lam = arr**-2.0
    log_val = (
        -(d + 2.0) * np.log(arr)
        + np.log(_phi_prime(spec, lam))
        - 2.0 * np.log(_phi(spec, lam))
    )
    return _maybe_scalar(np.exp(log_val), r)


# -- quadratures -------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureConfig:
    tolerance: float = 1e-8
    limit: int = 200


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, achieved_error):
        super().__init__(f"{message} (achieved error estimate {achieved_error:.3e})")
        self.achieved_error = achieved_error


def ladder_exponent_kappa(spec: LaplaceExponentSpec, lam: float,
                          quad: QuadratureConfig | None = None) -> float:
    """Ladder-height Laplace exponent by quadrature.

    Computes ``exp((1/pi) * int_0^inf log(phi(lam^2 th^2))/(1+th^2) dth)``.
    The tail is folded onto (0, 1] with the substitution th -> 1/th, which
    leaves an integrable logarithmic endpoint singularity that the adaptive
    panels resolve.  For the stable family this is exactly lam^(alpha/2).
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    quad = quad or QuadratureConfig()
    lam2 = lam * lam

    def folded(th):
        t2 = th * th
        return (
            math.log(eval_phi(spec, lam2 * t2)) + math.log(eval_phi(spec, lam2 / t2))
        ) / (1.0 + t2)

    val, err = integrate.quad(
        folded, 0.0, 1.0, epsabs=quad.tolerance, epsrel=quad.tolerance,
        limit=quad.limit,
    )
    kappa = math.exp(val / math.pi)
    # error in the exponent propagates multiplicatively
    if err / math.pi > 10.0 * quad.tolerance * max(1.0, abs(val) / math.pi):
        raise QuadratureError("ladder exponent quadrature did not converge", err)
    return kappa


@dataclass(frozen=True)
class LevyDensity:
    """Explicit subordinator Levy density; only the gamma case is closed form.

    The gamma subordinator has density mu(t) = t^-1 e^-t, the classical
    Frullani pair of log(1 + lam).  It serves as the exact oracle behind
    :func:`exact_jump_density_gamma`.
    """

    family: str = "gamma-explicit"

    def density(self, t):
        arr = _validated_positive(t, "t")
        return _maybe_scalar(np.exp(-arr) / arr, t)

    def integrability_check(self, lo: float = 1e-8, hi: float = 1e4):
        """Numerically confirm the Levy integrability of (1 ^ t) mu(t)."""
        val, err = integrate.quad(
            lambda t: min(1.0, t) * math.exp(-t) / t, lo, hi, limit=200
        )
        return val, err


def exact_jump_density_gamma(r: float, d: int,
                             quad: QuadratureConfig | None = None) -> float:
    """Jump kernel of the gamma-subordinate process by adaptive quadrature.

    Evaluates ``int_0^inf (4 pi t)^(-d/2) exp(-r^2/4t) t^-1 e^-t dt`` through
    the substitution u = r^2/(4t), which removes the small-t boundary layer:

        j(r) = (pi r^2)^(-d/2) * int_0^inf u^(d/2-1) exp(-u - r^2/(4u)) du.

    Serves as the exact oracle for the comparability of :func:`jump_proxy`.
    """
    d = _check_dim(d)
    if r <= 0:
        raise ValueError("r must be positive")
    quad = quad or QuadratureConfig(tolerance=1e-6)
    rsq = r * r

    def integrand(u):
        return u ** (d / 2.0 - 1.0) * math.exp(-u - rsq / (4.0 * u))

    val, err = integrate.quad(
        integrand, 0.0, np.inf, epsabs=0.0, epsrel=quad.tolerance, limit=quad.limit
    )
    if val <= 0 or err > 10.0 * quad.tolerance * val:
        raise QuadratureError("jump density quadrature did not converge", err)
    return (math.pi * rsq) ** (-d / 2.0) * val


# -- scaling-condition checkers ----------------------------------------------


@dataclass
class ScalingReport:
    """Fitted scaling indices over a finite probe window.

    ``delta_hat``/``sigma_hat`` describe the derivative-decay upper bound
    phi'(lam x)/phi'(lam) <= sigma x^-delta; ``delta0_hat``/``sigma0_hat``
    the matching lower bound; ``delta1_hat``/``sigma1_hat`` the growth lower
    bound phi(lam x)/phi(lam) >= sigma1 x^delta1_hat (the fitted exponent
    itself is reported, alpha/2 for the stable family).  Indices are
    window-dependent fits, not canonical constants.
    """

    condition: str
    lambda_min: float
    lambda_max: float
    grid_size: int
    max_violation: float
    satisfied: bool
    slope_raw: float
    delta_hat: float | None = None
    sigma_hat: float | None = None
    delta0_hat: float | None = None
    sigma0_hat: float | None = None
    delta1_hat: float | None = None
    sigma1_hat: float | None = None

    def to_dict(self):
        return asdict(self)


def _ratio_grid(spec, window, grid_size, x_max, use_phi):
    lo, hi = float(window[0]), float(window[1])
    if not 0 < lo < hi:
        raise ValueError("window must satisfy 0 < lo < hi")
    if grid_size < 16:
        raise ValueError("grid_size must be at least 16")
    lam = np.geomspace(lo, hi, grid_size)
    x = np.geomspace(1.0, x_max, grid_size)
    fn = _phi if use_phi else _phi_prime
    base = fn(spec, lam)[:, None]
    ratio = fn(spec, np.outer(lam, x)) / base
    return lam, x, ratio


def _fit_loglog(x, ratio):
    logx = np.tile(np.log(x), ratio.shape[0])
    logr = np.log(ratio).ravel()
    design = np.column_stack([logx, np.ones_like(logx)])
    (slope, intercept), *_ = np.linalg.lstsq(design, logr, rcond=None)
    return float(slope), float(math.exp(intercept))


def _clamp_dust(v):
    return 0.0 if v < 1e-9 else float(v)


def check_A3(spec: LaplaceExponentSpec, window=(1.0, 1e4), grid_size: int = 64,
             x_max: float = 1e4) -> ScalingReport:
    """Fit the derivative-decay index of phi'(lam x)/phi'(lam) over a window.

    The least-squares slope of the log-log ratio gives the decay exponent;
    the reported index is capped at 1 (a faster empirical decay still
    certifies the condition at index 1).  ``max_violation`` is the largest
    relative excess of the data over the fitted bound.
    """
    lam, x, ratio = _ratio_grid(spec, window, grid_size, x_max, use_phi=False)
    slope, sigma = _fit_loglog(x, ratio)
    delta_raw = -slope
    satisfied = delta_raw > 0.01
    delta_hat = min(delta_raw, 1.0) if satisfied else delta_raw
    if satisfied and delta_raw > 1.0:
        # re-anchor the constant for the capped exponent
        sigma = float(np.exp(np.mean(np.log(ratio) + np.log(x)[None, :])))
    excess = ratio * x[None, :] ** delta_hat / sigma - 1.0
    return ScalingReport(
        condition="A-3",
        lambda_min=float(window[0]),
        lambda_max=float(window[1]),
        grid_size=grid_size,
        max_violation=_clamp_dust(excess.max()),
        satisfied=satisfied,
        slope_raw=slope,
        delta_hat=float(delta_hat),
        sigma_hat=float(sigma),
    )


def check_A4(spec: LaplaceExponentSpec, window=(1.0, 1e4), grid_size: int = 64,
             x_max: float = 1e4) -> ScalingReport:
    """Fit the derivative-decay lower index: phi'(lam x)/phi'(lam) >= s0 x^-d0."""
    lam, x, ratio = _ratio_grid(spec, window, grid_size, x_max, use_phi=False)
    slope, sigma0 = _fit_loglog(x, ratio)
    delta0 = -slope
    # shortfall of the data below the fitted lower bound
    shortfall = sigma0 * x[None, :] ** (-delta0) / ratio - 1.0
    return ScalingReport(
        condition="A-4",
        lambda_min=float(window[0]),
        lambda_max=float(window[1]),
        grid_size=grid_size,
        max_violation=_clamp_dust(shortfall.max()),
        satisfied=0.0 < delta0 < 2.0,
        slope_raw=slope,
        delta0_hat=float(delta0),
        sigma0_hat=float(sigma0),
    )


def check_A5(spec: LaplaceExponentSpec, window=(1.0, 1e4), grid_size: int = 64,
             x_max: float = 1e4) -> ScalingReport:
    """Fit the growth lower-bound exponent of phi(lam x)/phi(lam).

    ``delta1_hat`` is the fitted exponent e with phi(lam x)/phi(lam) >=
    sigma1 x^e on the window (alpha/2 for the stable family).  The condition
    holds on the window when the exponent is bounded away from zero.
    """
    lam, x, ratio = _ratio_grid(spec, window, grid_size, x_max, use_phi=True)
    slope, sigma1 = _fit_loglog(x, ratio)
    shortfall = sigma1 * x[None, :] ** slope / ratio - 1.0
    return ScalingReport(
        condition="A-5",
        lambda_min=float(window[0]),
        lambda_max=float(window[1]),
        grid_size=grid_size,
        max_violation=_clamp_dust(shortfall.max()),
        satisfied=slope > 0.01,
        slope_raw=slope,
        delta1_hat=float(slope),
        sigma1_hat=float(sigma1),
    )


# -- derivative sign pattern ---------------------------------------------------


@dataclass
class SignCheckReport:
    """Alternating-sign check of phi', phi'', and finite-difference phi''', phi''''."""

    order: int
    lambda_min: float
    lambda_max: float
    grid_size: int
    worst_margin: float
    violations: list = field(default_factory=list)

    @property
    def satisfied(self) -> bool:
        return not self.violations

    def to_dict(self):
        return {
            "order": self.order,
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "grid_size": self.grid_size,
            "worst_margin": self.worst_margin,
            "satisfied": self.satisfied,
            "violations": [
                {"order": k, "lam": lam, "value": val} for k, lam, val in self.violations
            ],
        }


_FD_REL_STEP = 1e-4
_FD_NOISE_MARGIN = -1e-6


def _fd_third(spec, lam):
    # Richardson-refined central difference of phi''
    h = _FD_REL_STEP * lam
    d1 = (_phi_second(spec, lam + h) - _phi_second(spec, lam - h)) / (2 * h)
    h2 = h / 2
    d2 = (_phi_second(spec, lam + h2) - _phi_second(spec, lam - h2)) / (2 * h2)
    return (4.0 * d2 - d1) / 3.0


def _fd_fourth(spec, lam):
    h = _FD_REL_STEP * lam
    f0 = _phi_second(spec, lam)
    s1 = (_phi_second(spec, lam + h) - 2 * f0 + _phi_second(spec, lam - h)) / h**2
    h2 = h / 2
    s2 = (_phi_second(spec, lam + h2) - 2 * f0 + _phi_second(spec, lam - h2)) / h2**2
    return (4.0 * s2 - s1) / 3.0


def check_bernstein(spec: LaplaceExponentSpec, order: int = 4,
                    grid=None) -> SignCheckReport:
    """Verify the alternating derivative signs (-1)^(k-1) phi^(k) > 0, k <= order.

    Orders 1 and 2 use the exact closed forms; orders 3 and 4 use central
    finite differences with one Richardson refinement.  Margins are the
    sign-adjusted values normalized by their magnitude, so a healthy family
    scores +1 everywhere.
    """
    if not 1 <= order <= 4:
        raise ValueError("order must be in 1..4")
    if grid is None:
        grid = np.geomspace(1e-6, 1e6, 121)
    grid = _validated_positive(grid, "grid")
    evaluators = {
        1: lambda lam: _phi_prime(spec, lam),
        2: lambda lam: -_phi_second(spec, lam),
        3: lambda lam: _fd_third(spec, lam),
        4: lambda lam: -_fd_fourth(spec, lam),
    }
    worst = np.inf
    violations = []
    tiny = np.finfo(float).tiny
    for k in range(1, order + 1):
        vals = evaluators[k](grid)
        margins = vals / np.maximum(np.abs(vals), tiny)
        worst = min(worst, float(margins.min()))
        for idx in np.nonzero(margins < _FD_NOISE_MARGIN)[0]:
            violations.append((k, float(grid[idx]), float(vals[idx])))
    return SignCheckReport(
        order=order,
        lambda_min=float(grid.min()),
        lambda_max=float(grid.max()),
        grid_size=int(grid.size),
        worst_margin=worst,
        violations=violations,
    )
