"""Code-state parametrisations and exact conversions between them.

Three conventional regularisations of an ideal qudit GKP codeword are
supported, plus the two-variance *standard form* that all of them reduce to:

* :class:`Approx1Params` -- Gaussian envelope ``kappa`` over spikes of width
  ``delta_sq_param`` (Delta).
* :class:`Approx2Params` -- the ideal state smeared by a Gaussian displacement
  distribution with widths ``gamma`` and ``delta``.
* :class:`Approx3Params` -- the ideal state damped by ``exp(-beta n)``.
* :class:`StandardParams` -- position spike variance ``sigma_q2``, momentum
  spike variance ``sigma_p2`` and position comb period ``gamma_spacing``.

Every parametrisation carries a free lattice unit ``alpha``; when omitted it
defaults to ``sqrt(2 pi / d)``, the square-lattice value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

__all__ = [
    "ParameterRangeError",
    "CodeLabel",
    "Approx1Params",
    "Approx2Params",
    "Approx3Params",
    "StandardParams",
    "SymmetricParams",
    "square_lattice_unit",
    "standard_from_approx1",
    "standard_from_approx2",
    "standard_from_approx3",
    "approx1_from_standard",
    "approx2_from_approx1",
    "theorem1_parameters",
    "theorem1_states",
    "apply_squeeze",
    "remark1_convert",
    "sigma2_from_db",
    "db_from_sigma2",
]


class ParameterRangeError(ValueError):
    """Raised when a parameter violates a documented range invariant."""


def square_lattice_unit(d: int) -> float:
    """Lattice translation unit ``sqrt(2 pi / d)`` of the square qudit lattice."""
    return math.sqrt(2.0 * math.pi / d)


def _positive(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ParameterRangeError(f"{name} must be a finite positive number, got {value!r}")


def _resolve_alpha(obj, d: int) -> None:
    if obj.alpha is None:
        object.__setattr__(obj, "alpha", square_lattice_unit(d))
    _positive("alpha", obj.alpha)


@dataclass(frozen=True)
class CodeLabel:
    """Logical dimension ``d`` and logical index ``j`` of a codeword."""

    d: int
    j: int = 0

    def __post_init__(self) -> None:
        if int(self.d) != self.d or self.d < 1:
            raise ParameterRangeError(f"d must be an integer >= 1, got {self.d!r}")
        if int(self.j) != self.j or not (0 <= self.j <= self.d - 1):
            raise ParameterRangeError(f"j must be an integer in [0, d-1] = [0, {self.d - 1}], got {self.j!r}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "j", int(self.j))

    @property
    def alpha_d(self) -> float:
        """Square-lattice translation unit ``sqrt(2 pi / d)``."""
        return square_lattice_unit(self.d)

    def with_index(self, j: int) -> "CodeLabel":
        return CodeLabel(self.d, j)


@dataclass(frozen=True)
class Approx1Params:
    """Gaussian-enveloped comb of squeezed spikes.

    Parameters
    ----------
    kappa : float
        Inverse width of the Gaussian envelope.
    delta_sq_param : float
        Width Delta of each squeezed spike.
    alpha : float, optional
        Lattice unit; defaults to ``sqrt(2 pi / d)``.
    label : CodeLabel
    """

    kappa: float
    delta_sq_param: float
    alpha: Optional[float] = None
    label: CodeLabel = field(default_factory=lambda: CodeLabel(2, 0))

    def __post_init__(self) -> None:
        _positive("kappa", self.kappa)
        _positive("delta_sq_param", self.delta_sq_param)
        _resolve_alpha(self, self.label.d)


@dataclass(frozen=True)
class Approx2Params:
    """Ideal codeword smeared by Gaussian displacements.

    Parameters
    ----------
    gamma, delta : float
        Widths of the displacement distribution; ``0 < gamma * delta < 2``.
    alpha : float, optional
        Lattice unit; defaults to ``sqrt(2 pi / d)``.
    label : CodeLabel
    """

    gamma: float
    delta: float
    alpha: Optional[float] = None
    label: CodeLabel = field(default_factory=lambda: CodeLabel(2, 0))

    def __post_init__(self) -> None:
        _positive("gamma", self.gamma)
        _positive("delta", self.delta)
        if not self.gamma * self.delta < 2.0:
            raise ParameterRangeError(
                f"gamma*delta must lie in (0, 2), got {self.gamma * self.delta!r}")
        _resolve_alpha(self, self.label.d)

    @property
    def lam(self) -> float:
        """Derived factor ``1 + gamma^2 delta^2 / 4``."""
        return 1.0 + (self.gamma * self.delta) ** 2 / 4.0

    @property
    def narrowing(self) -> float:
        """Ratio of the position comb period to ``alpha d``."""
        g2d2 = (self.gamma * self.delta) ** 2
        return (1.0 - g2d2 / 4.0) / (1.0 + g2d2 / 4.0)


@dataclass(frozen=True)
class Approx3Params:
    """Ideal codeword damped by the thermal factor ``exp(-beta n)``."""

    beta: float
    alpha: Optional[float] = None
    label: CodeLabel = field(default_factory=lambda: CodeLabel(2, 0))

    def __post_init__(self) -> None:
        _positive("beta", self.beta)
        _resolve_alpha(self, self.label.d)


@dataclass(frozen=True)
class StandardParams:
    """Standard-form description shared by every approximation.

    Parameters
    ----------
    sigma_q2 : float
        Variance of each position spike, in ``(0, 1/2)``.
    sigma_p2 : float
        Variance of each momentum spike, in ``(0, 1/2)``.
    gamma_spacing : float
        Period of the position comb.
    label : CodeLabel
    """

    sigma_q2: float
    sigma_p2: float
    gamma_spacing: float
    label: CodeLabel = field(default_factory=lambda: CodeLabel(2, 0))

    def __post_init__(self) -> None:
        for name in ("sigma_q2", "sigma_p2"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and 0.0 < value < 0.5):
                raise ParameterRangeError(f"{name} must lie in (0, 1/2), got {value!r}")
        _positive("gamma_spacing", self.gamma_spacing)

    @property
    def Lambda(self) -> float:
        """Derived factor ``1 - 4 sigma_q2 sigma_p2``, always in ``(0, 1)``."""
        return 1.0 - 4.0 * self.sigma_q2 * self.sigma_p2

    def with_index(self, j: int) -> "StandardParams":
        """Same code, different logical index."""
        return replace(self, label=self.label.with_index(j))

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.sigma_q2, self.sigma_p2, self.gamma_spacing)


@dataclass(frozen=True)
class SymmetricParams:
    """Fourier-symmetric code with equal spike variances ``sigma2``."""

    sigma2: float
    label: CodeLabel = field(default_factory=lambda: CodeLabel(2, 0))

    def __post_init__(self) -> None:
        if not (isinstance(self.sigma2, (int, float)) and 0.0 < self.sigma2 < 0.5):
            raise ParameterRangeError(f"sigma2 must lie in (0, 1/2), got {self.sigma2!r}")

    @property
    def Lambda(self) -> float:
        return 1.0 - 4.0 * self.sigma2 ** 2

    @property
    def level_db(self) -> float:
        return db_from_sigma2(self.sigma2)

    def to_standard(self) -> StandardParams:
        gamma = self.label.alpha_d * self.label.d * math.sqrt(self.Lambda)
        return StandardParams(self.sigma2, self.sigma2, gamma, self.label)


def standard_from_approx1(p: Approx1Params) -> StandardParams:
    """Standard form of an Approximation-1 state.

    Examples
    --------
    >>> s = standard_from_approx1(Approx1Params(0.1, 0.1))
    >>> round(s.sigma_q2, 12), round(s.sigma_p2, 12)
    (0.005, 0.0049995)
    """
    k2, D2 = p.kappa ** 2, p.delta_sq_param ** 2
    return StandardParams(D2 / 2.0, k2 / (2.0 * (1.0 + k2 * D2)), p.alpha * p.label.d, p.label)


def approx1_from_standard(p: StandardParams) -> Approx1Params:
    """Approximation-1 parameters reproducing a standard-form state.

    Inverse of :func:`standard_from_approx1`: ``Delta^2 = 2 sigma_q2``,
    ``kappa^2 = 2 sigma_p2 / Lambda`` and ``alpha = Gamma / d``.
    """
    return Approx1Params(math.sqrt(2.0 * p.sigma_p2 / p.Lambda), math.sqrt(2.0 * p.sigma_q2),
                         p.gamma_spacing / p.label.d, p.label)


def standard_from_approx2(p: Approx2Params) -> StandardParams:
    """Standard form of an Approximation-2 state.

    The comb is narrowed by the factor ``(1 - gamma^2 delta^2/4) / lambda``.
    """
    lam = p.lam
    return StandardParams(p.delta ** 2 / (2.0 * lam), p.gamma ** 2 / (2.0 * lam),
                          p.alpha * p.label.d * p.narrowing, p.label)


def standard_from_approx3(p: Approx3Params) -> StandardParams:
    """Standard form of an Approximation-3 state."""
    s2 = math.tanh(p.beta) / 2.0
    return StandardParams(s2, s2, p.alpha * p.label.d / math.cosh(p.beta), p.label)


def theorem1_parameters(beta: float) -> Tuple[float, float, float, float]:
    """Parameters making all three approximations coincide.

    Returns ``(kappa, Delta, gamma, delta)`` with ``kappa^2 = tanh(beta)``,
    ``Delta^2 = sinh(beta) cosh(beta)`` and
    ``gamma^2 = delta^2 = 2 tanh(beta / 2)``.  With these values the
    Approximation-1 state squeezed by ``cosh(beta)`` equals the
    Approximation-2 and Approximation-3 states for the same ``alpha``.
    """
    _positive("beta", beta)
    g = math.sqrt(2.0 * math.tanh(beta / 2.0))
    return (math.sqrt(math.tanh(beta)), math.sqrt(math.sinh(beta) * math.cosh(beta)), g, g)


def theorem1_states(beta: float, label: CodeLabel,
                    alpha: Optional[float] = None) -> Tuple[Approx1Params, Approx2Params, Approx3Params, float]:
    """Matching parameter sets for all three approximations.

    Returns the three parametrisations and the squeeze factor ``cosh(beta)``
    that maps the Approximation-1 state onto the other two.
    """
    kappa, Delta, gamma, delta = theorem1_parameters(beta)
    return (Approx1Params(kappa, Delta, alpha, label), Approx2Params(gamma, delta, alpha, label),
            Approx3Params(beta, alpha, label), math.cosh(beta))


def apply_squeeze(p: StandardParams, zeta: float) -> StandardParams:
    """Standard form of the squeezed state ``sqrt(zeta) psi(zeta q)``.

    Returns ``(sigma_q2 / zeta^2, zeta^2 sigma_p2, Gamma / zeta)``; the
    product ``sigma_q2 sigma_p2``, hence ``Lambda``, is unchanged.
    """
    _positive("zeta", zeta)
    return StandardParams(p.sigma_q2 / zeta ** 2, zeta ** 2 * p.sigma_p2,
                          p.gamma_spacing / zeta, p.label)


def approx2_from_approx1(p: Approx1Params) -> Approx2Params:
    """Approximation-2 parameters describing the same state as ``p``.

    Inverts the unsqueezed Approximation 1/2 correspondence.  Writing
    ``u = gamma delta``, the product ``kappa Delta`` equals
    ``u / (1 - u^2/4)``, which has the unique root
    ``u = 2 kappa Delta / (sqrt(1 + (kappa Delta)^2) + 1)`` in ``(0, 2)``,
    written without the cancellation of ``sqrt(1 + x^2) - 1``.
    """
    k = p.kappa * p.delta_sq_param
    u = 2.0 * k / (math.sqrt(1.0 + k * k) + 1.0)
    lam = 1.0 + u * u / 4.0
    delta = p.delta_sq_param * math.sqrt(lam)
    narrowing = (1.0 - u * u / 4.0) / lam
    return Approx2Params(u / delta, delta, p.alpha / narrowing, p.label)


def remark1_convert(p: Approx2Params) -> Tuple[Approx1Params, float, Approx3Params]:
    """Asymmetric correspondence between the three approximations.

    Every Approximation-2 state equals an (unsqueezed) Approximation-1 state
    with ``kappa^2 = gamma^2 / (lambda r^2)``, ``Delta^2 = delta^2 / lambda``
    and lattice unit ``alpha r``, where ``r`` is the comb narrowing factor.
    Squeezing that state by ``squeeze = sqrt(Delta cosh(beta) / kappa)`` with
    ``beta = asinh(kappa Delta)`` equalises the spike variances and yields an
    Approximation-3 state; a solution exists for every valid ``p``.  When
    ``gamma == delta`` the squeeze reduces to ``sqrt(1 + kappa^2 Delta^2)``.

    Returns
    -------
    approx1 : Approx1Params
        Equal to ``p`` as a state.
    squeeze : float
        Factor ``zeta`` with ``approx3 = sqrt(zeta) psi_approx1(zeta q)``.
    approx3 : Approx3Params
    """
    lam = p.lam
    r = p.narrowing
    kappa = p.gamma / (math.sqrt(lam) * r)
    Delta = p.delta / math.sqrt(lam)
    a1 = Approx1Params(kappa, Delta, p.alpha * r, p.label)
    beta = math.asinh(kappa * Delta)
    # Equal spike variances after squeezing require zeta^4 = Delta^2 cosh^2(beta) / kappa^2.
    squeeze = math.sqrt(Delta * math.cosh(beta) / kappa)
    # The squeezed comb period alpha1 d / zeta must equal alpha'' d / cosh(beta).
    a3 = Approx3Params(beta, a1.alpha * math.cosh(beta) / squeeze, p.label)
    return a1, squeeze, a3


def sigma2_from_db(level_db: float) -> float:
    """Spike variance of the symmetric code at a squeezing level in dB.

    Examples
    --------
    >>> round(sigma2_from_db(10.0), 15)
    0.05
    """
    if not math.isfinite(level_db) or level_db <= 0:
        raise ParameterRangeError(f"squeezing level must be positive dB, got {level_db!r}")
    return 10.0 ** (-level_db / 10.0) / 2.0


def db_from_sigma2(sigma2: float) -> float:
    """Squeezing level ``-10 log10(2 sigma2)`` in dB."""
    if not (0.0 < sigma2 < 0.5):
        raise ParameterRangeError(f"sigma2 must lie in (0, 1/2), got {sigma2!r}")
    return -10.0 * math.log10(2.0 * sigma2)
