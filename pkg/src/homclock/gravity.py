"""Gravitational redshift and clock bookkeeping.

Everything here is first-order weak-field arithmetic: a clock at height h
runs fast by the factor Theta = 1 + g*h/c^2.  The observable interference
phase is driven by the *differential inverse* factor between the two arms,
a number of order 1e-15 for laboratory geometries.  Forming it naively as
1/Theta - 1 in doubles quantizes near 1 (ulp 2.2e-16) and destroys the
signal, so the module always carries the small offsets (Theta - 1, and
1/Theta - 1 = -x/(1+x)) explicitly and never differences quantities close
to unity.

The per-mode memory phase is gauge fixed: the flat-spacetime accumulation
Omega_i * tau (~1e14 rad for optical frequencies and second-scale storage)
is subtracted, because it is common to both interferometer branches under
the equal-storage-time schedule and would make double-precision
trigonometry meaningless.  Branch-relative phases are untouched by this
choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParameterError, NoCollapseError, OutOfRegimeError

SPEED_OF_LIGHT = 299792458.0  # m/s, exact
STANDARD_GRAVITY = 9.80665    # m/s^2

# First-order expansion of Theta is trusted only while g*h/c^2 stays tiny.
WEAK_FIELD_LIMIT = 1e-6


@dataclass(frozen=True)
class GravityConfig:
    """Gravitational environment of the two interferometer arms."""

    g: float = STANDARD_GRAVITY
    c: float = SPEED_OF_LIGHT
    h_upper: float = 0.0
    h_lower: float = 0.0

    def __post_init__(self) -> None:
        if self.g < 0.0 or not math.isfinite(self.g):
            raise InvalidParameterError(f"gravitational acceleration must be >= 0, got {self.g}")
        if self.c <= 0.0 or not math.isfinite(self.c):
            raise InvalidParameterError(f"speed of light must be positive, got {self.c}")
        for name, h in (("h_upper", self.h_upper), ("h_lower", self.h_lower)):
            if not math.isfinite(h):
                raise InvalidParameterError(f"{name} must be finite, got {h}")


@dataclass(frozen=True)
class ClockConfig:
    """Protocol parameters: the two bin frequencies, photon number per
    branch, source phase, per-arm local storage times and memory
    transmissivities."""

    omega1: float
    omega2: float
    n_photons: int
    phi: float = 0.0
    tau_upper: float = 0.0
    tau_lower: float = 0.0
    eta_upper: float = 1.0
    eta_lower: float = 1.0

    def __post_init__(self) -> None:
        if self.omega1 <= 0.0 or self.omega2 <= 0.0:
            raise InvalidParameterError("bin frequencies must be positive")
        if self.omega1 == self.omega2:
            raise InvalidParameterError("bin frequencies must differ (omega_minus != 0)")
        if self.n_photons < 1:
            raise InvalidParameterError("photon number per branch must be >= 1")
        if self.tau_upper < 0.0 or self.tau_lower < 0.0:
            raise InvalidParameterError("storage times must be >= 0")
        for name, eta in (("eta_upper", self.eta_upper), ("eta_lower", self.eta_lower)):
            if not 0.0 <= eta <= 1.0:
                raise InvalidParameterError(f"{name} must be in [0, 1], got {eta}")

    @property
    def omega_minus(self) -> float:
        return self.omega2 - self.omega1

    @property
    def omega_plus(self) -> float:
        return self.omega2 + self.omega1


def _check_regime(cfg: GravityConfig, h: float) -> None:
    if cfg.g * abs(h) / cfg.c**2 >= WEAK_FIELD_LIMIT:
        raise OutOfRegimeError(
            f"g*h/c^2 = {cfg.g * abs(h) / cfg.c**2:.3e} exceeds the first-order "
            f"validity guard {WEAK_FIELD_LIMIT:g}"
        )


def redshift_offset(cfg: GravityConfig, h: float) -> float:
    """Theta - 1 = g*h/c^2, carried at full precision.

    Use this (never ``redshift_factor(...) - 1``) whenever the offset itself
    is the quantity of interest.
    """
    _check_regime(cfg, h)
    return cfg.g * h / cfg.c**2


def redshift_factor(cfg: GravityConfig, h: float) -> float:
    """The clock-rate ratio Theta = 1 + g*h/c^2 at height h."""
    return 1.0 + redshift_offset(cfg, h)


def inverse_redshift_offset(cfg: GravityConfig, h: float) -> float:
    """1/Theta - 1 = -x/(1+x) with x = g*h/c^2, cancellation free."""
    x = redshift_offset(cfg, h)
    return -x / (1.0 + x)


def delta_inverse_redshift(cfg: GravityConfig) -> float:
    """Differential inverse redshift 1/Theta_U - 1/Theta_L between the arms.

    Signed: negative when the upper arm is higher.  Evaluated as
    (x_L - x_U) / ((1+x_U)(1+x_L)) so no cancellation against 1 occurs.
    """
    x_u = redshift_offset(cfg, cfg.h_upper)
    x_l = redshift_offset(cfg, cfg.h_lower)
    return (x_l - x_u) / ((1.0 + x_u) * (1.0 + x_l))


def memory_phase(cfg: GravityConfig, clock: ClockConfig, arm: str, bin_index: int) -> float:
    """Gauge-fixed per-photon phase a stored bin picks up in one arm:
    theta = Omega_i * tau_arm * (1/Theta_arm - 1).

    The flat-spacetime part Omega_i * tau_arm is already subtracted; only
    height-dependent dephasing remains, which keeps the returned angles at
    O(1) rad for laboratory parameters.
    """
    if arm == "U":
        tau, h = clock.tau_upper, cfg.h_upper
    elif arm == "L":
        tau, h = clock.tau_lower, cfg.h_lower
    else:
        raise InvalidParameterError(f"arm must be 'U' or 'L', got {arm!r}")
    if bin_index == 1:
        omega = clock.omega1
    elif bin_index == 2:
        omega = clock.omega2
    else:
        raise InvalidParameterError(f"bin index must be 1 or 2, got {bin_index!r}")
    return omega * tau * inverse_redshift_offset(cfg, h)


def hom_phase(cfg: GravityConfig, clock: ClockConfig) -> float:
    """Relative phase between the two multiphoton branches after storage:

        phi_hom = N * Omega_minus * (tau_U/Theta_U - tau_L/Theta_L) + phi

    For tau_upper != tau_lower this includes the flat-spacetime term
    Omega_minus * (tau_U - tau_L) that the gauge-fixed per-mode phases
    deliberately drop; the two descriptions coincide for the common-storage
    schedules driven by the sweep engine.
    """
    inv_u = inverse_redshift_offset(cfg, cfg.h_upper)
    inv_l = inverse_redshift_offset(cfg, cfg.h_lower)
    proper = (clock.tau_upper - clock.tau_lower) + (
        clock.tau_upper * inv_u - clock.tau_lower * inv_l
    )
    return clock.n_photons * clock.omega_minus * proper + clock.phi


def collapse_time(cfg: GravityConfig, clock: ClockConfig) -> float:
    """Storage time at which the interference signal first hits zero:

        tau_ent = pi / (2 * N * |delta_inverse_redshift| * |omega_minus|)
    """
    delta = delta_inverse_redshift(cfg)
    if delta == 0.0:
        raise NoCollapseError(
            "flat spacetime (equal arm heights): the interference phase is static"
        )
    return math.pi / (2.0 * clock.n_photons * abs(delta) * abs(clock.omega_minus))


def wavelength_to_angular(wavelength: float) -> float:
    """Vacuum wavelength (m) -> angular frequency (rad/s)."""
    if not wavelength > 0.0:
        raise InvalidParameterError(f"wavelength must be positive, got {wavelength}")
    return 2.0 * math.pi * SPEED_OF_LIGHT / wavelength
