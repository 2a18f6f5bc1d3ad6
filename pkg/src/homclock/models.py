"""Closed-form detection statistics.

These are the fast evaluation path; the Fock engine in :mod:`homclock.fock`
recomputes every quantity from first principles and the verification suite
holds the two against each other.
"""

from __future__ import annotations

import math
from math import comb, factorial

from .errors import InvalidParameterError

# Variants of the all-photons-one-port probability.
CONSISTENT = "consistent"
# "unnormalized" omits the sqrt(n!) bosonic factors from the n-photon
# creation products, which inflates the probability by 2/n!^2.  It circulates
# in closed-form treatments, so it is kept for auditability; verification
# reports flag it expected-inconsistent instead of failing on it.
UNNORMALIZED = "unnormalized"

P_ALL_SAME_PORT_VARIANTS = (CONSISTENT, UNNORMALIZED)


def p_kl(n: int, k: int, l: int, phi_hom: float) -> float:
    """Probability of k bin-1 and l bin-2 photons in the minus port:

        C(n,k) C(n,l) / 4^n * (1 + (-1)^(k+l) cos(phi_hom))
    """
    if n < 1:
        raise InvalidParameterError("photon number per branch must be >= 1")
    if not (0 <= k <= n and 0 <= l <= n):
        raise InvalidParameterError(f"counts must lie in [0, {n}], got k={k}, l={l}")
    sign = -1.0 if (k + l) % 2 else 1.0
    return comb(n, k) * comb(n, l) / 4.0**n * (1.0 + sign * math.cos(phi_hom))


def parity_signal(phi_hom: float) -> float:
    """Parity expectation at either output port: cos(phi_hom)."""
    return math.cos(phi_hom)


def even_odd_probabilities(phi_hom: float):
    """(P_even, P_odd) of the photon count at one port; sums to 1 exactly."""
    c = math.cos(phi_hom)
    return (1.0 + c) / 2.0, (1.0 - c) / 2.0


def p_all_same_port(n: int, phi_hom: float, variant: str = CONSISTENT) -> float:
    """Probability that all 2n photons exit through one chosen port.

    ``consistent``:   (1 + cos(phi_hom)) / 4^n, which the brute-force engine
                      confirms.
    ``unnormalized``: the variant missing the sqrt(n!) normalization factors;
                      larger by 2/n!^2 and retained only for audit.
    """
    if n < 1:
        raise InvalidParameterError("photon number per branch must be >= 1")
    if variant == CONSISTENT:
        return (1.0 + math.cos(phi_hom)) / 4.0**n
    if variant == UNNORMALIZED:
        n_hom = 1.0 / (math.sqrt(2.0) * factorial(n))
        return (n_hom / 2.0 ** (n - 1)) ** 2 * (1.0 + math.cos(phi_hom))
    raise InvalidParameterError(
        f"variant must be one of {P_ALL_SAME_PORT_VARIANTS}, got {variant!r}"
    )


def mz_coherence(omega1: float, omega2: float, delta_inv_redshift: float, tau: float) -> float:
    """Mach-Zehnder coherence signal for a single frequency-bin photon:

        cos(omega_minus * delta * tau / 2) * cos(omega_plus * delta * tau / 2)

    The destructive-port detection probability is (1 + signal)/2 for a
    frequency-blind detector, with both beam splitters using the engine's
    sign convention.
    """
    half = delta_inv_redshift * tau / 2.0
    return math.cos((omega2 - omega1) * half) * math.cos((omega2 + omega1) * half)


def loss_survival(eta_upper: float, eta_lower: float, n: int) -> float:
    """Probability that all 2n photons survive per-arm memory loss:
    (eta_U * eta_L)^n."""
    for name, eta in (("eta_upper", eta_upper), ("eta_lower", eta_lower)):
        if not 0.0 <= eta <= 1.0:
            raise InvalidParameterError(f"{name} must be in [0, 1], got {eta}")
    if n < 1:
        raise InvalidParameterError("photon number per branch must be >= 1")
    return (eta_upper * eta_lower) ** n
