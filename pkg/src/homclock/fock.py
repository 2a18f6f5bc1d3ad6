"""Exact sparse Fock-space engine for passive linear optics.

States are superpositions of occupation-number vectors over a small, explicit
mode registry.  All channels (phase shifts, beam splitters, loss couplers) are
applied as exact binomial expansions per basis term, so the only numerical
error anywhere is double-precision rounding: no truncation, no sampling.

Conventions baked in (and relied on by the closed-form models):

* beam splitter:  upper -> (out_upper - out_lower)/sqrt(2)
                  lower -> (out_upper + out_lower)/sqrt(2)
* loss coupler:   a -> sqrt(eta) a + sqrt(1 - eta) v  onto a fresh
  environment mode that never re-enters any later channel.

The registry keeps a fixed canonical order (arms U1,U2,L1,L2, then source
ports, then output ports plus1,minus1,plus2,minus2, then environment modes in
creation order) so serialized states and accumulation order are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from math import comb, factorial
from typing import Dict, Iterator, Optional, Tuple

from .errors import (
    EmptyProjectionError,
    InvalidPairingError,
    InvalidParameterError,
    RegistryError,
)

# Photon-number cap for one input branch.  2*N_MAX photons total keeps every
# factorial and binomial exactly representable in double precision and the
# sparse maps at a few thousand terms even with environment modes attached.
N_MAX = 8

# Amplitudes below this magnitude are dropped after every channel.  No state
# reachable in this protocol has a legitimate amplitude anywhere near it for
# N <= N_MAX.
PRUNE_THRESHOLD = 1e-14

# Post-selection weights below this are treated as an annihilated state.
MIN_PROJECTION_WEIGHT = 1e-300


class Location(str, Enum):
    """Where a mode lives in the interferometer."""

    ARM_U = "U"
    ARM_L = "L"
    PORT_A = "A"        # occupied source port of a Mach-Zehnder front end
    PORT_B = "B"        # vacuum source port of a Mach-Zehnder front end
    PORT_PLUS = "plus"
    PORT_MINUS = "minus"
    ENV = "env"


_SIGNAL_ORDER = {
    Location.ARM_U: 0,
    Location.ARM_L: 1,
    Location.PORT_A: 2,
    Location.PORT_B: 3,
}


@dataclass(frozen=True)
class ModeId:
    """One bosonic mode: a location plus a frequency bin (1 or 2).

    Environment modes additionally carry a creation index so repeated loss
    events yield distinct modes.
    """

    location: Location
    bin: int
    env_index: Optional[int] = None

    def __post_init__(self) -> None:
        if self.bin not in (1, 2):
            raise InvalidParameterError(f"frequency bin must be 1 or 2, got {self.bin}")
        if (self.env_index is not None) != (self.location is Location.ENV):
            raise InvalidParameterError("env_index is required exactly for environment modes")

    @property
    def is_env(self) -> bool:
        return self.location is Location.ENV

    @property
    def label(self) -> str:
        if self.is_env:
            return f"env{self.env_index}"
        return f"{self.location.value}{self.bin}"

    def __repr__(self) -> str:  # compact in test output
        return f"ModeId({self.label})"


def _canonical_rank(mode: ModeId) -> Tuple[int, int, int]:
    if mode.is_env:
        return (3, mode.env_index, 0)
    if mode.location in (Location.PORT_PLUS, Location.PORT_MINUS):
        # bin-major, plus before minus: plus1, minus1, plus2, minus2
        return (2, mode.bin, 0 if mode.location is Location.PORT_PLUS else 1)
    # location-major, bin-minor: U1, U2, L1, L2, A1, A2, B1, B2
    return (1, _SIGNAL_ORDER[mode.location], mode.bin)


# Convenient singletons for the standard interferometer geometry.
U1 = ModeId(Location.ARM_U, 1)
U2 = ModeId(Location.ARM_U, 2)
L1 = ModeId(Location.ARM_L, 1)
L2 = ModeId(Location.ARM_L, 2)
A1 = ModeId(Location.PORT_A, 1)
A2 = ModeId(Location.PORT_A, 2)
B1 = ModeId(Location.PORT_B, 1)
B2 = ModeId(Location.PORT_B, 2)
PLUS1 = ModeId(Location.PORT_PLUS, 1)
PLUS2 = ModeId(Location.PORT_PLUS, 2)
MINUS1 = ModeId(Location.PORT_MINUS, 1)
MINUS2 = ModeId(Location.PORT_MINUS, 2)


@dataclass(frozen=True)
class StateVector:
    """Sparse pure state: occupation tuple -> complex amplitude.

    Instances are immutable by convention; every channel returns a new state
    and never touches its input, so states are freely shareable.
    """

    modes: Tuple[ModeId, ...]
    amplitudes: Dict[Tuple[int, ...], complex]

    def index_of(self, mode: ModeId) -> int:
        try:
            return self.modes.index(mode)
        except ValueError:
            raise RegistryError(f"mode {mode.label} is not in the registry") from None

    def has_mode(self, mode: ModeId) -> bool:
        return mode in self.modes

    def terms(self) -> Iterator[Tuple[Tuple[int, ...], complex]]:
        """Basis terms in deterministic (insertion) order."""
        return iter(self.amplitudes.items())

    def norm_sq(self) -> float:
        return sum(abs(a) ** 2 for a in self.amplitudes.values())

    def env_mode_count(self) -> int:
        return sum(1 for m in self.modes if m.is_env)

    def sector_indices(self, sector: str) -> Tuple[int, ...]:
        if sector == "signal":
            return tuple(i for i, m in enumerate(self.modes) if not m.is_env)
        if sector == "env":
            return tuple(i for i, m in enumerate(self.modes) if m.is_env)
        raise InvalidParameterError(f"sector must be 'signal' or 'env', got {sector!r}")

    def sector_total(self, occ: Tuple[int, ...], sector: str) -> int:
        return sum(occ[i] for i in self.sector_indices(sector))


def _make_state(modes, amplitudes) -> StateVector:
    """Assemble a state: prune tiny amplitudes, restore canonical mode order."""
    modes = list(modes)
    order = sorted(range(len(modes)), key=lambda i: _canonical_rank(modes[i]))
    if order != list(range(len(modes))):
        sorted_modes = tuple(modes[i] for i in order)
        amplitudes = {
            tuple(occ[i] for i in order): amp
            for occ, amp in amplitudes.items()
        }
    else:
        sorted_modes = tuple(modes)
    pruned = {occ: a for occ, a in amplitudes.items() if abs(a) >= PRUNE_THRESHOLD}
    return StateVector(sorted_modes, pruned)


def _check_n_photons(n: int) -> None:
    if not isinstance(n, int) or n < 1 or n > N_MAX:
        raise InvalidParameterError(
            f"photon number per branch must be an integer in [1, {N_MAX}], got {n!r}"
        )


def build_hom_input(n: int, phi: float) -> StateVector:
    """Two-branch 2n-photon input: either n photons of bin 1 ride the upper
    arm and n of bin 2 the lower arm, or the bins are swapped (with source
    phase ``phi`` on the swapped branch).

    The creation-operator normalization works out so that each branch carries
    occupation amplitude 1/sqrt(2).
    """
    _check_n_photons(n)
    amps = {
        (n, 0, 0, n): complex(1.0 / math.sqrt(2.0)),
        (0, n, n, 0): complex(math.cos(phi), math.sin(phi)) / math.sqrt(2.0),
    }
    return _make_state((U1, U2, L1, L2), amps)


def build_noon_input(n: int, phi: float) -> StateVector:
    """All-or-nothing frequency superposition (|n,0> + e^{i phi}|0,n>)/sqrt(2)
    over the two bins of a single source port."""
    _check_n_photons(n)
    amps = {
        (n, 0): complex(1.0 / math.sqrt(2.0)),
        (0, n): complex(math.cos(phi), math.sin(phi)) / math.sqrt(2.0),
    }
    return _make_state((A1, A2), amps)


def add_vacuum_mode(state: StateVector, mode: ModeId) -> StateVector:
    """Register an additional, unoccupied mode (e.g. the empty input port of
    a beam splitter)."""
    if mode.is_env:
        raise InvalidParameterError("environment modes are created by apply_loss only")
    if state.has_mode(mode):
        raise RegistryError(f"mode {mode.label} is already registered")
    modes = state.modes + (mode,)
    amps = {occ + (0,): a for occ, a in state.terms()}
    return _make_state(modes, amps)


def _check_channel_target(state: StateVector, mode: ModeId) -> int:
    idx = state.index_of(mode)
    if mode.is_env:
        raise InvalidParameterError(
            f"environment mode {mode.label} cannot re-enter a channel"
        )
    return idx


def apply_phase(state: StateVector, mode: ModeId, theta: float) -> StateVector:
    """Phase shifter: a basis term with n photons in ``mode`` picks up
    exp(i*n*theta)."""
    idx = _check_channel_target(state, mode)
    factor_cache = {}
    amps = {}
    for occ, amp in state.terms():
        n = occ[idx]
        if n not in factor_cache:
            factor_cache[n] = complex(math.cos(n * theta), math.sin(n * theta))
        amps[occ] = amp * factor_cache[n]
    return _make_state(state.modes, amps)


def apply_beam_splitter(
    state: StateVector,
    upper: ModeId,
    lower: ModeId,
    out_upper: Optional[ModeId] = None,
    out_lower: Optional[ModeId] = None,
) -> StateVector:
    """Balanced beam splitter on two same-bin modes.

    upper -> (out_upper - out_lower)/sqrt(2), lower -> (out_upper +
    out_lower)/sqrt(2); the expansion of (a_u^dag)^n (a_l^dag)^m is carried
    out exactly with bosonic sqrt(n!) factors.  Output modes default to the
    plus/minus ports of the shared bin.

    Frequency bins never mix here: their separation is far larger than the
    photon bandwidth, so cross-bin pairing is a usage error.
    """
    if upper == lower:
        raise InvalidParameterError("beam splitter needs two distinct modes")
    if upper.bin != lower.bin:
        raise InvalidPairingError(
            f"cannot mix modes from different frequency bins ({upper.label}, {lower.label})"
        )
    iu = _check_channel_target(state, upper)
    il = _check_channel_target(state, lower)
    if out_upper is None:
        out_upper = ModeId(Location.PORT_PLUS, upper.bin)
    if out_lower is None:
        out_lower = ModeId(Location.PORT_MINUS, upper.bin)
    if out_upper == out_lower:
        raise InvalidParameterError("beam splitter outputs must be distinct modes")
    for out in (out_upper, out_lower):
        if out.is_env:
            raise InvalidParameterError("beam splitter cannot emit into an environment mode")
        if out not in (upper, lower) and state.has_mode(out):
            raise RegistryError(f"output mode {out.label} is already registered")

    new_modes = list(state.modes)
    new_modes[iu] = out_upper
    new_modes[il] = out_lower

    amps: Dict[Tuple[int, ...], complex] = {}
    for occ, amp in state.terms():
        n, m = occ[iu], occ[il]
        scale = 0.5 ** (0.5 * (n + m)) / math.sqrt(factorial(n) * factorial(m))
        base = list(occ)
        for k in range(n + 1):
            sign = -1.0 if k % 2 else 1.0
            ck = comb(n, k)
            for j in range(m + 1):
                p = (n - k) + (m - j)
                q = k + j
                coeff = (
                    sign * ck * comb(m, j)
                    * math.sqrt(factorial(p) * factorial(q)) * scale
                )
                base[iu] = p
                base[il] = q
                key = tuple(base)
                amps[key] = amps.get(key, 0.0) + amp * coeff
    return _make_state(new_modes, amps)


def apply_loss(state: StateVector, mode: ModeId, eta: float) -> StateVector:
    """Loss channel of transmissivity ``eta``: couples ``mode`` to a fresh
    vacuum environment mode via a -> sqrt(eta) a + sqrt(1-eta) v.

    The environment mode is appended to the registry and is off limits for
    every later channel, which keeps the evolution trace preserving while the
    signal sector alone loses weight.
    """
    if not 0.0 <= eta <= 1.0:
        raise InvalidParameterError(f"transmissivity must be in [0, 1], got {eta}")
    idx = _check_channel_target(state, mode)
    env = ModeId(Location.ENV, mode.bin, env_index=state.env_mode_count())
    new_modes = state.modes + (env,)

    amps: Dict[Tuple[int, ...], complex] = {}
    for occ, amp in state.terms():
        n = occ[idx]
        base = list(occ) + [0]
        for k in range(n + 1):
            weight = comb(n, k) * eta ** (n - k) * (1.0 - eta) ** k
            if weight == 0.0:
                continue
            base[idx] = n - k
            base[-1] = k
            key = tuple(base)
            amps[key] = amps.get(key, 0.0) + amp * math.sqrt(weight)
    return _make_state(new_modes, amps)


def project_total_photon_number(
    state: StateVector, n: int, sector: str = "signal"
) -> Tuple[StateVector, float]:
    """Post-select on a total photon number in the signal or env sector.

    Returns the renormalized projected state together with the weight (the
    post-selection probability).  A weight below ``MIN_PROJECTION_WEIGHT``
    means the condition is unsatisfiable and raises.
    """
    if n < 0:
        raise InvalidParameterError("photon-number target must be non-negative")
    indices = state.sector_indices(sector)
    kept = {
        occ: amp
        for occ, amp in state.terms()
        if sum(occ[i] for i in indices) == n
    }
    weight = _clamp(sum(abs(a) ** 2 for a in kept.values()), 0.0, 1.0)
    if weight < MIN_PROJECTION_WEIGHT:
        raise EmptyProjectionError(
            f"projection onto {sector} photon number {n} annihilates the state"
        )
    root = math.sqrt(weight)
    amps = {occ: a / root for occ, a in kept.items()}
    return _make_state(state.modes, amps), weight


def drop_vacuum_modes(state: StateVector, modes) -> StateVector:
    """Remove registry modes that are unoccupied in every basis term."""
    drop = set()
    for mode in modes:
        idx = state.index_of(mode)
        if any(occ[idx] != 0 for occ, _ in state.terms()):
            raise InvalidParameterError(f"mode {mode.label} is occupied; cannot drop")
        drop.add(idx)
    keep = [i for i in range(len(state.modes)) if i not in drop]
    new_modes = tuple(state.modes[i] for i in keep)
    amps = {}
    for occ, amp in state.terms():
        key = tuple(occ[i] for i in keep)
        amps[key] = amps.get(key, 0.0) + amp
    return _make_state(new_modes, amps)


def _port_indices(state: StateVector) -> Dict[ModeId, int]:
    ports = (PLUS1, MINUS1, PLUS2, MINUS2)
    for m in state.modes:
        if not m.is_env and m not in ports:
            raise RegistryError(
                f"state is not on output ports: registry still contains {m.label}"
            )
    out = {}
    for p in ports:
        out[p] = state.index_of(p)
    return out


@dataclass(frozen=True)
class CountDistribution:
    """Joint distribution of (k, l) = photon counts in (minus1, minus2)."""

    entries: Dict[Tuple[int, int], float]

    def prob(self, k: int, l: int) -> float:
        return self.entries.get((k, l), 0.0)

    def total(self) -> float:
        return sum(self.entries.values())


def _clamp(value: float, lo: float, hi: float) -> float:
    # |amplitude|^2 sums can overshoot their mathematical bound by an ulp
    return lo if value < lo else hi if value > hi else value


def outcome_distribution(state: StateVector) -> CountDistribution:
    """P_{k,l}: probability of finding k bin-1 photons and l bin-2 photons in
    the minus output port.  Requires the state to live on the output ports."""
    ports = _port_indices(state)
    im1, im2 = ports[MINUS1], ports[MINUS2]
    entries: Dict[Tuple[int, int], float] = {}
    for occ, amp in state.terms():
        key = (occ[im1], occ[im2])
        entries[key] = entries.get(key, 0.0) + abs(amp) ** 2
    return CountDistribution({k: _clamp(p, 0.0, 1.0) for k, p in entries.items()})


def parity_expectation(state: StateVector, port: Location) -> float:
    """Expectation of (-1)^(photon count) at one output port."""
    if port not in (Location.PORT_PLUS, Location.PORT_MINUS):
        raise InvalidParameterError("parity is defined on the plus/minus output ports")
    ports = _port_indices(state)
    i1 = ports[PLUS1 if port is Location.PORT_PLUS else MINUS1]
    i2 = ports[PLUS2 if port is Location.PORT_PLUS else MINUS2]
    total = 0.0
    for occ, amp in state.terms():
        sign = -1.0 if (occ[i1] + occ[i2]) % 2 else 1.0
        total += sign * abs(amp) ** 2
    return _clamp(total, -1.0, 1.0)


def empty_port_probability(state: StateVector, port: Location) -> float:
    """Probability that the given output port contains zero photons (i.e.
    every photon exited through the opposite port)."""
    if port not in (Location.PORT_PLUS, Location.PORT_MINUS):
        raise InvalidParameterError("defined on the plus/minus output ports")
    ports = _port_indices(state)
    i1 = ports[PLUS1 if port is Location.PORT_PLUS else MINUS1]
    i2 = ports[PLUS2 if port is Location.PORT_PLUS else MINUS2]
    total = sum(
        abs(amp) ** 2 for occ, amp in state.terms() if occ[i1] == 0 and occ[i2] == 0
    )
    return _clamp(total, 0.0, 1.0)


def state_to_dict(state: StateVector) -> dict:
    """JSON-ready snapshot: mode labels plus terms sorted by occupation."""
    terms = [
        {"occ": list(occ), "re": amp.real, "im": amp.imag}
        for occ, amp in sorted(state.terms(), key=lambda t: t[0])
    ]
    return {"modes": [m.label for m in state.modes], "terms": terms}
