"""Parameter studies and the oracle-vs-closed-form verification harness.

The "oracle" models run the exact Fock pipeline (state construction, memory
phases, optional loss + post-selection, beam splitter, measurement); the
"analytic" models evaluate the closed forms in :mod:`homclock.models` at the
same parameters.  Sweep output ordering is deterministic (tau-major,
model-minor) so CSV artifacts are byte-stable.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import fock, models
from .errors import (
    CapabilityError,
    InvalidGridError,
    InvalidParameterError,
    NoZeroError,
)
from .fock import Location, StateVector
from .gravity import (
    ClockConfig,
    GravityConfig,
    collapse_time,
    delta_inverse_redshift,
    hom_phase,
    memory_phase,
)

ANALYTIC_PARITY = "analytic_parity"
ANALYTIC_ALL_SAME_PORT = "analytic_all_same_port"
ANALYTIC_MZ = "analytic_mz"
ORACLE_PARITY = "oracle_parity"
ORACLE_ALL_SAME_PORT = "oracle_all_same_port"
ORACLE_MZ = "oracle_mz"

ALL_MODELS = (
    ANALYTIC_PARITY,
    ANALYTIC_ALL_SAME_PORT,
    ANALYTIC_MZ,
    ORACLE_PARITY,
    ORACLE_ALL_SAME_PORT,
    ORACLE_MZ,
)
_ORACLE_MODELS = frozenset((ORACLE_PARITY, ORACLE_ALL_SAME_PORT, ORACLE_MZ))

VERIFY_THRESHOLD = 1e-9
WORKERS_ENV_VAR = "HOMCLOCK_WORKERS"


def linspace_grid(start: float, stop: float, count: int) -> Tuple[float, ...]:
    """Uniform grid with both endpoints, as plain floats."""
    if count < 2:
        raise InvalidParameterError("grid needs at least 2 points")
    if not stop > start:
        raise InvalidParameterError("grid stop must exceed start")
    step = (stop - start) / (count - 1)
    return tuple(start + i * step for i in range(count))


def log_grid(lo: float, hi: float, count: int) -> Tuple[float, ...]:
    """Log-spaced grid with both endpoints."""
    if count < 2:
        raise InvalidParameterError("grid needs at least 2 points")
    if not (lo > 0.0 and hi > lo):
        raise InvalidParameterError("log grid needs 0 < lo < hi")
    ratio = hi / lo
    return tuple(lo * ratio ** (i / (count - 1)) for i in range(count))


@dataclass(frozen=True)
class SweepSpec:
    """One interferogram request: geometry, clock, storage-time grid, models."""

    gravity: GravityConfig
    clock: ClockConfig
    tau_grid: Tuple[float, ...]
    model_names: Tuple[str, ...]
    loss_enabled: bool = False

    def validate(self) -> None:
        if len(self.tau_grid) < 2:
            raise InvalidParameterError("tau grid needs at least 2 points")
        if any(b <= a for a, b in zip(self.tau_grid, self.tau_grid[1:])):
            raise InvalidParameterError("tau grid must be strictly increasing")
        if not self.model_names:
            raise InvalidParameterError("at least one model must be requested")
        for name in self.model_names:
            if name not in ALL_MODELS:
                raise InvalidParameterError(
                    f"unknown model {name!r}; choose from {', '.join(ALL_MODELS)}"
                )
        if (
            any(name in _ORACLE_MODELS for name in self.model_names)
            and self.clock.n_photons > fock.N_MAX
        ):
            raise CapabilityError(
                f"oracle models support at most {fock.N_MAX} photons per branch, "
                f"got {self.clock.n_photons}"
            )


@dataclass(frozen=True)
class SweepRecord:
    tau: float
    model: str
    value: float
    phi_hom: float


@dataclass(frozen=True)
class HeatmapSpec:
    """Collapse-time map over (frequency separation, height), log-log."""

    delta_f_min: float = 1e9
    delta_f_max: float = 1e15
    delta_f_count: int = 200
    h_min: float = 1.0
    h_max: float = 1e4
    h_count: int = 200
    n_photons: int = 2
    gravity_g: float = GravityConfig().g
    markers: Tuple[Tuple[str, float, float], ...] = ()  # (name, delta_f, h)

    def validate(self) -> None:
        if not (self.delta_f_min > 0 and self.delta_f_max > self.delta_f_min):
            raise InvalidParameterError("need 0 < delta_f_min < delta_f_max")
        if not (self.h_min > 0 and self.h_max > self.h_min):
            raise InvalidParameterError("need 0 < h_min < h_max")
        if self.delta_f_count < 2 or self.h_count < 2:
            raise InvalidParameterError("heatmap needs at least 2x2 cells")
        if self.n_photons < 1:
            raise InvalidParameterError("photon number must be >= 1")


@dataclass(frozen=True)
class HeatmapCell:
    delta_f_hz: float
    height_m: float
    tau_ent_s: float
    marker: str = ""


def default_markers() -> Tuple[Tuple[str, float, float], ...]:
    """Named operating points: (label, frequency separation Hz, height m).

    (i) two spectral bins 10 GHz apart inside one rare-earth-doped memory at
    500 m; (ii)/(iii) Rb (780 nm) - Cs (894 nm) memory pairs at 75 m and
    20 m; (iv) a Pr:YSO (606 nm) - Rb pair at 3 m.
    """
    from .gravity import SPEED_OF_LIGHT as c

    rb = c / 780e-9
    cs = c / 894e-9
    pr = c / 606e-9
    return (
        ("i_single_memory_10GHz_500m", 1e10, 500.0),
        ("ii_Rb_Cs_75m", rb - cs, 75.0),
        ("iii_Rb_Cs_20m", rb - cs, 20.0),
        ("iv_PrYSO_Rb_3m", pr - rb, 3.0),
    )


@dataclass(frozen=True)
class SpectralLine:
    frequency: float
    magnitude: float


# --------------------------------------------------------------------------
# Exact pipelines
# --------------------------------------------------------------------------

def _clock_at(clock: ClockConfig, tau: float) -> ClockConfig:
    return replace(clock, tau_upper=tau, tau_lower=tau)


def _apply_memory_phases(state, gravity, clock):
    for mode, arm, bin_index in (
        (fock.U1, "U", 1),
        (fock.U2, "U", 2),
        (fock.L1, "L", 1),
        (fock.L2, "L", 2),
    ):
        if state.has_mode(mode):
            state = fock.apply_phase(state, mode, memory_phase(gravity, clock, arm, bin_index))
    return state


def _apply_arm_loss(state, clock, total_photons):
    """One loss channel per (arm, bin) mode, then post-select on no loss."""
    for mode, eta in (
        (fock.U1, clock.eta_upper),
        (fock.U2, clock.eta_upper),
        (fock.L1, clock.eta_lower),
        (fock.L2, clock.eta_lower),
    ):
        if state.has_mode(mode):
            state = fock.apply_loss(state, mode, eta)
    state, weight = fock.project_total_photon_number(state, total_photons, "signal")
    state = fock.drop_vacuum_modes(state, [m for m in state.modes if m.is_env])
    return state, weight


def hom_output_state(
    gravity: GravityConfig,
    clock: ClockConfig,
    loss_enabled: bool = False,
) -> Tuple[StateVector, float]:
    """Run the full storage interferometer: build the two-branch input,
    accumulate per-arm memory phases, optionally apply memory loss and
    post-select on all 2N photons, then interfere both bins on the beam
    splitter.  Returns (output state on the ports, post-selection weight)."""
    n = clock.n_photons
    state = fock.build_hom_input(n, clock.phi)
    state = _apply_memory_phases(state, gravity, clock)
    weight = 1.0
    if loss_enabled:
        state, weight = _apply_arm_loss(state, clock, 2 * n)
    state = fock.apply_beam_splitter(state, fock.U1, fock.L1)
    state = fock.apply_beam_splitter(state, fock.U2, fock.L2)
    return state, weight


def mz_output_state(
    gravity: GravityConfig,
    clock: ClockConfig,
    loss_enabled: bool = False,
) -> Tuple[StateVector, float]:
    """Run the Mach-Zehnder comparison: an all-or-nothing frequency
    superposition enters one port, is split binomially across the arms,
    stored, and recombined.  Returns (port state, post-selection weight)."""
    n = clock.n_photons
    state = fock.build_noon_input(n, clock.phi)
    state = fock.add_vacuum_mode(state, fock.B1)
    state = fock.add_vacuum_mode(state, fock.B2)
    state = fock.apply_beam_splitter(state, fock.A1, fock.B1, fock.U1, fock.L1)
    state = fock.apply_beam_splitter(state, fock.A2, fock.B2, fock.U2, fock.L2)
    state = _apply_memory_phases(state, gravity, clock)
    weight = 1.0
    if loss_enabled:
        state, weight = _apply_arm_loss(state, clock, n)
    state = fock.apply_beam_splitter(state, fock.U1, fock.L1)
    state = fock.apply_beam_splitter(state, fock.U2, fock.L2)
    return state, weight


PIPELINE_STAGES = ("input", "memory", "loss", "output")


def pipeline_stage_state(
    gravity: GravityConfig,
    clock: ClockConfig,
    stage: str = "output",
    loss_enabled: bool = False,
    pipeline: str = "hom",
) -> StateVector:
    """The state after a chosen pipeline stage, for inspection/serialization.

    Stages: ``input`` (source state), ``memory`` (after storage phases),
    ``loss`` (after loss channels and post-selection; requires loss_enabled),
    ``output`` (after the final beam splitter).
    """
    if stage not in PIPELINE_STAGES:
        raise InvalidParameterError(f"stage must be one of {PIPELINE_STAGES}, got {stage!r}")
    if stage == "loss" and not loss_enabled:
        raise InvalidParameterError("stage 'loss' requires the loss channels to be enabled")
    n = clock.n_photons
    if pipeline == "hom":
        state = fock.build_hom_input(n, clock.phi)
        total = 2 * n
    elif pipeline == "mz":
        state = fock.build_noon_input(n, clock.phi)
        total = n
    else:
        raise InvalidParameterError(f"pipeline must be 'hom' or 'mz', got {pipeline!r}")
    if stage == "input":
        return state
    if pipeline == "mz":
        state = fock.add_vacuum_mode(state, fock.B1)
        state = fock.add_vacuum_mode(state, fock.B2)
        state = fock.apply_beam_splitter(state, fock.A1, fock.B1, fock.U1, fock.L1)
        state = fock.apply_beam_splitter(state, fock.A2, fock.B2, fock.U2, fock.L2)
    state = _apply_memory_phases(state, gravity, clock)
    if stage == "memory":
        return state
    if loss_enabled:
        state, _ = _apply_arm_loss(state, clock, total)
    if stage == "loss":
        return state
    state = fock.apply_beam_splitter(state, fock.U1, fock.L1)
    state = fock.apply_beam_splitter(state, fock.U2, fock.L2)
    return state


def _evaluate_models(spec: SweepSpec, tau: float) -> List[SweepRecord]:
    gravity, clock = spec.gravity, _clock_at(spec.clock, tau)
    phi = hom_phase(gravity, clock)
    delta = delta_inverse_redshift(gravity)

    hom_state = None
    mz_state = None
    records = []
    for name in spec.model_names:
        if name == ANALYTIC_PARITY:
            value = models.parity_signal(phi)
        elif name == ANALYTIC_ALL_SAME_PORT:
            value = models.p_all_same_port(clock.n_photons, phi)
        elif name == ANALYTIC_MZ:
            value = models.mz_coherence(clock.omega1, clock.omega2, delta, tau)
        elif name == ORACLE_PARITY or name == ORACLE_ALL_SAME_PORT:
            if hom_state is None:
                hom_state, _ = hom_output_state(gravity, clock, spec.loss_enabled)
            if name == ORACLE_PARITY:
                value = fock.parity_expectation(hom_state, Location.PORT_PLUS)
            else:
                value = fock.outcome_distribution(hom_state).prob(0, 0)
        else:  # ORACLE_MZ
            if mz_state is None:
                mz_state, _ = mz_output_state(gravity, clock, spec.loss_enabled)
            value = fock.empty_port_probability(mz_state, Location.PORT_PLUS)
        records.append(SweepRecord(tau=tau, model=name, value=value, phi_hom=phi))
    return records


def _worker_count(workers: Optional[int]) -> int:
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV_VAR, "1"))
    if workers < 1:
        raise InvalidParameterError("worker count must be >= 1")
    return workers


def interferogram(spec: SweepSpec, workers: Optional[int] = None) -> List[SweepRecord]:
    """Evaluate every requested model at every grid point.

    Grid points are independent, so they may be fanned out over a process
    pool (``workers`` argument or the HOMCLOCK_WORKERS environment variable);
    results are identical and identically ordered either way.
    """
    spec.validate()
    workers = _worker_count(workers)
    if workers == 1 or len(spec.tau_grid) < 4:
        per_tau = [_evaluate_models(spec, tau) for tau in spec.tau_grid]
    else:
        chunk = max(1, len(spec.tau_grid) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_tau = list(
                pool.map(_evaluate_models, [spec] * len(spec.tau_grid), spec.tau_grid,
                         chunksize=chunk)
            )
    return [record for group in per_tau for record in group]


# --------------------------------------------------------------------------
# Collapse-time studies
# --------------------------------------------------------------------------

def _tau_ent(g: float, delta_f: float, h: float, n: int) -> float:
    cfg = GravityConfig(g=g, h_upper=h, h_lower=0.0)
    # Any bin pair with the requested separation gives the same collapse time.
    clock = ClockConfig(omega1=2.0 * math.pi * 1e14,
                        omega2=2.0 * math.pi * (1e14 + delta_f),
                        n_photons=n)
    return collapse_time(cfg, clock)


def collapse_heatmap(spec: HeatmapSpec) -> List[HeatmapCell]:
    """Collapse time over a log-log (delta_f, h) grid, delta_f-major; named
    marker configurations are appended after the grid."""
    spec.validate()
    cells = []
    for delta_f in log_grid(spec.delta_f_min, spec.delta_f_max, spec.delta_f_count):
        for h in log_grid(spec.h_min, spec.h_max, spec.h_count):
            cells.append(HeatmapCell(delta_f, h, _tau_ent(spec.gravity_g, delta_f, h, spec.n_photons)))
    for name, delta_f, h in spec.markers:
        cells.append(HeatmapCell(delta_f, h, _tau_ent(spec.gravity_g, delta_f, h, spec.n_photons), name))
    return cells


def first_zero(gravity: GravityConfig, clock: ClockConfig, model: str = ANALYTIC_PARITY) -> float:
    """Bisect the parity signal to its first zero in storage time.

    Requires zero source phase (so the signal starts at +1) and a
    non-degenerate geometry; the bracket is [0, 2 * estimated collapse time].
    """
    if model not in (ANALYTIC_PARITY, ORACLE_PARITY):
        raise InvalidParameterError("first_zero supports analytic_parity or oracle_parity")
    if clock.phi != 0.0:
        raise InvalidParameterError("first_zero requires zero source phase")
    if model == ORACLE_PARITY and clock.n_photons > fock.N_MAX:
        raise CapabilityError(
            f"oracle models support at most {fock.N_MAX} photons per branch"
        )
    if delta_inverse_redshift(gravity) == 0.0 or clock.omega_minus == 0.0:
        raise NoZeroError("flat spacetime: the signal never crosses zero")
    estimate = collapse_time(gravity, clock)

    if model == ANALYTIC_PARITY:
        def signal(tau: float) -> float:
            return models.parity_signal(hom_phase(gravity, _clock_at(clock, tau)))
    else:
        def signal(tau: float) -> float:
            state, _ = hom_output_state(gravity, _clock_at(clock, tau))
            return fock.parity_expectation(state, Location.PORT_PLUS)

    lo, hi = 0.0, 2.0 * estimate
    f_lo, f_hi = signal(lo), signal(hi)
    if f_lo == 0.0:
        return lo
    if f_lo * f_hi > 0.0:
        raise NoZeroError("no sign change in [0, 2 * estimate]")
    while hi - lo > 1e-12 * estimate:
        mid = 0.5 * (lo + hi)
        f_mid = signal(mid)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


# --------------------------------------------------------------------------
# Spectral diagnostics
# --------------------------------------------------------------------------

def spectral_components(records: Sequence[SweepRecord]) -> List[SpectralLine]:
    """Magnitude spectrum of a single-model sweep over a uniform tau grid.

    The mean is subtracted before the transform; lines are returned sorted by
    magnitude (descending), frequencies in cycles per second of storage time.
    """
    if not records:
        raise InvalidParameterError("no records supplied")
    model_names = {r.model for r in records}
    if len(model_names) != 1:
        raise InvalidParameterError("records must come from exactly one model")
    taus = np.array([r.tau for r in records], dtype=float)
    values = np.array([r.value for r in records], dtype=float)
    if len(taus) < 256:
        raise InvalidGridError("spectral analysis needs at least 256 grid points")
    steps = np.diff(taus)
    dt = steps.mean()
    if dt <= 0.0 or np.max(np.abs(steps - dt)) > 1e-9 * (taus[-1] - taus[0]):
        raise InvalidGridError("spectral analysis needs a uniform, increasing tau grid")

    spectrum = np.fft.rfft(values - values.mean())
    freqs = np.fft.rfftfreq(len(values), d=dt)
    magnitudes = 2.0 * np.abs(spectrum) / len(values)
    lines = [
        SpectralLine(frequency=float(freqs[i]), magnitude=float(magnitudes[i]))
        for i in range(1, len(freqs))
    ]
    lines.sort(key=lambda line: (-line.magnitude, line.frequency))
    return lines


# --------------------------------------------------------------------------
# Verification harness
# --------------------------------------------------------------------------

def phase_sequence(count: int, seed: int = 12345) -> List[float]:
    """Reproducible pseudo-random phases in [0, 2*pi).

    Drawn from the 32-bit linear congruential generator
    x -> (1664525 * x + 1013904223) mod 2^32, phase = 2*pi * x / 2^32,
    so reports are bit-stable across platforms and languages.
    """
    x = seed & 0xFFFFFFFF
    phases = []
    for _ in range(count):
        x = (1664525 * x + 1013904223) & 0xFFFFFFFF
        phases.append(2.0 * math.pi * x / 2.0**32)
    return phases


EXPECTED_INCONSISTENT = "expected-inconsistent"


@dataclass(frozen=True)
class VerifyCase:
    quantity: str
    analytic: float
    oracle: float
    n_photons: Optional[int] = None
    phi_hom: Optional[float] = None
    tau: Optional[float] = None
    eta: Optional[float] = None
    flag: str = ""

    @property
    def abs_delta(self) -> float:
        return abs(self.analytic - self.oracle)

    def to_dict(self) -> dict:
        out = {"quantity": self.quantity}
        if self.n_photons is not None:
            out["n"] = self.n_photons
        if self.phi_hom is not None:
            out["phi_hom"] = self.phi_hom
        if self.tau is not None:
            out["tau"] = self.tau
        if self.eta is not None:
            out["eta"] = self.eta
        out.update(analytic=self.analytic, oracle=self.oracle, abs_delta=self.abs_delta)
        if self.flag:
            out["flag"] = self.flag
        return out


@dataclass(frozen=True)
class VerifyReport:
    suite: str
    threshold: float
    max_delta: float
    verdict: str
    cases: Tuple[VerifyCase, ...]

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "threshold": self.threshold,
            "max_delta": self.max_delta,
            "verdict": self.verdict,
            "cases": [case.to_dict() for case in self.cases],
        }


def _rb_cs_clock(n: int, phi: float = 0.0) -> ClockConfig:
    from .gravity import wavelength_to_angular

    return ClockConfig(
        omega1=wavelength_to_angular(894e-9),
        omega2=wavelength_to_angular(780e-9),
        n_photons=n,
        phi=phi,
    )


def _verify_closed_forms(n: int, phi: float, cases: List[VerifyCase]) -> None:
    # At zero storage the source phase IS the interference phase, so the
    # pipeline probes the closed forms directly at phi_hom = phi.
    state = fock.build_hom_input(n, phi)
    state = fock.apply_beam_splitter(state, fock.U1, fock.L1)
    state = fock.apply_beam_splitter(state, fock.U2, fock.L2)
    dist = fock.outcome_distribution(state)
    for k in range(n + 1):
        for l in range(n + 1):
            cases.append(VerifyCase(
                quantity=f"p[{k},{l}]",
                analytic=models.p_kl(n, k, l, phi),
                oracle=dist.prob(k, l),
                n_photons=n, phi_hom=phi,
            ))
    parity_plus = fock.parity_expectation(state, Location.PORT_PLUS)
    parity_minus = fock.parity_expectation(state, Location.PORT_MINUS)
    cases.append(VerifyCase(
        quantity="parity",
        analytic=models.parity_signal(phi), oracle=parity_plus,
        n_photons=n, phi_hom=phi,
    ))
    cases.append(VerifyCase(
        quantity="parity_port_equality",
        analytic=parity_minus, oracle=parity_plus,
        n_photons=n, phi_hom=phi,
    ))
    even = sum(
        dist.prob(k, l)
        for k in range(n + 1) for l in range(n + 1)
        if (k + l) % 2 == 0
    )
    cases.append(VerifyCase(
        quantity="even_count_probability",
        analytic=models.even_odd_probabilities(phi)[0], oracle=even,
        n_photons=n, phi_hom=phi,
    ))
    cases.append(VerifyCase(
        quantity="p_all_same_port",
        analytic=models.p_all_same_port(n, phi, models.CONSISTENT),
        oracle=dist.prob(0, 0),
        n_photons=n, phi_hom=phi,
    ))
    # Audit row: the unnormalized closed form disagrees with the exact result
    # by the factor n!^2/2 and is recorded without affecting the verdict.
    cases.append(VerifyCase(
        quantity="p_all_same_port_unnormalized",
        analytic=models.p_all_same_port(n, phi, models.UNNORMALIZED),
        oracle=dist.prob(0, 0),
        n_photons=n, phi_hom=phi,
        flag=EXPECTED_INCONSISTENT,
    ))


def _verify_loss(n: int, phi: float, eta: float, cases: List[VerifyCase]) -> None:
    clock = replace(_rb_cs_clock(n, phi), eta_upper=eta, eta_lower=eta)
    gravity = GravityConfig(h_upper=20.0, h_lower=0.0)
    clock = _clock_at(clock, 0.37)  # generic storage time
    state, weight = hom_output_state(gravity, clock, loss_enabled=True)
    cases.append(VerifyCase(
        quantity="loss_postselect_weight",
        analytic=models.loss_survival(eta, eta, n), oracle=weight,
        n_photons=n, eta=eta,
    ))
    lossless, _ = hom_output_state(gravity, clock, loss_enabled=False)
    cases.append(VerifyCase(
        quantity="postselected_parity",
        analytic=fock.parity_expectation(lossless, Location.PORT_PLUS),
        oracle=fock.parity_expectation(state, Location.PORT_PLUS),
        n_photons=n, eta=eta,
    ))


def _verify_gravity_sweep(n: int, cases: List[VerifyCase]) -> None:
    gravity = GravityConfig(h_upper=20.0, h_lower=0.0)
    clock = _rb_cs_clock(n)
    t_ent = collapse_time(gravity, clock)
    for tau in (0.25 * t_ent, 0.9 * t_ent, 1.7 * t_ent):
        at = _clock_at(clock, tau)
        state, _ = hom_output_state(gravity, at)
        cases.append(VerifyCase(
            quantity="parity_interferogram",
            analytic=models.parity_signal(hom_phase(gravity, at)),
            oracle=fock.parity_expectation(state, Location.PORT_PLUS),
            n_photons=n, tau=tau,
        ))


def _verify_mz(cases: List[VerifyCase]) -> None:
    gravity = GravityConfig(h_upper=20.0, h_lower=0.0)
    clock = _rb_cs_clock(1)
    delta = delta_inverse_redshift(gravity)
    span = 4.0 * math.pi / (abs(clock.omega_minus) * abs(delta))
    worst = None
    for tau in linspace_grid(0.0, span, 256):
        at = _clock_at(clock, tau)
        state, _ = mz_output_state(gravity, at)
        oracle = fock.empty_port_probability(state, Location.PORT_PLUS)
        analytic = (1.0 + models.mz_coherence(clock.omega1, clock.omega2, delta, tau)) / 2.0
        case = VerifyCase(
            quantity="mz_minus_port_probability",
            analytic=analytic, oracle=oracle, n_photons=1, tau=tau,
        )
        if worst is None or case.abs_delta > worst.abs_delta:
            worst = case
    cases.append(worst)


def verify(suite: str = "quick") -> VerifyReport:
    """Hold every closed form against the exact engine.

    quick: photon numbers 1..3, 5 phases, lossless.
    full:  photon numbers 1..5, 20 phases, loss sweeps, gravity-phase
           interferogram rows, and the Mach-Zehnder cross-check.
    """
    if suite == "quick":
        n_values, phase_count, with_extras = (1, 2, 3), 5, False
    elif suite == "full":
        n_values, phase_count, with_extras = (1, 2, 3, 4, 5), 20, True
    else:
        raise InvalidParameterError(f"suite must be 'quick' or 'full', got {suite!r}")

    phases = phase_sequence(phase_count)
    cases: List[VerifyCase] = []
    for n in n_values:
        for phi in phases:
            _verify_closed_forms(n, phi, cases)
    if with_extras:
        for n in n_values:
            for eta in (1.0, 0.9, 0.5):
                _verify_loss(n, phases[0], eta, cases)
        for n in (1, 2, 3):
            _verify_gravity_sweep(n, cases)
        _verify_mz(cases)

    max_delta = max(
        (case.abs_delta for case in cases if case.flag != EXPECTED_INCONSISTENT),
        default=0.0,
    )
    verdict = "pass" if max_delta < VERIFY_THRESHOLD else "fail"
    return VerifyReport(
        suite=suite,
        threshold=VERIFY_THRESHOLD,
        max_delta=max_delta,
        verdict=verdict,
        cases=tuple(cases),
    )
