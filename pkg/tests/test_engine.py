"""Sweeps, root finding, spectra, and the verification harness."""

import math
from dataclasses import replace

import pytest

from homclock import engine, fock, models
from homclock.engine import (
    ANALYTIC_ALL_SAME_PORT,
    ANALYTIC_MZ,
    ANALYTIC_PARITY,
    ORACLE_ALL_SAME_PORT,
    ORACLE_MZ,
    ORACLE_PARITY,
    HeatmapSpec,
    SweepSpec,
    collapse_heatmap,
    default_markers,
    first_zero,
    hom_output_state,
    interferogram,
    linspace_grid,
    log_grid,
    mz_output_state,
    phase_sequence,
    pipeline_stage_state,
    spectral_components,
    verify,
)
from homclock.errors import (
    CapabilityError,
    InvalidGridError,
    InvalidParameterError,
    NoZeroError,
)
from homclock.fock import Location
from homclock.gravity import (
    ClockConfig,
    GravityConfig,
    collapse_time,
    delta_inverse_redshift,
    hom_phase,
    wavelength_to_angular,
)

RB = wavelength_to_angular(780e-9)
CS = wavelength_to_angular(894e-9)


def rb_cs_clock(n=2, phi=0.0, **kw):
    return ClockConfig(omega1=CS, omega2=RB, n_photons=n, phi=phi, **kw)


def gravity_20m():
    return GravityConfig(h_upper=20.0, h_lower=0.0)


class TestSweepSpecValidation:
    def test_decreasing_grid_rejected(self):
        spec = SweepSpec(gravity_20m(), rb_cs_clock(), (0.0, 2.0, 1.0), (ANALYTIC_PARITY,))
        with pytest.raises(InvalidParameterError):
            spec.validate()

    def test_short_grid_rejected(self):
        spec = SweepSpec(gravity_20m(), rb_cs_clock(), (0.0,), (ANALYTIC_PARITY,))
        with pytest.raises(InvalidParameterError):
            spec.validate()

    def test_unknown_model_rejected(self):
        spec = SweepSpec(gravity_20m(), rb_cs_clock(), (0.0, 1.0), ("nope",))
        with pytest.raises(InvalidParameterError):
            spec.validate()

    def test_oracle_photon_cap(self):
        clock = rb_cs_clock(n=9)
        spec = SweepSpec(gravity_20m(), clock, (0.0, 1.0), (ORACLE_PARITY,))
        with pytest.raises(CapabilityError):
            spec.validate()
        # the closed forms have no such cap
        SweepSpec(gravity_20m(), clock, (0.0, 1.0), (ANALYTIC_PARITY,)).validate()

    def test_grid_builders(self):
        with pytest.raises(InvalidParameterError):
            linspace_grid(0.0, 1.0, 1)
        with pytest.raises(InvalidParameterError):
            log_grid(0.0, 1.0, 4)
        assert len(log_grid(1.0, 100.0, 3)) == 3


class TestInterferogram:
    def test_flat_baseline_constant(self):
        spec = SweepSpec(
            GravityConfig(h_upper=10.0, h_lower=10.0),
            rb_cs_clock(phi=0.6),
            linspace_grid(0.0, 100.0, 16),
            (ANALYTIC_PARITY,),
        )
        records = interferogram(spec)
        for r in records:
            assert r.value == math.cos(0.6)
            assert r.phi_hom == 0.6

    def test_record_ordering_tau_major_model_minor(self):
        spec = SweepSpec(
            gravity_20m(), rb_cs_clock(), linspace_grid(0.0, 1.0, 3),
            (ANALYTIC_PARITY, ANALYTIC_MZ),
        )
        records = interferogram(spec)
        assert [(r.tau, r.model) for r in records] == [
            (0.0, ANALYTIC_PARITY), (0.0, ANALYTIC_MZ),
            (0.5, ANALYTIC_PARITY), (0.5, ANALYTIC_MZ),
            (1.0, ANALYTIC_PARITY), (1.0, ANALYTIC_MZ),
        ]

    def test_oracle_matches_analytic_parity(self):
        clock = rb_cs_clock(n=2)
        t_ent = collapse_time(gravity_20m(), clock)
        spec = SweepSpec(
            gravity_20m(), clock, linspace_grid(0.0, 2.5 * t_ent, 64),
            (ANALYTIC_PARITY, ORACLE_PARITY),
        )
        records = interferogram(spec)
        by_model = {}
        for r in records:
            by_model.setdefault(r.model, []).append(r.value)
        for a, o in zip(by_model[ANALYTIC_PARITY], by_model[ORACLE_PARITY]):
            assert abs(a - o) < 1e-10

    def test_oracle_all_same_port_matches_closed_form(self):
        clock = rb_cs_clock(n=2)
        t_ent = collapse_time(gravity_20m(), clock)
        spec = SweepSpec(
            gravity_20m(), clock, linspace_grid(0.0, 2.0 * t_ent, 16),
            (ANALYTIC_ALL_SAME_PORT, ORACLE_ALL_SAME_PORT),
        )
        records = interferogram(spec)
        values = {}
        for r in records:
            values.setdefault(r.tau, {})[r.model] = r.value
        for per_tau in values.values():
            assert abs(per_tau[ANALYTIC_ALL_SAME_PORT] - per_tau[ORACLE_ALL_SAME_PORT]) < 1e-10

    def test_first_zero_bracketed_by_grid(self):
        clock = rb_cs_clock(n=2)
        t_ent = collapse_time(gravity_20m(), clock)
        spec = SweepSpec(
            gravity_20m(), clock, linspace_grid(0.0, 2.0 * t_ent, 128),
            (ANALYTIC_PARITY,),
        )
        values = [(r.tau, r.value) for r in interferogram(spec)]
        brackets = [
            (a[0], b[0]) for a, b in zip(values, values[1:]) if a[1] > 0.0 >= b[1]
        ]
        assert len(brackets) == 1
        lo, hi = brackets[0]
        assert lo < t_ent <= hi

    def test_parallel_equals_serial(self):
        clock = rb_cs_clock(n=2)
        t_ent = collapse_time(gravity_20m(), clock)
        spec = SweepSpec(
            gravity_20m(), clock, linspace_grid(0.0, t_ent, 12),
            (ANALYTIC_PARITY, ORACLE_PARITY), loss_enabled=True,
        )
        assert interferogram(spec, workers=1) == interferogram(spec, workers=2)

    def test_worker_count_from_environment(self, monkeypatch):
        clock = rb_cs_clock(n=1)
        spec = SweepSpec(
            gravity_20m(), clock, linspace_grid(0.0, 1.0, 8), (ORACLE_PARITY,)
        )
        serial = interferogram(spec)
        monkeypatch.setenv(engine.WORKERS_ENV_VAR, "2")
        assert interferogram(spec) == serial
        monkeypatch.setenv(engine.WORKERS_ENV_VAR, "0")
        with pytest.raises(InvalidParameterError):
            interferogram(spec)

    def test_deterministic(self):
        spec = SweepSpec(
            gravity_20m(), rb_cs_clock(), linspace_grid(0.0, 3.0, 9), (ORACLE_PARITY,)
        )
        assert interferogram(spec) == interferogram(spec)

    def test_values_respect_model_codomains(self):
        clock = rb_cs_clock(n=2)
        t_ent = collapse_time(gravity_20m(), clock)
        spec = SweepSpec(
            gravity_20m(), clock, linspace_grid(0.0, 3.0 * t_ent, 40),
            (ANALYTIC_PARITY, ANALYTIC_ALL_SAME_PORT, ANALYTIC_MZ,
             ORACLE_PARITY, ORACLE_ALL_SAME_PORT, ORACLE_MZ),
        )
        for r in interferogram(spec):
            if "all_same_port" in r.model or r.model == ORACLE_MZ:
                assert 0.0 <= r.value <= 1.0
            else:
                assert -1.0 <= r.value <= 1.0

    def test_periodicity(self):
        clock = rb_cs_clock(n=2)
        gravity = gravity_20m()
        period = 2.0 * math.pi / (
            clock.n_photons * abs(clock.omega_minus * delta_inverse_redshift(gravity))
        )
        grid = linspace_grid(0.1, 3.0, 7)
        base = interferogram(SweepSpec(gravity, clock, grid, (ANALYTIC_PARITY,)))
        shifted = interferogram(SweepSpec(
            gravity, clock, tuple(t + period for t in grid), (ANALYTIC_PARITY,)
        ))
        for a, b in zip(base, shifted):
            assert abs(a.value - b.value) < 1e-9


class TestLossPipeline:
    def test_weight_and_postselected_parity(self):
        clock = rb_cs_clock(n=2, eta_upper=0.9, eta_lower=0.9, tau_upper=0.4, tau_lower=0.4)
        state, weight = hom_output_state(gravity_20m(), clock, loss_enabled=True)
        assert abs(weight - 0.6561) < 1e-12
        clean, w1 = hom_output_state(gravity_20m(), clock, loss_enabled=False)
        assert w1 == 1.0
        assert abs(
            fock.parity_expectation(state, Location.PORT_PLUS)
            - fock.parity_expectation(clean, Location.PORT_PLUS)
        ) < 1e-10

    def test_asymmetric_weight_matches_survival_model(self):
        clock = rb_cs_clock(n=3, eta_upper=0.8, eta_lower=0.95, tau_upper=0.2, tau_lower=0.2)
        _, weight = hom_output_state(gravity_20m(), clock, loss_enabled=True)
        assert abs(weight - models.loss_survival(0.8, 0.95, 3)) < 1e-12


class TestHeatmap:
    def test_marker_values(self):
        spec = HeatmapSpec(delta_f_count=2, h_count=2, markers=default_markers())
        cells = collapse_heatmap(spec)
        by_name = {c.marker: c for c in cells if c.marker}
        assert abs(by_name["i_single_memory_10GHz_500m"].tau_ent_s - 229.1) / 229.1 < 0.005
        assert abs(by_name["iii_Rb_Cs_20m"].tau_ent_s - 1.169) / 1.169 < 0.005

    def test_monotone_decreasing_both_axes(self):
        spec = HeatmapSpec(delta_f_count=12, h_count=12)
        cells = [c for c in collapse_heatmap(spec) if not c.marker]
        rows = {}
        for c in cells:
            rows.setdefault(c.delta_f_hz, []).append((c.height_m, c.tau_ent_s))
        # fixed delta_f: strictly decreasing in h
        for row in rows.values():
            taus = [t for _, t in sorted(row)]
            assert all(a > b for a, b in zip(taus, taus[1:]))
        # fixed h: strictly decreasing in delta_f
        cols = {}
        for c in cells:
            cols.setdefault(c.height_m, []).append((c.delta_f_hz, c.tau_ent_s))
        for col in cols.values():
            taus = [t for _, t in sorted(col)]
            assert all(a > b for a, b in zip(taus, taus[1:]))

    def test_doubling_height_halves_collapse_time(self):
        spec = HeatmapSpec(delta_f_min=1e10, delta_f_max=1e12, delta_f_count=2,
                           h_min=5.0, h_max=10.0, h_count=2)
        cells = [c for c in collapse_heatmap(spec) if not c.marker]
        per_df = {}
        for c in cells:
            per_df.setdefault(c.delta_f_hz, {})[c.height_m] = c.tau_ent_s
        for mapping in per_df.values():
            ratio = mapping[10.0] / mapping[5.0]
            assert abs(ratio - 0.5) < 1e-9

    def test_validation(self):
        with pytest.raises(InvalidParameterError):
            collapse_heatmap(HeatmapSpec(delta_f_min=-1.0))
        with pytest.raises(InvalidParameterError):
            collapse_heatmap(HeatmapSpec(h_count=1))


class TestFirstZero:
    def test_analytic_matches_collapse_time(self):
        clock = rb_cs_clock(n=2)
        tau = first_zero(gravity_20m(), clock, ANALYTIC_PARITY)
        t_ent = collapse_time(gravity_20m(), clock)
        assert abs(tau - t_ent) / t_ent < 1e-9

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_oracle_matches_collapse_time(self, n):
        clock = rb_cs_clock(n=n)
        tau = first_zero(gravity_20m(), clock, ORACLE_PARITY)
        t_ent = collapse_time(gravity_20m(), clock)
        assert abs(tau - t_ent) / t_ent < 1e-6

    def test_flat_geometry_has_no_zero(self):
        with pytest.raises(NoZeroError):
            first_zero(GravityConfig(h_upper=1.0, h_lower=1.0), rb_cs_clock())

    def test_nonzero_source_phase_rejected(self):
        with pytest.raises(InvalidParameterError):
            first_zero(gravity_20m(), rb_cs_clock(phi=0.3))


class TestSpectralComponents:
    def test_parity_single_line(self):
        clock = rb_cs_clock(n=1)
        gravity = gravity_20m()
        f_signal = abs(clock.omega_minus * delta_inverse_redshift(gravity)) / (2.0 * math.pi)
        span = 6.0 / f_signal
        n = 512
        grid = tuple(i * span / n for i in range(n))
        lines = spectral_components(
            interferogram(SweepSpec(gravity, clock, grid, (ANALYTIC_PARITY,)))
        )
        bin_width = 1.0 / span
        assert abs(lines[0].frequency - f_signal) <= bin_width

    def test_mz_product_cosine_lines(self):
        # both lines sit at |omega_plus +- omega_minus| * delta / (4 pi),
        # i.e. at the individual bin frequencies times the differential
        clock = rb_cs_clock(n=1)
        gravity = gravity_20m()
        delta = abs(delta_inverse_redshift(gravity))
        f1 = clock.omega1 * delta / (2.0 * math.pi)
        f2 = clock.omega2 * delta / (2.0 * math.pi)
        span = 130.0 / f1  # integer cycle counts for both Rb/Cs lines
        n = 1024
        grid = tuple(i * span / n for i in range(n))
        lines = spectral_components(
            interferogram(SweepSpec(gravity, clock, grid, (ANALYTIC_MZ,)))
        )
        got = sorted(line.frequency for line in lines[:2])
        bin_width = 1.0 / span
        assert abs(got[0] - f1) <= bin_width
        assert abs(got[1] - f2) <= bin_width

    def test_uniformity_required(self):
        clock = rb_cs_clock()
        grid = list(linspace_grid(0.0, 1.0, 300))
        grid[150] += 1e-3
        records = interferogram(SweepSpec(gravity_20m(), clock, tuple(grid), (ANALYTIC_PARITY,)))
        with pytest.raises(InvalidGridError):
            spectral_components(records)

    def test_minimum_points(self):
        records = interferogram(SweepSpec(
            gravity_20m(), rb_cs_clock(), linspace_grid(0.0, 1.0, 128), (ANALYTIC_PARITY,)
        ))
        with pytest.raises(InvalidGridError):
            spectral_components(records)

    def test_single_model_required(self):
        records = interferogram(SweepSpec(
            gravity_20m(), rb_cs_clock(), linspace_grid(0.0, 1.0, 300),
            (ANALYTIC_PARITY, ANALYTIC_MZ),
        ))
        with pytest.raises(InvalidParameterError):
            spectral_components(records)


class TestVerify:
    def test_quick_suite_passes(self):
        report = verify("quick")
        assert report.passed
        assert report.max_delta < 1e-10
        assert len(report.cases) > 100

    def test_full_suite_passes_with_audit_rows(self):
        report = verify("full")
        assert report.passed
        assert report.max_delta < 1e-10
        audit = [c for c in report.cases if c.flag == engine.EXPECTED_INCONSISTENT]
        assert audit, "audit rows must be present"
        # the audit rows disagree wildly yet do not fail the verdict
        assert max(c.abs_delta for c in audit) > 1e-3
        weight_rows = [
            c for c in report.cases
            if c.quantity == "loss_postselect_weight" and c.eta == 0.9 and c.n_photons == 2
        ]
        assert weight_rows and abs(weight_rows[0].oracle - 0.6561) < 1e-12

    def test_unknown_suite(self):
        with pytest.raises(InvalidParameterError):
            verify("exhaustive")

    def test_report_round_trips_to_dict(self):
        report = verify("quick")
        payload = report.to_dict()
        assert payload["suite"] == "quick"
        assert payload["verdict"] == "pass"
        assert len(payload["cases"]) == len(report.cases)
        flagged = [c for c in payload["cases"] if c.get("flag")]
        assert all(c["flag"] == engine.EXPECTED_INCONSISTENT for c in flagged)

    def test_phase_sequence_reproducible(self):
        first = phase_sequence(5)
        assert first == phase_sequence(5)
        assert first[0] == pytest.approx(0.12819385526291546, abs=0.0)
        assert all(0.0 <= p < 2.0 * math.pi for p in phase_sequence(50))
        assert phase_sequence(3, seed=99) != phase_sequence(3)


class TestPipelineStages:
    def test_stage_progression(self):
        clock = rb_cs_clock(n=1, tau_upper=0.5, tau_lower=0.5)
        source = pipeline_stage_state(gravity_20m(), clock, "input")
        assert [m.label for m in source.modes] == ["U1", "U2", "L1", "L2"]
        out = pipeline_stage_state(gravity_20m(), clock, "output")
        assert [m.label for m in out.modes] == ["plus1", "minus1", "plus2", "minus2"]

    def test_loss_stage_requires_loss(self):
        with pytest.raises(InvalidParameterError):
            pipeline_stage_state(gravity_20m(), rb_cs_clock(), "loss", loss_enabled=False)

    def test_mz_pipeline_output(self):
        clock = rb_cs_clock(n=1)
        out = pipeline_stage_state(gravity_20m(), clock, "output", pipeline="mz")
        assert [m.label for m in out.modes] == ["plus1", "minus1", "plus2", "minus2"]
        assert abs(out.norm_sq() - 1.0) < 1e-12

    def test_unknown_stage(self):
        with pytest.raises(InvalidParameterError):
            pipeline_stage_state(gravity_20m(), rb_cs_clock(), "detector")


class TestMzOracle:
    def test_single_photon_port_probability(self):
        clock = rb_cs_clock(n=1)
        gravity = gravity_20m()
        delta = delta_inverse_redshift(gravity)
        for tau in (0.0, 0.4, 1.3, 2.9, 7.7):
            at = replace(clock, tau_upper=tau, tau_lower=tau)
            state, _ = mz_output_state(gravity, at)
            p_minus = fock.empty_port_probability(state, Location.PORT_PLUS)
            coherence = models.mz_coherence(clock.omega1, clock.omega2, delta, tau)
            assert abs(p_minus - (1.0 + coherence) / 2.0) < 1e-10

    def test_zero_storage_routes_everything_to_minus_port(self):
        state, _ = mz_output_state(gravity_20m(), rb_cs_clock(n=1))
        assert abs(fock.empty_port_probability(state, Location.PORT_PLUS) - 1.0) < 1e-12
