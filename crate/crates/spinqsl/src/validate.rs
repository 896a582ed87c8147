//! Built-in validation suites: deterministic sweeps over the cross-checks
//! between closed forms, propagators and quadrature oracles, reported in a
//! machine-readable form.

use std::f64::consts::{FRAC_PI_2, PI};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{
    analytic_resonance_spin, build_alpha_propagator, default_probe_grid, propagate_numeric,
    FieldParams, Validity,
};
use crate::elliptic::{
    complete_e, complete_k, incomplete_e, jacobi_sncndn, EllipticModulus, EllipticParameter,
};
use crate::numdiff::curve_derivatives;
use crate::qsl::{
    energy_stats, mt_check, p_factor, pole_distance, qsl_ratio_limit, tau1_qsl, tau_qsl,
    MtHorizon,
};
use crate::quadrature::integrate;
use crate::spin::{make_spin_system, QuantumState, Spin};
use crate::uncertainty::{conservation_applies, covariance};

/// Selectable validation suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    SpecialFunctions,
    Dynamics,
    Conservation,
    Qsl,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Suite, String> {
        match s {
            "special_functions" => Ok(Suite::SpecialFunctions),
            "dynamics" => Ok(Suite::Dynamics),
            "conservation" => Ok(Suite::Conservation),
            "qsl" => Ok(Suite::Qsl),
            "all" => Ok(Suite::All),
            other => Err(format!(
                "unknown suite `{other}`; expected one of special_functions, dynamics, \
                 conservation, qsl, all"
            )),
        }
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// `false` marks regime restrictions (reported, not counted as failure).
    pub applicable: bool,
    pub detail: String,
}

/// Machine-readable suite outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    /// True when every applicable check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.applicable)
    }

    pub fn summary(&self) -> String {
        let passed = self.checks.iter().filter(|c| c.applicable && c.passed).count();
        let failed = self.checks.iter().filter(|c| c.applicable && !c.passed).count();
        let na = self.checks.iter().filter(|c| !c.applicable).count();
        format!(
            "{}: {} passed, {} failed, {} not applicable",
            self.suite, passed, failed, na
        )
    }
}

/// Deterministic SplitMix64 stream for the sweeps.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        lo + (hi - lo) * u
    }
}

fn check(name: &str, passed: bool, detail: String) -> CheckResult {
    CheckResult { name: name.to_string(), passed, applicable: true, detail }
}

fn not_applicable(name: &str, detail: String) -> CheckResult {
    CheckResult { name: name.to_string(), passed: true, applicable: false, detail }
}

fn consistent(h: f64, hz: f64, omega: f64, k: f64) -> FieldParams {
    FieldParams::consistent_drive(h, hz, omega, EllipticModulus::new(k).unwrap()).unwrap()
}

/// Runs the selected suite(s).
pub fn run_suite(suite: Suite) -> SuiteReport {
    let checks = match suite {
        Suite::SpecialFunctions => special_functions_checks(),
        Suite::Dynamics => dynamics_checks(),
        Suite::Conservation => conservation_checks(),
        Suite::Qsl => qsl_checks(),
        Suite::All => {
            let mut all = special_functions_checks();
            all.extend(dynamics_checks());
            all.extend(conservation_checks());
            all.extend(qsl_checks());
            all
        }
    };
    let name = match suite {
        Suite::SpecialFunctions => "special_functions",
        Suite::Dynamics => "dynamics",
        Suite::Conservation => "conservation",
        Suite::Qsl => "qsl",
        Suite::All => "all",
    };
    SuiteReport { suite: name.to_string(), checks }
}

fn special_functions_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut rng = SplitMix64(0x5eed_0001);

    // identities over 10^4 samples
    let mut worst = 0.0_f64;
    for _ in 0..10_000 {
        let u = rng.uniform(-20.0, 20.0);
        let k = EllipticModulus::new(rng.uniform(0.0, 0.999_999)).unwrap();
        let (sn, cn, dn) = jacobi_sncndn(u, k);
        let e1 = (sn * sn + cn * cn - 1.0).abs();
        let e2 = (dn * dn + k.m() * sn * sn - 1.0).abs();
        worst = worst.max(e1).max(e2);
    }
    out.push(check(
        "jacobi identities over 1e4 random (u, k)",
        worst <= 1e-12,
        format!("max defect {worst:.3e} (tolerance 1e-12)"),
    ));

    // periodicity over 10^4 samples
    let mut worst = 0.0_f64;
    for _ in 0..10_000 {
        let u = rng.uniform(-6.0, 6.0);
        let k = EllipticModulus::new(rng.uniform(0.0, 0.99)).unwrap();
        let quarter = complete_k(k).unwrap();
        let (sn, _, dn) = jacobi_sncndn(u, k);
        let (sn4, _, _) = jacobi_sncndn(u + 4.0 * quarter, k);
        let (_, _, dn2) = jacobi_sncndn(u + 2.0 * quarter, k);
        worst = worst.max((sn4 - sn).abs()).max((dn2 - dn).abs());
    }
    out.push(check(
        "jacobi periodicity (4K for sn, 2K for dn) over 1e4 samples",
        worst <= 1e-12,
        format!("max defect {worst:.3e} (tolerance 1e-12)"),
    ));

    // sn/cn/dn against inversion of the first-kind integral: with
    // u = F(phi|k) from quadrature, sn(u|k) must return sin(phi)
    let mut worst = 0.0_f64;
    for _ in 0..10_000 {
        let phi = rng.uniform(0.01, FRAC_PI_2 - 0.01);
        let kv = rng.uniform(0.0, 0.99);
        let u = integrate(
            |t| 1.0 / (1.0 - kv * kv * t.sin().powi(2)).sqrt(),
            0.0,
            phi,
            1e-14,
        )
        .value;
        let (sn, cn, dn) = jacobi_sncndn(u, EllipticModulus::new(kv).unwrap());
        let dn_expect = (1.0 - kv * kv * phi.sin().powi(2)).sqrt();
        worst = worst
            .max((sn - phi.sin()).abs())
            .max((cn - phi.cos()).abs())
            .max((dn - dn_expect).abs());
    }
    out.push(check(
        "jacobi functions invert the first-kind integral over 1e4 samples",
        worst <= 1e-12,
        format!("max defect {worst:.3e} (tolerance 1e-12)"),
    ));

    // K against its defining quadrature
    let mut worst = 0.0_f64;
    for _ in 0..300 {
        let kv = rng.uniform(0.0, 0.99);
        let k = EllipticModulus::new(kv).unwrap();
        let direct = complete_k(k).unwrap();
        let oracle = integrate(
            |t| 1.0 / (1.0 - kv * kv * t.sin().powi(2)).sqrt(),
            0.0,
            FRAC_PI_2,
            1e-14,
        )
        .value;
        worst = worst.max((direct - oracle).abs() / oracle);
    }
    out.push(check(
        "complete K agrees with quadrature (300 samples)",
        worst <= 1e-13,
        format!("max relative deviation {worst:.3e} (tolerance 1e-13)"),
    ));

    // E against its defining quadrature, negative parameters included
    let mut worst = 0.0_f64;
    for _ in 0..10_000 {
        let phi = rng.uniform(0.0, 3.0);
        let m = rng.uniform(-4.0, 0.999);
        let direct = incomplete_e(phi, EllipticParameter::new(m).unwrap());
        let oracle = integrate(|t| (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, phi, 1e-14).value;
        worst = worst.max((direct - oracle).abs() / (1.0 + oracle.abs()));
    }
    out.push(check(
        "incomplete E agrees with quadrature over 1e4 samples",
        worst <= 1e-12,
        format!("max relative deviation {worst:.3e} (tolerance 1e-12)"),
    ));

    // E properties: monotone in phi, >= phi for m < 0, periodic extension
    let mut ok = true;
    let mut detail = String::from("all properties held");
    for _ in 0..2_000 {
        let phi = rng.uniform(-2.0, 2.0);
        let dphi = rng.uniform(1e-3, 1.0);
        let m = rng.uniform(-4.0, 0.999);
        let p = EllipticParameter::new(m).unwrap();
        let a = incomplete_e(phi, p);
        let b = incomplete_e(phi + dphi, p);
        if b <= a {
            ok = false;
            detail = format!("monotonicity failed at phi={phi}, m={m}");
            break;
        }
        if m < 0.0 && phi > 0.0 && a < phi {
            ok = false;
            detail = format!("E(phi|m) >= phi failed at phi={phi}, m={m}");
            break;
        }
        let ext = incomplete_e(phi + PI, p) - (a + 2.0 * complete_e(p));
        if ext.abs() > 1e-11 * (1.0 + a.abs()) {
            ok = false;
            detail = format!("periodic extension failed at phi={phi}, m={m}: {ext:.3e}");
            break;
        }
    }
    out.push(check("second-kind integral properties (2e3 samples)", ok, detail));
    out
}

fn dynamics_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();

    // closed form vs numeric propagation
    for (s, k) in [(0.5, 0.5), (1.0, 0.9), (2.0, 0.0)] {
        let sys = make_spin_system(s).unwrap();
        let p = consistent(2.0, 1.0, 1.0, k);
        let rho0 = QuantumState::highest_weight(sys.dim());
        let traj = propagate_numeric(&rho0, &p, &sys, PI, 60_000).unwrap();
        let mut worst = 0.0_f64;
        for (&t, c) in traj.times().iter().zip(traj.coherence()) {
            let a = analytic_resonance_spin(t, &p, sys.spin()).unwrap();
            for i in 0..3 {
                worst = worst.max((c.r[i] - a.r[i]).abs());
            }
        }
        out.push(check(
            &format!("closed form vs numeric propagation (S={s}, k={k})"),
            worst <= 1e-7,
            format!("max coherence deviation {worst:.3e} (tolerance 1e-7)"),
        ));
    }

    // diagonal-frame validity map
    for (s, k, expect) in [
        (3.0, 0.0, Validity::Exact),
        (1.0, 0.7, Validity::Exact),
        (1.5, 0.7, Validity::NotApplicable),
    ] {
        let sys = make_spin_system(s).unwrap();
        let p = consistent(2.0, 1.0, 1.0, k);
        let prop = build_alpha_propagator(&p, &sys, &default_probe_grid(&p));
        out.push(check(
            &format!("diagonal-frame validity (S={s}, k={k})"),
            prop.validity() == expect,
            format!(
                "validity {:?}, max transformed-Hamiltonian drift {:.3e}",
                prop.validity(),
                prop.max_deviation()
            ),
        ));
    }

    // unitarity invariants along a generic propagation
    let sys = make_spin_system(1.5).unwrap();
    let p = consistent(2.0, 1.0, 1.0, 0.6);
    let rho0 = QuantumState::highest_weight(sys.dim());
    let traj = propagate_numeric(&rho0, &p, &sys, 2.0, 2_000).unwrap();
    let r_b = sys.spin().bloch_radius();
    let mut purity_drift = 0.0_f64;
    let mut radius_drift = 0.0_f64;
    for (state, c) in traj.states().iter().zip(traj.coherence()) {
        purity_drift = purity_drift.max((state.purity() - 1.0).abs());
        radius_drift = radius_drift.max((c.norm() - r_b).abs());
    }
    out.push(check(
        "purity conserved along propagation (S=3/2, k=0.6)",
        purity_drift <= 1e-10,
        format!("max |Tr rho^2 - 1| = {purity_drift:.3e} (tolerance 1e-10)"),
    ));
    out.push(check(
        "coherence norm pinned at the Bloch radius (S=3/2, k=0.6)",
        radius_drift <= 1e-10,
        format!("max | |R| - r_B | = {radius_drift:.3e} (tolerance 1e-10)"),
    ));
    out
}

fn conservation_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for s in [0.5, 1.0, 1.5, 2.0, 3.0] {
        for k in [0.0, 0.5] {
            let sys = make_spin_system(s).unwrap();
            let p = consistent(2.0, 1.0, 1.0, k);
            let rho0 = QuantumState::highest_weight(sys.dim());
            let traj = propagate_numeric(&rho0, &p, &sys, PI, 2_000).unwrap();
            let mut worst = 0.0_f64;
            for state in traj.states() {
                let rep = covariance(state, &sys).unwrap();
                worst = worst.max((rep.sum_of_variances - s).abs());
            }
            let name = format!("variance-sum conservation (S={s}, k={k})");
            if conservation_applies(&p, sys.spin()) {
                out.push(check(
                    &name,
                    worst <= 1e-9,
                    format!("max |sum - S| = {worst:.3e} (tolerance 1e-9)"),
                ));
            } else {
                out.push(not_applicable(
                    &name,
                    format!(
                        "outside the asserted domain (consistent resonance, any spin at k=0, \
                         spin 1/2 and 1 otherwise); measured max |sum - S| = {worst:.3e}"
                    ),
                ));
            }
        }
    }
    out
}

fn qsl_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();

    // Mandelstam-Tamm margins across the closed form's domain
    let mut worst_margin = f64::INFINITY;
    let mut cases = 0;
    for (s, k, h, hz) in [
        (0.5, 0.0, 2.0, 1.0),
        (0.5, 0.5, 2.0, 1.0),
        (0.5, 0.9, 1.0, 2.0),
        (1.0, 0.0, 2.0, 1.0),
        (1.0, 0.6, 4.0, 1.0),
        (1.5, 0.0, 2.0, 2.0),
        (2.0, 0.0, 2.0, 1.0),
        (3.0, 0.0, 1.0, 1.0),
    ] {
        let sys = make_spin_system(s).unwrap();
        let p = consistent(h, hz, hz, k);
        let rho0 = QuantumState::highest_weight(sys.dim());
        let tau = PI / h;
        let traj = propagate_numeric(&rho0, &p, &sys, tau, 4_000).unwrap();
        let report = mt_check(&traj, MtHorizon::Full).unwrap();
        worst_margin = worst_margin
            .min(report.mt_margin.unwrap())
            .min(report.mt1_margin);
        cases += 1;
    }
    out.push(check(
        &format!("Mandelstam-Tamm margins nonnegative ({cases} cases)"),
        worst_margin >= -1e-9,
        format!("worst margin {worst_margin:.3e} (tolerance -1e-9)"),
    ));

    // Bound ordering tau >= tau_QSL, tau1 >= tau1_QSL. The quoted formulas
    // sit a factor sqrt(2S) (resp. sqrt(S/2)) above what the averaged
    // inequalities imply, so the ordering is guaranteed only for S = 1/2
    // (resp. S <= 2) at arbitrary drive, and for any spin once H >> h
    // (where E(-H^2/h^2) ~ H/h is large).
    let mut ok = true;
    let mut worst_gap = f64::INFINITY;
    for s in [0.5, 1.0, 1.5, 2.0, 4.0] {
        let spin = Spin::new(s).unwrap();
        let (h, hz) = (1.0, 10.0);
        let tau = PI / h;
        let tau1 = tau / (2.0 * s);
        let gap = (tau - tau_qsl(spin, h, hz)).min(tau1 - tau1_qsl(spin, h, hz));
        worst_gap = worst_gap.min(gap);
        ok &= gap >= -1e-9;
    }
    for s in [0.5, 1.0, 1.5, 2.0] {
        // tau1 ordering holds for all drives up to S = 2 (E(phi|m) >= phi)
        let spin = Spin::new(s).unwrap();
        let tau1 = PI / (2.0 * s * 2.0);
        let gap = tau1 - tau1_qsl(spin, 2.0, 1.0);
        worst_gap = worst_gap.min(gap);
        ok &= gap >= -1e-9;
    }
    let half = Spin::new(0.5).unwrap();
    let gap_half = PI / 2.0 - tau_qsl(half, 2.0, 1.0);
    worst_gap = worst_gap.min(gap_half);
    ok &= gap_half >= -1e-9;
    out.push(check(
        "bound ordering in its validity domain (strong-H sweep; S <= 2 for tau1)",
        ok,
        format!("worst tau - bound gap {worst_gap:.3e} (tolerance -1e-9)"),
    ));

    // informational: outside that domain the printed formulas overshoot
    let one = Spin::new(1.0).unwrap();
    let overshoot_tau = tau_qsl(one, 2.0, 1.0) - PI / 2.0;
    let four = Spin::new(4.0).unwrap();
    let overshoot_tau1 = tau1_qsl(four, 2.0, 1.0) - PI / 16.0;
    out.push(not_applicable(
        "printed bound formulas exceed tau/tau1 at moderate H/h",
        format!(
            "informational: at h=2, H=1 the quoted tau_QSL(S=1) exceeds tau by \
             {overshoot_tau:.3} and tau1_QSL(S=4) exceeds tau1 by {overshoot_tau1:.3}; \
             the averaged-deviation inequalities themselves hold (margins above)"
        ),
    ));

    // bound formula against an independent quadrature oracle
    let half = Spin::new(0.5).unwrap();
    let oracle_e = integrate(
        |t| (1.0 + 0.25 * t.sin().powi(2)).sqrt(),
        0.0,
        FRAC_PI_2,
        1e-14,
    )
    .value;
    let oracle_tau = PI * PI * 0.5_f64.sqrt() / (2.0_f64.sqrt() * 2.0 * oracle_e);
    let direct = tau_qsl(half, 2.0, 1.0);
    out.push(check(
        "tau_QSL(1/2, h=2, H=1) against quadrature oracle",
        (direct - oracle_tau).abs() <= 1e-9,
        format!("difference {:.3e} (tolerance 1e-9)", (direct - oracle_tau).abs()),
    ));

    // limit-ratio table
    let table = [(0.5, 1.0), (1.0, 2.0), (1.5, 2.25), (2.0, 2.343), (50.0, 2.467)];
    let mut worst = 0.0_f64;
    for (s, expect) in table {
        let got = qsl_ratio_limit(Spin::new(s).unwrap());
        worst = worst.max((got - expect).abs());
    }
    out.push(check(
        "limit-ratio table (S = 1/2, 1, 3/2, 2, 50)",
        worst <= 1e-3,
        format!("max deviation from the quoted values {worst:.3e} (tolerance 1e-3)"),
    ));

    // pole distance: universal limit and monotone approach
    let one = Spin::new(1.0).unwrap();
    let k05 = EllipticModulus::new(0.5).unwrap();
    let r_b = one.bloch_radius();
    let s10 = pole_distance(10.0, 1.0, k05, one).unwrap() / r_b;
    let s100 = pole_distance(100.0, 1.0, k05, one).unwrap() / r_b;
    let s1000 = pole_distance(1000.0, 1.0, k05, one).unwrap() / r_b;
    out.push(check(
        "pole distance approaches pi from above as h grows",
        s10 > s100 && s100 > s1000 && s1000 > PI && (s100 - PI) <= 8e-5,
        format!(
            "s/r_B - pi at h/H = 10, 100, 1000: {:.3e}, {:.3e}, {:.3e}",
            s10 - PI,
            s100 - PI,
            s1000 - PI
        ),
    ));

    // apex speed vs energy deviation identity along a closed-form trajectory
    let sys = make_spin_system(1.0).unwrap();
    let p = consistent(2.0, 1.0, 1.0, 0.5);
    let prop = build_alpha_propagator(&p, &sys, &default_probe_grid(&p));
    let rho0 = QuantumState::highest_weight(3);
    let n = 6_000;
    let times: Vec<f64> = (0..=n).map(|i| 1.5 * i as f64 / n as f64).collect();
    let traj = prop.evolve(&rho0, &times).unwrap();
    let stats = energy_stats(&traj);
    let points = traj.coherence_points();
    let unit: Vec<[f64; 3]> = points
        .iter()
        .map(|r| {
            let nrm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
            [r[0] / nrm, r[1] / nrm, r[2] / nrm]
        })
        .collect();
    let du = curve_derivatives(traj.times(), &unit, 1);
    let pf = p_factor(sys.spin());
    let r_b1 = sys.spin().bloch_radius();
    let mut worst_rel = 0.0_f64;
    for i in 20..=(n - 20) {
        let d = du[0][i];
        let lhs = r_b1 * (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        let rhs = (4.0 * pf * stats.variance[i]).sqrt();
        worst_rel = worst_rel.max((lhs - rhs).abs() / rhs);
    }
    out.push(check(
        "apex speed equals sqrt(4p) dE pointwise (S=1, k=0.5)",
        worst_rel <= 1e-7,
        format!("max relative deviation {worst_rel:.3e} (tolerance 1e-7)"),
    ));

    out
}
