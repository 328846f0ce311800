//! Verification suites and their JSON reports, shared by the `gwn` binary and
//! the test harness. Every suite is a pure function of its options: random
//! cases are drawn from per-case streams of the seed, so reports are
//! reproducible regardless of thread count.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GwnError, Result};
use crate::extfock::{enumerate_partitions, MAX_PARTITION_N};
use crate::fieldops::jacobi_action_check;
use crate::funcalc::{
    a1_plus_explicit, annihilate1_fock_side, annihilate1_integral, coordinate_multiply,
    creation_identity_check, del, del_integral, gamma_annihilation_identity_check, nabla,
    neutral_identity_check, reassembly_check, s_transform_multiplication_check,
    series_identities_check,
};
use crate::gammasample::{
    chaos_projection_check, mc_chaos_gram, mc_estimates_jumps, mc_laplace, sample_omega,
    sample_rng, MCEstimate, SamplerConfig, SamplerMode,
};
use crate::measure::{AtomicMeasure, TestFunction};
use crate::quadrature::QuadratureRule;
use crate::symtensor::{FockVector, SymTensor};
use crate::wickcalc::{
    evaluate, evaluate_at, laguerre_system, monomial_to_wick, wick_to_monomial, Basis, OmegaSample,
    PolyFunctional,
};

/// One checked quantity. `pass ⇔ deviation ≤ tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub name: String,
    pub target: f64,
    pub value: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Standard error, for Monte Carlo cases.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub se: Option<f64>,
}

impl Case {
    pub fn new(name: impl Into<String>, target: f64, value: f64, tolerance: f64) -> Self {
        let deviation = (value - target).abs();
        Self {
            name: name.into(),
            target,
            value,
            deviation,
            tolerance,
            pass: deviation <= tolerance,
            se: None,
        }
    }

    /// A worst-case deviation that should be zero.
    pub fn max_dev(name: impl Into<String>, dev: f64, tolerance: f64) -> Self {
        Self::new(name, 0.0, dev, tolerance)
    }

    /// Monte Carlo mean within `k` standard errors of `target`.
    pub fn mc(name: impl Into<String>, est: &MCEstimate, target: f64, k: f64) -> Self {
        // exact estimators (zero spread) still get a rounding allowance
        let tolerance = k * est.std_error + 1e-12 * target.abs().max(1.0);
        let mut c = Self::new(name, target, est.mean, tolerance);
        c.se = Some(est.std_error);
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub suite: String,
    pub seed: u64,
    pub pass: bool,
    pub cases: Vec<Case>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl RunReport {
    pub fn new(suite: impl Into<String>, seed: u64, cases: Vec<Case>) -> Self {
        Self {
            suite: suite.into(),
            seed,
            pass: cases.iter().all(|c| c.pass),
            cases,
            wall_time_s: None,
        }
    }

    pub fn failing(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.pass)
    }

    /// Fixed-width table for terminals.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let status = if self.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "suite {} (seed {}): {status}", self.suite, self.seed);
        let width = self
            .cases
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(4)
            .max(4);
        let _ = writeln!(
            out,
            "  {:<width$}  {:>14}  {:>14}  {:>10}  {:>10}  ok",
            "case", "target", "value", "deviation", "tolerance"
        );
        for c in &self.cases {
            let _ = writeln!(
                out,
                "  {:<width$}  {:>14.6e}  {:>14.6e}  {:>10.3e}  {:>10.3e}  {}",
                c.name,
                c.target,
                c.value,
                c.deviation,
                c.tolerance,
                if c.pass { "yes" } else { "NO" }
            );
        }
        if let Some(t) = self.wall_time_s {
            let _ = writeln!(out, "  wall time {t:.3} s");
        }
        out
    }
}

/// Several reports, ordered by suite name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub seed: u64,
    pub pass: bool,
    pub reports: Vec<RunReport>,
}

impl ReportBundle {
    pub fn new(seed: u64, mut reports: Vec<RunReport>) -> Self {
        reports.sort_by(|a, b| a.suite.cmp(&b.suite));
        Self {
            seed,
            pass: reports.iter().all(|r| r.pass),
            reports,
        }
    }

    pub fn to_table(&self) -> String {
        self.reports
            .iter()
            .map(RunReport::to_table)
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Knobs shared by all suites.
#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Monte Carlo sample count.
    pub samples: usize,
    /// Random cases per deterministic identity suite.
    pub cases: usize,
    /// Standard-error multiplier; `None` keeps each suite's default.
    pub se_mult: Option<f64>,
    /// Fixed base measure; random per case when absent.
    pub measure: Option<AtomicMeasure>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 100_000,
            cases: 100,
            se_mult: None,
            measure: None,
        }
    }
}

impl SuiteOptions {
    fn k(&self, default: f64) -> f64 {
        self.se_mult.unwrap_or(default)
    }

    /// The fixed measure, or the default three-atom one.
    pub fn measure_or_default(&self) -> AtomicMeasure {
        self.measure.clone().unwrap_or_else(default_measure)
    }
}

pub fn default_measure() -> AtomicMeasure {
    AtomicMeasure::new(vec![0.6, 1.1, 1.7]).expect("valid default measure")
}

pub const VERIFY_SUITES: [&str; 7] = [
    "multiplication",
    "series",
    "theorem5",
    "theorem6",
    "theorem7",
    "theorem8",
    "theorem9",
];

pub const MC_SUITES: [&str; 3] = ["chaos", "gram", "laplace"];

/// A random identity-test input: measure, functional, directions, sample.
#[derive(Debug, Clone)]
pub struct RandomCase {
    pub m: AtomicMeasure,
    pub p: PolyFunctional,
    pub xi: TestFunction,
    pub theta: TestFunction,
    pub w: OmegaSample,
    pub atom: usize,
    pub other: usize,
}

/// Deterministic random input number `idx` of the stream `tag`.
pub fn random_case(
    opts: &SuiteOptions,
    tag: u64,
    idx: u64,
    degree: usize,
    max_atoms: usize,
) -> Result<RandomCase> {
    let mut rng = sample_rng(opts.seed ^ tag.rotate_left(32), idx);
    let m = match &opts.measure {
        Some(m) => m.clone(),
        None => {
            let atoms = rng.random_range(1..=max_atoms);
            AtomicMeasure::new((0..atoms).map(|_| rng.random_range(0.2..2.0)).collect())?
        }
    };
    let atoms = m.atoms();
    let basis = if rng.random_bool(0.5) {
        Basis::Monomial
    } else {
        Basis::GammaWick
    };
    let kernels = (0..=degree)
        .map(|n| SymTensor::from_fn(atoms, n, |_| rng.random_range(-1.0..1.0)))
        .collect::<Result<Vec<_>>>()?;
    let p = PolyFunctional::new(basis, FockVector::from_kernels(atoms, kernels)?);
    let xi = TestFunction::new((0..atoms).map(|_| rng.random_range(-1.0..1.0)).collect());
    let theta = TestFunction::new((0..atoms).map(|_| rng.random_range(-0.5..0.5)).collect());
    let cfg = SamplerConfig::new(opts.seed, 1, SamplerMode::PerAtomGamma)?;
    let w = sample_omega(&m, &cfg, &mut rng)?;
    let atom = rng.random_range(0..atoms);
    let other = rng.random_range(0..atoms);
    Ok(RandomCase {
        m,
        p,
        xi,
        theta,
        w,
        atom,
        other,
    })
}

/// Runs `f` on `opts.cases` random inputs in parallel and keeps the worst
/// value of each of its `k` outputs.
fn worst_over_cases<F>(
    opts: &SuiteOptions,
    tag: u64,
    degree: usize,
    max_atoms: usize,
    k: usize,
    f: F,
) -> Result<Vec<f64>>
where
    F: Fn(&RandomCase) -> Result<Vec<f64>> + Sync,
{
    let rows = (0..opts.cases as u64)
        .into_par_iter()
        .map(|idx| f(&random_case(opts, tag, idx, degree, max_atoms)?))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..k)
        .map(|j| rows.iter().map(|r| r[j]).fold(0.0, f64::max))
        .collect())
}

const IDENTITY_TOL: f64 = 1e-8;

fn multiplication_suite(opts: &SuiteOptions) -> Result<RunReport> {
    let q = QuadratureRule::default();
    let worst = worst_over_cases(opts, 1, 3, 4, 3, |c| {
        let value = evaluate(&c.p, &c.w, &c.m)?;
        let pointwise = {
            let got = evaluate(&coordinate_multiply(&c.p, c.atom, &c.m)?, &c.w, &c.m)?;
            (got - c.w.masses()[c.atom] / c.m.weight(c.atom) * value).abs()
        };
        let mut integrated = 0.0;
        for i in 0..c.m.atoms() {
            integrated += c.m.weight(i)
                * c.xi.get(i)
                * evaluate(&coordinate_multiply(&c.p, i, &c.m)?, &c.w, &c.m)?;
        }
        let integrated = (integrated - c.w.pairing(&c.xi)? * value).abs();
        Ok(vec![
            pointwise,
            integrated,
            reassembly_check(&c.p, &c.xi, &c.w, &c.m, &q)?.deviation,
        ])
    })?;
    Ok(RunReport::new(
        "multiplication",
        opts.seed,
        vec![
            Case::max_dev("coordinate_pointwise", worst[0], IDENTITY_TOL),
            Case::max_dev("coordinate_integrated", worst[1], IDENTITY_TOL),
            Case::max_dev("explicit_operator_reassembly", worst[2], IDENTITY_TOL),
        ],
    ))
}

/// Largest coefficient of a functional in either basis, for relative comparisons.
fn coefficient_scale(p: &PolyFunctional, m: &AtomicMeasure) -> Result<f64> {
    let mono = wick_to_monomial(p, m)?.kernels().max_abs();
    let wick = monomial_to_wick(p, m)?.kernels().max_abs();
    Ok(mono.max(wick).max(1.0))
}

fn series_suite(opts: &SuiteOptions) -> Result<RunReport> {
    let worst = worst_over_cases(opts, 2, 6, 3, 4, |c| {
        let scale = coefficient_scale(&c.p, &c.m)?;
        let r = series_identities_check(&c.p, c.atom, c.other, &c.m)?;
        // central differences along δ_i against the algebraic gradient
        let h = 1e-5;
        let s = c.w.masses();
        let mut up = s.to_vec();
        let mut down = s.to_vec();
        up[c.atom] += h;
        down[c.atom] -= h;
        let fd = (evaluate_at(&c.p, &up, &c.m)? - evaluate_at(&c.p, &down, &c.m)?) / (2.0 * h);
        let exact = evaluate(&nabla(&c.p, c.atom, &c.m)?, &c.w, &c.m)?;
        let fd_rel = (fd - exact).abs() / exact.abs().max(1.0);
        Ok(vec![
            r.del_as_nabla_series / scale,
            r.nabla_as_del_series / scale,
            r.commutator / scale,
            fd_rel,
        ])
    })?;
    Ok(RunReport::new(
        "series",
        opts.seed,
        vec![
            Case::max_dev("del_equals_sum_of_nabla_powers", worst[0], 1e-10),
            Case::max_dev("nabla_equals_alternating_del_powers", worst[1], 1e-10),
            Case::max_dev("nabla_del_commute", worst[2], 1e-10),
            Case::max_dev("nabla_vs_central_difference", worst[3], 1e-6),
        ],
    ))
}

fn s_transform_suite(opts: &SuiteOptions) -> Result<RunReport> {
    let worst = worst_over_cases(opts, 5, 3, 4, 2, |c| {
        let r = s_transform_multiplication_check(&c.p, c.atom, &c.xi, &c.theta, &c.m)?;
        Ok(vec![r.pointwise.deviation, r.integrated.deviation])
    })?;
    Ok(RunReport::new(
        "theorem5",
        opts.seed,
        vec![
            Case::max_dev(
                "s_transform_coordinate_multiplication",
                worst[0],
                IDENTITY_TOL,
            ),
            Case::max_dev("s_transform_field_multiplication", worst[1], IDENTITY_TOL),
        ],
    ))
}

fn difference_suite(opts: &SuiteOptions) -> Result<RunReport> {
    let q = QuadratureRule::default();
    let mut worst = [0.0; 2];
    for degree in 0..=6 {
        let w = worst_over_cases(opts, 6 + ((degree as u64) << 8), degree, 3, 2, |c| {
            let d = evaluate(&del(&c.p, c.atom, &c.m)?, &c.w, &c.m)?;
            let integral = del_integral(&c.p, c.atom, &c.w, &c.m, &q)?;
            let a1 = annihilate1_fock_side(&c.p, &c.xi, &c.w, &c.m)?;
            let a1_int = annihilate1_integral(&c.p, &c.xi, &c.w, &c.m, &q)?;
            let scale = coefficient_scale(&c.p, &c.m)?;
            Ok(vec![
                (d - integral).abs() / scale,
                (a1 - a1_int).abs() / scale,
            ])
        })?;
        worst[0] = f64::max(worst[0], w[0]);
        worst[1] = f64::max(worst[1], w[1]);
    }
    let mut cases = vec![
        Case::max_dev("difference_integral_equals_del", worst[0], 1e-9),
        Case::max_dev(
            "difference_integral_equals_fock_annihilator",
            worst[1],
            1e-9,
        ),
    ];
    cases.extend(a1_plus_adjoint_cases(opts)?);
    Ok(RunReport::new("theorem6", opts.seed, cases))
}

/// `E[(a₁⁺(ξ)φ)ψ] = E[φ · a₁⁻(ξ)ψ]` on compound Poisson jump configurations,
/// with fixed quadratic `φ`, `ψ` on the suite's base measure.
pub fn a1_plus_adjoint_cases(opts: &SuiteOptions) -> Result<Vec<Case>> {
    let m = opts.measure_or_default();
    let atoms = m.atoms();
    let mut rng = sample_rng(opts.seed ^ 0xa1, u64::MAX);
    let poly = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<PolyFunctional> {
        let kernels = (0..=2)
            .map(|n| SymTensor::from_fn(atoms, n, |_| rng.random_range(-1.0..1.0)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyFunctional::new(
            Basis::Monomial,
            FockVector::from_kernels(atoms, kernels)?,
        ))
    };
    let phi = poly(&mut rng)?;
    let psi = poly(&mut rng)?;
    let xi = TestFunction::new((0..atoms).map(|_| rng.random_range(-1.0..1.0)).collect());
    let q = QuadratureRule::gauss_laguerre(8)?;
    let cfg = SamplerConfig::new(opts.seed, opts.samples, SamplerMode::CompoundPoisson)?;
    let est = mc_estimates_jumps(&m, &cfg, 1, |jumps| {
        let w = jumps.to_omega(atoms)?;
        let lhs = a1_plus_explicit(&phi, &xi, jumps, &m)? * evaluate(&psi, &w, &m)?;
        let rhs = evaluate(&phi, &w, &m)? * annihilate1_integral(&psi, &xi, &w, &m, &q)?;
        Ok(vec![lhs - rhs])
    })?;
    Ok(vec![Case::mc(
        "a1_plus_adjointness_gap",
        &est[0],
        0.0,
        opts.k(4.0),
    )])
}

fn creation_suite(opts: &SuiteOptions) -> Result<RunReport> {
    let worst = worst_over_cases(opts, 7, 3, 4, 1, |c| {
        Ok(vec![
            creation_identity_check(&c.p, &c.xi, &c.w, &c.m)?.deviation,
        ])
    })?;
    Ok(RunReport::new(
        "theorem7",
        opts.seed,
        vec![Case::max_dev(
            "creation_explicit_action",
            worst[0],
            IDENTITY_TOL,
        )],
    ))
}

fn neutral_suite(opts: &SuiteOptions) -> Result<RunReport> {
    let worst = worst_over_cases(opts, 8, 3, 4, 1, |c| {
        Ok(vec![
            neutral_identity_check(&c.p, &c.xi, &c.w, &c.m)?.deviation,
        ])
    })?;
    Ok(RunReport::new(
        "theorem8",
        opts.seed,
        vec![Case::max_dev(
            "neutral_explicit_action",
            worst[0],
            IDENTITY_TOL,
        )],
    ))
}

fn gamma_annihilation_suite(opts: &SuiteOptions) -> Result<RunReport> {
    let q = QuadratureRule::default();
    let worst = worst_over_cases(opts, 9, 3, 4, 3, |c| {
        let r = gamma_annihilation_identity_check(&c.p, &c.xi, &c.w, &c.m, &q)?;
        // the flipped-sign variant misses by exactly 2⟨ξ⟩p(ω)
        let gap = 2.0 * (c.m.integrate(&c.xi)? * evaluate(&c.p, &c.w, &c.m)?).abs();
        Ok(vec![
            r.gradient_form.deviation,
            r.shift_form.deviation,
            (r.shift_form_flipped_sign.deviation - gap).abs(),
        ])
    })?;
    Ok(RunReport::new(
        "theorem9",
        opts.seed,
        vec![
            Case::max_dev("annihilation_gradient_form", worst[0], IDENTITY_TOL),
            Case::max_dev("annihilation_shift_form", worst[1], IDENTITY_TOL),
            Case::max_dev(
                "shift_form_flipped_sign_gap_is_twice_mean",
                worst[2],
                IDENTITY_TOL,
            ),
        ],
    ))
}

pub fn verify_suite(name: &str, opts: &SuiteOptions) -> Result<RunReport> {
    match name {
        "multiplication" => multiplication_suite(opts),
        "series" => series_suite(opts),
        "theorem5" => s_transform_suite(opts),
        "theorem6" => difference_suite(opts),
        "theorem7" => creation_suite(opts),
        "theorem8" => neutral_suite(opts),
        "theorem9" => gamma_annihilation_suite(opts),
        other => Err(GwnError::Precondition(format!(
            "unknown verify suite '{other}'"
        ))),
    }
}

/// All verify suites, run in parallel, ordered by name.
pub fn verify_all(opts: &SuiteOptions) -> Result<ReportBundle> {
    let reports = VERIFY_SUITES
        .par_iter()
        .map(|s| verify_suite(s, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReportBundle::new(opts.seed, reports))
}

/// Test function with `φ_i ∈ [−0.5, 0.4]`, where `E[e^{2⟨ω,φ⟩}]` stays finite.
pub fn default_laplace_phi(atoms: usize) -> TestFunction {
    TestFunction::new(
        (0..atoms)
            .map(|i| [0.25, -0.5, 0.15, 0.4, -0.2][i % 5])
            .collect(),
    )
}

fn laplace_suite(opts: &SuiteOptions) -> Result<RunReport> {
    let m = opts.measure_or_default();
    let cfg = SamplerConfig::new(opts.seed, opts.samples, SamplerMode::PerAtomGamma)?;
    let r = mc_laplace(&m, &default_laplace_phi(m.atoms()), &cfg)?;
    Ok(RunReport::new(
        "laplace",
        opts.seed,
        vec![Case::mc(
            "laplace_transform",
            &r.estimate,
            r.target,
            opts.k(3.0),
        )],
    ))
}

/// Random chaos vectors of degree ≤ 4 with unit-scale kernels.
fn random_fock(
    m: &AtomicMeasure,
    rng: &mut rand_chacha::ChaCha8Rng,
    degree: usize,
) -> Result<FockVector> {
    let kernels = (0..=degree)
        .map(|n| SymTensor::from_fn(m.atoms(), n, |_| rng.random_range(-1.0..1.0)))
        .collect::<Result<Vec<_>>>()?;
    FockVector::from_kernels(m.atoms(), kernels)
}

fn gram_suite(opts: &SuiteOptions) -> Result<RunReport> {
    let m = opts.measure_or_default();
    let mut rng = sample_rng(opts.seed ^ 0x6a, u64::MAX);
    let f = random_fock(&m, &mut rng, 4)?;
    let g = random_fock(&m, &mut rng, 4)?;
    let cfg = SamplerConfig::new(opts.seed, opts.samples, SamplerMode::PerAtomGamma)?;
    let r = mc_chaos_gram(&m, &f, &g, &cfg)?;
    let k = opts.k(4.0);
    let mut cases = Vec::new();
    for (n, (er, tr)) in r.estimates.iter().zip(&r.targets).enumerate() {
        for (j, (e, t)) in er.iter().zip(tr).enumerate() {
            cases.push(Case::mc(format!("gram_{n}_{j}"), e, *t, k));
        }
    }
    Ok(RunReport::new("gram", opts.seed, cases))
}

fn chaos_suite(opts: &SuiteOptions) -> Result<RunReport> {
    let m = opts.measure_or_default();
    let mut rng = sample_rng(opts.seed ^ 0xc4, u64::MAX);
    let cfg = SamplerConfig::new(opts.seed, opts.samples, SamplerMode::PerAtomGamma)?;
    let k = opts.k(4.0);
    let mut cases = Vec::new();
    for n in 1..=4 {
        let f = SymTensor::from_fn(m.atoms(), n, |_| rng.random_range(-1.0..1.0))?;
        let g = SymTensor::from_fn(m.atoms(), n, |_| rng.random_range(-1.0..1.0))?;
        let est = chaos_projection_check(&m, &f, &g, &cfg)?;
        cases.push(Case::mc(
            format!("lower_order_remainder_orthogonal_n{n}"),
            &est,
            0.0,
            k,
        ));
    }
    Ok(RunReport::new("chaos", opts.seed, cases))
}

pub fn mc_suite(name: &str, opts: &SuiteOptions) -> Result<RunReport> {
    match name {
        "laplace" => laplace_suite(opts),
        "gram" => gram_suite(opts),
        "chaos" => chaos_suite(opts),
        other => Err(GwnError::Precondition(format!(
            "unknown mc suite '{other}'"
        ))),
    }
}

/// One census row: partition, loop multiplicity, running total.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopRow {
    pub blocks: String,
    pub multiplicity: u64,
    pub running_sum: u64,
}

/// Loop census of `{1..n}`; the total must be `n!`.
pub fn loop_census(n: usize) -> Result<(Vec<LoopRow>, u64)> {
    let mut running = 0u64;
    let mut rows = Vec::new();
    for p in enumerate_partitions(n)? {
        running += p.multiplicity;
        let blocks = p
            .blocks
            .iter()
            .map(|b| {
                format!(
                    "({})",
                    b.iter()
                        .map(|i| (i + 1).to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                )
            })
            .collect::<String>();
        rows.push(LoopRow {
            blocks,
            multiplicity: p.multiplicity,
            running_sum: running,
        });
    }
    Ok((rows, running))
}

pub fn factorial_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn loops_report(n_max: usize, seed: u64) -> Result<RunReport> {
    let cases = (1..=n_max.min(MAX_PARTITION_N))
        .map(|n| {
            let (_, total) = loop_census(n)?;
            Ok(Case::new(
                format!("loop_total_n{n}"),
                factorial_u64(n) as f64,
                total as f64,
                0.0,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RunReport::new("loops", seed, cases))
}

pub fn jacobi_report(sigma: f64, n: usize, seed: u64) -> Result<RunReport> {
    let m = AtomicMeasure::new(vec![sigma])?;
    let r = jacobi_action_check(&m, &TestFunction::constant(1, 1.0), n)?;
    let mut cases = Vec::new();
    for row in &r.rows {
        cases.push(Case::max_dev(
            format!("three_term_action_n{}", row.n),
            row.action_dev,
            1e-10,
        ));
        cases.push(Case::new(
            format!("norm_from_ext_n{}", row.n),
            row.c_n,
            row.c_n_from_extnorm,
            1e-10 * row.c_n,
        ));
    }
    Ok(RunReport::new("jacobi", seed, cases))
}

pub fn laguerre_report(sigma: f64, n: usize, seed: u64) -> Result<RunReport> {
    let sys = laguerre_system(sigma, n)?;
    let mut cases = Vec::new();
    for d in 0..=n {
        let dev = sys.coefficients[d]
            .iter()
            .zip(sys.classical_coefficients(d))
            .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
            .fold(0.0, f64::max);
        cases.push(Case::max_dev(format!("classical_laguerre_n{d}"), dev, 1e-8));
    }
    cases.push(Case::max_dev(
        "orthonormality",
        sys.orthonormality_error(n + 2)?,
        1e-8,
    ));
    Ok(RunReport::new("laguerre", seed, cases))
}

/// Everything: census, Jacobi and Laguerre tables, Monte Carlo and verify suites.
pub fn run_all(opts: &SuiteOptions, n: usize, sigma: f64) -> Result<ReportBundle> {
    let mut reports = vec![
        loops_report(n.min(MAX_PARTITION_N), opts.seed)?,
        jacobi_report(sigma, n, opts.seed)?,
        laguerre_report(sigma, n, opts.seed)?,
    ];
    for s in MC_SUITES {
        reports.push(mc_suite(s, opts)?);
    }
    reports.extend(verify_all(opts)?.reports);
    Ok(ReportBundle::new(opts.seed, reports))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_pass_rule() {
        assert!(Case::new("a", 1.0, 1.0 + 1e-9, 1e-8).pass);
        assert!(!Case::new("a", 1.0, 1.1, 1e-8).pass);
        let r = RunReport::new(
            "x",
            1,
            vec![Case::max_dev("a", 0.0, 0.0), Case::max_dev("b", 1.0, 0.5)],
        );
        assert!(!r.pass);
        assert_eq!(r.failing().count(), 1);
    }

    #[test]
    fn census_small() {
        let (rows, total) = loop_census(3).unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(total, 6);
        assert_eq!(rows[0].blocks, "(1 2 3)");
    }

    #[test]
    fn random_cases_are_reproducible() {
        let opts = SuiteOptions::default();
        let a = random_case(&opts, 3, 17, 2, 4).unwrap();
        let b = random_case(&opts, 3, 17, 2, 4).unwrap();
        assert_eq!(a.p, b.p);
        assert_eq!(a.w, b.w);
    }

    #[test]
    fn jacobi_report_sigma_one() {
        let r = jacobi_report(1.0, 3, 0).unwrap();
        assert!(r.pass);
        let c3 = r
            .cases
            .iter()
            .find(|c| c.name == "norm_from_ext_n3")
            .unwrap();
        assert!((c3.value - 6.0).abs() < 1e-12);
    }
}
