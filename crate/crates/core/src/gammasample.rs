//! Gamma white-noise sampling and Monte Carlo estimators.
//!
//! Every sample `k` draws from its own ChaCha8 stream (`seed`, stream `k`), and
//! per-sample results are reduced in index order by pairwise summation, so an
//! estimate depends only on the seed and the sample count — never on the
//! number of threads.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, GwnError, Result};
use crate::extfock::{ext_inner_n, fock_inner_n};
use crate::measure::{pairwise_sum, AtomicMeasure, TestFunction};
use crate::symtensor::{FockVector, SymTensor};
use crate::wickcalc::{
    evaluate, monomial_to_wick, wick_kernels_at, Basis, OmegaSample, PolyFunctional,
};

/// Default small-jump cutoff of the compound Poisson sampler.
pub const DEFAULT_CP_TRUNCATION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerMode {
    /// Independent `Gamma(w_i, 1)` mass per atom.
    PerAtomGamma,
    /// Poisson cloud of jumps with Lévy density `e^{-s}/s` on `[ε, ∞)`.
    CompoundPoisson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub n_samples: usize,
    pub mode: SamplerMode,
    pub cp_truncation: f64,
}

impl SamplerConfig {
    pub fn new(seed: u64, n_samples: usize, mode: SamplerMode) -> Result<Self> {
        Self::with_truncation(seed, n_samples, mode, DEFAULT_CP_TRUNCATION)
    }

    pub fn with_truncation(
        seed: u64,
        n_samples: usize,
        mode: SamplerMode,
        eps: f64,
    ) -> Result<Self> {
        if n_samples == 0 {
            return Err(GwnError::Precondition("n_samples must be ≥ 1".into()));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(GwnError::Domain(format!(
                "cp_truncation must lie in (0, 1), got {eps}"
            )));
        }
        Ok(Self {
            seed,
            n_samples,
            mode,
            cp_truncation: eps,
        })
    }
}

/// The random stream of sample `index`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Explicit jumps `(atom, size)` of a noise realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpConfiguration {
    pub jumps: Vec<(usize, f64)>,
}

impl JumpConfiguration {
    /// One jump per atom carrying its whole mass.
    pub fn from_omega(w: &OmegaSample) -> Self {
        Self {
            jumps: w
                .masses()
                .iter()
                .enumerate()
                .filter(|(_, s)| **s > 0.0)
                .map(|(i, &s)| (i, s))
                .collect(),
        }
    }

    pub fn to_omega(&self, m: usize) -> Result<OmegaSample> {
        let mut masses = vec![0.0; m];
        for &(i, s) in &self.jumps {
            if i >= m {
                return Err(GwnError::Dimension {
                    expected: m,
                    found: i + 1,
                });
            }
            masses[i] += s;
        }
        OmegaSample::new(masses)
    }
}

/// Exponential integral `E₁(x)` for `0 < x ≤ 1`, by its convergent series.
pub fn exp_integral_e1(x: f64) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        term *= -x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// A draw from `e^{-s}/s` restricted to `[ε, ∞)`.
fn levy_jump<R: Rng + ?Sized>(rng: &mut R, eps: f64, small_mass: f64, big_mass: f64) -> f64 {
    let p_small = small_mass / (small_mass + big_mass);
    if rng.random::<f64>() < p_small {
        // log-uniform proposal on [ε, 1], accept with e^{-s}
        loop {
            let u: f64 = rng.random();
            let s = eps.powf(1.0 - u);
            if rng.random::<f64>() < (-s).exp() {
                return s;
            }
        }
    } else {
        // 1 + Exp(1) proposal on [1, ∞), accept with 1/s
        loop {
            let e: f64 = Exp1.sample(rng);
            let s = 1.0 + e;
            if rng.random::<f64>() * s < 1.0 {
                return s;
            }
        }
    }
}

/// One compound Poisson realization as explicit jumps.
pub fn sample_configuration<R: Rng + ?Sized>(
    m: &AtomicMeasure,
    eps: f64,
    rng: &mut R,
) -> Result<JumpConfiguration> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(GwnError::Domain(format!(
            "cp_truncation must lie in (0, 1), got {eps}"
        )));
    }
    let big = exp_integral_e1(1.0);
    let small = exp_integral_e1(eps) - big;
    let mut jumps = Vec::new();
    for (i, &w) in m.weights().iter().enumerate() {
        let poisson = Poisson::new(w * (small + big))
            .map_err(|e| GwnError::Domain(format!("Poisson rate: {e}")))?;
        let count = poisson.sample(rng) as u64;
        for _ in 0..count {
            jumps.push((i, levy_jump(rng, eps, small, big)));
        }
    }
    Ok(JumpConfiguration { jumps })
}

/// One realization of the noise under `cfg.mode`.
pub fn sample_omega<R: Rng + ?Sized>(
    m: &AtomicMeasure,
    cfg: &SamplerConfig,
    rng: &mut R,
) -> Result<OmegaSample> {
    match cfg.mode {
        SamplerMode::PerAtomGamma => {
            let masses = m
                .weights()
                .iter()
                .map(|&w| {
                    Gamma::new(w, 1.0)
                        .map(|g| g.sample(rng))
                        .map_err(|e| GwnError::Domain(format!("Gamma shape: {e}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            OmegaSample::new(masses)
        }
        SamplerMode::CompoundPoisson => {
            sample_configuration(m, cfg.cp_truncation, rng)?.to_omega(m.atoms())
        }
    }
}

/// Sample mean with its standard error `sd/√n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
}

impl MCEstimate {
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        let mean = pairwise_sum(values) / n as f64;
        let var = if n > 1 {
            let dev: Vec<f64> = values.iter().map(|v| (v - mean).powi(2)).collect();
            pairwise_sum(&dev) / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            mean,
            std_error: (var / n as f64).sqrt(),
            n,
        }
    }

    /// `|mean − target| ≤ k·se`, exact equality when the spread is zero.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error + 1e-12 * target.abs().max(1.0)
    }

    /// Deviation in units of standard error (0 when exact up to rounding).
    pub fn z_score(&self, target: f64) -> f64 {
        let d = (self.mean - target).abs();
        if d <= 1e-12 * target.abs().max(1.0) {
            0.0
        } else if self.std_error > 0.0 {
            d / self.std_error
        } else {
            f64::INFINITY
        }
    }
}

/// Evaluates `f` on `cfg.n_samples` draws in parallel and estimates the mean
/// of each of its `k` outputs.
pub fn mc_estimates<F>(
    m: &AtomicMeasure,
    cfg: &SamplerConfig,
    k: usize,
    f: F,
) -> Result<Vec<MCEstimate>>
where
    F: Fn(&OmegaSample) -> Result<Vec<f64>> + Sync,
{
    let rows: Vec<Vec<f64>> = (0..cfg.n_samples as u64)
        .into_par_iter()
        .map(|idx| {
            let mut rng = sample_rng(cfg.seed, idx);
            let w = sample_omega(m, cfg, &mut rng)?;
            let out = f(&w)?;
            check_dim(k, out.len())?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok((0..k)
        .map(|j| MCEstimate::from_values(&rows.iter().map(|r| r[j]).collect::<Vec<_>>()))
        .collect())
}

/// Like [`mc_estimates`] but hands each draw as explicit compound Poisson jumps.
pub fn mc_estimates_jumps<F>(
    m: &AtomicMeasure,
    cfg: &SamplerConfig,
    k: usize,
    f: F,
) -> Result<Vec<MCEstimate>>
where
    F: Fn(&JumpConfiguration) -> Result<Vec<f64>> + Sync,
{
    let rows: Vec<Vec<f64>> = (0..cfg.n_samples as u64)
        .into_par_iter()
        .map(|idx| {
            let mut rng = sample_rng(cfg.seed, idx);
            let jumps = sample_configuration(m, cfg.cp_truncation, &mut rng)?;
            let out = f(&jumps)?;
            check_dim(k, out.len())?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok((0..k)
        .map(|j| MCEstimate::from_values(&rows.iter().map(|r| r[j]).collect::<Vec<_>>()))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaplaceResult {
    pub estimate: MCEstimate,
    pub target: f64,
}

/// `E[exp⟨ω,φ⟩]` against `exp[−Σ w_i log(1−φ_i)]`.
pub fn mc_laplace(
    m: &AtomicMeasure,
    phi: &TestFunction,
    cfg: &SamplerConfig,
) -> Result<LaplaceResult> {
    check_dim(m.atoms(), phi.len())?;
    if let Some(bad) = phi.values().iter().find(|p| p.is_nan() || **p >= 1.0) {
        return Err(GwnError::Domain(format!(
            "Laplace transform needs φ < 1, got {bad}"
        )));
    }
    let target = (-(0..m.atoms())
        .map(|i| m.weight(i) * (-phi.get(i)).ln_1p())
        .sum::<f64>())
    .exp();
    let est = mc_estimates(m, cfg, 1, |w| Ok(vec![w.pairing(phi)?.exp()]))?;
    Ok(LaplaceResult {
        estimate: est[0],
        target,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramReport {
    /// `estimates[n][k] ≈ E[(I f_n)(I g_k)]`
    pub estimates: Vec<Vec<MCEstimate>>,
    /// `δ_{nk} n! ext_inner_n(f_n, g_n)`
    pub targets: Vec<Vec<f64>>,
}

impl GramReport {
    /// Largest deviation in standard errors over all entries.
    pub fn max_z(&self) -> f64 {
        self.estimates
            .iter()
            .zip(&self.targets)
            .flat_map(|(er, tr)| er.iter().zip(tr).map(|(e, t)| e.z_score(*t)))
            .fold(0.0, f64::max)
    }
}

/// Monte Carlo Gram matrix of the chaos components of `f` and `g`.
pub fn mc_chaos_gram(
    m: &AtomicMeasure,
    f: &FockVector,
    g: &FockVector,
    cfg: &SamplerConfig,
) -> Result<GramReport> {
    check_dim(m.atoms(), f.atoms())?;
    check_dim(m.atoms(), g.atoms())?;
    let (nf, ng) = (f.len(), g.len());
    if nf == 0 || ng == 0 {
        return Err(GwnError::Precondition(
            "Gram matrix needs non-empty vectors".into(),
        ));
    }
    let top = nf.max(ng) - 1;
    let flat = mc_estimates(m, cfg, nf * ng, |w| {
        let ks = wick_kernels_at(w.masses(), m, top)?;
        let fv = f
            .kernels()
            .iter()
            .map(|t| fock_inner_n(m, &ks[t.degree()], t))
            .collect::<Result<Vec<_>>>()?;
        let gv = g
            .kernels()
            .iter()
            .map(|t| fock_inner_n(m, &ks[t.degree()], t))
            .collect::<Result<Vec<_>>>()?;
        Ok(fv
            .iter()
            .flat_map(|a| gv.iter().map(move |b| a * b))
            .collect())
    })?;
    let mut estimates = Vec::with_capacity(nf);
    let mut targets = Vec::with_capacity(nf);
    let mut fact = 1.0;
    for n in 0..nf {
        if n > 0 {
            fact *= n as f64;
        }
        estimates.push(flat[n * ng..(n + 1) * ng].to_vec());
        let mut row = vec![0.0; ng];
        if n < ng {
            row[n] = fact * ext_inner_n(m, &f.kernels()[n], &g.kernels()[n])?;
        }
        targets.push(row);
    }
    Ok(GramReport { estimates, targets })
}

/// `(∏_i (⟨ω,χ_i⟩ − σ(Δ_i)), ⟨:ω^{⊗n}:, χ_1 ⊗̂ … ⊗̂ χ_n⟩)` for disjoint indicators.
pub fn multiple_integral_identity(
    m: &AtomicMeasure,
    indicators: &[TestFunction],
    w: &OmegaSample,
) -> Result<(f64, f64)> {
    check_dim(m.atoms(), w.len())?;
    for (a, chi) in indicators.iter().enumerate() {
        check_dim(m.atoms(), chi.len())?;
        if !chi.is_indicator() {
            return Err(GwnError::Precondition(format!(
                "function {a} is not a 0/1 indicator"
            )));
        }
        for other in &indicators[a + 1..] {
            if chi.pointwise(other)?.values().iter().any(|v| *v != 0.0) {
                return Err(GwnError::Precondition(
                    "indicators must have disjoint supports".into(),
                ));
            }
        }
    }
    let mut lhs = 1.0;
    let mut kernel = SymTensor::scalar(m.atoms(), 1.0)?;
    for chi in indicators {
        lhs *= w.pairing(chi)? - m.integrate(chi)?;
        kernel = kernel.sym_product(&SymTensor::rank_one(chi, 1)?)?;
    }
    let rhs = evaluate(&PolyFunctional::single(Basis::GammaWick, kernel)?, w, m)?;
    Ok((lhs, rhs))
}

/// `E[(⟨ω^{⊗n}, f⟩ − ⟨:ω^{⊗n}:, f⟩) · ⟨:ω^{⊗n}:, g⟩]`, which vanishes when
/// the Wick power is the chaos projection of the monomial.
pub fn chaos_projection_check(
    m: &AtomicMeasure,
    f: &SymTensor,
    g: &SymTensor,
    cfg: &SamplerConfig,
) -> Result<MCEstimate> {
    if f.degree() != g.degree() {
        return Err(GwnError::Contract("f and g must share a degree".into()));
    }
    let mono = monomial_to_wick(&PolyFunctional::single(Basis::Monomial, f.clone())?, m)?;
    let wick_f = PolyFunctional::single(Basis::GammaWick, f.clone())?;
    let lower = mono.sub(&wick_f)?;
    let wick_g = PolyFunctional::single(Basis::GammaWick, g.clone())?;
    let est = mc_estimates(m, cfg, 1, |w| {
        Ok(vec![evaluate(&lower, w, m)? * evaluate(&wick_g, w, m)?])
    })?;
    Ok(est[0])
}
