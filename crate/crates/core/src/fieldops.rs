//! Creation, neutral and annihilation operators, the Gamma field operator,
//! and the Jacobi structure of the one-set subspace.

use serde::Serialize;

use crate::error::{check_dim, GwnError, Result};
use crate::extfock::ext_inner_n;
use crate::measure::{AtomicMeasure, TestFunction};
use crate::symtensor::{FockVector, SymTensor};

/// `a⁺(ξ)`: raises each kernel by `ξ ⊗̂ f⁽ⁿ⁾`.
pub fn create(xi: &TestFunction, f: &FockVector) -> Result<FockVector> {
    check_dim(f.atoms(), xi.len())?;
    let x = SymTensor::rank_one(xi, 1)?;
    let mut out = FockVector::zero(f.atoms());
    for k in f.kernels() {
        out.add_kernel(1.0, &x.sym_product(k)?)?;
    }
    Ok(out)
}

/// `a⁰(ξ)`: `n ·` slot multiplication by `ξ`, degree preserving.
pub fn neutral(xi: &TestFunction, f: &FockVector) -> Result<FockVector> {
    check_dim(f.atoms(), xi.len())?;
    let mut out = FockVector::zero(f.atoms());
    for (n, k) in f.kernels().iter().enumerate() {
        let t = if n == 0 {
            SymTensor::zeros(f.atoms(), 0)?
        } else {
            k.multiply_pointwise_first_slot(xi)?.scale(n as f64)
        };
        out.set_kernel(t)?;
    }
    Ok(out)
}

/// `a₁⁻(ξ)`: `n Σ_j w_j ξ_j f⁽ⁿ⁾(j, ·)`.
pub fn annihilate1(xi: &TestFunction, f: &FockVector, m: &AtomicMeasure) -> Result<FockVector> {
    check_dim(f.atoms(), xi.len())?;
    check_dim(m.atoms(), xi.len())?;
    let v: Vec<f64> = xi
        .values()
        .iter()
        .zip(m.weights())
        .map(|(x, w)| x * w)
        .collect();
    let mut out = FockVector::zero(f.atoms());
    for (n, k) in f.kernels().iter().enumerate().skip(1) {
        out.add_kernel(n as f64, &k.contract(&v)?)?;
    }
    Ok(out)
}

/// `a₂⁻(ξ)`: identifies two slots at weight `ξ`, times `n(n-1)`.
pub fn annihilate2(xi: &TestFunction, f: &FockVector) -> Result<FockVector> {
    check_dim(f.atoms(), xi.len())?;
    let mut out = FockVector::zero(f.atoms());
    for (n, k) in f.kernels().iter().enumerate().skip(2) {
        out.add_kernel((n * (n - 1)) as f64, &k.identify_pair(xi)?)?;
    }
    Ok(out)
}

/// `a(ξ) = a⁺ + 2a⁰ + ⟨ξ⟩ + a₁⁻ + a₂⁻`.
pub fn gamma_field(xi: &TestFunction, f: &FockVector, m: &AtomicMeasure) -> Result<FockVector> {
    let mut out = create(xi, f)?;
    out.axpy(2.0, &neutral(xi, f)?)?;
    out.axpy(m.integrate(xi)?, f)?;
    out.axpy(1.0, &annihilate1(xi, f, m)?)?;
    out.axpy(1.0, &annihilate2(xi, f)?)?;
    Ok(out)
}

/// Recurrence coefficients of the Jacobi matrix on `span{χ_Δ^{⊗n}}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiCoefficients {
    pub sigma: f64,
    /// `α_n = √(n(n-1+σ))`; `α_0 = 0`.
    pub alphas: Vec<f64>,
    /// `β_n = 2n + σ`.
    pub betas: Vec<f64>,
    /// `c_n = ∏_{k≤n} α_k`, `c_0 = 1`.
    pub norms: Vec<f64>,
}

pub fn jacobi_coefficients(sigma: f64, n: usize) -> Result<JacobiCoefficients> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(GwnError::Domain(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    let alphas: Vec<f64> = (0..=n)
        .map(|k| ((k as f64) * (k as f64 - 1.0 + sigma)).sqrt())
        .collect();
    let betas = (0..=n).map(|k| 2.0 * k as f64 + sigma).collect();
    let mut norms = Vec::with_capacity(n + 1);
    norms.push(1.0);
    for k in 1..=n {
        norms.push(norms[k - 1] * alphas[k]);
    }
    Ok(JacobiCoefficients {
        sigma,
        alphas,
        betas,
        norms,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct JacobiRow {
    pub n: usize,
    pub action_dev: f64,
    pub c_n: f64,
    pub c_n_from_extnorm: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct JacobiReport {
    pub sigma: f64,
    pub rows: Vec<JacobiRow>,
    pub max_action_dev: f64,
    pub max_norm_rel_err: f64,
}

/// Applies `a(χ_Δ)` to `χ_Δ^{⊗n}` for `n ≤ N` and measures the deviation from
/// `χ^{⊗(n+1)} + (2n+σ)χ^{⊗n} + n(n-1+σ)χ^{⊗(n-1)}`; also compares
/// `c_n² = n!·ext_inner_n(χ^{⊗n}, χ^{⊗n})` with the closed form.
pub fn jacobi_action_check(
    m: &AtomicMeasure,
    delta: &TestFunction,
    n_max: usize,
) -> Result<JacobiReport> {
    check_dim(m.atoms(), delta.len())?;
    if !delta.is_indicator() {
        return Err(GwnError::Precondition(
            "Delta must be a 0/1 indicator".into(),
        ));
    }
    let sigma = m.integrate(delta)?;
    let coeffs = jacobi_coefficients(sigma, n_max)?;
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut fact = 1.0;
    for n in 0..=n_max {
        if n > 0 {
            fact *= n as f64;
        }
        let chi_n = SymTensor::rank_one(delta, n)?;
        let got = gamma_field(delta, &FockVector::single(chi_n.clone())?, m)?;
        let mut expected = FockVector::single(SymTensor::rank_one(delta, n + 1)?)?;
        expected.add_kernel(2.0 * n as f64 + sigma, &chi_n)?;
        if n > 0 {
            expected.add_kernel(
                n as f64 * (n as f64 - 1.0 + sigma),
                &SymTensor::rank_one(delta, n - 1)?,
            )?;
        }
        let action_dev = got.max_abs_diff(&expected)?;
        let c_ext = (fact * ext_inner_n(m, &chi_n, &chi_n)?).sqrt();
        let c_n = coeffs.norms[n];
        rows.push(JacobiRow {
            n,
            action_dev,
            c_n,
            c_n_from_extnorm: c_ext,
            rel_err: (c_ext - c_n).abs() / c_n,
        });
    }
    Ok(JacobiReport {
        sigma,
        max_action_dev: rows.iter().fold(0.0, |a, r| a.max(r.action_dev)),
        max_norm_rel_err: rows.iter().fold(0.0, |a, r| a.max(r.rel_err)),
        rows,
    })
}
