//! Gamma-Wick kernels, polynomial functionals in two bases, the Laguerre
//! system, the S-transform and the Wick product.
//!
//! Kernels of generalized objects (the Wick powers `:ω^{⊗n}:`, point deltas)
//! use the discrete delta `δ_i(j) = [i = j]/w_j`, and the noise itself is the
//! kernel `ω(i) = s_i/w_i`, so that every pairing is a `σ^{⊗n}`-weighted sum.
//! All scalars are real; conjugations are identities.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, GwnError, Result};
use crate::extfock::fock_inner_n;
use crate::fieldops::{gamma_field, jacobi_coefficients};
use crate::measure::{pairwise_sum, AtomicMeasure, TestFunction};
use crate::symtensor::{
    multi_indices, multinomial, multiset_count, multiset_rank, FockVector, SymTensor,
};

/// A realization of the noise: nonnegative atom masses `s_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct OmegaSample {
    masses: Vec<f64>,
}

impl TryFrom<Vec<f64>> for OmegaSample {
    type Error = GwnError;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<OmegaSample> for Vec<f64> {
    fn from(w: OmegaSample) -> Self {
        w.masses
    }
}

impl OmegaSample {
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        if let Some(bad) = masses.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
            return Err(GwnError::Domain(format!(
                "atom masses must be finite and ≥ 0, got {bad}"
            )));
        }
        Ok(Self { masses })
    }

    /// The sample whose masses equal the base weights, `⟨ω,ξ⟩ = ⟨ξ⟩`.
    pub fn compensating(m: &AtomicMeasure) -> Self {
        Self {
            masses: m.weights().to_vec(),
        }
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    /// `⟨ω, ξ⟩ = Σ s_i ξ_i`.
    pub fn pairing(&self, xi: &TestFunction) -> Result<f64> {
        check_dim(self.masses.len(), xi.len())?;
        Ok(pairwise_sum(
            &self
                .masses
                .iter()
                .zip(xi.values())
                .map(|(s, x)| s * x)
                .collect::<Vec<_>>(),
        ))
    }
}

/// Kernel basis of a [`PolyFunctional`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// `Σ_n ⟨ω^{⊗n}, f⁽ⁿ⁾⟩`
    Monomial,
    /// `Σ_n ⟨:ω^{⊗n}:, f⁽ⁿ⁾⟩`
    GammaWick,
}

/// A polynomial functional of `ω` given by a kernel sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyFunctional {
    basis: Basis,
    kernels: FockVector,
}

#[derive(Serialize, Deserialize)]
struct PolyFunctionalJson {
    basis: Basis,
    kernels: serde_json::Value,
}

impl PolyFunctional {
    pub fn new(basis: Basis, kernels: FockVector) -> Self {
        Self { basis, kernels }
    }

    pub fn constant(m: usize, basis: Basis, c: f64) -> Result<Self> {
        Ok(Self::new(
            basis,
            FockVector::single(SymTensor::scalar(m, c)?)?,
        ))
    }

    /// The functional with the single kernel `t` at degree `t.degree()`.
    pub fn single(basis: Basis, t: SymTensor) -> Result<Self> {
        Ok(Self::new(basis, FockVector::single(t)?))
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn kernels(&self) -> &FockVector {
        &self.kernels
    }

    pub fn atoms(&self) -> usize {
        self.kernels.atoms()
    }

    /// Top degree with a non-zero kernel (0 for the zero functional).
    pub fn degree(&self) -> usize {
        self.kernels.degree().unwrap_or(0)
    }

    fn check_basis(&self, other: &PolyFunctional) -> Result<()> {
        if self.basis != other.basis {
            return Err(GwnError::Contract(format!(
                "basis mismatch: {:?} vs {:?}",
                self.basis, other.basis
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PolyFunctional) -> Result<PolyFunctional> {
        self.check_basis(other)?;
        Ok(Self::new(self.basis, self.kernels.add(&other.kernels)?))
    }

    pub fn sub(&self, other: &PolyFunctional) -> Result<PolyFunctional> {
        self.check_basis(other)?;
        Ok(Self::new(self.basis, self.kernels.sub(&other.kernels)?))
    }

    pub fn scale(&self, c: f64) -> PolyFunctional {
        Self::new(self.basis, self.kernels.scale(c))
    }

    /// Coefficient-wise distance; both sides must share a basis.
    pub fn max_abs_diff(&self, other: &PolyFunctional) -> Result<f64> {
        self.check_basis(other)?;
        self.kernels.max_abs_diff(&other.kernels)
    }

    pub fn to_basis(&self, basis: Basis, m: &AtomicMeasure) -> Result<PolyFunctional> {
        match basis {
            Basis::Monomial => wick_to_monomial(self, m),
            Basis::GammaWick => monomial_to_wick(self, m),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PolyFunctionalJson {
            basis: self.basis,
            kernels: self.kernels.to_json(),
        })
        .expect("plain JSON values serialize")
    }

    /// Parses `{"basis": "monomial" | "gamma_wick", "kernels": [{..}, ..]}`.
    pub fn from_json(m: usize, value: &serde_json::Value) -> Result<PolyFunctional> {
        let raw: PolyFunctionalJson = serde_json::from_value(value.clone())?;
        Ok(Self::new(
            raw.basis,
            FockVector::from_json(m, &raw.kernels)?,
        ))
    }
}

/// Wick power kernels `K_0, .., K_n` at an arbitrary real mass vector.
///
/// `K_{n+1}(u)` for a multiset `u` with occupation numbers `c_i` is
/// `(1/(n+1)) Σ_i [ c_i(s_i/w_i - 1) K_n(u-i) - 2c_i(c_i-1)/w_i K_n(u-i)
///  - c_i(c_i-1)/w_i K_{n-1}(u-2i) - c_i(c_i-1)(c_i-2)/w_i² K_{n-1}(u-2i) ]`.
pub fn wick_kernels_at(s: &[f64], m: &AtomicMeasure, n: usize) -> Result<Vec<SymTensor>> {
    check_dim(m.atoms(), s.len())?;
    let w = m.weights();
    let atoms = m.atoms();
    let mut out = vec![SymTensor::scalar(atoms, 1.0)?];
    let mut buf = Vec::with_capacity(n);
    for d in 0..n {
        let kn = &out[d];
        let knm1 = if d > 0 { Some(&out[d - 1]) } else { None };
        let inv = 1.0 / (d + 1) as f64;
        let next = SymTensor::from_fn(atoms, d + 1, |u| {
            let mut acc = 0.0;
            let mut pos = 0;
            while pos < u.len() {
                let i = u[pos];
                let mut end = pos;
                while end < u.len() && u[end] == i {
                    end += 1;
                }
                let c = (end - pos) as f64;
                buf.clear();
                buf.extend_from_slice(&u[..pos]);
                buf.extend_from_slice(&u[pos + 1..]);
                let k_less1 = kn.get_sorted(&buf);
                acc += c * (s[i] / w[i] - 1.0) * k_less1;
                if end - pos >= 2 {
                    acc -= 2.0 * c * (c - 1.0) / w[i] * k_less1;
                    let km = knm1.expect("c ≥ 2 implies degree ≥ 1");
                    buf.clear();
                    buf.extend_from_slice(&u[..pos]);
                    buf.extend_from_slice(&u[pos + 2..]);
                    let k_less2 = km.get_sorted(&buf);
                    acc -= c * (c - 1.0) / w[i] * k_less2;
                    acc -= c * (c - 1.0) * (c - 2.0) / (w[i] * w[i]) * k_less2;
                }
                pos = end;
            }
            acc * inv
        })?;
        out.push(next);
    }
    Ok(out)
}

/// Degree-`n` kernel of `:ω^{⊗n}:` at the sample.
pub fn wick_kernel(w: &OmegaSample, m: &AtomicMeasure, n: usize) -> Result<SymTensor> {
    Ok(wick_kernels_at(w.masses(), m, n)?
        .pop()
        .expect("at least K_0"))
}

/// `q_n = ⟨:ω^{⊗n}:, ξ^{⊗n}⟩` for `n ≤ N`, by a scalar route independent of
/// the kernel recurrence: per atom, `Q_{k+1} = (s - 2k - w)Q_k - k(k-1+w)Q_{k-1}`,
/// and the exponential generating functions of the atoms multiply.
pub fn wick_pair_rank_one(
    w: &OmegaSample,
    xi: &TestFunction,
    m: &AtomicMeasure,
    n: usize,
) -> Result<Vec<f64>> {
    check_dim(m.atoms(), w.len())?;
    check_dim(m.atoms(), xi.len())?;
    let mut product = vec![0.0; n + 1];
    product[0] = 1.0;
    for i in 0..m.atoms() {
        let (s, wi, x) = (w.masses()[i], m.weight(i), xi.get(i));
        let mut q = Vec::with_capacity(n + 1);
        q.push(1.0);
        if n >= 1 {
            q.push(s - wi);
        }
        for k in 1..n {
            let kf = k as f64;
            q.push((s - 2.0 * kf - wi) * q[k] - kf * (kf - 1.0 + wi) * q[k - 1]);
        }
        // egf coefficients (ξ_i^k Q_k / k!)
        let mut series = Vec::with_capacity(n + 1);
        let mut scale = 1.0;
        for (k, qk) in q.iter().enumerate() {
            if k > 0 {
                scale *= x / k as f64;
            }
            series.push(scale * qk);
        }
        let mut next = vec![0.0; n + 1];
        for (a, pa) in product.iter().enumerate() {
            for (b, sb) in series.iter().enumerate().take(n + 1 - a) {
                next[a + b] += pa * sb;
            }
        }
        product = next;
    }
    let mut fact = 1.0;
    Ok(product
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if k > 0 {
                fact *= k as f64;
            }
            c * fact
        })
        .collect())
}

/// Wick-basis representations of every monomial `s^M`, `|M| ≤ N`.
struct MonomialReps {
    degree: usize,
    reps: Vec<Vec<FockVector>>,
}

const REP_TABLE_LIMIT: usize = 20_000_000;
/// Distinct measures kept before the cache is flushed.
const REP_CACHE_MEASURES: usize = 64;

fn monomial_reps(m: &AtomicMeasure, n: usize) -> Result<Arc<MonomialReps>> {
    type Cache = Mutex<HashMap<Vec<u64>, Arc<MonomialReps>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let key: Vec<u64> = m.weights().iter().map(|w| w.to_bits()).collect();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("rep cache poisoned").get(&key) {
        if hit.degree >= n {
            return Ok(hit.clone());
        }
    }
    let atoms = m.atoms();
    let cumulative: usize = (0..=n).map(|d| multiset_count(atoms, d)).sum();
    if cumulative.saturating_mul(cumulative) > REP_TABLE_LIMIT {
        return Err(GwnError::Size(format!(
            "basis conversion over {atoms} atoms up to degree {n} exceeds the dense table limit"
        )));
    }
    let chis: Vec<TestFunction> = (0..atoms).map(|i| TestFunction::unit(atoms, i)).collect();
    let mut reps: Vec<Vec<FockVector>> = vec![vec![FockVector::vacuum(atoms)?]];
    for d in 1..=n {
        let table = multi_indices(atoms, d);
        let mut level = Vec::with_capacity(table.len());
        for u in table.iter() {
            let last = u[d - 1];
            let parent = &reps[d - 1][multiset_rank(&u[..d - 1])];
            level.push(gamma_field(&chis[last], parent, m)?);
        }
        reps.push(level);
    }
    let out = Arc::new(MonomialReps { degree: n, reps });
    let mut guard = cache.lock().expect("rep cache poisoned");
    if guard.len() >= REP_CACHE_MEASURES {
        guard.clear();
    }
    guard.insert(key, out.clone());
    Ok(out)
}

/// Rewrites a functional in the Gamma-Wick basis.
pub fn monomial_to_wick(p: &PolyFunctional, m: &AtomicMeasure) -> Result<PolyFunctional> {
    check_dim(m.atoms(), p.atoms())?;
    if p.basis == Basis::GammaWick {
        return Ok(p.clone());
    }
    let n = p.kernels.len().saturating_sub(1);
    let reps = monomial_reps(m, n)?;
    let mut out = FockVector::zero(m.atoms());
    for (d, k) in p.kernels.kernels().iter().enumerate() {
        for ((u, v), rep) in k.multi_indices().iter().zip(k.values()).zip(&reps.reps[d]) {
            if *v != 0.0 {
                out.axpy(v * multinomial(u), rep)?;
            }
        }
    }
    out.set_kernel(out.kernel_or_zero(n))?;
    Ok(PolyFunctional::new(Basis::GammaWick, out))
}

/// Rewrites a functional in the monomial basis by triangular elimination.
pub fn wick_to_monomial(p: &PolyFunctional, m: &AtomicMeasure) -> Result<PolyFunctional> {
    check_dim(m.atoms(), p.atoms())?;
    if p.basis == Basis::Monomial {
        return Ok(p.clone());
    }
    let mut rem = p.kernels.clone();
    let mut mono = FockVector::zero(m.atoms());
    for d in (0..p.kernels.len()).rev() {
        let lead = rem.kernel_or_zero(d);
        mono.set_kernel(lead.clone())?;
        if d == 0 || lead.is_zero() {
            continue;
        }
        let back = monomial_to_wick(&PolyFunctional::single(Basis::Monomial, lead)?, m)?;
        rem.axpy(-1.0, &back.kernels)?;
        rem.set_kernel(SymTensor::zeros(m.atoms(), d)?)?;
    }
    Ok(PolyFunctional::new(Basis::Monomial, mono))
}

/// `Σ_n Σ_{ordered tuples} ∏ s · f⁽ⁿ⁾` at an arbitrary real point.
fn evaluate_monomial_at(kernels: &FockVector, s: &[f64]) -> f64 {
    let mut terms = Vec::new();
    for k in kernels.kernels() {
        for (u, v) in k.multi_indices().iter().zip(k.values()) {
            if *v != 0.0 {
                terms.push(multinomial(u) * v * u.iter().map(|&i| s[i]).product::<f64>());
            }
        }
    }
    pairwise_sum(&terms)
}

/// Value of `p` at a real mass vector (negative entries allowed; polynomial
/// functionals extend to all of `ℝ^m`).
pub fn evaluate_at(p: &PolyFunctional, s: &[f64], m: &AtomicMeasure) -> Result<f64> {
    check_dim(m.atoms(), s.len())?;
    check_dim(m.atoms(), p.atoms())?;
    match p.basis {
        Basis::Monomial => Ok(evaluate_monomial_at(&p.kernels, s)),
        Basis::GammaWick => {
            let n = p.kernels.len().saturating_sub(1);
            let ks = wick_kernels_at(s, m, n)?;
            let terms = p
                .kernels
                .kernels()
                .iter()
                .zip(&ks)
                .map(|(f, k)| fock_inner_n(m, k, f))
                .collect::<Result<Vec<_>>>()?;
            Ok(pairwise_sum(&terms))
        }
    }
}

pub fn evaluate(p: &PolyFunctional, w: &OmegaSample, m: &AtomicMeasure) -> Result<f64> {
    evaluate_at(p, w.masses(), m)
}

/// Truncated Wick exponential against its closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WickExp {
    pub truncated_series: f64,
    pub closed_form: f64,
}

/// `Σ_{n≤N} q_n/n!` and `exp[⟨ω, φ/(1+φ)⟩ - ⟨log(1+φ)⟩]`.
pub fn wick_exp(
    w: &OmegaSample,
    phi: &TestFunction,
    m: &AtomicMeasure,
    n: usize,
) -> Result<WickExp> {
    check_dim(m.atoms(), phi.len())?;
    if let Some(bad) = phi.values().iter().find(|p| p.is_nan() || p.abs() >= 1.0) {
        return Err(GwnError::Domain(format!(
            "Wick exponential needs |φ| < 1, got {bad}"
        )));
    }
    let q = wick_pair_rank_one(w, phi, m, n)?;
    let mut fact = 1.0;
    let mut terms = Vec::with_capacity(n + 1);
    for (k, qk) in q.iter().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        terms.push(qk / fact);
    }
    let exponent: f64 = (0..m.atoms())
        .map(|i| {
            let p = phi.get(i);
            w.masses()[i] * p / (1.0 + p) - m.weight(i) * p.ln_1p()
        })
        .sum();
    Ok(WickExp {
        truncated_series: pairwise_sum(&terms),
        closed_form: exponent.exp(),
    })
}

/// Orthonormal polynomials of the Gamma(σ) law, from the Jacobi recurrence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaguerreSystem {
    pub sigma: f64,
    /// `coefficients[n][k]` is the coefficient of `s^k` in `P_n`.
    pub coefficients: Vec<Vec<f64>>,
}

fn horner(coeffs: &[f64], s: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
}

pub fn laguerre_system(sigma: f64, n: usize) -> Result<LaguerreSystem> {
    let jc = jacobi_coefficients(sigma, n)?;
    let mut coefficients: Vec<Vec<f64>> = vec![vec![1.0]];
    for d in 0..n {
        let pn = &coefficients[d];
        let mut next = vec![0.0; d + 2];
        for (k, c) in pn.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= jc.betas[d] * c;
        }
        if d > 0 {
            for (k, c) in coefficients[d - 1].iter().enumerate() {
                next[k] -= jc.alphas[d] * c;
            }
        }
        for c in &mut next {
            *c /= jc.alphas[d + 1];
        }
        coefficients.push(next);
    }
    Ok(LaguerreSystem {
        sigma,
        coefficients,
    })
}

impl LaguerreSystem {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn evaluate(&self, n: usize, s: f64) -> f64 {
        horner(&self.coefficients[n], s)
    }

    /// Monomial coefficients of `(-1)^n L_n^{(σ-1)} / √((σ)_n / n!)`.
    pub fn classical_coefficients(&self, n: usize) -> Vec<f64> {
        let alpha = self.sigma - 1.0;
        let norm2: f64 = (1..=n)
            .map(|j| (self.sigma + j as f64 - 1.0) / j as f64)
            .product();
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let mut out = Vec::with_capacity(n + 1);
        let mut k_fact = 1.0;
        for k in 0..=n {
            if k > 0 {
                k_fact *= k as f64;
            }
            // C(n+α, n-k) = ∏_{j=k+1}^{n} (α + j) / (n-k)!
            let mut binom = 1.0;
            for j in k + 1..=n {
                binom *= (alpha + j as f64) / (j - k) as f64;
            }
            let lk = if k % 2 == 0 { 1.0 } else { -1.0 } * binom / k_fact;
            out.push(sign * lk / norm2.sqrt());
        }
        out
    }

    pub fn classical(&self, n: usize, s: f64) -> f64 {
        horner(&self.classical_coefficients(n), s)
    }

    /// `max |Σ_q P_n P_k − δ_{nk}|` under a Gauss rule for the Gamma(σ) law.
    pub fn orthonormality_error(&self, nodes: usize) -> Result<f64> {
        let (xs, ws) = crate::quadrature::gauss_laguerre(nodes, self.sigma - 1.0)?;
        let vals: Vec<Vec<f64>> = (0..=self.degree())
            .map(|n| xs.iter().map(|&s| self.evaluate(n, s)).collect())
            .collect();
        let mut worst: f64 = 0.0;
        for a in 0..vals.len() {
            for b in a..vals.len() {
                let terms: Vec<f64> = (0..xs.len())
                    .map(|q| ws[q] * vals[a][q] * vals[b][q])
                    .collect();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((pairwise_sum(&terms) - target).abs());
            }
        }
        Ok(worst)
    }
}

/// `S[p](θ) = Σ_n ⟨F⁽ⁿ⁾, θ^{⊗n}⟩` over the Wick kernels of `p`.
pub fn s_transform(p: &PolyFunctional, theta: &TestFunction, m: &AtomicMeasure) -> Result<f64> {
    check_dim(m.atoms(), theta.len())?;
    let p = monomial_to_wick(p, m)?;
    let terms = p
        .kernels
        .kernels()
        .iter()
        .map(|f| fock_inner_n(m, f, &SymTensor::rank_one(theta, f.degree())?))
        .collect::<Result<Vec<_>>>()?;
    Ok(pairwise_sum(&terms))
}

/// `p ⋄ q`: degreewise `Σ_{a+b=n} F_a ⊗̂ G_b` on Wick kernels.
pub fn wick_product(
    p: &PolyFunctional,
    q: &PolyFunctional,
    m: &AtomicMeasure,
) -> Result<PolyFunctional> {
    let p = monomial_to_wick(p, m)?;
    let q = monomial_to_wick(q, m)?;
    let mut out = FockVector::zero(m.atoms());
    for a in p.kernels.kernels() {
        if a.is_zero() {
            continue;
        }
        for b in q.kernels.kernels() {
            if !b.is_zero() {
                out.add_kernel(1.0, &a.sym_product(b)?)?;
            }
        }
    }
    let top = p.kernels.len() + q.kernels.len();
    if top >= 2 {
        out.set_kernel(out.kernel_or_zero(top - 2))?;
    }
    Ok(PolyFunctional::new(Basis::GammaWick, out))
}

/// The generalized functional `Σ_n ⟨:ω^{⊗n}:, :υ^{⊗n}:/n!⟩`, truncated at `N`.
pub fn delta_functional(
    upsilon: &OmegaSample,
    m: &AtomicMeasure,
    n: usize,
) -> Result<PolyFunctional> {
    let ks = wick_kernels_at(upsilon.masses(), m, n)?;
    let mut fact = 1.0;
    let kernels = ks
        .into_iter()
        .enumerate()
        .map(|(d, k)| {
            if d > 0 {
                fact *= d as f64;
            }
            k.scale(1.0 / fact)
        })
        .collect();
    Ok(PolyFunctional::new(
        Basis::GammaWick,
        FockVector::from_kernels(m.atoms(), kernels)?,
    ))
}

/// `⟨⟨F, φ⟩⟩ = Σ_n n! ⟨F⁽ⁿ⁾, f⁽ⁿ⁾⟩` with `f` the Wick kernels of `φ`.
pub fn dual_pairing(
    big_f: &PolyFunctional,
    phi: &PolyFunctional,
    m: &AtomicMeasure,
) -> Result<f64> {
    let phi = monomial_to_wick(phi, m)?;
    let top = big_f.kernels.len().min(phi.kernels.len());
    let mut fact = 1.0;
    let mut terms = Vec::with_capacity(top);
    for d in 0..top {
        if d > 0 {
            fact *= d as f64;
        }
        terms.push(fact * fock_inner_n(m, &big_f.kernels.kernels()[d], &phi.kernels.kernels()[d])?);
    }
    Ok(pairwise_sum(&terms))
}
