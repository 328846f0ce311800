//! Differential and difference calculus on polynomial functionals.
//!
//! Conventions, fixed for the whole module:
//! * `ω + tδ_i` adds mass `t` at atom `i`, so `∇_i = ∂/∂s_i`;
//! * `ω + tξ` adds mass `t w_i ξ_i` at atom `i`, so `D_ξ = Σ_i w_i ξ_i ∇_i`;
//! * `⟨ω(x), g(x)⟩ = Σ_i s_i g(i)` (point-mass pairing, no base weights);
//! * `∂_i`, `∂†_i` act on Wick kernels, with `δ_i = e_i / w_i` as a kernel.
//!
//! The three "explicit action" identities compare a Fock-side operator
//! (applied to Wick kernels, then evaluated) with a right-hand side assembled
//! from `∇`, `D_ξ`, shifted evaluations and the point-mass pairing.

use serde::Serialize;

use crate::error::{check_dim, GwnError, Result};
use crate::fieldops::{annihilate1, annihilate2, create, gamma_field, neutral};
use crate::gammasample::JumpConfiguration;
use crate::measure::{pairwise_sum, AtomicMeasure, TestFunction};
use crate::quadrature::QuadratureRule;
use crate::symtensor::{FockVector, SymTensor};
use crate::wickcalc::{
    evaluate, evaluate_at, monomial_to_wick, s_transform, wick_to_monomial, Basis, OmegaSample,
    PolyFunctional,
};

fn check_atom(m: usize, atom: usize) -> Result<()> {
    if atom < m {
        Ok(())
    } else {
        Err(GwnError::Dimension {
            expected: m,
            found: atom + 1,
        })
    }
}

/// `f⁽ⁿ⁾ ↦ n f⁽ⁿ⁾(i, ·)` on every kernel; degree drops by one.
fn slot_derivative(kernels: &FockVector, atom: usize) -> Result<FockVector> {
    check_atom(kernels.atoms(), atom)?;
    let mut out = FockVector::zero(kernels.atoms());
    for (n, k) in kernels.kernels().iter().enumerate().skip(1) {
        out.add_kernel(n as f64, &k.slot_at(atom)?)?;
    }
    Ok(out)
}

/// `∇_i`: derivative along `δ_i`, computed on monomial kernels.
pub fn nabla(p: &PolyFunctional, atom: usize, m: &AtomicMeasure) -> Result<PolyFunctional> {
    let mono = wick_to_monomial(p, m)?;
    Ok(PolyFunctional::new(
        Basis::Monomial,
        slot_derivative(mono.kernels(), atom)?,
    ))
}

/// `∂_i`: Wick-kernel slot evaluation.
pub fn del(p: &PolyFunctional, atom: usize, m: &AtomicMeasure) -> Result<PolyFunctional> {
    let wick = monomial_to_wick(p, m)?;
    Ok(PolyFunctional::new(
        Basis::GammaWick,
        slot_derivative(wick.kernels(), atom)?,
    ))
}

/// `∂†_i`: `F⁽ⁿ⁾ ↦ δ_i ⊗̂ F⁽ⁿ⁾` on Wick kernels.
pub fn del_dagger(p: &PolyFunctional, atom: usize, m: &AtomicMeasure) -> Result<PolyFunctional> {
    check_atom(m.atoms(), atom)?;
    let wick = monomial_to_wick(p, m)?;
    let delta = SymTensor::rank_one(&m.delta_kernel(atom), 1)?;
    let mut out = FockVector::zero(m.atoms());
    for k in wick.kernels().kernels() {
        out.add_kernel(1.0, &delta.sym_product(k)?)?;
    }
    Ok(PolyFunctional::new(Basis::GammaWick, out))
}

/// `D_ξ = Σ_i w_i ξ_i ∇_i`, on monomial kernels.
pub fn gateaux(p: &PolyFunctional, xi: &TestFunction, m: &AtomicMeasure) -> Result<PolyFunctional> {
    check_dim(m.atoms(), xi.len())?;
    let mono = wick_to_monomial(p, m)?;
    let dir: Vec<f64> = xi
        .values()
        .iter()
        .zip(m.weights())
        .map(|(x, w)| x * w)
        .collect();
    let mut out = FockVector::zero(m.atoms());
    for (n, k) in mono.kernels().kernels().iter().enumerate().skip(1) {
        out.add_kernel(n as f64, &k.contract(&dir)?)?;
    }
    Ok(PolyFunctional::new(Basis::Monomial, out))
}

/// `ω(i)· = ∂† + 2∂†∂ + 1 + ∂ + ∂†∂∂` at atom `i`.
pub fn coordinate_multiply(
    p: &PolyFunctional,
    atom: usize,
    m: &AtomicMeasure,
) -> Result<PolyFunctional> {
    let p = monomial_to_wick(p, m)?;
    let d1 = del(&p, atom, m)?;
    let d2 = del(&d1, atom, m)?;
    let mut out = del_dagger(&p, atom, m)?;
    out = out.add(&del_dagger(&d1, atom, m)?.scale(2.0))?;
    out = out.add(&p)?;
    out = out.add(&d1)?;
    out = out.add(&del_dagger(&d2, atom, m)?)?;
    Ok(out)
}

fn shifted(s: &[f64], atom: usize, by: f64) -> Vec<f64> {
    let mut v = s.to_vec();
    v[atom] += by;
    v
}

/// `∫₀^∞ (p(ω + sδ_i) − p(ω)) e^{-s} ds` by quadrature.
pub fn del_integral(
    p: &PolyFunctional,
    atom: usize,
    w: &OmegaSample,
    m: &AtomicMeasure,
    q: &QuadratureRule,
) -> Result<f64> {
    check_atom(m.atoms(), atom)?;
    let mono = wick_to_monomial(p, m)?;
    let base = evaluate_at(&mono, w.masses(), m)?;
    q.try_integrate(|s| Ok(evaluate_at(&mono, &shifted(w.masses(), atom, s), m)? - base))
}

/// `Σ_i w_i ξ_i · del_integral(p, i)`.
pub fn annihilate1_integral(
    p: &PolyFunctional,
    xi: &TestFunction,
    w: &OmegaSample,
    m: &AtomicMeasure,
    q: &QuadratureRule,
) -> Result<f64> {
    check_dim(m.atoms(), xi.len())?;
    let mut terms = Vec::with_capacity(m.atoms());
    for i in 0..m.atoms() {
        if xi.get(i) != 0.0 {
            terms.push(m.weight(i) * xi.get(i) * del_integral(p, i, w, m, q)?);
        }
    }
    Ok(pairwise_sum(&terms))
}

/// `Σ_{(a,s) ∈ jumps} s ξ_a p(ω − sδ_a) − ⟨ξ⟩ p(ω)`, the adjoint of the
/// difference-integral annihilator on a jump configuration.
pub fn a1_plus_explicit(
    p: &PolyFunctional,
    xi: &TestFunction,
    jumps: &JumpConfiguration,
    m: &AtomicMeasure,
) -> Result<f64> {
    check_dim(m.atoms(), xi.len())?;
    let mono = wick_to_monomial(p, m)?;
    let omega = jumps.to_omega(m.atoms())?;
    let mut terms = Vec::with_capacity(jumps.jumps.len() + 1);
    for &(a, s) in &jumps.jumps {
        if xi.get(a) != 0.0 {
            terms.push(s * xi.get(a) * evaluate_at(&mono, &shifted(omega.masses(), a, -s), m)?);
        }
    }
    terms.push(-m.integrate(xi)? * evaluate_at(&mono, omega.masses(), m)?);
    Ok(pairwise_sum(&terms))
}

/// Deviations of `∂ = Σ_{n≥1} ∇ⁿ`, `∇ = Σ_{n≥1} (−1)^{n+1} ∂ⁿ` and
/// `∇_i ∂_j = ∂_j ∇_i`, coefficient-wise in the monomial basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesReport {
    pub del_as_nabla_series: f64,
    pub nabla_as_del_series: f64,
    pub commutator: f64,
}

pub fn series_identities_check(
    p: &PolyFunctional,
    atom: usize,
    other: usize,
    m: &AtomicMeasure,
) -> Result<SeriesReport> {
    let mono = wick_to_monomial(p, m)?;
    let wick = monomial_to_wick(p, m)?;
    let top = mono.degree();

    let lhs = wick_to_monomial(&del(&wick, atom, m)?, m)?;
    let mut acc = PolyFunctional::constant(m.atoms(), Basis::Monomial, 0.0)?;
    let mut power = mono.clone();
    for _ in 0..top {
        power = nabla(&power, atom, m)?;
        acc = acc.add(&power)?;
    }
    let del_as_nabla_series = lhs.max_abs_diff(&acc)?;

    let lhs = nabla(&mono, atom, m)?;
    let mut acc = PolyFunctional::constant(m.atoms(), Basis::GammaWick, 0.0)?;
    let mut power = wick.clone();
    let mut sign = 1.0;
    for _ in 0..top {
        power = del(&power, atom, m)?;
        acc = acc.add(&power.scale(sign))?;
        sign = -sign;
    }
    let nabla_as_del_series = lhs.max_abs_diff(&wick_to_monomial(&acc, m)?)?;

    let a = wick_to_monomial(&nabla(&del(&wick, other, m)?, atom, m)?, m)?;
    let b = wick_to_monomial(&del(&nabla(&mono, atom, m)?, other, m)?, m)?;
    let commutator = a.max_abs_diff(&b)?;

    Ok(SeriesReport {
        del_as_nabla_series,
        nabla_as_del_series,
        commutator,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub deviation: f64,
}

impl IdentityCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            deviation: (lhs - rhs).abs(),
        }
    }
}

/// `U(θ)` as a monomial functional in `θ`: kernels `∏ w · F⁽ⁿ⁾`.
fn s_transform_polynomial(p: &PolyFunctional, m: &AtomicMeasure) -> Result<PolyFunctional> {
    let wick = monomial_to_wick(p, m)?;
    let w = m.weights();
    let kernels = wick
        .kernels()
        .kernels()
        .iter()
        .map(|k| {
            let table = k.multi_indices();
            let vals = table
                .iter()
                .zip(k.values())
                .map(|(u, v)| v * u.iter().map(|&i| w[i]).product::<f64>())
                .collect();
            SymTensor::from_values(m.atoms(), k.degree(), vals)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PolyFunctional::new(
        Basis::Monomial,
        FockVector::from_kernels(m.atoms(), kernels)?,
    ))
}

/// S-transform side of coordinate multiplication, pointwise and integrated:
/// `S[ω(i)·p](θ) = (θ_i+1)U + D_{δ_i(1+2θ)}U + θ_i ∇_i²U` and
/// `S[⟨ω,ξ⟩·p](θ) = ⟨ξ,θ+1⟩U + D_{ξ(1+2θ)}U + ⟨ξ ∇²U, θ⟩`,
/// where `∇_i = (1/w_i) ∂/∂θ_i` on functions of the test function `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct STransformReport {
    pub pointwise: IdentityCheck,
    pub integrated: IdentityCheck,
}

pub fn s_transform_multiplication_check(
    p: &PolyFunctional,
    atom: usize,
    xi: &TestFunction,
    theta: &TestFunction,
    m: &AtomicMeasure,
) -> Result<STransformReport> {
    check_dim(m.atoms(), theta.len())?;
    check_dim(m.atoms(), xi.len())?;
    check_atom(m.atoms(), atom)?;
    let th = theta.values();
    let u_poly = s_transform_polynomial(p, m)?;
    let u = evaluate_at(&u_poly, th, m)?;
    let mut d1 = Vec::with_capacity(m.atoms());
    let mut d2 = Vec::with_capacity(m.atoms());
    for i in 0..m.atoms() {
        let g = nabla(&u_poly, i, m)?;
        d1.push(evaluate_at(&g, th, m)?);
        d2.push(evaluate_at(&nabla(&g, i, m)?, th, m)?);
    }

    let wi = m.weight(atom);
    let ti = th[atom];
    let lhs = s_transform(&coordinate_multiply(p, atom, m)?, theta, m)?;
    let rhs = (ti + 1.0) * u + (1.0 + 2.0 * ti) / wi * d1[atom] + ti / (wi * wi) * d2[atom];
    let pointwise = IdentityCheck::new(lhs, rhs);

    let wick = monomial_to_wick(p, m)?;
    let lhs = s_transform(
        &PolyFunctional::new(Basis::GammaWick, gamma_field(xi, wick.kernels(), m)?),
        theta,
        m,
    )?;
    let mut terms = vec![m.integrate(&theta.map(|t| t + 1.0).pointwise(xi)?)? * u];
    for i in 0..m.atoms() {
        let x = xi.get(i);
        terms.push(x * (1.0 + 2.0 * th[i]) * d1[i]);
        terms.push(x * th[i] / m.weight(i) * d2[i]);
    }
    let integrated = IdentityCheck::new(lhs, pairwise_sum(&terms));
    Ok(STransformReport {
        pointwise,
        integrated,
    })
}

/// Pointwise ingredients shared by the explicit-action identities.
struct Pieces {
    value: f64,
    /// `(∇_i p)(ω)`
    grad: Vec<f64>,
    /// `(∇_i² p)(ω)`
    grad2: Vec<f64>,
    gateaux: f64,
    mean_xi: f64,
}

fn pieces(
    mono: &PolyFunctional,
    xi: &TestFunction,
    w: &OmegaSample,
    m: &AtomicMeasure,
) -> Result<Pieces> {
    let s = w.masses();
    let mut grad = Vec::with_capacity(m.atoms());
    let mut grad2 = Vec::with_capacity(m.atoms());
    for i in 0..m.atoms() {
        let g = nabla(mono, i, m)?;
        grad.push(evaluate_at(&g, s, m)?);
        grad2.push(evaluate_at(&nabla(&g, i, m)?, s, m)?);
    }
    let gateaux = pairwise_sum(
        &(0..m.atoms())
            .map(|i| m.weight(i) * xi.get(i) * grad[i])
            .collect::<Vec<_>>(),
    );
    Ok(Pieces {
        value: evaluate_at(mono, s, m)?,
        grad,
        grad2,
        gateaux,
        mean_xi: m.integrate(xi)?,
    })
}

fn fock_side(
    op: impl Fn(&FockVector) -> Result<FockVector>,
    p: &PolyFunctional,
    w: &OmegaSample,
    m: &AtomicMeasure,
) -> Result<f64> {
    let wick = monomial_to_wick(p, m)?;
    evaluate(
        &PolyFunctional::new(Basis::GammaWick, op(wick.kernels())?),
        w,
        m,
    )
}

/// `a⁺(ξ)p = Σ_i s_i ξ_i (∇_i − 1)² p + D_ξ p − ⟨ξ⟩ p`.
pub fn creation_identity_check(
    p: &PolyFunctional,
    xi: &TestFunction,
    w: &OmegaSample,
    m: &AtomicMeasure,
) -> Result<IdentityCheck> {
    check_dim(m.atoms(), xi.len())?;
    let mono = wick_to_monomial(p, m)?;
    let pc = pieces(&mono, xi, w, m)?;
    let s = w.masses();
    let mut terms: Vec<f64> = (0..m.atoms())
        .map(|i| s[i] * xi.get(i) * (pc.grad2[i] - 2.0 * pc.grad[i] + pc.value))
        .collect();
    terms.push(pc.gateaux);
    terms.push(-pc.mean_xi * pc.value);
    let lhs = fock_side(|f| create(xi, f), p, w, m)?;
    Ok(IdentityCheck::new(lhs, pairwise_sum(&terms)))
}

/// `a⁰(ξ)p = Σ_i s_i ξ_i ∇_i(1 − ∇_i) p − D_ξ p`.
pub fn neutral_identity_check(
    p: &PolyFunctional,
    xi: &TestFunction,
    w: &OmegaSample,
    m: &AtomicMeasure,
) -> Result<IdentityCheck> {
    check_dim(m.atoms(), xi.len())?;
    let mono = wick_to_monomial(p, m)?;
    let pc = pieces(&mono, xi, w, m)?;
    let s = w.masses();
    let mut terms: Vec<f64> = (0..m.atoms())
        .map(|i| s[i] * xi.get(i) * (pc.grad[i] - pc.grad2[i]))
        .collect();
    terms.push(-pc.gateaux);
    let lhs = fock_side(|f| neutral(xi, f), p, w, m)?;
    Ok(IdentityCheck::new(lhs, pairwise_sum(&terms)))
}

/// The second annihilator against its two explicit forms:
/// * gradient form: `Σ s_i ξ_i ∇_i² p + D_ξ p − Σ w_i ξ_i ∫ ∇_i p(ω + sδ_i) e^{-s} ds`;
/// * shift form: `Σ s_i ξ_i ∇_i² p + D_ξ p − Σ w_i ξ_i ∫ p(ω + sδ_i) e^{-s} ds + ⟨ξ⟩ p`.
///
/// The shift form is also reported with `−⟨ξ⟩p` as its last term, the sign
/// under which it disagrees (by `2⟨ξ⟩p`) with the operator it represents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaAnnihilationReport {
    pub gradient_form: IdentityCheck,
    pub shift_form: IdentityCheck,
    pub shift_form_flipped_sign: IdentityCheck,
}

pub fn gamma_annihilation_identity_check(
    p: &PolyFunctional,
    xi: &TestFunction,
    w: &OmegaSample,
    m: &AtomicMeasure,
    q: &QuadratureRule,
) -> Result<GammaAnnihilationReport> {
    check_dim(m.atoms(), xi.len())?;
    let mono = wick_to_monomial(p, m)?;
    let pc = pieces(&mono, xi, w, m)?;
    let s = w.masses();
    let mut head: Vec<f64> = (0..m.atoms())
        .map(|i| s[i] * xi.get(i) * pc.grad2[i])
        .collect();
    head.push(pc.gateaux);
    let head = pairwise_sum(&head);

    let mut grad_int = Vec::with_capacity(m.atoms());
    let mut shift_int = Vec::with_capacity(m.atoms());
    for i in 0..m.atoms() {
        let x = xi.get(i);
        if x == 0.0 {
            continue;
        }
        let g = nabla(&mono, i, m)?;
        let wi = m.weight(i);
        grad_int.push(wi * x * q.try_integrate(|t| evaluate_at(&g, &shifted(s, i, t), m))?);
        shift_int.push(wi * x * q.try_integrate(|t| evaluate_at(&mono, &shifted(s, i, t), m))?);
    }
    let lhs = fock_side(|f| annihilate2(xi, f), p, w, m)?;
    let gradient_form = IdentityCheck::new(lhs, head - pairwise_sum(&grad_int));
    let shift = head - pairwise_sum(&shift_int);
    Ok(GammaAnnihilationReport {
        gradient_form,
        shift_form: IdentityCheck::new(lhs, shift + pc.mean_xi * pc.value),
        shift_form_flipped_sign: IdentityCheck::new(lhs, shift - pc.mean_xi * pc.value),
    })
}

/// `(a⁺ + 2a⁰ + ⟨ξ⟩ + a₁⁻ + a₂⁻) p` assembled from the explicit forms
/// (creation, neutral, difference integral, gradient form), against
/// `⟨ω,ξ⟩ p(ω)`.
pub fn reassembly_check(
    p: &PolyFunctional,
    xi: &TestFunction,
    w: &OmegaSample,
    m: &AtomicMeasure,
    q: &QuadratureRule,
) -> Result<IdentityCheck> {
    let plus = creation_identity_check(p, xi, w, m)?.rhs;
    let zero = neutral_identity_check(p, xi, w, m)?.rhs;
    let minus1 = annihilate1_integral(p, xi, w, m, q)?;
    let minus2 = gamma_annihilation_identity_check(p, xi, w, m, q)?
        .gradient_form
        .rhs;
    let value = evaluate(p, w, m)?;
    let mean = m.integrate(xi)?;
    let assembled = pairwise_sum(&[plus, 2.0 * zero, mean * value, minus1, minus2]);
    Ok(IdentityCheck::new(w.pairing(xi)? * value, assembled))
}

/// `a₁⁻(ξ)` on the Fock side, evaluated at `ω`.
pub fn annihilate1_fock_side(
    p: &PolyFunctional,
    xi: &TestFunction,
    w: &OmegaSample,
    m: &AtomicMeasure,
) -> Result<f64> {
    fock_side(|f| annihilate1(xi, f, m), p, w, m)
}
