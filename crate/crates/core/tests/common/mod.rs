//! Independent reference computations for the integration tests. Nothing here
//! calls the library routine it is used to check.

#![allow(dead_code)]

use gwn::symtensor::multi_indices;
use gwn::wickcalc::{Basis, PolyFunctional};
use gwn::{AtomicMeasure, FockVector, SymTensor, TestFunction};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_measure(rng: &mut ChaCha8Rng, atoms: usize) -> AtomicMeasure {
    AtomicMeasure::new((0..atoms).map(|_| rng.random_range(0.2..2.0)).collect()).unwrap()
}

pub fn random_tf(rng: &mut ChaCha8Rng, atoms: usize, lo: f64, hi: f64) -> TestFunction {
    TestFunction::new((0..atoms).map(|_| rng.random_range(lo..hi)).collect())
}

pub fn random_tensor(rng: &mut ChaCha8Rng, atoms: usize, degree: usize) -> SymTensor {
    SymTensor::from_fn(atoms, degree, |_| rng.random_range(-1.0..1.0)).unwrap()
}

pub fn random_fock(rng: &mut ChaCha8Rng, atoms: usize, degree: usize) -> FockVector {
    let kernels = (0..=degree).map(|n| random_tensor(rng, atoms, n)).collect();
    FockVector::from_kernels(atoms, kernels).unwrap()
}

pub fn random_poly(
    rng: &mut ChaCha8Rng,
    atoms: usize,
    degree: usize,
    basis: Basis,
) -> PolyFunctional {
    PolyFunctional::new(basis, random_fock(rng, atoms, degree))
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k - 1 {
            heap(k - 1, a, out);
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
        heap(k - 1, a, out);
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

pub fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut c = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            c.push(i);
            i = perm[i];
        }
        out.push(c);
    }
    out
}

/// `Σ_{π ∈ S_n} ∫ f g` on the diagonal that glues each cycle of `π` into one
/// point integrated against `σ`.
pub fn ext_inner_n_bruteforce(m: &AtomicMeasure, f: &SymTensor, g: &SymTensor) -> f64 {
    let n = f.degree();
    if n == 0 {
        return f.values()[0] * g.values()[0];
    }
    let atoms = m.atoms();
    let mut total = 0.0;
    let mut tuple = vec![0usize; n];
    for perm in permutations(n) {
        let cyc = cycles(&perm);
        let r = cyc.len();
        let mut assign = vec![0usize; r];
        loop {
            let mut weight = 1.0;
            for (c, &a) in cyc.iter().zip(&assign) {
                weight *= m.weight(a);
                for &slot in c {
                    tuple[slot] = a;
                }
            }
            total += weight * f.get(&tuple) * g.get(&tuple);
            let mut k = 0;
            while k < r {
                assign[k] += 1;
                if assign[k] < atoms {
                    break;
                }
                assign[k] = 0;
                k += 1;
            }
            if k == r {
                break;
            }
        }
    }
    total
}

/// Generalized Laguerre `L_k^{(α)}(x)` from its explicit sum.
pub fn laguerre_explicit(k: usize, alpha: f64, x: f64) -> f64 {
    let mut total = 0.0;
    for j in 0..=k {
        // C(k+α, k−j)
        let mut binom = 1.0;
        for t in 1..=(k - j) {
            binom *= (alpha + j as f64 + t as f64) / t as f64;
        }
        let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
        total += sign * binom * x.powi(j as i32) / factorial(j);
    }
    total
}

/// Monic orthogonal polynomial of degree `k` for `Gamma(w)`: `(−1)^k k! L_k^{(w−1)}`.
pub fn monic_gamma_poly(k: usize, w: f64, s: f64) -> f64 {
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * factorial(k) * laguerre_explicit(k, w - 1.0, s)
}

/// `⟨:ω^{⊗n}:, ξ^{⊗n}⟩` via independence of atoms: a multinomial sum of
/// products of per-atom monic Gamma polynomials.
pub fn wick_rank_one_oracle(s: &[f64], m: &AtomicMeasure, xi: &TestFunction, n: usize) -> f64 {
    let mut total = 0.0;
    for u in multi_indices(m.atoms(), n).iter() {
        let mut counts = vec![0usize; m.atoms()];
        for &i in u {
            counts[i] += 1;
        }
        let mut term = factorial(n);
        for (i, &k) in counts.iter().enumerate() {
            term *=
                xi.get(i).powi(k as i32) * monic_gamma_poly(k, m.weight(i), s[i]) / factorial(k);
        }
        total += term;
    }
    total
}

/// `:exp⟨ω,φ⟩: = ∏_i (1+φ_i)^{−w_i} exp(s_i φ_i / (1+φ_i))`, from the
/// Laguerre generating function.
pub fn wick_exp_oracle(s: &[f64], m: &AtomicMeasure, phi: &TestFunction) -> f64 {
    (0..m.atoms())
        .map(|i| {
            let p = phi.get(i);
            (1.0 + p).powf(-m.weight(i)) * (s[i] * p / (1.0 + p)).exp()
        })
        .product()
}

/// `Σ_n Σ_{ordered tuples} f(tuple) ∏ s` by brute force over all `m^n` tuples.
pub fn eval_monomial_bruteforce(kernels: &FockVector, s: &[f64]) -> f64 {
    let atoms = kernels.atoms();
    let mut total = 0.0;
    for k in kernels.kernels() {
        let n = k.degree();
        let mut tuple = vec![0usize; n];
        loop {
            total += k.get(&tuple) * tuple.iter().map(|&i| s[i]).product::<f64>();
            let mut j = 0;
            while j < n {
                tuple[j] += 1;
                if tuple[j] < atoms {
                    break;
                }
                tuple[j] = 0;
                j += 1;
            }
            if j == n {
                break;
            }
        }
    }
    total
}

/// Coefficients `c_0..c_d` of a polynomial of degree ≤ `d` from `d+1` samples.
pub fn poly_coefficients(f: impl Fn(f64) -> f64, d: usize) -> Vec<f64> {
    let pts: Vec<f64> = (0..=d).map(|j| j as f64 - d as f64 / 2.0).collect();
    let v = DMatrix::from_fn(d + 1, d + 1, |r, c| pts[r].powi(c as i32));
    let y = DVector::from_iterator(d + 1, pts.iter().map(|&t| f(t)));
    let sol = v.lu().solve(&y).expect("Vandermonde system is regular");
    sol.iter().copied().collect()
}

/// `∫₀^∞ q(s) e^{-s} ds = Σ_k c_k k!` for polynomial `q`.
pub fn exp_moment_integral(coeffs: &[f64]) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * factorial(k))
        .sum()
}

/// Relative deviation `|a−b| / max(1, |b|)`.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}
