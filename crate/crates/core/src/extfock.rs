//! Extended Fock inner product.
//!
//! The degree-`n` product sums, over every way of grouping the `n` slots into
//! loops, the integral of `f·g` restricted to the diagonal that identifies the
//! slots of each loop. Since kernels are symmetric only the underlying set
//! partition matters, and a block of size `k` carries `(k-1)!` cyclic orders.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{check_dim, GwnError, Result};
use crate::measure::{pairwise_sum, AtomicMeasure};
use crate::symtensor::{multinomial, FockVector, SymTensor};

/// Largest `n` accepted by [`enumerate_partitions`].
pub const MAX_PARTITION_N: usize = 10;

/// Default tolerance of [`is_off_diagonal`].
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// A set partition of the slots `0..n` together with its loop count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopPartition {
    pub blocks: Vec<Vec<usize>>,
    /// `∏_B (|B| - 1)!`
    pub multiplicity: u64,
}

impl LoopPartition {
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }
}

fn factorial_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// All set partitions of `0..n` in restricted-growth-string order.
pub fn enumerate_partitions(n: usize) -> Result<Vec<LoopPartition>> {
    if n == 0 || n > MAX_PARTITION_N {
        return Err(GwnError::Size(format!(
            "partition enumeration supports 1 ≤ n ≤ {MAX_PARTITION_N}, got {n}"
        )));
    }
    let mut out = Vec::new();
    // a[i] is the block of slot i; a[0] = 0 and a[i] ≤ 1 + max(a[..i])
    let mut a = vec![0usize; n];
    let mut maxes = vec![0usize; n];
    loop {
        let nblocks = maxes[n - 1] + 1;
        let mut blocks = vec![Vec::new(); nblocks];
        for (slot, &b) in a.iter().enumerate() {
            blocks[b].push(slot);
        }
        let multiplicity = blocks.iter().map(|b| factorial_u64(b.len() - 1)).product();
        out.push(LoopPartition {
            blocks,
            multiplicity,
        });

        let mut i = n - 1;
        loop {
            if i == 0 {
                return Ok(out);
            }
            if a[i] <= maxes[i - 1] {
                a[i] += 1;
                maxes[i] = maxes[i - 1].max(a[i]);
                for j in i + 1..n {
                    a[j] = 0;
                    maxes[j] = maxes[i];
                }
                break;
            }
            i -= 1;
        }
    }
}

type Signatures = Arc<Vec<(Vec<usize>, u64)>>;

/// Block-size signatures (sorted descending) with their summed multiplicities.
fn signatures(n: usize) -> Result<Signatures> {
    type Cache = Mutex<HashMap<usize, Signatures>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("signature cache poisoned").get(&n) {
        return Ok(hit.clone());
    }
    let mut acc: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for p in enumerate_partitions(n)? {
        let mut sizes = p.block_sizes();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        *acc.entry(sizes).or_default() += p.multiplicity;
    }
    let table = Arc::new(acc.into_iter().collect::<Vec<_>>());
    cache
        .lock()
        .expect("signature cache poisoned")
        .insert(n, table.clone());
    Ok(table)
}

fn check_pair(m: &AtomicMeasure, f: &SymTensor, g: &SymTensor) -> Result<()> {
    check_dim(m.atoms(), f.atoms())?;
    check_dim(m.atoms(), g.atoms())?;
    if f.degree() != g.degree() {
        return Err(GwnError::Contract(format!(
            "degree mismatch: {} vs {}",
            f.degree(),
            g.degree()
        )));
    }
    Ok(())
}

/// `Σ_{x ∈ atoms^r} ∏ w_{x_j} · (f g)(x_1^{b_1}, .., x_r^{b_r})`.
fn diagonal_integral(m: &AtomicMeasure, f: &SymTensor, g: &SymTensor, sizes: &[usize]) -> f64 {
    let atoms = m.atoms();
    let w = m.weights();
    let r = sizes.len();
    let mut vars = vec![0usize; r];
    let mut tuple = Vec::with_capacity(f.degree());
    let mut terms = Vec::with_capacity(atoms.pow(r as u32));
    loop {
        tuple.clear();
        let mut weight = 1.0;
        for (&x, &b) in vars.iter().zip(sizes) {
            weight *= w[x];
            tuple.extend(std::iter::repeat_n(x, b));
        }
        tuple.sort_unstable();
        terms.push(weight * f.get_sorted(&tuple) * g.get_sorted(&tuple));
        let mut k = r;
        loop {
            if k == 0 {
                return pairwise_sum(&terms);
            }
            k -= 1;
            vars[k] += 1;
            if vars[k] < atoms {
                break;
            }
            vars[k] = 0;
        }
    }
}

/// Degree-`n` extended inner product (without the `n!` weight).
pub fn ext_inner_n(m: &AtomicMeasure, f: &SymTensor, g: &SymTensor) -> Result<f64> {
    check_pair(m, f, g)?;
    let n = f.degree();
    if n == 0 {
        return Ok(f.values()[0] * g.values()[0]);
    }
    let terms: Vec<f64> = signatures(n)?
        .iter()
        .map(|(sizes, mult)| *mult as f64 * diagonal_integral(m, f, g, sizes))
        .collect();
    Ok(pairwise_sum(&terms))
}

/// `Σ_n n! · ext_inner_n(f_n, g_n)`; missing degrees count as zero.
pub fn ext_inner(m: &AtomicMeasure, f: &FockVector, g: &FockVector) -> Result<f64> {
    check_dim(m.atoms(), f.atoms())?;
    check_dim(m.atoms(), g.atoms())?;
    let top = f.len().min(g.len());
    let mut terms = Vec::with_capacity(top);
    let mut fact = 1.0;
    for n in 0..top {
        if n > 0 {
            fact *= n as f64;
        }
        terms.push(fact * ext_inner_n(m, &f.kernels()[n], &g.kernels()[n])?);
    }
    Ok(pairwise_sum(&terms))
}

/// Plain symmetric tensor product: the all-singletons term only.
pub fn fock_inner_n(m: &AtomicMeasure, f: &SymTensor, g: &SymTensor) -> Result<f64> {
    check_pair(m, f, g)?;
    let w = m.weights();
    let terms: Vec<f64> = f
        .multi_indices()
        .iter()
        .zip(f.values().iter().zip(g.values()))
        .map(|(u, (a, b))| multinomial(u) * u.iter().map(|&i| w[i]).product::<f64>() * a * b)
        .collect();
    Ok(pairwise_sum(&terms))
}

/// True iff `|f| ≤ tol` wherever an atom repeats.
pub fn is_off_diagonal(f: &SymTensor, tol: f64) -> bool {
    f.multi_indices()
        .iter()
        .zip(f.values())
        .all(|(u, v)| u.windows(2).all(|p| p[0] != p[1]) || v.abs() <= tol)
}
