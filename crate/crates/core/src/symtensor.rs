//! Dense symmetric tensor kernels over a finite set of atoms.
//!
//! A degree-`n` symmetric kernel over `m` atoms is stored once per multiset of
//! size `n`, at the sorted representative tuple. Multisets are ranked in
//! colexicographic order through the bijection `i_k ↦ i_k + k` onto
//! `n`-subsets of `{0, .., m+n-2}`, so lookups never hash.
//!
//! Symmetrization (`⊗̂`) uses the projection convention: the value of
//! `a ⊗̂ b` at a tuple is the mean, over all ways of distributing the tuple's
//! positions between `a` and `b`, of the product of the two kernel values.
//! With this convention `φ ⊗̂ φ = φ^{⊗2}`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, GwnError, Result};
use crate::measure::TestFunction;

const BINOM_ROWS: usize = 64;

fn binom_table() -> &'static [[u64; BINOM_ROWS]; BINOM_ROWS] {
    static TABLE: OnceLock<Box<[[u64; BINOM_ROWS]; BINOM_ROWS]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Box::new([[0u64; BINOM_ROWS]; BINOM_ROWS]);
        for n in 0..BINOM_ROWS {
            t[n][0] = 1;
            for k in 1..=n {
                t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            }
        }
        t
    })
}

/// Binomial coefficient `C(n, k)` for `n < 64`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    assert!(n < BINOM_ROWS, "binomial table covers n < {BINOM_ROWS}");
    binom_table()[n][k]
}

/// Number of multisets of size `n` drawn from `m` atoms.
pub fn multiset_count(m: usize, n: usize) -> usize {
    if n == 0 {
        return 1;
    }
    binomial(m + n - 1, n) as usize
}

fn rank_iter<I: Iterator<Item = usize>>(sorted: I) -> usize {
    sorted
        .enumerate()
        .map(|(k, i)| binomial(i + k, k + 1) as usize)
        .sum()
}

/// Colex rank of a sorted (non-decreasing) multi-index.
pub fn multiset_rank(sorted: &[usize]) -> usize {
    rank_iter(sorted.iter().copied())
}

/// `n! / ∏ c_i!`: the number of ordered tuples with the given sorted representative.
pub fn multinomial(sorted: &[usize]) -> f64 {
    let mut result = 1.0;
    let mut k = 0usize;
    let mut run = 0usize;
    for (pos, &i) in sorted.iter().enumerate() {
        if pos > 0 && sorted[pos - 1] == i {
            run += 1;
        } else {
            run = 1;
        }
        k += 1;
        // multiply by k / run, accumulating n!/∏c! incrementally
        result *= k as f64 / run as f64;
    }
    result
}

/// Occupation numbers of a sorted multi-index.
pub fn counts(sorted: &[usize], m: usize) -> Vec<usize> {
    let mut c = vec![0; m];
    for &i in sorted {
        c[i] += 1;
    }
    c
}

/// Sorted multi-indices of size `n` over `m` atoms, in rank order.
#[derive(Debug)]
pub struct MultiIndexTable {
    degree: usize,
    flat: Vec<usize>,
}

impl MultiIndexTable {
    fn build(m: usize, n: usize) -> Self {
        let mut flat = Vec::with_capacity(multiset_count(m, n) * n);
        let mut cur = vec![0usize; n];
        fn rec(m: usize, pos: usize, cur: &mut Vec<usize>, flat: &mut Vec<usize>) {
            // pos counts down from the last slot; larger slots vary slowest in colex order
            if pos == 0 {
                flat.extend_from_slice(cur);
                return;
            }
            let slot = pos - 1;
            for v in 0..m {
                cur[slot] = v;
                rec(v + 1, slot, cur, flat);
            }
        }
        if n == 0 {
            return Self { degree: 0, flat };
        }
        rec(m, n, &mut cur, &mut flat);
        Self { degree: n, flat }
    }

    pub fn len(&self) -> usize {
        self.flat.len().checked_div(self.degree).unwrap_or(1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, rank: usize) -> &[usize] {
        &self.flat[rank * self.degree..(rank + 1) * self.degree]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> + '_ {
        (0..self.len()).map(move |r| self.get(r))
    }
}

/// Shared, lazily built table of multi-indices for `(m, n)`.
pub fn multi_indices(m: usize, n: usize) -> Arc<MultiIndexTable> {
    type Cache = Mutex<HashMap<(usize, usize), Arc<MultiIndexTable>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("multi-index cache poisoned");
    guard
        .entry((m, n))
        .or_insert_with(|| Arc::new(MultiIndexTable::build(m, n)))
        .clone()
}

fn check_size(m: usize, n: usize) -> Result<()> {
    if m == 0 {
        return Err(GwnError::Size("tensor needs at least one atom".into()));
    }
    if m + n >= BINOM_ROWS {
        return Err(GwnError::Size(format!(
            "m + degree = {} exceeds the supported range (< {BINOM_ROWS})",
            m + n
        )));
    }
    Ok(())
}

/// Iterates a sorted tuple with one extra copy of `j` merged in.
fn with_inserted(u: &[usize], j: usize) -> impl Iterator<Item = usize> + '_ {
    let split = u.partition_point(|&x| x <= j);
    u[..split]
        .iter()
        .copied()
        .chain(std::iter::once(j))
        .chain(u[split..].iter().copied())
}

/// Iterates a sorted tuple with one copy of `j` removed. `j` must occur.
fn with_removed(u: &[usize], j: usize) -> impl Iterator<Item = usize> + '_ {
    let at = u.partition_point(|&x| x < j);
    debug_assert!(u.get(at) == Some(&j));
    u[..at].iter().copied().chain(u[at + 1..].iter().copied())
}

/// Degree-`n` symmetric kernel over `m` atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor {
    m: usize,
    degree: usize,
    values: Vec<f64>,
}

impl SymTensor {
    pub fn zeros(m: usize, degree: usize) -> Result<Self> {
        check_size(m, degree)?;
        Ok(Self {
            m,
            degree,
            values: vec![0.0; multiset_count(m, degree)],
        })
    }

    pub fn scalar(m: usize, c: f64) -> Result<Self> {
        check_size(m, 0)?;
        Ok(Self {
            m,
            degree: 0,
            values: vec![c],
        })
    }

    /// Builds a kernel by evaluating `f` at every sorted multi-index.
    pub fn from_fn(m: usize, degree: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        check_size(m, degree)?;
        let table = multi_indices(m, degree);
        let values = table.iter().map(&mut f).collect();
        Ok(Self { m, degree, values })
    }

    pub fn from_values(m: usize, degree: usize, values: Vec<f64>) -> Result<Self> {
        check_size(m, degree)?;
        check_dim(multiset_count(m, degree), values.len())?;
        Ok(Self { m, degree, values })
    }

    /// `f^{⊗n}`: value `∏_k f_{i_k}` at every tuple.
    pub fn rank_one(f: &TestFunction, n: usize) -> Result<Self> {
        let v = f.values();
        Self::from_fn(f.len(), n, |idx| idx.iter().map(|&i| v[i]).product())
    }

    pub fn atoms(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn multi_indices(&self) -> Arc<MultiIndexTable> {
        multi_indices(self.m, self.degree)
    }

    /// Kernel value at an arbitrary (unsorted) tuple.
    pub fn get(&self, tuple: &[usize]) -> f64 {
        assert_eq!(
            tuple.len(),
            self.degree,
            "tuple length must equal the degree"
        );
        let mut sorted = tuple.to_vec();
        sorted.sort_unstable();
        self.values[multiset_rank(&sorted)]
    }

    pub fn get_sorted(&self, sorted: &[usize]) -> f64 {
        self.values[multiset_rank(sorted)]
    }

    fn get_inserted(&self, u: &[usize], j: usize) -> f64 {
        self.values[rank_iter(with_inserted(u, j))]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    fn check_same_shape(&self, other: &SymTensor) -> Result<()> {
        check_dim(self.m, other.m)?;
        if self.degree != other.degree {
            return Err(GwnError::Contract(format!(
                "degree mismatch: {} vs {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &SymTensor) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |a, (x, y)| a.max((x - y).abs())))
    }

    pub fn scale(&self, c: f64) -> SymTensor {
        SymTensor {
            m: self.m,
            degree: self.degree,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, c: f64, other: &SymTensor) -> Result<()> {
        self.check_same_shape(other)?;
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += c * b;
        }
        Ok(())
    }

    pub fn add(&self, other: &SymTensor) -> Result<SymTensor> {
        let mut out = self.clone();
        out.axpy(1.0, other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &SymTensor) -> Result<SymTensor> {
        let mut out = self.clone();
        out.axpy(-1.0, other)?;
        Ok(out)
    }

    /// Symmetric tensor product `a ⊗̂ b` (projection convention).
    pub fn sym_product(&self, other: &SymTensor) -> Result<SymTensor> {
        check_dim(self.m, other.m)?;
        let (p, q) = (self.degree, other.degree);
        let n = p + q;
        let norm = 1.0 / binomial(n, p) as f64;
        let m = self.m;
        let mut left = Vec::with_capacity(p);
        let mut right = Vec::with_capacity(q);
        SymTensor::from_fn(m, n, |u| {
            // choose k_i ≤ c_i copies of each atom for the left factor, Σ k_i = p,
            // weighted by the number of position subsets ∏ C(c_i, k_i)
            let c = run_lengths(u);
            let mut acc = 0.0;
            let mut ks = vec![0usize; c.len()];
            loop {
                let used: usize = ks.iter().sum();
                if used == p {
                    left.clear();
                    right.clear();
                    let mut weight = 1.0;
                    for (r, &(atom, cnt)) in c.iter().enumerate() {
                        let k = ks[r];
                        weight *= binomial(cnt, k) as f64;
                        left.extend(std::iter::repeat_n(atom, k));
                        right.extend(std::iter::repeat_n(atom, cnt - k));
                    }
                    acc += weight * self.get_sorted(&left) * other.get_sorted(&right);
                }
                // odometer over ks with bounds c and early exit when sum exceeds p
                let mut r = 0;
                loop {
                    if r == ks.len() {
                        return acc * norm;
                    }
                    if ks[r] < c[r].1 && ks.iter().sum::<usize>() < p {
                        ks[r] += 1;
                        break;
                    }
                    ks[r] = 0;
                    r += 1;
                }
            }
        })
    }

    /// Restriction to the diagonal selected by a set partition of the slots
    /// `{0, .., n-1}`: all slots in block `b` are set to the `b`-th variable.
    pub fn diagonal_restrict(&self, partition: &[Vec<usize>]) -> Result<DenseArray> {
        let mut seen = vec![false; self.degree];
        for block in partition {
            if block.is_empty() {
                return Err(GwnError::Contract("empty block in partition".into()));
            }
            for &slot in block {
                if slot >= self.degree || seen[slot] {
                    return Err(GwnError::Contract(format!(
                        "blocks must partition 0..{}",
                        self.degree
                    )));
                }
                seen[slot] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(GwnError::Contract(format!(
                "blocks must partition 0..{}",
                self.degree
            )));
        }
        let sizes: Vec<usize> = partition.iter().map(Vec::len).collect();
        let mut tuple = Vec::with_capacity(self.degree);
        DenseArray::from_fn(self.m, partition.len(), |vars| {
            tuple.clear();
            for (&v, &s) in vars.iter().zip(&sizes) {
                tuple.extend(std::iter::repeat_n(v, s));
            }
            tuple.sort_unstable();
            self.get_sorted(&tuple)
        })
    }

    /// Multiplies one slot by `g` and re-symmetrizes:
    /// value at a tuple is `(1/n) Σ_p g(i_p) · t(tuple)`.
    pub fn multiply_pointwise_first_slot(&self, g: &TestFunction) -> Result<SymTensor> {
        check_dim(self.m, g.len())?;
        if self.degree == 0 {
            return Err(GwnError::Arity(
                "slot multiplication needs degree ≥ 1".into(),
            ));
        }
        let n = self.degree as f64;
        let gv = g.values();
        let table = self.multi_indices();
        let values = table
            .iter()
            .zip(&self.values)
            .map(|(u, v)| u.iter().map(|&i| gv[i]).sum::<f64>() / n * v)
            .collect();
        Ok(SymTensor {
            m: self.m,
            degree: self.degree,
            values,
        })
    }

    /// Contracts one slot against `v` without weights: `u ↦ Σ_j v_j t(j, u)`.
    pub fn contract(&self, v: &[f64]) -> Result<SymTensor> {
        check_dim(self.m, v.len())?;
        if self.degree == 0 {
            return Err(GwnError::Arity("contraction needs degree ≥ 1".into()));
        }
        SymTensor::from_fn(self.m, self.degree - 1, |u| {
            v.iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(j, c)| c * self.get_inserted(u, j))
                .sum()
        })
    }

    /// Evaluates one slot at `atom`: `u ↦ t(atom, u)`.
    pub fn slot_at(&self, atom: usize) -> Result<SymTensor> {
        if atom >= self.m {
            return Err(GwnError::Dimension {
                expected: self.m,
                found: atom + 1,
            });
        }
        if self.degree == 0 {
            return Err(GwnError::Arity("slot evaluation needs degree ≥ 1".into()));
        }
        SymTensor::from_fn(self.m, self.degree - 1, |u| self.get_inserted(u, atom))
    }

    /// Identifies two slots, multiplies by `xi` at the identified point and
    /// re-symmetrizes. Degree drops by one:
    /// `u ↦ (1/(n-1)) Σ_p xi(u_p) t(u_p, u_p, u without p)`.
    pub fn identify_pair(&self, xi: &TestFunction) -> Result<SymTensor> {
        check_dim(self.m, xi.len())?;
        if self.degree < 2 {
            return Err(GwnError::Arity(
                "pair identification needs degree ≥ 2".into(),
            ));
        }
        let k = (self.degree - 1) as f64;
        let xv = xi.values();
        SymTensor::from_fn(self.m, self.degree - 1, |u| {
            u.iter()
                .map(|&i| xv[i] * self.get_inserted(u, i))
                .sum::<f64>()
                / k
        })
    }

    /// Removes one copy of `atom` from every multi-index that contains it,
    /// i.e. reads `t` at `u ∪ {atom}` for a tuple `u` of degree `n-1`.
    /// Exposed for kernel recurrences that peel off a slot.
    pub fn get_with_removed(&self, u: &[usize], atom: usize) -> f64 {
        self.values[rank_iter(with_removed(u, atom))]
    }

    /// JSON object keyed by comma-joined sorted multi-indices.
    pub fn to_json_map(&self) -> serde_json::Map<String, serde_json::Value> {
        self.multi_indices()
            .iter()
            .zip(&self.values)
            .map(|(u, v)| (index_key(u), serde_json::Value::from(*v)))
            .collect()
    }

    /// Inverse of [`SymTensor::to_json_map`]. Keys may list indices in any
    /// order; missing entries are zero.
    pub fn from_json_map(
        m: usize,
        degree: usize,
        map: &serde_json::Map<String, serde_json::Value>,
    ) -> Result<SymTensor> {
        let mut t = SymTensor::zeros(m, degree)?;
        for (key, value) in map {
            let mut idx: Vec<usize> = if key.trim().is_empty() {
                Vec::new()
            } else {
                key.split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|_| GwnError::Contract(format!("bad multi-index key {key:?}")))
                    })
                    .collect::<Result<_>>()?
            };
            if idx.len() != degree || idx.iter().any(|&i| i >= m) {
                return Err(GwnError::Contract(format!(
                    "multi-index {key:?} does not fit degree {degree} over {m} atoms"
                )));
            }
            idx.sort_unstable();
            let v = value
                .as_f64()
                .ok_or_else(|| GwnError::Contract(format!("value at {key:?} is not a number")))?;
            t.values[multiset_rank(&idx)] = v;
        }
        Ok(t)
    }
}

fn index_key(u: &[usize]) -> String {
    u.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// `(atom, count)` runs of a sorted tuple.
fn run_lengths(u: &[usize]) -> Vec<(usize, usize)> {
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for &i in u {
        match runs.last_mut() {
            Some((a, c)) if *a == i => *c += 1,
            _ => runs.push((i, 1)),
        }
    }
    runs
}

/// A dense, generally non-symmetric array over `m^arity` tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseArray {
    m: usize,
    arity: usize,
    values: Vec<f64>,
}

impl DenseArray {
    pub fn from_fn(m: usize, arity: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let len = m
            .checked_pow(arity as u32)
            .filter(|&l| l <= 1 << 26)
            .ok_or_else(|| GwnError::Size(format!("dense array {m}^{arity} too large")))?;
        let mut values = Vec::with_capacity(len);
        let mut idx = vec![0usize; arity];
        for _ in 0..len {
            values.push(f(&idx));
            for slot in (0..arity).rev() {
                idx[slot] += 1;
                if idx[slot] < m {
                    break;
                }
                idx[slot] = 0;
            }
        }
        Ok(Self { m, arity, values })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn atoms(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Row-major lookup.
    pub fn get(&self, idx: &[usize]) -> f64 {
        assert_eq!(idx.len(), self.arity);
        let flat = idx.iter().fold(0usize, |acc, &i| acc * self.m + i);
        self.values[flat]
    }
}

/// A finite sequence of symmetric kernels of degrees `0..=N` over `m` atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    m: usize,
    kernels: Vec<SymTensor>,
}

impl FockVector {
    /// The zero vector (no kernels stored).
    pub fn zero(m: usize) -> Self {
        Self {
            m,
            kernels: Vec::new(),
        }
    }

    /// `Ω = (1, 0, 0, ..)`.
    pub fn vacuum(m: usize) -> Result<Self> {
        Ok(Self {
            m,
            kernels: vec![SymTensor::scalar(m, 1.0)?],
        })
    }

    pub fn from_kernels(m: usize, kernels: Vec<SymTensor>) -> Result<Self> {
        for (n, k) in kernels.iter().enumerate() {
            check_dim(m, k.atoms())?;
            if k.degree() != n {
                return Err(GwnError::Contract(format!(
                    "kernel at position {n} has degree {}",
                    k.degree()
                )));
            }
        }
        Ok(Self { m, kernels })
    }

    /// The vector `(0, .., 0, t, 0, ..)`.
    pub fn single(t: SymTensor) -> Result<Self> {
        let mut v = Self::zero(t.atoms());
        v.set_kernel(t)?;
        Ok(v)
    }

    pub fn atoms(&self) -> usize {
        self.m
    }

    /// Number of stored kernels (`N + 1`).
    pub fn len(&self) -> usize {
        self.kernels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }

    /// Highest degree with a non-zero kernel.
    pub fn degree(&self) -> Option<usize> {
        self.kernels.iter().rposition(|k| !k.is_zero())
    }

    pub fn kernels(&self) -> &[SymTensor] {
        &self.kernels
    }

    pub fn kernel(&self, n: usize) -> Option<&SymTensor> {
        self.kernels.get(n)
    }

    /// Degree-`n` kernel, or a zero kernel when absent.
    pub fn kernel_or_zero(&self, n: usize) -> SymTensor {
        self.kernels
            .get(n)
            .cloned()
            .unwrap_or_else(|| SymTensor::zeros(self.m, n).expect("size checked on construction"))
    }

    fn pad_to(&mut self, len: usize) -> Result<()> {
        while self.kernels.len() < len {
            let n = self.kernels.len();
            self.kernels.push(SymTensor::zeros(self.m, n)?);
        }
        Ok(())
    }

    /// Replaces the kernel at `t.degree()`, padding with zeros as needed.
    pub fn set_kernel(&mut self, t: SymTensor) -> Result<()> {
        check_dim(self.m, t.atoms())?;
        let n = t.degree();
        self.pad_to(n + 1)?;
        self.kernels[n] = t;
        Ok(())
    }

    /// Adds `c · t` into the kernel of degree `t.degree()`.
    pub fn add_kernel(&mut self, c: f64, t: &SymTensor) -> Result<()> {
        check_dim(self.m, t.atoms())?;
        self.pad_to(t.degree() + 1)?;
        self.kernels[t.degree()].axpy(c, t)
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, c: f64, other: &FockVector) -> Result<()> {
        check_dim(self.m, other.m)?;
        self.pad_to(other.kernels.len())?;
        for (a, b) in self.kernels.iter_mut().zip(&other.kernels) {
            a.axpy(c, b)?;
        }
        Ok(())
    }

    pub fn add(&self, other: &FockVector) -> Result<FockVector> {
        let mut out = self.clone();
        out.axpy(1.0, other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &FockVector) -> Result<FockVector> {
        let mut out = self.clone();
        out.axpy(-1.0, other)?;
        Ok(out)
    }

    pub fn scale(&self, c: f64) -> FockVector {
        FockVector {
            m: self.m,
            kernels: self.kernels.iter().map(|k| k.scale(c)).collect(),
        }
    }

    /// Largest absolute coefficient difference, zero-padding the shorter vector.
    pub fn max_abs_diff(&self, other: &FockVector) -> Result<f64> {
        check_dim(self.m, other.m)?;
        let len = self.kernels.len().max(other.kernels.len());
        let mut worst: f64 = 0.0;
        for n in 0..len {
            let d = match (self.kernels.get(n), other.kernels.get(n)) {
                (Some(a), Some(b)) => a.max_abs_diff(b)?,
                (Some(a), None) | (None, Some(a)) => a.max_abs(),
                (None, None) => 0.0,
            };
            worst = worst.max(d);
        }
        Ok(worst)
    }

    pub fn max_abs(&self) -> f64 {
        self.kernels.iter().fold(0.0, |a, k| a.max(k.max_abs()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.kernels
                .iter()
                .map(|k| serde_json::Value::Object(k.to_json_map()))
                .collect(),
        )
    }

    /// Parses a JSON array of kernel objects, the `n`-th being degree `n`.
    pub fn from_json(m: usize, value: &serde_json::Value) -> Result<FockVector> {
        let arr = value
            .as_array()
            .ok_or_else(|| GwnError::Contract("kernel list must be a JSON array".into()))?;
        let kernels = arr
            .iter()
            .enumerate()
            .map(|(n, v)| {
                let map = v.as_object().ok_or_else(|| {
                    GwnError::Contract(format!("kernel {n} must be a JSON object"))
                })?;
                SymTensor::from_json_map(m, n, map)
            })
            .collect::<Result<Vec<_>>>()?;
        FockVector::from_kernels(m, kernels)
    }
}

/// Serialized form of a single kernel, used in reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelJson {
    pub degree: usize,
    pub values: serde_json::Map<String, serde_json::Value>,
}
