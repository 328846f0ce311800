//! Finite atomic base measures and test functions over them.
//!
//! The intensity measure is represented by `m` atoms with strictly positive
//! masses `w_i`. Every integral against the intensity becomes a weighted sum
//! over atoms. A point mass at atom `i` shows up in two roles:
//!
//! * as a direction / mass vector (`⟨δ_i, ξ⟩ = ξ_i`), used when shifting a
//!   noise sample or taking Gâteaux derivatives;
//! * as an integral kernel `δ_i(j) = [i = j] / w_j`, so that integrating it
//!   against a function under the weights returns the value at atom `i`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, GwnError, Result};

/// Compensated (Neumaier) summation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Pairwise (tree) summation in index order. Used wherever a reduction must
/// be bit-reproducible independent of how the inputs were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        let mut s = 0.0;
        for v in values {
            s += v;
        }
        return s;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// A finite atomic measure: atom `i` carries mass `weights[i] > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureFile", into = "MeasureFile")]
pub struct AtomicMeasure {
    weights: Vec<f64>,
    total: f64,
}

#[derive(Serialize, Deserialize)]
struct MeasureFile {
    weights: Vec<f64>,
}

impl TryFrom<MeasureFile> for AtomicMeasure {
    type Error = GwnError;

    fn try_from(file: MeasureFile) -> Result<Self> {
        AtomicMeasure::new(file.weights)
    }
}

impl From<AtomicMeasure> for MeasureFile {
    fn from(m: AtomicMeasure) -> Self {
        MeasureFile { weights: m.weights }
    }
}

impl AtomicMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(GwnError::InvalidMeasure(
                "at least one atom is required".into(),
            ));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(GwnError::InvalidMeasure(format!(
                "weight {i} must be finite and > 0, got {w}"
            )));
        }
        let total = compensated_sum(weights.iter().copied());
        Ok(Self { weights, total })
    }

    /// Reads `{"weights": [...]}`.
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("measure serializes")
    }

    pub fn atoms(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, atom: usize) -> f64 {
        self.weights[atom]
    }

    pub fn total_mass(&self) -> f64 {
        self.total
    }

    /// `∫ f dσ = Σ_i w_i f_i`.
    pub fn integrate(&self, f: &TestFunction) -> Result<f64> {
        check_dim(self.atoms(), f.len())?;
        Ok(compensated_sum(
            self.weights.iter().zip(f.values()).map(|(w, v)| w * v),
        ))
    }

    /// `⟨f, g⟩ = Σ_i w_i f_i g_i`.
    pub fn l2_inner(&self, f: &TestFunction, g: &TestFunction) -> Result<f64> {
        check_dim(self.atoms(), f.len())?;
        check_dim(self.atoms(), g.len())?;
        Ok(compensated_sum(
            self.weights
                .iter()
                .zip(f.values().iter().zip(g.values()))
                .map(|(w, (a, b))| w * a * b),
        ))
    }

    /// The kernel form of the point mass at `atom`: `[j = atom] / w_atom`.
    pub fn delta_kernel(&self, atom: usize) -> TestFunction {
        let mut v = vec![0.0; self.atoms()];
        v[atom] = 1.0 / self.weights[atom];
        TestFunction::new(v)
    }
}

/// Values of a test function at the atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TestFunction(Vec<f64>);

impl TestFunction {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(m: usize) -> Self {
        Self(vec![0.0; m])
    }

    pub fn constant(m: usize, c: f64) -> Self {
        Self(vec![c; m])
    }

    /// 0/1 indicator of the atoms in `set`.
    pub fn indicator(m: usize, set: &[usize]) -> Self {
        let mut v = vec![0.0; m];
        for &i in set {
            v[i] = 1.0;
        }
        Self(v)
    }

    pub fn unit(m: usize, atom: usize) -> Self {
        Self::indicator(m, &[atom])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn is_indicator(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    pub fn pointwise(&self, other: &TestFunction) -> Result<TestFunction> {
        check_dim(self.len(), other.len())?;
        Ok(Self(
            self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect(),
        ))
    }

    pub fn add(&self, other: &TestFunction) -> Result<TestFunction> {
        check_dim(self.len(), other.len())?;
        Ok(Self(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn scale(&self, c: f64) -> TestFunction {
        Self(self.0.iter().map(|a| a * c).collect())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> TestFunction {
        Self(self.0.iter().copied().map(f).collect())
    }

    pub fn sup_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

impl From<Vec<f64>> for TestFunction {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}
