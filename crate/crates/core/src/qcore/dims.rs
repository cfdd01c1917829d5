use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Local dimensions `d_1, ..., d_n` of a multipartite Hilbert space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DimProfile {
    factors: Vec<usize>,
}

impl DimProfile {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidDims("no factors".into()));
        }
        if let Some(pos) = factors.iter().position(|&d| d == 0) {
            return Err(Error::InvalidDims(format!("factor {pos} has dimension 0")));
        }
        factors
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::InvalidDims("total dimension overflows".into()))?;
        Ok(Self { factors })
    }

    pub fn single(d: usize) -> Result<Self> {
        Self::new(vec![d])
    }

    pub fn bipartite(d_a: usize, d_b: usize) -> Result<Self> {
        Self::new(vec![d_a, d_b])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn total(&self) -> usize {
        self.factors.iter().product()
    }

    pub fn concat(&self, other: &DimProfile) -> DimProfile {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        DimProfile { factors }
    }

    /// Sub-profile made of the listed factors, in the listed order.
    pub fn select(&self, idx: &[usize]) -> Result<DimProfile> {
        let factors = idx
            .iter()
            .map(|&i| {
                self.factors
                    .get(i)
                    .copied()
                    .ok_or_else(|| Error::InvalidFactors(format!("factor {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        DimProfile::new(factors)
    }

    /// Row-major strides (last factor has stride 1).
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.factors.len()];
        for i in (0..self.factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.factors[i + 1];
        }
        strides
    }

    /// Validates a set of kept factors: nonempty, proper, in range, no repeats.
    /// Returns `(kept, traced)`, both sorted ascending.
    pub fn split_factors(&self, keep: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
        let n = self.factors.len();
        if keep.is_empty() {
            return Err(Error::InvalidFactors("kept set is empty".into()));
        }
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        if kept.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidFactors(format!("repeated factor in {keep:?}")));
        }
        if let Some(&bad) = kept.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidFactors(format!(
                "factor {bad} out of range for {n} factors"
            )));
        }
        if kept.len() == n {
            return Err(Error::InvalidFactors("kept set must be a proper subset".into()));
        }
        let traced = (0..n).filter(|i| !kept.contains(i)).collect();
        Ok((kept, traced))
    }

    /// `table[k][t]` is the full index of the basis state whose kept factors
    /// read `k` and traced factors read `t` (both row-major over their groups).
    pub(crate) fn index_table(&self, kept: &[usize], traced: &[usize]) -> Vec<Vec<usize>> {
        let strides = self.strides();
        let offsets = |group: &[usize]| -> Vec<usize> {
            let mut out = vec![0usize];
            for &f in group {
                let d = self.factors[f];
                let step = strides[f];
                out = out
                    .iter()
                    .flat_map(|&base| (0..d).map(move |x| base + x * step))
                    .collect();
            }
            out
        };
        let k_off = offsets(kept);
        let t_off = offsets(traced);
        k_off
            .iter()
            .map(|&k| t_off.iter().map(|&t| k + t).collect())
            .collect()
    }
}

impl TryFrom<Vec<usize>> for DimProfile {
    type Error = Error;

    fn try_from(factors: Vec<usize>) -> Result<Self> {
        DimProfile::new(factors)
    }
}

impl From<DimProfile> for Vec<usize> {
    fn from(d: DimProfile) -> Self {
        d.factors
    }
}

/// Which side of a bipartite `A ⊗ B` system an operation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::A => 0,
            Side::B => 1,
        }
    }
}

/// Splits the factors of a profile into a left group and its complement.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bipartition {
    left: Vec<usize>,
}

impl Bipartition {
    pub fn new(left: Vec<usize>) -> Self {
        Self { left }
    }

    /// Factors `0..k` on the left, the rest on the right.
    pub fn split_at(k: usize) -> Self {
        Self {
            left: (0..k).collect(),
        }
    }

    /// The `A:B` cut of a two-factor profile.
    pub fn ab() -> Self {
        Self::split_at(1)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    /// Resolves the cut against a profile; returns `(left, right)` sorted.
    pub fn groups(&self, dims: &DimProfile) -> Result<(Vec<usize>, Vec<usize>)> {
        dims.split_factors(&self.left)
    }
}
