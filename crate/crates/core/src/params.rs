use std::ops::Index;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Per-vertex marginal parameters `p ∈ [0,1]^V`. The complementary value
/// `q = 1 - p` is always derived, never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVec<S>(Vec<S>);

impl<S: Scalar> ParamVec<S> {
    pub fn new(values: Vec<S>) -> Result<Self> {
        for (v, x) in values.iter().enumerate() {
            if *x < S::zero() || *x > S::one() {
                return Err(Error::InvalidParameter(format!(
                    "p[{v}] = {x} is outside [0, 1]"
                )));
            }
        }
        Ok(ParamVec(values))
    }

    pub fn homogeneous(n: usize, p: S) -> Result<Self> {
        Self::new(vec![p; n])
    }

    pub fn from_f64s(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| S::from_f64(x)).collect())
    }

    pub fn ones(n: usize) -> Self {
        ParamVec(vec![S::one(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn p(&self, v: usize) -> &S {
        &self.0[v]
    }

    pub fn q(&self, v: usize) -> S {
        S::one() - self.0[v].clone()
    }

    pub fn qs(&self) -> Vec<S> {
        (0..self.len()).map(|v| self.q(v)).collect()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<S> {
        self.0
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.0.iter().map(Scalar::to_f64).collect()
    }

    /// Componentwise `p <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `p + c - c p`, the marginals of `Y ∨ X`.
    pub fn or_combine(&self, c: &Self) -> Result<Self> {
        self.check_len(c.len())?;
        Ok(ParamVec(
            self.0
                .iter()
                .zip(&c.0)
                .map(|(p, c)| p.clone() + c.clone() - c.clone() * p.clone())
                .collect(),
        ))
    }

    /// `p c`, the marginals of `Y ∧ X`.
    pub fn and_combine(&self, x: &Self) -> Result<Self> {
        self.check_len(x.len())?;
        Ok(ParamVec(
            self.0
                .iter()
                .zip(&x.0)
                .map(|(p, x)| p.clone() * x.clone())
                .collect(),
        ))
    }

    /// Point `p + t (1 - p)` of the segment from `p` to the all-ones vector.
    pub fn towards_one(&self, t: &S) -> Self {
        ParamVec(
            (0..self.len())
                .map(|v| self.0[v].clone() + t.clone() * self.q(v))
                .collect(),
        )
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            Err(Error::DimensionMismatch {
                left: self.len(),
                right: n,
            })
        } else {
            Ok(())
        }
    }
}

impl<S> Index<usize> for ParamVec<S> {
    type Output = S;

    fn index(&self, v: usize) -> &S {
        &self.0[v]
    }
}
