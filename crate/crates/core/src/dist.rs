//! Dense laws on `{0,1}^n`.
//!
//! Configurations are bitmasks: bit `v` is the value of `Y_v`. A `Dist` owns
//! all `2^n` masses, so every query is an exact finite sum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::VertexSubset;
use crate::params::ParamVec;
use crate::scalar::{Backend, Scalar};

/// Largest `n` for which a dense law is materialized.
pub const DIST_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct Dist<S> {
    n: usize,
    mass: Vec<S>,
}

fn check_dist_cap(n: usize) -> Result<()> {
    if n > DIST_CAP {
        Err(Error::CapExceeded { what: "dense distribution", size: n, cap: DIST_CAP })
    } else {
        Ok(())
    }
}

impl<S: Scalar> Dist<S> {
    /// Validates non-negativity (up to the backend tolerance) and total mass.
    pub fn from_masses(n: usize, mass: Vec<S>) -> Result<Self> {
        check_dist_cap(n)?;
        if mass.len() != 1 << n {
            return Err(Error::InvalidDist(format!(
                "expected {} masses for n = {n}, got {}",
                1usize << n,
                mass.len()
            )));
        }
        let tol = S::zero_tol();
        for (config, m) in mass.iter().enumerate() {
            if *m < -tol.clone() {
                return Err(Error::InvalidDist(format!("negative mass {m} at configuration {config}")));
            }
        }
        let total = mass.iter().fold(S::zero(), |a, b| a + b.clone());
        if (total.clone() - S::one()).abs() > S::feasibility_slack() {
            return Err(Error::InvalidDist(format!("total mass {total} differs from 1")));
        }
        Ok(Dist { n, mass })
    }

    pub(crate) fn from_raw(n: usize, mass: Vec<S>) -> Self {
        debug_assert_eq!(mass.len(), 1 << n);
        Dist { n, mass }
    }

    /// The product law `Π_p`.
    pub fn product(p: &ParamVec<S>) -> Result<Self> {
        let n = p.len();
        check_dist_cap(n)?;
        let mut mass = vec![S::one()];
        for v in 0..n {
            let (pv, qv) = (p[v].clone(), p.q(v));
            let mut next = Vec::with_capacity(mass.len() * 2);
            next.extend(mass.iter().map(|m| m.clone() * qv.clone()));
            next.extend(mass.iter().map(|m| m.clone() * pv.clone()));
            mass = next;
        }
        Ok(Dist { n, mass })
    }

    pub fn point_mass(n: usize, config: usize) -> Result<Self> {
        check_dist_cap(n)?;
        if config >> n != 0 {
            return Err(Error::InvalidDist(format!("configuration {config} has bits beyond n = {n}")));
        }
        let mut mass = vec![S::zero(); 1 << n];
        mass[config] = S::one();
        Ok(Dist { n, mass })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn all_ones(&self) -> usize {
        (1 << self.n) - 1
    }

    pub fn masses(&self) -> &[S] {
        &self.mass
    }

    pub fn mass(&self, config: usize) -> &S {
        &self.mass[config]
    }

    pub fn total(&self) -> S {
        self.mass.iter().fold(S::zero(), |a, b| a + b.clone())
    }

    /// Configurations with non-zero mass.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.mass.iter().enumerate().filter(|(_, m)| !m.is_zero()).map(|(c, _)| c)
    }

    pub fn marginal(&self, v: usize) -> S {
        self.mass
            .iter()
            .enumerate()
            .filter(|(c, _)| (c >> v) & 1 == 1)
            .fold(S::zero(), |a, (_, m)| a + m.clone())
    }

    pub fn marginals(&self) -> Vec<S> {
        (0..self.n).map(|v| self.marginal(v)).collect()
    }

    /// `P(Y_W = 1)`.
    pub fn prob_all_ones(&self, w: VertexSubset) -> S {
        let w = w.as_mask();
        self.mass
            .iter()
            .enumerate()
            .filter(|(c, _)| c & w == w)
            .fold(S::zero(), |a, (_, m)| a + m.clone())
    }

    /// `P(Y_W = 0)`.
    pub fn prob_all_zeros(&self, w: VertexSubset) -> S {
        let w = w.as_mask();
        self.mass
            .iter()
            .enumerate()
            .filter(|(c, _)| c & w == 0)
            .fold(S::zero(), |a, (_, m)| a + m.clone())
    }

    /// `P(Y_W = pattern)`, where `pattern` is read on the bits of `w`.
    pub fn prob_pattern(&self, w: VertexSubset, pattern: usize) -> S {
        let w = w.as_mask();
        let pattern = pattern & w;
        self.mass
            .iter()
            .enumerate()
            .filter(|(c, _)| c & w == pattern)
            .fold(S::zero(), |a, (_, m)| a + m.clone())
    }

    /// Table of `P(Y ⊇ W)` for every `W`, by a superset zeta transform.
    pub fn up_sums(&self) -> Vec<S> {
        let mut t = self.mass.clone();
        for v in 0..self.n {
            let bit = 1 << v;
            for s in 0..t.len() {
                if s & bit == 0 {
                    t[s] = t[s].clone() + t[s | bit].clone();
                }
            }
        }
        t
    }

    /// Table of `P(Y ∩ W = ∅)` for every `W`.
    pub fn zero_sums(&self) -> Vec<S> {
        // P(Y ∩ W = ∅) = Σ_{s ⊆ V∖W} mass(s): a subset zeta transform read at the complement
        let mut t = self.mass.clone();
        for v in 0..self.n {
            let bit = 1 << v;
            for s in 0..t.len() {
                if s & bit != 0 {
                    t[s] = t[s].clone() + t[s ^ bit].clone();
                }
            }
        }
        let full = self.all_ones();
        (0..t.len()).map(|w| t[full & !w].clone()).collect()
    }

    /// Law of `Y ∨ X` with `X ~ Π_c` independent of `Y`.
    pub fn or_product(&self, c: &ParamVec<S>) -> Result<Self> {
        c.check_len(self.n)?;
        let mut mass = self.mass.clone();
        for v in 0..self.n {
            let bit = 1 << v;
            let (cv, keep) = (c[v].clone(), c.q(v));
            for s in 0..mass.len() {
                if s & bit == 0 && !mass[s].is_zero() {
                    let m = mass[s].clone();
                    mass[s | bit] = mass[s | bit].clone() + m.clone() * cv.clone();
                    mass[s] = m * keep.clone();
                }
            }
        }
        Ok(Dist { n: self.n, mass })
    }

    /// Law of `Y ∧ X` with `X ~ Π_x` independent of `Y`.
    pub fn min_product(&self, x: &ParamVec<S>) -> Result<Self> {
        x.check_len(self.n)?;
        let mut mass = self.mass.clone();
        for v in 0..self.n {
            let bit = 1 << v;
            let (xv, drop) = (x[v].clone(), x.q(v));
            for s in 0..mass.len() {
                if s & bit != 0 && !mass[s].is_zero() {
                    let m = mass[s].clone();
                    mass[s ^ bit] = mass[s ^ bit].clone() + m.clone() * drop.clone();
                    mass[s] = m * xv.clone();
                }
            }
        }
        Ok(Dist { n: self.n, mass })
    }

    /// Same law in another backend. Float to rational is exact on the
    /// binary values; the result is not renormalized.
    pub fn convert<T: Scalar>(&self) -> Dist<T> {
        Dist {
            n: self.n,
            mass: self.mass.iter().map(|m| T::from_rational(&m.to_rational())).collect(),
        }
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.mass.iter().map(Scalar::to_f64).collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(self
            .mass
            .iter()
            .zip(&other.mass)
            .map(|(a, b)| (a.clone() - b.clone()).abs().to_f64())
            .fold(0.0, f64::max))
    }

    pub fn to_json(&self) -> Value {
        let mass = self
            .mass
            .iter()
            .map(|m| match S::BACKEND {
                Backend::Float => serde_json::json!(m.to_f64()),
                Backend::Rational => Value::String(m.to_exact_string()),
            })
            .collect();
        serde_json::to_value(DistJson { n: self.n, mass, backend: Some(S::BACKEND) })
            .expect("dist serializes")
    }

    /// Reads `{"n": .., "mass": [..]}`; masses may be numbers or exact
    /// strings such as `"1/3"`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: DistJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mass = raw
            .mass
            .iter()
            .map(|m| match m {
                Value::Number(x) => x
                    .as_f64()
                    .map(S::from_f64)
                    .ok_or_else(|| Error::Parse(format!("bad mass {x}"))),
                Value::String(s) => S::parse_value(s),
                other => Err(Error::Parse(format!("bad mass {other}"))),
            })
            .collect::<Result<Vec<S>>>()?;
        Self::from_masses(raw.n, mass)
    }

    /// `count` i.i.d. configurations, reproducible from `seed`.
    pub fn sample(&self, seed: u64, count: usize) -> Vec<usize> {
        let mut acc = 0.0;
        let cumulative: Vec<f64> = self
            .mass
            .iter()
            .map(|m| {
                acc += m.to_f64().max(0.0);
                acc
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let u = rng.gen::<f64>() * acc;
                cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
            })
            .collect()
    }

    /// Prefix conditionals `P(Y_k = 1 | Y_0..Y_{k-1})` in vertex order.
    pub fn conditionals(&self) -> PrefixConditionals {
        let mut tables = vec![self.to_f64s()];
        for k in (0..self.n).rev() {
            let finer = tables.last().expect("non-empty");
            let coarse = (0..1usize << k).map(|m| finer[m] + finer[m | 1 << k]).collect();
            tables.push(coarse);
        }
        tables.reverse();
        PrefixConditionals { tables }
    }
}

#[derive(Serialize, Deserialize)]
struct DistJson {
    n: usize,
    mass: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    backend: Option<Backend>,
}

/// `tables[k][m]` is the probability that the first `k` coordinates read `m`.
#[derive(Debug, Clone)]
pub struct PrefixConditionals {
    tables: Vec<Vec<f64>>,
}

impl PrefixConditionals {
    pub fn n(&self) -> usize {
        self.tables.len() - 1
    }

    pub fn prefix_prob(&self, prefix: &[bool]) -> f64 {
        self.tables[prefix.len()][pack(prefix)]
    }

    /// Conditional probability that the next coordinate is 1. Unreachable
    /// prefixes report 1.
    pub fn cond(&self, prefix: &[bool]) -> f64 {
        let k = prefix.len();
        let m = pack(prefix);
        let denom = self.tables[k][m];
        if denom <= 0.0 {
            return 1.0;
        }
        self.tables[k + 1][m | 1 << k] / denom
    }
}

pub(crate) fn pack(bits: &[bool]) -> usize {
    bits.iter().enumerate().filter(|(_, &b)| b).fold(0, |m, (i, _)| m | 1 << i)
}
