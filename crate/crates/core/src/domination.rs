//! Stochastic domination between laws on `{0,1}^n`.
//!
//! `Y ⪰ X` iff a coupling with `Y ≥ X` coordinatewise exists, which is a
//! transportation problem: ship the mass of `Y` at `s` to the mass of `X`
//! at any `t ⊆ s`. Feasibility is decided by max-flow; on failure the
//! minimum cut yields an up-set `U` with `P(Y ∈ U) < P(X ∈ U)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use num::rational::BigRational;
use serde_json::Value;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::Graph;
use crate::params::ParamVec;
use crate::scalar::Scalar;
use crate::shearer::{boundary_crossing, construct_measure};

/// Largest `n` handed to the max-flow oracle.
pub const STRASSEN_CAP: usize = 12;

/// Largest `n` for exhaustive up-set enumeration.
pub const UPSET_CAP: usize = 4;

/// Largest graph accepted by [`counterexample`].
pub const COUNTEREXAMPLE_CAP: usize = 14;

/// Joint masses on ordered pairs `(y, x)` with `x ⊆ y`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingPlan<S> {
    pub n: usize,
    pub entries: Vec<(usize, usize, S)>,
}

impl<S: Scalar> CouplingPlan<S> {
    pub fn diagonal(d: &Dist<S>) -> Self {
        CouplingPlan {
            n: d.n(),
            entries: d.support().map(|s| (s, s, d.mass(s).clone())).collect(),
        }
    }

    pub fn row_sums(&self) -> Vec<S> {
        let mut rows = vec![S::zero(); 1 << self.n];
        for (y, _, m) in &self.entries {
            rows[*y] = rows[*y].clone() + m.clone();
        }
        rows
    }

    pub fn column_sums(&self) -> Vec<S> {
        let mut cols = vec![S::zero(); 1 << self.n];
        for (_, x, m) in &self.entries {
            cols[*x] = cols[*x].clone() + m.clone();
        }
        cols
    }

    pub fn is_ordered(&self) -> bool {
        self.entries.iter().all(|(y, x, _)| x & !y == 0)
    }

    /// Largest deviation of the plan's marginals from the two laws.
    pub fn marginal_error(&self, dy: &Dist<S>, dx: &Dist<S>) -> f64 {
        let dev = |a: Vec<S>, d: &Dist<S>| {
            a.iter()
                .zip(d.masses())
                .map(|(x, y)| (x.clone() - y.clone()).abs().to_f64())
                .fold(0.0, f64::max)
        };
        dev(self.row_sums(), dy).max(dev(self.column_sums(), dx))
    }

    /// `[[y, x, mass], ...]`; exact masses are strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|(y, x, m)| {
                    let mass = match S::BACKEND {
                        crate::scalar::Backend::Float => serde_json::json!(m.to_f64()),
                        crate::scalar::Backend::Rational => Value::String(m.to_exact_string()),
                    };
                    serde_json::json!([y, x, mass])
                })
                .collect(),
        )
    }
}

/// An upward-closed family of configurations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpSet {
    n: usize,
    members: Vec<bool>,
}

impl UpSet {
    pub fn new(n: usize, members: Vec<bool>) -> Result<Self> {
        if members.len() != 1 << n {
            return Err(Error::DimensionMismatch { left: members.len(), right: 1 << n });
        }
        let u = UpSet { n, members };
        if !u.is_upward_closed() {
            return Err(Error::InvalidParameter("family is not upward closed".into()));
        }
        Ok(u)
    }

    /// Smallest up-set containing `configs`.
    pub fn generated_by(n: usize, configs: &[usize]) -> Self {
        let mut members = vec![false; 1 << n];
        for &c in configs {
            members[c] = true;
        }
        for v in 0..n {
            for s in 0..members.len() {
                if members[s] {
                    members[s | 1 << v] = true;
                }
            }
        }
        UpSet { n, members }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, config: usize) -> bool {
        self.members[config]
    }

    pub fn configs(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&c| self.members[c]).collect()
    }

    /// Minimal elements.
    pub fn generators(&self) -> Vec<usize> {
        self.configs()
            .into_iter()
            .filter(|&c| (0..self.n).all(|v| c >> v & 1 == 0 || !self.members[c ^ 1 << v]))
            .collect()
    }

    pub fn is_upward_closed(&self) -> bool {
        (0..self.members.len())
            .all(|s| !self.members[s] || (0..self.n).all(|v| self.members[s | 1 << v]))
    }

    pub fn prob<S: Scalar>(&self, d: &Dist<S>) -> S {
        d.masses()
            .iter()
            .enumerate()
            .filter(|(c, _)| self.members[*c])
            .fold(S::zero(), |a, (_, m)| a + m.clone())
    }
}

#[derive(Debug, Clone)]
pub struct Domination<S> {
    pub dominates: bool,
    /// Maximum flow; equals the total mass exactly when `dominates`.
    pub flow: S,
    pub plan: Option<CouplingPlan<S>>,
    pub violating_upset: Option<UpSet>,
}

fn check_pair<S: Scalar>(dy: &Dist<S>, dx: &Dist<S>, cap: usize, what: &'static str) -> Result<usize> {
    if dy.n() != dx.n() {
        return Err(Error::DimensionMismatch { left: dy.n(), right: dx.n() });
    }
    if dy.n() > cap {
        return Err(Error::CapExceeded { what, size: dy.n(), cap });
    }
    Ok(dy.n())
}

/// Decides `dY ⪰ dX` by max-flow.
pub fn strassen_dominates<S: Scalar>(dy: &Dist<S>, dx: &Dist<S>) -> Result<Domination<S>> {
    let n = check_pair(dy, dx, STRASSEN_CAP, "Strassen oracle")?;
    let size = 1usize << n;
    let ys: Vec<usize> = dy.support().collect();
    let mut x_node = vec![usize::MAX; size];
    let xs: Vec<usize> = dx.support().collect();
    // node layout: source, Y support, X support, sink
    let source = 0;
    let sink = 1 + ys.len() + xs.len();
    for (i, &t) in xs.iter().enumerate() {
        x_node[t] = 1 + ys.len() + i;
    }
    let mut net = FlowNetwork::new(sink + 1);
    let unbounded = S::one() + S::one();
    let mut middle = Vec::new();
    for (i, &s) in ys.iter().enumerate() {
        net.add_edge(source, 1 + i, dy.mass(s).clone());
        // every submask t of s
        let mut t = s;
        loop {
            if x_node[t] != usize::MAX {
                let id = net.add_edge(1 + i, x_node[t], unbounded.clone());
                middle.push((s, t, id));
            }
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
    }
    for &t in &xs {
        net.add_edge(x_node[t], sink, dx.mass(t).clone());
    }
    let flow = net.max_flow(source, sink);
    let demand = dx.total();
    let dominates = flow >= demand - S::feasibility_slack();
    if dominates {
        let entries = middle
            .into_iter()
            .filter_map(|(s, t, id)| {
                let f = net.flow_on(id);
                (f > S::zero()).then_some((s, t, f))
            })
            .collect();
        return Ok(Domination {
            dominates,
            flow,
            plan: Some(CouplingPlan { n, entries }),
            violating_upset: None,
        });
    }
    // complement of the down-closure of the source side of the cut
    let reach = net.reachable(source);
    let mut down = vec![false; size];
    for (i, &s) in ys.iter().enumerate() {
        if reach[1 + i] {
            down[s] = true;
        }
    }
    for v in 0..n {
        for s in 0..size {
            if down[s] {
                down[s & !(1 << v)] = true;
            }
        }
    }
    let upset = UpSet { n, members: down.into_iter().map(|b| !b).collect() };
    debug_assert!(upset.is_upward_closed());
    Ok(Domination { dominates, flow, plan: None, violating_upset: Some(upset) })
}

/// Decides `dY ⪰ dX` by comparing the two laws on every up-set.
pub fn upset_dominates<S: Scalar>(dy: &Dist<S>, dx: &Dist<S>) -> Result<bool> {
    let n = check_pair(dy, dx, UPSET_CAP, "up-set enumeration")?;
    let size = 1usize << n;
    // lacking[v]: configurations without coordinate v, as a bitmap over configs
    let lacking: Vec<u64> = (0..n)
        .map(|v| (0..size).filter(|s| s >> v & 1 == 0).fold(0u64, |m, s| m | 1 << s))
        .collect();
    let diff: Vec<S> = dy
        .masses()
        .iter()
        .zip(dx.masses())
        .map(|(a, b)| a.clone() - b.clone())
        .collect();
    let slack = -S::feasibility_slack();
    for family in 0u64..(1u64 << size) {
        let closed = (0..n).all(|v| ((family & lacking[v]) << (1 << v)) & !family == 0);
        if !closed {
            continue;
        }
        let gap = (0..size)
            .filter(|s| family >> s & 1 == 1)
            .fold(S::zero(), |a, s| a + diff[s].clone());
        if gap < slack {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(P(Y_W = 1) ≥ P(X_W = 1) ∀W, P(Y_W = 0) ≤ P(X_W = 0) ∀W)`. Both are
/// necessary for `dY ⪰ dX`.
pub fn necessary_check<S: Scalar>(dy: &Dist<S>, dx: &Dist<S>) -> Result<(bool, bool)> {
    check_pair(dy, dx, STRASSEN_CAP, "necessary-condition check")?;
    let slack = S::feasibility_slack();
    let ones = dy
        .up_sums()
        .into_iter()
        .zip(dx.up_sums())
        .all(|(a, b)| a >= b - slack.clone());
    let zeros = dy
        .zero_sums()
        .into_iter()
        .zip(dx.zero_sums())
        .all(|(a, b)| a <= b + slack.clone());
    Ok((ones, zeros))
}

/// Largest `c` with `d ⪰ Π_c`, to within `1e-9` from below.
///
/// The oracle always runs in exact arithmetic: a float law is converted
/// exactly and renormalized, because a float feasibility slack would turn
/// a zero-mass up-set into a spurious positive value.
pub fn dominated_value<S: Scalar>(d: &Dist<S>) -> Result<S> {
    let n = d.n();
    if n > STRASSEN_CAP {
        return Err(Error::CapExceeded { what: "dominated value", size: n, cap: STRASSEN_CAP });
    }
    let mut exact: Dist<BigRational> = d.convert();
    let total = exact.total();
    if total != BigRational::from_integer(1.into()) {
        let masses = exact.masses().iter().map(|m| m.clone() / total.clone()).collect();
        exact = Dist::from_raw(n, masses);
    }
    if n == 0 {
        return Ok(S::one());
    }
    let dominates_at = |c: &BigRational| -> Result<bool> {
        let product = Dist::product(&ParamVec::homogeneous(n, c.clone())?)?;
        if !necessary_check(&exact, &product)?.0 {
            return Ok(false);
        }
        Ok(strassen_dominates(&exact, &product)?.dominates)
    };
    let marginals = exact.marginals();
    let mut hi = marginals
        .into_iter()
        .reduce(|a, b| if b < a { b } else { a })
        .expect("n > 0");
    if dominates_at(&hi)? {
        return Ok(S::from_rational(&hi));
    }
    let mut lo = BigRational::from_integer(0.into());
    let tol = <BigRational as Scalar>::from_f64(1e-9) / BigRational::from_integer(4.into());
    let two = BigRational::from_integer(2.into());
    while hi.clone() - lo.clone() > tol {
        // snap the midpoint to a short dyadic to keep the numbers small
        let mid = (lo.clone() + hi.clone()) / two.clone();
        let mid = <BigRational as Scalar>::from_f64(Scalar::to_f64(&mid));
        if mid <= lo || mid >= hi {
            break;
        }
        if dominates_at(&mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(S::from_rational(&lo))
}

/// Law of `Y ∧ X` with `X ~ Π_x` independent.
pub fn min_composition<S: Scalar>(dy: &Dist<S>, x: &ParamVec<S>) -> Result<Dist<S>> {
    dy.min_product(x)
}

/// The non-dominating field built from a parameter outside the interior.
#[derive(Debug, Clone)]
pub struct Counterexample<S> {
    /// Boundary point on the segment from `p` to the all-ones vector.
    pub r: ParamVec<S>,
    pub t: S,
    /// Thinning vector with `p = x · r`.
    pub x: ParamVec<S>,
    /// Law of `Shearer(r) ∧ Π_x`.
    pub law: Dist<S>,
}

/// `Z = Shearer(G, r) ∧ Π_x` where `r` is the boundary point above `p`
/// and `x = p / r`. `Z` has marginals `p`, dependency graph `G`, and never
/// takes the all-ones value, so it dominates no non-trivial product.
///
/// The bisection leaves `r` a hair inside the closed region, where
/// `Ξ_G(r)` is of rounding size; that residual all-ones mass is removed
/// and the law renormalized.
pub fn counterexample<S: Scalar>(g: &Graph, p: &ParamVec<S>) -> Result<Counterexample<S>> {
    g.check_cap(COUNTEREXAMPLE_CAP, "counterexample")?;
    let (r, t) = boundary_crossing(g, p)?;
    let shearer = construct_measure(g, &r)?;
    let all = shearer.all_ones();
    let residual = shearer.mass(all).clone();
    if residual.abs() > S::from_f64(1e-10) {
        return Err(Error::Domain(format!("Ξ_G(r) = {residual} is not negligible at the boundary")));
    }
    let keep = S::one() - residual;
    let masses = shearer
        .masses()
        .iter()
        .enumerate()
        .map(|(c, m)| if c == all { S::zero() } else { m.clone() / keep.clone() })
        .collect();
    let shearer = Dist::from_raw(g.n(), masses);
    let x = ParamVec::new(
        (0..g.n())
            .map(|v| if r[v].is_zero() { S::one() } else { p[v].clone() / r[v].clone() })
            .map(|x| if x > S::one() { S::one() } else { x })
            .collect(),
    )?;
    let law = shearer.min_product(&x)?;
    Ok(Counterexample { r, t, x, law })
}

/// Draws `(z, x)` pairs from the sequential coupling of a field `Z`
/// (given through `cond(prefix) = P(Z_k = 1 | Z_{<k} = prefix)`) with the
/// product `Π_p`, emitting at step `k`:
///
/// ```text
/// (1,1) w.p. p_k,   (1,0) w.p. a - p_k,   (0,0) w.p. 1 - a,   a = cond(prefix)
/// ```
///
/// so `z ≥ x` always and `x` is exactly `Π_p`. Requires `a ≥ p_k` along every
/// visited prefix.
pub fn russo_sample<F>(cond: F, p: &[f64], seed: u64, count: usize) -> Result<Vec<(Vec<bool>, Vec<bool>)>>
where
    F: Fn(&[bool]) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut z = Vec::with_capacity(p.len());
        let mut x = Vec::with_capacity(p.len());
        for (k, &pk) in p.iter().enumerate() {
            let a = cond(&z);
            if a < pk - 1e-12 {
                return Err(Error::MinorationViolated {
                    prefix: z,
                    step: k,
                    conditional: a,
                    required: pk,
                });
            }
            let u: f64 = rng.gen();
            let (zk, xk) = if u < pk {
                (true, true)
            } else if u < a {
                (true, false)
            } else {
                (false, false)
            };
            z.push(zk);
            x.push(xk);
        }
        out.push((z, x));
    }
    Ok(out)
}
