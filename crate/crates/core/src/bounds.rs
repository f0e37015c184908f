//! Closed-form constants and sufficient conditions for region membership.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::graph::{enumerate_independent_sets, Graph, VertexSubset};
use crate::params::ParamVec;
use crate::scalar::{Backend, Scalar};
use crate::shearer::{membership, Region};
use crate::xi::xi_dc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    LowerBound,
    UpperBound,
    Sufficient,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub value: f64,
    /// Lossless value when the rational backend produced it exactly.
    pub exact: Option<String>,
    pub inputs: BTreeMap<String, String>,
    pub kind: BoundKind,
    pub backend: Backend,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "name,kind,backend,inputs,value,exact";

    pub fn to_csv_row(&self) -> String {
        let inputs: Vec<String> = self.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!(
            "{},{:?},{},{},{},{}",
            self.name,
            self.kind,
            self.backend,
            inputs.join(";"),
            self.value,
            self.exact.clone().unwrap_or_default()
        )
    }
}

/// The closed forms of the catalog. `d` is a degree or dimension, `k` the
/// range of a k-fuzz.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm<S> {
    /// `1 - (D-1)^{D-1} / D^D`, the Shearer threshold of the D-regular tree.
    PShTree { d: u32 },
    /// `1 - k^k / (k+1)^{k+1}`, the Shearer threshold of the k-fuzz of Z.
    PShKFuzz { k: u32 },
    /// `1 - d^d / (d+1)^{d+1}`, a lower bound on the threshold of Z^d.
    ZdLower { d: u32 },
    /// Lower bound on the dominated value at degree `D`.
    LssLower { d: u32, p: S },
    /// The same bound specialised to the k-fuzz.
    LssKFuzz { k: u32, p: S },
    /// `k / (k+1)^2`, lower bound on the jump of the dominated value.
    JumpLower { k: u32 },
    /// `1/(k+1) + 1 - (k+1)^{-1/(k+1)}`, upper bound on that jump.
    KFuzzJumpUpper { k: u32 },
}

impl<S: Scalar> ClosedForm<S> {
    pub fn name(&self) -> &'static str {
        match self {
            ClosedForm::PShTree { .. } => "p_sh_tree",
            ClosedForm::PShKFuzz { .. } => "p_sh_kfuzz",
            ClosedForm::ZdLower { .. } => "zd_lower",
            ClosedForm::LssLower { .. } => "lss_lower",
            ClosedForm::LssKFuzz { .. } => "lss_kfuzz",
            ClosedForm::JumpLower { .. } => "jump_lower",
            ClosedForm::KFuzzJumpUpper { .. } => "kfuzz_jump_upper",
        }
    }

    pub fn kind(&self) -> BoundKind {
        match self {
            ClosedForm::PShTree { .. } | ClosedForm::PShKFuzz { .. } => BoundKind::Exact,
            ClosedForm::ZdLower { .. } | ClosedForm::LssLower { .. } | ClosedForm::LssKFuzz { .. } => {
                BoundKind::LowerBound
            }
            ClosedForm::JumpLower { .. } => BoundKind::LowerBound,
            ClosedForm::KFuzzJumpUpper { .. } => BoundKind::UpperBound,
        }
    }

    fn inputs(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        match self {
            ClosedForm::PShTree { d } | ClosedForm::ZdLower { d } => {
                m.insert("d".into(), d.to_string());
            }
            ClosedForm::PShKFuzz { k } | ClosedForm::JumpLower { k } | ClosedForm::KFuzzJumpUpper { k } => {
                m.insert("k".into(), k.to_string());
            }
            ClosedForm::LssLower { d, p } => {
                m.insert("d".into(), d.to_string());
                m.insert("p".into(), p.to_exact_string());
            }
            ClosedForm::LssKFuzz { k, p } => {
                m.insert("k".into(), k.to_string());
                m.insert("p".into(), p.to_exact_string());
            }
        }
        m
    }

    /// `(value, exact)`; `exact` is false when an irrational root had to be
    /// approximated in double precision.
    pub fn evaluate(&self) -> Result<(S, bool)> {
        let int = |x: u32| S::from_usize(x as usize);
        let positive = |x: u32, min: u32, what: &str| {
            if x < min {
                Err(Error::Domain(format!("{what} must be at least {min}, got {x}")))
            } else {
                Ok(())
            }
        };
        let one = S::one();
        match self {
            ClosedForm::PShTree { d } => {
                positive(*d, 2, "D")?;
                Ok((one - int(d - 1).powi(d - 1) / int(*d).powi(*d), true))
            }
            ClosedForm::PShKFuzz { k } | ClosedForm::ZdLower { d: k } => {
                positive(*k, 1, "k")?;
                Ok((one - q_sh_kfuzz::<S>(*k), true))
            }
            ClosedForm::LssLower { d, p } => {
                positive(*d, 2, "D")?;
                check_unit(p)?;
                let q = one.clone() - p.clone();
                let (a, ea) = root(&(q.clone() / int(d - 1).powi(d - 1)), *d);
                let (b, eb) = root(&(q * int(d - 1)), *d);
                lss_product(a, b, ea && eb)
            }
            ClosedForm::LssKFuzz { k, p } => {
                positive(*k, 1, "k")?;
                check_unit(p)?;
                let q = one.clone() - p.clone();
                let (a, ea) = root(&(q.clone() / int(*k).powi(*k)), k + 1);
                let (b, eb) = root(&(q * int(*k)), k + 1);
                lss_product(a, b, ea && eb)
            }
            ClosedForm::JumpLower { k } => {
                positive(*k, 1, "k")?;
                Ok((int(*k) / int(k + 1).powi(2), true))
            }
            ClosedForm::KFuzzJumpUpper { k } => {
                positive(*k, 1, "k")?;
                let (r, exact) = root(&(one.clone() / int(k + 1)), k + 1);
                Ok((one.clone() / int(k + 1) + one - r, exact))
            }
        }
    }

    pub fn report(&self) -> Result<BoundReport> {
        let (value, exact) = self.evaluate()?;
        Ok(BoundReport {
            name: self.name().into(),
            value: value.to_f64(),
            exact: (exact && S::BACKEND == Backend::Rational).then(|| value.to_exact_string()),
            inputs: self.inputs(),
            kind: self.kind(),
            backend: S::BACKEND,
        })
    }
}

fn check_unit<S: Scalar>(p: &S) -> Result<()> {
    if *p < S::zero() || *p > S::one() {
        Err(Error::Domain(format!("p = {p} is outside [0, 1]")))
    } else {
        Ok(())
    }
}

fn lss_product<S: Scalar>(a: S, b: S, exact: bool) -> Result<(S, bool)> {
    let (fa, fb) = (S::one() - a, S::one() - b);
    if fa < S::zero() || fb < S::zero() {
        return Err(Error::Domain("p is below the range where the bound applies".into()));
    }
    Ok((fa * fb, exact))
}

/// `n`-th root, exact when the backend can represent it.
fn root<S: Scalar>(x: &S, n: u32) -> (S, bool) {
    match x.nth_root(n) {
        Some(r) => (r, true),
        None => (S::from_f64(x.to_f64().powf(1.0 / f64::from(n))), false),
    }
}

/// `k^k / (k+1)^{k+1}`.
pub fn q_sh_kfuzz<S: Scalar>(k: u32) -> S {
    S::from_usize(k as usize).powi(k) / S::from_usize(k as usize + 1).powi(k + 1)
}

pub fn closed_form<S: Scalar>(op: &ClosedForm<S>) -> Result<BoundReport> {
    op.report()
}

/// Exact dominated value of [`kfuzz_halfball_brf`]: `1 - k^{k/(k+1)} / (k+1)`.
pub fn kfuzz_halfball_sigma(k: u32) -> f64 {
    let k = f64::from(k);
    1.0 - k.powf(k / (k + 1.0)) / (k + 1.0)
}

/// The all-or-nothing field on `{0..k}`: all ones with probability
/// `p_Sh(Z_(k))`, all zeros otherwise.
pub fn kfuzz_halfball_brf<S: Scalar>(k: u32) -> Result<Dist<S>> {
    if !(1..=11).contains(&k) {
        return Err(Error::CapExceeded { what: "half-ball window", size: k as usize + 1, cap: 12 });
    }
    let n = k as usize + 1;
    let q = q_sh_kfuzz::<S>(k);
    let mut mass = vec![S::zero(); 1 << n];
    mass[(1 << n) - 1] = S::one() - q.clone();
    mass[0] = q;
    Dist::from_masses(n, mass)
}

/// The uniformly dominated vector `c` guaranteed for interior `p`.
///
/// Components are those of the subgraph induced by `{v : p_v < 1}`; a
/// component meeting `infinite_markers` (with more than one vertex) is
/// treated as a window of an infinite component. For the finite form in
/// the rational backend the root is rounded down, so `c` never exceeds the
/// exact value.
pub fn thm2_vector<S: Scalar>(g: &Graph, p: &ParamVec<S>, infinite_markers: VertexSubset) -> Result<ParamVec<S>> {
    p.check_len(g.n())?;
    let active = VertexSubset::from_iter((0..g.n()).filter(|&v| p[v] < S::one()));
    let mut c = vec![S::one(); g.n()];
    for comp in g.components(active) {
        if comp.len() > 1 && !comp.is_disjoint(infinite_markers) {
            for v in comp.iter() {
                let m = g
                    .neighbors(v)
                    .iter()
                    .filter(|&&w| comp.contains(w))
                    .map(|&w| p.q(w))
                    .reduce(|a, b| if b < a { b } else { a })
                    .expect("connected component with more than one vertex");
                c[v] = p.q(v) * m;
            }
            continue;
        }
        let (h, remap) = g.induced_subgraph(comp);
        let local = ParamVec::new(remap.iter().map(|&u| p[u].clone()).collect())?;
        let status = membership(&h, &local)?;
        if status.region != Region::Interior {
            return Err(Error::OutsideRegion(format!(
                "component {comp:?} is {:?} (Ξ = {} on {:?})",
                status.region, status.min_xi, status.argmin
            )));
        }
        let xi = xi_dc(&h, &local)?;
        let value = finite_component_value(&xi, comp.len() as u32);
        for v in comp.iter() {
            c[v] = value.clone();
        }
    }
    ParamVec::new(c)
}

/// `1 - (1 - Ξ)^{1/m}`, never above the exact value.
fn finite_component_value<S: Scalar>(xi: &S, m: u32) -> S {
    let base = S::one() - xi.clone();
    if let Some(r) = base.nth_root(m) {
        return S::one() - r;
    }
    let mut c = S::from_f64(1.0 - base.to_f64().powf(1.0 / f64::from(m)));
    // (1 - c)^m >= 1 - Ξ  <=>  c <= exact
    let shrink = S::from_f64(1.0 - 1e-12);
    while (S::one() - c.clone()).powi(m) < base {
        c = c * shrink.clone();
    }
    c
}

/// Outcome of a sufficient-condition search.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck {
    pub satisfied: bool,
    /// The verifying witness when satisfied, else the last iterate.
    pub s: Vec<f64>,
    pub iterations: usize,
}

const FIXED_POINT_ITERATIONS: usize = 5000;
const DIVERGENCE_CAP: f64 = 1e6;

/// `q_v Π_{w∈N⁺(v)} (1 + s_w) ≤ s_v` for all `v`.
pub fn lll_check(g: &Graph, q: &[f64], s: Option<&[f64]>) -> Result<ConditionCheck> {
    check_q(g, q)?;
    let closed: Vec<Vec<usize>> = (0..g.n())
        .map(|v| g.closed_neighbor_set(v).iter().collect())
        .collect();
    let f = |v: usize, s: &[f64]| closed[v].iter().map(|&w| 1.0 + s[w]).product::<f64>();
    condition_search(q, s, f)
}

/// `q_v Ξ_{G[N⁺(v)]}(-s) ≤ s_v` for all `v`, where `Ξ(-s)` is the
/// independent-set sum with positive weights `s`.
pub fn fp_check(g: &Graph, q: &[f64], s: Option<&[f64]>) -> Result<ConditionCheck> {
    check_q(g, q)?;
    let mut sets: Vec<Vec<Vec<usize>>> = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let (h, remap) = g.induced_subgraph(g.closed_neighbor_set(v));
        let indep = enumerate_independent_sets(&h)?;
        sets.push(indep.into_iter().map(|t| t.iter().map(|i| remap[i]).collect()).collect());
    }
    let f = |v: usize, s: &[f64]| {
        sets[v]
            .iter()
            .map(|t| t.iter().map(|&w| s[w]).product::<f64>())
            .sum::<f64>()
    };
    condition_search(q, s, f)
}

fn check_q(g: &Graph, q: &[f64]) -> Result<()> {
    if q.len() != g.n() {
        return Err(Error::DimensionMismatch { left: q.len(), right: g.n() });
    }
    if let Some(v) = q.iter().position(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::InvalidParameter(format!("q[{v}] = {} is outside [0, 1]", q[v])));
    }
    Ok(())
}

fn holds(q: &[f64], s: &[f64], f: &impl Fn(usize, &[f64]) -> f64) -> bool {
    (0..s.len()).all(|v| q[v] * f(v, s) <= s[v])
}

/// Iterates `s ← q·f(s)` from `s = q`. The iterates increase towards the
/// least fixed point, where the inequality is tight and rounding can break
/// it, so the iteration is also run at slightly inflated `q`: a fixed point
/// there satisfies the original inequality with room to spare. Divergence at
/// the original `q` proves there is no witness at all.
fn condition_search(q: &[f64], given: Option<&[f64]>, f: impl Fn(usize, &[f64]) -> f64) -> Result<ConditionCheck> {
    if let Some(s) = given {
        if s.len() != q.len() {
            return Err(Error::DimensionMismatch { left: s.len(), right: q.len() });
        }
        return Ok(ConditionCheck { satisfied: holds(q, s, &f), s: s.to_vec(), iterations: 0 });
    }
    // zero q would pin s at zero; any tiny positive s works there
    let floor = |v: usize| if q[v] == 0.0 { 1e-300 } else { 0.0 };
    let mut total = 0;
    let mut last = q.to_vec();
    for inflate in [0.0, 1e-9, 1e-6, 1e-4, 1e-3] {
        let scaled: Vec<f64> = q.iter().map(|x| (x * (1.0 + inflate)).min(1.0)).collect();
        let mut s: Vec<f64> = (0..q.len()).map(|v| scaled[v].max(floor(v))).collect();
        let mut diverged = false;
        for _ in 0..FIXED_POINT_ITERATIONS {
            total += 1;
            let next: Vec<f64> = (0..s.len()).map(|v| (scaled[v] * f(v, &s)).max(floor(v))).collect();
            diverged = next.iter().any(|x| !x.is_finite() || *x > DIVERGENCE_CAP);
            let settled = next.iter().zip(&s).all(|(a, b)| (a - b).abs() <= 1e-15 * b.abs());
            s = next;
            if diverged || settled {
                break;
            }
        }
        if diverged {
            if inflate == 0.0 {
                return Ok(ConditionCheck { satisfied: false, s, iterations: total });
            }
            break;
        }
        for eps in [0.0, 1e-12, 1e-9, 1e-6] {
            let trial: Vec<f64> = s.iter().map(|x| x * (1.0 + eps)).collect();
            if holds(q, &trial, &f) {
                return Ok(ConditionCheck { satisfied: true, s: trial, iterations: total });
            }
        }
        last = s;
    }
    Ok(ConditionCheck { satisfied: false, s: last, iterations: total })
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Parses `name` plus named integer/real arguments into a closed form.
pub fn parse_closed_form<S: Scalar>(name: &str, d: Option<u32>, k: Option<u32>, p: Option<&str>) -> Result<ClosedForm<S>> {
    let need = |x: Option<u32>, what: &str| x.ok_or_else(|| Error::Parse(format!("{name} needs --{what}")));
    let need_p = || -> Result<S> {
        S::parse_value(p.ok_or_else(|| Error::Parse(format!("{name} needs --p")))?)
    };
    Ok(match name {
        "p_sh_tree" => ClosedForm::PShTree { d: need(d, "d")? },
        "p_sh_kfuzz" => ClosedForm::PShKFuzz { k: need(k, "k")? },
        "zd_lower" => ClosedForm::ZdLower { d: need(d, "d")? },
        "lss_lower" => ClosedForm::LssLower { d: need(d, "d")?, p: need_p()? },
        "lss_kfuzz" => ClosedForm::LssKFuzz { k: need(k, "k")?, p: need_p()? },
        "jump_lower" => ClosedForm::JumpLower { k: need(k, "k")? },
        "kfuzz_jump_upper" => ClosedForm::KFuzzJumpUpper { k: need(k, "k")? },
        other => return Err(Error::Parse(format!("unknown bound '{other}'"))),
    })
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "LowerBound" => Ok(BoundKind::LowerBound),
            "UpperBound" => Ok(BoundKind::UpperBound),
            "Sufficient" => Ok(BoundKind::Sufficient),
            "Exact" => Ok(BoundKind::Exact),
            other => Err(Error::Parse(format!("unknown bound kind '{other}'"))),
        }
    }
}
