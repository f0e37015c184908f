//! Shearer's measure on finite graphs and the region where it exists.

use serde::Serialize;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSubset};
use crate::params::ParamVec;
use crate::scalar::Scalar;
use crate::xi::xi_table;

/// Largest graph for which Shearer's measure or region status is computed.
pub const MEASURE_CAP: usize = 20;

/// Largest neighbourhood ball used by [`intrinsic_vector`].
pub const BALL_CAP: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    Interior,
    Boundary,
    Outside,
}

/// Region verdict with the least offending subset (in bitmask order) when
/// the verdict is not `Interior`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionStatus<S> {
    pub region: Region,
    pub witness: Option<(VertexSubset, S)>,
    /// Smallest Ξ over all induced subgraphs, attained at `argmin`.
    pub min_xi: S,
    pub argmin: VertexSubset,
}

impl<S: Scalar> RegionStatus<S> {
    pub fn is_interior(&self) -> bool {
        self.region == Region::Interior
    }
}

/// Classifies a full table of induced Ξ values.
fn classify<S: Scalar>(table: &[S]) -> RegionStatus<S> {
    let tol = S::zero_tol();
    let mut outside = None;
    let mut boundary = None;
    let mut argmin = 0usize;
    for (mask, value) in table.iter().enumerate() {
        if *value < table[argmin] {
            argmin = mask;
        }
        if outside.is_none() && *value < -tol.clone() {
            outside = Some(mask);
        } else if boundary.is_none() && value.abs() <= tol {
            boundary = Some(mask);
        }
    }
    let (region, witness) = match (outside, boundary) {
        (Some(m), _) => (Region::Outside, Some(m)),
        (None, Some(m)) => (Region::Boundary, Some(m)),
        (None, None) => (Region::Interior, None),
    };
    RegionStatus {
        region,
        witness: witness.map(|m| (VertexSubset::from_mask(m), table[m].clone())),
        min_xi: table[argmin].clone(),
        argmin: VertexSubset::from_mask(argmin),
    }
}

fn check_measure_cap(g: &Graph) -> Result<()> {
    g.check_cap(MEASURE_CAP, "Shearer measure")
}

/// Interior iff Ξ_{G[W]}(p) > 0 for every `W ⊆ V`.
pub fn membership<S: Scalar>(g: &Graph, p: &ParamVec<S>) -> Result<RegionStatus<S>> {
    check_measure_cap(g)?;
    Ok(classify(&xi_table(g, p)?))
}

/// Shearer's measure. The configuration with zero set `W` has mass
/// `Π_{w∈W} q_w · Ξ_{G[V∖N⁺(W)]}` when `W` is independent and zero
/// otherwise, which is the inclusion–exclusion sum over independent
/// supersets of `W` with the common factor pulled out.
///
/// Returns `SignedMeasure` when `p` lies outside the region; tiny negative
/// float masses within tolerance are clamped to zero.
pub fn construct_measure<S: Scalar>(g: &Graph, p: &ParamVec<S>) -> Result<Dist<S>> {
    check_measure_cap(g)?;
    let table = xi_table(g, p)?;
    let n = g.n();
    let full = (1usize << n) - 1;
    let q = p.qs();
    let tol = S::zero_tol();
    let mut mass = vec![S::zero(); 1 << n];
    for (config, slot) in mass.iter_mut().enumerate() {
        let zeros = VertexSubset::from_mask(full & !config);
        if !g.is_independent(zeros) {
            continue;
        }
        let rest = full & !g.closed_neighborhood(zeros).as_mask();
        let m = zeros.iter().fold(table[rest].clone(), |acc, w| acc * q[w].clone());
        if m < S::zero() {
            if m < -tol.clone() {
                return Err(Error::SignedMeasure { config, mass: m.to_f64() });
            }
            continue;
        }
        *slot = m;
    }
    Ok(Dist::from_raw(n, mass))
}

/// The point `r = p + t(1 - p)` where the segment `[p, 1]` leaves the
/// region's complement, located by bisection on the sign of the smallest
/// induced Ξ. The returned `r` is on the closed-region side.
pub fn boundary_crossing<S: Scalar>(g: &Graph, p: &ParamVec<S>) -> Result<(ParamVec<S>, S)> {
    let status = membership(g, p)?;
    match status.region {
        Region::Interior => return Err(Error::AlreadyInterior),
        Region::Boundary => return Ok((p.clone(), S::zero())),
        Region::Outside => {}
    }
    let nonneg = |t: &S| -> Result<bool> {
        let table = xi_table(g, &p.towards_one(t))?;
        Ok(table.iter().all(|x| *x >= S::zero()))
    };
    let two = S::one() + S::one();
    let (mut lo, mut hi) = (S::zero(), S::one());
    let width = S::from_f64(1e-15);
    while hi.clone() - lo.clone() > width {
        let mid = (lo.clone() + hi.clone()) / two.clone();
        if mid <= lo || mid >= hi {
            break;
        }
        if nonneg(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((p.towards_one(&hi), hi))
}

/// Orders `w` so that every vertex has a neighbour outside its
/// predecessors, peeling from the back: the last vertex is the
/// highest-index one adjacent to `exterior` or to an already peeled vertex.
/// Each entry is `(vertex, escape)`, the escape being the smallest such
/// neighbour.
pub fn escaping_order(g: &Graph, w: VertexSubset, exterior: VertexSubset) -> Result<Vec<(usize, usize)>> {
    if let Some(v) = w.union(exterior).difference(g.vertices()).first() {
        return Err(Error::IndexOutOfRange { vertex: v, n: g.n() });
    }
    let exterior = exterior.difference(w);
    let mut remaining = w;
    let mut peeled = VertexSubset::EMPTY;
    let mut order = Vec::with_capacity(w.len());
    while !remaining.is_empty() {
        let open = exterior.union(peeled);
        let pick = remaining
            .iter()
            .filter_map(|v| g.neighbor_set(v).intersection(open).first().map(|e| (v, e)))
            .last();
        let Some((v, escape)) = pick else {
            return Err(Error::NoEscape(remaining.first().expect("non-empty")));
        };
        order.push((v, escape));
        remaining.remove(v);
        peeled.insert(v);
    }
    order.reverse();
    Ok(order)
}

/// `count` draws from `d`, reproducible from `seed`.
pub fn sample<S: Scalar>(d: &Dist<S>, seed: u64, count: usize) -> Vec<usize> {
    d.sample(seed, count)
}

/// Law of `Y ∨ X` with `Y` Shearer at `p` and `X ~ Π_c` independent.
pub fn or_composition<S: Scalar>(g: &Graph, p: &ParamVec<S>, c: &ParamVec<S>) -> Result<Dist<S>> {
    let status = membership(g, p)?;
    if status.region == Region::Outside {
        return Err(Error::OutsideRegion(format!(
            "Ξ = {} on {:?}",
            status.min_xi, status.argmin
        )));
    }
    construct_measure(g, p)?.or_product(c)
}

/// Truncated infimum of the OVOEPs at one vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct IntrinsicBound<S> {
    /// Minimum over the escaping pairs inside the ball: an upper bound on
    /// the true infimum.
    pub upper: S,
    /// `min{q_w : w ∈ N(v)}`, a lower bound on the true infimum.
    pub lower: S,
    pub argmin: VertexSubset,
}

/// For each vertex `v`, the least `Q_W^v(p)` over `W` inside the radius
/// ball around `v` that leave at least one neighbour of `v` outside.
pub fn intrinsic_vector<S: Scalar>(g: &Graph, p: &ParamVec<S>, radius: usize) -> Result<Vec<IntrinsicBound<S>>> {
    p.check_len(g.n())?;
    let mut out = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        if g.degree(v) == 0 {
            out.push(IntrinsicBound { upper: p[v].clone(), lower: p[v].clone(), argmin: VertexSubset::EMPTY });
            continue;
        }
        let ball = g.ball(v, radius);
        if ball.len() > BALL_CAP {
            return Err(Error::CapExceeded { what: "intrinsic-vector ball", size: ball.len(), cap: BALL_CAP });
        }
        let (h, remap) = g.induced_subgraph(ball);
        let local_p = ParamVec::new(remap.iter().map(|&u| p[u].clone()).collect())?;
        let table = xi_table(&h, &local_p)?;
        let local_v = remap.iter().position(|&u| u == v).expect("centre in ball");
        let vbit = 1usize << local_v;
        // neighbours of v outside the ball never exist (radius >= 1), so an
        // escaping W must miss at least one neighbour inside the ball
        let nbrs = h.neighbor_set(local_v).as_mask();
        let mut best: Option<(S, usize)> = None;
        for w in 0..table.len() {
            if w & vbit != 0 || (radius > 0 && w & nbrs == nbrs) {
                continue;
            }
            let denom = &table[w];
            if *denom <= S::zero() || denom.is_negligible() {
                return Err(Error::OutsideRegion(format!("Ξ ≤ 0 inside the ball around vertex {v}")));
            }
            let value = table[w | vbit].clone() / denom.clone();
            if best.as_ref().is_none_or(|(b, _)| value < *b) {
                best = Some((value, w));
            }
        }
        let (upper, wmask) = best.expect("W = ∅ always escapes");
        let argmin = VertexSubset::from_iter(
            (0..h.n()).filter(|i| wmask >> i & 1 == 1).map(|i| remap[i]),
        );
        let lower = g
            .neighbors(v)
            .iter()
            .map(|&w| p.q(w))
            .reduce(|a, b| if b < a { b } else { a })
            .expect("degree > 0");
        out.push(IntrinsicBound { upper, lower, argmin });
    }
    Ok(out)
}
