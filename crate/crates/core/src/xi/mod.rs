//! Evaluation of the critical function Ξ_G, the independent-set polynomial
//!
//! ```text
//! Ξ_G(p) = Σ_{T ⊆ V independent} Π_{v ∈ T} (-q_v)
//! ```
//!
//! by three independent routes: explicit enumeration of independent sets,
//! memoized deletion–contraction `Ξ_G = Ξ_{G∖v} - q_v Ξ_{G∖N⁺(v)}`, and a
//! transfer matrix for grid shapes (see [`grid`]).

pub mod grid;

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::graph::{enumerate_independent_sets, Graph, VertexSubset, ENUMERATION_CAP};
use crate::params::ParamVec;
use crate::scalar::Scalar;

pub use grid::{xi_grid, xi_grid_homogeneous, GridWindow, GRID_COLUMN_CAP};

/// Per-vertex weights `w_v` of the independent-set sum. Shearer's critical
/// function uses `w = -q`; the cluster-expansion condition uses `w = +s`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVec<S>(pub Vec<S>);

impl<S: Scalar> WeightVec<S> {
    pub fn shearer(p: &ParamVec<S>) -> Self {
        WeightVec(p.qs().into_iter().map(|q| -q).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Σ over every independent set `T` of `Π_{v∈T} w_v`.
pub fn xi_enumerate<S: Scalar>(g: &Graph, w: &WeightVec<S>) -> Result<S> {
    if w.len() != g.n() {
        return Err(Error::DimensionMismatch { left: w.len(), right: g.n() });
    }
    let sets = enumerate_independent_sets(g)?;
    Ok(sets.into_iter().fold(S::zero(), |acc, t| {
        acc + t.iter().fold(S::one(), |prod, v| prod * w.0[v].clone())
    }))
}

/// Memo of Ξ over induced subgraphs of one graph at one parameter vector,
/// keyed by vertex subsets of the original graph.
///
/// Many readers may share a cache; inserts are idempotent, so two threads
/// racing on the same subset store the same value.
pub struct XiCache<S> {
    graph: Graph,
    q: Vec<S>,
    memo: DashMap<VertexSubset, S>,
}

impl<S: Scalar> XiCache<S> {
    pub fn new(g: &Graph, p: &ParamVec<S>) -> Result<Self> {
        p.check_len(g.n())?;
        let memo = DashMap::new();
        memo.insert(VertexSubset::EMPTY, S::one());
        Ok(XiCache {
            graph: g.clone(),
            q: p.qs(),
            memo,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    pub fn get(&self, w: VertexSubset) -> Option<S> {
        self.memo.get(&w).map(|e| e.value().clone())
    }

    /// Ξ of the subgraph induced by `w`.
    pub fn xi(&self, w: VertexSubset) -> Result<S> {
        if !w.is_subset(self.graph.vertices()) {
            let bad = w.difference(self.graph.vertices()).first().unwrap_or(0);
            return Err(Error::IndexOutOfRange { vertex: bad, n: self.graph.n() });
        }
        if w.len() > ENUMERATION_CAP {
            return Err(Error::CapExceeded {
                what: "deletion-contraction subset",
                size: w.len(),
                cap: ENUMERATION_CAP,
            });
        }
        Ok(self.xi_unchecked(w))
    }

    fn xi_unchecked(&self, w: VertexSubset) -> S {
        if let Some(hit) = self.memo.get(&w) {
            return hit.value().clone();
        }
        let v = self.pivot(w);
        let rest = w.without(v);
        let value = self.xi_unchecked(rest)
            - self.q[v].clone() * self.xi_unchecked(w.difference(self.graph.closed_neighbor_set(v)));
        self.memo.entry(w).or_insert(value).value().clone()
    }

    /// Highest degree inside `w`, ties broken by lowest index.
    fn pivot(&self, w: VertexSubset) -> usize {
        let mut best = (0usize, usize::MAX);
        for v in w.iter() {
            let d = self.graph.neighbor_set(v).intersection(w).len();
            if best.1 == usize::MAX || d > best.0 {
                best = (d, v);
            }
        }
        best.1
    }

    /// One-vertex open extension probability `Ξ(W ∪ {v}) / Ξ(W)`.
    pub fn ovoep(&self, w: VertexSubset, v: usize) -> Result<S> {
        self.graph.check_vertex(v)?;
        if w.contains(v) {
            return Err(Error::InvalidParameter(format!("vertex {v} already in W")));
        }
        let denom = self.xi(w)?;
        if denom <= S::zero() || denom.is_negligible() {
            return Err(Error::OutsideRegion(format!(
                "Ξ(W) = {denom} is not positive for W = {w:?}"
            )));
        }
        Ok(self.xi(w.with(v))? / denom)
    }
}

/// Ξ_G(p) by memoized deletion–contraction.
pub fn xi_dc<S: Scalar>(g: &Graph, p: &ParamVec<S>) -> Result<S> {
    g.check_cap(ENUMERATION_CAP, "deletion-contraction")?;
    XiCache::new(g, p)?.xi(g.vertices())
}

/// Q_W^v(p) with a throwaway cache.
pub fn ovoep<S: Scalar>(g: &Graph, w: VertexSubset, v: usize, p: &ParamVec<S>) -> Result<S> {
    XiCache::new(g, p)?.ovoep(w, v)
}

/// Ξ of every induced subgraph, indexed by subset bitmask.
///
/// Uses the deletion–contraction identity with the lowest vertex as pivot,
/// so each entry costs O(1) given the smaller ones.
pub fn xi_table<S: Scalar>(g: &Graph, p: &ParamVec<S>) -> Result<Vec<S>> {
    g.check_cap(ENUMERATION_CAP, "all-subset Ξ table")?;
    p.check_len(g.n())?;
    let n = g.n();
    let q = p.qs();
    let closed: Vec<usize> = (0..n).map(|v| g.closed_neighbor_set(v).as_mask()).collect();
    let mut table: Vec<S> = Vec::with_capacity(1 << n);
    table.push(S::one());
    for mask in 1usize..(1 << n) {
        let v = mask.trailing_zeros() as usize;
        let value = table[mask & !(1 << v)].clone() - q[v].clone() * table[mask & !closed[v]].clone();
        table.push(value);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;
    use crate::scalar::ratio;
    use num::rational::BigRational;

    fn homog(n: usize, p: f64) -> ParamVec<f64> {
        ParamVec::homogeneous(n, p).unwrap()
    }

    /// Independent oracle: every bitmask, explicit independence test.
    fn brute_xi(g: &Graph, w: &[f64]) -> f64 {
        let mut total = 0.0;
        for mask in 0usize..(1 << g.n()) {
            let set = VertexSubset::from_mask(mask);
            if g.is_independent(set) {
                total += set.iter().map(|v| w[v]).product::<f64>();
            }
        }
        total
    }

    #[test]
    fn enumeration_examples() {
        let k2 = Family::Complete(2).build().unwrap();
        let w = WeightVec(vec![-0.25, -0.25]);
        assert!((xi_enumerate(&k2, &w).unwrap() - 0.5).abs() < 1e-15);

        let p3 = Family::Path(3).build().unwrap();
        let w = WeightVec(vec![-0.3; 3]);
        let v = xi_enumerate(&p3, &w).unwrap();
        assert!((v - 0.19).abs() < 1e-14);
        assert!((v - brute_xi(&p3, &w.0)).abs() < 1e-15);

        let c5 = Family::Cycle(5).build().unwrap();
        assert_eq!(xi_enumerate(&c5, &WeightVec(vec![0.0; 5])).unwrap(), 1.0);
    }

    #[test]
    fn deletion_contraction_examples() {
        let k2 = Family::Complete(2).build().unwrap();
        assert_eq!(xi_dc(&k2, &homog(2, 0.75)).unwrap(), 0.5);

        let single = Graph::edgeless(1);
        assert!((xi_dc(&single, &homog(1, 0.3)).unwrap() - 0.3).abs() < 1e-15);

        let c4 = Family::Cycle(4).build().unwrap();
        let exact: BigRational =
            xi_dc(&c4, &ParamVec::homogeneous(4, ratio(3, 4)).unwrap()).unwrap();
        assert_eq!(exact, ratio(1, 8));
    }

    #[test]
    fn cache_is_populated_and_consistent() {
        let c4 = Family::Cycle(4).build().unwrap();
        let cache = XiCache::new(&c4, &homog(4, 0.75)).unwrap();
        cache.xi(c4.vertices()).unwrap();
        assert!(cache.len() > 2);
        assert_eq!(cache.get(VertexSubset::EMPTY), Some(1.0));
        // every cached entry satisfies the identity for every pivot
        let entries: Vec<(VertexSubset, f64)> = cache.memo.iter().map(|e| (*e.key(), *e.value())).collect();
        for (w, value) in entries {
            for v in w.iter() {
                let rhs = cache.xi(w.without(v)).unwrap()
                    - 0.25 * cache.xi(w.difference(c4.closed_neighbor_set(v))).unwrap();
                assert!((value - rhs).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn ovoep_examples() {
        let p3 = Family::Path(3).build().unwrap();
        let p = homog(3, 0.7);
        assert!((ovoep(&p3, VertexSubset::EMPTY, 1, &p).unwrap() - 0.7).abs() < 1e-15);
        let q = ovoep(&p3, VertexSubset::singleton(0), 1, &p).unwrap();
        assert!((q - 0.4 / 0.7).abs() < 1e-14);
        let q = ovoep(&p3, VertexSubset::singleton(0), 2, &p).unwrap();
        assert!((q - 0.7).abs() < 1e-14);
        assert!(ovoep(&p3, VertexSubset::singleton(1), 1, &p).is_err());
    }

    #[test]
    fn ovoep_rejects_nonpositive_denominator() {
        let g = Family::Path(3).build().unwrap();
        let p = homog(3, 0.5);
        // W = {0, 1} induces K2 and Ξ_{K2}(0.5) = 0
        let err = ovoep(&g, VertexSubset::from_iter([0, 1]), 2, &p).unwrap_err();
        assert!(matches!(err, Error::OutsideRegion(_)));
    }

    #[test]
    fn dense_table_matches_enumeration() {
        let g = Family::KFuzz { k: 2, n: 7 }.build().unwrap();
        let p = ParamVec::<f64>::from_f64s(&[0.9, 0.8, 0.95, 0.7, 0.85, 0.9, 0.99]).unwrap();
        let table = xi_table(&g, &p).unwrap();
        let w = WeightVec::shearer(&p);
        for mask in [0usize, 1, 5, 0b1011, 0b1111111, 0b1010101] {
            let set = VertexSubset::from_mask(mask);
            let (h, remap) = g.induced_subgraph(set);
            let wh = WeightVec(remap.iter().map(|&v| w.0[v]).collect());
            assert!((table[mask] - xi_enumerate(&h, &wh).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn caps_are_enforced() {
        let big = Family::Path(30).build().unwrap();
        assert!(matches!(
            xi_dc(&big, &homog(30, 0.9)),
            Err(Error::CapExceeded { .. })
        ));
        assert!(xi_table(&big, &homog(30, 0.9)).is_err());
    }
}
