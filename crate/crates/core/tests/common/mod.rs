//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's own Ξ or measure code.

#![allow(dead_code)]

use rand::Rng;
use shearer_core::scalar::ratio;
use shearer_core::{BigRational, Family, Graph};

pub fn q(num: i64, den: i64) -> BigRational {
    ratio(num, den)
}

/// Adjacency bitmasks.
pub fn adjacency(g: &Graph) -> Vec<u64> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect()
}

/// Every independent subset of `within`, by plain subset filtering.
pub fn independent_sets_within(g: &Graph, within: u64) -> Vec<u64> {
    let adj = adjacency(g);
    let n = g.n();
    assert!(n <= 22, "oracle is exponential");
    (0..1u64 << n)
        .filter(|&s| s & !within == 0)
        .filter(|&s| (0..n).all(|v| s >> v & 1 == 0 || adj[v] & s == 0))
        .collect()
}

/// Σ over independent `T ⊆ within` of Π_{t∈T} (-q_t), in exact rationals.
pub fn xi_oracle(g: &Graph, qs: &[BigRational], within: u64) -> BigRational {
    independent_sets_within(g, within)
        .into_iter()
        .map(|s| {
            let mut term = q(1, 1);
            for (v, qv) in qs.iter().enumerate().take(g.n()) {
                if s >> v & 1 == 1 {
                    term = -term * qv.clone();
                }
            }
            term
        })
        .sum()
}

/// Same sum in floating point, with the independent sets found by
/// branching (fast enough for twenty-odd vertices).
pub fn xi_oracle_f64(g: &Graph, qs: &[f64]) -> f64 {
    fn go(adj: &[u64], qs: &[f64], remaining: u64) -> f64 {
        if remaining == 0 {
            return 1.0;
        }
        let v = remaining.trailing_zeros() as usize;
        let without = remaining & !(1 << v);
        go(adj, qs, without) - qs[v] * go(adj, qs, without & !adj[v])
    }
    let adj = adjacency(g);
    go(&adj, qs, if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 })
}

/// Independence-polynomial coefficients: `a[k]` = number of independent
/// k-sets.
pub fn independence_coefficients(g: &Graph) -> Vec<u64> {
    let mut a = vec![0u64; g.n() + 1];
    for s in independent_sets_within(g, (1u64 << g.n()) - 1) {
        a[s.count_ones() as usize] += 1;
    }
    a
}

/// Smallest positive root of `Σ a_k (-x)^k` found by an outward scan and
/// bisection; the homogeneous boundary value `q*` for a connected graph.
pub fn first_root(a: &[u64]) -> f64 {
    let f = |x: f64| a.iter().enumerate().map(|(k, &c)| c as f64 * (-x).powi(k as i32)).sum::<f64>();
    let mut lo = 0.0;
    let step = 1e-3;
    while f(lo + step) > 0.0 {
        lo += step;
        assert!(lo < 1.0, "no root below 1");
    }
    let mut hi = lo + step;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Mass tables are indexed by configurations with bit `v` = `Y_v`.
pub fn has_adjacent_zeros(g: &Graph, config: usize) -> bool {
    g.edges().any(|(u, v)| config >> u & 1 == 0 && config >> v & 1 == 0)
}

/// The characterization-suite family.
pub fn small_family() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 2..=6 {
        out.push((format!("P{n}"), Family::Path(n).build().unwrap()));
    }
    for n in 3..=6 {
        out.push((format!("C{n}"), Family::Cycle(n).build().unwrap()));
    }
    out.push(("K3".into(), Family::Complete(3).build().unwrap()));
    out.push(("K4".into(), Family::Complete(4).build().unwrap()));
    out.push(("2x2".into(), Family::Grid { rows: 2, cols: 2 }.build().unwrap()));
    out.push(("2x3".into(), Family::Grid { rows: 2, cols: 3 }.build().unwrap()));
    out
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, density: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).unwrap()
}

/// A rational in `[0, 1]` with a small denominator.
pub fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    let den = rng.gen_range(1..=20);
    q(rng.gen_range(0..=den), den)
}

/// Random exact law on `{0,1}^n` with small integer weights.
pub fn random_masses<R: Rng>(rng: &mut R, n: usize) -> Vec<BigRational> {
    let w: Vec<i64> = (0..1 << n).map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(1..=9) }).collect();
    let total: i64 = w.iter().sum::<i64>().max(1);
    if w.iter().all(|&x| x == 0) {
        let mut m = vec![q(0, 1); 1 << n];
        m[0] = q(1, 1);
        return m;
    }
    w.into_iter().map(|x| q(x, total)).collect()
}

/// Up-set domination by explicit enumeration of every up-set (n ≤ 3 here,
/// 20 up-sets at n = 3), independent of the library's oracles.
pub fn upsets_dominate(y: &[BigRational], x: &[BigRational], n: usize) -> bool {
    let size = 1usize << n;
    assert!(n <= 3);
    (0u64..1 << size)
        .filter(|&fam| {
            (0..size).all(|a| {
                fam >> a & 1 == 0 || (0..size).all(|b| b & a != a || fam >> b & 1 == 1)
            })
        })
        .all(|fam| {
            let p = |d: &[BigRational]| -> BigRational {
                (0..size).filter(|&c| fam >> c & 1 == 1).map(|c| d[c].clone()).sum()
            };
            p(y) >= p(x)
        })
}

/// Random graphs on `1..=max_n` vertices.
pub fn arb_graph(max_n: usize) -> impl proptest::strategy::Strategy<Value = Graph> {
    use proptest::prelude::*;
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut it = bits.into_iter();
            for u in 0..n {
                for v in u + 1..n {
                    if it.next().unwrap() {
                        edges.push((u, v));
                    }
                }
            }
            Graph::new(n, &edges).unwrap()
        })
    })
}

/// Exact parameters `k/den` for each vertex.
pub fn arb_params(n: usize, den: i64) -> impl proptest::strategy::Strategy<Value = Vec<BigRational>> {
    use proptest::prelude::*;
    proptest::collection::vec(0..=den, n).prop_map(move |ks| ks.into_iter().map(|k| q(k, den)).collect())
}
