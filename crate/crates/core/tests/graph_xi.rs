mod common;

use common::*;
use proptest::prelude::*;
use shearer_core::{
    membership, ovoep, xi_dc, xi_enumerate, xi_grid, BigRational, Family, Graph, GridWindow, ParamVec, VertexSubset,
    WeightVec, XiCache,
};

fn params(p: Vec<BigRational>) -> ParamVec<BigRational> {
    ParamVec::new(p).unwrap()
}

fn graph_and_params(max_n: usize, den: i64) -> impl Strategy<Value = (Graph, Vec<BigRational>)> {
    arb_graph(max_n).prop_flat_map(move |g| {
        let n = g.n();
        (Just(g), arb_params(n, den))
    })
}

#[test]
fn generated_graphs_are_symmetric() {
    let families = [
        Family::Path(7),
        Family::Cycle(6),
        Family::Complete(5),
        Family::Star(6),
        Family::KFuzz { k: 3, n: 10 },
        Family::GridBox(4),
        Family::Grid { rows: 3, cols: 5 },
        Family::TreeBall { d: 3, r: 3 },
    ];
    for fam in families {
        let g = fam.build().unwrap();
        for v in 0..g.n() {
            for &w in g.neighbors(v) {
                assert!(g.neighbors(w).contains(&v), "{fam:?}: {v}-{w}");
                assert_ne!(v, w);
            }
        }
    }
}

#[test]
fn kfuzz_counts_match_distance_filtering() {
    for k in 1..=4 {
        for n in 1..=12 {
            let g = Family::KFuzz { k, n }.build().unwrap();
            let brute = (0u32..1 << n)
                .filter(|&s| {
                    (0..n).all(|i| {
                        (i + 1..n).all(|j| s >> i & 1 == 0 || s >> j & 1 == 0 || j - i > k)
                    })
                })
                .count();
            assert_eq!(independent_sets_within(&g, (1 << n) - 1).len(), brute, "k={k} n={n}");
            assert_eq!(shearer_core::enumerate_independent_sets(&g).unwrap().len(), brute);
        }
    }
}

#[test]
fn tree_ball_sizes() {
    // 1 + d + d(d-1) + ... for radius r
    let g = Family::TreeBall { d: 3, r: 3 }.build().unwrap();
    assert_eq!(g.n(), 1 + 3 + 6 + 12);
    assert_eq!(g.edge_count(), g.n() - 1);
}

#[test]
fn full_induced_subgraph_is_identity() {
    let g = Family::Grid { rows: 3, cols: 3 }.build().unwrap();
    let (h, remap) = g.induced_subgraph(g.vertices());
    assert_eq!(remap, (0..9).collect::<Vec<_>>());
    assert_eq!(h.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dc_enumeration_and_oracle_agree((g, p) in graph_and_params(9, 12)) {
        let qs: Vec<BigRational> = p.iter().map(|p| q(1, 1) - p.clone()).collect();
        let pv = params(p);
        let dc = xi_dc(&g, &pv).unwrap();
        prop_assert_eq!(&dc, &xi_enumerate(&g, &WeightVec::shearer(&pv)).unwrap());
        prop_assert_eq!(dc, xi_oracle(&g, &qs, (1 << g.n()) - 1));
    }

    #[test]
    fn fundamental_identity_at_every_pivot((g, p) in graph_and_params(8, 10)) {
        let pv = params(p);
        let cache = XiCache::new(&g, &pv).unwrap();
        let full = g.vertices();
        let xi = cache.xi(full).unwrap();
        for v in 0..g.n() {
            let rhs = cache.xi(full.without(v)).unwrap()
                - pv.q(v) * cache.xi(full.difference(g.closed_neighbor_set(v))).unwrap();
            prop_assert_eq!(&xi, &rhs);
        }
    }

    #[test]
    fn xi_is_monotone_inside_the_region((g, p) in graph_and_params(7, 10), bump in 0usize..7) {
        let pv = params(p.clone());
        prop_assume!(membership(&g, &pv).unwrap().region != shearer_core::Region::Outside);
        let mut up = p;
        let v = bump % g.n();
        up[v] = (up[v].clone() + q(1, 1)) / q(2, 1);
        let upv = params(up);
        prop_assert!(membership(&g, &upv).unwrap().region != shearer_core::Region::Outside);
        prop_assert!(xi_dc(&g, &pv).unwrap() <= xi_dc(&g, &upv).unwrap());
    }

    #[test]
    fn ovoep_bounds_and_antimonotonicity((g, p) in graph_and_params(7, 10), w_bits in any::<u16>(), extra in any::<u16>()) {
        let pv = params(p);
        prop_assume!(membership(&g, &pv).unwrap().is_interior());
        let n = g.n();
        for v in 0..n {
            let w = VertexSubset::from_mask(w_bits as usize & ((1 << n) - 1)).without(v);
            let u = w.union(VertexSubset::from_mask(extra as usize & ((1 << n) - 1))).without(v);
            let qw = ovoep(&g, w, v, &pv).unwrap();
            let qu = ovoep(&g, u, v, &pv).unwrap();
            prop_assert!(qw <= pv[v]);
            prop_assert!(qw >= qu, "Q_W ≥ Q_U for W ⊆ U");
            for &e in g.neighbors(v) {
                if !w.contains(e) {
                    prop_assert!(pv.q(e) <= qw, "escape {e} bounds Q_W^{v}");
                }
            }
        }
    }

    #[test]
    fn ovoeps_telescope_to_xi((g, p) in graph_and_params(8, 10)) {
        let pv = params(p);
        prop_assume!(membership(&g, &pv).unwrap().is_interior());
        let mut w = VertexSubset::EMPTY;
        let mut product = q(1, 1);
        for v in 0..g.n() {
            product *= ovoep(&g, w, v, &pv).unwrap();
            w.insert(v);
        }
        prop_assert_eq!(product, xi_dc(&g, &pv).unwrap());
    }

    #[test]
    fn grid_transfer_matches_oracle(rows in 1usize..5, cols in 1usize..6, mask in any::<u32>(), ks in proptest::collection::vec(0i64..=8, 30)) {
        let cells: Vec<(usize, usize)> = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| mask >> (r * cols + c) & 1 == 1)
            .collect();
        let window = GridWindow::from_cells(rows, cols, cells.clone());
        let p: Vec<BigRational> = (0..rows * cols).map(|i| q(ks[i], 8)).collect();
        let got = xi_grid(&window, &params(p.clone())).unwrap();

        let mut edges = Vec::new();
        for (i, a) in cells.iter().enumerate() {
            for (j, b) in cells.iter().enumerate().skip(i + 1) {
                if a.0.abs_diff(b.0) + a.1.abs_diff(b.1) == 1 {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::new(cells.len(), &edges).unwrap();
        let qs: Vec<BigRational> = cells.iter().map(|&(r, c)| q(1, 1) - p[r * cols + c].clone()).collect();
        let full = if cells.is_empty() { 0 } else { (1u64 << cells.len()) - 1 };
        prop_assert_eq!(got, xi_oracle(&g, &qs, full));
    }
}

#[test]
fn escaping_induction_bound() {
    // max degree D, homogeneous q ≤ (D-1)^{D-1}/D^D: every escaping OVOEP ≥ 1 - 1/D
    for (g, d) in [
        (Family::Path(8).build().unwrap(), 2u32),
        (Family::Cycle(7).build().unwrap(), 2),
        (Family::Grid { rows: 3, cols: 3 }.build().unwrap(), 4),
        (Family::TreeBall { d: 3, r: 2 }.build().unwrap(), 3),
    ] {
        let df = d as i64;
        let qmax = q((df - 1).pow(d - 1), df.pow(d));
        let pv = ParamVec::homogeneous(g.n(), q(1, 1) - qmax).unwrap();
        let bound = q(1, 1) - q(1, df);
        let n = g.n();
        for mask in 0..1usize << n {
            let w = VertexSubset::from_mask(mask);
            for v in 0..n {
                if w.contains(v) || g.neighbors(v).iter().all(|&e| w.contains(e)) {
                    continue;
                }
                let val = ovoep(&g, w, v, &pv).unwrap();
                assert!(val >= bound, "W={mask:b} v={v}: {val} < {bound}");
            }
        }
    }
}
