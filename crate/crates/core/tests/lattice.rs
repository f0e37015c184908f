mod common;

use std::collections::HashSet;

use common::*;
use shearer_core::z2::identify_shape;
use shearer_core::{
    a_estimate, shape_ovoep, spiral_order, telescoping, xi_log_density, BigRational, Graph, GridShape, GridWindow,
};

fn cells_graph(cells: &[(usize, usize)]) -> Graph {
    let mut edges = Vec::new();
    for (i, a) in cells.iter().enumerate() {
        for (j, b) in cells.iter().enumerate().skip(i + 1) {
            if a.0.abs_diff(b.0) + a.1.abs_diff(b.1) == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::new(cells.len(), &edges).unwrap()
}

fn brute_xi(cells: &[(usize, usize)], qv: f64) -> f64 {
    let g = cells_graph(cells);
    xi_oracle_f64(&g, &vec![qv; g.n()])
}

#[test]
fn spiral_covers_the_box_through_connected_prefixes() {
    for n in 1..=12 {
        let order = spiral_order(n);
        assert_eq!(order.len(), n * n);
        let distinct: HashSet<_> = order.iter().collect();
        assert_eq!(distinct.len(), n * n);
        assert!(order.iter().all(|&(x, y)| x < n && y < n));
        for i in 1..order.len() {
            let (x, y) = order[i];
            let touches = order[..i].iter().any(|&(a, b)| a.abs_diff(x) + b.abs_diff(y) == 1);
            assert!(touches, "N={n}: step {i} is detached");
        }
    }
}

#[test]
fn telescoping_is_exact_in_rationals() {
    for n in 1..=4 {
        let t = telescoping(n, &q(9, 10)).unwrap();
        assert_eq!(t.product, t.xi, "N={n}");
    }
}

#[test]
fn telescoping_in_floats_up_to_ten() {
    for n in 1..=10 {
        let t = telescoping(n, &0.9f64).unwrap();
        assert!((t.product - t.xi).abs() <= 1e-9 * t.xi.max(1e-300).max(1.0), "N={n}");
        // every spiral step adds an escaping cell: q ≤ Q ≤ p
        for s in &t.steps {
            assert!(s.ovoep <= 0.9 + 1e-12 && s.ovoep >= 0.1 - 1e-12, "N={n} cell {:?}", s.cell);
        }
        // lower sandwich with the escape bound q
        assert!(t.xi >= 0.1f64.powi((n * n) as i32));
    }
}

#[test]
fn spiral_steps_are_labelled_with_matching_shapes() {
    let t = telescoping::<BigRational>(5, &q(9, 10)).unwrap();
    let order = spiral_order(5);
    let mut labelled = 0;
    for (i, step) in t.steps.iter().enumerate() {
        if let Some(shape) = step.shape {
            assert_eq!(identify_shape(&order[..i], order[i]), Some(shape));
            assert_eq!(step.ovoep, shape_ovoep(shape, &q(9, 10)).unwrap(), "step {i}");
            labelled += 1;
        }
    }
    assert!(labelled > 0);
}

#[test]
fn shape_ovoeps_match_brute_ratios() {
    for n in 0..=3 {
        for k in 0..=3 {
            for l in 0..=3 {
                let shape = GridShape::new(n, k, l);
                let base: Vec<(usize, usize)> = shape.cells();
                let mut ext = base.clone();
                ext.push(shape.target());
                let expected = brute_xi(&ext, 0.15) / brute_xi(&base, 0.15);
                let got = shape_ovoep(shape, &0.85f64).unwrap();
                assert!((got - expected).abs() < 1e-12, "{shape:?}: {got} vs {expected}");
            }
        }
    }
}

#[test]
fn a_estimate_shrinks_with_more_shapes() {
    let small = a_estimate(0.9, (2, 2, 2)).unwrap();
    let large = a_estimate(0.9, (4, 4, 4)).unwrap();
    assert!(large.value <= small.value);
    assert_eq!(large.shapes_evaluated, 125);
    assert!(large.value >= 0.1 && large.value <= 0.9);
    assert_eq!(shape_ovoep(large.argmin, &0.9).unwrap(), large.value);
}

#[test]
fn density_is_finite_and_above_log_q() {
    let mut prev = 0.0;
    for n in 1..=14 {
        let d = xi_log_density(n, &0.9f64).unwrap();
        assert!(d.is_finite() && d >= 0.1f64.ln(), "N={n}: {d}");
        if n > 1 {
            // bulk cells are more constrained than boundary cells
            assert!(d <= prev + 1e-12, "N={n}: {d} above {prev}");
        }
        prev = d;
    }
    let exact = xi_log_density(3, &q(9, 10)).unwrap();
    assert!((exact - xi_log_density(3, &0.9f64).unwrap()).abs() < 1e-12);
}

#[test]
fn shape_windows_hold_their_cells() {
    let shape = GridShape::new(3, 2, 1);
    let w: GridWindow = shape.window();
    assert_eq!(w.cell_count(), shape.cells().len());
    assert_eq!(shape.extended_window().cell_count(), w.cell_count() + 1);
    assert!(GridShape::new(1, 1, 0).le(&shape));
}
