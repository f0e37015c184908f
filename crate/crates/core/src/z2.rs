//! Critical functions on boxes of Z²: the staircase shapes `W_(n,k,l)`,
//! the anticlockwise spiral through an `N × N` box, and the telescoping of
//! `Ξ_{G_N}` into one-vertex extension ratios along that spiral.
//!
//! Cells are `(x, y)` pairs. A shape is evaluated through a [`GridWindow`]
//! whose rows are `y` and columns are `x`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::xi::{xi_grid_homogeneous, GridWindow, GRID_COLUMN_CAP};

pub type Cell = (usize, usize);

/// `W_(n,k,l) = {0≤x<n, 0≤y<k+l} ⊎ {x=n, 0≤y<k}`, extended at `(n, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GridShape {
    pub n: usize,
    pub k: usize,
    pub l: usize,
}

impl GridShape {
    pub fn new(n: usize, k: usize, l: usize) -> Self {
        GridShape { n, k, l }
    }

    pub fn cells(&self) -> Vec<Cell> {
        let mut cells: Vec<Cell> = (0..self.n)
            .flat_map(|x| (0..self.k + self.l).map(move |y| (x, y)))
            .collect();
        cells.extend((0..self.k).map(|y| (self.n, y)));
        cells
    }

    pub fn target(&self) -> Cell {
        (self.n, self.k)
    }

    fn bounding_box(&self) -> (usize, usize) {
        // (rows, cols) covering the shape and the target
        ((self.k + self.l).max(self.k + 1), self.n + 1)
    }

    pub fn window(&self) -> GridWindow {
        let (rows, cols) = self.bounding_box();
        GridWindow::from_cells(rows, cols, self.cells().into_iter().map(|(x, y)| (y, x)))
    }

    pub fn extended_window(&self) -> GridWindow {
        let mut w = self.window();
        let (x, y) = self.target();
        w.insert(y, x);
        w
    }

    pub fn le(&self, other: &GridShape) -> bool {
        self.n <= other.n && self.k <= other.k && self.l <= other.l
    }
}

fn check_width(w: &GridWindow) -> Result<()> {
    let width = w.rows().min(w.cols());
    if width > GRID_COLUMN_CAP {
        return Err(Error::CapExceeded { what: "grid profile width", size: width, cap: GRID_COLUMN_CAP });
    }
    Ok(())
}

fn ratio_of<S: Scalar>(with: &GridWindow, without: &GridWindow, p: &S) -> Result<S> {
    let denom = xi_grid_homogeneous(without, p)?;
    if denom <= S::zero() || denom.is_negligible() {
        return Err(Error::OutsideRegion(format!("Ξ = {denom} on the conditioning shape")));
    }
    Ok(xi_grid_homogeneous(with, p)? / denom)
}

/// `Q` of extending `W_(n,k,l)` by its target cell, homogeneous `p`.
pub fn shape_ovoep<S: Scalar>(shape: GridShape, p: &S) -> Result<S> {
    let with = shape.extended_window();
    check_width(&with)?;
    ratio_of(&with, &shape.window(), p)
}

/// Truncated infimum of [`shape_ovoep`] with its metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AEstimate {
    /// Upper bound on the infimum over all shapes.
    pub value: f64,
    pub caps: (usize, usize, usize),
    pub argmin: GridShape,
    pub shapes_evaluated: usize,
}

/// Minimum of the shape OVOEPs over `n ≤ caps.0, k ≤ caps.1, l ≤ caps.2`.
pub fn a_estimate(p: f64, caps: (usize, usize, usize)) -> Result<AEstimate> {
    let mut best = (f64::INFINITY, GridShape::new(0, 0, 0));
    let mut count = 0;
    for n in 0..=caps.0 {
        for k in 0..=caps.1 {
            for l in 0..=caps.2 {
                let shape = GridShape::new(n, k, l);
                let q = shape_ovoep(shape, &p)?;
                count += 1;
                if q < best.0 {
                    best = (q, shape);
                }
            }
        }
    }
    Ok(AEstimate { value: best.0, caps, argmin: best.1, shapes_evaluated: count })
}

/// The `N × N` box in spiral order: start at `(⌊N/2⌋, ⌊N/2⌋)`, step left,
/// then turn anticlockwise with run lengths 1, 1, 2, 2, 3, 3, ...; cells
/// outside the box are skipped.
pub fn spiral_order(n: usize) -> Vec<Cell> {
    let total = n * n;
    let mut out = Vec::with_capacity(total);
    if n == 0 {
        return out;
    }
    let (mut x, mut y) = ((n / 2) as i64, (n / 2) as i64);
    out.push((x as usize, y as usize));
    // left, down, right, up
    const DIRS: [(i64, i64); 4] = [(-1, 0), (0, -1), (1, 0), (0, 1)];
    let mut run = 1;
    let mut dir = 0;
    while out.len() < total {
        for _ in 0..2 {
            let (dx, dy) = DIRS[dir];
            for _ in 0..run {
                x += dx;
                y += dy;
                if (0..n as i64).contains(&x) && (0..n as i64).contains(&y) {
                    out.push((x as usize, y as usize));
                    if out.len() == total {
                        return out;
                    }
                }
            }
            dir = (dir + 1) % 4;
        }
        run += 1;
    }
    out
}

/// The eight symmetries of the square lattice applied to `(x, y)`.
fn symmetry(i: usize, (x, y): (i64, i64)) -> (i64, i64) {
    let (x, y) = if i & 4 != 0 { (y, x) } else { (x, y) };
    let x = if i & 1 != 0 { -x } else { x };
    let y = if i & 2 != 0 { -y } else { y };
    (x, y)
}

/// Finds `(n, k, l)` such that `(prefix, target)` is a lattice image of
/// `(W_(n,k,l), (n, k))`.
pub fn identify_shape(prefix: &[Cell], target: Cell) -> Option<GridShape> {
    if prefix.is_empty() {
        return Some(GridShape::new(0, 0, 0));
    }
    let as_i = |(x, y): Cell| (x as i64, y as i64);
    for sym in 0..8 {
        let cells: Vec<(i64, i64)> = prefix.iter().map(|&c| symmetry(sym, as_i(c))).collect();
        let (tx, ty) = symmetry(sym, as_i(target));
        let min_x = cells.iter().map(|c| c.0).min()?;
        let min_y = cells.iter().map(|c| c.1).min()?;
        let max_y = cells.iter().map(|c| c.1).max()?;
        let (n, k) = (tx - min_x, ty - min_y);
        if n < 0 || k < 0 {
            continue;
        }
        let l = max_y - min_y + 1 - k;
        if l < 0 {
            continue;
        }
        let shape = GridShape::new(n as usize, k as usize, l as usize);
        let mut expected: Vec<(i64, i64)> = shape.cells().into_iter().map(|(x, y)| (x as i64, y as i64)).collect();
        let mut got: Vec<(i64, i64)> = cells.iter().map(|&(x, y)| (x - min_x, y - min_y)).collect();
        expected.sort_unstable();
        got.sort_unstable();
        if expected == got {
            return Some(shape);
        }
    }
    None
}

/// One step of the telescoping product.
#[derive(Debug, Clone, PartialEq)]
pub struct SpiralStep<S> {
    pub cell: Cell,
    /// `Ξ(prefix ∪ cell) / Ξ(prefix)`.
    pub ovoep: S,
    pub shape: Option<GridShape>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Telescoping<S> {
    pub steps: Vec<SpiralStep<S>>,
    pub product: S,
    /// `Ξ_{G_N}` evaluated directly on the full box.
    pub xi: S,
}

/// Extension ratios along the spiral through the `N × N` box.
pub fn telescoping<S: Scalar>(n: usize, p: &S) -> Result<Telescoping<S>> {
    if n > GRID_COLUMN_CAP {
        return Err(Error::CapExceeded { what: "grid profile width", size: n, cap: GRID_COLUMN_CAP });
    }
    let order = spiral_order(n);
    let mut window = GridWindow::empty(n, n);
    let mut prev = S::one();
    let mut steps = Vec::with_capacity(order.len());
    let mut product = S::one();
    for (i, &(x, y)) in order.iter().enumerate() {
        window.insert(y, x);
        let next = xi_grid_homogeneous(&window, p)?;
        if prev <= S::zero() || prev.is_negligible() {
            return Err(Error::OutsideRegion(format!("Ξ = {prev} on a spiral prefix")));
        }
        let q = next.clone() / prev;
        product = product * q.clone();
        steps.push(SpiralStep { cell: (x, y), ovoep: q, shape: identify_shape(&order[..i], (x, y)) });
        prev = next;
    }
    let xi = xi_grid_homogeneous(&GridWindow::full(n, n), p)?;
    Ok(Telescoping { steps, product, xi })
}

/// `log Ξ_{G_N}(p) / N²`.
pub fn xi_log_density<S: Scalar>(n: usize, p: &S) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be positive".into()));
    }
    let box_ = GridWindow::full(n, n);
    check_width(&box_)?;
    let xi = xi_grid_homogeneous(&box_, p)?;
    if xi <= S::zero() {
        return Err(Error::OutsideRegion(format!("Ξ_(G_{n}) = {xi}")));
    }
    Ok(xi.to_f64().ln() / (n * n) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, VertexSubset};
    use crate::params::ParamVec;
    use crate::scalar::ratio;
    use crate::xi::{xi_enumerate, WeightVec};
    use num::rational::BigRational;

    fn xi_of_cells(cells: &[Cell], q: f64) -> f64 {
        let idx = |c: Cell| cells.iter().position(|&d| d == c);
        let mut edges = Vec::new();
        for (i, &(x, y)) in cells.iter().enumerate() {
            for nb in [(x + 1, y), (x, y + 1)] {
                if let Some(j) = idx(nb) {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::new(cells.len(), &edges).unwrap();
        xi_enumerate(&g, &WeightVec(vec![-q; cells.len()])).unwrap()
    }

    #[test]
    fn shape_cells() {
        let s = GridShape::new(1, 1, 1);
        assert_eq!(s.cells(), vec![(0, 0), (0, 1), (1, 0)]);
        assert_eq!(s.target(), (1, 1));
        assert!(!s.cells().contains(&s.target()));
        assert!(GridShape::new(0, 0, 0).cells().is_empty());
    }

    #[test]
    fn shape_ovoep_examples() {
        assert_eq!(shape_ovoep(GridShape::new(0, 0, 0), &0.9).unwrap(), 0.9);
        let s = GridShape::new(1, 1, 1);
        let mut with = s.cells();
        with.push(s.target());
        let expected = xi_of_cells(&with, 0.1) / xi_of_cells(&s.cells(), 0.1);
        assert!((shape_ovoep(s, &0.9).unwrap() - expected).abs() < 1e-14);
        let exact: BigRational = shape_ovoep(s, &ratio(9, 10)).unwrap();
        assert!((Scalar::to_f64(&exact) - expected).abs() < 1e-14);
    }

    #[test]
    fn shape_ovoep_is_monotone_and_bounded() {
        let shapes: Vec<GridShape> = (0..3)
            .flat_map(|n| (0..3).flat_map(move |k| (0..3).map(move |l| GridShape::new(n, k, l))))
            .collect();
        let values: Vec<f64> = shapes.iter().map(|&s| shape_ovoep(s, &0.9).unwrap()).collect();
        for (a, va) in shapes.iter().zip(&values) {
            assert!(*va >= 0.1 - 1e-15 && *va <= 0.9 + 1e-15);
            for (b, vb) in shapes.iter().zip(&values) {
                if a.le(b) {
                    assert!(va + 1e-14 >= *vb, "{a:?} {b:?}");
                }
            }
        }
    }

    #[test]
    fn a_estimate_behaviour() {
        assert_eq!(a_estimate(0.9, (0, 0, 0)).unwrap().value, 0.9);
        let a3 = a_estimate(0.9, (3, 3, 3)).unwrap();
        let a4 = a_estimate(0.9, (4, 4, 4)).unwrap();
        assert!(a4.value <= a3.value && a4.value >= 0.1);
        assert_eq!(a3.shapes_evaluated, 64);
    }

    #[test]
    fn spiral_examples() {
        assert_eq!(spiral_order(1), vec![(0, 0)]);
        assert_eq!(spiral_order(2), vec![(1, 1), (0, 1), (0, 0), (1, 0)]);
        for n in 1..=12 {
            let order = spiral_order(n);
            assert_eq!(order.len(), n * n);
            let mut seen = std::collections::HashSet::new();
            for (i, &c) in order.iter().enumerate() {
                assert!(c.0 < n && c.1 < n && seen.insert(c));
                if i > 0 {
                    // prefix stays connected: each new cell touches an earlier one
                    let touches = order[..i]
                        .iter()
                        .any(|&d| c.0.abs_diff(d.0) + c.1.abs_diff(d.1) == 1);
                    assert!(touches, "N = {n}, step {i}");
                }
            }
        }
    }

    #[test]
    fn identification_recovers_shapes() {
        for n in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let s = GridShape::new(n, k, l);
                    if s.cells().is_empty() {
                        continue;
                    }
                    let found = identify_shape(&s.cells(), s.target()).unwrap();
                    assert_eq!(found.cells().len(), s.cells().len());
                    let (a, b) = (shape_ovoep(found, &0.9).unwrap(), shape_ovoep(s, &0.9).unwrap());
                    assert!((a - b).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn telescoping_small_boxes() {
        let t: Telescoping<BigRational> = telescoping(3, &ratio(9, 10)).unwrap();
        assert_eq!(t.product, t.xi);
        let t = telescoping(5, &0.9).unwrap();
        assert!((t.product - t.xi).abs() < 1e-12);
        for step in &t.steps {
            if let Some(shape) = step.shape {
                assert!((shape_ovoep(shape, &0.9).unwrap() - step.ovoep).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn log_density_examples() {
        assert!((xi_log_density(1, &0.9).unwrap() - 0.9f64.ln()).abs() < 1e-15);
        assert!((xi_log_density(2, &0.9).unwrap() - 0.62f64.ln() / 4.0).abs() < 1e-14);
    }

    #[test]
    fn grid_windows_match_graph_enumeration() {
        let w = GridShape::new(2, 1, 2).extended_window();
        let (g, _) = w.to_graph().unwrap();
        let p = ParamVec::<f64>::homogeneous(g.n(), 0.85).unwrap();
        let direct = crate::xi::xi_dc(&g, &p).unwrap();
        assert!((xi_grid_homogeneous(&w, &0.85).unwrap() - direct).abs() < 1e-14);
        assert_eq!(g.n(), VertexSubset::full(g.n()).len());
    }
}
