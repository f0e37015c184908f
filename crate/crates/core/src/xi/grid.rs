//! Transfer-matrix evaluation of Ξ on subsets of a rectangular box of Z².
//!
//! Cells are processed one at a time in row-major order. The state is the
//! occupancy of the last `cols` processed cells (a broken profile), so a
//! cell may be selected when neither its upper nor its left neighbour is.
//! Cost is O(rows · cols · 2^cols); the shorter side of the box is used as
//! the profile width.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::params::ParamVec;
use crate::scalar::Scalar;

/// Largest profile width accepted by [`xi_grid`].
pub const GRID_COLUMN_CAP: usize = 20;

/// A subset of the cells of a `rows × cols` box. Bit `c` of `row_masks[r]`
/// marks cell `(r, c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridWindow {
    rows: usize,
    cols: usize,
    row_masks: Vec<u32>,
}

impl GridWindow {
    pub fn empty(rows: usize, cols: usize) -> Self {
        assert!(cols <= 32, "grid windows are at most 32 cells wide");
        GridWindow {
            rows,
            cols,
            row_masks: vec![0; rows],
        }
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        let mut w = Self::empty(rows, cols);
        let row = if cols == 32 { u32::MAX } else { (1u32 << cols) - 1 };
        w.row_masks.iter_mut().for_each(|m| *m = row);
        w
    }

    pub fn from_cells(rows: usize, cols: usize, cells: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut w = Self::empty(rows, cols);
        for (r, c) in cells {
            w.insert(r, c);
        }
        w
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn insert(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "cell ({r}, {c}) outside box");
        self.row_masks[r] |= 1 << c;
    }

    pub fn remove(&mut self, r: usize, c: usize) {
        self.row_masks[r] &= !(1 << c);
    }

    pub fn contains(&self, r: usize, c: usize) -> bool {
        r < self.rows && c < self.cols && (self.row_masks[r] >> c) & 1 == 1
    }

    pub fn cell_count(&self) -> usize {
        self.row_masks.iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |r| (0..self.cols).filter(move |&c| self.contains(r, c)).map(move |c| (r, c)))
    }

    pub fn transpose(&self) -> Self {
        GridWindow::from_cells(self.cols, self.rows, self.cells().map(|(r, c)| (c, r)))
    }

    /// The induced subgraph of Z² on the window's cells, vertices numbered
    /// in row-major cell order.
    pub fn to_graph(&self) -> Result<(Graph, Vec<(usize, usize)>)> {
        let cells: Vec<(usize, usize)> = self.cells().collect();
        let index = |r: usize, c: usize| cells.iter().position(|&x| x == (r, c));
        let mut edges = Vec::new();
        for (i, &(r, c)) in cells.iter().enumerate() {
            if let Some(j) = index(r, c + 1) {
                edges.push((i, j));
            }
            if let Some(j) = index(r + 1, c) {
                edges.push((i, j));
            }
        }
        Ok((Graph::new(cells.len(), &edges)?, cells))
    }
}

/// Ξ on the window with per-cell parameters indexed `r * cols + c` over
/// the whole box.
pub fn xi_grid<S: Scalar>(window: &GridWindow, p: &ParamVec<S>) -> Result<S> {
    p.check_len(window.rows * window.cols)?;
    let cols = window.cols;
    profile_sweep(window, |r, c| -p.q(r * cols + c))
}

/// Ξ on the window with one parameter for every cell.
pub fn xi_grid_homogeneous<S: Scalar>(window: &GridWindow, p: &S) -> Result<S> {
    let minus_q = p.clone() - S::one();
    profile_sweep(window, |_, _| minus_q.clone())
}

fn profile_sweep<S: Scalar>(window: &GridWindow, weight: impl Fn(usize, usize) -> S) -> Result<S> {
    if window.cell_count() == 0 {
        return Ok(S::one());
    }
    let transposed = window.cols > window.rows;
    let owned;
    let win = if transposed {
        owned = window.transpose();
        &owned
    } else {
        window
    };
    let weight = |r: usize, c: usize| if transposed { weight(c, r) } else { weight(r, c) };
    let width = win.cols;
    if width > GRID_COLUMN_CAP {
        return Err(Error::CapExceeded {
            what: "grid profile width",
            size: width,
            cap: GRID_COLUMN_CAP,
        });
    }
    let size = 1usize << width;
    let mut state = vec![S::zero(); size];
    let mut next = vec![S::zero(); size];
    state[0] = S::one();
    for r in 0..win.rows {
        for c in 0..width {
            let present = win.contains(r, c);
            let w = present.then(|| weight(r, c));
            let bit = 1usize << c;
            next.iter_mut().for_each(|x| *x = S::zero());
            for s in 0..size {
                if state[s].is_zero() {
                    continue;
                }
                let cleared = s & !bit;
                next[cleared] = next[cleared].clone() + state[s].clone();
                if let Some(w) = &w {
                    let left_free = c == 0 || (s >> (c - 1)) & 1 == 0;
                    if s & bit == 0 && left_free {
                        next[s | bit] = next[s | bit].clone() + state[s].clone() * w.clone();
                    }
                }
            }
            std::mem::swap(&mut state, &mut next);
        }
    }
    Ok(state.into_iter().fold(S::zero(), |a, b| a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::xi::{xi_enumerate, WeightVec};
    use num::rational::BigRational;

    #[test]
    fn small_boxes() {
        let c4 = GridWindow::full(2, 2);
        assert!((xi_grid_homogeneous(&c4, &0.75).unwrap() - 0.125).abs() < 1e-15);
        let exact: BigRational = xi_grid_homogeneous(&c4, &ratio(3, 4)).unwrap();
        assert_eq!(exact, ratio(1, 8));

        let row = GridWindow::full(1, 3);
        assert!((xi_grid_homogeneous(&row, &0.7).unwrap() - 0.19).abs() < 1e-14);

        let empty = GridWindow::empty(3, 3);
        assert_eq!(xi_grid_homogeneous(&empty, &0.7).unwrap(), 1.0);
    }

    #[test]
    fn agrees_with_enumeration_on_irregular_shapes() {
        let shapes = [
            GridWindow::from_cells(3, 4, [(0, 0), (0, 1), (1, 1), (2, 1), (2, 2), (2, 3), (0, 3)]),
            GridWindow::from_cells(4, 2, [(0, 0), (1, 0), (2, 0), (3, 0), (3, 1), (1, 1)]),
            GridWindow::full(3, 5),
        ];
        for shape in &shapes {
            let (g, _) = shape.to_graph().unwrap();
            let w = WeightVec(vec![-0.15; g.n()]);
            let expected = xi_enumerate(&g, &w).unwrap();
            let got = xi_grid_homogeneous(shape, &0.85).unwrap();
            assert!((expected - got).abs() < 1e-13, "{shape:?}");
        }
    }

    #[test]
    fn inhomogeneous_parameters_follow_cells() {
        let shape = GridWindow::from_cells(2, 3, [(0, 0), (0, 1), (1, 1), (1, 2)]);
        let p = ParamVec::<f64>::from_f64s(&[0.9, 0.8, 1.0, 1.0, 0.7, 0.95]).unwrap();
        let (g, cells) = shape.to_graph().unwrap();
        let w = WeightVec(cells.iter().map(|&(r, c)| -(1.0 - p[r * 3 + c])).collect());
        let expected = xi_enumerate(&g, &w).unwrap();
        assert!((xi_grid(&shape, &p).unwrap() - expected).abs() < 1e-14);
        // same answer when the box is given transposed
        let pt = ParamVec::<f64>::from_f64s(&[0.9, 1.0, 0.8, 0.7, 1.0, 0.95]).unwrap();
        assert!((xi_grid(&shape.transpose(), &pt).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn width_cap() {
        let wide = GridWindow::full(21, 21);
        assert!(matches!(
            xi_grid_homogeneous(&wide, &0.9),
            Err(Error::CapExceeded { .. })
        ));
    }
}
