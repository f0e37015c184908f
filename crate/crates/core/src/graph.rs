//! Finite simple graphs, vertex subsets and the generator families used
//! throughout the crate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count representable by [`VertexSubset`].
pub const MAX_VERTICES: usize = 128;

/// Default cap for operations that are exponential in the vertex count.
pub const ENUMERATION_CAP: usize = 24;

/// A set of vertex indices below [`MAX_VERTICES`], stored as a two-word mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSubset(u128);

impl VertexSubset {
    pub const EMPTY: VertexSubset = VertexSubset(0);

    pub fn from_bits(bits: u128) -> Self {
        VertexSubset(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSubset(u128::MAX)
        } else {
            VertexSubset((1u128 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        assert!(v < MAX_VERTICES);
        VertexSubset(1u128 << v)
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && (self.0 >> v) & 1 == 1
    }

    pub fn with(self, v: usize) -> Self {
        VertexSubset(self.0 | (1u128 << v))
    }

    pub fn without(self, v: usize) -> Self {
        VertexSubset(self.0 & !(1u128 << v))
    }

    pub fn insert(&mut self, v: usize) {
        *self = self.with(v);
    }

    pub fn remove(&mut self, v: usize) {
        *self = self.without(v);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        VertexSubset(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSubset(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSubset(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Lowest member.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    /// Low 64 bits as a configuration index. Only meaningful for sets inside
    /// graphs small enough for dense enumeration.
    pub fn as_mask(self) -> usize {
        self.0 as usize
    }

    pub fn from_mask(mask: usize) -> Self {
        VertexSubset(mask as u128)
    }
}

impl FromIterator<usize> for VertexSubset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter()
            .fold(VertexSubset::EMPTY, |s, v| s.with(v))
    }
}

impl fmt::Debug for VertexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Finite simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    masks: Vec<VertexSubset>,
}

impl Graph {
    /// Builds a graph, collapsing duplicate edges.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::CapExceeded {
                what: "vertex count",
                size: n,
                cap: MAX_VERTICES,
            });
        }
        let mut masks = vec![VertexSubset::EMPTY; n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::IndexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::LoopEdge(u));
            }
            masks[u].insert(v);
            masks[v].insert(u);
        }
        let adjacency = masks.iter().map(|m| m.iter().collect()).collect();
        Ok(Graph { adjacency, masks })
    }

    pub fn edgeless(n: usize) -> Self {
        Graph::new(n, &[]).expect("edgeless graph")
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn vertices(&self) -> VertexSubset {
        VertexSubset::full(self.n())
    }

    /// Sorted neighbour list.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn neighbor_set(&self, v: usize) -> VertexSubset {
        self.masks[v]
    }

    /// N⁺(v) = N(v) ∪ {v}.
    pub fn closed_neighbor_set(&self, v: usize) -> VertexSubset {
        self.masks[v].with(v)
    }

    /// Union of closed neighbourhoods of the members of `w`.
    pub fn closed_neighborhood(&self, w: VertexSubset) -> VertexSubset {
        w.iter()
            .fold(w, |acc, v| acc.union(self.masks[v]))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.masks[u].contains(v)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn is_independent(&self, w: VertexSubset) -> bool {
        w.iter().all(|v| self.masks[v].is_disjoint(w))
    }

    /// True when no vertex of `a` equals or neighbours a vertex of `b`.
    pub fn separated(&self, a: VertexSubset, b: VertexSubset) -> bool {
        self.closed_neighborhood(a).is_disjoint(b)
    }

    /// Induced subgraph together with the map from new to old indices.
    pub fn induced_subgraph(&self, w: VertexSubset) -> (Graph, Vec<usize>) {
        let remap: Vec<usize> = w.iter().filter(|&v| v < self.n()).collect();
        let mut position = vec![usize::MAX; self.n()];
        for (i, &v) in remap.iter().enumerate() {
            position[v] = i;
        }
        let edges: Vec<(usize, usize)> = self
            .edges()
            .filter(|&(u, v)| position[u] != usize::MAX && position[v] != usize::MAX)
            .map(|(u, v)| (position[u], position[v]))
            .collect();
        let g = Graph::new(remap.len(), &edges).expect("induced subgraph is simple");
        (g, remap)
    }

    /// Connected components of the subgraph induced by `within`.
    pub fn components(&self, within: VertexSubset) -> Vec<VertexSubset> {
        let mut left = within;
        let mut out = Vec::new();
        while let Some(start) = left.first() {
            let mut comp = VertexSubset::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSubset::EMPTY;
                for v in frontier.iter() {
                    next = next.union(self.masks[v]);
                }
                next = next.intersection(within).difference(comp);
                comp = comp.union(next);
                frontier = next;
            }
            left = left.difference(comp);
            out.push(comp);
        }
        out
    }

    /// Vertices within graph distance `radius` of `v`.
    pub fn ball(&self, v: usize, radius: usize) -> VertexSubset {
        let mut ball = VertexSubset::singleton(v);
        for _ in 0..radius {
            ball = self.closed_neighborhood(ball);
        }
        ball
    }

    pub(crate) fn check_cap(&self, cap: usize, what: &'static str) -> Result<()> {
        if self.n() > cap {
            Err(Error::CapExceeded {
                what,
                size: self.n(),
                cap,
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            Err(Error::IndexOutOfRange { vertex: v, n: self.n() })
        } else {
            Ok(())
        }
    }

    pub fn to_edge_list(&self) -> EdgeList {
        EdgeList {
            n: self.n(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
        }
    }

    /// Parses either the JSON form `{"n": .., "edges": [[u, v], ..]}` or the
    /// text form with a first line `n <count>` followed by `u v` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            let list: EdgeList =
                serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
            return list.into_graph();
        }
        let mut lines = trimmed
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["n", count] => count
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad vertex count '{count}'")))?,
            _ => return Err(Error::Parse(format!("expected 'n <count>', got '{header}'"))),
        };
        let mut edges = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [u, v] = parts.as_slice() else {
                return Err(Error::Parse(format!("bad edge line '{line}'")));
            };
            let u = u.parse().map_err(|_| Error::Parse(format!("bad vertex '{u}'")))?;
            let v = v.parse().map_err(|_| Error::Parse(format!("bad vertex '{v}'")))?;
            edges.push((u, v));
        }
        Graph::new(n, &edges)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Serialized graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl EdgeList {
    pub fn into_graph(self) -> Result<Graph> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::new(self.n, &edges)
    }
}

/// Named graph families. Grid vertices are indexed row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Empty(usize),
    Path(usize),
    Cycle(usize),
    Complete(usize),
    /// `n` vertices in total, centre 0.
    Star(usize),
    /// Vertices `0..n`, edge iff `|i - j| <= k`.
    KFuzz { k: usize, n: usize },
    /// N×N box of Z².
    GridBox(usize),
    Grid { rows: usize, cols: usize },
    /// Ball of radius `r` around the root of the `d`-regular tree.
    TreeBall { d: usize, r: usize },
}

impl Family {
    pub fn build(self) -> Result<Graph> {
        let positive = |x: usize, name: &str| {
            if x == 0 {
                Err(Error::InvalidParameter(format!("{name} must be positive")))
            } else {
                Ok(())
            }
        };
        match self {
            Family::Empty(n) => Graph::new(n, &[]),
            Family::Path(n) => {
                positive(n, "n")?;
                let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
                Graph::new(n, &edges)
            }
            Family::Cycle(n) => {
                if n < 3 {
                    return Err(Error::InvalidParameter("cycle needs n >= 3".into()));
                }
                let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
                edges.push((n - 1, 0));
                Graph::new(n, &edges)
            }
            Family::Complete(n) => {
                positive(n, "n")?;
                let edges: Vec<_> = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .collect();
                Graph::new(n, &edges)
            }
            Family::Star(n) => {
                positive(n, "n")?;
                let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
                Graph::new(n, &edges)
            }
            Family::KFuzz { k, n } => {
                positive(k, "k")?;
                positive(n, "n")?;
                let edges: Vec<_> = (0..n)
                    .flat_map(|u| (u + 1..n.min(u + k + 1)).map(move |v| (u, v)))
                    .collect();
                Graph::new(n, &edges)
            }
            Family::GridBox(side) => Family::Grid { rows: side, cols: side }.build(),
            Family::Grid { rows, cols } => {
                positive(rows, "rows")?;
                positive(cols, "cols")?;
                let n = rows.saturating_mul(cols);
                if n > MAX_VERTICES {
                    return Err(Error::CapExceeded {
                        what: "grid vertex count",
                        size: n,
                        cap: MAX_VERTICES,
                    });
                }
                let idx = |r: usize, c: usize| r * cols + c;
                let mut edges = Vec::new();
                for r in 0..rows {
                    for c in 0..cols {
                        if c + 1 < cols {
                            edges.push((idx(r, c), idx(r, c + 1)));
                        }
                        if r + 1 < rows {
                            edges.push((idx(r, c), idx(r + 1, c)));
                        }
                    }
                }
                Graph::new(n, &edges)
            }
            Family::TreeBall { d, r } => {
                if d < 2 {
                    return Err(Error::InvalidParameter("tree degree must be >= 2".into()));
                }
                let mut edges = Vec::new();
                let mut layer = vec![0usize];
                let mut next_id = 1usize;
                for depth in 0..r {
                    let mut next_layer = Vec::new();
                    for &parent in &layer {
                        let children = if depth == 0 { d } else { d - 1 };
                        for _ in 0..children {
                            if next_id >= MAX_VERTICES {
                                return Err(Error::CapExceeded {
                                    what: "tree ball vertex count",
                                    size: next_id + 1,
                                    cap: MAX_VERTICES,
                                });
                            }
                            edges.push((parent, next_id));
                            next_layer.push(next_id);
                            next_id += 1;
                        }
                    }
                    layer = next_layer;
                }
                Graph::new(next_id, &edges)
            }
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Parses `name:key=value,...`, e.g. `kfuzz:k=2,n=9` or `grid:N=4`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = std::collections::HashMap::new();
        for part in args.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in '{part}'")))?;
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer in '{part}'")))?;
            kv.insert(k.trim().to_string(), v);
        }
        let get = |key: &str| {
            kv.get(key)
                .copied()
                .ok_or_else(|| Error::Parse(format!("family '{name}' needs '{key}'")))
        };
        Ok(match name.trim().to_ascii_lowercase().as_str() {
            "empty" | "edgeless" => Family::Empty(get("n")?),
            "path" => Family::Path(get("n")?),
            "cycle" => Family::Cycle(get("n")?),
            "complete" => Family::Complete(get("n")?),
            "star" => Family::Star(get("n")?),
            "kfuzz" => Family::KFuzz { k: get("k")?, n: get("n")? },
            "grid" => match (kv.get("N"), kv.get("rows"), kv.get("cols")) {
                (Some(&side), _, _) => Family::GridBox(side),
                (None, Some(&rows), Some(&cols)) => Family::Grid { rows, cols },
                _ => return Err(Error::Parse("grid needs N or rows,cols".into())),
            },
            "tree" => Family::TreeBall { d: get("D")?, r: get("r")? },
            other => return Err(Error::Parse(format!("unknown family '{other}'"))),
        })
    }
}

/// Lists every independent set of `g`, including the empty set.
pub fn enumerate_independent_sets(g: &Graph) -> Result<Vec<VertexSubset>> {
    g.check_cap(ENUMERATION_CAP, "independent set enumeration")?;
    let mut out = Vec::new();
    fn go(g: &Graph, candidates: VertexSubset, chosen: VertexSubset, out: &mut Vec<VertexSubset>) {
        match candidates.first() {
            None => out.push(chosen),
            Some(v) => {
                go(g, candidates.without(v), chosen, out);
                go(g, candidates.difference(g.closed_neighbor_set(v)), chosen.with(v), out);
            }
        }
    }
    go(g, g.vertices(), VertexSubset::EMPTY, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vs: &[usize]) -> VertexSubset {
        vs.iter().copied().collect()
    }

    #[test]
    fn builds_small_graphs() {
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(k2.neighbors(0), &[1]);
        assert_eq!(k2.neighbors(1), &[0]);

        let e3 = Graph::new(3, &[]).unwrap();
        assert_eq!(e3.edge_count(), 0);

        let p3 = Graph::new(3, &[(0, 1), (1, 2), (1, 0)]).unwrap();
        assert_eq!(p3.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(
            Graph::new(2, &[(0, 2)]).unwrap_err(),
            Error::IndexOutOfRange { vertex: 2, n: 2 }
        );
        assert_eq!(Graph::new(2, &[(1, 1)]).unwrap_err(), Error::LoopEdge(1));
    }

    #[test]
    fn induced_subgraphs() {
        let p3 = Family::Path(3).build().unwrap();
        let (h, remap) = p3.induced_subgraph(set(&[0, 2]));
        assert_eq!(h.edge_count(), 0);
        assert_eq!(remap, vec![0, 2]);

        let c4 = Family::Cycle(4).build().unwrap();
        let (h, _) = c4.induced_subgraph(set(&[0, 1, 2]));
        assert_eq!(h, Family::Path(3).build().unwrap());

        let (h, remap) = c4.induced_subgraph(c4.vertices());
        assert_eq!(h, c4);
        assert_eq!(remap, vec![0, 1, 2, 3]);

        let (h, _) = c4.induced_subgraph(VertexSubset::EMPTY);
        assert_eq!(h.n(), 0);
    }

    #[test]
    fn families() {
        assert_eq!(
            Family::KFuzz { k: 1, n: 3 }.build().unwrap(),
            Family::Path(3).build().unwrap()
        );
        let kf = Family::KFuzz { k: 2, n: 4 }.build().unwrap();
        assert_eq!(
            kf.edges().collect::<Vec<_>>(),
            vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]
        );
        let g2 = Family::GridBox(2).build().unwrap();
        assert_eq!(g2.edge_count(), 4);
        assert!((0..4).all(|v| g2.degree(v) == 2));
        assert!(g2.has_edge(0, 1) && g2.has_edge(0, 2) && !g2.has_edge(0, 3));

        let t = Family::TreeBall { d: 3, r: 2 }.build().unwrap();
        assert_eq!(t.n(), 1 + 3 + 6);
        assert_eq!(t.degree(0), 3);
        assert_eq!(t.max_degree(), 3);

        let star = Family::Star(4).build().unwrap();
        assert_eq!(star.degree(0), 3);
    }

    #[test]
    fn family_specs_parse() {
        assert_eq!("kfuzz:k=2,n=9".parse::<Family>().unwrap(), Family::KFuzz { k: 2, n: 9 });
        assert_eq!("grid:N=4".parse::<Family>().unwrap(), Family::GridBox(4));
        assert_eq!(
            "grid:rows=2,cols=3".parse::<Family>().unwrap(),
            Family::Grid { rows: 2, cols: 3 }
        );
        assert_eq!("path:n=3".parse::<Family>().unwrap(), Family::Path(3));
        assert!("blob:n=3".parse::<Family>().is_err());
        assert!("path:m=3".parse::<Family>().is_err());
    }

    #[test]
    fn parses_graph_files() {
        let g = Graph::parse(r#"{"n": 3, "edges": [[0,1],[1,2]]}"#).unwrap();
        assert_eq!(g, Family::Path(3).build().unwrap());
        let g = Graph::parse("n 4\n0 1\n1 2\n2 3\n3 0\n").unwrap();
        assert_eq!(g, Family::Cycle(4).build().unwrap());
        assert!(Graph::parse("4\n0 1").is_err());
    }

    #[test]
    fn independent_sets() {
        let k2 = Family::Complete(2).build().unwrap();
        assert_eq!(enumerate_independent_sets(&k2).unwrap().len(), 3);
        let p3 = Family::Path(3).build().unwrap();
        let mut sets = enumerate_independent_sets(&p3).unwrap();
        sets.sort();
        assert_eq!(
            sets,
            vec![set(&[]), set(&[0]), set(&[1]), set(&[0, 2]), set(&[2])]
                .into_iter()
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect::<Vec<_>>()
        );
        assert_eq!(enumerate_independent_sets(&Graph::edgeless(3)).unwrap().len(), 8);
        assert!(enumerate_independent_sets(&Family::Path(25).build().unwrap()).is_err());
    }

    #[test]
    fn components_and_balls() {
        let g = Graph::new(5, &[(0, 1), (3, 4)]).unwrap();
        let comps = g.components(g.vertices());
        assert_eq!(comps, vec![set(&[0, 1]), set(&[2]), set(&[3, 4])]);
        let p5 = Family::Path(5).build().unwrap();
        assert_eq!(p5.ball(2, 1), set(&[1, 2, 3]));
        assert_eq!(p5.ball(0, 2), set(&[0, 1, 2]));
    }
}
