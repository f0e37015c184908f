//! Dinic max-flow over a [`Scalar`] capacity type.

use std::collections::VecDeque;

use crate::scalar::{Backend, Scalar};

#[derive(Debug, Clone)]
struct Edge<S> {
    to: usize,
    cap: S,
    original: S,
}

pub(crate) struct FlowNetwork<S> {
    edges: Vec<Edge<S>>,
    adj: Vec<Vec<usize>>,
    eps: S,
}

impl<S: Scalar> FlowNetwork<S> {
    pub fn new(nodes: usize) -> Self {
        let eps = match S::BACKEND {
            Backend::Float => S::from_f64(1e-15),
            Backend::Rational => S::zero(),
        };
        FlowNetwork { edges: Vec::new(), adj: vec![Vec::new(); nodes], eps }
    }

    /// Adds `from → to` and returns its edge id.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: S) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap: cap.clone(), original: cap });
        self.edges.push(Edge { to: from, cap: S::zero(), original: S::zero() });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    fn residual(&self, id: usize) -> bool {
        self.edges[id].cap > self.eps
    }

    /// Flow currently routed through edge `id`.
    pub fn flow_on(&self, id: usize) -> S {
        self.edges[id].original.clone() - self.edges[id].cap.clone()
    }

    fn levels(&self, source: usize) -> Vec<Option<usize>> {
        let mut level = vec![None; self.adj.len()];
        level[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &id in &self.adj[u] {
                let to = self.edges[id].to;
                if level[to].is_none() && self.residual(id) {
                    level[to] = Some(level[u].expect("visited") + 1);
                    queue.push_back(to);
                }
            }
        }
        level
    }

    pub fn max_flow(&mut self, source: usize, sink: usize) -> S {
        let mut total = S::zero();
        loop {
            let level = self.levels(source);
            if level[sink].is_none() {
                return total;
            }
            let mut next = vec![0usize; self.adj.len()];
            loop {
                let pushed = self.augment(source, sink, &level, &mut next);
                match pushed {
                    Some(f) => total = total + f,
                    None => break,
                }
            }
        }
    }

    /// One augmenting path in the level graph, found iteratively.
    fn augment(&mut self, source: usize, sink: usize, level: &[Option<usize>], next: &mut [usize]) -> Option<S> {
        let mut path: Vec<usize> = Vec::new();
        let mut u = source;
        loop {
            if u == sink {
                let bottleneck = path
                    .iter()
                    .map(|&id| self.edges[id].cap.clone())
                    .reduce(|a, b| if b < a { b } else { a })
                    .expect("non-empty path");
                for &id in &path {
                    self.edges[id].cap = self.edges[id].cap.clone() - bottleneck.clone();
                    self.edges[id ^ 1].cap = self.edges[id ^ 1].cap.clone() + bottleneck.clone();
                }
                return Some(bottleneck);
            }
            let mut advanced = false;
            while next[u] < self.adj[u].len() {
                let id = self.adj[u][next[u]];
                let to = self.edges[id].to;
                if self.residual(id) && level[to] == level[u].map(|l| l + 1) {
                    path.push(id);
                    u = to;
                    advanced = true;
                    break;
                }
                next[u] += 1;
            }
            if !advanced {
                // dead end: retreat and skip the edge that led here
                let id = path.pop()?;
                u = self.edges[id ^ 1].to;
                next[u] += 1;
            }
        }
    }

    /// Nodes reachable from `source` in the residual graph.
    pub fn reachable(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[source] = true;
        let mut stack = vec![source];
        while let Some(u) = stack.pop() {
            for &id in &self.adj[u] {
                let to = self.edges[id].to;
                if !seen[to] && self.residual(id) {
                    seen[to] = true;
                    stack.push(to);
                }
            }
        }
        seen
    }
}
