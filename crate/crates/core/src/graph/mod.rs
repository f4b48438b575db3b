//! Host digraphs, pattern graphs and undirected graphs.

mod generate;
mod io;

pub use generate::{
    acyclic_orientation, directed_cycle, random_digraph, random_orientation, random_tournament,
    rotational_tournament, transitive_tournament, two_cycle,
};
pub use io::{parse_digraph, parse_pattern, parse_undirected, serialize_digraph, serialize_pattern};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::num::Rational;

pub type ArcId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub id: ArcId,
    pub tail: usize,
    pub head: usize,
    pub weight: Rational,
}

/// Weighted directed multigraph. Arc ids are dense and follow input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    vertex_count: usize,
    arcs: Vec<Arc>,
}

impl Digraph {
    pub fn new<I>(vertex_count: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut out = Vec::new();
        for (id, (tail, head, weight)) in arcs.into_iter().enumerate() {
            check_vertex(tail, vertex_count)?;
            check_vertex(head, vertex_count)?;
            if tail == head {
                return Err(Error::LoopArc(tail));
            }
            if weight.is_negative() {
                return Err(Error::NegativeWeight { tail, head, weight: weight.to_string() });
            }
            out.push(Arc { id, tail, head, weight });
        }
        Ok(Digraph { vertex_count, arcs: out })
    }

    /// Builds a digraph with every weight equal to one.
    pub fn unweighted(vertex_count: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        Digraph::new(vertex_count, arcs.iter().map(|&(u, v)| (u, v, Rational::one())))
    }

    pub fn empty(vertex_count: usize) -> Self {
        Digraph { vertex_count, arcs: Vec::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> Result<&Arc> {
        self.arcs.get(id).ok_or(Error::UnknownArc(id))
    }

    pub fn weight(&self, id: ArcId) -> &Rational {
        &self.arcs[id].weight
    }

    pub fn is_unweighted(&self) -> bool {
        self.arcs.iter().all(|a| a.weight.is_one())
    }

    pub fn total_weight<'a, I: IntoIterator<Item = &'a ArcId>>(&self, ids: I) -> Rational {
        ids.into_iter().fold(Rational::zero(), |acc, &id| acc + &self.arcs[id].weight)
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for a in &self.arcs {
            deg[a.tail] += 1;
        }
        deg
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for a in &self.arcs {
            deg[a.head] += 1;
        }
        deg
    }

    /// Same arcs with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        Digraph::new(self.vertex_count, self.arcs.iter().map(|a| (a.tail, a.head, &a.weight * factor)))
    }

    /// Relabels vertex `v` as `perm[v]`. Arc ids are preserved.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.vertex_count {
            return Err(Error::InvalidArgument("permutation length mismatch".into()));
        }
        Digraph::new(self.vertex_count, self.arcs.iter().map(|a| (perm[a.tail], perm[a.head], a.weight.clone())))
    }

    /// Spanning subgraph without the given arcs, plus the map from new arc
    /// ids back to ids in `self`.
    pub fn without_arcs(&self, removed: &[ArcId]) -> Result<(Digraph, Vec<ArcId>)> {
        let mut gone = vec![false; self.arcs.len()];
        for &id in removed {
            *gone.get_mut(id).ok_or(Error::UnknownArc(id))? = true;
        }
        let kept: Vec<ArcId> = (0..self.arcs.len()).filter(|&id| !gone[id]).collect();
        let graph = Digraph::new(
            self.vertex_count,
            kept.iter().map(|&id| {
                let a = &self.arcs[id];
                (a.tail, a.head, a.weight.clone())
            }),
        )?;
        Ok((graph, kept))
    }

    /// Number of distinct ordered pairs joined by at least one arc.
    pub fn distinct_pair_count(&self) -> usize {
        let mut pairs: Vec<(usize, usize)> = self.arcs.iter().map(|a| (a.tail, a.head)).collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs.len()
    }

    /// Kahn's algorithm; `None` when a directed cycle exists.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg = self.in_degrees();
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count];
        for a in &self.arcs {
            out[a.tail].push(a.head);
        }
        let mut ready: Vec<usize> = (0..self.vertex_count).rev().filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.vertex_count);
        while let Some(v) = ready.pop() {
            order.push(v);
            for &w in &out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.push(w);
                }
            }
        }
        (order.len() == self.vertex_count).then_some(order)
    }
}

/// Small simple digraph used as H or L. 2-cycles allowed, loops and
/// duplicate pairs are not.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    vertex_count: usize,
    arcs: Vec<(usize, usize)>,
}

impl Pattern {
    /// Arcs are kept sorted; duplicates and loops are errors.
    pub fn new(vertex_count: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidArgument("pattern needs at least one vertex".into()));
        }
        let mut sorted = Vec::with_capacity(arcs.len());
        for &(u, v) in arcs {
            check_vertex(u, vertex_count)?;
            check_vertex(v, vertex_count)?;
            if u == v {
                return Err(Error::LoopArc(u));
            }
            sorted.push((u, v));
        }
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePatternArc(w[0].0, w[0].1));
        }
        Ok(Pattern { vertex_count, arcs: sorted })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.binary_search(&(u, v)).is_ok()
    }

    /// Row-major adjacency matrix.
    pub fn adjacency(&self) -> Vec<bool> {
        let n = self.vertex_count;
        let mut adj = vec![false; n * n];
        for &(u, v) in &self.arcs {
            adj[u * n + v] = true;
        }
        adj
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.arcs.iter().filter(|a| a.0 == v).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.arcs.iter().filter(|a| a.1 == v).count()
    }

    pub fn has_two_cycle(&self) -> bool {
        self.arcs.iter().any(|&(u, v)| self.has_arc(v, u))
    }

    pub fn to_digraph(&self) -> Digraph {
        Digraph::unweighted(self.vertex_count, &self.arcs).expect("pattern arcs are valid")
    }

    /// Image under the vertex permutation `v -> perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Pattern {
        let arcs: Vec<_> = self.arcs.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Pattern::new(self.vertex_count, &arcs).expect("permutation keeps arcs valid")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: usize,
    pub u: usize,
    pub v: usize,
    pub weight: Rational,
}

/// Loopless undirected graph, optionally with parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    multigraph: bool,
}

impl UndirectedGraph {
    pub fn new<I>(vertex_count: usize, edges: I, multigraph: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut out = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (id, (u, v, weight)) in edges.into_iter().enumerate() {
            check_vertex(u, vertex_count)?;
            check_vertex(v, vertex_count)?;
            if u == v {
                return Err(Error::LoopArc(u));
            }
            if weight.is_negative() {
                return Err(Error::NegativeWeight { tail: u, head: v, weight: weight.to_string() });
            }
            if !multigraph && !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidArgument(format!("parallel edge {u}-{v} in a simple graph")));
            }
            out.push(Edge { id, u, v, weight });
        }
        Ok(UndirectedGraph { vertex_count, edges: out, multigraph })
    }

    pub fn unweighted(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        UndirectedGraph::new(vertex_count, edges.iter().map(|&(u, v)| (u, v, Rational::one())), false)
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        UndirectedGraph::unweighted(n, &edges).expect("complete graph is valid")
    }

    /// Perfect matching on `2 * pairs` vertices.
    pub fn perfect_matching(pairs: usize) -> Self {
        let edges: Vec<_> = (0..pairs).map(|i| (2 * i, 2 * i + 1)).collect();
        UndirectedGraph::unweighted(2 * pairs, &edges).expect("matching is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_multigraph(&self) -> bool {
        self.multigraph
    }
}

fn check_vertex(vertex: usize, vertex_count: usize) -> Result<()> {
    if vertex >= vertex_count {
        Err(Error::VertexOutOfRange { vertex, vertex_count })
    } else {
        Ok(())
    }
}
