use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Digraph, Pattern, UndirectedGraph};
use crate::error::{Error, Result};

/// Directed cycle with arcs `i -> i+1 mod k`.
pub fn directed_cycle(k: usize) -> Result<Pattern> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("directed cycle needs k >= 2, got {k}")));
    }
    let arcs: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
    Pattern::new(k, &arcs)
}

/// The 2-cycle pattern, arcs (0,1) and (1,0).
pub fn two_cycle() -> Pattern {
    directed_cycle(2).expect("k = 2 is valid")
}

/// Acyclic tournament with arcs `i -> j` for every `i < j`.
pub fn transitive_tournament(r: usize) -> Result<Pattern> {
    if r < 1 {
        return Err(Error::InvalidArgument("transitive tournament needs r >= 1".into()));
    }
    let arcs: Vec<_> = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect();
    Pattern::new(r, &arcs)
}

/// Circulant tournament with arcs `i -> i+d mod n`, `1 <= d <= (n-1)/2`.
pub fn rotational_tournament(n: usize) -> Result<Digraph> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("rotational tournament needs odd n, got {n}")));
    }
    let half = (n - 1) / 2;
    let arcs: Vec<_> = (0..n).flat_map(|i| (1..=half).map(move |d| (i, (i + d) % n))).collect();
    Digraph::unweighted(n, &arcs)
}

/// Each ordered pair `(i, j)`, `i != j`, is an arc independently with
/// probability `p`, visited in row-major order.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> Result<Digraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(p) {
                arcs.push((i, j));
            }
        }
    }
    Digraph::unweighted(n, &arcs)
}

/// Each unordered pair is oriented by a fair coin.
pub fn random_tournament(n: usize, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            arcs.push(if rng.gen_bool(0.5) { (i, j) } else { (j, i) });
        }
    }
    Digraph::unweighted(n, &arcs).expect("tournament arcs are valid")
}

/// Orients every edge from its lower to its higher endpoint. Arc ids equal
/// edge ids.
pub fn acyclic_orientation(g: &UndirectedGraph) -> Digraph {
    Digraph::new(
        g.vertex_count(),
        g.edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v), e.weight.clone())),
    )
    .expect("orientation of a valid graph is valid")
}

/// Orients every edge of `g` by an independent fair coin, as a pattern.
pub fn random_orientation(g: &UndirectedGraph, seed: u64) -> Result<Pattern> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arcs: Vec<_> = g
        .edges()
        .iter()
        .map(|e| if rng.gen_bool(0.5) { (e.u, e.v) } else { (e.v, e.u) })
        .collect();
    Pattern::new(g.vertex_count().max(1), &arcs)
}
