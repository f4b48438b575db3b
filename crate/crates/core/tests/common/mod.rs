//! Brute-force reference implementations. Deliberately naive: each one
//! follows the definition directly and shares no code with the library.

#![allow(dead_code)]

use std::collections::BTreeSet;

use arc_cover::num::Rational;
use arc_cover::{Digraph, Pattern};
use itertools::Itertools;
use num_traits::Zero;

/// Copies as (sorted arc ids, sorted vertices), from every injective vertex
/// tuple and every choice among parallel arcs.
pub fn copies(d: &Digraph, h: &Pattern) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    let mut out = BTreeSet::new();
    for tuple in (0..d.vertex_count()).permutations(h.vertex_count()) {
        let options: Vec<Vec<usize>> = h
            .arcs()
            .iter()
            .map(|&(a, b)| d.arcs().iter().filter(|e| e.tail == tuple[a] && e.head == tuple[b]).map(|e| e.id).collect())
            .collect();
        if options.iter().any(|o| o.is_empty()) {
            continue;
        }
        for choice in options.iter().map(|o| o.iter().copied()).multi_cartesian_product() {
            let mut arcs = choice;
            arcs.sort_unstable();
            let mut vertices = tuple.clone();
            vertices.sort_unstable();
            out.insert((arcs, vertices));
        }
    }
    if h.arc_count() == 0 {
        for tuple in (0..d.vertex_count()).combinations(h.vertex_count()) {
            out.insert((Vec::new(), tuple));
        }
    }
    out
}

/// Minimum weight of an arc set meeting every copy, over all subsets of the
/// arcs that lie in some copy.
pub fn tau(d: &Digraph, copies: &[Vec<usize>]) -> Rational {
    let relevant: Vec<usize> = copies.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
    assert!(relevant.len() <= 22, "brute-force tau over {} arcs", relevant.len());
    let mut best: Option<Rational> = None;
    for mask in 0u64..(1 << relevant.len()) {
        let chosen: BTreeSet<usize> = (0..relevant.len()).filter(|i| mask >> i & 1 == 1).map(|i| relevant[i]).collect();
        if copies.iter().all(|c| c.iter().any(|a| chosen.contains(a))) {
            let w: Rational = chosen.iter().map(|&a| d.weight(a).clone()).fold(Rational::zero(), |s, x| s + x);
            if best.as_ref().is_none_or(|b| w < *b) {
                best = Some(w);
            }
        }
    }
    best.unwrap_or_else(Rational::zero)
}

/// Largest family of pairwise arc-disjoint copies.
pub fn nu(copies: &[Vec<usize>]) -> usize {
    assert!(copies.len() <= 22, "brute-force nu over {} copies", copies.len());
    let mut best = 0;
    for mask in 0u64..(1 << copies.len()) {
        let picked: Vec<&Vec<usize>> = (0..copies.len()).filter(|i| mask >> i & 1 == 1).map(|i| &copies[i]).collect();
        let mut seen = BTreeSet::new();
        if picked.iter().all(|c| c.iter().all(|a| seen.insert(*a))) {
            best = best.max(picked.len());
        }
    }
    best
}

/// Minimum violated arcs over all |V(L)|^|V(H)| vertex maps.
pub fn disc(h: &Pattern, l: &Pattern) -> usize {
    let n = h.vertex_count();
    let r = l.vertex_count();
    (0..n)
        .map(|_| 0..r)
        .multi_cartesian_product()
        .map(|phi| h.arcs().iter().filter(|&&(u, v)| phi[u] == phi[v] || !l.has_arc(phi[u], phi[v])).count())
        .min()
        .unwrap_or(0)
}

/// Most arcs going forward in some vertex ordering.
pub fn gamma(h: &Pattern) -> usize {
    let n = h.vertex_count();
    (0..n)
        .permutations(n)
        .map(|order| {
            let mut pos = vec![0; n];
            for (i, &v) in order.iter().enumerate() {
                pos[v] = i;
            }
            h.arcs().iter().filter(|&&(u, v)| pos[u] < pos[v]).count()
        })
        .max()
        .unwrap_or(0)
}

/// Most arcs crossing some bipartition.
pub fn bipartite(h: &Pattern) -> usize {
    let n = h.vertex_count();
    (0u32..(1 << n)).map(|s| h.arcs().iter().filter(|&&(u, v)| (s >> u & 1) != (s >> v & 1)).count()).max().unwrap_or(0)
}

/// Weight of arcs whose part pair is not an arc of L, with cover > 0, over
/// every assignment; returns the minimum.
pub fn best_partition_weight(d: &Digraph, positive: &[bool], l: &Pattern) -> Rational {
    let r = l.vertex_count();
    (0..d.vertex_count())
        .map(|_| 0..r)
        .multi_cartesian_product()
        .map(|parts| {
            d.arcs()
                .iter()
                .filter(|a| positive[a.id] && (parts[a.tail] == parts[a.head] || !l.has_arc(parts[a.tail], parts[a.head])))
                .fold(Rational::zero(), |s, a| s + a.weight.clone())
        })
        .min()
        .unwrap_or_else(Rational::zero)
}
