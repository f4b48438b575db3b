//! Enumeration of the H-copies of a host digraph.
//!
//! A copy is a subgraph of the host, identified by its vertex set and its
//! arc-id set; embeddings that differ by an automorphism of H collapse to
//! one copy. With parallel arcs, every distinct arc selection is its own copy.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::graph::{ArcId, Digraph, Pattern};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HCopy {
    /// Sorted arc ids of the host.
    pub arc_ids: Vec<ArcId>,
    /// Sorted host vertices.
    pub vertices: Vec<usize>,
    /// `witness[a]` is the host vertex playing pattern vertex `a`.
    pub witness: Vec<usize>,
}

impl HCopy {
    pub fn contains_arc(&self, arc: ArcId) -> bool {
        self.arc_ids.binary_search(&arc).is_ok()
    }

    pub fn is_disjoint_from(&self, other: &HCopy) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.arc_ids.len() && j < other.arc_ids.len() {
            match self.arc_ids[i].cmp(&other.arc_ids[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// Re-derives the arc set from the witness and checks it matches.
    pub fn is_consistent(&self, d: &Digraph, h: &Pattern) -> bool {
        if self.arc_ids.len() != h.arc_count() || self.witness.len() != h.vertex_count() {
            return false;
        }
        let mut seen = self.witness.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) || seen != self.vertices {
            return false;
        }
        let mut matched = vec![false; self.arc_ids.len()];
        for &(a, b) in h.arcs() {
            let want = (self.witness[a], self.witness[b]);
            let hit = self.arc_ids.iter().enumerate().find(|(i, &id)| {
                !matched[*i] && d.arcs().get(id).is_some_and(|arc| (arc.tail, arc.head) == want)
            });
            match hit {
                Some((i, _)) => matched[i] = true,
                None => return false,
            }
        }
        true
    }
}

/// Host adjacency restricted to arcs that are still present.
struct HostIndex {
    vertex_count: usize,
    pairs: HashMap<(usize, usize), Vec<ArcId>>,
    out_nbrs: Vec<Vec<usize>>,
    in_nbrs: Vec<Vec<usize>>,
}

impl HostIndex {
    fn new(d: &Digraph, removed: Option<&[bool]>) -> Self {
        let n = d.vertex_count();
        let mut pairs: HashMap<(usize, usize), Vec<ArcId>> = HashMap::new();
        for a in d.arcs() {
            if removed.is_some_and(|r| r[a.id]) {
                continue;
            }
            pairs.entry((a.tail, a.head)).or_default().push(a.id);
        }
        let mut out_nbrs = vec![Vec::new(); n];
        let mut in_nbrs = vec![Vec::new(); n];
        for &(u, v) in pairs.keys() {
            out_nbrs[u].push(v);
            in_nbrs[v].push(u);
        }
        out_nbrs.iter_mut().chain(in_nbrs.iter_mut()).for_each(|l| l.sort_unstable());
        HostIndex { vertex_count: n, pairs, out_nbrs, in_nbrs }
    }

    fn arcs_between(&self, u: usize, v: usize) -> Option<&[ArcId]> {
        self.pairs.get(&(u, v)).map(Vec::as_slice)
    }
}

/// Pattern vertices in search order, each with the constraints linking it
/// to earlier vertices.
struct SearchPlan {
    order: Vec<usize>,
    /// For position i: (earlier position, pattern arc goes earlier -> this).
    back_links: Vec<Vec<(usize, bool)>>,
}

impl SearchPlan {
    fn new(h: &Pattern) -> Self {
        let k = h.vertex_count();
        let degree: Vec<usize> = (0..k).map(|v| h.out_degree(v) + h.in_degree(v)).collect();
        let mut placed = vec![false; k];
        let mut order = Vec::with_capacity(k);
        for _ in 0..k {
            let next = (0..k)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let links = h.arcs().iter().filter(|&&(a, b)| (a == v && placed[b]) || (b == v && placed[a])).count();
                    (links, degree[v], std::cmp::Reverse(v))
                })
                .expect("unplaced vertex remains");
            placed[next] = true;
            order.push(next);
        }
        let position: Vec<usize> = {
            let mut p = vec![0; k];
            for (i, &v) in order.iter().enumerate() {
                p[v] = i;
            }
            p
        };
        let mut back_links = vec![Vec::new(); k];
        for &(a, b) in h.arcs() {
            let (pa, pb) = (position[a], position[b]);
            if pa < pb {
                back_links[pb].push((pa, true));
            } else {
                back_links[pa].push((pb, false));
            }
        }
        SearchPlan { order, back_links }
    }
}

type CopyKey = (Vec<ArcId>, Vec<usize>);

struct Search<'a> {
    host: &'a HostIndex,
    h: &'a Pattern,
    plan: &'a SearchPlan,
    images: Vec<usize>,
    used: Vec<bool>,
    found: BTreeMap<CopyKey, Vec<usize>>,
    cap: usize,
    stop_at_first: bool,
    overflow: bool,
}

impl<'a> Search<'a> {
    fn new(host: &'a HostIndex, h: &'a Pattern, plan: &'a SearchPlan, cap: usize, stop_at_first: bool) -> Self {
        Search {
            host,
            h,
            plan,
            images: Vec::with_capacity(h.vertex_count()),
            used: vec![false; host.vertex_count],
            found: BTreeMap::new(),
            cap,
            stop_at_first,
            overflow: false,
        }
    }

    fn done(&self) -> bool {
        self.overflow || (self.stop_at_first && !self.found.is_empty())
    }

    fn extend(&mut self) {
        if self.done() {
            return;
        }
        let pos = self.images.len();
        if pos == self.plan.order.len() {
            self.record();
            return;
        }
        let links = &self.plan.back_links[pos];
        let candidates: Vec<usize> = match links.first() {
            Some(&(earlier, forward)) => {
                let anchor = self.images[earlier];
                if forward {
                    self.host.out_nbrs[anchor].clone()
                } else {
                    self.host.in_nbrs[anchor].clone()
                }
            }
            None => (0..self.host.vertex_count).collect(),
        };
        for x in candidates {
            if self.used[x] || !self.fits(pos, x) {
                continue;
            }
            self.place(x);
            self.extend();
            self.unplace(x);
            if self.done() {
                return;
            }
        }
    }

    fn fits(&self, pos: usize, x: usize) -> bool {
        self.plan.back_links[pos].iter().all(|&(earlier, forward)| {
            let y = self.images[earlier];
            if forward {
                self.host.arcs_between(y, x).is_some()
            } else {
                self.host.arcs_between(x, y).is_some()
            }
        })
    }

    fn place(&mut self, x: usize) {
        self.used[x] = true;
        self.images.push(x);
    }

    fn unplace(&mut self, x: usize) {
        self.used[x] = false;
        self.images.pop();
    }

    fn record(&mut self) {
        let mut witness = vec![0; self.h.vertex_count()];
        for (pos, &v) in self.plan.order.iter().enumerate() {
            witness[v] = self.images[pos];
        }
        let choices: Vec<&[ArcId]> = self
            .h
            .arcs()
            .iter()
            .map(|&(a, b)| self.host.arcs_between(witness[a], witness[b]).expect("checked by fits"))
            .collect();
        let mut vertices = witness.clone();
        vertices.sort_unstable();
        let mut pick = vec![0usize; choices.len()];
        loop {
            let mut arc_ids: Vec<ArcId> = choices.iter().zip(&pick).map(|(c, &i)| c[i]).collect();
            arc_ids.sort_unstable();
            let key = (arc_ids, vertices.clone());
            match self.found.get_mut(&key) {
                Some(w) if witness < *w => *w = witness.clone(),
                Some(_) => {}
                None => {
                    self.found.insert(key, witness.clone());
                    if self.found.len() > self.cap {
                        self.overflow = true;
                        return;
                    }
                    if self.stop_at_first {
                        return;
                    }
                }
            }
            // odometer over parallel-arc choices
            let mut slot = 0;
            loop {
                if slot == pick.len() {
                    return;
                }
                pick[slot] += 1;
                if pick[slot] < choices[slot].len() {
                    break;
                }
                pick[slot] = 0;
                slot += 1;
            }
        }
    }
}

fn run_search(d: &Digraph, h: &Pattern, removed: Option<&[bool]>, caps: &Caps, stop_at_first: bool) -> Result<Vec<HCopy>> {
    if h.vertex_count() > caps.pattern_vertices {
        return Err(Error::CapExceeded { what: "pattern vertex count", limit: caps.pattern_vertices as u64 });
    }
    if h.vertex_count() > d.vertex_count() {
        return Ok(Vec::new());
    }
    let host = HostIndex::new(d, removed);
    let plan = SearchPlan::new(h);
    let roots: Vec<usize> = (0..d.vertex_count()).collect();
    let partial: Vec<(BTreeMap<CopyKey, Vec<usize>>, bool)> = if stop_at_first {
        let mut search = Search::new(&host, h, &plan, caps.copies, true);
        for &root in &roots {
            search.place(root);
            search.extend();
            search.unplace(root);
            if search.done() {
                break;
            }
        }
        vec![(search.found, search.overflow)]
    } else {
        roots
            .par_iter()
            .map(|&root| {
                let mut search = Search::new(&host, h, &plan, caps.copies, false);
                search.place(root);
                search.extend();
                (search.found, search.overflow)
            })
            .collect()
    };

    let mut merged: BTreeMap<CopyKey, Vec<usize>> = BTreeMap::new();
    for (found, overflow) in partial {
        if overflow {
            return Err(Error::CapExceeded { what: "copy count", limit: caps.copies as u64 });
        }
        for (key, witness) in found {
            match merged.get_mut(&key) {
                Some(w) if witness < *w => *w = witness,
                Some(_) => {}
                None => {
                    merged.insert(key, witness);
                }
            }
        }
        if merged.len() > caps.copies {
            return Err(Error::CapExceeded { what: "copy count", limit: caps.copies as u64 });
        }
    }
    Ok(merged.into_iter().map(|((arc_ids, vertices), witness)| HCopy { arc_ids, vertices, witness }).collect())
}

/// All copies of `h` in `d`, sorted by arc-id set (then vertex set).
pub fn enumerate_copies(d: &Digraph, h: &Pattern, caps: &Caps) -> Result<Vec<HCopy>> {
    run_search(d, h, None, caps, false)
}

/// Copies of `h` in `d` minus the arcs in `removed`. Arc ids refer to `d`.
pub fn enumerate_copies_without(d: &Digraph, h: &Pattern, removed: &[ArcId], caps: &Caps) -> Result<Vec<HCopy>> {
    let mask = removal_mask(d, removed)?;
    run_search(d, h, Some(&mask), caps, false)
}

/// True iff `d` minus the arcs in `removed` has no copy of `h`.
pub fn is_h_free(d: &Digraph, h: &Pattern, removed: &[ArcId], caps: &Caps) -> Result<bool> {
    let mask = removal_mask(d, removed)?;
    Ok(run_search(d, h, Some(&mask), caps, true)?.is_empty())
}

pub fn copies_through_arc(copies: &[HCopy], arc: ArcId) -> Vec<&HCopy> {
    copies.iter().filter(|c| c.contains_arc(arc)).collect()
}

fn removal_mask(d: &Digraph, removed: &[ArcId]) -> Result<Vec<bool>> {
    let mut mask = vec![false; d.arc_count()];
    for &id in removed {
        *mask.get_mut(id).ok_or(Error::UnknownArc(id))? = true;
    }
    Ok(mask)
}

/// For each arc, the indices of the copies that use it.
#[derive(Debug, Clone)]
pub struct CopyIndex {
    by_arc: Vec<Vec<usize>>,
}

impl CopyIndex {
    pub fn new(arc_count: usize, copies: &[HCopy]) -> Self {
        let mut by_arc = vec![Vec::new(); arc_count];
        for (i, c) in copies.iter().enumerate() {
            for &a in &c.arc_ids {
                by_arc[a].push(i);
            }
        }
        CopyIndex { by_arc }
    }

    pub fn through(&self, arc: ArcId) -> &[usize] {
        &self.by_arc[arc]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{directed_cycle, rotational_tournament, transitive_tournament};

    fn triangle() -> Digraph {
        Digraph::unweighted(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn triangle_has_one_copy_of_itself() {
        let copies = enumerate_copies(&triangle(), &directed_cycle(3).unwrap(), &caps()).unwrap();
        assert_eq!(copies.len(), 1);
        assert_eq!(copies[0].arc_ids, vec![0, 1, 2]);
        assert!(copies[0].is_consistent(&triangle(), &directed_cycle(3).unwrap()));
    }

    #[test]
    fn r5_triangles() {
        let r5 = rotational_tournament(5).unwrap();
        let c3 = directed_cycle(3).unwrap();
        let copies = enumerate_copies(&r5, &c3, &caps()).unwrap();
        assert_eq!(copies.len(), 5);
        let mut vsets: Vec<Vec<usize>> = (0..5)
            .map(|i| {
                let mut v = vec![i, (i + 1) % 5, (i + 3) % 5];
                v.sort_unstable();
                v
            })
            .collect();
        vsets.sort();
        let mut got: Vec<_> = copies.iter().map(|c| c.vertices.clone()).collect();
        got.sort();
        assert_eq!(got, vsets);
        assert!(copies.windows(2).all(|w| w[0].arc_ids < w[1].arc_ids));
    }

    #[test]
    fn bidirected_triangle_has_two_directed_triangles() {
        let d = Digraph::unweighted(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2)]).unwrap();
        assert_eq!(enumerate_copies(&d, &directed_cycle(3).unwrap(), &caps()).unwrap().len(), 2);
    }

    #[test]
    fn parallel_arcs_yield_distinct_copies() {
        let d = Digraph::unweighted(3, &[(0, 1), (0, 1), (1, 2), (2, 0)]).unwrap();
        let copies = enumerate_copies(&d, &directed_cycle(3).unwrap(), &caps()).unwrap();
        assert_eq!(copies.len(), 2);
        assert_eq!(copies[0].vertices, copies[1].vertices);
        assert_ne!(copies[0].arc_ids, copies[1].arc_ids);
    }

    #[test]
    fn h_freeness() {
        let c3 = directed_cycle(3).unwrap();
        assert!(is_h_free(&triangle(), &c3, &[0], &caps()).unwrap());
        assert!(!is_h_free(&triangle(), &c3, &[], &caps()).unwrap());
        assert_eq!(is_h_free(&triangle(), &c3, &[7], &caps()), Err(Error::UnknownArc(7)));

        let r5 = rotational_tournament(5).unwrap();
        let diff_two: Vec<ArcId> = r5.arcs().iter().filter(|a| (a.head + 5 - a.tail) % 5 == 2).map(|a| a.id).collect();
        assert_eq!(diff_two.len(), 5);
        assert!(is_h_free(&r5, &c3, &diff_two, &caps()).unwrap());
    }

    #[test]
    fn copies_through_arcs_of_r5() {
        let r5 = rotational_tournament(5).unwrap();
        let copies = enumerate_copies(&r5, &directed_cycle(3).unwrap(), &caps()).unwrap();
        for a in r5.arcs() {
            let expect = if (a.head + 5 - a.tail) % 5 == 1 { 1 } else { 2 };
            assert_eq!(copies_through_arc(&copies, a.id).len(), expect);
        }
        assert!(copies_through_arc(&[], 0).is_empty());
        let index = CopyIndex::new(r5.arc_count(), &copies);
        assert_eq!(index.through(0).len(), copies_through_arc(&copies, 0).len());
    }

    #[test]
    fn pattern_vertex_cap() {
        let c9 = directed_cycle(9).unwrap();
        let err = enumerate_copies(&triangle(), &c9, &caps()).unwrap_err();
        assert!(err.is_resource_cap());
    }

    #[test]
    fn copy_count_cap() {
        let t = transitive_tournament(6).unwrap().to_digraph();
        let caps = Caps { copies: 3, ..Caps::default() };
        let err = enumerate_copies(&t, &transitive_tournament(3).unwrap(), &caps).unwrap_err();
        assert!(err.is_resource_cap());
    }

    #[test]
    fn isolated_pattern_vertices_are_respected() {
        // one arc plus an isolated vertex, inside a single arc on 3 vertices
        let h = Pattern::new(3, &[(0, 1)]).unwrap();
        let d = Digraph::unweighted(3, &[(0, 1)]).unwrap();
        let copies = enumerate_copies(&d, &h, &caps()).unwrap();
        assert_eq!(copies.len(), 1);
        assert_eq!(copies[0].vertices, vec![0, 1, 2]);
    }
}
