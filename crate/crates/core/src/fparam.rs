//! The ratio parameter f(H, L) and the quantities it is compared against.
//!
//! `disc(H, L)` is the least number of arcs that must be added to the blowup
//! of L before it contains H, computed as a minimum-violation vertex map
//! V(H) -> V(L). `f(H, L)` combines it with the arc density of L, and
//! [`f_search`] bounds the infimum of f(H, L) over all nonempty L.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::graph::{directed_cycle, transitive_tournament, two_cycle, Pattern};
use crate::num::{int, Rational};

/// Number of maps V(H) -> V(L), saturating.
fn map_count(h: &Pattern, l: &Pattern) -> u64 {
    (l.vertex_count() as u64).checked_pow(h.vertex_count() as u32).unwrap_or(u64::MAX)
}

struct DiscSearch {
    r: usize,
    l_adj: Vec<bool>,
    /// For the vertex placed at position i: arcs to earlier positions as
    /// (earlier position, arc leaves the current vertex).
    back: Vec<Vec<(usize, bool)>>,
    image: Vec<usize>,
    best: usize,
}

impl DiscSearch {
    fn run(&mut self, pos: usize, cost: usize) {
        if cost >= self.best {
            return;
        }
        if pos == self.back.len() {
            self.best = cost;
            return;
        }
        for target in 0..self.r {
            let mut extra = 0;
            for &(earlier, outgoing) in &self.back[pos] {
                let other = self.image[earlier];
                let (t, h) = if outgoing { (target, other) } else { (other, target) };
                if !self.l_adj[t * self.r + h] {
                    extra += 1;
                }
            }
            self.image[pos] = target;
            self.run(pos + 1, cost + extra);
            if self.best == 0 {
                return;
            }
        }
    }
}

/// Vertices of H in an order that keeps each new vertex attached to the
/// already placed ones, so violations are discovered early.
fn placement_order(h: &Pattern) -> Vec<usize> {
    let n = h.vertex_count();
    let mut weight = vec![0usize; n];
    let degree: Vec<usize> = (0..n).map(|v| h.out_degree(v) + h.in_degree(v)).collect();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n).filter(|&v| !placed[v]).max_by_key(|&v| (weight[v], degree[v], std::cmp::Reverse(v))).unwrap();
        placed[next] = true;
        order.push(next);
        for &(u, v) in h.arcs() {
            if u == next {
                weight[v] += 1;
            } else if v == next {
                weight[u] += 1;
            }
        }
    }
    order
}

/// Minimum number of arcs of H whose image is not an arc of L, over all
/// vertex maps V(H) -> V(L). Loops are never arcs of L.
pub fn disc(h: &Pattern, l: &Pattern, caps: &Caps) -> Result<usize> {
    let maps = map_count(h, l);
    if maps > caps.disc_maps {
        return Err(Error::CapExceeded { what: "disc vertex maps", limit: caps.disc_maps });
    }
    let order = placement_order(h);
    let mut position = vec![0; h.vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut back = vec![Vec::new(); order.len()];
    for &(u, v) in h.arcs() {
        let (pu, pv) = (position[u], position[v]);
        if pu > pv {
            back[pu].push((pv, true));
        } else {
            back[pv].push((pu, false));
        }
    }
    let mut search = DiscSearch {
        r: l.vertex_count(),
        l_adj: l.adjacency(),
        back,
        image: vec![0; order.len()],
        // Collapsing H onto one vertex violates every arc.
        best: h.arc_count(),
    };
    search.run(0, 0);
    Ok(search.best)
}

fn f_formula(h_arcs: usize, l_vertices: usize, l_arcs: usize, disc: usize) -> Rational {
    let e = int(h_arcs as i64);
    let r2 = BigInt::from(l_vertices) * BigInt::from(l_vertices);
    let density = Rational::new(BigInt::from(l_arcs), r2);
    let first = &e * (Rational::one() - density);
    let second = int((h_arcs - disc) as i64);
    first.max(second)
}

fn check_f_inputs(h: &Pattern, l: &Pattern) -> Result<()> {
    if l.arc_count() == 0 {
        return Err(Error::InvalidArgument("f(H, L) needs a nonempty L".into()));
    }
    if h.arc_count() < 2 {
        return Err(Error::InvalidArgument("f(H, L) needs |E(H)| >= 2".into()));
    }
    Ok(())
}

/// `max{|E(H)|(1 - |E(L)|/|V(L)|^2), |E(H)| - disc(H, L)}`.
pub fn f_of(h: &Pattern, l: &Pattern, caps: &Caps) -> Result<Rational> {
    check_f_inputs(h, l)?;
    let d = disc(h, l, caps)?;
    Ok(f_formula(h.arc_count(), l.vertex_count(), l.arc_count(), d))
}

/// Largest acyclic subgraph, by DP over vertex subsets.
pub fn gamma(h: &Pattern, caps: &Caps) -> Result<usize> {
    let n = h.vertex_count();
    if n > caps.gamma_vertices {
        return Err(Error::CapExceeded { what: "gamma pattern vertices", limit: caps.gamma_vertices as u64 });
    }
    let mut in_mask = vec![0u32; n];
    for &(u, v) in h.arcs() {
        in_mask[v] |= 1 << u;
    }
    // best[S]: most forward arcs when S is placed first, in some order.
    let mut best = vec![0u32; 1 << n];
    for set in 1usize..(1 << n) {
        let mut value = 0;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let before = set & !(1 << v);
            value = value.max(best[before] + (in_mask[v] & before as u32).count_ones());
        }
        best[set] = value;
    }
    Ok(best[(1 << n) - 1] as usize)
}

/// Largest bipartite subgraph: arcs crossing a bipartition in either
/// direction, maximized over all bipartitions.
pub fn b_param(h: &Pattern, caps: &Caps) -> Result<usize> {
    let n = h.vertex_count();
    if n > caps.bipartite_vertices {
        return Err(Error::CapExceeded { what: "bipartition pattern vertices", limit: caps.bipartite_vertices as u64 });
    }
    if n < 2 {
        return Ok(0);
    }
    let mut mult = vec![0i64; n * n];
    for &(u, v) in h.arcs() {
        mult[u * n + v] += 1;
        mult[v * n + u] += 1;
    }
    // Vertex n-1 stays on side 0; Gray code walks the other 2^(n-1) sides.
    let mut side = vec![false; n];
    let mut cut = 0i64;
    let mut best = 0i64;
    for step in 1u64..(1u64 << (n - 1)) {
        let v = step.trailing_zeros() as usize;
        let mut same = 0;
        let mut other = 0;
        for w in 0..n {
            if w != v {
                if side[w] == side[v] {
                    same += mult[v * n + w];
                } else {
                    other += mult[v * n + w];
                }
            }
        }
        cut += same - other;
        side[v] = !side[v];
        best = best.max(cut);
    }
    Ok(best as usize)
}

/// No vertex has both an incoming and an outgoing arc.
pub fn is_one_way_bipartite(h: &Pattern) -> bool {
    (0..h.vertex_count()).all(|v| h.in_degree(v) == 0 || h.out_degree(v) == 0)
}

/// Length of the directed cycle H is isomorphic to, if any.
pub fn cycle_length(h: &Pattern) -> Option<usize> {
    let n = h.vertex_count();
    if h.arc_count() != n || n < 2 {
        return None;
    }
    let mut next = vec![usize::MAX; n];
    for &(u, v) in h.arcs() {
        if next[u] != usize::MAX {
            return None;
        }
        next[u] = v;
    }
    let mut v = 0;
    for step in 1..=n {
        v = next[v];
        if v == usize::MAX || (v == 0 && step < n) {
            return None;
        }
    }
    (v == 0).then_some(n)
}

/// Adjacency bitstring, pair (0,1) most significant, diagonal skipped.
fn code_of(adj: &[bool], r: usize, perm: &[usize]) -> u128 {
    let mut inverse = vec![0; r];
    for (v, &p) in perm.iter().enumerate() {
        inverse[p] = v;
    }
    let mut code = 0u128;
    for i in 0..r {
        for j in 0..r {
            if i != j {
                code = (code << 1) | adj[inverse[i] * r + inverse[j]] as u128;
            }
        }
    }
    code
}

/// Minimum adjacency bitstring over all vertex relabelings.
pub fn canonical_code(p: &Pattern) -> Result<u128> {
    let r = p.vertex_count();
    if r > 8 {
        return Err(Error::InvalidArgument(format!("canonical form needs at most 8 vertices, got {r}")));
    }
    let adj = p.adjacency();
    Ok((0..r).permutations(r).map(|perm| code_of(&adj, r, &perm)).min().unwrap_or(0))
}

fn pattern_from_code(r: usize, code: u128) -> Pattern {
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (0..r).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let bits = pairs.len();
    let arcs: Vec<_> = pairs.iter().enumerate().filter(|(k, _)| code >> (bits - 1 - k) & 1 == 1).map(|(_, &a)| a).collect();
    Pattern::new(r, &arcs).expect("pairs are distinct and loop-free")
}

/// Every nonempty pattern on `r` vertices up to isomorphism, ordered by
/// canonical code.
pub fn nonisomorphic_patterns(r: usize) -> Result<Vec<Pattern>> {
    if r > 5 {
        return Err(Error::InvalidArgument(format!("labeled enumeration supports r <= 5, got {r}")));
    }
    let bits = r * r.saturating_sub(1);
    let perms: Vec<Vec<usize>> = (0..r).permutations(r).collect();
    let mut codes: Vec<u128> = (1u64..(1u64 << bits))
        .into_par_iter()
        .filter_map(|mask| {
            let p = pattern_from_code(r, mask as u128);
            let adj = p.adjacency();
            let is_min = perms.iter().all(|perm| code_of(&adj, r, perm) >= mask as u128);
            is_min.then_some(mask as u128)
        })
        .collect();
    codes.sort_unstable();
    Ok(codes.into_iter().map(|c| pattern_from_code(r, c)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Every nonempty pattern with at most this many vertices is tried.
    pub r_max: usize,
    /// Named families T_r and C_r are tried up to this many vertices.
    pub catalog_max: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { r_max: 4, catalog_max: 12 }
    }
}

/// Exact value of f(H) known from the structure of H.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub value: Rational,
    /// False when the infimum over L is approached but never reached.
    pub attained: bool,
    pub reason: String,
}

/// Outcome of [`f_search`]: f(H) lies in `[f_lower, f_upper]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FValueReport {
    /// disc(H, best_l).
    pub disc: usize,
    /// f(H, best_l).
    pub f_of_l: Rational,
    /// Best explicitly evaluated L.
    pub best_l: Option<Pattern>,
    pub best_l_name: Option<String>,
    /// Infimum of f(H, L) over the searched family. The family contains
    /// T_r for every r, handled in closed form beyond `catalog_max`.
    pub f_upper: Rational,
    /// `f_upper` equals `f_of_l`, i.e. some searched L reaches it.
    pub attained: bool,
    pub f_lower: Rational,
    pub gamma: usize,
    pub b: usize,
    pub one_way_bipartite: bool,
    pub certificate: Option<Certificate>,
    pub candidates: usize,
    /// Catalog entries not evaluated because a cap was hit.
    pub skipped: Vec<String>,
}

impl FValueReport {
    /// A larger catalog would lower the reported witness value.
    pub fn improvable_by_larger_r(&self) -> bool {
        !self.attained
    }
}

fn certificate_for(h: &Pattern, one_way: bool) -> Option<Certificate> {
    if one_way {
        return Some(Certificate {
            value: int(h.arc_count() as i64),
            attained: true,
            reason: "no directed 2-path and no 2-cycle: f(H) = |E(H)|".into(),
        });
    }
    let k = cycle_length(h)?;
    let (value, attained) = match k {
        2 => (int(1), false),
        5 => (Rational::new(25.into(), 8.into()), true),
        _ => (Rational::new(BigInt::from(2 * k), 3.into()), true),
    };
    Some(Certificate { value, attained, reason: format!("directed cycle of length {k}") })
}

struct Candidate {
    name: String,
    l: Pattern,
    /// Known disc value, used for T_r with r beyond |V(H)|.
    disc: Option<usize>,
}

/// Smallest r with `|E|(r+1)/(2r) <= g`, if `2g > |E|`.
fn transitive_threshold(e: usize, g: usize) -> Option<usize> {
    (2 * g > e).then(|| e.div_ceil(2 * g - e))
}

/// Bounds f(H) by evaluating f(H, L) over every nonempty pattern with at
/// most `r_max` vertices and the catalog {T_r, C_2, C_r : r <= catalog_max}.
///
/// Any map V(H) -> V(T_r) lands in at most |V(H)| vertices, which induce a
/// transitive tournament, so disc(H, T_r) = disc(H, T_|V(H)|) for r past
/// |V(H)|. That makes the whole T_r family cheap, and its tail is added in
/// closed form. Ties go to the earliest candidate: T_r by r, then C_2 and C_r,
/// then enumerated patterns by vertex count and canonical code.
pub fn f_search(h: &Pattern, options: SearchOptions, caps: &Caps) -> Result<FValueReport> {
    let e = h.arc_count();
    if e < 2 {
        return Err(Error::InvalidArgument("f(H) needs |E(H)| >= 2".into()));
    }
    let n_h = h.vertex_count();
    let gamma_h = gamma(h, caps)?;
    let b_h = b_param(h, caps)?;
    let one_way = is_one_way_bipartite(h);

    let base = n_h.max(2);
    let disc_t = match disc(h, &transitive_tournament(base)?, caps) {
        Ok(d) => d,
        Err(err) if err.is_resource_cap() => e - gamma_h,
        Err(err) => return Err(err),
    };
    let tail_r = transitive_threshold(e, e - disc_t).map(|r| r.max(base));

    let mut candidates = Vec::new();
    let t_max = options.catalog_max.max(tail_r.unwrap_or(0));
    for r in 2..=t_max {
        if r > options.catalog_max && Some(r) != tail_r {
            continue;
        }
        let disc = (r >= base).then_some(disc_t);
        candidates.push(Candidate { name: format!("T_{r}"), l: transitive_tournament(r)?, disc });
    }
    candidates.push(Candidate { name: "C_2".into(), l: two_cycle(), disc: None });
    for r in 3..=options.catalog_max {
        candidates.push(Candidate { name: format!("C_{r}"), l: directed_cycle(r)?, disc: None });
    }
    for r in 2..=options.r_max {
        for (i, l) in nonisomorphic_patterns(r)?.into_iter().enumerate() {
            candidates.push(Candidate { name: format!("P{r}#{i}"), l, disc: None });
        }
    }

    let evaluated: Vec<Result<Option<usize>>> = candidates
        .par_iter()
        .map(|c| match c.disc {
            Some(d) => Ok(Some(d)),
            None => match disc(h, &c.l, caps) {
                Ok(d) => Ok(Some(d)),
                Err(err) if err.is_resource_cap() => Ok(None),
                Err(err) => Err(err),
            },
        })
        .collect();

    let mut best: Option<(usize, Rational, usize)> = None;
    let mut skipped = Vec::new();
    let mut count = 0;
    for (i, result) in evaluated.into_iter().enumerate() {
        let c = &candidates[i];
        let Some(d) = result? else {
            skipped.push(c.name.clone());
            continue;
        };
        count += 1;
        let value = f_formula(e, c.l.vertex_count(), c.l.arc_count(), d);
        if best.as_ref().is_none_or(|(_, v, _)| value < *v) {
            best = Some((i, value, d));
        }
    }
    let (best_index, f_of_l, best_disc) = best.ok_or(Error::CapExceeded { what: "every f_search candidate", limit: caps.disc_maps })?;

    let f_lower = Rational::new(BigInt::from(e), 2.into());
    // Limit of f(H, T_r) as r grows: max(|E|/2, |E| - disc_t).
    let tail_inf = f_lower.clone().max(int((e - disc_t) as i64));
    let f_upper = f_of_l.clone().min(tail_inf);
    let attained = f_upper == f_of_l;
    let best_c = &candidates[best_index];

    Ok(FValueReport {
        disc: best_disc,
        f_of_l,
        best_l: Some(best_c.l.clone()),
        best_l_name: Some(best_c.name.clone()),
        f_upper,
        attained,
        f_lower,
        gamma: gamma_h,
        b: b_h,
        one_way_bipartite: one_way,
        certificate: certificate_for(h, one_way),
        candidates: count,
        skipped,
    })
}
