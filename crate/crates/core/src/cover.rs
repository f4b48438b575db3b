//! Deterministic LP-rounding cover algorithm.
//!
//! The pipeline solves the fractional LP, removes arcs whose cover value is
//! at least 1/f(H, L) (re-solving after each removal), then partitions the
//! vertices into |V(L)| parts by conditional expectations and deletes every
//! positive-cover arc whose part pair is not an arc of L. What remains is
//! H-free and the deleted weight is at most f(H, L) times ν*.
//!
//! Parts are numbered by the vertices of L, starting at 0.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::caps::Caps;
use crate::embed::{enumerate_copies, is_h_free, HCopy};
use crate::error::{Error, Result};
use crate::fparam::{disc, f_of};
use crate::graph::{acyclic_orientation, transitive_tournament, two_cycle, ArcId, Digraph, Pattern, UndirectedGraph};
use crate::lp::{solve_fractional, FracSolution};
use crate::num::{int, Rational, Scalar, FLOAT_TOL};

/// `1 / (|E(H)| - disc(H, L))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaThreshold {
    pub alpha: Rational,
    pub disc: usize,
}

impl AlphaThreshold {
    pub fn new(h: &Pattern, l: &Pattern, caps: &Caps) -> Result<Self> {
        if l.arc_count() == 0 {
            return Err(Error::InvalidArgument("alpha needs a nonempty L".into()));
        }
        let d = disc(h, l, caps)?;
        let gap = h.arc_count() - d;
        if gap == 0 {
            return Err(Error::InvalidArgument("disc(H, L) = |E(H)| leaves alpha undefined".into()));
        }
        Ok(AlphaThreshold { alpha: Rational::new(BigInt::one(), BigInt::from(gap)), disc: d })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeelStep<S> {
    pub arc: ArcId,
    /// Cover value of the arc in the LP solved just before its removal.
    pub value: S,
}

#[derive(Debug, Clone)]
pub struct PeelOutcome<S> {
    /// Removed arcs, in removal order.
    pub removed: Vec<ArcId>,
    pub trace: Vec<PeelStep<S>>,
    /// Copies of the residual, with arc ids of the original digraph.
    pub copies: Vec<HCopy>,
    /// Optimal LP of the residual, indexed by original arc ids. Removed arcs
    /// carry cover 0.
    pub solution: FracSolution<S>,
    /// ν* of the digraph before any removal.
    pub initial_optimum: S,
    pub lp_solves: usize,
}

impl<S> PeelOutcome<S> {
    /// The residual digraph and, for each of its arcs, the original id.
    pub fn residual(&self, d: &Digraph) -> Result<(Digraph, Vec<ArcId>)> {
        d.without_arcs(&self.removed)
    }
}

fn reaches_threshold<S: Scalar>(value: &S, threshold: &S) -> bool {
    if S::EXACT {
        value >= threshold
    } else {
        value.to_f64() >= threshold.to_f64() - FLOAT_TOL
    }
}

/// Repeatedly removes the arc with the largest cover value, provided it is at
/// least `threshold`, and re-solves the LP. Ties go to the smallest arc id.
///
/// Copies of D minus F are exactly the copies of D that avoid F, so the copy
/// list is filtered rather than re-enumerated. With `batch`, every arc at or
/// above the threshold is removed after one solve; the per-arc guarantee does
/// not cover that mode.
pub fn peel_heavy_arcs<S: Scalar>(
    d: &Digraph,
    copies: Vec<HCopy>,
    threshold: &Rational,
    batch: bool,
) -> Result<PeelOutcome<S>> {
    let threshold = S::from_rational(threshold);
    let mut copies = copies;
    let mut removed = Vec::new();
    let mut trace = Vec::new();
    let mut lp_solves = 0;
    let mut initial_optimum = None;
    loop {
        let solution = solve_fractional::<S>(d, &copies)?;
        lp_solves += 1;
        let initial_optimum = initial_optimum.get_or_insert_with(|| solution.optimum.clone()).clone();
        let mut heavy: Vec<(ArcId, S)> = solution
            .cover
            .iter()
            .enumerate()
            .filter(|(_, c)| reaches_threshold(*c, &threshold))
            .map(|(e, c)| (e, c.clone()))
            .collect();
        if heavy.is_empty() {
            return Ok(PeelOutcome { removed, trace, copies, solution, initial_optimum, lp_solves });
        }
        // Largest value first, then smallest id (the sort is stable).
        heavy.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
        if !batch {
            heavy.truncate(1);
        }
        for (arc, value) in heavy {
            removed.push(arc);
            trace.push(PeelStep { arc, value });
        }
        copies.retain(|c| !c.arc_ids.iter().any(|a| removed.contains(a)));
    }
}

/// Positive-cover arcs whose endpoint parts do not form an arc of L.
/// Same-part arcs always qualify.
pub fn partition_cover<S: Scalar>(d: &Digraph, cover: &[S], l: &Pattern, assignment: &[usize]) -> Vec<ArcId> {
    d.arcs()
        .iter()
        .filter(|a| cover[a.id].is_positive_cover())
        .filter(|a| !l.has_arc(assignment[a.tail], assignment[a.head]))
        .map(|a| a.id)
        .collect()
}

/// Counts, out of the r^2 part pairs still possible for an arc, those that
/// put the arc into the cover.
struct PairCounts {
    r: usize,
    l_adj: Vec<bool>,
    unassigned: u64,
    tail_fixed: Vec<u64>,
    head_fixed: Vec<u64>,
}

impl PairCounts {
    fn new(l: &Pattern) -> Self {
        let r = l.vertex_count();
        let ru = r as u64;
        PairCounts {
            r,
            l_adj: l.adjacency(),
            unassigned: ru * ru - l.arc_count() as u64,
            tail_fixed: (0..r).map(|i| ru * (r - l.out_degree(i)) as u64).collect(),
            head_fixed: (0..r).map(|j| ru * (r - l.in_degree(j)) as u64).collect(),
        }
    }

    fn count(&self, tail: Option<usize>, head: Option<usize>) -> u64 {
        let r2 = (self.r * self.r) as u64;
        match (tail, head) {
            (None, None) => self.unassigned,
            (Some(i), None) => self.tail_fixed[i],
            (None, Some(j)) => self.head_fixed[j],
            (Some(i), Some(j)) => {
                if self.l_adj[i * self.r + j] {
                    0
                } else {
                    r2
                }
            }
        }
    }
}

/// Expected weight of [`partition_cover`] when the assigned vertices are
/// fixed and every other vertex picks a part uniformly at random.
pub fn conditional_expected_weight<S: Scalar>(
    d: &Digraph,
    cover: &[S],
    l: &Pattern,
    partial: &[Option<usize>],
) -> Rational {
    let counts = PairCounts::new(l);
    let mut total = <Rational as Zero>::zero();
    for a in d.arcs().iter().filter(|a| cover[a.id].is_positive_cover()) {
        let n = counts.count(partial[a.tail], partial[a.head]);
        if n > 0 {
            total += &a.weight * int(n as i64);
        }
    }
    total / int((counts.r * counts.r) as i64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derandomized {
    pub assignment: Vec<usize>,
    /// Vertices in placement order.
    pub order: Vec<usize>,
    /// Conditional expectation before any placement, then after each.
    pub expectations: Vec<Rational>,
}

/// Places vertices one at a time into the part that minimizes the
/// conditional expected cover weight (ties: smallest part).
///
/// Vertices go in descending order of weighted degree over positive-cover
/// arcs, ties by index. The final expectation is the weight of the output.
pub fn derandomized_partition<S: Scalar>(d: &Digraph, cover: &[S], l: &Pattern) -> Derandomized {
    let n = d.vertex_count();
    let r = l.vertex_count();
    let counts = PairCounts::new(l);
    let active: Vec<bool> = d.arcs().iter().map(|a| cover[a.id].is_positive_cover()).collect();

    let mut degree = vec![<Rational as Zero>::zero(); n];
    let mut incident: Vec<Vec<ArcId>> = vec![Vec::new(); n];
    for a in d.arcs().iter().filter(|a| active[a.id]) {
        degree[a.tail] += &a.weight;
        degree[a.head] += &a.weight;
        incident[a.tail].push(a.id);
        incident[a.head].push(a.id);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| degree[y].cmp(&degree[x]).then(x.cmp(&y)));

    // Expectations are kept scaled by r^2 so the search stays in integers
    // times weights.
    let scale = int((r * r) as i64);
    let mut partial: Vec<Option<usize>> = vec![None; n];
    let mut current = conditional_expected_weight(d, cover, l, &partial) * &scale;
    let mut expectations = vec![&current / &scale];
    for &v in &order {
        let before: Rational = incident[v].iter().map(|&e| arc_term(d, e, &partial, &counts)).sum();
        let mut best: Option<(usize, Rational)> = None;
        for part in 0..r {
            partial[v] = Some(part);
            let after: Rational = incident[v].iter().map(|&e| arc_term(d, e, &partial, &counts)).sum();
            let candidate = &current - &before + after;
            if best.as_ref().is_none_or(|(_, b)| candidate < *b) {
                best = Some((part, candidate));
            }
        }
        let (part, value) = best.expect("L has at least one vertex");
        partial[v] = Some(part);
        current = value;
        expectations.push(&current / &scale);
    }
    Derandomized { assignment: partial.into_iter().map(|p| p.unwrap_or(0)).collect(), order, expectations }
}

fn arc_term(d: &Digraph, e: ArcId, partial: &[Option<usize>], counts: &PairCounts) -> Rational {
    let a = &d.arcs()[e];
    // An arc between v and itself cannot occur: loops are rejected.
    let n = counts.count(partial[a.tail], partial[a.head]);
    &a.weight * int(n as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CoverOptions {
    /// Remove all heavy arcs per LP solve. Faster, but the ratio
    /// guarantee is not claimed for this mode.
    pub batch_peel: bool,
}

#[derive(Debug, Clone)]
pub struct CoverResult<S> {
    /// F = F1 ∪ F2, sorted.
    pub cover_arcs: Vec<ArcId>,
    pub cover_weight: Rational,
    pub nu_star_original: S,
    /// f(H, L).
    pub ratio_bound: Rational,
    pub alpha: AlphaThreshold,
    pub copy_count: usize,
    /// F1 in removal order, with cover values at removal.
    pub peel_trace: Vec<PeelStep<S>>,
    /// F2, sorted.
    pub partition_arcs: Vec<ArcId>,
    pub assignment: Vec<usize>,
    pub placement_order: Vec<usize>,
    pub expectations: Vec<Rational>,
    /// ν* of the residual after peeling.
    pub nu_star_residual: S,
    pub lp_solves: usize,
    /// D minus F was re-enumerated and contains no copy of H.
    pub h_free_certified: bool,
    /// `cover_weight <= ratio_bound * nu_star_original` (+ tolerance).
    pub bound_holds: bool,
    pub batch_peel: bool,
}

impl<S> CoverResult<S> {
    /// Both certificate checks passed on the guaranteed (per-arc) path.
    pub fn certified(&self) -> bool {
        self.h_free_certified && self.bound_holds && !self.batch_peel
    }
}

fn bound_holds<S: Scalar>(weight: &Rational, ratio: &Rational, nu_star: &S) -> bool {
    if S::EXACT {
        *weight <= ratio * nu_star.to_rational()
    } else {
        let rhs = crate::num::rational_to_f64(ratio) * nu_star.to_f64();
        crate::num::rational_to_f64(weight) <= rhs + FLOAT_TOL * (1.0 + rhs.abs())
    }
}

/// Computes an H-cover of D of weight at most f(H, L)·ν*_H(D).
pub fn approximate_cover<S: Scalar>(
    d: &Digraph,
    h: &Pattern,
    l: &Pattern,
    caps: &Caps,
    options: CoverOptions,
) -> Result<CoverResult<S>> {
    let ratio_bound = f_of(h, l, caps)?;
    let alpha = AlphaThreshold::new(h, l, caps)?;
    let threshold = <Rational as One>::one() / &ratio_bound;

    let copies = enumerate_copies(d, h, caps)?;
    let copy_count = copies.len();
    let peel = peel_heavy_arcs::<S>(d, copies, &threshold, options.batch_peel)?;
    let nu_star_original = peel.initial_optimum.clone();

    let cover = &peel.solution.cover;
    let split = derandomized_partition(d, cover, l);
    let partition_arcs = partition_cover(d, cover, l, &split.assignment);

    let mut cover_arcs: Vec<ArcId> = peel.removed.iter().copied().chain(partition_arcs.iter().copied()).collect();
    cover_arcs.sort_unstable();
    cover_arcs.dedup();
    let cover_weight = d.total_weight(&cover_arcs);
    let h_free_certified = is_h_free(d, h, &cover_arcs, caps)?;
    let holds = bound_holds(&cover_weight, &ratio_bound, &nu_star_original);

    Ok(CoverResult {
        cover_arcs,
        cover_weight,
        nu_star_original,
        ratio_bound,
        alpha,
        copy_count,
        peel_trace: peel.trace,
        partition_arcs,
        assignment: split.assignment,
        placement_order: split.order,
        expectations: split.expectations,
        nu_star_residual: peel.solution.optimum.clone(),
        lp_solves: peel.lp_solves,
        h_free_certified,
        bound_holds: holds,
        batch_peel: options.batch_peel,
    })
}

/// K_k-cover of an undirected graph with ratio ⌊k²/4⌋: orient G acyclically,
/// so K_k copies become T_k copies, and round against the 2-cycle.
/// Returned arc ids are the edge ids of G.
pub fn undirected_kk_cover<S: Scalar>(g: &UndirectedGraph, k: usize, caps: &Caps) -> Result<CoverResult<S>> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!("K_k cover needs k >= 3, got {k}")));
    }
    let d = acyclic_orientation(g);
    approximate_cover(&d, &transitive_tournament(k)?, &two_cycle(), caps, CoverOptions::default())
}
