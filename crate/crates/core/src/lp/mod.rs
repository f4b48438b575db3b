//! The fractional H-cover LP and its dual, the fractional H-packing LP.
//!
//! Cover: minimize `sum_e w(e) c(e)` subject to `sum_{e in X} c(e) >= 1` for
//! every copy `X`, `0 <= c <= 1`. Packing: maximize `sum_X m(X)` subject to
//! `sum_{X ni e} m(X) <= w(e)`, `m >= 0`. The packing side is solved
//! directly; the cover is the optimal dual.

pub mod simplex;

use crate::caps::Caps;
use crate::embed::{enumerate_copies, CopyIndex, HCopy};
use crate::error::Result;
use crate::graph::{ArcId, Digraph, Pattern};
use crate::num::Scalar;

/// Optimal cover/packing pair with a shared optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct FracSolution<S> {
    /// Indexed by arc id of the host; arcs in no copy are zero.
    pub cover: Vec<S>,
    /// Indexed like the copy list that was solved.
    pub packing: Vec<S>,
    /// `tau* = nu*`; the packing value.
    pub optimum: S,
    pub cover_value: S,
    pub packing_value: S,
    /// `|cover_value - packing_value|`, zero in exact mode.
    pub gap: S,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verification<S> {
    /// Smallest `sum_{e in X} c(e)` over copies (one if there are none).
    pub min_copy_coverage: S,
    /// Largest `load(e) - w(e)` over arcs (zero if none is overloaded).
    pub max_overload: S,
    pub cover_feasible: bool,
    pub packing_feasible: bool,
    pub gap_ok: bool,
}

impl<S: Scalar> Verification<S> {
    pub fn ok(&self) -> bool {
        self.cover_feasible && self.packing_feasible && self.gap_ok
    }
}

impl<S: Scalar> FracSolution<S> {
    fn zero(arc_count: usize) -> Self {
        FracSolution {
            cover: vec![S::zero(); arc_count],
            packing: Vec::new(),
            optimum: S::zero(),
            cover_value: S::zero(),
            packing_value: S::zero(),
            gap: S::zero(),
            pivots: 0,
        }
    }

    /// Loads `sum_{X ni e} m(X)` per arc.
    pub fn loads(&self, arc_count: usize, copies: &[HCopy]) -> Vec<S> {
        let mut load = vec![S::zero(); arc_count];
        for (copy, m) in copies.iter().zip(&self.packing) {
            for &a in &copy.arc_ids {
                load[a] = load[a].add(m);
            }
        }
        load
    }

    /// Re-checks both feasibility systems and the duality gap.
    pub fn verify(&self, d: &Digraph, copies: &[HCopy]) -> Verification<S> {
        let mut min_cov = S::one();
        for copy in copies {
            let s = S::sum(copy.arc_ids.iter().map(|&a| &self.cover[a]));
            if s < min_cov {
                min_cov = s;
            }
        }
        let load = self.loads(d.arc_count(), copies);
        let mut max_over = S::zero();
        for (a, l) in load.iter().enumerate() {
            let over = l.sub(&S::from_rational(d.weight(a)));
            if over > max_over {
                max_over = over;
            }
        }
        let cover_in_range = self.cover.iter().all(|c| !S::zero().sub(c).exceeds_tol() && !c.sub(&S::one()).exceeds_tol());
        let packing_in_range = self.packing.iter().all(|m| !S::zero().sub(m).exceeds_tol());
        Verification {
            cover_feasible: cover_in_range && !S::one().sub(&min_cov).exceeds_tol(),
            packing_feasible: packing_in_range && !max_over.exceeds_tol(),
            gap_ok: !self.gap.exceeds_tol(),
            min_copy_coverage: min_cov,
            max_overload: max_over,
        }
    }
}

/// Solves the LP pair for the given copy list.
///
/// `copies` may be any sub-list of the host's copies (for instance the
/// copies surviving an arc deletion); arcs outside every listed copy get
/// cover value zero.
pub fn solve_fractional<S: Scalar>(d: &Digraph, copies: &[HCopy]) -> Result<FracSolution<S>> {
    if copies.is_empty() {
        return Ok(FracSolution::zero(d.arc_count()));
    }
    let mut row_of = vec![usize::MAX; d.arc_count()];
    let mut row_arcs: Vec<ArcId> = Vec::new();
    for copy in copies {
        for &a in &copy.arc_ids {
            if row_of[a] == usize::MAX {
                row_of[a] = row_arcs.len();
                row_arcs.push(a);
            }
        }
    }
    let columns: Vec<Vec<usize>> = copies.iter().map(|c| c.arc_ids.iter().map(|&a| row_of[a]).collect()).collect();
    let capacity: Vec<S> = row_arcs.iter().map(|&a| S::from_rational(d.weight(a))).collect();
    let outcome = simplex::maximize_packing(row_arcs.len(), &columns, &capacity)?;

    let mut cover = vec![S::zero(); d.arc_count()];
    for (row, &a) in row_arcs.iter().enumerate() {
        // values above one only arise on zero-weight arcs; clamping keeps
        // feasibility and the objective
        cover[a] = outcome.dual[row].clone().clamp_unit();
    }
    let packing: Vec<S> = outcome.primal.into_iter().map(|m| if m < S::zero() { S::zero() } else { m }).collect();
    let mut sol = FracSolution {
        cover,
        packing,
        optimum: S::zero(),
        cover_value: S::zero(),
        packing_value: S::zero(),
        gap: S::zero(),
        pivots: outcome.pivots,
    };
    if !S::EXACT {
        repair(&mut sol, d, copies);
    }
    sol.refresh_values(d);
    Ok(sol)
}

impl<S: Scalar> FracSolution<S> {
    fn refresh_values(&mut self, d: &Digraph) {
        self.cover_value = S::sum(
            self.cover.iter().enumerate().map(|(a, c)| c.mul(&S::from_rational(d.weight(a)))).collect::<Vec<_>>().iter(),
        );
        self.packing_value = S::sum(&self.packing);
        self.gap = self.cover_value.sub(&self.packing_value).abs();
        self.optimum = self.packing_value.clone();
    }
}

/// One projection pass restoring feasibility after floating round-off.
fn repair<S: Scalar>(sol: &mut FracSolution<S>, d: &Digraph, copies: &[HCopy]) {
    for copy in copies {
        let s = S::sum(copy.arc_ids.iter().map(|&a| &sol.cover[a]));
        let deficit = S::one().sub(&s);
        if deficit.exceeds_tol() {
            let &top = copy
                .arc_ids
                .iter()
                .max_by(|&&a, &&b| sol.cover[a].partial_cmp(&sol.cover[b]).unwrap_or(std::cmp::Ordering::Equal))
                .expect("copies have arcs");
            sol.cover[top] = sol.cover[top].add(&deficit).clamp_unit();
        }
    }
    let index = CopyIndex::new(d.arc_count(), copies);
    let load = sol.loads(d.arc_count(), copies);
    for (a, l) in load.iter().enumerate() {
        let w = S::from_rational(d.weight(a));
        if l.sub(&w).exceeds_tol() {
            let factor = w.div(l);
            for &x in index.through(a) {
                sol.packing[x] = sol.packing[x].mul(&factor);
            }
        }
    }
}

/// `nu*_H(D)`, enumerating copies first.
pub fn nu_star<S: Scalar>(d: &Digraph, h: &Pattern, caps: &Caps) -> Result<S> {
    let copies = enumerate_copies(d, h, caps)?;
    Ok(solve_fractional::<S>(d, &copies)?.optimum)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArcSlack<S> {
    pub arc: ArcId,
    pub cover: S,
    pub load: S,
    pub weight: S,
    pub deviation: S,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlacknessReport<S> {
    /// One entry per arc with positive cover value.
    pub arcs: Vec<ArcSlack<S>>,
    /// Copies with positive packing value whose cover sum is not one.
    pub copy_violations: Vec<usize>,
}

impl<S> SlacknessReport<S> {
    pub fn passed(&self) -> bool {
        self.arcs.iter().all(|a| !a.violated) && self.copy_violations.is_empty()
    }

    pub fn violation_count(&self) -> usize {
        self.arcs.iter().filter(|a| a.violated).count() + self.copy_violations.len()
    }
}

/// For every arc with `c(e) > slack_eps`, compares its packing load with its
/// weight; for every copy with `m(X) > slack_eps`, compares its cover sum with one.
pub fn check_complementary_slackness<S: Scalar>(d: &Digraph, copies: &[HCopy], sol: &FracSolution<S>) -> SlacknessReport<S> {
    let load = sol.loads(d.arc_count(), copies);
    let arcs = (0..d.arc_count())
        .filter(|&a| sol.cover[a].is_positive_cover())
        .map(|a| {
            let weight = S::from_rational(d.weight(a));
            let deviation = load[a].sub(&weight).abs();
            ArcSlack {
                arc: a,
                cover: sol.cover[a].clone(),
                load: load[a].clone(),
                violated: deviation.exceeds_tol(),
                weight,
                deviation,
            }
        })
        .collect();
    let copy_violations = copies
        .iter()
        .enumerate()
        .filter(|(i, _)| sol.packing.get(*i).is_some_and(|m| m.is_positive_cover()))
        .filter(|(_, copy)| S::sum(copy.arc_ids.iter().map(|&a| &sol.cover[a])).sub(&S::one()).abs().exceeds_tol())
        .map(|(i, _)| i)
        .collect();
    SlacknessReport { arcs, copy_violations }
}
