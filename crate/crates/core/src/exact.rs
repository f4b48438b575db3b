//! Exact τ_H and ν_H for small instances by branch and bound.
//!
//! Both searches prune with the fractional optimum of the remaining copies,
//! solved in floating point. The float bound only prunes when it clears the
//! incumbent by a safety margin, so the returned values are exact.

use num_traits::{ToPrimitive, Zero};

use crate::caps::Caps;
use crate::embed::{enumerate_copies, HCopy};
use crate::error::{Error, Result};
use crate::graph::{ArcId, Digraph, Pattern};
use crate::lp::solve_fractional;
use crate::num::{int, rational_to_f64, Rational};

/// Relative slack applied to float LP bounds before pruning.
const BOUND_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub value: Rational,
    /// Arc ids for τ, copy indices for ν.
    pub witness: Vec<usize>,
    pub node_count: u64,
    /// The copy list the witness indexes into (for ν) or hits (for τ).
    pub copies: Vec<HCopy>,
}

fn oracle_copies(d: &Digraph, h: &Pattern, caps: &Caps) -> Result<Vec<HCopy>> {
    let copies = enumerate_copies(d, h, caps)?;
    if copies.len() > caps.oracle_copies {
        return Err(Error::CapExceeded { what: "oracle copy count", limit: caps.oracle_copies as u64 });
    }
    Ok(copies)
}

fn lp_bound(d: &Digraph, copies: &[HCopy]) -> Result<f64> {
    if copies.is_empty() {
        return Ok(0.0);
    }
    Ok(solve_fractional::<f64>(d, copies)?.optimum)
}

struct TauSearch<'a> {
    d: &'a Digraph,
    copies: &'a [HCopy],
    weights: Vec<f64>,
    chosen: Vec<bool>,
    excluded: Vec<bool>,
    best_value: Rational,
    best_set: Vec<ArcId>,
    nodes: u64,
    node_cap: u64,
}

impl TauSearch<'_> {
    fn run(&mut self, cost: Rational) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_cap {
            return Err(Error::CapExceeded { what: "exact tau search nodes", limit: self.node_cap });
        }
        if cost >= self.best_value {
            return Ok(());
        }
        let open: Vec<HCopy> =
            self.copies.iter().filter(|c| !c.arc_ids.iter().any(|&a| self.chosen[a])).cloned().collect();
        if open.is_empty() {
            self.best_value = cost;
            self.best_set = (0..self.chosen.len()).filter(|&a| self.chosen[a]).collect();
            return Ok(());
        }
        // Fail first: the open copy with the fewest arcs still allowed.
        let free = |c: &HCopy| c.arc_ids.iter().filter(|&&a| !self.excluded[a]).count();
        let pick = open.iter().min_by_key(|c| free(c)).expect("open is nonempty");
        if free(pick) == 0 {
            return Ok(());
        }
        let bound = rational_to_f64(&cost) + lp_bound(self.d, &open)?;
        let best = rational_to_f64(&self.best_value);
        if bound - BOUND_MARGIN * (1.0 + bound.abs()) >= best {
            return Ok(());
        }
        let mut arcs: Vec<ArcId> = pick.arc_ids.iter().copied().filter(|&a| !self.excluded[a]).collect();
        // Cheap arcs first finds good incumbents early.
        arcs.sort_by(|&a, &b| self.weights[a].total_cmp(&self.weights[b]).then(a.cmp(&b)));
        let mut newly_excluded = Vec::new();
        for a in arcs {
            self.chosen[a] = true;
            let next = &cost + self.d.weight(a);
            let result = self.run(next);
            self.chosen[a] = false;
            if let Err(err) = result {
                for &x in &newly_excluded {
                    self.excluded[x] = false;
                }
                return Err(err);
            }
            // Later branches exclude a so no set is visited twice.
            self.excluded[a] = true;
            newly_excluded.push(a);
        }
        for x in newly_excluded {
            self.excluded[x] = false;
        }
        Ok(())
    }
}

/// Greedy hitting set: repeatedly take the arc hitting the most open copies
/// per unit weight. Used as the initial incumbent.
fn greedy_hitting_set(d: &Digraph, copies: &[HCopy]) -> Vec<ArcId> {
    let mut open: Vec<&HCopy> = copies.iter().collect();
    let mut chosen = Vec::new();
    while !open.is_empty() {
        let mut hits = vec![0usize; d.arc_count()];
        for c in &open {
            for &a in &c.arc_ids {
                hits[a] += 1;
            }
        }
        let score = |a: ArcId| {
            let w = rational_to_f64(d.weight(a));
            if w == 0.0 {
                f64::INFINITY
            } else {
                hits[a] as f64 / w
            }
        };
        let arc = (0..d.arc_count()).filter(|&a| hits[a] > 0).max_by(|&a, &b| score(a).total_cmp(&score(b)).then(b.cmp(&a))).expect("open copies have arcs");
        chosen.push(arc);
        open.retain(|c| !c.contains_arc(arc));
    }
    chosen.sort_unstable();
    chosen
}

/// Minimum total weight of an arc set meeting every copy of H.
pub fn exact_tau(d: &Digraph, h: &Pattern, caps: &Caps) -> Result<OracleResult> {
    let copies = oracle_copies(d, h, caps)?;
    let initial = greedy_hitting_set(d, &copies);
    let mut search = TauSearch {
        d,
        copies: &copies,
        weights: d.arcs().iter().map(|a| rational_to_f64(&a.weight)).collect(),
        chosen: vec![false; d.arc_count()],
        excluded: vec![false; d.arc_count()],
        best_value: d.total_weight(&initial),
        best_set: initial,
        nodes: 0,
        node_cap: caps.oracle_nodes,
    };
    search.run(<Rational as Zero>::zero())?;
    Ok(OracleResult { value: search.best_value, witness: search.best_set, node_count: search.nodes, copies })
}

struct NuSearch<'a> {
    d: &'a Digraph,
    copies: &'a [HCopy],
    used: Vec<bool>,
    blocked: Vec<bool>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    node_cap: u64,
}

impl NuSearch<'_> {
    fn available(&self, c: &HCopy) -> bool {
        !c.arc_ids.iter().any(|&a| self.used[a] || self.blocked[a])
    }

    fn run(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_cap {
            return Err(Error::CapExceeded { what: "exact nu search nodes", limit: self.node_cap });
        }
        let candidates: Vec<usize> = (0..self.copies.len()).filter(|&i| self.available(&self.copies[i])).collect();
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if candidates.is_empty() {
            return Ok(());
        }
        let open: Vec<HCopy> = candidates.iter().map(|&i| self.copies[i].clone()).collect();
        let lp = lp_bound(self.d, &open)?;
        let upper = self.chosen.len() + (lp + BOUND_MARGIN * (1.0 + lp)).floor().to_usize().unwrap_or(usize::MAX);
        if upper <= self.best.len() {
            return Ok(());
        }
        // Branch on the arc lying in the fewest candidates: one branch per
        // candidate through it, plus one where no copy uses it.
        let mut through = vec![0usize; self.d.arc_count()];
        for &i in &candidates {
            for &a in &self.copies[i].arc_ids {
                through[a] += 1;
            }
        }
        let arc = (0..through.len()).filter(|&a| through[a] > 0).min_by_key(|&a| (through[a], a)).expect("candidates have arcs");
        for &i in candidates.iter().filter(|&&i| self.copies[i].contains_arc(arc)) {
            for &a in &self.copies[i].arc_ids {
                self.used[a] = true;
            }
            self.chosen.push(i);
            let result = self.run();
            self.chosen.pop();
            for &a in &self.copies[i].arc_ids {
                self.used[a] = false;
            }
            result?;
        }
        self.blocked[arc] = true;
        let result = self.run();
        self.blocked[arc] = false;
        result
    }
}

/// Maximum number of pairwise arc-disjoint copies of H. D must be unweighted.
pub fn exact_nu(d: &Digraph, h: &Pattern, caps: &Caps) -> Result<OracleResult> {
    if !d.is_unweighted() {
        return Err(Error::WeightedHost("exact packing number"));
    }
    let copies = oracle_copies(d, h, caps)?;
    let initial = greedy_packing(&copies);
    let mut search = NuSearch {
        d,
        copies: &copies,
        used: vec![false; d.arc_count()],
        blocked: vec![false; d.arc_count()],
        chosen: Vec::new(),
        best: initial,
        nodes: 0,
        node_cap: caps.oracle_nodes,
    };
    search.run()?;
    let mut witness = search.best;
    witness.sort_unstable();
    Ok(OracleResult { value: int(witness.len() as i64), witness, node_count: search.nodes, copies })
}

/// Copies accepted in list order whenever they avoid all accepted arcs.
pub fn greedy_packing(copies: &[HCopy]) -> Vec<usize> {
    let mut used = std::collections::HashSet::new();
    let mut accepted = Vec::new();
    for (i, c) in copies.iter().enumerate() {
        if c.arc_ids.iter().all(|a| !used.contains(a)) {
            used.extend(c.arc_ids.iter().copied());
            accepted.push(i);
        }
    }
    accepted
}
