//! Cycle decompositions of K_n, their random orientations, and the
//! arc-count bound for C_k-free digraphs.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::caps::Caps;
use crate::embed::{enumerate_copies, is_h_free, HCopy};
use crate::error::{Error, Result};
use crate::graph::{directed_cycle, Digraph};
use crate::lp::solve_fractional;
use crate::num::{int, Rational};

/// Edge-disjoint k-cycles covering every pair of [n] exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub n: usize,
    pub k: usize,
    /// Each cycle lists its vertices in cyclic order.
    pub cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    /// Checks that consecutive pairs cover each pair of [n] exactly once.
    pub fn validate(&self) -> Result<()> {
        let (n, k) = (self.n, self.k);
        let mut seen = vec![false; n * n];
        for (i, cycle) in self.cycles.iter().enumerate() {
            if cycle.len() != k {
                return Err(Error::InvalidArgument(format!("cycle {i} has {} vertices, expected {k}", cycle.len())));
            }
            let mut distinct = cycle.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() != k || distinct.iter().any(|&v| v >= n) {
                return Err(Error::InvalidArgument(format!("cycle {i} repeats a vertex or leaves [n]")));
            }
            for j in 0..k {
                let (a, b) = (cycle[j], cycle[(j + 1) % k]);
                let (a, b) = (a.min(b), a.max(b));
                if seen[a * n + b] {
                    return Err(Error::InvalidArgument(format!("pair {{{a}, {b}}} is covered twice")));
                }
                seen[a * n + b] = true;
            }
        }
        let covered = seen.iter().filter(|&&s| s).count();
        if covered != n * (n - 1) / 2 {
            return Err(Error::InvalidArgument(format!("{covered} of {} pairs covered", n * (n - 1) / 2)));
        }
        Ok(())
    }
}

struct Decomposer {
    n: usize,
    k: usize,
    used: Vec<bool>,
    cycles: Vec<Vec<usize>>,
    nodes: u64,
    deadline: Instant,
    cap: Duration,
}

impl Decomposer {
    fn pair(&self, a: usize, b: usize) -> usize {
        a.min(b) * self.n + a.max(b)
    }

    fn set(&mut self, a: usize, b: usize, value: bool) {
        let p = self.pair(a, b);
        self.used[p] = value;
    }

    fn free(&self, a: usize, b: usize) -> bool {
        !self.used[self.pair(a, b)]
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && Instant::now() > self.deadline {
            return Err(Error::TimeCapExceeded { what: "searching a cycle decomposition", millis: self.cap.as_millis() as u64 });
        }
        Ok(())
    }

    fn first_uncovered(&self) -> Option<(usize, usize)> {
        (0..self.n).flat_map(|a| (a + 1..self.n).map(move |b| (a, b))).find(|&(a, b)| self.free(a, b))
    }

    fn solve(&mut self) -> Result<bool> {
        self.tick()?;
        let Some((a, b)) = self.first_uncovered() else {
            return Ok(true);
        };
        self.set(a, b, true);
        let mut path = vec![a, b];
        let found = self.extend(&mut path)?;
        self.set(a, b, false);
        Ok(found)
    }

    fn extend(&mut self, path: &mut Vec<usize>) -> Result<bool> {
        self.tick()?;
        let last = *path.last().expect("path starts with an edge");
        let first = path[0];
        if path.len() == self.k {
            if !self.free(last, first) {
                return Ok(false);
            }
            self.set(last, first, true);
            self.cycles.push(path.clone());
            let found = self.solve()?;
            if !found {
                self.cycles.pop();
                self.set(last, first, false);
            }
            return Ok(found);
        }
        for v in 0..self.n {
            if path.contains(&v) || !self.free(last, v) {
                continue;
            }
            self.set(last, v, true);
            path.push(v);
            let found = self.extend(path)?;
            path.pop();
            if found {
                return Ok(true);
            }
            self.set(last, v, false);
        }
        Ok(false)
    }
}

/// Finds a decomposition of K_n into k-cycles by backtracking, always
/// starting the next cycle at the smallest uncovered pair.
pub fn decompose_kn(n: usize, k: usize, time_cap: Duration, caps: &Caps) -> Result<CycleDecomposition> {
    if k < 3 || k > n {
        return Err(Error::InvalidArgument(format!("need 3 <= k <= n, got n={n} k={k}")));
    }
    if n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("n must be odd for every vertex degree to be even, got {n}")));
    }
    if !(n * (n - 1)).is_multiple_of(2 * k) {
        return Err(Error::InvalidArgument(format!("2k must divide n(n-1), got n={n} k={k}")));
    }
    if n > caps.decomposition_n {
        return Err(Error::CapExceeded { what: "decomposition size n", limit: caps.decomposition_n as u64 });
    }
    let mut search = Decomposer {
        n,
        k,
        used: vec![false; n * n],
        cycles: Vec::new(),
        nodes: 0,
        deadline: Instant::now() + time_cap,
        cap: time_cap,
    };
    if !search.solve()? {
        return Err(Error::InvalidArgument(format!("K_{n} has no decomposition into {k}-cycles")));
    }
    let dec = CycleDecomposition { n, k, cycles: search.cycles };
    dec.validate()?;
    Ok(dec)
}

/// Header `n k`, then one cycle per line. `#` starts a comment.
pub fn parse_decomposition(text: &str) -> Result<CycleDecomposition> {
    let mut header = None;
    let mut cycles = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line, message };
        let values: Vec<usize> = content
            .split_whitespace()
            .map(|f| f.parse::<usize>().map_err(|_| err(format!("bad integer {f:?}"))))
            .collect::<Result<_>>()?;
        match header {
            None => {
                if values.len() != 2 {
                    return Err(err("expected header `n k`".into()));
                }
                header = Some((values[0], values[1]));
            }
            Some((_, k)) => {
                if values.len() != k {
                    return Err(err(format!("expected {k} vertices, found {}", values.len())));
                }
                cycles.push(values);
            }
        }
    }
    let (n, k) = header.ok_or(Error::Parse { line: 0, message: "missing header `n k`".into() })?;
    let dec = CycleDecomposition { n, k, cycles };
    dec.validate()?;
    Ok(dec)
}

pub fn serialize_decomposition(dec: &CycleDecomposition) -> String {
    let mut out = format!("{} {}\n", dec.n, dec.k);
    for cycle in &dec.cycles {
        let line: Vec<String> = cycle.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Orients each cycle by a seeded coin flip. Arc `c*k + i` is the i-th arc
/// of cycle `c` in its chosen direction.
pub fn orient_decomposition(dec: &CycleDecomposition, seed: u64) -> Digraph {
    let directed = oriented_cycles(dec, seed);
    let arcs = directed.iter().flat_map(|c| (0..c.len()).map(move |i| (c[i], c[(i + 1) % c.len()], int(1))));
    Digraph::new(dec.n, arcs).expect("decomposition vertices are in range")
}

/// The cycles of `dec` in the directions chosen by `orient_decomposition`.
pub fn oriented_cycles(dec: &CycleDecomposition, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    dec.cycles
        .iter()
        .map(|c| {
            let mut c = c.clone();
            if rng.gen_bool(0.5) {
                c.reverse();
            }
            c
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingCertificate {
    /// Indices into `copies` of the oriented cycles.
    pub copy_indices: Vec<usize>,
    pub copies: Vec<HCopy>,
    /// Exact fractional packing number of the oriented tournament.
    pub nu_star: Rational,
    /// n(n-1)/(2k).
    pub target: Rational,
    /// The copies are disjoint, there are `target` of them, and
    /// `nu_star == target`; so the integral and fractional packing
    /// numbers coincide.
    pub certified: bool,
}

/// Locates the oriented cycles of `dec` among the C_k copies of `t` and
/// compares their count with the exact LP optimum.
pub fn packing_from_decomposition(dec: &CycleDecomposition, t: &Digraph, seed: u64, caps: &Caps) -> Result<PackingCertificate> {
    let h = directed_cycle(dec.k)?;
    let copies = enumerate_copies(t, &h, caps)?;
    let k = dec.k;
    let mut copy_indices = Vec::with_capacity(dec.cycles.len());
    for (c, _) in oriented_cycles(dec, seed).iter().enumerate() {
        let arc_ids: Vec<usize> = (c * k..(c + 1) * k).collect();
        let index = copies
            .iter()
            .position(|copy| copy.arc_ids == arc_ids)
            .ok_or_else(|| Error::InvalidArgument(format!("oriented cycle {c} is not a copy in the given tournament")))?;
        copy_indices.push(index);
    }
    let disjoint = copy_indices
        .iter()
        .enumerate()
        .all(|(x, &i)| copy_indices[x + 1..].iter().all(|&j| copies[i].is_disjoint_from(&copies[j])));
    let nu_star = solve_fractional::<Rational>(t, &copies)?.optimum;
    let target = Rational::new((dec.n * (dec.n - 1)).into(), (2 * k).into());
    let certified = disjoint && int(copy_indices.len() as i64) == target && nu_star == target;
    Ok(PackingCertificate { copy_indices, copies, nu_star, target, certified })
}

/// n(n-1)/2 + (k-2)n/2: the most arcs a C_k-free digraph on n vertices can have.
pub fn ht_bound(n: usize, k: usize) -> Result<Rational> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("bound needs k >= 2, got {k}")));
    }
    Ok(Rational::new((n * n.saturating_sub(1) + (k - 2) * n).into(), 2.into()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HtReport {
    pub ck_free: bool,
    /// Distinct ordered pairs joined by an arc.
    pub arc_count: usize,
    pub bound: Rational,
    /// False only for a C_k-free digraph above the bound.
    pub consistent: bool,
}

/// Compares the arc count of D with [`ht_bound`] when D is C_k-free.
/// Parallel arcs count once.
pub fn check_ht(d: &Digraph, k: usize, removed: &[usize], caps: &Caps) -> Result<HtReport> {
    let bound = ht_bound(d.vertex_count(), k)?;
    let ck_free = is_h_free(d, &directed_cycle(k)?, removed, caps)?;
    let (rest, _) = d.without_arcs(removed)?;
    let arc_count = rest.distinct_pair_count();
    let consistent = !ck_free || int(arc_count as i64) <= bound;
    Ok(HtReport { ck_free, arc_count, bound, consistent })
}
