use std::time::Duration;

use arc_cover::cover::{approximate_cover, undirected_kk_cover, CoverOptions, CoverResult};
use arc_cover::embed::enumerate_copies;
use arc_cover::exact::{exact_nu, exact_tau, greedy_packing};
use arc_cover::extremal::{
    check_ht, decompose_kn, orient_decomposition, packing_from_decomposition, serialize_decomposition, CycleDecomposition,
};
use arc_cover::fparam::{b_param, cycle_length, disc, f_of, f_search, gamma, FValueReport, SearchOptions};
use arc_cover::graph::{random_digraph, random_orientation, random_tournament};
use arc_cover::lp::{check_complementary_slackness, solve_fractional};
use arc_cover::num::{int, rational_to_f64, Rational};
use arc_cover::{Caps, Digraph, Error, Pattern, Result, Scalar};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::inputs;
use crate::report::{float, pattern, rational, scalar, InputRecord};
use crate::{Cli, Command};

macro_rules! dispatch {
    ($cli:expr, $f:ident, $($arg:expr),*) => {
        if $cli.float { $f::<f64>($($arg),*) } else { $f::<Rational>($($arg),*) }
    };
}

pub struct Outcome {
    pub result: Value,
    pub inputs: Vec<InputRecord>,
    /// False when a certificate check failed; the report is still printed.
    pub passed: bool,
}

pub fn execute(cli: &Cli, caps: &Caps) -> Result<Outcome> {
    match &cli.command {
        Command::Copies { host, h, list } => copies(host, h, *list, cli.seed, caps),
        Command::Lp { host, h } => dispatch!(cli, lp, host, h, cli.seed, caps),
        Command::Fparam { h, l, rmax, catalog_max } => fparam(h, l.as_deref(), *rmax, *catalog_max, caps),
        Command::Cover { host, h, l, batch_peel } => dispatch!(cli, cover, host, h, l, *batch_peel, cli.seed, caps),
        Command::KkCover { graph, k, multigraph } => dispatch!(cli, kk_cover, graph, *k, *multigraph, caps),
        Command::Exact { host, h } => exact(host, h, cli.seed, caps),
        Command::Construct { n, k, time_cap_ms, out, tau } => {
            construct(*n, *k, Duration::from_millis(*time_cap_ms), out.as_deref(), *tau, cli.seed, caps)
        }
        Command::ExperimentRatio { family, h, l, trials } => {
            dispatch!(cli, experiment_ratio, family, h, l, *trials, cli.seed, caps)
        }
        Command::ExperimentOrientation { graph, samples, multigraph } => {
            experiment_orientation(graph, *samples, *multigraph, cli.seed, caps)
        }
    }
}

fn copies(host: &str, h: &str, list: bool, seed: u64, caps: &Caps) -> Result<Outcome> {
    let (d, host_rec) = inputs::host(host, seed)?;
    let (h, h_rec) = inputs::pattern(h, "h")?;
    let found = enumerate_copies(&d, &h, caps)?;
    let mut result = json!({
        "host_vertices": d.vertex_count(),
        "host_arcs": d.arc_count(),
        "pattern": pattern(&h),
        "copy_count": found.len(),
    });
    if list {
        result["copies"] = found.iter().map(|c| json!({ "arcs": c.arc_ids, "vertices": c.vertices, "witness": c.witness })).collect();
    }
    Ok(Outcome { result, inputs: vec![host_rec, h_rec], passed: true })
}

fn lp<S: Scalar>(host: &str, h: &str, seed: u64, caps: &Caps) -> Result<Outcome> {
    let (d, host_rec) = inputs::host(host, seed)?;
    let (h, h_rec) = inputs::pattern(h, "h")?;
    let found = enumerate_copies(&d, &h, caps)?;
    let sol = solve_fractional::<S>(&d, &found)?;
    let check = sol.verify(&d, &found);
    let slack = check_complementary_slackness(&d, &found, &sol);
    let passed = check.ok() && slack.passed();
    let result = json!({
        "copy_count": found.len(),
        "nu_star": scalar(&sol.optimum),
        "tau_star": scalar(&sol.cover_value),
        "gap": scalar(&sol.gap),
        "cover": sol.cover.iter().map(scalar).collect::<Vec<_>>(),
        "packing": sol.packing.iter().map(scalar).collect::<Vec<_>>(),
        "pivots": sol.pivots,
        "verification": {
            "cover_feasible": check.cover_feasible,
            "packing_feasible": check.packing_feasible,
            "gap_ok": check.gap_ok,
            "min_copy_coverage": scalar(&check.min_copy_coverage),
            "max_overload": scalar(&check.max_overload),
        },
        "complementary_slackness": {
            "passed": slack.passed(),
            "violations": slack.violation_count(),
            "copy_violations": slack.copy_violations,
        },
    });
    Ok(Outcome { result, inputs: vec![host_rec, h_rec], passed })
}

pub fn f_report_json(rep: &FValueReport) -> Value {
    json!({
        "f_upper": rational(&rep.f_upper),
        "f_lower": rational(&rep.f_lower),
        "attained": rep.attained,
        "improvable_by_larger_r": rep.improvable_by_larger_r(),
        "best_l": rep.best_l.as_ref().map(pattern),
        "best_l_name": rep.best_l_name,
        "disc": rep.disc,
        "f_of_l": rational(&rep.f_of_l),
        "gamma": rep.gamma,
        "b": rep.b,
        "one_way_bipartite": rep.one_way_bipartite,
        "certificate": rep.certificate.as_ref().map(|c| json!({
            "value": rational(&c.value),
            "attained": c.attained,
            "reason": c.reason,
        })),
        "candidates": rep.candidates,
        "skipped": rep.skipped,
    })
}

fn fparam(h: &str, l: Option<&str>, rmax: usize, catalog_max: usize, caps: &Caps) -> Result<Outcome> {
    let (h, h_rec) = inputs::pattern(h, "h")?;
    let mut records = vec![h_rec];
    let search = f_search(&h, SearchOptions { r_max: rmax, catalog_max }, caps)?;
    let mut result = json!({ "pattern": pattern(&h), "search": f_report_json(&search) });
    let mut passed = search.f_lower <= search.f_upper && search.f_upper <= int(search.gamma.min(search.b) as i64);
    if let Some(spec) = l {
        let (l, l_rec) = inputs::pattern(spec, "l")?;
        records.push(l_rec);
        let d = disc(&h, &l, caps)?;
        let f = f_of(&h, &l, caps)?;
        passed &= d <= h.arc_count();
        result["given_l"] = json!({
            "pattern": pattern(&l),
            "disc": d,
            "f": rational(&f),
            "alpha": (d < h.arc_count()).then(|| rational(&Rational::new(1.into(), (h.arc_count() - d).into()))),
        });
    }
    Ok(Outcome { result, inputs: records, passed })
}

fn cover_json<S: Scalar>(res: &CoverResult<S>) -> Value {
    let bound = &res.ratio_bound * res.nu_star_original.to_rational();
    json!({
        "copy_count": res.copy_count,
        "f_of_l": rational(&res.ratio_bound),
        "disc": res.alpha.disc,
        "alpha": rational(&res.alpha.alpha),
        "nu_star": scalar(&res.nu_star_original),
        "nu_star_residual": scalar(&res.nu_star_residual),
        "cover_arcs": res.cover_arcs,
        "cover_weight": rational(&res.cover_weight),
        "weight_bound": if S::EXACT { rational(&bound) } else { float(rational_to_f64(&bound)) },
        "peel_trace": res.peel_trace.iter().map(|s| json!({ "arc": s.arc, "value": scalar(&s.value) })).collect::<Vec<_>>(),
        "partition_arcs": res.partition_arcs,
        "assignment": res.assignment,
        "placement_order": res.placement_order,
        "expectations": res.expectations.iter().map(rational).collect::<Vec<_>>(),
        "lp_solves": res.lp_solves,
        "h_free_certified": res.h_free_certified,
        "bound_holds": res.bound_holds,
        "batch_peel": res.batch_peel,
        "certified": res.certified(),
    })
}

fn cover<S: Scalar>(host: &str, h: &str, l: &str, batch_peel: bool, seed: u64, caps: &Caps) -> Result<Outcome> {
    let (d, host_rec) = inputs::host(host, seed)?;
    let (h, h_rec) = inputs::pattern(h, "h")?;
    let (l, l_rec) = inputs::pattern(l, "l")?;
    let res = approximate_cover::<S>(&d, &h, &l, caps, CoverOptions { batch_peel })?;
    let mut result = cover_json(&res);
    let mut passed = res.h_free_certified && (batch_peel || res.bound_holds);
    if let Some(k) = cycle_length(&h) {
        let ht = check_ht(&d, k, &res.cover_arcs, caps)?;
        passed &= ht.consistent;
        result["ht_check"] = json!({
            "k": k,
            "ck_free": ht.ck_free,
            "arc_count": ht.arc_count,
            "bound": rational(&ht.bound),
            "consistent": ht.consistent,
        });
    }
    Ok(Outcome { result, inputs: vec![host_rec, h_rec, l_rec], passed })
}

fn kk_cover<S: Scalar>(graph: &str, k: usize, multigraph: bool, caps: &Caps) -> Result<Outcome> {
    let (g, rec) = inputs::undirected(graph, multigraph)?;
    let res = undirected_kk_cover::<S>(&g, k, caps)?;
    let mut result = cover_json(&res);
    result["cover_edges"] = json!(res.cover_arcs);
    Ok(Outcome { result, inputs: vec![rec], passed: res.certified() })
}

fn oracle_json(d: &Digraph, h: &Pattern, caps: &Caps) -> Result<Value> {
    let tau = exact_tau(d, h, caps)?;
    let mut out = json!({
        "copy_count": tau.copies.len(),
        "tau": rational(&tau.value),
        "tau_witness": tau.witness,
        "tau_nodes": tau.node_count,
    });
    if d.is_unweighted() {
        let nu = exact_nu(d, h, caps)?;
        out["nu"] = rational(&nu.value);
        out["nu_witness"] = json!(nu.witness);
        out["nu_nodes"] = json!(nu.node_count);
        out["greedy_packing"] = json!(greedy_packing(&nu.copies).len());
    }
    Ok(out)
}

fn exact(host: &str, h: &str, seed: u64, caps: &Caps) -> Result<Outcome> {
    let (d, host_rec) = inputs::host(host, seed)?;
    let (h, h_rec) = inputs::pattern(h, "h")?;
    let mut result = oracle_json(&d, &h, caps)?;
    let copies = enumerate_copies(&d, &h, caps)?;
    let nu_star = solve_fractional::<Rational>(&d, &copies)?.optimum;
    result["nu_star"] = rational(&nu_star);
    Ok(Outcome { result, inputs: vec![host_rec, h_rec], passed: true })
}

fn construct(
    n: usize,
    k: usize,
    time_cap: Duration,
    out: Option<&std::path::Path>,
    tau: bool,
    seed: u64,
    caps: &Caps,
) -> Result<Outcome> {
    let dec = decompose_kn(n, k, time_cap, caps)?;
    if let Some(path) = out {
        std::fs::write(path, serialize_decomposition(&dec))
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
    }
    let t = orient_decomposition(&dec, seed);
    let cert = packing_from_decomposition(&dec, &t, seed, caps)?;
    let outdeg = t.out_degrees();
    let regular = outdeg.iter().all(|&d| 2 * d + 1 == n);
    let mut result = json!({
        "n": n,
        "k": k,
        "cycles": dec.cycles,
        "out_degrees": outdeg,
        "regular": regular,
        "packing": cert.copy_indices,
        "copy_count": cert.copies.len(),
        "nu_star": rational(&cert.nu_star),
        "target": rational(&cert.target),
        "packing_certified": cert.certified,
    });
    if tau {
        let h = arc_cover::graph::directed_cycle(k)?;
        result["exact"] = oracle_json(&t, &h, caps)?;
        result["quarter_n_squared"] = rational(&Rational::new((n * n).into(), 4.into()));
    }
    Ok(Outcome { result, inputs: Vec::new(), passed: regular && cert.certified })
}

enum Family {
    RandomDigraph(usize, f64),
    RandomTournament(usize),
    Constructed(CycleDecomposition),
}

fn family(spec: &str, caps: &Caps) -> Result<Family> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::InvalidArgument(format!("bad number {s:?} in {spec:?}")));
    match parts.as_slice() {
        ["random-digraph", n, p] => {
            let p: f64 = p.parse().map_err(|_| Error::InvalidArgument(format!("bad probability in {spec:?}")))?;
            Ok(Family::RandomDigraph(num(n)?, p))
        }
        ["random-tournament", n] => Ok(Family::RandomTournament(num(n)?)),
        ["constructed", n, k] => Ok(Family::Constructed(decompose_kn(num(n)?, num(k)?, Duration::from_secs(60), caps)?)),
        _ => Err(Error::InvalidArgument(format!(
            "unknown family {spec:?}; use random-digraph:n:p, random-tournament:n or constructed:n:k"
        ))),
    }
}

fn ratio_or_null(num: &Rational, den: &Rational) -> Value {
    if *den > int(0) {
        rational(&(num / den))
    } else {
        Value::Null
    }
}

/// Trial row, certificate flag, ratio to ν*, ratio to τ.
type TrialRow = (Value, bool, Option<f64>, Option<f64>);

fn experiment_ratio<S: Scalar>(spec: &str, h: &str, l: &str, trials: usize, seed: u64, caps: &Caps) -> Result<Outcome> {
    let fam = family(spec, caps)?;
    let (h, h_rec) = inputs::pattern(h, "h")?;
    let (l, l_rec) = inputs::pattern(l, "l")?;
    let f = f_of(&h, &l, caps)?;
    let rows: Vec<Result<TrialRow>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let trial_seed = seed.wrapping_add(i as u64);
            let d = match &fam {
                Family::RandomDigraph(n, p) => random_digraph(*n, *p, trial_seed)?,
                Family::RandomTournament(n) => random_tournament(*n, trial_seed),
                Family::Constructed(dec) => orient_decomposition(dec, trial_seed),
            };
            let res = approximate_cover::<S>(&d, &h, &l, caps, CoverOptions::default())?;
            let nu = res.nu_star_original.to_rational();
            let tau = match exact_tau(&d, &h, caps) {
                Ok(t) => Some(t.value),
                Err(e) if e.is_resource_cap() => None,
                Err(e) => return Err(e),
            };
            let tau_ok = tau.as_ref().is_none_or(|t| res.cover_weight <= &f * t || *t == int(0));
            let ok = res.certified() && tau_ok;
            let r_nu = (nu > int(0)).then(|| rational_to_f64(&(&res.cover_weight / &nu)));
            let r_tau = tau.as_ref().filter(|t| **t > int(0)).map(|t| rational_to_f64(&(&res.cover_weight / t)));
            let mut row = json!({
                "trial": i,
                "seed": trial_seed,
                "host_arcs": d.arc_count(),
                "copy_count": res.copy_count,
                "nu_star": scalar(&res.nu_star_original),
                "cover_weight": rational(&res.cover_weight),
                "exact_tau": tau.as_ref().map(rational),
                "ratio_to_nu_star": ratio_or_null(&res.cover_weight, &nu),
                "ratio_to_tau": tau.as_ref().map_or(Value::Null, |t| ratio_or_null(&res.cover_weight, t)),
                "certified": res.certified(),
                "within_f_of_tau": tau_ok,
            });
            if let Family::Constructed(dec) = &fam {
                row["target_nu_star"] = rational(&Rational::new((dec.n * (dec.n - 1)).into(), (2 * dec.k).into()));
            }
            Ok((row, ok, r_nu, r_tau))
        })
        .collect();
    let mut table = Vec::with_capacity(trials);
    let mut all_ok = true;
    let mut nu_ratios = Vec::new();
    let mut tau_ratios = Vec::new();
    for row in rows {
        let (value, ok, r_nu, r_tau) = row?;
        all_ok &= ok;
        nu_ratios.extend(r_nu);
        tau_ratios.extend(r_tau);
        table.push(value);
    }
    let summary = |xs: &[f64]| {
        if xs.is_empty() {
            return Value::Null;
        }
        let max = xs.iter().cloned().fold(f64::MIN, f64::max);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        json!({ "max": float(max), "mean": float(mean), "count": xs.len() })
    };
    let result = json!({
        "family": spec,
        "f_of_l": rational(&f),
        "trials": table,
        "ratio_to_nu_star": summary(&nu_ratios),
        "ratio_to_tau": summary(&tau_ratios),
        "all_certified": all_ok,
    });
    Ok(Outcome { result, inputs: vec![h_rec, l_rec], passed: all_ok })
}

fn experiment_orientation(graph: &str, samples: usize, multigraph: bool, seed: u64, caps: &Caps) -> Result<Outcome> {
    let (g, rec) = inputs::undirected(graph, multigraph)?;
    let rows: Vec<Result<(Value, bool, f64, f64)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let sample_seed = seed.wrapping_add(i as u64);
            let h = random_orientation(&g, sample_seed)?;
            let e = h.arc_count();
            let gm = gamma(&h, caps)?;
            let b = b_param(&h, caps)?;
            let ok = 2 * gm >= e && gm <= e;
            let frac = |x: usize| if e == 0 { 1.0 } else { x as f64 / e as f64 };
            let row = json!({
                "sample": i,
                "seed": sample_seed,
                "arcs": e,
                "gamma": gm,
                "b": b,
                "gamma_ratio": float(frac(gm)),
                "min_ratio": float(frac(gm.min(b))),
                "within_bounds": ok,
            });
            Ok((row, ok, frac(gm), frac(gm.min(b))))
        })
        .collect();
    let mut table = Vec::new();
    let mut ok_all = true;
    let (mut g_sum, mut m_sum) = (0.0, 0.0);
    let (mut g_min, mut g_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for row in rows {
        let (value, ok, gr, mr) = row?;
        ok_all &= ok;
        g_sum += gr;
        m_sum += mr;
        g_min = g_min.min(gr);
        g_max = g_max.max(gr);
        table.push(value);
    }
    let count = table.len().max(1) as f64;
    let result = json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "samples": table,
        "gamma_ratio": { "min": float(g_min), "max": float(g_max), "mean": float(g_sum / count) },
        "min_ratio_mean": float(m_sum / count),
        "bounds_hold": ok_all,
    });
    Ok(Outcome { result, inputs: vec![rec], passed: ok_all })
}
