use std::fs;

use ekr_core::baranyai::{scan_intervals, scan_intervals_exhaustive, shift_preserves_parts};
use ekr_core::count::binomial;
use ekr_core::ekr::{kneser_complement_bridge, max_intersecting, EkrReport};
use ekr_core::katona::{q_bruteforce_with, q_formula, verify_double_count_with};
use ekr_core::kneser::certificate_from;
use ekr_core::transposition::{
    adjacent_center_mismatches, center_map_with, composition_identity, lemma_tally, lemma_tally_exhaustive,
    lemma_tally_over, reflect_swap, transpose_adjacent, LemmaTally,
};
use ekr_core::{
    chi, cyclic_order, enumerate_matchings, phi, rooted_order, shift, star_family, verify_ham_power, Edge,
    Execution, HamPowerCertificate, KneserGraph, Params, Permutation, SearchBudget, SearchStatus,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::output::Outcome;
use crate::{Budget, Cli, Command, Instance, Sampling};

type Result<T> = std::result::Result<T, String>;

fn core<T>(r: ekr_core::Result<T>) -> Result<T> {
    r.map_err(|e| e.to_string())
}

fn params(inst: Instance) -> Result<Params> {
    core(Params::new(inst.n, inst.r))
}

fn budget(b: Budget) -> Result<SearchBudget> {
    core(
        SearchBudget { max_nodes: b.max_nodes, max_seconds: b.max_seconds, enumerate_all_maximum: b.enumerate_max }
            .validate(),
    )
}

fn sigma_or_identity(n: usize, sigma: &Option<Permutation>) -> Result<Permutation> {
    match sigma {
        Some(s) if s.len() != 2 * n => Err(format!("--sigma has length {}, expected 2n = {}", s.len(), 2 * n)),
        Some(s) => Ok(s.clone()),
        None => Ok(Permutation::identity(2 * n)),
    }
}

/// How a command covers the symmetric group.
enum Coverage {
    Single(Permutation),
    Exhaustive,
    Sampled(Vec<Permutation>),
}

impl Coverage {
    fn choose(n: usize, sigma: &Option<Permutation>, sampling: Sampling, cli: &Cli) -> Result<Self> {
        if sigma.is_some() {
            return Ok(Coverage::Single(sigma_or_identity(n, sigma)?));
        }
        if 2 * n <= cli.limit_perms {
            return Ok(Coverage::Exhaustive);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        Ok(Coverage::Sampled((0..sampling.samples).map(|_| Permutation::random(2 * n, &mut rng)).collect()))
    }

    fn label(&self) -> &'static str {
        match self {
            Coverage::Single(_) => "single",
            Coverage::Exhaustive => "exhaustive",
            Coverage::Sampled(_) => "sampled",
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    let exec = Execution::default();
    match &cli.command {
        Command::Construct { n, sigma, c } => construct(*n, sigma, *c),
        Command::VerifyGoodness { n, sigma, k, sampling } => goodness(cli, *n, sigma, *k, *sampling, exec),
        Command::Count { inst } => count(cli, *inst, exec),
        Command::DoubleCount { inst, edge } => double_count(cli, *inst, *edge, exec),
        Command::EkrSearch { inst, budget: b } => ekr_search(*inst, *b),
        Command::EkrBridge { inst, budget: b } => ekr_bridge(*inst, *b),
        Command::CenterMap { inst, edge } => centers(cli, *inst, *edge, exec),
        Command::LemmaIdentities { n, sigma, j, sampling } => lemmas(cli, *n, sigma, *j, *sampling, exec),
        Command::KneserCert { n, sigma, k } => kneser_cert(*n, sigma, *k),
        Command::KneserVerify { cert, n, sigma, k } => kneser_verify(cert.as_deref(), *n, sigma, *k),
        Command::Sweep { max_n, budget: b } => sweep(*max_n, *b),
    }
}

fn construct(n: Option<usize>, sigma: &Option<Permutation>, c: Option<usize>) -> Result<Outcome> {
    let n = match (n, sigma) {
        (Some(n), _) => n,
        (None, Some(s)) => s.len() / 2,
        (None, None) => return Err("construct needs --n or --sigma".into()),
    };
    let sigma = sigma_or_identity(n, sigma)?;
    let order = core(rooted_order(&sigma))?;
    let psi = core(cyclic_order(&sigma))?;
    let partition = order.is_partition();
    let shifted = c
        .map(|c| -> Result<_> {
            let pi_c = core(shift(&sigma, c))?;
            Ok(json!({ "c": c, "shifted": pi_c, "parts_match": core(shift_preserves_parts(&sigma, c))? }))
        })
        .transpose()?;
    let shift_ok = shifted.as_ref().is_none_or(|s| s["parts_match"] == json!(true));
    let report = json!({
        "n": n,
        "sigma": sigma,
        "root": order.root,
        "parts": order.parts,
        "psi": psi.sequence,
        "partition": partition,
        "shift": shifted,
    });
    let mut out = Outcome::new(report).check("parts partition the edges of K_2n", partition);
    if c.is_some() {
        out = out.check("shifted parts match", shift_ok);
    }
    Ok(out)
}

fn goodness(cli: &Cli, n: usize, sigma: &Option<Permutation>, k: Option<usize>, sampling: Sampling, exec: Execution) -> Result<Outcome> {
    if n < 2 {
        return Err("verify-goodness needs n >= 2".into());
    }
    let len = k.unwrap_or(n - 1);
    let coverage = Coverage::choose(n, sigma, sampling, cli)?;
    let report = match &coverage {
        Coverage::Single(s) => core(scan_intervals(n, std::slice::from_ref(s), len))?,
        Coverage::Exhaustive => core(scan_intervals_exhaustive(n, len, cli.limit_perms, exec))?,
        Coverage::Sampled(v) => core(scan_intervals(n, v, len))?,
    };
    let passed = report.passed;
    let mut value = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    value["coverage"] = json!(coverage.label());
    let mut out = Outcome::new(value);
    // only lengths up to n - 1 are claimed to be matchings
    if len < n {
        out = out.check(format!("every {len}-interval is a matching"), passed);
    }
    Ok(out)
}

#[derive(Serialize)]
struct CountReport {
    n: usize,
    r: usize,
    chi: u128,
    phi: u128,
    q_formula: Option<u128>,
    q_oracle: Option<u128>,
}

fn count(cli: &Cli, inst: Instance, exec: Execution) -> Result<Outcome> {
    let p = params(inst)?;
    let (chi_v, phi_v) = (core(chi(p))?, core(phi(p))?);
    let proper = inst.r < inst.n;
    let q_formula_v = if proper { Some(core(q_formula(p))?.formula_value) } else { None };
    let q_oracle = if proper && 2 * inst.n <= cli.limit_perms {
        let a = enumerate_matchings(p).into_iter().next().expect("r <= n");
        core(q_bruteforce_with(&a, p, cli.limit_perms, exec))?.oracle_value
    } else {
        None
    };
    let edges = core(binomial(2 * inst.n as u64, 2))?;
    let mut out = Outcome::new(CountReport { n: inst.n, r: inst.r, chi: chi_v, phi: phi_v, q_formula: q_formula_v, q_oracle })
        .check("phi * C(2n,2) = r * chi", phi_v * edges == inst.r as u128 * chi_v);
    if inst.n <= 6 {
        out = out.check("chi equals enumeration", enumerate_matchings(p).len() as u128 == chi_v);
    }
    if let (Some(f), Some(o)) = (q_formula_v, q_oracle) {
        out = out.check("q formula equals brute force", f == o);
    }
    Ok(out)
}

fn double_count(cli: &Cli, inst: Instance, edge: Option<Edge>, exec: Execution) -> Result<Outcome> {
    let p = core(params(inst)?.require_proper())?;
    let center = match edge {
        Some(e) => e,
        None => core(Edge::new(1, 2))?,
    };
    let family = core(star_family(p, center))?;
    let report = core(verify_double_count_with(&family, p, cli.limit_perms, exec))?;
    let mut out = Outcome::new(&report).check("q_A |A| <= r (2n)!", report.holds);
    if let Some(agree) = report.sums_agree {
        out = out
            .check("sum of traces equals sum of q_A", agree)
            .check("every trace has at most r members", report.max_trace.is_some_and(|m| m <= inst.r));
    }
    Ok(out)
}

fn ekr_summary(rep: &EkrReport) -> serde_json::Value {
    let centers: Vec<Option<Edge>> = rep.witnesses.iter().map(|w| w.center).collect();
    json!({
        "n": rep.n,
        "r": rep.r,
        "max": rep.max_size,
        "phi": rep.phi_value,
        "maximum_families": rep.maximum_families,
        "all_stars": rep.all_maximum_are_stars,
        "equals_star_set": rep.equals_star_set,
        "upper_bound": rep.upper_bound,
        "status": rep.status,
        "nodes": rep.nodes,
        "centers": centers,
    })
}

fn ekr_checks(mut out: Outcome, rep: &EkrReport) -> Outcome {
    out.budget_exhausted = rep.status == SearchStatus::BudgetExhausted;
    if rep.status == SearchStatus::Proven && rep.r < rep.n {
        out = out.check("maximum equals phi(n, r)", rep.max_size as u128 == rep.phi_value);
        if let Some(all) = rep.all_maximum_are_stars {
            out = out
                .check("every maximum family is a star", all)
                .check("maximum families are exactly the stars", rep.equals_star_set == Some(true));
        }
    }
    out
}

fn ekr_search(inst: Instance, b: Budget) -> Result<Outcome> {
    let rep = core(max_intersecting(params(inst)?, budget(b)?))?;
    Ok(ekr_checks(Outcome::new(ekr_summary(&rep)), &rep))
}

fn ekr_bridge(inst: Instance, b: Budget) -> Result<Outcome> {
    let rep = core(kneser_complement_bridge(params(inst)?, budget(b)?))?;
    let report = json!({
        "n": rep.n,
        "r": rep.r,
        "graph_vertices": rep.graph_vertices,
        "graph_edges": rep.graph_edges,
        "independent_sets": rep.independent_sets,
        "matchings": rep.matchings,
        "bijection": rep.bijection,
        "max_vertex_star": rep.max_vertex_star,
        "theorem": ekr_summary(&rep.theorem),
        "strictly_ekr": rep.strictly_ekr,
    });
    let out = Outcome::new(report).check("independent r-sets correspond to r-matchings", rep.bijection);
    let mut out = ekr_checks(out, &rep.theorem);
    if !out.budget_exhausted {
        out = out.check("strictly EKR", rep.strictly_ekr);
    }
    Ok(out)
}

fn centers(cli: &Cli, inst: Instance, edge: Option<Edge>, exec: Execution) -> Result<Outcome> {
    let p = core(params(inst)?.require_proper())?;
    let center = match edge {
        Some(e) => e,
        None => core(Edge::new(2 * inst.n - 1, 2 * inst.n))?,
    };
    let family = core(star_family(p, center))?;
    let (map, report) = core(center_map_with(&family, p, cli.limit_perms, exec))?;
    let mismatches = core(adjacent_center_mismatches(&map, exec))?;
    let mut value = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    value["adjacent_mismatches"] = json!(mismatches);
    Ok(Outcome::new(value)
        .check("every permutation is saturated", report.saturated == report.permutations)
        .check(format!("every permutation is centered at {center}"), report.constant_center == Some(center))
        .check("adjacent transpositions keep the center", mismatches == 0))
}

fn lemmas(cli: &Cli, n: usize, sigma: &Option<Permutation>, j: Option<usize>, sampling: Sampling, exec: Execution) -> Result<Outcome> {
    if n < 2 {
        return Err("lemma-identities needs n >= 2".into());
    }
    let coverage = Coverage::choose(n, sigma, sampling, cli)?;
    let tally: LemmaTally = match &coverage {
        Coverage::Single(s) => core(lemma_tally(s))?,
        Coverage::Exhaustive => core(lemma_tally_exhaustive(n, cli.limit_perms, exec))?,
        Coverage::Sampled(v) => core(lemma_tally_over(v))?,
    };
    let mut value = serde_json::to_value(tally).map_err(|e| e.to_string())?;
    value["n"] = json!(n);
    value["coverage"] = json!(coverage.label());
    if let (Coverage::Single(s), Some(j)) = (&coverage, j) {
        value["t_j"] = json!(core(transpose_adjacent(s, j)).ok());
        value["r_j"] = json!(core(reflect_swap(s, j)).ok());
        value["composition_identity"] = json!(core(composition_identity(s, j)).ok());
    }
    Ok(Outcome::new(value)
        .check("T_j and R_j are involutions", tally.involution_failures == 0)
        .check("T_{n-1} = R_{n-1}", tally.middle_swap_failures == 0)
        .check("R_j preserves the last part", tally.last_part_failures == 0)
        .check("composition identity", tally.composition_failures == 0))
}

fn kneser_cert(n: usize, sigma: &Option<Permutation>, k: Option<usize>) -> Result<Outcome> {
    if n < 3 {
        return Err("kneser-cert needs n >= 3".into());
    }
    let sigma = sigma_or_identity(n, sigma)?;
    let k = k.unwrap_or(n - 2);
    let cert = core(certificate_from(&sigma, k))?;
    let mut out = Outcome::new(&cert);
    if k <= n - 2 {
        let g = core(KneserGraph::new(2 * n))?;
        out = out.check(format!("power {k} of a Hamiltonian cycle"), core(verify_ham_power(&g, &cert))?);
    }
    Ok(out)
}

fn kneser_verify(path: Option<&std::path::Path>, n: Option<usize>, sigma: &Option<Permutation>, k: Option<usize>) -> Result<Outcome> {
    let cert: HamPowerCertificate = match (path, n) {
        (Some(p), _) => {
            let text = fs::read_to_string(p).map_err(|e| format!("reading {}: {e}", p.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("parsing {}: {e}", p.display()))?
        }
        (None, Some(n)) => {
            let sigma = sigma_or_identity(n, sigma)?;
            core(certificate_from(&sigma, k.unwrap_or(n.saturating_sub(2))))?
        }
        (None, None) => return Err("kneser-verify needs --cert or --n".into()),
    };
    let g = core(KneserGraph::new(cert.m))?;
    let valid = core(verify_ham_power(&g, &cert))?;
    let report = json!({ "m": cert.m, "k": cert.k, "vertices": g.vertex_count(), "valid": valid });
    Ok(Outcome::new(report).check(format!("power {} of a Hamiltonian cycle", cert.k), valid))
}

fn sweep(max_n: usize, b: Budget) -> Result<Outcome> {
    let b = budget(b)?;
    let mut rows = Vec::new();
    let mut out_checks = Vec::new();
    let mut exhausted = false;
    for n in 2..=max_n {
        for r in 1..n {
            let p = core(Params::new(n, r))?;
            let rep = core(max_intersecting(p, b))?;
            exhausted |= rep.status == SearchStatus::BudgetExhausted;
            if rep.status == SearchStatus::Proven {
                out_checks.push((format!("max = phi at (n, r) = ({n}, {r})"), rep.max_size as u128 == rep.phi_value));
            }
            rows.push(json!({
                "n": n,
                "r": r,
                "chi": core(chi(p))?,
                "phi": rep.phi_value,
                "q_formula": core(q_formula(p))?.formula_value,
                "max": rep.max_size,
                "status": rep.status,
            }));
        }
    }
    let mut out = Outcome::new(&rows);
    out.rows = Some(rows);
    out.budget_exhausted = exhausted;
    for (name, ok) in out_checks {
        out = out.check(name, ok);
    }
    Ok(out)
}
