//! Single-run subcommand bodies. Each returns the deterministic `outputs`
//! value and whether its certificates passed.

use serde_json::{json, Value};

use spansign::bounds::{
    constants, degree_rate_lower, degree_rate_upper, embedding_lower_bound, path_system_target,
    solve_triangle_program,
};
use spansign::embedder::embed_unbalanced;
use spansign::graph::score;
use spansign::oracle::{
    best_hamiltonian, best_triangle_factor, mean_matches_density, spectrum, SpectrumSummary,
    DEFAULT_HAMILTONIAN_CAP, DEFAULT_SPECTRUM_CAP, DEFAULT_TRIANGLE_CAP,
};
use spansign::pathsearch::{
    assemble_hamiltonian, certify_path_fixed_point, cycle_score, discrepancy_hamiltonian,
    path_local_search,
};
use spansign::trianglesearch::{
    certify_fixed_point, triangle_local_search, TriangleFactor, TriangleProfile,
};
use spansign::{Pattern, SignedCompleteGraph};

use crate::CliError;

fn input_err(e: spansign::Error) -> CliError {
    CliError::Input(e.to_string())
}

pub fn run_embed(host: &SignedCompleteGraph, pattern: &Pattern) -> Result<(Value, bool), CliError> {
    let emb = embed_unbalanced(host, pattern).map_err(input_err)?;
    let s = score(host, pattern, &emb).map_err(input_err)?;
    let bound = embedding_lower_bound(
        host.n(),
        host.density(),
        pattern.max_degree().max(1),
        pattern.edge_count(),
    )
    .map_err(input_err)?;
    let needed = (bound.value - 1e-9).ceil().max(0.0) as usize;
    let pass = s.plus >= needed;
    let outputs = json!({
        "n": host.n(),
        "d": host.density(),
        "pattern_edges": pattern.edge_count(),
        "max_degree": pattern.max_degree(),
        "m_plus": s.plus,
        "m_minus": s.minus,
        "signed_sum": s.signed_sum,
        "bound_value": bound.value,
        "bound_case": bound.case_taken,
        "certificate_pass": pass,
        "embedding": emb.as_slice(),
    });
    Ok((outputs, pass))
}

pub fn run_paths(host: &SignedCompleteGraph, empty_start: bool) -> Result<(Value, bool), CliError> {
    let start = if empty_start {
        Some(spansign::pathsearch::PathSystem::empty(host.n()))
    } else {
        None
    };
    let system = path_local_search(host, start.as_ref()).map_err(input_err)?;
    let stats = system.stats();
    let cert = certify_path_fixed_point(host, &system);
    let target = path_system_target(host.n());
    let target_applies = host.balanced() && host.n() >= 10;
    let target_met = !target_applies || system.edge_count() as f64 >= target - 1e-9;
    let cycle = assemble_hamiltonian(host, &system).map_err(input_err)?;
    let (cycle_plus, cycle_signed) = cycle_score(host, &cycle);
    let pass = cert.all_ok() && target_met && cycle_plus >= system.edge_count();
    let outputs = json!({
        "n": host.n(),
        "balanced": host.balanced(),
        "m_h": system.edge_count(),
        "k": stats.k,
        "stats": stats,
        "paths": system.paths(),
        "certificates": cert,
        "target": target,
        "target_applies": target_applies,
        "cycle": cycle,
        "cycle_plus": cycle_plus,
        "cycle_signed": cycle_signed,
        "certificate_pass": pass,
    });
    Ok((outputs, pass))
}

pub fn run_triangles(
    host: &SignedCompleteGraph,
    shuffle_seed: Option<u64>,
) -> Result<(Value, bool), CliError> {
    let start = match shuffle_seed {
        Some(seed) => TriangleFactor::shuffled(host.n(), seed).map_err(input_err)?,
        None => TriangleFactor::consecutive(host.n()).map_err(input_err)?,
    };
    let fixed = triangle_local_search(host, &start).map_err(input_err)?;
    let cert = certify_fixed_point(host, &fixed).map_err(input_err)?;
    let profile = TriangleProfile::new(host, &fixed);
    let pass = cert.all_ok();
    let outputs = json!({
        "n": host.n(),
        "m_plus": fixed.plus_count(host),
        "triangles": fixed.triangles(),
        "profile_counts": profile.counts,
        "profile_fractions": profile.t.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "certificate": cert,
        "certificate_pass": pass,
    });
    Ok((outputs, pass))
}

pub fn run_spectrum(
    host: &SignedCompleteGraph,
    pattern: &Pattern,
    cap: Option<usize>,
) -> Result<(Value, bool), CliError> {
    let spec = spectrum(host, pattern, cap.unwrap_or(DEFAULT_SPECTRUM_CAP)).map_err(input_err)?;
    let identity = mean_matches_density(host, pattern, &spec);
    let gap_ok = spec.max_gap() <= pattern.max_degree() + pattern.min_degree();
    let pass = identity && gap_ok;
    let outputs = json!({
        "n": host.n(),
        "spectrum": SpectrumSummary::from(&spec),
        "identity_exact": identity,
        "gap_within_degrees": gap_ok,
        "certificate_pass": pass,
    });
    Ok((outputs, pass))
}

pub fn run_exact_hamiltonian(
    host: &SignedCompleteGraph,
    cap: Option<usize>,
) -> Result<(Value, bool), CliError> {
    let (cycle, max_plus, max_abs) =
        best_hamiltonian(host, cap.unwrap_or(DEFAULT_HAMILTONIAN_CAP)).map_err(input_err)?;
    let outputs = json!({
        "n": host.n(),
        "cycle": cycle,
        "max_plus": max_plus,
        "max_abs_signed": max_abs,
        "certificate_pass": true,
    });
    Ok((outputs, true))
}

pub fn run_exact_triangles(
    host: &SignedCompleteGraph,
    cap: Option<usize>,
) -> Result<(Value, bool), CliError> {
    let (factor, max_plus) =
        best_triangle_factor(host, cap.unwrap_or(DEFAULT_TRIANGLE_CAP)).map_err(input_err)?;
    let outputs = json!({
        "n": host.n(),
        "factor": factor,
        "max_plus": max_plus,
        "certificate_pass": true,
    });
    Ok((outputs, true))
}

pub fn run_bounds(
    n: Option<usize>,
    d: Option<f64>,
    delta: Option<usize>,
    m: Option<usize>,
) -> Result<(Value, bool), CliError> {
    let program = solve_triangle_program().map_err(input_err)?;
    let mut outputs = json!({
        "constants": constants(),
        "triangle_program": program,
    });
    if let (Some(n), Some(d), Some(delta), Some(m)) = (n, d, delta, m) {
        let report = embedding_lower_bound(n, d, delta, m).map_err(input_err)?;
        outputs["embedding_bound"] = serde_json::to_value(&report).expect("report serializes");
        outputs["value"] = json!(report.value);
    }
    if let Some(n) = n {
        outputs["path_target"] = json!(path_system_target(n));
    }
    if let Some(delta) = delta {
        outputs["degree_rate_lower"] = json!(degree_rate_lower(delta));
        outputs["degree_rate_upper"] = json!(degree_rate_upper(delta));
    }
    Ok((outputs, true))
}

pub fn run_discrepancy(host: &SignedCompleteGraph) -> Result<(Value, bool), CliError> {
    let report = discrepancy_hamiltonian(host).map_err(input_err)?;
    let oriented = if report.negated {
        -report.signed_sum
    } else {
        report.signed_sum
    };
    let pass = oriented - report.patch_delta >= report.chain_bound() && report.patch_delta >= -4;
    let chain = report.chain_bound();
    let outputs = json!({
        "n": host.n(),
        "report": report,
        "chain_bound": chain,
        "certificate_pass": pass,
    });
    Ok((outputs, pass))
}
