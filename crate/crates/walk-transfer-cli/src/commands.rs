//! Subcommand handlers. Every command prints a single JSON document on
//! stdout (or a CSV trace on request) and returns its exit code.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use walk_transfer::pgst::{
    cycle_pgst_verdict, derive_phase_pattern, integer_relation_certificate,
    circulant_support_eigenvalues, detect_circulant, sweep_max_fidelity, Automorphism,
    CycleQuery, RelationSearchParams, SweepParams,
};
use walk_transfer::quotient::{
    intertwiner_check, quotient_graph, verify_equitable, EquitableCheck,
};
use walk_transfer::spectral::SpectralDecomposition;
use walk_transfer::states::parse_state_spec;
use walk_transfer::transfer::{check_fr, check_pst};
use walk_transfer::{HamiltonianKind, WeightedGraph};

use crate::{parse_time, CliError, Command, OutputFormat};

pub fn dispatch(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Graph { input } => {
            let g = input.build()?;
            print_json(&json!({
                "n": g.n(),
                "edge_count": g.edge_count(),
                "simple": g.is_simple(),
                "graph": serde_json::from_str::<serde_json::Value>(&g.to_json()).unwrap(),
            }));
            Ok(0)
        }
        Command::Spectrum { input, kind } => {
            let g = input.build()?;
            let dec = decompose(&g, kind.into())?;
            let mults: Vec<usize> = (0..dec.eigenvalues().len()).map(|j| dec.multiplicity(j)).collect();
            print_json(&json!({
                "kind": format!("{:?}", HamiltonianKind::from(kind)),
                "eigenvalues": dec.eigenvalues(),
                "multiplicities": mults,
                "scale": dec.scale(),
                "ill_separated": dec.ill_separated(),
            }));
            Ok(0)
        }
        Command::Evolve { input, kind, t, u } => {
            let g = input.build()?;
            let t = parse_time(&t)?;
            let dec = decompose(&g, kind.into())?;
            match u {
                Some(spec) => {
                    let u = parse_state_spec(&spec, g.n())?;
                    let evolved = dec.evolve(&u, t);
                    let amps: Vec<_> =
                        evolved.iter().map(|c| json!({"re": c.re, "im": c.im})).collect();
                    print_json(&json!({"t": t, "state": amps}));
                }
                None => {
                    let m = dec.transition(t);
                    let rows: Vec<Vec<_>> = (0..g.n())
                        .map(|i| {
                            (0..g.n())
                                .map(|j| json!({"re": m[(i, j)].re, "im": m[(i, j)].im}))
                                .collect()
                        })
                        .collect();
                    print_json(&json!({"t": t, "matrix": rows}));
                }
            }
            Ok(0)
        }
        Command::CheckPst { input, kind, u, v, tau, tol } => {
            let g = input.build()?;
            let dec = decompose(&g, kind.into())?;
            let u = parse_state_spec(&u, g.n())?;
            let v = parse_state_spec(&v, g.n())?;
            let w = check_pst(&dec, &u, &v, parse_time(&tau)?, tol)?;
            print_json(&w);
            Ok(if w.holds { 0 } else { 1 })
        }
        Command::CheckFr { input, kind, u, v, tau, tol } => {
            let g = input.build()?;
            let dec = decompose(&g, kind.into())?;
            let u = parse_state_spec(&u, g.n())?;
            let v = parse_state_spec(&v, g.n())?;
            let w = check_fr(&dec, &u, &v, parse_time(&tau)?, tol)?;
            print_json(&w);
            Ok(if w.holds { 0 } else { 1 })
        }
        Command::Periodic { input, kind, u, tau, tol } => {
            let g = input.build()?;
            let dec = decompose(&g, kind.into())?;
            let u = parse_state_spec(&u, g.n())?;
            let w = dec.is_periodic(&u, parse_time(&tau)?, tol);
            print_json(&w);
            Ok(if w.holds { 0 } else { 1 })
        }
        Command::SearchPgst { input, kind, u, v, t_max, samples, format } => {
            let g = input.build()?;
            let dec = decompose(&g, kind.into())?;
            let u = parse_state_spec(&u, g.n())?;
            let v = parse_state_spec(&v, g.n())?;
            let params = SweepParams { t_max, samples, ..Default::default() };
            let trace = sweep_max_fidelity(&dec, &u, &v, &params)?;
            match format {
                OutputFormat::Json => print_json(&json!({
                    "t_max": t_max,
                    "grid_step": trace.grid_step,
                    "samples": trace.times.len(),
                    "best_time": trace.best_time,
                    "best_fidelity": trace.best_fidelity,
                })),
                OutputFormat::Csv => {
                    // Header plus one row per grid sample, 17 significant digits.
                    let mut out = String::from("t,fidelity\n");
                    for (t, f) in trace.times.iter().zip(&trace.fidelities) {
                        out.push_str(&format!("{:.16e},{:.16e}\n", t, f));
                    }
                    print!("{out}");
                }
            }
            Ok(0)
        }
        Command::CertifyNoPgst { input, u, v, modulus, bound, l1 } => {
            let g = input.build()?;
            let report = certify_no_pgst(&g, &u, &v, modulus, bound, l1)?;
            let found = report.certificate.is_some();
            print_json(&report);
            Ok(if found { 0 } else { 1 })
        }
        Command::CycleVerdict { n, query, complement } => {
            let verdict = cycle_pgst_verdict(n, CycleQuery::parse(&query)?, complement)?;
            let mut doc = serde_json::to_value(&verdict).unwrap();
            doc.as_object_mut()
                .unwrap()
                .insert("verdict".into(), json!(if verdict.admits { "yes" } else { "no" }));
            print_json(&doc);
            Ok(0)
        }
        Command::Quotient { input, cells, times, seed } => {
            let g = input.build()?;
            let cells = parse_cells(&cells)?;
            match verify_equitable(&g, &cells)? {
                EquitableCheck::Equitable(part) => {
                    let q = quotient_graph(&g, &part)?;
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let sample: Vec<f64> =
                        (0..times).map(|_| rng.random_range(0.0..20.0)).collect();
                    let report = intertwiner_check(&g, &part, &sample, 1e-8)?;
                    print_json(&json!({
                        "equitable": true,
                        "cells": part.cells(),
                        "quotient": serde_json::from_str::<serde_json::Value>(&q.to_json())
                            .unwrap(),
                        "intertwining": report,
                    }));
                    Ok(if report.holds { 0 } else { 1 })
                }
                EquitableCheck::Violation { vertex, cell } => {
                    print_json(&json!({
                        "equitable": false,
                        "violation": {"vertex": vertex, "cell": cell},
                    }));
                    Ok(1)
                }
            }
        }
        Command::VerifySuite { battery, seed } => crate::suite::run(&battery, seed),
    }
}

fn decompose(g: &WeightedGraph, kind: HamiltonianKind) -> Result<SpectralDecomposition, CliError> {
    Ok(SpectralDecomposition::decompose(&g.hamiltonian(kind)?, None)?)
}

fn parse_cells(spec: &str) -> Result<Vec<Vec<usize>>, CliError> {
    spec.split(';')
        .map(|cell| {
            cell.split(',')
                .map(|v| {
                    v.trim()
                        .parse::<usize>()
                        .map_err(|_| CliError::usage(format!("bad cell vertex `{v}`")))
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct CertifyReport {
    n: usize,
    connection_set: Vec<usize>,
    modulus: u32,
    shift: u32,
    support_classes: usize,
    certificate: Option<walk_transfer::pgst::NoPgstCertificate>,
}

/// Derive the phase pattern of (u, v) under the rotation by n/m on a
/// circulant graph and run the exhaustive relation search over its support.
fn certify_no_pgst(
    g: &WeightedGraph,
    u: &str,
    v: &str,
    modulus: u32,
    bound: i64,
    l1: i64,
) -> Result<CertifyReport, CliError> {
    let n = g.n();
    let conn = detect_circulant(g).ok_or_else(|| {
        CliError::usage("certify-no-pgst needs an unweighted, potential-free circulant".into())
    })?;
    if modulus == 0 || n as u32 % modulus != 0 {
        return Err(CliError::usage(format!(
            "modulus {modulus} must divide the number of vertices {n}"
        )));
    }
    let shift = n as u32 / modulus;
    let u = parse_state_spec(u, n)?;
    let v = parse_state_spec(v, n)?;
    let image: Vec<usize> = (0..n).map(|j| (j + shift as usize) % n).collect();
    let rotation = Automorphism::new(g, image)?;
    let dec = SpectralDecomposition::decompose(
        &g.hamiltonian(HamiltonianKind::Adjacency)?,
        None,
    )?;
    let pattern = derive_phase_pattern(&dec, &rotation, &u, &v, modulus, None)?;
    let support = circulant_support_eigenvalues(n as u32, &conn, &pattern, shift)?;
    let params = RelationSearchParams { coeff_bound: bound, l1_bound: l1, ..Default::default() };
    let certificate = integer_relation_certificate(&support, &pattern, &params)?;
    Ok(CertifyReport {
        n,
        connection_set: conn,
        modulus,
        shift,
        support_classes: support.len(),
        certificate,
    })
}

fn print_json<T: Serialize>(doc: &T) {
    println!("{}", serde_json::to_string_pretty(doc).expect("serialization cannot fail"));
}
