//! Command-line front end: theta evaluation, energies, moment machinery,
//! interpolant construction, certificate suites, optimization, and CSV
//! report flattening.
//!
//! Exit codes: 0 on success, 1 when some check report fails, 2 on usage
//! errors.  Output is JSON (to stdout or `--out`), with every artifact
//! embedding a run manifest.  Outputs are byte-identical for identical
//! `(argv, seed, version)`; wall-clock timestamps are only recorded when
//! the `PLP_TIMESTAMP` environment variable is set.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use plp_core::energy::{
    average_energy, lp_bound, periodic_energy, rescale_factor, GaussianPotential,
};
use plp_core::interpolants::{build_g4, build_g6, build_g_z, B1Choice};
use plp_core::lattice::Lattice;
use plp_core::moments::{index_set, node_set, Family};
use plp_core::optimizer::{compare_candidates, minimize, OptimizerConfig};
use plp_core::theta::tilde_theta_deriv;
use plp_core::verify::{
    run_certificate, soundness_grid_4pt, soundness_grid_6pt, CertificateId, CheckReport,
    ALL_CERTIFICATES,
};

#[derive(Parser)]
#[command(name = "plp", version, about = "LP lower bounds for periodic Gaussian energies")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the normalized theta function θ̃(c; t) or a derivative.
    Theta {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 0)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Energy of a coset-family candidate configuration.
    Energy {
        /// Family name: m2, 2m2, 3m2, 6m2.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Moment-machinery queries.
    Moments {
        #[command(subcommand)]
        cmd: MomentsCmd,
    },
    /// Interpolant construction.
    Interpolant {
        #[command(subcommand)]
        cmd: InterpolantCmd,
    },
    /// Run the certificate suites.
    Verify(VerifyArgs),
    /// Gradient-descent energy minimization.
    Optimize {
        /// Lattice name (e.g. L, A2).
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        max_iters: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Also compare against the matching coset candidate when one exists.
        #[arg(long)]
        compare: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flatten verify reports into CSV.
    Report {
        /// Input JSON report files.
        #[arg(long, value_delimiter = ',')]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum MomentsCmd {
    /// Interpolation nodes of a family.
    Nodes {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Moment index set, enumerated within a coordinate bound.
    Index {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 12)]
        bound: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum InterpolantCmd {
    /// Build a magic interpolant and report coefficients and residuals.
    Build {
        /// Case: 4pt, 6pt, or z.
        #[arg(long)]
        case: String,
        #[arg(long)]
        a: f64,
        /// Point-count parameter for the z case (n = 2m).
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[command(subcommand)]
    cmd: Option<VerifyCmd>,
    /// Case: 4pt, 6pt, or all.
    #[arg(long, default_value = "all")]
    case: String,
    /// Comma-separated sharpness grid.
    #[arg(long, value_delimiter = ',', default_value = "0.3,2,9.6,21,60")]
    a_grid: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Run a single certificate by name.
    Certificate {
        #[arg(long)]
        id: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct Manifest {
    command: String,
    parameters: Vec<String>,
    tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    input_hashes: BTreeMap<String, String>,
}

impl Manifest {
    fn new(argv: &[String]) -> Self {
        // Timestamps break byte-identical reruns; only record them on
        // explicit request.
        let timestamp = std::env::var("PLP_TIMESTAMP").ok().map(|_| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        // The output destination is not part of the computation, and
        // recording it would break byte-identical reruns to fresh paths.
        let mut parameters = Vec::new();
        let mut skip_next = false;
        for arg in argv.iter().skip(2) {
            if skip_next {
                skip_next = false;
                continue;
            }
            if arg == "--out" {
                skip_next = true;
                continue;
            }
            if arg.starts_with("--out=") {
                continue;
            }
            parameters.push(arg.clone());
        }
        Manifest {
            command: argv.get(1).cloned().unwrap_or_default(),
            parameters,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
            input_hashes: BTreeMap::new(),
        }
    }
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    manifest: Manifest,
    data: T,
}

fn emit<T: Serialize>(
    manifest: Manifest,
    data: T,
    out: &Option<PathBuf>,
) -> Result<(), String> {
    let envelope = Envelope { manifest, data };
    let text = serde_json::to_string_pretty(&envelope).map_err(|e| e.to_string())?;
    match out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| e.to_string()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

/// Expand `--config file.json` into `--key=value` tokens so a config file
/// may supply any flag; explicit command-line flags win by coming later.
fn expand_config(argv: Vec<String>) -> Result<Vec<String>, String> {
    let mut out = Vec::with_capacity(argv.len());
    let mut iter = argv.into_iter();
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            let path = iter
                .next()
                .ok_or_else(|| "--config requires a file path".to_string())?;
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read config {path}: {e}"))?;
            let json: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| format!("bad config JSON: {e}"))?;
            let obj = json
                .as_object()
                .ok_or_else(|| "config must be a JSON object".to_string())?;
            for (key, value) in obj {
                let rendered = match value {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Array(items) => items
                        .iter()
                        .map(|v| v.to_string().trim_matches('"').to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                    other => other.to_string(),
                };
                out.push(format!("--{}={rendered}", key.replace('_', "-")));
            }
        } else {
            out.push(arg);
        }
    }
    Ok(out)
}

fn family_from(name: &str) -> Result<Family, String> {
    Family::from_name(name).ok_or_else(|| format!("unknown family: {name}"))
}

fn default_samples(id: CertificateId) -> Vec<f64> {
    let (lo, hi) = id.a_range();
    if hi.is_infinite() {
        vec![lo.max(0.3), lo.max(0.3) + 8.0, lo.max(0.3) + 30.0]
    } else if lo == 0.0 {
        vec![0.5, 3.0, 0.95 * hi]
    } else {
        vec![lo, 0.5 * (lo + hi), hi]
    }
}

#[derive(Serialize)]
struct VerifyReport {
    case: String,
    a_grid: Vec<f64>,
    checks: Vec<CheckReport>,
    passed: bool,
}

fn run_verify(case: &str, a_grid: &[f64]) -> Result<VerifyReport, String> {
    let ids: Vec<CertificateId> = ALL_CERTIFICATES
        .iter()
        .copied()
        .filter(|id| match case {
            "4pt" => id.name().starts_with("4pt"),
            "6pt" => id.name().starts_with("6pt"),
            "all" => true,
            other => panic!("unknown case {other}"),
        })
        .collect();
    if ids.is_empty() {
        return Err(format!("unknown case: {case}"));
    }
    let mut checks = Vec::new();
    for id in ids {
        let (lo, hi) = id.a_range();
        let samples: Vec<f64> = a_grid
            .iter()
            .copied()
            .filter(|&a| a >= lo - 1e-12 && a <= hi)
            .collect();
        let samples = if samples.is_empty() {
            default_samples(id)
        } else {
            samples
        };
        checks.push(run_certificate(id, &samples).map_err(|e| e.to_string())?);
    }
    for &a in a_grid {
        if case != "6pt" {
            checks.push(soundness_grid_4pt(a).map_err(|e| e.to_string())?);
        }
        if case != "4pt" {
            checks.push(soundness_grid_6pt(a).map_err(|e| e.to_string())?);
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        case: case.to_string(),
        a_grid: a_grid.to_vec(),
        checks,
        passed,
    })
}

/// Extract the `a` annotation from a per-sharpness check name like
/// `4pt-grid-domination(a=21)`.
fn a_of_check(name: &str) -> String {
    name.split("(a=")
        .nth(1)
        .and_then(|rest| rest.split([',', ')']).next())
        .unwrap_or("")
        .to_string()
}

fn run_report(inputs: &[PathBuf]) -> Result<(String, bool, BTreeMap<String, String>), String> {
    let mut rows: Vec<(String, String, String, bool, f64, usize)> = Vec::new();
    let mut hashes = BTreeMap::new();
    let mut all_passed = true;
    for path in inputs {
        let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
        hashes.insert(
            path.display().to_string(),
            format!("{:x}", Sha256::digest(&bytes)),
        );
        let json: serde_json::Value =
            serde_json::from_slice(&bytes).map_err(|e| format!("{}: {e}", path.display()))?;
        let data = json.get("data").unwrap_or(&json);
        let case = data
            .get("case")
            .and_then(|v| v.as_str())
            .unwrap_or("")
            .to_string();
        let checks = data
            .get("checks")
            .and_then(|v| v.as_array())
            .ok_or_else(|| format!("{}: no checks array", path.display()))?;
        for check in checks {
            // Non-finite margins serialize to JSON null, so the fields are
            // pulled out individually rather than deserialized as a struct.
            let name = check
                .get("name")
                .and_then(|v| v.as_str())
                .ok_or_else(|| format!("{}: check without a name", path.display()))?
                .to_string();
            let passed = check.get("passed").and_then(|v| v.as_bool()).unwrap_or(false);
            let margin = check
                .get("min_margin")
                .and_then(|v| v.as_f64())
                .unwrap_or(f64::INFINITY);
            let points = check
                .get("points_evaluated")
                .and_then(|v| v.as_u64())
                .unwrap_or(0) as usize;
            all_passed &= passed;
            rows.push((case.clone(), a_of_check(&name), name, passed, margin, points));
        }
    }
    rows.sort_by(|x, y| (&x.0, &x.1, &x.2).cmp(&(&y.0, &y.1, &y.2)));
    let mut csv = String::from("case,a,check,passed,min_margin,points_evaluated\n");
    for (case, a, check, passed, margin, points) in rows {
        // 17 significant digits round-trips f64 exactly.
        csv.push_str(&format!("{case},{a},{check},{passed},{margin:.17e},{points}\n"));
    }
    Ok((csv, all_passed, hashes))
}

fn run(argv: Vec<String>) -> Result<i32, String> {
    let expanded = expand_config(argv.clone())?;
    let cli = Cli::parse_from(&expanded);
    if let Ok(threads) = std::env::var("PLP_THREADS") {
        let n: usize = threads
            .parse()
            .map_err(|_| "PLP_THREADS must be an integer".to_string())?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .ok();
    }
    let manifest = Manifest::new(&expanded);
    match cli.cmd {
        Cmd::Theta { c, t, order, out } => {
            let v = tilde_theta_deriv(c, t, order, 1e-14).map_err(|e| e.to_string())?;
            #[derive(Serialize)]
            struct ThetaOut {
                c: f64,
                t: f64,
                order: usize,
                value: f64,
                certified_tail: f64,
            }
            emit(
                manifest,
                ThetaOut {
                    c,
                    t,
                    order,
                    value: v.value,
                    certified_tail: v.tail,
                },
                &out,
            )?;
            Ok(0)
        }
        Cmd::Energy { family, m, a, out } => {
            let fam = family_from(&family)?;
            let omega = fam.configuration(m).map_err(|e| e.to_string())?;
            let pot = GaussianPotential::new(a, omega.ambient.clone());
            let energy = periodic_energy(&omega, &pot).map_err(|e| e.to_string())?;
            let avg = average_energy(&omega, a).map_err(|e| e.to_string())?;
            // The certified interpolants cover the 4-point hexagonal and
            // 6-point rectangular candidates.
            let bound = match (fam, m) {
                (Family::M2, 2) => Some(
                    lp_bound(
                        &build_g4(a, B1Choice::Certified)
                            .map_err(|e| e.to_string())?
                            .expansion(),
                        4,
                    )
                    .map_err(|e| e.to_string())?
                        / rescale_factor(a),
                ),
                (Family::SixM2, 1) => Some(
                    lp_bound(
                        &build_g6(a).map_err(|e| e.to_string())?.expansion(),
                        6,
                    )
                    .map_err(|e| e.to_string())?
                        / rescale_factor(a),
                ),
                _ => None,
            };
            #[derive(Serialize)]
            struct EnergyOut {
                family: String,
                m: u32,
                n: usize,
                a: f64,
                energy: f64,
                average_energy: f64,
                #[serde(skip_serializing_if = "Option::is_none")]
                lp_bound: Option<f64>,
            }
            emit(
                manifest,
                EnergyOut {
                    family: fam.name().to_string(),
                    m,
                    n: omega.len(),
                    a,
                    energy,
                    average_energy: avg,
                    lp_bound: bound,
                },
                &out,
            )?;
            Ok(0)
        }
        Cmd::Moments { cmd } => match cmd {
            MomentsCmd::Nodes { family, m, out } => {
                let fam = family_from(&family)?;
                let nodes = node_set(fam, m).map_err(|e| e.to_string())?;
                emit(manifest, nodes, &out)?;
                Ok(0)
            }
            MomentsCmd::Index {
                family,
                m,
                bound,
                out,
            } => {
                let fam = family_from(&family)?;
                let set = index_set(fam, m).map_err(|e| e.to_string())?;
                let vectors: Vec<(i64, i64)> = set
                    .enumerate(bound)
                    .into_iter()
                    .map(|v| (v.k1, v.k2))
                    .collect();
                #[derive(Serialize)]
                struct IndexOut {
                    family: String,
                    m: u32,
                    bound: i64,
                    vectors: Vec<(i64, i64)>,
                }
                emit(
                    manifest,
                    IndexOut {
                        family: fam.name().to_string(),
                        m,
                        bound,
                        vectors,
                    },
                    &out,
                )?;
                Ok(0)
            }
        },
        Cmd::Interpolant { cmd } => match cmd {
            InterpolantCmd::Build { case, a, m, out } => {
                #[derive(Serialize)]
                struct BuildOut {
                    case: String,
                    a: f64,
                    coefficients: serde_json::Value,
                    node_residuals: Vec<((f64, f64), f64)>,
                    lp_bound: f64,
                }
                let two_pt_residuals = |phi: plp_core::sympoly::PhiLattice,
                                        nodes: &[(f64, f64)],
                                        geval: &dyn Fn(f64, f64) -> f64|
                 -> Result<Vec<((f64, f64), f64)>, String> {
                    let mut rows = Vec::new();
                    for &(t1, t2) in nodes {
                        let f = plp_core::energy::tilde_f_scaled(t1, t2, a, phi)
                            .map_err(|e| e.to_string())?;
                        rows.push(((t1, t2), f - geval(t1, t2)));
                    }
                    Ok(rows)
                };
                let (coeffs, residuals, bound) = match case.as_str() {
                    "4pt" => {
                        let g = build_g4(a, B1Choice::Certified).map_err(|e| e.to_string())?;
                        let bound = lp_bound(&g.expansion(), 4).map_err(|e| e.to_string())?
                            / rescale_factor(a);
                        let residuals = two_pt_residuals(
                            plp_core::sympoly::PhiLattice::A2,
                            &[(-1.0, 1.0)],
                            &|t1, t2| g.eval(t1, t2),
                        )?;
                        (
                            serde_json::to_value(&g).map_err(|e| e.to_string())?,
                            residuals,
                            bound,
                        )
                    }
                    "6pt" => {
                        let g = build_g6(a).map_err(|e| e.to_string())?;
                        let bound = lp_bound(&g.expansion(), 6).map_err(|e| e.to_string())?
                            / rescale_factor(a);
                        let residuals = two_pt_residuals(
                            plp_core::sympoly::PhiLattice::L,
                            &[(-1.0, -1.0), (1.0, -0.5), (-1.0, 0.5)],
                            &|t1, t2| g.eval(t1, t2),
                        )?;
                        (
                            serde_json::to_value(&g).map_err(|e| e.to_string())?,
                            residuals,
                            bound,
                        )
                    }
                    "z" => {
                        let g = build_g_z(m, a).map_err(|e| e.to_string())?;
                        let coeffs = serde_json::json!({
                            "m": g.m,
                            "nodes": g.nodes,
                            "poly_coeffs": g.poly.coeffs,
                            "chebyshev_t_coeffs": g.t_coeffs,
                        });
                        let residuals = g
                            .nodes
                            .iter()
                            .map(|&t| {
                                let f = plp_core::interpolants::ZInterpolant::target(a, t, 0);
                                ((t, 0.0), f - g.poly.eval(t))
                            })
                            .collect();
                        (coeffs, residuals, g.lp_bound())
                    }
                    other => return Err(format!("unknown case: {other}")),
                };
                emit(
                    manifest,
                    BuildOut {
                        case,
                        a,
                        coefficients: coeffs,
                        node_residuals: residuals,
                        lp_bound: bound,
                    },
                    &out,
                )?;
                Ok(0)
            }
        },
        Cmd::Verify(args) => {
            if let Some(VerifyCmd::Certificate { id, out }) = args.cmd {
                let cid = CertificateId::from_name(&id)
                    .ok_or_else(|| format!("unknown certificate: {id}"))?;
                let report =
                    run_certificate(cid, &default_samples(cid)).map_err(|e| e.to_string())?;
                let code = if report.passed { 0 } else { 1 };
                emit(manifest, report, &out)?;
                return Ok(code);
            }
            let report = run_verify(&args.case, &args.a_grid)?;
            let code = if report.passed { 0 } else { 1 };
            emit(manifest, report, &args.out)?;
            Ok(code)
        }
        Cmd::Optimize {
            lattice,
            n,
            a,
            restarts,
            max_iters,
            seed,
            compare,
            out,
        } => {
            let lat = Lattice::from_name(&lattice).map_err(|e| e.to_string())?;
            let mut cfg = OptimizerConfig::new(n, lat.clone(), a, seed);
            cfg.restarts = restarts;
            cfg.max_iters = max_iters;
            let result = minimize(&cfg).map_err(|e| e.to_string())?;
            let comparison = if compare {
                let candidate = match (lattice.to_ascii_lowercase().as_str(), n) {
                    ("a2", 4) => Some(("hexagonal-4".to_string(), Family::M2.configuration(2))),
                    ("a2", 3) => {
                        Some(("hexagonal-3".to_string(), Family::ThreeM2.configuration(1)))
                    }
                    ("l", 6) => Some(("rect-6".to_string(), Family::SixM2.configuration(1))),
                    ("l", 8) => Some(("rect-8".to_string(), Family::TwoM2.configuration(2))),
                    ("l", 2) => Some(("rect-2".to_string(), Family::TwoM2.configuration(1))),
                    _ => None,
                };
                match candidate {
                    Some((label, omega)) => {
                        let omega = omega.map_err(|e| e.to_string())?;
                        Some(
                            compare_candidates(n, lat, a, &[(label, omega)], seed)
                                .map_err(|e| e.to_string())?,
                        )
                    }
                    None => None,
                }
            } else {
                None
            };
            #[derive(Serialize)]
            struct OptimizeOut {
                n: usize,
                lattice: String,
                a: f64,
                restarts: usize,
                seed: u64,
                best_energy: f64,
                best_config: Vec<Vec<f64>>,
                restart_energies: Vec<f64>,
                converged: Vec<bool>,
                #[serde(skip_serializing_if = "Option::is_none")]
                comparison: Option<Vec<plp_core::optimizer::CandidateRow>>,
            }
            emit(
                manifest,
                OptimizeOut {
                    n,
                    lattice,
                    a,
                    restarts,
                    seed,
                    best_energy: result.best_energy,
                    best_config: result
                        .best_config
                        .points
                        .iter()
                        .map(|p| p.iter().copied().collect())
                        .collect(),
                    restart_energies: result.restart_energies,
                    converged: result.converged,
                    comparison,
                },
                &out,
            )?;
            Ok(0)
        }
        Cmd::Report { inputs, out } => {
            let (csv, all_passed, hashes) = run_report(&inputs)?;
            let mut manifest = manifest;
            manifest.input_hashes = hashes;
            match &out {
                Some(path) => std::fs::write(path, &csv).map_err(|e| e.to_string())?,
                None => print!("{csv}"),
            }
            // The manifest goes to stderr so the CSV stream stays clean.
            eprintln!(
                "{}",
                serde_json::to_string(&manifest).map_err(|e| e.to_string())?
            );
            Ok(if all_passed { 0 } else { 1 })
        }
    }
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    match run(argv) {
        Ok(code) => std::process::exit(code),
        Err(message) => {
            eprintln!("error: {message}");
            std::process::exit(2);
        }
    }
}
