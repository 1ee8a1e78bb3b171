//! command-line front end: loads matroid, realization, and family JSON
//! files, runs the verification pipelines, prints a human summary, and
//! optionally writes the full JSON report. exit code 0 exactly when every
//! verdict in the run passed.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use tropfiber_core::arrangement::Realization;
use tropfiber_core::complex::{order_complex, wedge_check, ComplexError};
use tropfiber_core::counting::{
    complement_count, milnor_count, mu_action_divisibility, stratum_table, verify_initial_at,
    DEFAULT_BUDGET,
};
use tropfiber_core::family::{family_counts, FamilySpec, SampleOutcome};
use tropfiber_core::fan::{face_closure_check, fan_report, fine_fan};
use tropfiber_core::mask::elems;
use tropfiber_core::matroid::{Matroid, Weight};
use tropfiber_core::rat::parse_rat;

#[derive(Parser)]
#[command(name = "tropfiber", version, about = "exact verification pipelines for matroid fans and fiber point counts")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// primes used by the counting commands
    #[arg(long, global = true, value_delimiter = ',', default_values_t = [5u64, 7])]
    primes: Vec<u64>,
    /// enumeration budget for brute-force counts
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// worker threads for counting pools; 0 keeps the default
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// recorded in every report so runs can be reproduced exactly
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// write the full JSON report to this path
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// bases, circuits, flats, and characteristic data of a matroid file
    MatroidInfo { input: PathBuf },
    /// order-complex homology against the sphere-wedge prediction
    BergmanBetti { input: PathBuf },
    /// initial-form solution sets vs degenerate fibers, per cone or at --weight
    VerifyInitial {
        input: PathBuf,
        /// comma-separated rational weight, e.g. "2,-1,-1"
        #[arg(long)]
        weight: Option<String>,
    },
    /// per-cone stratum tables with both counting routes
    Strata { input: PathBuf },
    /// fiber and complement counts with divisibility verdicts
    Count { input: PathBuf },
    /// per-parameter family counts and the constancy verdict
    Invariance { input: PathBuf },
    /// cones, rays, cone bases, and unimodularity of the fine fan
    FanReport { input: PathBuf },
}

#[derive(Serialize)]
struct Config {
    primes: Vec<u64>,
    budget: u64,
    threads: usize,
    seed: u64,
}

fn load<T: serde::de::DeserializeOwned>(path: &PathBuf, what: &str) -> Result<T> {
    let src = std::fs::read_to_string(path)
        .with_context(|| format!("reading {what} file {}", path.display()))?;
    serde_json::from_str(&src).with_context(|| format!("parsing {what} file {}", path.display()))
}

fn parse_weight(src: &str, n: usize) -> Result<Weight> {
    let coords = src
        .split(',')
        .map(|s| parse_rat(s).map_err(anyhow::Error::msg))
        .collect::<Result<Vec<_>>>()?;
    anyhow::ensure!(coords.len() == n, "weight has {} coordinates, need {n}", coords.len());
    Ok(Weight(coords))
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .context("building the worker pool")?;
    }
    let config = Config {
        primes: cli.primes.clone(),
        budget: cli.budget,
        threads: cli.threads,
        seed: cli.seed,
    };

    let (name, input, passed, payload) = match &cli.cmd {
        Cmd::MatroidInfo { input } => ("matroid-info", input, true, matroid_info(input)?),
        Cmd::BergmanBetti { input } => {
            let (ok, payload) = bergman_betti(input)?;
            ("bergman-betti", input, ok, payload)
        }
        Cmd::VerifyInitial { input, weight } => {
            let (ok, payload) = verify_initial(input, weight.as_deref(), &config)?;
            ("verify-initial", input, ok, payload)
        }
        Cmd::Strata { input } => {
            let (ok, payload) = strata(input, &config)?;
            ("strata", input, ok, payload)
        }
        Cmd::Count { input } => {
            let (ok, payload) = count(input, &config)?;
            ("count", input, ok, payload)
        }
        Cmd::Invariance { input } => {
            let (ok, payload) = invariance(input, &config)?;
            ("invariance", input, ok, payload)
        }
        Cmd::FanReport { input } => {
            let (ok, payload) = fan(input)?;
            ("fan-report", input, ok, payload)
        }
    };

    let report = json!({
        "command": name,
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "input": input.display().to_string(),
        "passed": passed,
        "report": payload,
    });
    if let Some(path) = &cli.json_out {
        std::fs::write(path, serde_json::to_string_pretty(&report)?)
            .with_context(|| format!("writing report to {}", path.display()))?;
        println!("report written to {}", path.display());
    }
    println!("verdict: {}", if passed { "PASS" } else { "FAIL" });
    if !passed {
        std::process::exit(1);
    }
    Ok(())
}

fn matroid_info(input: &PathBuf) -> Result<serde_json::Value> {
    let m: Matroid = load(input, "matroid")?;
    let chi = m.characteristic_polynomial();
    let circuits: Vec<Vec<usize>> = m.circuits().into_iter().map(elems).collect();
    let lattice = m.flats();
    let proper = lattice.proper_nonempty(m.ground());
    let classes = m.parallel_classes().ok();
    println!("matroid on {} elements, rank {}, {} bases", m.n(), m.d(), m.bases().count());
    println!("loops: {:?}", elems(m.loops()));
    println!("circuits ({}): {circuits:?}", circuits.len());
    println!("flats: {} total, {} proper nonempty", lattice.flats.len(), proper.len());
    println!("characteristic polynomial: {chi}");
    println!("mobius number: {}", m.mobius_number());
    if let Some(c) = &classes {
        let blocks: Vec<Vec<usize>> = c.classes.iter().map(|&b| elems(b)).collect();
        println!("parallel classes (gcd {}): {blocks:?}", c.gcd);
    }
    Ok(json!({
        "matroid": m,
        "loops": elems(m.loops()),
        "circuits": circuits,
        "num_flats": lattice.flats.len(),
        "flats": lattice.flats.iter().map(|f| json!({"set": elems(f.set), "rank": f.rank})).collect::<Vec<_>>(),
        "characteristic_polynomial": chi,
        "mobius_number": m.mobius_number(),
        "parallel_classes": classes.map(|c| json!({
            "classes": c.classes.iter().map(|&b| elems(b)).collect::<Vec<_>>(),
            "gcd": c.gcd,
        })),
    }))
}

fn bergman_betti(input: &PathBuf) -> Result<(bool, serde_json::Value)> {
    let m: Matroid = load(input, "matroid")?;
    match wedge_check(&m) {
        Ok(report) => {
            let k = order_complex(&m)?;
            println!(
                "reduced Betti numbers {:?}, mobius number {}, sphere dimension {}",
                report.betti, report.mu, report.sphere_dim
            );
            println!("complex: {:?} faces per dimension", k.face_counts());
            Ok((report.passed, json!({"wedge": report, "complex": k})))
        }
        Err(e @ ComplexError::ParallelPairPresent(_)) => {
            println!("hypothesis violation: {e}");
            Ok((false, json!({"hypothesis_violation": e.to_string()})))
        }
        Err(e) => Err(e.into()),
    }
}

fn verify_initial(
    input: &PathBuf,
    weight: Option<&str>,
    config: &Config,
) -> Result<(bool, serde_json::Value)> {
    let a: Realization = load(input, "realization")?;
    let mut rows = Vec::new();
    let mut all = true;
    let weights: Vec<(String, Weight)> = match weight {
        Some(src) => vec![(src.to_string(), parse_weight(src, a.n())?)],
        None => {
            let fan = fine_fan(a.matroid())?;
            fan.cones()
                .iter()
                .map(|c| (c.label(), c.interior_point(a.n())))
                .collect()
        }
    };
    for (label, w) in &weights {
        for &p in &config.primes {
            let report = verify_initial_at(&a, w, p, config.budget)?;
            all &= report.passed;
            println!(
                "{label}  p={p}  case {:?}  initial {}  degenerate {:?}  {}",
                report.case,
                report.initial_count,
                report.degenerate_count,
                if report.passed { "ok" } else { "MISMATCH" }
            );
            rows.push(json!({"at": label, "check": report}));
        }
    }
    Ok((all, json!({"realization": a, "rows": rows})))
}

fn strata(input: &PathBuf, config: &Config) -> Result<(bool, serde_json::Value)> {
    let a: Realization = load(input, "realization")?;
    let fan = fine_fan(a.matroid())?;
    let mut all = true;
    let mut reports = Vec::new();
    for &p in &config.primes {
        let report = stratum_table(&a, &fan, p, config.budget)?;
        println!(
            "p={p}: fiber total {}, stratified total {}, identity {} == {}",
            report.milnor_total,
            report.compactification_total,
            report.identity_lhs,
            report.identity_rhs
        );
        for row in &report.rows {
            println!(
                "  {}  dim {}  raw {}  divided {}  orbit {}",
                row.cone, row.dim, row.raw, row.divided, row.orbit
            );
        }
        all &= report.divisibility_ok && report.cross_check_ok && report.identity_ok;
        reports.push(report);
    }
    Ok((all, json!({"realization": a, "tables": reports})))
}

fn count(input: &PathBuf, config: &Config) -> Result<(bool, serde_json::Value)> {
    let a: Realization = load(input, "realization")?;
    let n = a.n();
    let mut all = true;
    let mut rows = Vec::new();
    for &p in &config.primes {
        let fiber = milnor_count(&a, p, config.budget)?;
        let complement = complement_count(&a, p, config.budget)?;
        all &= complement.matches;
        let action = if (p - 1) % n as u64 == 0 {
            let report = mu_action_divisibility(&a, p, config.budget)?;
            all &= report.passed;
            Some(report)
        } else {
            None
        };
        println!(
            "p={p}: fiber {fiber}, complement {} (chi {} {}){}",
            complement.count,
            complement.chi_value,
            if complement.matches { "ok" } else { "MISMATCH" },
            action
                .as_ref()
                .map(|r| format!(
                    ", scalar action of order {}: {} orbits, {}",
                    r.n,
                    r.orbits,
                    if r.passed { "ok" } else { "FAILED" }
                ))
                .unwrap_or_default()
        );
        rows.push(json!({"prime": p, "fiber": fiber, "complement": complement, "mu_action": action}));
    }
    Ok((all, json!({"realization": a, "rows": rows})))
}

fn describe_constancy(constant: bool, common: Option<u64>) -> String {
    match (constant, common) {
        (true, Some(v)) => format!("constant = {v}"),
        (true, None) => "constant (no admissible parameters)".to_string(),
        (false, _) => "NOT CONSTANT".to_string(),
    }
}

fn invariance(input: &PathBuf, config: &Config) -> Result<(bool, serde_json::Value)> {
    let spec: FamilySpec = load(input, "family")?;
    let report = family_counts(&spec, &config.primes, config.budget)?;
    for pr in &report.per_prime {
        println!(
            "p={}: fiber counts {} (chi {}), complement counts {}",
            pr.prime,
            describe_constancy(pr.milnor_constant, pr.common_milnor),
            pr.chi_value,
            describe_constancy(pr.complement_constant, pr.common_complement),
        );
        for s in &pr.samples {
            match &s.outcome {
                SampleOutcome::Counted { milnor, complement } => {
                    println!("  t={}: fiber {milnor}, complement {complement}", s.t)
                }
                SampleOutcome::Excluded { reason } => println!("  t={}: excluded ({reason})", s.t),
            }
        }
    }
    Ok((report.milnor_constant_everywhere, json!({"family": spec, "report": report})))
}

fn fan(input: &PathBuf) -> Result<(bool, serde_json::Value)> {
    let m: Matroid = load(input, "matroid")?;
    let report = fan_report(&m)?;
    let closed = face_closure_check(&fine_fan(&m)?);
    let unimodular = report.cones.iter().all(|c| c.unimodular);
    println!(
        "fan of dimension {} with {} cones over {} proper flats",
        report.fan_dim, report.num_cones, report.num_flats
    );
    for c in &report.cones {
        println!(
            "  flag {:?}  dim {}  basis {:?}  saturation index {}",
            c.flag, c.dim, c.cone_basis, c.saturation_index
        );
    }
    println!("face closure: {}", if closed { "ok" } else { "VIOLATED" });
    println!("all cones unimodular: {unimodular}");
    Ok((closed, json!({"fan": report, "face_closure": closed, "all_unimodular": unimodular})))
}
