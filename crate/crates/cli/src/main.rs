//! Command-line front end: read state files, dispatch analyses, emit
//! schema-stable JSON reports.
//!
//! Exit codes partition outcomes so shell scripts can sweep without
//! parsing JSON: 0 success / Exists / IsProduct, 1 NotExists /
//! NotProduct, 2 malformed input file, 3 invalid flags or parameters,
//! 4 Indeterminate.

mod report;
mod statefile;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64 as C64;
use schmidt_core::{
    counting_for_dims, degeneracy_report, entanglement_entropy, entropy_bits,
    generalized_schmidt_test, make_correlated_state, normalize, product_test, random_state,
    schmidt_decompose_with, Bipartition, GeneralizedSchmidtResult, ProductTestResult, PureState,
    RandomSeed,
};

use report::{assert_finite, Report, ResultPayload, SplitOut, Tolerances, Verdict, SCHEMA_VERSION};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_MALFORMED: u8 = 2;
const EXIT_BAD_FLAGS: u8 = 3;
const EXIT_INDETERMINATE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "schmidt",
    version,
    about = "Schmidt-representation analysis of multipartite pure states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bipartite Schmidt decomposition with entropy and degeneracy report
    Decompose {
        file: PathBuf,
        /// Bipartition as left|right party lists, e.g. "0|1" or "0,2|1"
        #[arg(long)]
        split: String,
        /// Relative rank/zero cutoff
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Relative degeneracy grouping threshold
        #[arg(long = "deg-tol", default_value_t = 1e-8)]
        deg_tol: f64,
    },
    /// Existence test for the homogeneous Schmidt form (n >= 3 parties)
    SchmidtTest {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Base seed for the degenerate-block probes
        #[arg(long, default_value_t = 17)]
        seed: u64,
        /// Number of consecutive seeds drawn from the base seed
        #[arg(long, default_value_t = 2)]
        seeds: u32,
    },
    /// Product-state test by rank peeling, with the counting record
    ProductTest {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Generate a state file fixture
    Gen {
        /// One of: singlet, ghz, w, correlated, random
        kind: String,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated real coefficients (correlated)
        #[arg(long)]
        coeffs: Option<String>,
        /// Party count (ghz, w, correlated)
        #[arg(long)]
        parties: Option<usize>,
        /// Common factor dimension (ghz, w, correlated)
        #[arg(long)]
        dim: Option<usize>,
        /// Comma-separated factor dimensions (random)
        #[arg(long)]
        dims: Option<String>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not errors
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::from(EXIT_OK)
            } else {
                ExitCode::from(EXIT_BAD_FLAGS)
            };
        }
    };
    ExitCode::from(run(cli.command))
}

fn run(cmd: Command) -> u8 {
    match cmd {
        Command::Decompose {
            file,
            split,
            tol,
            deg_tol,
        } => cmd_decompose(&file, &split, tol, deg_tol),
        Command::SchmidtTest {
            file,
            tol,
            seed,
            seeds,
        } => cmd_schmidt_test(&file, tol, seed, seeds),
        Command::ProductTest { file, tol } => cmd_product_test(&file, tol),
        Command::Gen {
            kind,
            out,
            coeffs,
            parties,
            dim,
            dims,
            seed,
        } => cmd_gen(&kind, &out, coeffs, parties, dim, dims, seed),
    }
}

fn load(file: &PathBuf) -> Result<(PureState, String), u8> {
    let digest = match std::fs::read(file) {
        Ok(bytes) => {
            use sha2::{Digest, Sha256};
            format!("sha256:{}", hex::encode(Sha256::digest(&bytes)))
        }
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return Err(EXIT_MALFORMED);
        }
    };
    match statefile::read_state(file) {
        Ok(state) => Ok((state, digest)),
        Err(e) => {
            eprintln!("error: {e}");
            Err(EXIT_MALFORMED)
        }
    }
}

fn check_tol(tol: f64) -> Result<(), u8> {
    if tol.is_finite() && (0.0..1.0).contains(&tol) {
        Ok(())
    } else {
        eprintln!("error: tolerance must be in [0, 1), got {tol}");
        Err(EXIT_BAD_FLAGS)
    }
}

fn parse_split(spec: &str, num_parties: usize) -> Result<Bipartition, u8> {
    let bad = |msg: &str| {
        eprintln!("error: invalid --split '{spec}': {msg}");
        EXIT_BAD_FLAGS
    };
    let (l, r) = spec.split_once('|').ok_or_else(|| bad("expected L|R"))?;
    let parse_side = |s: &str| -> Result<Vec<usize>, u8> {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad("bad party index")))
            .collect()
    };
    let left = parse_side(l)?;
    let right = parse_side(r)?;
    let split = Bipartition::new(&left, num_parties).map_err(|e| bad(&e.to_string()))?;
    if split.right() != right.as_slice() {
        return Err(bad("right side is not the complement of the left"));
    }
    Ok(split)
}

fn cmd_decompose(file: &PathBuf, split_spec: &str, tol: f64, deg_tol: f64) -> u8 {
    let (state, digest) = match load(file) {
        Ok(v) => v,
        Err(code) => return code,
    };
    if let Err(code) = check_tol(tol).and(check_tol(deg_tol)) {
        return code;
    }
    let split = match parse_split(split_spec, state.num_parties()) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let d = match schmidt_decompose_with(&state, &split, tol, deg_tol) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_MALFORMED;
        }
    };
    let report = Report {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        command: "decompose",
        input_digest: Some(digest),
        dims: state.dims().to_vec(),
        tolerances: Tolerances {
            rank_tol: Some(tol),
            deg_tol: Some(deg_tol),
            verdict_tol: None,
        },
        seeds: vec![],
        result: ResultPayload::BipartiteDecomposition {
            split: SplitOut {
                left: split.left().to_vec(),
                right: split.right().to_vec(),
            },
            weights: d.weights.clone(),
            entropy_nats: entanglement_entropy(&d),
            entropy_bits: entropy_bits(&d),
            degeneracy: degeneracy_report(&d, deg_tol),
        },
    };
    assert_finite(&report);
    print!("{}", report.to_json());
    EXIT_OK
}

fn cmd_schmidt_test(file: &PathBuf, tol: f64, seed: u64, seeds: u32) -> u8 {
    let (state, digest) = match load(file) {
        Ok(v) => v,
        Err(code) => return code,
    };
    if let Err(code) = check_tol(tol) {
        return code;
    }
    if state.num_parties() < 3 {
        eprintln!(
            "error: schmidt-test needs at least 3 parties, state has {}",
            state.num_parties()
        );
        return EXIT_BAD_FLAGS;
    }
    let seed_list: Vec<RandomSeed> = (0..seeds.max(1) as u64)
        .map(|k| RandomSeed(seed.wrapping_add(k)))
        .collect();
    let res = match generalized_schmidt_test(&state, tol, &seed_list) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_BAD_FLAGS;
        }
    };
    let seeds_out: Vec<u64> = res.seeds_used().iter().map(|s| s.0).collect();
    let (payload, code) = match res {
        GeneralizedSchmidtResult::Exists {
            weights,
            party_bases,
            ..
        } => (
            ResultPayload::GeneralizedSchmidt {
                verdict: Verdict::Exists,
                weights: Some(weights),
                party_bases: Some(
                    party_bases
                        .iter()
                        .map(|m| {
                            (0..m.ncols())
                                .map(|i| m.column(i).iter().map(|z| [z.re, z.im]).collect())
                                .collect()
                        })
                        .collect(),
                ),
                witness: None,
                reason: None,
            },
            EXIT_OK,
        ),
        GeneralizedSchmidtResult::NotExists { witness, .. } => (
            ResultPayload::GeneralizedSchmidt {
                verdict: Verdict::NotExists,
                weights: None,
                party_bases: None,
                witness: Some(witness),
                reason: None,
            },
            EXIT_NEGATIVE,
        ),
        GeneralizedSchmidtResult::Indeterminate { reason, .. } => (
            ResultPayload::GeneralizedSchmidt {
                verdict: Verdict::Indeterminate,
                weights: None,
                party_bases: None,
                witness: None,
                reason: Some(reason),
            },
            EXIT_INDETERMINATE,
        ),
    };
    let report = Report {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        command: "schmidt_test",
        input_digest: Some(digest),
        dims: state.dims().to_vec(),
        tolerances: Tolerances {
            rank_tol: None,
            deg_tol: None,
            verdict_tol: Some(tol),
        },
        seeds: seeds_out,
        result: payload,
    };
    assert_finite(&report);
    print!("{}", report.to_json());
    code
}

fn cmd_product_test(file: &PathBuf, tol: f64) -> u8 {
    let (state, digest) = match load(file) {
        Ok(v) => v,
        Err(code) => return code,
    };
    if let Err(code) = check_tol(tol) {
        return code;
    }
    let res = match product_test(&state, tol) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_MALFORMED;
        }
    };
    let counting = counting_for_dims(state.dims());
    let (payload, code) = match res {
        ProductTestResult::IsProduct { factors } => (
            ResultPayload::ProductTest {
                verdict: Verdict::IsProduct,
                factors: Some(
                    factors
                        .iter()
                        .map(|f| f.iter().map(|z| [z.re, z.im]).collect())
                        .collect(),
                ),
                witness: None,
                counting,
            },
            EXIT_OK,
        ),
        ProductTestResult::NotProduct { witness } => (
            ResultPayload::ProductTest {
                verdict: Verdict::NotProduct,
                factors: None,
                witness: Some(witness),
                counting,
            },
            EXIT_NEGATIVE,
        ),
    };
    let report = Report {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        command: "product_test",
        input_digest: Some(digest),
        dims: state.dims().to_vec(),
        tolerances: Tolerances {
            rank_tol: None,
            deg_tol: None,
            verdict_tol: Some(tol),
        },
        seeds: vec![],
        result: payload,
    };
    assert_finite(&report);
    print!("{}", report.to_json());
    code
}

fn cmd_gen(
    kind: &str,
    out: &std::path::Path,
    coeffs: Option<String>,
    parties: Option<usize>,
    dim: Option<usize>,
    dims: Option<String>,
    seed: u64,
) -> u8 {
    let bad = |msg: String| {
        eprintln!("error: {msg}");
        EXIT_BAD_FLAGS
    };
    let state = match kind {
        "singlet" => {
            let raw = [
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(-1.0, 0.0),
                C64::new(0.0, 0.0),
            ];
            normalize(&raw, &[2, 2]).expect("singlet is valid")
        }
        "ghz" => {
            let n = parties.unwrap_or(3);
            let d = dim.unwrap_or(2);
            if n < 2 || d < 2 {
                return bad(format!("ghz needs parties >= 2 and dim >= 2, got {n}, {d}"));
            }
            let r = 1.0 / 2f64.sqrt();
            let coeffs = vec![C64::new(r, 0.0); 2];
            match make_correlated_state(&coeffs, &vec![d; n]) {
                Ok(s) => s,
                Err(e) => return bad(e.to_string()),
            }
        }
        "w" => {
            let n = parties.unwrap_or(3);
            if n < 2 {
                return bad(format!("w needs parties >= 2, got {n}"));
            }
            let total = 1usize << n;
            let mut raw = vec![C64::new(0.0, 0.0); total];
            for k in 0..n {
                raw[1 << k] = C64::new(1.0, 0.0);
            }
            normalize(&raw, &vec![2; n]).expect("w amplitudes are valid")
        }
        "correlated" => {
            let Some(spec) = coeffs else {
                return bad("correlated requires --coeffs".into());
            };
            let parsed: Result<Vec<f64>, _> =
                spec.split(',').map(|t| t.trim().parse::<f64>()).collect();
            let parsed = match parsed {
                Ok(v) if !v.is_empty() => v,
                _ => return bad(format!("cannot parse --coeffs '{spec}'")),
            };
            let n = parties.unwrap_or(3);
            let d = dim.unwrap_or(parsed.len().max(2));
            // normalize the coefficient vector itself before building
            let norm: f64 = parsed.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm == 0.0 {
                return bad("coefficients are all zero".into());
            }
            let cs: Vec<C64> = parsed.iter().map(|&c| C64::new(c / norm, 0.0)).collect();
            match make_correlated_state(&cs, &vec![d; n]) {
                Ok(s) => s,
                Err(e) => return bad(e.to_string()),
            }
        }
        "random" => {
            let Some(spec) = dims else {
                return bad("random requires --dims".into());
            };
            let parsed: Result<Vec<usize>, _> =
                spec.split(',').map(|t| t.trim().parse::<usize>()).collect();
            match parsed {
                Ok(v) if !v.is_empty() && v.iter().all(|&d| d >= 1) => {
                    random_state(&v, RandomSeed(seed))
                }
                _ => return bad(format!("cannot parse --dims '{spec}'")),
            }
        }
        other => return bad(format!("unknown kind '{other}'")),
    };
    match statefile::write_state(out, &state) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: cannot write {}: {e}", out.display());
            EXIT_BAD_FLAGS
        }
    }
}
