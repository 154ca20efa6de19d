//! Command-line front end: `mgcd agcd|gcd|rank|gen|bench`.
//!
//! Exit status is 0 on success, 2 when no nontrivial common factor exists
//! at the requested tolerance, and 1 on any error.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::agcd::{agcd, exact_gcd, mult_matrix_rank, AgcdConfig};
use crate::error::{Error, Result};
use crate::gko::{RankReport, DEFAULT_RANK_TOL};
use crate::poly::Polynomial;
use crate::testkit::plant_instance;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_TRIVIAL: i32 = 2;

/// Rows `(n, m, gcd degree)` of the two benchmark tables.
pub const TABLE_1: [(usize, usize, usize); 4] = [(8, 7, 3), (15, 14, 5), (22, 22, 7), (36, 36, 11)];
pub const TABLE_2: [(usize, usize, usize); 4] = [(8, 7, 3), (28, 27, 13), (38, 37, 13), (58, 57, 23)];
pub const TABLE_1_ETA: f64 = 1e-5;
pub const TABLE_2_ETA: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "mgcd",
    version,
    about = "Approximate GCD of an exact and a perturbed polynomial"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Approximate GCD with Gauss-Newton refinement of g.
    Agcd {
        f: PathBuf,
        g: PathBuf,
        #[command(flatten)]
        solver: SolverFlags,
        /// Write the refined g to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact GCD from the kernel of the multiplication matrix.
    Gcd { f: PathBuf, g: PathBuf },
    /// Numerical rank of the multiplication matrix and its pivots.
    Rank {
        f: PathBuf,
        g: PathBuf,
        /// Relative pivot threshold.
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        tol: f64,
    },
    /// Writes a planted instance: f.txt, g.txt, g_exact.txt, meta.txt.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Degree of the planted common factor.
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.0)]
        eta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
    },
    /// Regenerates a benchmark table over planted instances.
    Bench {
        /// 1 (eta = 1e-5) or 2 (eta = 1e-8).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        table: u8,
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        /// First seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Rank threshold; defaults to 0.01 * sqrt(eta).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        newton_tol: Option<f64>,
        #[arg(long)]
        max_iters: Option<usize>,
        /// Use the dense reference solvers.
        #[arg(long)]
        dense: bool,
        /// Also print one record per run.
        #[arg(long)]
        records: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SolverFlags {
    /// Relative pivot threshold for the rank decision.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub newton_tol: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Use the dense reference solvers.
    #[arg(long)]
    pub dense: bool,
}

impl SolverFlags {
    pub fn config(&self) -> AgcdConfig {
        let mut cfg = AgcdConfig::default();
        if let Some(t) = self.tol {
            cfg.rank_tol = t;
        }
        if let Some(t) = self.newton_tol {
            cfg.newton_tol = t;
        }
        if let Some(it) = self.max_iters {
            cfg.max_iters = it;
        }
        cfg.use_structured_solver = !self.dense;
        cfg
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Agcd {
            f,
            g,
            solver,
            out: path,
        } => cmd_agcd(f, g, &solver.config(), path.as_deref(), out),
        Command::Gcd { f, g } => cmd_gcd(f, g, out),
        Command::Rank { f, g, tol } => cmd_rank(f, g, *tol, out),
        Command::Gen {
            n,
            m,
            k,
            eta,
            seed,
            out: dir,
        } => cmd_gen(*n, *m, *k, *eta, *seed, dir, out),
        Command::Bench {
            table,
            seeds,
            seed,
            tol,
            newton_tol,
            max_iters,
            dense,
            records,
        } => {
            let flags = SolverFlags {
                tol: *tol,
                newton_tol: *newton_tol,
                max_iters: *max_iters,
                dense: *dense,
            };
            cmd_bench(*table, *seed, *seeds, &flags, *records, out)
        }
    }
}

/// Reads a polynomial file; parse errors carry the file name and line.
pub fn read_polynomial(path: &Path) -> Result<Polynomial> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    Polynomial::from_text(&text).map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        other => other,
    })
}

fn write_polynomial(path: &Path, p: &Polynomial) -> Result<()> {
    std::fs::write(path, p.to_text())?;
    Ok(())
}

fn sci(x: f64) -> String {
    format!("{x:.14e}")
}

fn write_report(out: &mut dyn Write, report: &RankReport) -> Result<()> {
    writeln!(out, "rank\t{}", report.numerical_rank)?;
    writeln!(out, "corank\t{}", report.corank)?;
    writeln!(out, "threshold\t{}", sci(report.threshold_used))?;
    if let Some(gap) = report.gap_location {
        writeln!(out, "gap\t{gap}")?;
    }
    Ok(())
}

pub fn cmd_agcd(
    f_path: &Path,
    g_path: &Path,
    cfg: &AgcdConfig,
    g_out: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32> {
    let f = read_polynomial(f_path)?;
    let g = read_polynomial(g_path)?;
    let res = agcd(&f, &g, cfg)?;
    writeln!(out, "degree\t{}", res.degree)?;
    write_report(out, &res.rank_report)?;
    writeln!(out, "residual\t{}", sci(res.residual))?;
    writeln!(out, "distance\t{}", sci(res.distance))?;
    writeln!(out, "iterations\t{}", res.iterations)?;
    writeln!(out, "converged\t{}", res.diagnostics.converged)?;
    writeln!(out, "# gcd")?;
    write!(out, "{}", res.gcd.to_text())?;
    writeln!(out, "# v_tilde")?;
    write!(out, "{}", res.v_tilde.to_text())?;
    writeln!(out, "# g_tilde")?;
    write!(out, "{}", res.g_tilde.to_text())?;
    if let Some(path) = g_out {
        write_polynomial(path, &res.g_tilde)?;
    }
    Ok(if res.degree == 0 { EXIT_TRIVIAL } else { EXIT_OK })
}

pub fn cmd_gcd(f_path: &Path, g_path: &Path, out: &mut dyn Write) -> Result<i32> {
    let f = read_polynomial(f_path)?;
    let g = read_polynomial(g_path)?;
    let h = exact_gcd(&f, &g)?;
    let degree = h.degree().unwrap_or(0);
    writeln!(out, "degree\t{degree}")?;
    writeln!(out, "# gcd")?;
    write!(out, "{}", h.to_text())?;
    Ok(if degree == 0 { EXIT_TRIVIAL } else { EXIT_OK })
}

/// Rank report of `M_g` through the structured factorization.
pub fn rank_report(f: &Polynomial, g: &Polynomial, tol: f64) -> Result<RankReport> {
    let cfg = AgcdConfig {
        rank_tol: tol,
        ..Default::default()
    };
    mult_matrix_rank(f, g, &cfg)
}

pub fn cmd_rank(f_path: &Path, g_path: &Path, tol: f64, out: &mut dyn Write) -> Result<i32> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let f = read_polynomial(f_path)?;
    let g = read_polynomial(g_path)?;
    let report = rank_report(&f, &g, tol)?;
    write_report(out, &report)?;
    writeln!(out, "# step\t|u_kk|")?;
    for (k, p) in report.pivot_magnitudes.iter().enumerate() {
        writeln!(out, "{k}\t{}", sci(*p))?;
    }
    Ok(if report.corank == 0 { EXIT_TRIVIAL } else { EXIT_OK })
}

pub fn cmd_gen(n: usize, m: usize, k: usize, eta: f64, seed: u64, dir: &Path, out: &mut dyn Write) -> Result<i32> {
    let inst = plant_instance(n, m, k, eta, seed)?;
    std::fs::create_dir_all(dir)?;
    write_polynomial(&dir.join("f.txt"), &inst.f)?;
    write_polynomial(&dir.join("g.txt"), &inst.g_observed)?;
    write_polynomial(&dir.join("g_exact.txt"), &inst.g_exact)?;
    let meta = format!("# n\tm\tgcd_degree\teta\tseed\n{n}\t{m}\t{k}\t{}\t{seed}\n", sci(eta));
    std::fs::write(dir.join("meta.txt"), &meta)?;
    write!(out, "{meta}")?;
    Ok(EXIT_OK)
}

/// One benchmark run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub n: usize,
    pub m: usize,
    pub gcd_degree: usize,
    pub eta: f64,
    pub seed: u64,
    /// Degree of the computed gcd.
    pub degree: usize,
    pub residual: f64,
    /// `||v - v~||` against the planted cofactor; infinite when the degrees
    /// differ.
    pub cofactor_error: f64,
    pub distance: f64,
    pub iterations: usize,
    pub wall_time: f64,
}

impl RunRecord {
    pub const HEADER: &'static str =
        "# n\tm\tgcd_degree\teta\tseed\tdegree\tresidual\tcofactor_error\tdistance\titerations\twall_time";
}

impl fmt::Display for RunRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.n,
            self.m,
            self.gcd_degree,
            sci(self.eta),
            self.seed,
            self.degree,
            sci(self.residual),
            sci(self.cofactor_error),
            sci(self.distance),
            self.iterations,
            sci(self.wall_time)
        )
    }
}

impl FromStr for RunRecord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fields: Vec<&str> = s.trim_end_matches(['\n', '\r']).split('\t').collect();
        if fields.len() != 11 {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected 11 tab-separated fields, found {}", fields.len()),
            });
        }
        fn int<T: FromStr>(s: &str, name: &str) -> Result<T> {
            s.parse().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("bad {name}: {s:?}"),
            })
        }
        Ok(RunRecord {
            n: int(fields[0], "n")?,
            m: int(fields[1], "m")?,
            gcd_degree: int(fields[2], "gcd_degree")?,
            eta: int(fields[3], "eta")?,
            seed: int(fields[4], "seed")?,
            degree: int(fields[5], "degree")?,
            residual: int(fields[6], "residual")?,
            cofactor_error: int(fields[7], "cofactor_error")?,
            distance: int(fields[8], "distance")?,
            iterations: int(fields[9], "iterations")?,
            wall_time: int(fields[10], "wall_time")?,
        })
    }
}

/// Median of the finite values; NaN when there are none.
pub fn median(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(|a, b| a.total_cmp(b));
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

/// Default rank threshold for a perturbation of size `eta`.
pub fn bench_rank_tol(eta: f64) -> f64 {
    if eta > 0.0 {
        0.01 * eta.sqrt()
    } else {
        DEFAULT_RANK_TOL
    }
}

/// Runs one planted instance. Failed runs yield `None`.
pub fn bench_run(n: usize, m: usize, k: usize, eta: f64, seed: u64, cfg: &AgcdConfig) -> Result<Option<RunRecord>> {
    let inst = plant_instance(n, m, k, eta, seed)?;
    let start = Instant::now();
    let res = match agcd(&inst.f, &inst.g_observed, cfg) {
        Ok(res) => res,
        Err(Error::Diverged { .. } | Error::JacobianRankCollapse { .. } | Error::Singular { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let wall_time = start.elapsed().as_secs_f64();
    let cofactor_error = if res.v_tilde.degree() == inst.cofactor.degree() {
        res.v_tilde.distance(&inst.cofactor)
    } else {
        f64::INFINITY
    };
    Ok(Some(RunRecord {
        n,
        m,
        gcd_degree: k,
        eta,
        seed,
        degree: res.degree,
        residual: res.residual,
        cofactor_error,
        distance: res.distance,
        iterations: res.iterations,
        wall_time,
    }))
}

pub fn cmd_bench(
    table: u8,
    first_seed: u64,
    seeds: u64,
    flags: &SolverFlags,
    records: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let (rows, eta) = match table {
        1 => (TABLE_1, TABLE_1_ETA),
        2 => (TABLE_2, TABLE_2_ETA),
        t => return Err(Error::InvalidArgument(format!("no table {t}"))),
    };
    let mut cfg = flags.config();
    if flags.tol.is_none() {
        cfg.rank_tol = bench_rank_tol(eta);
    }
    writeln!(
        out,
        "# n\tm\tgcd_degree\teta\truns\tfailed\tdegree_hits\tresidual\tcofactor_error\tdistance\twall_time"
    )?;
    let mut all = Vec::new();
    for (n, m, k) in rows {
        let mut runs = Vec::new();
        let mut failed = 0;
        for seed in first_seed..first_seed + seeds {
            match bench_run(n, m, k, eta, seed, &cfg)? {
                Some(r) => runs.push(r),
                None => failed += 1,
            }
        }
        let col = |f: fn(&RunRecord) -> f64| median(&runs.iter().map(f).collect::<Vec<_>>());
        writeln!(
            out,
            "{n}\t{m}\t{k}\t{}\t{}\t{failed}\t{}\t{}\t{}\t{}\t{}",
            sci(eta),
            runs.len(),
            runs.iter().filter(|r| r.degree == k).count(),
            sci(col(|r| r.residual)),
            sci(col(|r| r.cofactor_error)),
            sci(col(|r| r.distance)),
            sci(col(|r| r.wall_time)),
        )?;
        all.extend(runs);
    }
    if records {
        writeln!(out, "{}", RunRecord::HEADER)?;
        for r in &all {
            writeln!(out, "{r}")?;
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_round_trip() {
        let r = RunRecord {
            n: 8,
            m: 7,
            gcd_degree: 3,
            eta: 1e-5,
            seed: 42,
            degree: 3,
            residual: 1.234567890123456e-27,
            cofactor_error: 3.0e-6,
            distance: 2.2e-5,
            iterations: 2,
            wall_time: 0.000123,
        };
        let text = r.to_string();
        assert_eq!(text.split('\t').count(), 11);
        let back: RunRecord = text.parse().unwrap();
        assert_eq!(back.to_string(), text);
        assert!((back.residual - r.residual).abs() <= 1e-14 * r.residual);
        let inf = RunRecord {
            cofactor_error: f64::INFINITY,
            ..r
        };
        let back: RunRecord = inf.to_string().parse().unwrap();
        assert_eq!(back.cofactor_error, f64::INFINITY);
        assert!("1\t2".parse::<RunRecord>().is_err());
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&[]).is_nan());
        assert_eq!(median(&[1.0, f64::INFINITY, f64::INFINITY]), f64::INFINITY);
    }

    #[test]
    fn flags_map_to_config() {
        let flags = SolverFlags {
            tol: Some(1e-4),
            newton_tol: None,
            max_iters: Some(7),
            dense: true,
        };
        let cfg = flags.config();
        assert_eq!(cfg.rank_tol, 1e-4);
        assert_eq!(cfg.max_iters, 7);
        assert!(!cfg.use_structured_solver);
        assert_eq!(cfg.newton_tol, AgcdConfig::default().newton_tol);
    }
}
