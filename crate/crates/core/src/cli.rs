//! The `lorentz22` command line.
//!
//! Exit codes: 0 on success, 1 for malformed input or flags, 2 for numerical
//! failures such as a non-Lorentzian grid point.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::ads::{phi_nodes, AdsSurface, Sign, PARABOLIC_TOL, PHI_NODES};
use crate::asymptotic::{asymptotic_directions, mean_curved_directions, DirectionReport, Multiplicity};
use crate::classify::classify;
use crate::hyperbola::{describe, sample};
use crate::integrate::total_curvature;
use crate::io::{
    direction_rows, fmt_f64, parse_generator, parse_qmap, parse_surface, read_file, GeneratorDef, SurfaceDef, Table,
    ADS_COLUMNS, DIRECTION_COLUMNS, HYPERBOLA_COLUMNS, SURFACE_COLUMNS,
};
use crate::quasiumb::{example_family, generate, verify_vanishing, GRID_MARGIN};
use crate::surface::Surface;
use crate::{Error, Result};

const GRAMMAR: &str = "\
EXPRESSIONS
  Surface components and generator curves are strings in this grammar:
    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' ['-'] integer)*
    atom   := number | variable | 'pi' | func '(' expr ')' | '(' expr ')'
  variables: u, v (surfaces) and s, t (generators; s is the first parameter)
  functions: sin cos sinh cosh exp log sqrt
  '^' takes an integer exponent, e.g. u^2 or (1 + v)^-1.

INPUT FILES
  quadratic map : {\"B1\": [[a, b], [b, c]], \"B2\": [[d, e], [e, f]]}
  surface       : {\"components\": [e1, e2, e3, e4],
                   \"domain\": {\"u\": [lo, hi], \"v\": [lo, hi], \"periodic\": [false, false]},
                   \"time_ref_tangent\": optional, \"time_ref_normal\": optional}
  generator     : {\"gamma\": [4 exprs in s], \"T\": [4 exprs in s], \"domain\": ...}
                  or {\"a\": e, \"b\": e, \"f\": e, \"g\": e, \"domain\": ...}

EXIT STATUS
  0 success, 1 invalid input, 2 numerical failure";

#[derive(Debug, Parser)]
#[command(name = "lorentz22", version, about = "Invariants of Lorentzian surfaces in R^{2,2}", after_long_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Input JSON file.
    #[arg(long = "in", value_name = "PATH")]
    input: String,
    /// Output file; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
    /// Grid size per axis.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Numerical tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Finite-difference step.
    #[arg(long, default_value_t = 1e-3)]
    h: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classical invariants of a quadratic map (JSON).
    Invariants(Common),
    /// Normal form of a quadratic map (JSON, tagged by case).
    Classify(Common),
    /// Curvature hyperbola of a quadratic map (JSON description).
    Hyperbola {
        #[command(flatten)]
        common: Common,
        /// Also write sampled points (branch, t, nu1, nu2) to this CSV file.
        #[arg(long, value_name = "PATH")]
        csv: Option<String>,
        /// Number of sampled points per branch.
        #[arg(long, default_value_t = 400)]
        samples: usize,
    },
    /// Per-point invariants and normal forms over a grid (CSV).
    SurfaceAnalyze {
        #[command(flatten)]
        common: Common,
        /// Also write asymptotic and mean directions to this CSV file.
        #[arg(long, value_name = "PATH")]
        directions: Option<String>,
    },
    /// Integrals of K and K_N over the domain (JSON).
    SurfaceIntegrate(Common),
    /// Surface definition generated from lightlike ruling data (JSON).
    QuGenerate(Common),
    /// Vanishing of the classical invariants and the dichotomy (JSON).
    QuVerify(Common),
    /// Gauss-Kronecker curvature of de Sitter duals over grid and phi nodes (CSV).
    AdsAnalyze(Common),
}

impl Common {
    fn validate(&self) -> Result<()> {
        if self.grid == 0 {
            return Err(Error::Input("grid must be positive".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Input("tol must be a positive number".into()));
        }
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(Error::Input("h must be a positive number".into()));
        }
        Ok(())
    }
}

fn json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("serializable report");
    s.push('\n');
    s
}

fn emit(out: &Option<String>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Input(format!("cannot write {p}: {e}"))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Error::Input(format!("cannot write output: {e}"))),
    }
}

fn write_file(path: &str, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Input(format!("cannot write {path}: {e}")))
}

fn par_map<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

fn sweep_grid(s: &Surface, n: usize) -> Vec<(f64, f64)> {
    s.domain.grid(n, GRID_MARGIN)
}

type PointRows = (Vec<String>, Vec<Vec<String>>);

fn analyze_point(s: &Surface, u: f64, v: f64, tol: f64) -> Result<PointRows> {
    let q = s.second_fundamental_form(u, v, tol)?.qmap;
    let inv = q.invariants(tol);
    let row = vec![
        fmt_f64(u),
        fmt_f64(v),
        fmt_f64(inv.norm_h2),
        fmt_f64(inv.k),
        fmt_f64(inv.kn),
        fmt_f64(inv.delta),
        classify(&q, tol).tag().to_string(),
        inv.rank_f.to_string(),
        fmt_f64(inv.tr_phi),
        fmt_f64(inv.det_phi),
    ];
    let mut dirs = direction_rows(u, v, "asymptotic", &asymptotic_directions(&q, tol)?);
    match mean_curved_directions(&q, tol) {
        Ok(r) => dirs.extend(direction_rows(u, v, "mean", &r)),
        Err(Error::HUndefined) => {
            let r = DirectionReport { directions: vec![], multiplicity: Multiplicity::None, table_row: None };
            let mut rows = direction_rows(u, v, "mean", &r);
            rows[0][5] = "undefined".into();
            dirs.extend(rows);
        }
        Err(e) => return Err(e),
    }
    Ok((row, dirs))
}

fn execute(cmd: Command, stdout: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Invariants(c) => {
            c.validate()?;
            let q = parse_qmap(&read_file(&c.input)?)?;
            emit(&c.out, &json(&q.invariants(c.tol)), stdout)
        }
        Command::Classify(c) => {
            c.validate()?;
            let q = parse_qmap(&read_file(&c.input)?)?;
            emit(&c.out, &json(&classify(&q, c.tol)), stdout)
        }
        Command::Hyperbola { common: c, csv, samples } => {
            c.validate()?;
            if samples == 0 {
                return Err(Error::Input("samples must be positive".into()));
            }
            let q = parse_qmap(&read_file(&c.input)?)?;
            if let Some(path) = csv {
                let mut t = Table::new(&HYPERBOLA_COLUMNS);
                for p in sample(&q, samples, 3.0) {
                    t.push(vec![p.branch.as_str().into(), fmt_f64(p.t), fmt_f64(p.point.0[0]), fmt_f64(p.point.0[1])]);
                }
                write_file(&path, &t.to_csv())?;
            }
            emit(&c.out, &json(&describe(&q, c.tol)), stdout)
        }
        Command::SurfaceAnalyze { common: c, directions } => {
            c.validate()?;
            let s = parse_surface(&read_file(&c.input)?)?;
            let grid = sweep_grid(&s, c.grid);
            let rows = par_map(grid.len(), |i| analyze_point(&s, grid[i].0, grid[i].1, c.tol));
            let mut table = Table::new(&SURFACE_COLUMNS);
            let mut dir_table = Table::new(&DIRECTION_COLUMNS);
            for r in rows {
                let (row, dirs) = r?;
                table.push(row);
                dirs.into_iter().for_each(|d| dir_table.push(d));
            }
            if let Some(path) = directions {
                write_file(&path, &dir_table.to_csv())?;
            }
            emit(&c.out, &table.to_csv(), stdout)
        }
        Command::SurfaceIntegrate(c) => {
            c.validate()?;
            let s = parse_surface(&read_file(&c.input)?)?;
            emit(&c.out, &json(&total_curvature(&s, c.grid, c.tol)?), stdout)
        }
        Command::QuGenerate(c) => {
            c.validate()?;
            let (surface, domain) = match parse_generator(&read_file(&c.input)?)? {
                GeneratorDef::Ruled(r) => (generate(&r, c.grid)?, r.domain),
                GeneratorDef::Family(f) => (example_family(&f, c.grid)?, f.domain),
            };
            let comps = surface.components().expect("generated from expressions").clone();
            emit(&c.out, &json(&SurfaceDef::new(comps, domain)), stdout)
        }
        Command::QuVerify(c) => {
            c.validate()?;
            let s = parse_surface(&read_file(&c.input)?)?;
            emit(&c.out, &json(&verify_vanishing(&s, c.grid, c.tol)?), stdout)
        }
        Command::AdsAnalyze(c) => {
            c.validate()?;
            let s = AdsSurface::new(parse_surface(&read_file(&c.input)?)?, c.grid, 1e-8)?;
            let grid = sweep_grid(s.surface(), c.grid);
            let nodes = phi_nodes(PHI_NODES);
            let rows = par_map(grid.len(), |i| -> Result<Vec<Vec<String>>> {
                let (u, v) = grid[i];
                let mut out = vec![];
                for sign in [Sign::Plus, Sign::Minus] {
                    for &phi in &nodes {
                        let gk = s.gauss_kronecker(u, v, phi, sign, c.tol)?;
                        let flag = if gk.abs() <= PARABOLIC_TOL { "1" } else { "0" };
                        out.push(vec![fmt_f64(u), fmt_f64(v), fmt_f64(phi), sign.as_str().into(), fmt_f64(gk), flag.into()]);
                    }
                }
                Ok(out)
            });
            let mut t = Table::new(&ADS_COLUMNS);
            for r in rows {
                r?.into_iter().for_each(|row| t.push(row));
            }
            emit(&c.out, &t.to_csv(), stdout)
        }
    }
}

/// Runs the command line `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_input_error() { 1 } else { 2 }
        }
    }
}
