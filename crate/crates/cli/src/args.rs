use boussinesq::direct::Rectangle;
use boussinesq::{Grid, C64};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "bsq",
    version,
    about = "Direct scattering and soliton synthesis for the bad Boussinesq equation"
)]
#[command(after_help = "Thread count: set BSQ_THREADS (default: all cores).\n\
Exit codes: 0 success, 1 configuration or IO error, 2 numerical failure, 3 validation failure.")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the one-soliton of a real pole.
    Soliton(SolitonArgs),
    /// Sample the breather of a complex pole in the regular part of the soliton sector.
    Breather(BreatherArgs),
    /// Sample the pure-soliton solution of several poles.
    Nsoliton(NsolitonArgs),
    /// Compute reflection coefficients, poles and residue constants of initial data.
    Scatter(ScatterArgs),
    /// Synthesise a soliton, scatter it and compare with the prescribed spectrum.
    Roundtrip(RoundtripArgs),
    /// Check a sampled field against the equations, the Lax pair and mass conservation.
    Verify(VerifyArgs),
    /// Sample jump matrices on the contour and the region map of the spectral plane.
    Jumps(JumpsArgs),
    /// Scatter initial data and advance the scattering data in time.
    Evolve(EvolveArgs),
    /// Run a job described by a JSON configuration file.
    Run(RunArgs),
}

#[derive(Debug, Args)]
pub struct FieldOut {
    /// Sampling grid: `default` or `x0:x1:nx[,t0:t1:nt]`.
    #[arg(long, default_value = "default", value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Grid,
    /// Write `x,u0,v0` initial data at the first time level instead of the field.
    #[arg(long)]
    pub emit_initial: bool,
    /// Output file (standard output if omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolitonArgs {
    /// Real pole in (-1, 0) or (1, ∞).
    #[arg(long, allow_hyphen_values = true)]
    pub k0: f64,
    /// Centre of the soliton at t = 0.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "c")]
    pub x0: Option<f64>,
    /// Residue constant `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub c: Option<C64>,
    #[command(flatten)]
    pub out: FieldOut,
}

#[derive(Debug, Args)]
pub struct BreatherArgs {
    /// Complex pole `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub k0: C64,
    /// Residue constant `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1,0")]
    pub c: C64,
    #[command(flatten)]
    pub out: FieldOut,
}

#[derive(Debug, Args)]
pub struct NsolitonArgs {
    /// Pole and residue constant `k_re,k_im,c_re,c_im` (repeatable).
    #[arg(long = "pole", value_parser = parse_pole, allow_hyphen_values = true)]
    pub poles: Vec<(C64, C64)>,
    /// Sample singular configurations instead of refusing them.
    #[arg(long)]
    pub allow_singular: bool,
    #[command(flatten)]
    pub out: FieldOut,
}

#[derive(Debug, Args)]
pub struct ScatterOpts {
    /// Initial data file with columns `x,u0,v0` or `x,u0,u1`.
    #[arg(long)]
    pub data: PathBuf,
    /// Pole search rectangle `re0,re1,im0,im1` (repeatable; defaults cover both soliton half-lines).
    #[arg(long = "search", value_parser = parse_rect, allow_hyphen_values = true)]
    pub search: Vec<Rectangle>,
    /// Skip the pole search.
    #[arg(long, conflicts_with = "search")]
    pub no_poles: bool,
    /// Ray samples per decade of |k|.
    #[arg(long, default_value_t = 64)]
    pub per_decade: usize,
    /// Unit-circle samples per sixth of the circle.
    #[arg(long, default_value_t = 256)]
    pub arc_nodes: usize,
    /// Values of |r1| at or below this count as zero in the existence-time estimate.
    #[arg(long, default_value_t = 1e-12)]
    pub t_floor: f64,
    /// Treat the data as compactly supported and compute every entry.
    #[arg(long)]
    pub compact: bool,
    /// Output directory for `r1.csv`, `r2.csv` and `scattering.json`.
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScatterArgs {
    #[command(flatten)]
    pub opts: ScatterOpts,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub opts: ScatterOpts,
    /// Time to advance to.
    #[arg(long)]
    pub t: f64,
}

#[derive(Debug, Args)]
pub struct RoundtripArgs {
    /// Pole `re` or `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub k0: C64,
    /// Residue constant `re,im` (default: centred soliton, or `1,0` for a breather).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, conflicts_with = "x0")]
    pub c: Option<C64>,
    /// Soliton centre (real poles only).
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    /// Initial half-width of the sampling window.
    #[arg(long, default_value_t = 40.0)]
    pub lx: f64,
    #[arg(long, default_value_t = 0.01)]
    pub hx: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub k_tol: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub c_tol: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub floor_tol: f64,
    /// Ray samples per decade for the reflection floor.
    #[arg(long, default_value_t = 16)]
    pub per_decade: usize,
    /// Output file (standard output if omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Check {
    Pde,
    System,
    Lax,
    Mass,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Field file with columns `x,t,u[,v]`.
    #[arg(long)]
    pub field: PathBuf,
    /// Checks to run (repeatable; default: every check the grid supports).
    #[arg(long = "check", value_enum)]
    pub checks: Vec<Check>,
    /// Largest accepted equation and Lax residual.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    /// Largest accepted change of the mass.
    #[arg(long, default_value_t = 1e-6)]
    pub mass_tol: f64,
    /// Spectral parameters `re,im` for the Lax check (repeatable).
    #[arg(long = "lax-k", value_parser = parse_complex, allow_hyphen_values = true)]
    pub lax_k: Vec<C64>,
    /// Output file (standard output if omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct JumpsArgs {
    /// Synthetic reflection data of `u0 = 0`, `v0 = h` on `[a, b]`, given as `a,b,h`.
    #[arg(long = "box", value_parser = parse_triple, allow_hyphen_values = true, conflicts_with = "data",
          default_value = "-0.5,0.5,0.3")]
    pub box_data: (f64, f64, f64),
    /// Use reflection coefficients of an initial data file instead.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Poles `k_re,k_im,c_re,c_im` whose circle jumps are also sampled (repeatable).
    #[arg(long = "pole", value_parser = parse_pole, allow_hyphen_values = true)]
    pub poles: Vec<(C64, C64)>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    /// Samples per contour piece.
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    /// Also write the region map of `[-L, L]²` to this file.
    #[arg(long)]
    pub regions: Option<PathBuf>,
    /// Half-width `L` and resolution `n` of the region map, `L,n`.
    #[arg(long, default_value = "3,301", value_parser = parse_region_spec)]
    pub region_grid: (f64, usize),
    /// Output file (standard output if omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON file `{"command": ..., "parameters": {...}}`.
    #[arg(long)]
    pub config: PathBuf,
}

fn floats(s: &str, n: &[usize]) -> Result<Vec<f64>, String> {
    let v = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if !n.contains(&v.len()) || v.iter().any(|x| !x.is_finite()) {
        return Err(format!(
            "expected {n:?} finite comma-separated numbers, got {s:?}"
        ));
    }
    Ok(v)
}

pub fn parse_complex(s: &str) -> Result<C64, String> {
    let v = floats(s, &[1, 2])?;
    Ok(C64::new(v[0], v.get(1).copied().unwrap_or(0.0)))
}

fn parse_pole(s: &str) -> Result<(C64, C64), String> {
    let v = floats(s, &[4])?;
    Ok((C64::new(v[0], v[1]), C64::new(v[2], v[3])))
}

fn parse_rect(s: &str) -> Result<Rectangle, String> {
    let v = floats(s, &[4])?;
    Rectangle::new((v[0], v[1]), (v[2], v[3])).map_err(|e| e.to_string())
}

fn parse_triple(s: &str) -> Result<(f64, f64, f64), String> {
    let v = floats(s, &[3])?;
    Ok((v[0], v[1], v[2]))
}

fn parse_region_spec(s: &str) -> Result<(f64, usize), String> {
    let v = floats(s, &[2])?;
    if v[0].is_nan() || v[0] <= 0.0 || v[1] < 2.0 || v[1].fract() != 0.0 {
        return Err(format!("expected L > 0 and an integer n ≥ 2, got {s:?}"));
    }
    Ok((v[0], v[1] as usize))
}

fn parse_axis(s: &str) -> Result<(f64, f64, usize), String> {
    let p: Vec<&str> = s.split(':').collect();
    if p.len() != 3 {
        return Err(format!("expected start:end:count, got {s:?}"));
    }
    let num = |q: &str| q.trim().parse::<f64>().map_err(|e| format!("{q:?}: {e}"));
    let n = p[2]
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("{:?}: {e}", p[2]))?;
    Ok((num(p[0])?, num(p[1])?, n))
}

/// `default` or `x0:x1:nx[,t0:t1:nt]`.
pub fn parse_grid(s: &str) -> Result<Grid, String> {
    if s == "default" {
        return Ok(Grid::default());
    }
    let (x, t) = match s.split_once(',') {
        Some((x, t)) => (parse_axis(x)?, parse_axis(t)?),
        None => (parse_axis(s)?, (0.0, 0.0, 1)),
    };
    Grid::new(x, t).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_specs() {
        assert_eq!(parse_grid("default").unwrap(), Grid::default());
        let g = parse_grid("-1:1:21,0:1:3").unwrap();
        assert_eq!((g.nx, g.nt), (21, 3));
        assert!((g.hx - 0.1).abs() < 1e-15);
        assert!(parse_grid("1:0:5").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_complex("2").unwrap(), C64::new(2.0, 0.0));
        assert_eq!(parse_complex("-1.5,0.25").unwrap(), C64::new(-1.5, 0.25));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("nan").is_err());
        assert!(parse_rect("1,0,0,1").is_err());
    }

    #[test]
    fn command_line_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
