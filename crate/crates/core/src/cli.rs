//! Command-line driver: sweeps over `(N, g, ε)` written as CSV and PGM files.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::model::{Anisotropy, EffectivePotential, TrapParams};
use crate::pipeline::{single_mode_check, solve_point, Method, SingleModeCheck, SolveSettings, DENSITY_POINTS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Occupancies written per sweep row.
pub const SWEEP_OCCUPANCIES: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "quasi1d", version, about = "Ground-state correlations of few bosons in elongated traps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Effective interaction against the Coulomb potential.
    Potential(Flags),
    /// Energies, entropies and occupancies over a parameter grid.
    Sweep(Flags),
    /// Reduced density matrix of one point as CSV and PGM.
    Rdm(Flags),
    /// One-body density per parameter point.
    Density(Flags),
    /// Full-3D against single-mode energy of two particles.
    Validate3d(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Ci,
    Grid,
    Both,
}

#[derive(Debug, Args, Default)]
struct Flags {
    /// Particle numbers, comma separated.
    #[arg(long)]
    n: Option<String>,
    /// Couplings, comma separated.
    #[arg(long)]
    g: Option<String>,
    /// Anisotropies, comma separated; `inf` is the strict-1D limit.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long, value_enum)]
    method: Option<MethodChoice>,
    /// Orbital count of the CI basis.
    #[arg(long)]
    nmax: Option<usize>,
    /// Points per axis of the imaginary-time grid.
    #[arg(long)]
    grid: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Parameter points solved concurrently.
    #[arg(long)]
    jobs: Option<usize>,
    /// Overwrite existing output files.
    #[arg(long)]
    force: bool,
    /// Seed of the Monte Carlo fallback.
    #[arg(long)]
    seed: Option<u64>,
    /// Flat `key = value` file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Separation range and sample count of `potential`.
    #[arg(long, allow_hyphen_values = true)]
    x_min: Option<f64>,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long)]
    x_points: Option<usize>,
    /// Samples per axis for orbital kernels and densities.
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Potential,
    Sweep,
    Rdm,
    Density,
    Validate3d,
}

impl CommandKind {
    fn name(&self) -> &'static str {
        match self {
            CommandKind::Potential => "potential",
            CommandKind::Sweep => "sweep",
            CommandKind::Rdm => "rdm",
            CommandKind::Density => "density",
            CommandKind::Validate3d => "validate3d",
        }
    }
}

/// Fully resolved run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n: Vec<usize>,
    pub g: Vec<f64>,
    pub eps: Vec<Anisotropy>,
    pub method: MethodChoice,
    pub nmax: Option<usize>,
    pub grid: Option<usize>,
    pub out: PathBuf,
    pub jobs: usize,
    pub force: bool,
    pub seed: u64,
    pub x_min: f64,
    pub x_max: f64,
    pub x_points: usize,
    pub points: usize,
}

impl RunConfig {
    /// Canonical text of every setting that can change the output.
    pub fn canonical(&self) -> String {
        let list = |v: Vec<String>| v.join(",");
        format!(
            "command={}\nn={}\ng={}\neps={}\nmethod={:?}\nnmax={:?}\ngrid={:?}\nseed={}\nx_min={}\nx_max={}\nx_points={}\npoints={}\n",
            self.command.name(),
            list(self.n.iter().map(|n| n.to_string()).collect()),
            list(self.g.iter().map(|g| g.to_string()).collect()),
            list(self.eps.iter().map(|e| e.to_string()).collect()),
            self.method,
            self.nmax,
            self.grid,
            self.seed,
            self.x_min,
            self.x_max,
            self.x_points,
            self.points,
        )
    }

    pub fn hash(&self) -> String {
        format!("{:x}", Sha256::digest(self.canonical().as_bytes()))
    }

    fn settings(&self) -> SolveSettings {
        let mut s = SolveSettings { n_max: self.nmax, grid_points: self.grid, ..SolveSettings::default() };
        s.monte_carlo.seed = self.seed;
        s
    }

    fn methods(&self) -> Vec<Method> {
        match self.method {
            MethodChoice::Ci => vec![Method::Ci],
            MethodChoice::Grid => vec![Method::Grid],
            MethodChoice::Both => vec![Method::Ci, Method::Grid],
        }
    }

    /// Parameter points in output order, lexicographic over `(N, g, ε, method)`.
    /// Under `both`, grid rows appear only where the grid method applies.
    pub fn points_in_order(&self) -> Vec<(TrapParams, Method)> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &g in &self.g {
                for &a in &self.eps {
                    for m in self.methods() {
                        if m == Method::Grid && !grid_supported(n, a) {
                            continue;
                        }
                        if let Ok(p) = TrapParams::new(n, g, a) {
                            out.push((p, m));
                        }
                    }
                }
            }
        }
        out
    }

    fn header(&self) -> String {
        format!("# tool-version={}\n# config-hash={}\n", env!("CARGO_PKG_VERSION"), self.hash())
    }
}

fn grid_supported(n: usize, a: Anisotropy) -> bool {
    n <= 3 && !a.is_strict()
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Solver(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Solver(_) => EXIT_SOLVER,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Solver(m) | CliError::Io(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => CliError::Io(e.to_string()),
            Error::Parameter(_) | Error::Configuration(_) => CliError::Usage(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (kind, flags) = match cli.command {
        Command::Potential(f) => (CommandKind::Potential, f),
        Command::Sweep(f) => (CommandKind::Sweep, f),
        Command::Rdm(f) => (CommandKind::Rdm, f),
        Command::Density(f) => (CommandKind::Density, f),
        Command::Validate3d(f) => (CommandKind::Validate3d, f),
    };
    let result = resolve(kind, flags).and_then(|config| execute(&config));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("{}:{}: expected key = value", path.display(), i + 1)))?;
        let key = k.trim().replace('-', "_");
        const KEYS: [&str; 14] =
            ["n", "g", "eps", "method", "nmax", "grid", "out", "jobs", "force", "seed", "x_min", "x_max", "x_points", "points"];
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("{}:{}: unknown key `{key}`", path.display(), i + 1)));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.trim().parse().map_err(|_| CliError::Usage(format!("cannot parse `{v}` for {key}")))
}

fn parse_list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>, CliError> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse_value(key, s)).collect()
}

fn parse_anisotropies(v: &str) -> Result<Vec<Anisotropy>, CliError> {
    v.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let s = s.trim();
            if s.eq_ignore_ascii_case("inf") {
                Ok(Anisotropy::StrictOneD)
            } else {
                let eps: f64 = parse_value("eps", s)?;
                if eps.is_finite() && eps > 0.0 {
                    Ok(Anisotropy::Finite(eps))
                } else {
                    Err(CliError::Usage(format!("anisotropy {s} must be positive or `inf`")))
                }
            }
        })
        .collect()
}

fn resolve(command: CommandKind, flags: Flags) -> Result<RunConfig, CliError> {
    let file = match &flags.config {
        Some(p) => read_config_file(p)?,
        None => BTreeMap::new(),
    };
    let pick = |cli: Option<String>, key: &str| cli.or_else(|| file.get(key).cloned());

    let (n_default, g_default, eps_default) = match command {
        CommandKind::Potential => ("2", "1", "30,100"),
        CommandKind::Sweep => ("2", "0,0.5,1,2,5,10,20", "30"),
        CommandKind::Rdm | CommandKind::Density => ("2", "1", "30"),
        CommandKind::Validate3d => ("2", "0,1,5,20", "5,10,30,100"),
    };
    let mut n: Vec<usize> = parse_list("n", &pick(flags.n, "n").unwrap_or_else(|| n_default.into()))?;
    let mut g: Vec<f64> = parse_list("g", &pick(flags.g, "g").unwrap_or_else(|| g_default.into()))?;
    let mut eps = parse_anisotropies(&pick(flags.eps, "eps").unwrap_or_else(|| eps_default.into()))?;
    n.sort_unstable();
    n.dedup();
    g.sort_by(f64::total_cmp);
    g.dedup();
    eps.sort_by(|a, b| a.sort_key().total_cmp(&b.sort_key()));
    eps.dedup();
    if n.is_empty() || g.is_empty() || eps.is_empty() {
        return Err(CliError::Usage("empty parameter list".into()));
    }
    if let Some(&bad) = n.iter().find(|n| !(2..=4).contains(*n)) {
        return Err(CliError::Usage(format!("particle number {bad} outside 2..=4")));
    }
    if let Some(bad) = g.iter().find(|g| !(g.is_finite() && **g >= 0.0)) {
        return Err(CliError::Usage(format!("coupling {bad} must be finite and non-negative")));
    }

    let method = match flags.method {
        Some(m) => m,
        None => match file.get("method") {
            Some(v) => MethodChoice::from_str(v, true).map_err(|_| CliError::Usage(format!("unknown method `{v}`")))?,
            None => MethodChoice::Ci,
        },
    };
    let opt = |cli: Option<usize>, key: &str| -> Result<Option<usize>, CliError> {
        match cli {
            Some(v) => Ok(Some(v)),
            None => file.get(key).map(|v| parse_value(key, v)).transpose(),
        }
    };
    let optf = |cli: Option<f64>, key: &str| -> Result<Option<f64>, CliError> {
        match cli {
            Some(v) => Ok(Some(v)),
            None => file.get(key).map(|v| parse_value(key, v)).transpose(),
        }
    };
    let force = flags.force || file.get("force").map(|v| parse_value::<bool>("force", v)).transpose()?.unwrap_or(false);
    let seed = match flags.seed {
        Some(s) => s,
        None => file.get("seed").map(|v| parse_value("seed", v)).transpose()?.unwrap_or(0),
    };
    let config = RunConfig {
        command,
        n,
        g,
        eps,
        method,
        nmax: opt(flags.nmax, "nmax")?,
        grid: opt(flags.grid, "grid")?,
        out: flags.out.or_else(|| file.get("out").map(PathBuf::from)).unwrap_or_else(|| PathBuf::from(".")),
        jobs: opt(flags.jobs, "jobs")?.unwrap_or_else(rayon::current_num_threads).max(1),
        force,
        seed,
        x_min: optf(flags.x_min, "x_min")?.unwrap_or(0.0),
        x_max: optf(flags.x_max, "x_max")?.unwrap_or(5.0),
        x_points: opt(flags.x_points, "x_points")?.unwrap_or(501),
        points: opt(flags.points, "points")?.unwrap_or(DENSITY_POINTS),
    };
    validate(&config)?;
    Ok(config)
}

fn validate(c: &RunConfig) -> Result<(), CliError> {
    if c.method == MethodChoice::Grid {
        if let Some(&n) = c.n.iter().find(|&&n| n > 3) {
            return Err(CliError::Usage(format!("grid method supports N ≤ 3, got N = {n}")));
        }
        if c.eps.iter().any(|a| a.is_strict()) {
            return Err(CliError::Usage("grid method needs finite anisotropies".into()));
        }
    }
    match c.command {
        CommandKind::Potential => {
            if !(c.x_min.is_finite() && c.x_max.is_finite() && c.x_max > c.x_min && c.x_points >= 2) {
                return Err(CliError::Usage(format!(
                    "bad x range [{}, {}] with {} points",
                    c.x_min, c.x_max, c.x_points
                )));
            }
            if c.eps.iter().any(|a| a.is_strict()) {
                return Err(CliError::Usage("potential needs finite anisotropies".into()));
            }
        }
        CommandKind::Rdm => {
            if c.n.len() != 1 || c.g.len() != 1 || c.eps.len() != 1 || c.method == MethodChoice::Both {
                return Err(CliError::Usage("rdm takes a single (N, g, ε) point and one method".into()));
            }
        }
        CommandKind::Validate3d => {
            if c.n != [2] {
                return Err(CliError::Usage("validate3d is defined for N = 2 only".into()));
            }
            if c.eps.iter().any(|a| a.is_strict()) {
                return Err(CliError::Usage("validate3d needs finite anisotropies".into()));
            }
        }
        CommandKind::Sweep | CommandKind::Density => {}
    }
    if c.points < 3 {
        return Err(CliError::Usage("need at least 3 sample points".into()));
    }
    Ok(())
}

fn execute(c: &RunConfig) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(c.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    fs::create_dir_all(&c.out).map_err(|e| CliError::Io(format!("{}: {e}", c.out.display())))?;
    pool.install(|| match c.command {
        CommandKind::Potential => cmd_potential(c),
        CommandKind::Sweep => cmd_sweep(c),
        CommandKind::Rdm => cmd_rdm(c),
        CommandKind::Density => cmd_density(c),
        CommandKind::Validate3d => cmd_validate3d(c),
    })
}

/// Fixed 17-significant-digit float format.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

fn write_output(c: &RunConfig, name: &str, body: &[u8]) -> Result<PathBuf, CliError> {
    let path = c.out.join(name);
    if path.exists() && !c.force {
        return Err(CliError::Io(format!("{} exists; pass --force to overwrite", path.display())));
    }
    fs::write(&path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn point_tag(p: &TrapParams, m: Method) -> String {
    format!("N{}_g{}_eps{}_{}", p.n_particles(), p.g(), p.anisotropy(), m.name())
}

fn cmd_potential(c: &RunConfig) -> Result<(), CliError> {
    let mut s = c.header();
    s.push_str("x,epsilon,u_eff,coulomb\n");
    let h = (c.x_max - c.x_min) / (c.x_points - 1) as f64;
    for a in &c.eps {
        let eps = a.finite().expect("validated");
        let u = EffectivePotential::new(eps)?;
        for i in 0..c.x_points {
            let x = c.x_min + i as f64 * h;
            let _ = writeln!(s, "{},{},{},{}", fmt_float(x), eps, fmt_float(u.eval(x)), fmt_float(1.0 / x.abs()));
        }
    }
    write_output(c, "potential.csv", s.as_bytes())?;
    Ok(())
}

fn cmd_sweep(c: &RunConfig) -> Result<(), CliError> {
    let settings = c.settings();
    let points = c.points_in_order();
    let results: Vec<_> = points
        .par_iter()
        .map(|(p, m)| solve_point(p, *m, &settings).map(|r| r.report))
        .collect();
    let mut s = c.header();
    s.push_str("N,g,epsilon,method,energy,linear_entropy");
    for l in 0..SWEEP_OCCUPANCIES {
        let _ = write!(s, ",lambda_{l}");
    }
    s.push_str(",converged\n");
    let mut failed = 0;
    for ((p, m), r) in points.iter().zip(&results) {
        let _ = write!(s, "{},{},{},{}", p.n_particles(), p.g(), p.anisotropy(), m.name());
        match r {
            Ok(report) => {
                let _ = write!(s, ",{},{}", fmt_float(report.energy), fmt_float(report.linear_entropy));
                for l in 0..SWEEP_OCCUPANCIES {
                    let _ = write!(s, ",{}", fmt_float(report.occupancies.get(l).copied().unwrap_or(0.0)));
                }
                s.push_str(",true\n");
            }
            Err(e) => {
                failed += 1;
                eprintln!("{}: {e}", point_tag(p, *m));
                s.push_str(&",nan".repeat(2 + SWEEP_OCCUPANCIES));
                s.push_str(",false\n");
            }
        }
    }
    write_output(c, "sweep.csv", s.as_bytes())?;
    if failed > 0 {
        return Err(CliError::Solver(format!("{failed} of {} points failed", points.len())));
    }
    Ok(())
}

/// Binary PGM, linear from `[0, max ρ]` to `[255, 0]`.
pub fn pgm_image(kernel: &nalgebra::DMatrix<f64>, header_comments: &str) -> Vec<u8> {
    let (rows, cols) = kernel.shape();
    let max = kernel.iter().copied().fold(0.0, f64::max);
    let mut out = format!("P5\n{header_comments}{cols} {rows}\n255\n").into_bytes();
    for i in 0..rows {
        for j in 0..cols {
            let t = if max > 0.0 { (kernel[(i, j)] / max).clamp(0.0, 1.0) } else { 0.0 };
            out.push((255.0 * (1.0 - t)).round() as u8);
        }
    }
    out
}

fn single_point(c: &RunConfig) -> Result<(TrapParams, Method), CliError> {
    c.points_in_order()
        .into_iter()
        .next()
        .ok_or_else(|| CliError::Usage("method does not apply to this point".into()))
}

fn cmd_rdm(c: &RunConfig) -> Result<(), CliError> {
    let (p, m) = single_point(c)?;
    let point = solve_point(&p, m, &c.settings())?;
    let (nodes, kernel) = point.rdm.kernel_samples(c.points);
    let mut s = c.header();
    s.push_str(&nodes.iter().map(|x| fmt_float(*x)).collect::<Vec<_>>().join(","));
    s.push('\n');
    for (j, xp) in nodes.iter().enumerate() {
        s.push_str(&fmt_float(*xp));
        for i in 0..nodes.len() {
            let _ = write!(s, ",{}", fmt_float(kernel[(j, i)]));
        }
        s.push('\n');
    }
    let tag = point_tag(&p, m);
    write_output(c, &format!("rdm_{tag}.csv"), s.as_bytes())?;
    write_output(c, &format!("rdm_{tag}.pgm"), &pgm_image(&kernel, &c.header()))?;
    Ok(())
}

fn cmd_density(c: &RunConfig) -> Result<(), CliError> {
    let settings = c.settings();
    let points = c.points_in_order();
    let results: Vec<_> = points.par_iter().map(|(p, m)| solve_point(p, *m, &settings)).collect();
    let mut failed = 0;
    for ((p, m), r) in points.iter().zip(results) {
        match r {
            Ok(point) => {
                let profile = crate::correlation::state_density(&point.state, &point.rdm, c.points)?;
                let mut s = c.header();
                s.push_str("x,n_of_x\n");
                for (x, v) in profile.nodes.iter().zip(&profile.values) {
                    let _ = writeln!(s, "{},{}", fmt_float(*x), fmt_float(*v));
                }
                write_output(c, &format!("density_{}.csv", point_tag(p, *m)), s.as_bytes())?;
            }
            Err(e) => {
                failed += 1;
                eprintln!("{}: {e}", point_tag(p, *m));
            }
        }
    }
    if failed > 0 {
        return Err(CliError::Solver(format!("{failed} of {} points failed", points.len())));
    }
    Ok(())
}

fn cmd_validate3d(c: &RunConfig) -> Result<(), CliError> {
    let settings = c.settings();
    let pairs: Vec<(f64, f64)> =
        c.g.iter().flat_map(|&g| c.eps.iter().map(move |a| (g, a.finite().expect("validated")))).collect();
    let results: Vec<Result<SingleModeCheck, Error>> =
        pairs.par_iter().map(|&(g, eps)| single_mode_check(g, eps, None, &settings)).collect();
    let mut s = c.header();
    s.push_str("g,epsilon,E_3d,E_1d,delta_e,E_1d_ci\n");
    let mut failed = 0;
    for ((g, eps), r) in pairs.iter().zip(&results) {
        match r {
            Ok(v) => {
                let _ = writeln!(
                    s,
                    "{g},{eps},{},{},{},{}",
                    fmt_float(v.e_3d),
                    fmt_float(v.e_1d),
                    fmt_float(v.delta_e),
                    fmt_float(v.e_1d_ci)
                );
            }
            Err(e) => {
                failed += 1;
                eprintln!("g={g} eps={eps}: {e}");
                let _ = writeln!(s, "{g},{eps},nan,nan,nan,nan");
            }
        }
    }
    write_output(c, "validate3d.csv", s.as_bytes())?;
    if failed > 0 {
        return Err(CliError::Solver(format!("{failed} of {} points failed", pairs.len())));
    }
    Ok(())
}
