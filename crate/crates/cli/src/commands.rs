use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use qwalk_core::census::{self, CensusOptions};
use qwalk_core::dynamics::{self, TimeGrid};
use qwalk_core::ensemble::{self, sweep_seed, EnsembleConfig};
use qwalk_core::spectral::{self, Tolerances};
use qwalk_core::{io, Error, Execution, Graph};
use serde::Serialize;

use crate::args::*;

/// Failure of a command, carrying its process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_capacity() => 3,
            CliError::Core(e) if e.is_numeric() => 4,
            CliError::Core(Error::Io(_))
            | CliError::Core(Error::Csv(_))
            | CliError::Core(Error::Json(_)) => 1,
            CliError::Core(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

type CmdResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Everything needed to re-run a command.
#[derive(Debug, Serialize)]
struct RunManifest<'a, P: Serialize> {
    command: &'a str,
    parameters: &'a P,
    seed: Option<u64>,
    threads: usize,
    tolerances: Option<Tolerances>,
    version: &'static str,
    outputs: Vec<String>,
    wall_time_s: f64,
}

/// Tracks files written into the output directory.
struct Output {
    dir: PathBuf,
    files: Vec<String>,
    started: Instant,
    threads: usize,
}

impl Output {
    fn new(dir: &Path, threads: usize) -> CmdResult<Self> {
        fs::create_dir_all(dir)?;
        Ok(Output {
            dir: dir.to_path_buf(),
            files: Vec::new(),
            started: Instant::now(),
            threads,
        })
    }

    fn create(&mut self, name: &str) -> CmdResult<BufWriter<File>> {
        self.files.push(name.to_string());
        Ok(BufWriter::new(File::create(self.dir.join(name))?))
    }

    fn finish<P: Serialize>(
        self,
        command: &str,
        parameters: &P,
        seed: Option<u64>,
        tolerances: Option<Tolerances>,
    ) -> CmdResult<()> {
        let manifest = RunManifest {
            command,
            parameters,
            seed,
            threads: self.threads,
            tolerances,
            version: env!("CARGO_PKG_VERSION"),
            outputs: self.files,
            wall_time_s: self.started.elapsed().as_secs_f64(),
        };
        let f = File::create(self.dir.join("manifest.json"))?;
        serde_json::to_writer_pretty(f, &manifest).map_err(Error::from)?;
        Ok(())
    }
}

pub struct Context {
    pub out: PathBuf,
    pub threads: usize,
}

impl Context {
    fn exec(&self) -> Execution {
        if self.threads == 1 {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

fn parse_pair(text: &str) -> CmdResult<(usize, usize)> {
    let (a, b) = text
        .split_once(['-', ','])
        .ok_or_else(|| usage(format!("bad pair `{text}`")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("bad node label in `{text}`")))
    };
    Ok((parse(a)?, parse(b)?))
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> CmdResult<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| usage(format!("bad {what} `{s}`")))
        })
        .collect()
}

fn require_n(t: &TopologyArgs) -> CmdResult<usize> {
    t.n.ok_or_else(|| usage(format!("--n is required for topology {:?}", t.topology)))
}

pub fn build_graph(t: &TopologyArgs) -> CmdResult<Graph> {
    let g = match t.topology {
        Topology::Star => qwalk_core::build_star(require_n(t)?)?,
        Topology::Complete => qwalk_core::build_complete(require_n(t)?)?,
        Topology::Bonds => {
            let text = t
                .bonds
                .as_deref()
                .ok_or_else(|| usage("--bonds is required for topology bonds"))?;
            let bonds = text
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(parse_pair)
                .collect::<CmdResult<Vec<_>>>()?;
            qwalk_core::star_plus_bonds(require_n(t)?, &bonds)?
        }
        Topology::Random => {
            let b =
                t.b.ok_or_else(|| usage("--b is required for topology random"))?;
            let mut rng = ensemble::realization_rng(t.seed, 0);
            ensemble::sample_realization(require_n(t)?, b, &mut rng)?
        }
        Topology::File => {
            let path = t
                .graph
                .as_ref()
                .ok_or_else(|| usage("--graph is required for topology file"))?;
            let g = Graph::from_edge_list(&fs::read_to_string(path)?)?;
            if let Some(n) = t.n {
                if n != g.n() {
                    return Err(usage(format!(
                        "--n {n} disagrees with file header n={}",
                        g.n()
                    )));
                }
            }
            g
        }
    };
    Ok(g)
}

fn build_grid(g: &GridArgs) -> CmdResult<TimeGrid> {
    let grid = match g.grid {
        GridKind::Log => TimeGrid::logarithmic(g.t_start.unwrap_or(1e-2), g.t_end, g.samples),
        GridKind::Linear => TimeGrid::linear(g.t_start.unwrap_or(0.0), g.t_end, g.samples),
    };
    grid.map_err(|e| usage(e.to_string()))
}

fn topology_seed(t: &TopologyArgs) -> Option<u64> {
    (t.topology == Topology::Random).then_some(t.seed)
}

pub fn spectrum(ctx: &Context, args: &SpectrumArgs) -> CmdResult<()> {
    let g = build_graph(&args.topology)?;
    let a = g.connectivity_matrix();
    let dec = spectral::eigendecompose(&a)?;
    let mut out = Output::new(&ctx.out, ctx.threads)?;
    io::write_spectrum_csv(out.create("spectrum.csv")?, dec.spectrum())?;
    io::write_dos_csv(
        out.create("dos.csv")?,
        &spectral::density_of_states(dec.spectrum()),
    )?;
    if args.vectors {
        io::write_eigenvectors_csv(out.create("eigenvectors.csv")?, &dec)?;
    }
    std::io::Write::write_all(&mut out.create("graph.txt")?, g.to_edge_list().as_bytes())?;

    println!("n = {}, edges = {}", g.n(), g.edge_count());
    println!("eigenvalue  multiplicity");
    for grp in dec.spectrum().groups() {
        println!("{:>10.6}  {}", clean(grp.value), grp.multiplicity);
    }
    out.finish(
        "spectrum",
        args,
        topology_seed(&args.topology),
        Some(Tolerances::for_matrix(g.n(), a.max_abs())),
    )
}

/// Rounds away solver noise for display only.
fn clean(x: f64) -> f64 {
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn walk(ctx: &Context, args: &WalkArgs) -> CmdResult<()> {
    let g = build_graph(&args.topology)?;
    let grid = build_grid(&args.grid)?;
    let a = g.connectivity_matrix();
    let dec = spectral::eigendecompose(&a)?;
    let pbar = dynamics::avg_return_classical(dec.spectrum(), &grid);
    let alpha = dynamics::avg_return_amplitude_sq(dec.spectrum(), &grid);
    let pibar = dynamics::avg_return_quantum_exact(&dec, &grid);
    let lta = dynamics::long_time_averages(dec.spectrum());

    let mut out = Output::new(&ctx.out, ctx.threads)?;
    io::write_walk_csv(out.create("walk.csv")?, &pbar, &alpha, &pibar)?;
    if let Some(pair) = &args.pair {
        let (k, j) = parse_pair(pair)?;
        let p = dynamics::classical_transition(&dec, k, j, &grid)?;
        let q = dynamics::quantum_transition(&dec, k, j, &grid)?;
        io::write_series_csv(out.create(&format!("p_{k}_{j}.csv"))?, &p)?;
        io::write_series_csv(out.create(&format!("pi_{k}_{j}.csv"))?, &q)?;
    }
    println!("P_RW = {}", lta.p_rw);
    println!("P_QW = {}", lta.p_qw);
    out.finish(
        "walk",
        args,
        topology_seed(&args.topology),
        Some(Tolerances::for_matrix(g.n(), a.max_abs())),
    )
}

fn parse_sweep(text: &str) -> CmdResult<Vec<usize>> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| usage(format!("bad sweep `{text}`, expected lo:hi")))?;
    let lo: usize = lo.trim().parse().map_err(|_| usage("bad sweep start"))?;
    let hi: usize = hi.trim().parse().map_err(|_| usage("bad sweep end"))?;
    if lo > hi {
        return Err(usage("sweep start exceeds end"));
    }
    Ok((lo..=hi).collect())
}

pub fn ensemble(ctx: &Context, args: &EnsembleArgs) -> CmdResult<()> {
    let n = args.n;
    let b_max = qwalk_core::b_max(n);
    let b_list = match (&args.b, &args.sweep) {
        (Some(b), None) => vec![*b],
        (None, Some(s)) => parse_sweep(s)?,
        (None, None) => (0..=b_max).collect(),
        (Some(_), Some(_)) => return Err(usage("--b and --sweep are exclusive")),
    };
    if n < 2 {
        return Err(usage(format!("n = {n} is too small")));
    }
    if let Some(&bad) = b_list.iter().find(|&&b| b > b_max) {
        return Err(usage(format!("b = {bad} exceeds b_max({n}) = {b_max}")));
    }
    if args.r == 0 {
        return Err(usage("--r must be at least 1"));
    }
    let grid = build_grid(&args.grid)?;
    let stair_b: Vec<usize> = parse_list::<usize>(&args.staircase_b, "bond count")?
        .into_iter()
        .filter(|&b| b <= b_max)
        .collect();
    let e_max = args.e_max.unwrap_or(n as f64 + 1.0);
    if args.e_step.is_nan() || args.e_step <= 0.0 || e_max < args.e_min {
        return Err(usage("energy grid needs e_step > 0 and e_max >= e_min"));
    }
    let steps = ((e_max - args.e_min) / args.e_step).round() as usize;
    let e_grid: Vec<f64> = (0..=steps)
        .map(|i| args.e_min + i as f64 * args.e_step)
        .collect();

    let exec = ctx.exec();
    let sweep = ensemble::sweep_b(n, &b_list, args.r, args.seed, &grid, exec)?;

    let mut out = Output::new(&ctx.out, ctx.threads)?;
    io::write_sweep_csv(out.create("sweep.csv")?, &sweep)?;
    if !args.no_series {
        for (b, s) in &sweep {
            io::write_ensemble_series_csv(out.create(&format!("pbar_b{b}.csv"))?, &s.mean_pbar)?;
            io::write_ensemble_series_csv(
                out.create(&format!("alpha_sq_b{b}.csv"))?,
                &s.mean_alpha_sq,
            )?;
            io::write_ensemble_series_csv(out.create(&format!("pibar_b{b}.csv"))?, &s.mean_pibar)?;
        }
    }
    for &b in &stair_b {
        let cfg = EnsembleConfig::new(n, b, args.r, sweep_seed(args.seed, b), grid.clone())?;
        let d = ensemble::staircase(&cfg, &e_grid, exec)?;
        io::write_staircase_csv(out.create(&format!("staircase_b{b}.csv"))?, &d)?;
    }

    println!("b  mean_P_QW  stderr");
    for (b, s) in &sweep {
        println!("{b:>2}  {:.6}  {:.2e}", s.mean_p_qw, s.stderr_p_qw);
    }
    out.finish(
        "ensemble",
        args,
        Some(args.seed),
        Some(Tolerances::for_matrix(n, (n - 1) as i64)),
    )
}

pub fn census(ctx: &Context, args: &CensusArgs) -> CmdResult<()> {
    let filter = args
        .b
        .as_deref()
        .map(|s| parse_list::<usize>(s, "bond count"))
        .transpose()?;
    let opts = CensusOptions {
        n_cap: args.n_cap,
        work_budget: args.budget,
        force: args.force,
    };
    let report = census::census(args.n, filter.as_deref(), &opts, ctx.exec())?;
    let mut out = Output::new(&ctx.out, ctx.threads)?;
    io::write_census_csv(out.create("census.csv")?, &report)?;
    io::write_extremes_json(out.create("extremes.json")?, &report)?;
    println!("b  N_B  total_subsets");
    for c in &report.clans {
        println!("{:>2}  {}  {}", c.b, c.n_b, c.total_subsets);
    }
    out.finish("census", args, None, None)
}

pub fn verify(ctx: &Context, args: &VerifyArgs) -> CmdResult<()> {
    let target = parse_list::<f64>(&args.target, "eigenvalue")?;
    let found =
        census::verify_eigenvalue_set(args.n, args.b, &target, args.tol, args.budget, ctx.exec())?;
    let mut out = Output::new(&ctx.out, ctx.threads)?;
    match &found {
        Some(bonds) => {
            let g = qwalk_core::star_plus_bonds(args.n, bonds)?;
            std::io::Write::write_all(
                &mut out.create("witness.txt")?,
                g.to_edge_list().as_bytes(),
            )?;
            let list: Vec<String> = bonds.iter().map(|(a, b)| format!("{a}-{b}")).collect();
            println!("witness: {}", list.join(","));
        }
        None => println!("no configuration matches"),
    }
    out.finish("verify", args, None, None)
}

pub fn graph(ctx: &Context, args: &GraphArgs) -> CmdResult<()> {
    let g = build_graph(&args.topology)?;
    let mut out = Output::new(&ctx.out, ctx.threads)?;
    std::io::Write::write_all(&mut out.create("graph.txt")?, g.to_edge_list().as_bytes())?;
    print!("{}", g.to_edge_list());
    out.finish("graph", args, topology_seed(&args.topology), None)
}
