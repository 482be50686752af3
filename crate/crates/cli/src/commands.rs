use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use esdg::analysis::{ep_gap_for_state, integrated_entropy, power_spectrum, write_entropy_csv, write_gap_csv, write_spectrum_csv, GapRow};
use esdg::problems::{ep_illustration_1d, problem_by_name, ProblemSetup};
use esdg::refops::{build_ref_operators, gauss_quadrature, FaceEval};
use esdg::timeloop::{integrate, IntegratorOptions, SeriesSet};
use esdg::{GasModel, RunReport, SchemeConfig, SemiDiscretization, SolutionField};

use crate::config::{ConfigError, DiagnoseConfig, RunConfig, SweepConfig};
use crate::snapshot::Snapshot;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Config(_) => 1,
            Self::Internal(_) => 2,
        }
    }
}

fn io_err(path: &Path) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Internal(format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

fn time_tag(t: f64) -> String {
    format!("{t:.6}")
}

/// Problem, discretization and initial state for one configuration. Failures here
/// are configuration errors (an unknown problem, an Atwood number out of range).
pub fn setup(cfg: &RunConfig) -> Result<(ProblemSetup, SemiDiscretization, SolutionField), CliError> {
    let problem = problem_by_name(&cfg.problem, cfg.atwood).map_err(|e| CliError::Usage(e.to_string()))?;
    let scheme = SchemeConfig::new(cfg.variant, cfg.degree)
        .with_interface_flux(cfg.interface_flux)
        .with_volume_flux(cfg.volume_flux);
    let ny = cfg.cells_y.unwrap_or_else(|| problem.cells_y(cfg.cells));
    let sd = problem
        .semidiscretization(scheme, cfg.cells, ny)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let u0 = problem.initial_field(&sd);
    Ok((problem, sd, u0))
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: RunReport,
    pub wall_time: f64,
    pub files: Vec<PathBuf>,
}

fn report_text(cfg: &RunConfig, problem: &ProblemSetup, report: &RunReport, wall: f64) -> String {
    let mut s = String::new();
    s.push_str(&format!("problem = {}\n", problem.name));
    s.push_str(&format!("variant = {}\n", cfg.variant));
    s.push_str(&format!("degree = {}\n", cfg.degree));
    s.push_str(&format!("cells = {}\n", cfg.cells));
    if let Some(a) = cfg.atwood {
        s.push_str(&format!("atwood = {a:?}\n"));
    }
    s.push_str(&format!("t_final = {:?}\n", report.t_final));
    s.push_str(&format!("end_time = {:?}\n", report.end_time));
    s.push_str(&format!("crashed = {}\n", report.crashed));
    s.push_str(&format!("cause = {}\n", report.crash_cause));
    s.push_str(&format!("steps_accepted = {}\n", report.steps_accepted));
    s.push_str(&format!("steps_rejected = {}\n", report.steps_rejected));
    s.push_str(&format!("rhs_evaluations = {}\n", report.rhs_evaluations));
    s.push_str(&format!("wall_time = {wall:.3}\n"));
    s
}

/// Pending output times, consumed at the first accepted step at or past each.
struct Schedule {
    times: Vec<f64>,
    next: usize,
}

impl Schedule {
    fn new(times: &[f64]) -> Self {
        Self {
            times: times.to_vec(),
            next: 0,
        }
    }

    fn due(&mut self, t: f64) -> bool {
        let mut hit = false;
        while self.next < self.times.len() && t >= self.times[self.next] {
            self.next += 1;
            hit = true;
        }
        hit
    }
}

/// Integrate one configuration and write `report.txt`, `entropy.csv`, and the
/// requested snapshots and spectra into `cfg.out_dir`. A crash is a normal outcome.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let (problem, sd, u0) = setup(cfg)?;
    let t_final = cfg.t_final.unwrap_or(problem.t_final);
    if !cfg.spectrum_times.is_empty() && !sd.mesh().bc.is_fully_periodic() {
        return Err(CliError::Usage(format!("spectra need a periodic problem, '{}' has walls", cfg.problem)));
    }
    let dir = &cfg.out_dir;
    fs::create_dir_all(dir).map_err(io_err(dir))?;

    let n_el = sd.mesh().n_elements();
    let npe = sd.nodes_per_element();
    let mut files = Vec::new();
    let mut failure: Option<CliError> = None;
    let mut next_entropy = 0.0;
    let mut snaps = Schedule::new(&cfg.snapshot_times);
    let mut spectra = Schedule::new(&cfg.spectrum_times);
    let mut observer = |t: f64, u: &[f64], series: &mut SeriesSet| {
        if failure.is_some() {
            return;
        }
        let want_entropy = t >= next_entropy || t >= t_final;
        let want_snap = snaps.due(t);
        let want_spec = spectra.due(t);
        if !(want_entropy || want_snap || want_spec) {
            return;
        }
        let field = SolutionField::from_vec(n_el, npe, u.to_vec());
        if want_entropy {
            if let Ok(s) = integrated_entropy(&sd, &field) {
                series.entry("entropy".into()).or_default().push((t, s));
            }
            next_entropy = t + cfg.entropy_interval;
        }
        let mut write = || -> Result<(), CliError> {
            if want_snap {
                let snap = Snapshot::from_field(&sd, &field, t);
                let base = dir.join(format!("snapshot_t{}", time_tag(t)));
                let csv = base.with_extension("csv");
                snap.write_csv(create(&csv)?).map_err(io_err(&csv))?;
                let vtk = base.with_extension("vtk");
                snap.write_vtk(create(&vtk)?).map_err(io_err(&vtk))?;
                files.push(csv);
                files.push(vtk);
            }
            if want_spec {
                let path = dir.join(format!("spectrum_t{}.csv", time_tag(t)));
                match power_spectrum(&sd, &field) {
                    Ok(spec) => {
                        write_spectrum_csv(create(&path)?, &spec).map_err(io_err(&path))?;
                        files.push(path);
                    }
                    Err(e) => eprintln!("spectrum at t = {t}: {e}"),
                }
            }
            Ok(())
        };
        if let Err(e) = write() {
            failure = Some(e);
        }
    };

    let opts = IntegratorOptions::with_tol(cfg.tol);
    let start = Instant::now();
    let (report, _) = integrate(&sd, u0.as_slice(), (0.0, t_final), &opts, &mut [&mut observer]);
    let wall = start.elapsed().as_secs_f64();
    if let Some(e) = failure {
        return Err(e);
    }

    let path = dir.join("entropy.csv");
    let series = report.series.get("entropy").cloned().unwrap_or_default();
    write_entropy_csv(create(&path)?, &series).map_err(io_err(&path))?;
    files.push(path);
    let path = dir.join("report.txt");
    let mut w = create(&path)?;
    w.write_all(report_text(cfg, &problem, &report, wall).as_bytes())
        .and_then(|_| w.flush())
        .map_err(io_err(&path))?;
    files.push(path);
    Ok(RunOutcome {
        report,
        wall_time: wall,
        files,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub problem: String,
    pub variant: String,
    pub degree: usize,
    pub cells: usize,
    pub atwood: Option<f64>,
    pub end_time: f64,
    pub crashed: bool,
    pub cause: String,
    pub wall_time: f64,
}

pub const SWEEP_HEADER: &str = "problem,variant,N,cells,atwood,end_time,crashed,cause,wall_time";

impl SweepRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{:?},{},{},{:.3}",
            self.problem,
            self.variant,
            self.degree,
            self.cells,
            self.atwood.map(|a| format!("{a:?}")).unwrap_or_default(),
            self.end_time,
            self.crashed,
            self.cause,
            self.wall_time
        )
    }
}

fn sweep_cell(cfg: &RunConfig) -> SweepRow {
    let mut row = SweepRow {
        problem: cfg.problem.clone(),
        variant: cfg.variant.to_string(),
        degree: cfg.degree,
        cells: cfg.cells,
        atwood: cfg.atwood,
        end_time: 0.0,
        crashed: false,
        cause: String::new(),
        wall_time: 0.0,
    };
    let start = Instant::now();
    match setup(cfg) {
        Ok((problem, sd, u0)) => {
            let t_final = cfg.t_final.unwrap_or(problem.t_final);
            let (report, _) = integrate(&sd, u0.as_slice(), (0.0, t_final), &IntegratorOptions::with_tol(cfg.tol), &mut []);
            row.end_time = report.end_time;
            row.crashed = report.crashed;
            row.cause = report.crash_cause.to_string();
        }
        Err(e) => {
            eprintln!("sweep cell {} {} N={} cells={}: {e}", cfg.problem, cfg.variant, cfg.degree, cfg.cells);
            row.cause = "setup_error".into();
        }
    }
    row.wall_time = start.elapsed().as_secs_f64();
    row
}

/// Worker count for sweeps, from `ESDG_WORKERS` (default 1).
pub fn sweep_workers() -> Result<usize, CliError> {
    match std::env::var("ESDG_WORKERS") {
        Err(_) => Ok(1),
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::Usage(format!("ESDG_WORKERS must be a positive integer, got '{s}'"))),
    }
}

/// Run every matrix cell (in parallel over `workers` threads) and write
/// `sweep.csv` in matrix order.
pub fn sweep(cfg: &SweepConfig, workers: usize) -> Result<Vec<SweepRow>, CliError> {
    use rayon::prelude::*;
    let cells = cfg.cells_of_matrix();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let rows: Vec<SweepRow> = pool.install(|| cells.par_iter().map(sweep_cell).collect());
    fs::create_dir_all(&cfg.out_dir).map_err(io_err(&cfg.out_dir))?;
    let path = cfg.out_dir.join("sweep.csv");
    let mut w = create(&path)?;
    let mut text = format!("{SWEEP_HEADER}\n");
    for r in &rows {
        text.push_str(&r.csv_line());
        text.push('\n');
    }
    w.write_all(text.as_bytes()).and_then(|_| w.flush()).map_err(io_err(&path))?;
    Ok(rows)
}

/// Gap metrics of the 1D illustration state over the `k x p_min` grid, on
/// `cells` elements of `[-1, 1]` with Gauss collocation of the given degree.
/// Written to `ep_gap.csv`.
pub fn diagnose_ep(cfg: &DiagnoseConfig) -> Result<Vec<GapRow>, CliError> {
    let gas = GasModel::default();
    let quad = gauss_quadrature(cfg.degree + 1).map_err(|e| CliError::Internal(e.to_string()))?;
    let ops = build_ref_operators(cfg.degree, &quad, FaceEval::Endpoints).map_err(|e| CliError::Internal(e.to_string()))?;
    let mut rows = Vec::new();
    for &p_min in &cfg.p_min {
        for &k in &cfg.k {
            let state = ep_illustration_1d(k, p_min).map_err(|e| CliError::Usage(e.to_string()))?;
            let m = ep_gap_for_state(|x| state.state(x), (-1.0, 1.0), cfg.cells, &ops, &gas)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            rows.push(GapRow {
                k,
                p_min,
                volume_gap: m.max_volume_gap(),
                interface_jump: m.max_interface_jump(),
            });
        }
    }
    fs::create_dir_all(&cfg.out_dir).map_err(io_err(&cfg.out_dir))?;
    let path = cfg.out_dir.join("ep_gap.csv");
    let mut w = create(&path)?;
    write_gap_csv(&mut w, &rows).and_then(|_| w.flush()).map_err(io_err(&path))?;
    Ok(rows)
}

/// A run that records spectra; without explicit times, only the final state.
pub fn spectra(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let mut cfg = cfg.clone();
    if cfg.spectrum_times.is_empty() {
        let problem = problem_by_name(&cfg.problem, cfg.atwood).map_err(|e| CliError::Usage(e.to_string()))?;
        cfg.spectrum_times = vec![cfg.t_final.unwrap_or(problem.t_final)];
    }
    run(&cfg)
}
