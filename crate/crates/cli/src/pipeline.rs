//! `run`, `diagnose`, `initdata` and `norms`.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use apev_diagnostics::monitor::{norm_table, Derivatives};
use apev_diagnostics::{
    divcurl_reconstruct, divergence_identity_residual, energy_ledger, g_equation_residual, monitor, qg_residual,
    vorticity_and_residual, DiagnosticsError, JetWindow, LedgerKind, LedgerRow, Metric, MonitorReport, NormEntry,
};
use apev_discretization::csv::Table;
use apev_discretization::snapshot::Snapshot;
use apev_discretization::{norms, BoundaryField, Grid, Side};
use apev_geometry::{elliptic_ratio_probe, HarmonicExtension};
use apev_initdata::{build_jet, total_energy_e0, InitialJet};
use apev_solver::{fixed_dt, PressureLaw, SolverError, State, Stepper};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{CliError, Config, Toggles};

pub const CONFIG_FILE: &str = "config.txt";
pub const STATUS_FILE: &str = "status.txt";
pub const SNAPSHOT_DIR: &str = "snapshots";

/// Grid, extension operator and law for one configuration.
pub struct Context {
    pub cfg: Config,
    pub grid: Grid,
    pub ext: HarmonicExtension,
    pub law: PressureLaw,
}

impl Context {
    pub fn new(cfg: Config) -> Result<Self, CliError> {
        let grid = Grid::new(cfg.n1, cfg.n2, cfg.n3)?;
        let ext = HarmonicExtension::new(&grid);
        let law = cfg.law();
        Ok(Self { cfg, grid, ext, law })
    }

    pub fn stepper(&self) -> Stepper<'_> {
        Stepper::new(&self.grid, &self.ext, self.law)
    }

    /// Initial state of the configured family and its compatible jet.
    pub fn initial(&self) -> Result<(State, InitialJet), CliError> {
        let d = self.cfg.family.build(&self.grid, self.cfg.amplitude, self.cfg.rbar);
        let jet = build_jet(&self.grid, &self.ext, &self.law, &d.v0, &d.r0, &d.w0, &d.w1)?;
        let s = State::new(&self.grid, &self.ext, 0.0, d.v0, d.r0, d.w0, d.w1)?;
        Ok((s, jet))
    }

    /// Fixed step and step count covering `[0, T]` at the configured CFL.
    pub fn time_step(&self, s0: &State) -> Result<(f64, usize), CliError> {
        let prepared = self.stepper().prepare(s0)?;
        Ok(fixed_dt(self.cfg.t_final, self.stepper().cfl_dt(&prepared, self.cfg.safety)))
    }
}

pub fn snapshot_of(grid: &Grid, s: &State) -> Snapshot {
    let mut snap = Snapshot::new(grid, s.t);
    for (name, f) in ["v1", "v2", "v3"].iter().zip(&s.v) {
        snap.push_interior(name, f);
    }
    snap.push_interior("R", &s.r);
    snap.push_boundary("w", &s.w);
    snap.push_boundary("w_t", &s.w_t);
    snap
}

pub fn state_of(ctx: &Context, snap: &Snapshot) -> Result<State, CliError> {
    snap.check_grid(&ctx.grid)?;
    let v = [snap.interior("v1")?.clone(), snap.interior("v2")?.clone(), snap.interior("v3")?.clone()];
    Ok(State::new(
        &ctx.grid,
        &ctx.ext,
        snap.t,
        v,
        snap.interior("R")?.clone(),
        snap.boundary("w")?.clone(),
        snap.boundary("w_t")?.clone(),
    )?)
}

pub fn write_snapshot(path: &Path, snap: &Snapshot) -> Result<(), CliError> {
    snap.write(BufWriter::new(File::create(path)?))?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot, CliError> {
    let f = File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(Snapshot::read(BufReader::new(f))?)
}

fn write_table(dir: &Path, name: &str, t: &Table) -> Result<(), CliError> {
    t.write(&dir.join(name)).map_err(|e| CliError::Io(format!("{name}: {e}")))
}

/// Norm-table CSV whose columns are fixed by the first (full) table.
pub struct NormLog {
    names: Vec<String>,
    table: Table,
}

impl NormLog {
    pub fn new(first: &[NormEntry]) -> Self {
        let names: Vec<String> = first.iter().map(|e| e.name.clone()).collect();
        let mut header = vec!["t".to_string()];
        header.extend(names.iter().cloned());
        Self { names, table: Table::new(&header) }
    }

    /// Entries missing from `entries` are recorded as NaN.
    pub fn push(&mut self, t: f64, entries: &[NormEntry]) {
        let mut row = vec![t];
        row.extend(self.names.iter().map(|n| entries.iter().find(|e| &e.name == n).map_or(f64::NAN, |e| e.value)));
        self.table.push(row);
    }

    pub fn table(&self) -> &Table {
        &self.table
    }
}

/// Tables of the window-based diagnostics.
pub struct DiagnosticLog {
    toggles: Toggles,
    ledger_order: usize,
    pub gresidual: Table,
    pub vorticity: Table,
    pub divcurl: Table,
    pub ledgers: Vec<(LedgerKind, Table)>,
}

impl DiagnosticLog {
    pub fn new(toggles: Toggles, ledger_order: usize) -> Self {
        Self {
            toggles,
            ledger_order,
            gresidual: Table::new(&["t", "interior_l2", "top_l2", "bottom_l2"]),
            vorticity: Table::new(&["t", "zeta_l2", "vorticity_residual_l2", "divergence_residual_l2", "qg_minus_divergence_l2"]),
            divcurl: Table::new(&["t", "a_minus_I_H2", "v_H1", "flat_l2", "flat_h1", "ale_l2", "ale_h1"]),
            ledgers: LedgerKind::ALL.iter().map(|&k| (k, Table::new(&LedgerRow::header(k)))).collect(),
        }
    }

    /// Evaluates every enabled diagnostic at the window center.
    pub fn record(&mut self, ctx: &Context, win: &JetWindow) -> Result<(), CliError> {
        let g = &ctx.grid;
        let s = win.center()?;
        let l2 = |f: &apev_discretization::ScalarField| norms::l2_quadrature(g, f);
        if self.toggles.gresidual {
            let (i, top, bottom) = g_equation_residual(g, &ctx.law, win)?.norms(g);
            self.gresidual.push(vec![s.t, i, top, bottom]);
        }
        if self.toggles.vorticity {
            let (z, r) = vorticity_and_residual(g, win)?;
            let vl2 = |v: &[apev_discretization::ScalarField; 3]| v.iter().map(|f| l2(f).powi(2)).sum::<f64>().sqrt();
            let div = divergence_identity_residual(g, win)?;
            let qg = qg_residual(g, win)?;
            self.vorticity.push(vec![s.t, vl2(&z), vl2(&r), l2(&div), l2(&(&qg - &div))]);
        }
        if self.toggles.divcurl {
            let v_h1 = norms::interior_vector(g, &s.v, 1.0)?;
            let rec = |m| match divcurl_reconstruct(g, s, m) {
                Ok(d) => Ok((d.a_minus_i, d.l2, d.h1)),
                Err(DiagnosticsError::MonitorNotGreen { value, .. }) => Ok((value, f64::NAN, f64::NAN)),
                Err(e) => Err(e),
            };
            let (a, fl2, fh1) = rec(Metric::Flat)?;
            let (_, al2, ah1) = rec(Metric::Ale)?;
            self.divcurl.push(vec![s.t, a, v_h1, fl2, fh1, al2, ah1]);
        }
        if self.toggles.ledgers {
            for (k, t) in self.ledgers.iter_mut() {
                t.push(energy_ledger(g, &ctx.law, win, *k, self.ledger_order)?.values());
            }
        }
        Ok(())
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        if self.toggles.gresidual {
            write_table(dir, "gresidual.csv", &self.gresidual)?;
        }
        if self.toggles.vorticity {
            write_table(dir, "vorticity.csv", &self.vorticity)?;
        }
        if self.toggles.divcurl {
            write_table(dir, "divcurl.csv", &self.divcurl)?;
        }
        if self.toggles.ledgers {
            for (k, t) in &self.ledgers {
                write_table(dir, &format!("ledger_{}.csv", k.name()), t)?;
            }
        }
        Ok(())
    }
}

/// How a run ended.
#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Completed,
    Tripped { t: f64, monitors: Vec<String> },
    Blowup { t: f64, message: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub status: Status,
    pub t: f64,
    pub steps: usize,
    pub dt: f64,
}

impl RunOutcome {
    pub fn render(&self) -> String {
        let (name, extra) = match &self.status {
            Status::Completed => ("completed", String::new()),
            Status::Tripped { t, monitors } => ("tripped", format!("trip_t = {t:?}\nmonitors = {}\n", monitors.join(","))),
            Status::Blowup { t, message } => ("blowup", format!("trip_t = {t:?}\nmessage = {message}\n")),
        };
        format!("status = {name}\nt = {:?}\nsteps = {}\ndt = {:?}\n{extra}", self.t, self.steps, self.dt)
    }

    pub fn into_result(self) -> Result<RunOutcome, CliError> {
        match &self.status {
            Status::Completed => Ok(self),
            Status::Tripped { t, monitors } => Err(CliError::MonitorTrip { t: *t, monitors: monitors.clone() }),
            Status::Blowup { message, .. } => Err(CliError::Blowup(message.clone())),
        }
    }
}

/// Key–value lines of `status.txt`.
pub fn read_status(dir: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = fs::read_to_string(dir.join(STATUS_FILE)).map_err(|e| CliError::Io(format!("{STATUS_FILE}: {e}")))?;
    Ok(text
        .lines()
        .filter_map(|l| l.split_once('=').map(|(k, v)| (k.trim().to_string(), v.trim().to_string())))
        .collect())
}

/// Extension-ratio probe on random band-limited boundary data.
pub fn elliptic_probe(ctx: &Context) -> Result<Table, CliError> {
    let g = &ctx.grid;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
    let kmax = (g.n1.min(g.n2) / 3).max(1) as i32;
    let samples: Vec<BoundaryField> = (0..ctx.cfg.probe_samples)
        .map(|_| {
            let modes: Vec<(f64, f64, f64, f64)> = (0..4)
                .map(|_| {
                    (
                        rng.gen_range(-kmax..=kmax) as f64,
                        rng.gen_range(-kmax..=kmax) as f64,
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(0.0..std::f64::consts::TAU),
                    )
                })
                .collect();
            g.boundary(Side::Top, |x, y| modes.iter().map(|(a, b, c, p)| c * (a * x + b * y + p).cos()).sum())
        })
        .collect();
    let mut t = Table::new(&["sample", "ratio_s2"]);
    for (i, r) in elliptic_ratio_probe(g, &ctx.ext, &samples, 2.0)?.into_iter().enumerate() {
        t.push(vec![i as f64, r]);
    }
    Ok(t)
}

fn snapshot_path(dir: &Path, step: usize) -> PathBuf {
    dir.join(SNAPSHOT_DIR).join(format!("step_{step:06}.apev"))
}

/// Norm-table magnitude treated as numerical blowup.
pub const BLOWUP_NORM: f64 = 1e6;

/// First norm entry that is non-finite or exceeds [`BLOWUP_NORM`].
pub fn blown_up(entries: &[NormEntry]) -> Option<&NormEntry> {
    entries.iter().find(|e| !(e.value <= BLOWUP_NORM))
}

enum Abort {
    Trip(f64, Vec<String>),
    Blowup(f64, String),
    Solver(SolverError),
    Other(CliError),
}

impl From<SolverError> for Abort {
    fn from(e: SolverError) -> Self {
        Abort::Solver(e)
    }
}

impl From<CliError> for Abort {
    fn from(e: CliError) -> Self {
        Abort::Other(e)
    }
}

impl From<DiagnosticsError> for Abort {
    fn from(e: DiagnosticsError) -> Self {
        Abort::Other(e.into())
    }
}

fn trip_names(ctx: &Context, report: &MonitorReport) -> Vec<String> {
    let mut names: Vec<String> = report.tripped(&ctx.law).into_iter().map(String::from).collect();
    if report.kinematic_residual > ctx.cfg.enforcement_tol {
        names.push("kinematic".into());
    }
    names
}

/// Integrates the configured problem and writes the run directory.
///
/// Monitors are checked after every step; rows, snapshots, norm tables and
/// diagnostics are written every `output_every` steps (windows centered there).
pub fn run(cfg: &Config, out: &Path) -> Result<RunOutcome, CliError> {
    let ctx = Context::new(cfg.clone())?;
    fs::create_dir_all(out.join(SNAPSHOT_DIR))?;
    fs::write(out.join(CONFIG_FILE), cfg.render())?;
    write_table(out, "elliptic_probe.csv", &elliptic_probe(&ctx)?)?;

    let (s0, jet) = ctx.initial()?;
    let (dt, steps) = ctx.time_step(&s0)?;
    let initial_norms = norm_table(&ctx.grid, &ctx.ext, &Derivatives { v: &jet.v, r: &jet.r, w: &jet.w })?;
    let mut norm_log = NormLog::new(&initial_norms);
    norm_log.push(0.0, &initial_norms);
    let mut monitors = Table::new(&MonitorReport::header());
    let mut diag = DiagnosticLog::new(cfg.toggles, cfg.ledger_order);
    let mut win = JetWindow::new(cfg.window, dt);
    let every = cfg.output_every;
    let mut last = (0.0, 0);

    let result = ctx.stepper().integrate::<Abort>(&s0, dt, steps, |s, n| {
        last = (s.t, n);
        let report = monitor(&ctx.grid, &ctx.ext, &ctx.law, s, None)?;
        let tripped = trip_names(&ctx, &report);
        if n % every == 0 || n == steps || !tripped.is_empty() {
            monitors.push(report.row());
            write_snapshot(&snapshot_path(out, n), &snapshot_of(&ctx.grid, s))?;
        }
        if !tripped.is_empty() {
            return Err(Abort::Trip(s.t, tripped));
        }
        win.push(s.clone());
        if win.is_full() {
            let c = n - cfg.window / 2;
            if c % every == 0 && c > 0 {
                let center = win.center()?;
                let norms = monitor(&ctx.grid, &ctx.ext, &ctx.law, center, Some(&win))?.norms;
                norm_log.push(center.t, &norms);
                if let Some(e) = blown_up(&norms) {
                    return Err(Abort::Blowup(center.t, format!("numerical blowup: {} = {:e}", e.name, e.value)));
                }
                diag.record(&ctx, &win)?;
            }
        }
        Ok(())
    });

    let status = match result {
        Ok(_) => Status::Completed,
        Err(Abort::Trip(t, monitors)) => Status::Tripped { t, monitors },
        Err(Abort::Blowup(t, message)) => Status::Blowup { t, message },
        Err(Abort::Solver(e)) => Status::Blowup { t: last.0, message: format!("numerical blowup: {e}") },
        Err(Abort::Other(e)) => return Err(e),
    };
    write_table(out, "monitors.csv", &monitors)?;
    write_table(out, "norms.csv", norm_log.table())?;
    diag.write(out)?;
    let outcome = RunOutcome { status, t: last.0, steps: last.1, dt };
    fs::write(out.join(STATUS_FILE), outcome.render())?;
    Ok(outcome)
}

fn snapshot_steps(traj: &Path) -> Result<Vec<(usize, PathBuf)>, CliError> {
    let dir = traj.join(SNAPSHOT_DIR);
    let mut out = Vec::new();
    for entry in fs::read_dir(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))? {
        let path = entry?.path();
        let step = path
            .file_stem()
            .and_then(|s| s.to_str())
            .and_then(|s| s.strip_prefix("step_"))
            .and_then(|s| s.parse::<usize>().ok());
        if let Some(n) = step {
            out.push((n, path));
        }
    }
    out.sort();
    Ok(out)
}

/// Recomputes the diagnostics of a run directory: each snapshot is advanced
/// `window − 1` steps with the run's step size and the diagnostics are
/// evaluated at the window center.
pub fn diagnose(traj: &Path, out: &Path) -> Result<usize, CliError> {
    let cfg = Config::read(&traj.join(CONFIG_FILE))?;
    let status = read_status(traj)?;
    let dt: f64 = status
        .iter()
        .find(|(k, _)| k == "dt")
        .and_then(|(_, v)| v.parse().ok())
        .ok_or_else(|| CliError::Io(format!("{STATUS_FILE}: missing dt")))?;
    let ctx = Context::new(cfg.clone())?;
    let mut diag = DiagnosticLog::new(cfg.toggles, cfg.ledger_order);
    let mut monitors = Table::new(&MonitorReport::header());
    let mut norm_log: Option<NormLog> = None;
    let mut count = 0;
    for (_, path) in snapshot_steps(traj)? {
        let s = state_of(&ctx, &read_snapshot(&path)?)?;
        let mut win = JetWindow::new(cfg.window, dt);
        ctx.stepper().integrate::<SolverError>(&s, dt, cfg.window - 1, |x, _| {
            win.push(x.clone());
            Ok(())
        })?;
        let center = win.center()?;
        let report = monitor(&ctx.grid, &ctx.ext, &ctx.law, center, Some(&win))?;
        monitors.push(report.row());
        norm_log.get_or_insert_with(|| NormLog::new(&report.norms)).push(center.t, &report.norms);
        diag.record(&ctx, &win)?;
        count += 1;
    }
    fs::create_dir_all(out)?;
    write_table(out, "monitors.csv", &monitors)?;
    if let Some(n) = &norm_log {
        write_table(out, "norms.csv", n.table())?;
    }
    diag.write(out)?;
    Ok(count)
}

/// Writes the initial snapshot and the jet norm table; returns `E(0)`.
pub fn initdata(cfg: &Config, out: &Path) -> Result<f64, CliError> {
    let ctx = Context::new(cfg.clone())?;
    let (s0, jet) = ctx.initial()?;
    fs::create_dir_all(out)?;
    write_snapshot(&out.join("initial.apev"), &snapshot_of(&ctx.grid, &s0))?;
    let e0 = total_energy_e0(&ctx.grid, &jet)?;
    let entries = norm_table(&ctx.grid, &ctx.ext, &Derivatives { v: &jet.v, r: &jet.r, w: &jet.w })?;
    let mut header = vec!["E0".to_string(), "R_t1_trace_H2".to_string()];
    header.extend(entries.iter().map(|e| e.name.clone()));
    let mut t = Table::new(&header);
    let mut row = vec![e0, jet.rt_trace_h2(&ctx.grid)?];
    row.extend(entries.iter().map(|e| e.value));
    t.push(row);
    write_table(out, "jet.csv", &t)?;
    Ok(e0)
}

/// Sobolev norms `s = 0..3` of every field of a snapshot.
pub fn snapshot_norms(path: &Path) -> Result<Table, CliError> {
    let snap = read_snapshot(path)?;
    let (n1, n2, n3) = snap.dims;
    let grid = Grid::new(n1, n2, n3)?;
    let names: Vec<&str> = snap.fields.iter().map(|(n, _)| n.as_str()).collect();
    let mut header = vec!["s".to_string()];
    header.extend(names.iter().map(|n| n.to_string()));
    let mut t = Table::new(&header);
    for s in 0..=3 {
        let mut row = vec![s as f64];
        for (_, data) in &snap.fields {
            row.push(match data {
                apev_discretization::snapshot::FieldData::Interior(f) => norms::interior(&grid, f, s as f64)?,
                apev_discretization::snapshot::FieldData::Boundary(b) => norms::boundary(&grid, b, s as f64)?,
            });
        }
        t.push(row);
    }
    Ok(t)
}
