//! Refinement studies against the analytic solution.

use std::path::Path;

use apev_discretization::csv::Table;
use apev_discretization::{norms, Grid, Side};
use apev_geometry::HarmonicExtension;
use apev_solver::{fixed_dt, SolverError, State, Stepper};

use crate::case::{CaseName, MmsCase};
use crate::MmsError;

/// One resolution of a study: grid sizes and the largest admissible step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub dt: f64,
}

impl Level {
    /// `dt = cfl·h₃`.
    pub fn joint(n: usize, n3: usize, cfl: f64) -> Self {
        Self { n1: n, n2: n, n3, dt: cfl / (n3 - 1) as f64 }
    }
}

/// Default final time of each case.
pub fn final_time(case: CaseName) -> f64 {
    match case {
        CaseName::Frozen | CaseName::Coupled => 0.5,
        CaseName::Plate => 1.0,
    }
}

/// `k` levels: joint `(h₃, dt)` halving from `N₃ = 17` for the fluid cases,
/// `dt` halving from 0.2 on a fixed grid for the plate case.
pub fn ladder(case: CaseName, k: usize) -> Vec<Level> {
    (0..k)
        .map(|j| match case {
            CaseName::Plate => Level { n1: 16, n2: 16, n3: 9, dt: 0.2 / (1 << j) as f64 },
            _ => Level::joint(16, 16 * (1 << j) + 1, 0.5),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyRow {
    pub level: Level,
    pub steps: usize,
    pub err_l2: f64,
    pub err_h1: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Study {
    pub case: CaseName,
    pub t_final: f64,
    pub rows: Vec<StudyRow>,
}

/// `log₂` of successive error ratios; `None` for the first row.
fn orders(e: &[f64]) -> Vec<Option<f64>> {
    std::iter::once(None).chain(e.windows(2).map(|w| Some((w[0] / w[1]).log2()))).collect()
}

impl Study {
    pub fn orders_l2(&self) -> Vec<Option<f64>> {
        orders(&self.rows.iter().map(|r| r.err_l2).collect::<Vec<_>>())
    }

    pub fn orders_h1(&self) -> Vec<Option<f64>> {
        orders(&self.rows.iter().map(|r| r.err_h1).collect::<Vec<_>>())
    }

    /// Observed L² order on the finest pair.
    pub fn finest_order(&self) -> f64 {
        self.orders_l2().last().copied().flatten().unwrap_or(f64::NAN)
    }

    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].err_l2 < w[0].err_l2)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["n1", "n2", "n3", "dt", "steps", "err_l2", "err_h1", "order_l2", "order_h1"]);
        for ((r, o2), o1) in self.rows.iter().zip(self.orders_l2()).zip(self.orders_h1()) {
            let l = r.level;
            t.push(vec![
                l.n1 as f64,
                l.n2 as f64,
                l.n3 as f64,
                l.dt,
                r.steps as f64,
                r.err_l2,
                r.err_h1,
                o2.unwrap_or(f64::NAN),
                o1.unwrap_or(f64::NAN),
            ]);
        }
        t
    }

    pub fn write(&self, dir: &Path) -> Result<(), MmsError> {
        std::fs::create_dir_all(dir)?;
        self.table().write(&dir.join(format!("mms_{}.csv", self.case)))?;
        Ok(())
    }
}

/// `(L², H¹)` distance of a state from the exact solution, fluid and plate combined.
pub fn error_norms(grid: &Grid, state: &State, exact: &State) -> Result<(f64, f64), MmsError> {
    let mut sq = [0.0; 2];
    for (s, acc) in [0.0, 1.0].iter().zip(sq.iter_mut()) {
        for (a, b) in state.v.iter().zip(&exact.v) {
            *acc += norms::interior(grid, &(a - b), *s)?.powi(2);
        }
        *acc += norms::interior(grid, &(&state.r - &exact.r), *s)?.powi(2);
        *acc += norms::boundary(grid, &(&state.w - &exact.w), *s)?.powi(2);
        *acc += norms::boundary(grid, &(&state.w_t - &exact.w_t), *s)?.powi(2);
    }
    Ok((sq[0].sqrt(), sq[1].sqrt()))
}

/// Integrates the forced system from the exact data to `t_final` and measures the error.
pub fn run_level(case: &MmsCase, level: Level, t_final: f64) -> Result<StudyRow, MmsError> {
    let grid = Grid::new(level.n1, level.n2, level.n3)?;
    let ext = HarmonicExtension::new(&grid);
    let (dt, steps) = fixed_dt(t_final, level.dt);
    let s0 = case.exact_state(&grid, &ext, 0.0)?;
    let stepper = Stepper::new(&grid, &ext, case.law).with_forcing(case);
    let end = stepper.integrate::<SolverError>(&s0, dt, steps, |_, _| Ok(()))?;
    let exact = case.exact_state(&grid, &ext, end.t)?;
    debug_assert!(grid.trace(&end.v[2], Side::Bottom).max_abs() == 0.0 || case.fluid_frozen());
    let (err_l2, err_h1) = error_norms(&grid, &end, &exact)?;
    Ok(StudyRow { level, steps, err_l2, err_h1 })
}

/// Runs every level (in parallel) and tabulates errors with observed orders.
pub fn convergence_study(case: &MmsCase, levels: &[Level], t_final: f64) -> Result<Study, MmsError> {
    if levels.len() < 3 {
        return Err(MmsError::TooFewLevels(levels.len()));
    }
    let results: Vec<Result<StudyRow, MmsError>> = std::thread::scope(|s| {
        let jobs: Vec<_> = levels.iter().map(|&l| s.spawn(move || run_level(case, l, t_final))).collect();
        jobs.into_iter().map(|j| j.join().expect("study worker panicked")).collect()
    });
    let rows = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(Study { case: case.name, t_final, rows })
}
