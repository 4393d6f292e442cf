//! Plain-text summary and SVG plots for run, diagnose and MMS directories.

use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

use apev_discretization::csv::Table;

use crate::pipeline::{read_status, CONFIG_FILE, STATUS_FILE};
use crate::svg::{Plot, Scale};
use crate::{CliError, Config};

const LEDGERS: [&str; 4] = ["momentum", "plate", "plateW", "density"];

fn load(dir: &Path, name: &str) -> Option<Table> {
    Table::read(&dir.join(name)).ok()
}

fn extreme(t: &Table, col: &str, max: bool) -> Option<f64> {
    let c = t.column(col)?;
    let it = c.into_iter().filter(|x| x.is_finite());
    if max {
        it.reduce(f64::max)
    } else {
        it.reduce(f64::min)
    }
}

fn last(t: &Table, col: &str) -> Option<f64> {
    t.column(col)?.last().copied()
}

fn mms_files(dir: &Path) -> Vec<(String, PathBuf)> {
    let mut out: Vec<(String, PathBuf)> = fs::read_dir(dir)
        .into_iter()
        .flatten()
        .flatten()
        .filter_map(|e| {
            let p = e.path();
            let name = p.file_name()?.to_str()?;
            let case = name.strip_prefix("mms_")?.strip_suffix(".csv")?.to_string();
            Some((case, p))
        })
        .collect();
    out.sort();
    out
}

fn run_section(dir: &Path, s: &mut String) -> Result<(), CliError> {
    let _ = writeln!(s, "== {}", dir.display());
    if dir.join(STATUS_FILE).exists() {
        for (k, v) in read_status(dir)? {
            let _ = writeln!(s, "{k}: {v}");
        }
    }
    if let Some(m) = load(dir, "monitors.csv") {
        let _ = writeln!(s, "monitor extremes over {} rows:", m.rows.len());
        for (col, max) in [
            ("J_min", false),
            ("J_max", true),
            ("R_min", false),
            ("R_max", true),
            ("qprime_min", false),
            ("qprime_max", true),
            ("a_minus_I_H2", true),
            ("kinematic_residual", true),
        ] {
            if let Some(v) = extreme(&m, col, max) {
                let _ = writeln!(s, "  {col} {} {v:.6e}", if max { "max" } else { "min" });
            }
        }
    }
    let mut finals = Vec::new();
    if let Some(g) = load(dir, "gresidual.csv") {
        finals.extend(["interior_l2", "top_l2", "bottom_l2"].map(|c| (format!("g {c}"), last(&g, c))));
    }
    if let Some(v) = load(dir, "vorticity.csv") {
        finals.extend(
            ["vorticity_residual_l2", "divergence_residual_l2", "qg_minus_divergence_l2"].map(|c| (c.to_string(), last(&v, c))),
        );
    }
    if let Some(d) = load(dir, "divcurl.csv") {
        finals.extend(["flat_l2", "ale_l2"].map(|c| (format!("divcurl {c}"), last(&d, c))));
    }
    for k in LEDGERS {
        if let Some(t) = load(dir, &format!("ledger_{k}.csv")) {
            finals.push((format!("ledger {k}"), last(&t, "identity_residual")));
        }
    }
    if !finals.is_empty() {
        let _ = writeln!(s, "final residuals:");
        for (name, v) in finals {
            let _ = writeln!(s, "  {name} {}", v.map_or("n/a".to_string(), |x| format!("{x:.6e}")));
        }
    }
    for (case, path) in mms_files(dir) {
        let t = Table::read(&path).map_err(CliError::Io)?;
        let _ = writeln!(s, "mms case {case}:");
        let _ = writeln!(s, "  {}", t.header.join(" "));
        for row in &t.rows {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:.4e}")).collect();
            let _ = writeln!(s, "  {}", cells.join(" "));
        }
    }
    Ok(())
}

fn series(t: &Table, x: &str, y: &str) -> Vec<(f64, f64)> {
    match (t.column(x), t.column(y)) {
        (Some(a), Some(b)) => a.into_iter().zip(b).collect(),
        _ => Vec::new(),
    }
}

/// Writes `summary.txt`, `norms.svg`, `ledger.svg` and, when MMS tables are
/// present, `mms.svg`; returns the summary text.
pub fn report(dirs: &[PathBuf], out: &Path) -> Result<String, CliError> {
    if dirs.is_empty() {
        return Err(CliError::Usage("report needs at least one directory".into()));
    }
    fs::create_dir_all(out)?;
    let mut summary = String::new();
    for d in dirs {
        if !d.is_dir() {
            return Err(CliError::Io(format!("{}: not a directory", d.display())));
        }
        run_section(d, &mut summary)?;
    }
    fs::write(out.join("summary.txt"), &summary)?;

    let first = &dirs[0];
    let mut norms = Plot::new("Norm table", "t", "norm", Scale::Linear, Scale::Log);
    if let Some(t) = load(first, "norms.csv") {
        for name in t.header.iter().skip(1) {
            norms.add(name, series(&t, "t", name));
        }
    }
    fs::write(out.join("norms.svg"), norms.render())?;

    let ledger = if dirs.len() == 1 {
        let mut p = Plot::new("Ledger identity residual", "t", "|residual|", Scale::Linear, Scale::Log);
        for k in LEDGERS {
            if let Some(t) = load(first, &format!("ledger_{k}.csv")) {
                p.add(k, series(&t, "t", "identity_residual").into_iter().map(|(x, y)| (x, y.abs())).collect());
            }
        }
        p
    } else {
        let mut p = Plot::new("Ledger residual against resolution", "N3", "max |residual|", Scale::Log, Scale::Log);
        for k in LEDGERS {
            let mut pts = Vec::new();
            for d in dirs {
                let (Ok(cfg), Some(t)) = (Config::read(&d.join(CONFIG_FILE)), load(d, &format!("ledger_{k}.csv"))) else {
                    continue;
                };
                if let Some(c) = t.column("identity_residual") {
                    pts.push((cfg.n3 as f64, c.iter().map(|x| x.abs()).fold(0.0, f64::max)));
                }
            }
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            p.add(k, pts);
        }
        p
    };
    fs::write(out.join("ledger.svg"), ledger.render())?;

    let mut mms = Plot::new("Manufactured-solution errors", "dt", "error", Scale::Log, Scale::Log);
    let mut any = false;
    for d in dirs {
        for (case, path) in mms_files(d) {
            let t = Table::read(&path).map_err(CliError::Io)?;
            mms.add(&format!("{case} L2"), series(&t, "dt", "err_l2"));
            mms.add(&format!("{case} H1"), series(&t, "dt", "err_h1"));
            any = true;
        }
    }
    if any {
        fs::write(out.join("mms.svg"), mms.render())?;
    }
    Ok(summary)
}
