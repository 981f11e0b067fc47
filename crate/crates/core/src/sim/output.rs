use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{invalid_arg, Error, Result};

use super::{sort_rows, ResultRow};

pub const HEADER: &str = "param,solver,mean_rate,stderr,mean_willie_power,feasible_frac,trials";

fn csv_text(rows: &[ResultRow]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        // `{}` on f64 prints the shortest string that parses back to the same value.
        out.push_str(&format!(
            "{},{},{},{},{:e},{},{}\n",
            r.param, r.solver, r.mean_rate, r.stderr, r.mean_willie_power, r.feasible_frac, r.trials
        ));
    }
    out
}

/// Gnuplot script drawing mean rate against the parameter, one line per solver.
pub fn plot_script(rows: &[ResultRow], csv_name: &str) -> String {
    let mut solvers: Vec<&str> = rows.iter().map(|r| r.solver.as_str()).collect();
    solvers.sort_unstable();
    solvers.dedup();
    format!(
        "set datafile separator ','\n\
         set xlabel 'param'\n\
         set ylabel 'covert rate (bits/s/Hz)'\n\
         set key left top\n\
         solvers = \"{}\"\n\
         plot for [s in solvers] '{}' skip 1 using ((strcol(2) eq s) ? $1 : NaN):3 \\\n    with linespoints title s\n",
        solvers.join(" "),
        csv_name
    )
}

fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| invalid_arg(format!("`{}` is not a file path", path.display())))?;
    let tmp: PathBuf = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(Error::from)
}

/// Writes the CSV at `path` and a plot script next to it (same stem, `.gp`).
/// Returns the script's path.
pub fn emit_results(rows: &[ResultRow], path: &Path) -> Result<PathBuf> {
    if rows.is_empty() {
        return Err(invalid_arg("no result rows to write"));
    }
    let mut sorted = rows.to_vec();
    sort_rows(&mut sorted);
    let script_path = path.with_extension("gp");
    let csv_name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    write_atomic(path, &csv_text(&sorted))?;
    write_atomic(&script_path, &plot_script(&sorted, &csv_name))?;
    Ok(script_path)
}

/// Reads back a CSV written by [`emit_results`].
pub fn parse_results(text: &str) -> Result<Vec<ResultRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(HEADER) {
        return Err(invalid_arg("missing or unexpected CSV header"));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = || Error::ConfigParse {
                line: i + 2,
                msg: format!("malformed row `{line}`"),
            };
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(bad());
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
            Ok(ResultRow {
                param: num(f[0])?,
                solver: f[1].to_string(),
                mean_rate: num(f[2])?,
                stderr: num(f[3])?,
                mean_willie_power: num(f[4])?,
                feasible_frac: num(f[5])?,
                trials: f[6].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}
