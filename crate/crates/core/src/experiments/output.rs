//! CSV and gnuplot renderings of sweep records.

use std::fmt::Write;

use super::{bound, SweepRecord};

pub const CSV_HEADER: &str =
    "m,n,p_manipulable,mean_nodes,median_nodes,p90_nodes,undecided,bound_ratio";

fn fixed(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.6}")
    }
}

fn columns(r: &SweepRecord) -> [String; 8] {
    [
        r.m.to_string(),
        r.n.to_string(),
        fixed(r.p_manipulable),
        fixed(r.mean_nodes),
        fixed(r.median_nodes),
        fixed(r.p90_nodes),
        fixed(r.undecided_fraction),
        fixed(r.bound_ratio),
    ]
}

/// Largest `|Δp| / Δx` between consecutive records, where `x` is whichever of
/// `m` and `n` changes. Points without decided trials are skipped.
pub fn max_adjacent_slope(records: &[SweepRecord]) -> Option<f64> {
    let usable: Vec<&SweepRecord> = records
        .iter()
        .filter(|r| !r.p_manipulable.is_nan())
        .collect();
    usable
        .windows(2)
        .filter_map(|w| {
            let dx = if w[0].m != w[1].m {
                w[1].m.abs_diff(w[0].m)
            } else {
                w[1].n.abs_diff(w[0].n)
            };
            (dx > 0).then(|| (w[1].p_manipulable - w[0].p_manipulable).abs() / dx as f64)
        })
        .reduce(f64::max)
}

/// Header, one row per record and, with two or more usable points, a
/// trailing `# max_adjacent_slope=<v>` comment.
pub fn emit_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&columns(r).join(","));
        out.push('\n');
    }
    if let Some(s) = max_adjacent_slope(records) {
        writeln!(out, "# max_adjacent_slope={}", fixed(s)).unwrap();
    }
    out
}

/// Whitespace-separated columns for gnuplot, with `1.62^m` appended.
pub fn emit_plot_data(records: &[SweepRecord]) -> String {
    let mut out = format!("# {} 1.62^m\n", CSV_HEADER.replace(',', " "));
    for r in records {
        let mut cols = columns(r).to_vec();
        cols.push(fixed(bound(r.m)));
        out.push_str(&cols.join(" "));
        out.push('\n');
    }
    out
}
