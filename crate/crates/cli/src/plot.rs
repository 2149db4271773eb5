//! The `plot` subcommand: a self-contained SVG line chart of one metric
//! against the load factor, one polyline per strategy, mean over trials.
//! Output bytes are deterministic for a given input.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;

use crate::bench::RESULTS_HEADER;
use crate::{write_file, CmdError};

#[derive(Args, Debug)]
pub struct PlotArgs {
    /// Results CSV produced by `bench`.
    #[arg(long = "in")]
    input: PathBuf,

    /// Output SVG path.
    #[arg(long, default_value = "plot.svg")]
    out: PathBuf,

    /// Column to plot: mean_probes, stddev_probes, max_probes, p99_probes, mem_bytes.
    #[arg(long, default_value = "mean_probes")]
    metric: String,

    /// Operation kind to filter on: insert, lookup_hit, lookup_miss, delete.
    #[arg(long = "op-kind", default_value = "lookup_hit")]
    op_kind: String,
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

struct Series {
    name: String,
    /// (alpha, metric mean over trials), sorted by alpha.
    points: Vec<(f64, f64)>,
}

pub fn cmd_plot(args: &PlotArgs) -> Result<(), CmdError> {
    let metric_col = match args.metric.as_str() {
        "mean_probes" => 8,
        "stddev_probes" => 9,
        "max_probes" => 10,
        "p99_probes" => 11,
        "mem_bytes" => 12,
        other => {
            return Err(CmdError::Usage(format!(
                "unknown metric '{other}' (expected mean_probes, stddev_probes, max_probes, p99_probes, mem_bytes)"
            )))
        }
    };

    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| CmdError::Io(format!("reading {}: {e}", args.input.display())))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == RESULTS_HEADER => {}
        other => {
            return Err(CmdError::Usage(format!(
                "{} does not carry the results schema (header {:?})",
                args.input.display(),
                other.unwrap_or("")
            )))
        }
    }

    // (strategy, alpha-bits) -> (sum, count); strategy order of appearance.
    let mut order: Vec<String> = Vec::new();
    let mut sums: std::collections::HashMap<(String, u64), (f64, u64)> =
        std::collections::HashMap::new();
    let mut body_rows = 0usize;
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        body_rows += 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 14 {
            return Err(CmdError::Usage(format!(
                "{} line {}: expected 14 fields, found {}",
                args.input.display(),
                lineno + 2,
                fields.len()
            )));
        }
        if fields[6] != args.op_kind {
            continue;
        }
        let parse = |i: usize| -> Result<f64, CmdError> {
            fields[i].parse::<f64>().map_err(|_| {
                CmdError::Usage(format!(
                    "{} line {}: field {} ('{}') is not numeric",
                    args.input.display(),
                    lineno + 2,
                    i + 1,
                    fields[i]
                ))
            })
        };
        let alpha = parse(2)?;
        let value = parse(metric_col)?;
        let strategy = fields[0].to_string();
        if !order.contains(&strategy) {
            order.push(strategy.clone());
        }
        let entry = sums.entry((strategy, alpha.to_bits())).or_insert((0.0, 0));
        entry.0 += value;
        entry.1 += 1;
    }
    if body_rows == 0 {
        return Err(CmdError::Usage(format!(
            "{} has no data rows",
            args.input.display()
        )));
    }
    if sums.is_empty() {
        return Err(CmdError::Usage(format!(
            "no rows with op_kind '{}' in {}",
            args.op_kind,
            args.input.display()
        )));
    }

    let mut series: Vec<Series> = Vec::new();
    for name in order {
        let mut points: Vec<(f64, f64)> = sums
            .iter()
            .filter(|((s, _), _)| *s == name)
            .map(|((_, bits), (sum, count))| (f64::from_bits(*bits), sum / *count as f64))
            .collect();
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        series.push(Series { name, points });
    }

    let svg = render_svg(&series, &args.metric, &args.op_kind);
    write_file(&args.out, &svg)?;
    eprintln!(
        "wrote {} series to {}",
        series.len(),
        args.out.display()
    );
    Ok(())
}

fn fmt_tick(v: f64) -> String {
    if v.abs() >= 100.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

fn render_svg(series: &[Series], metric: &str, op_kind: &str) -> String {
    const W: f64 = 840.0;
    const H: f64 = 560.0;
    const LEFT: f64 = 80.0;
    const RIGHT: f64 = 180.0;
    const TOP: f64 = 50.0;
    const BOTTOM: f64 = 70.0;
    let plot_w = W - LEFT - RIGHT;
    let plot_h = H - TOP - BOTTOM;

    let xs: Vec<f64> = series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).collect();
    let ys: Vec<f64> = series.iter().flat_map(|s| s.points.iter().map(|p| p.1)).collect();
    let (mut x_min, mut x_max) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if (x_max - x_min).abs() < 1e-12 {
        x_min -= 0.05;
        x_max += 0.05;
    }
    let y_max = ys.iter().fold(0.0f64, |hi, &v| hi.max(v)).max(1e-9) * 1.05;

    let x_of = |a: f64| LEFT + (a - x_min) / (x_max - x_min) * plot_w;
    let y_of = |v: f64| TOP + plot_h - (v / y_max) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"28\" font-family=\"sans-serif\" font-size=\"18\" text-anchor=\"middle\">{} vs load factor ({})</text>",
        LEFT + plot_w / 2.0,
        metric,
        op_kind
    );

    // Axes.
    let _ = writeln!(
        svg,
        "<line x1=\"{LEFT}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{LEFT}\" y1=\"{TOP}\" x2=\"{LEFT}\" y2=\"{:.2}\" stroke=\"black\"/>",
        TOP + plot_h
    );

    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let xv = x_min + t * (x_max - x_min);
        let x = x_of(xv);
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#cccccc\"/>",
            TOP,
            TOP + plot_h
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
            TOP + plot_h + 20.0,
            fmt_tick(xv)
        );
        let yv = t * y_max;
        let y = y_of(yv);
        let _ = writeln!(
            svg,
            "<line x1=\"{LEFT}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#cccccc\"/>",
            LEFT + plot_w
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">{}</text>",
            LEFT - 8.0,
            y + 4.0,
            fmt_tick(yv)
        );
    }

    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">load factor (target)</text>",
        LEFT + plot_w / 2.0,
        H - 20.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"22\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 22 {:.2})\">{} (probe count, mean over trials)</text>",
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        metric
    );

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = s
            .points
            .iter()
            .map(|&(a, v)| format!("{:.2},{:.2}", x_of(a), y_of(v)))
            .collect();
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>",
            points.join(" ")
        );
        for &(a, v) in &s.points {
            let _ = writeln!(
                svg,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>",
                x_of(a),
                y_of(v)
            );
        }
        let ly = TOP + 10.0 + i as f64 * 22.0;
        let _ = writeln!(
            svg,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"14\" height=\"14\" fill=\"{color}\"/>",
            LEFT + plot_w + 16.0,
            ly
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\">{}</text>",
            LEFT + plot_w + 36.0,
            ly + 12.0,
            s.name
        );
    }

    svg.push_str("</svg>\n");
    svg
}
