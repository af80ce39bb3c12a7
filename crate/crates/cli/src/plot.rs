//! Plot benchmark CSVs as standalone SVG files.
//!
//! One series per algorithm (mean ratio per universe size) plus the two
//! reference curves: `ln n` and the deterministic colouring bound
//! `ln n / (1 - (ln ln n + 1) / ln(n ln n))`.  The output is plain SVG with
//! no external assets, so it diffs cleanly in version control.

use std::collections::BTreeMap;

use covlife::{Error, Result};

use crate::bench::{csv_err, eq3_upper};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2",
];

/// Per-algorithm mean ratio for every universe size present in the CSV.
pub fn mean_ratios(csv_text: &str) -> Result<BTreeMap<String, BTreeMap<usize, f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(csv_text.as_bytes());
    let headers = reader.headers().map_err(csv_err)?.clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Parse {
                what: "csv".into(),
                detail: format!("missing column {name}"),
            })
    };
    let (n_col, algo_col, rho_col) = (col("n")?, col("algo")?, col("rho")?);
    let mut sums: BTreeMap<String, BTreeMap<usize, (f64, usize)>> = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let rho_text = record.get(rho_col).unwrap_or("");
        if rho_text.is_empty() {
            continue; // error row
        }
        let n: usize = record
            .get(n_col)
            .unwrap_or("")
            .parse()
            .map_err(|_| Error::Parse {
                what: "csv".into(),
                detail: "bad n value".into(),
            })?;
        let rho: f64 = rho_text.parse().map_err(|_| Error::Parse {
            what: "csv".into(),
            detail: "bad rho value".into(),
        })?;
        let algo = record.get(algo_col).unwrap_or("").to_string();
        let entry = sums.entry(algo).or_default().entry(n).or_insert((0.0, 0));
        entry.0 += rho;
        entry.1 += 1;
    }
    Ok(sums
        .into_iter()
        .map(|(algo, by_n)| {
            (
                algo,
                by_n.into_iter()
                    .map(|(n, (sum, count))| (n, sum / count as f64))
                    .collect(),
            )
        })
        .collect())
}

struct Scale {
    x_min: f64,
    x_max: f64,
    y_max: f64,
}

impl Scale {
    fn x(&self, v: f64) -> f64 {
        MARGIN_LEFT + (v - self.x_min) / (self.x_max - self.x_min)
            * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM - v / self.y_max * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn polyline(points: &[(f64, f64)], scale: &Scale, style: &str) -> String {
    let coords: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", scale.x(x), scale.y(y)))
        .collect();
    format!("  <polyline points=\"{}\" {} fill=\"none\"/>\n", coords.join(" "), style)
}

/// Render the CSV to SVG text.  An empty CSV still shows the two reference
/// curves over the default range 40..=190.
pub fn render_svg(csv_text: &str) -> Result<String> {
    let series = mean_ratios(csv_text)?;

    let (x_min, x_max) = series
        .values()
        .flat_map(|by_n| by_n.keys().copied())
        .fold((usize::MAX, 0), |(lo, hi), n| (lo.min(n), hi.max(n)));
    let (x_min, x_max) = if x_min > x_max {
        (40, 190)
    } else if x_min == x_max {
        (x_min.saturating_sub(1).max(2), x_max + 1)
    } else {
        (x_min, x_max)
    };

    let grid: Vec<usize> = (x_min..=x_max).collect();
    let ln_curve: Vec<(f64, f64)> = grid.iter().map(|&n| (n as f64, (n as f64).ln())).collect();
    let upper_curve: Vec<(f64, f64)> = grid.iter().map(|&n| (n as f64, eq3_upper(n))).collect();

    let y_max = series
        .values()
        .flat_map(|by_n| by_n.values().copied())
        .chain(upper_curve.iter().map(|&(_, y)| y))
        .fold(1.0_f64, f64::max)
        * 1.08;
    let scale = Scale {
        x_min: x_min as f64,
        x_max: x_max as f64,
        y_max,
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    svg.push_str(&format!(
        "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));

    // Axes.
    let (x0, y0) = (MARGIN_LEFT, HEIGHT - MARGIN_BOTTOM);
    let (x1, y1) = (WIDTH - MARGIN_RIGHT, MARGIN_TOP);
    svg.push_str(&format!(
        "  <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "  <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>\n"
    ));
    for i in 0..=5 {
        let xv = scale.x_min + (scale.x_max - scale.x_min) * i as f64 / 5.0;
        let xs = scale.x(xv);
        svg.push_str(&format!(
            "  <line x1=\"{xs:.2}\" y1=\"{y0}\" x2=\"{xs:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            y0 + 5.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{xs:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{:.0}</text>\n",
            y0 + 20.0,
            xv
        ));
        let yv = scale.y_max * i as f64 / 5.0;
        let ys = scale.y(yv);
        svg.push_str(&format!(
            "  <line x1=\"{:.2}\" y1=\"{ys:.2}\" x2=\"{x0}\" y2=\"{ys:.2}\" stroke=\"black\"/>\n",
            x0 - 5.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{yv:.1}</text>\n",
            x0 - 9.0,
            ys + 4.0
        ));
    }
    svg.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">Number of targets n</text>\n",
        (x0 + x1) / 2.0,
        HEIGHT - 15.0
    ));
    svg.push_str(&format!(
        "  <text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {:.2})\">Approximation Ratio \u{03c1}</text>\n",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    ));

    // Reference curves.
    svg.push_str(&polyline(
        &ln_curve,
        &scale,
        "stroke=\"#666666\" stroke-dasharray=\"6 3\"",
    ));
    svg.push_str(&polyline(
        &upper_curve,
        &scale,
        "stroke=\"#666666\" stroke-dasharray=\"2 3\"",
    ));

    // Data series.
    for (i, by_n) in series.values().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let pts: Vec<(f64, f64)> = by_n.iter().map(|(&n, &r)| (n as f64, r)).collect();
        svg.push_str(&polyline(
            &pts,
            &scale,
            &format!("stroke=\"{colour}\" stroke-width=\"1.5\""),
        ));
        for &(x, y) in &pts {
            svg.push_str(&format!(
                "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{colour}\"/>\n",
                scale.x(x),
                scale.y(y)
            ));
        }
    }

    // Legend.
    let lx = WIDTH - MARGIN_RIGHT + 12.0;
    let mut ly = MARGIN_TOP + 10.0;
    let legend_line = |svg: &mut String, style: &str, label: &str, ly: f64| {
        svg.push_str(&format!(
            "  <line x1=\"{lx}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" {style}/>\n",
            ly - 4.0,
            lx + 26.0,
            ly - 4.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{ly:.2}\">{label}</text>\n",
            lx + 32.0
        ));
    };
    legend_line(&mut svg, "stroke=\"#666666\" stroke-dasharray=\"6 3\"", "ln n", ly);
    ly += 18.0;
    legend_line(
        &mut svg,
        "stroke=\"#666666\" stroke-dasharray=\"2 3\"",
        "ln n upper bound",
        ly,
    );
    for (i, algo) in series.keys().enumerate() {
        ly += 18.0;
        let colour = PALETTE[i % PALETTE.len()];
        legend_line(
            &mut svg,
            &format!("stroke=\"{colour}\" stroke-width=\"1.5\""),
            algo,
            ly,
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}
