//! Minimal SVG line chart for comparison reports.

use std::fmt::Write;

use riskcheck_core::pra::ComparisonReport;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 56.0;

const SERIES: [(&str, &str); 3] = [
    ("f_true", "#1f4e9c"),
    ("f_h0_bound", "#c0392b"),
    ("f_pra", "#7f8c8d"),
];

/// Overlay of `f_true`, `f_h0_bound` and `f_pra` against `t`.
pub fn comparison_svg(report: &ComparisonReport, title: &str) -> String {
    let t_max = report
        .grid
        .last()
        .copied()
        .unwrap_or(1.0)
        .max(f64::MIN_POSITIVE);
    let x = |t: f64| MARGIN + t / t_max * (WIDTH - 2.0 * MARGIN);
    let y = |f: f64| HEIGHT - MARGIN - f * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    )
    .unwrap();

    // Axes and ticks.
    writeln!(
        svg,
        r#"<path d="M{:.2} {:.2} V{:.2} H{:.2}" stroke="black" fill="none"/>"#,
        MARGIN,
        MARGIN,
        HEIGHT - MARGIN,
        WIDTH - MARGIN
    )
    .unwrap();
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let t = t_max * f;
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{f:.2}</text>"#,
            MARGIN - 6.0,
            y(f) + 4.0
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            x(t),
            HEIGHT - MARGIN + 18.0,
            short(t)
        )
        .unwrap();
    }
    writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">t</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    )
    .unwrap();

    let columns = [&report.f_true, &report.f_h0_bound, &report.f_pra];
    for (values, (name, colour)) in columns.iter().zip(SERIES) {
        let points: Vec<String> = report
            .grid
            .iter()
            .zip(values.iter())
            .map(|(&t, &f)| format!("{:.2},{:.2}", x(t), y(f)))
            .collect();
        let dash = if name == "f_pra" {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"{dash}/>"#,
            points.join(" ")
        )
        .unwrap();
    }
    for (i, (name, colour)) in SERIES.iter().enumerate() {
        let ly = MARGIN + 8.0 + 18.0 * i as f64;
        let lx = WIDTH - MARGIN - 130.0;
        writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"/>"#,
            lx + 24.0
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{name}</text>"#,
            lx + 30.0,
            ly + 4.0
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

fn short(t: f64) -> String {
    if t != 0.0 && (t.abs() >= 1e4 || t.abs() < 1e-2) {
        format!("{t:.1e}")
    } else {
        format!("{t:.2}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
