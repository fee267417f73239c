//! Standalone SVG log–log plots with an optional fitted line.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 420.0;
const PAD: f64 = 56.0;

pub struct Series<'a> {
    pub label: &'a str,
    pub points: &'a [(f64, f64)],
    pub color: &'a str,
}

/// A fitted line log y = intercept + slope·log x.
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
    pub label: String,
}

pub fn loglog_svg(title: &str, xlabel: &str, ylabel: &str, series: &[Series], fit: Option<&Line>) -> String {
    let all: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|p| p.0 > 0.0 && p.1 > 0.0)
        .map(|p| (p.0.log10(), p.1.log10()))
        .collect();
    let mut svg = String::new();
    let _ = write!(svg, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" font-family=\"sans-serif\" font-size=\"12\">");
    let _ = write!(svg, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    let _ = write!(svg, "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>", W / 2.0, escape(title));
    if all.is_empty() {
        svg.push_str("</svg>");
        return svg;
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let (x0, x1) = (x0.floor(), x1.ceil().max(x0.floor() + 1.0));
    let (y0, y1) = (y0.floor(), y1.ceil().max(y0.floor() + 1.0));
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let _ = write!(svg, "<rect x=\"{PAD}\" y=\"{PAD}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>", W - 2.0 * PAD, H - 2.0 * PAD);
    for d in x0 as i64..=x1 as i64 {
        let x = sx(d as f64);
        let _ = write!(svg, "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"#ddd\"/>", PAD, H - PAD);
        let _ = write!(svg, "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">1e{d}</text>", H - PAD + 16.0);
    }
    for d in y0 as i64..=y1 as i64 {
        let y = sy(d as f64);
        let _ = write!(svg, "<line x1=\"{PAD}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"#ddd\"/>", W - PAD);
        let _ = write!(svg, "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">1e{d}</text>", PAD - 6.0, y + 4.0);
    }
    let _ = write!(svg, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>", W / 2.0, H - 12.0, escape(xlabel));
    let _ = write!(
        svg,
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>",
        H / 2.0,
        H / 2.0,
        escape(ylabel)
    );
    for (k, s) in series.iter().enumerate() {
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|p| p.0 > 0.0 && p.1 > 0.0)
            .map(|p| format!("{:.1},{:.1}", sx(p.0.log10()), sy(p.1.log10())))
            .collect();
        let _ = write!(svg, "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\"/>", pts.join(" "), s.color);
        for p in &pts {
            let (x, y) = p.split_once(',').unwrap_or(("0", "0"));
            let _ = write!(svg, "<circle cx=\"{x}\" cy=\"{y}\" r=\"3\" fill=\"{}\"/>", s.color);
        }
        let ly = PAD + 16.0 + 16.0 * k as f64;
        let _ = write!(svg, "<text x=\"{:.1}\" y=\"{ly:.1}\" fill=\"{}\">{}</text>", PAD + 8.0, s.color, escape(s.label));
    }
    if let Some(f) = fit {
        // log10 y = intercept/ln10 + slope·log10 x.
        let c = f.intercept / std::f64::consts::LN_10;
        let (ya, yb) = (c + f.slope * x0, c + f.slope * x1);
        let _ = write!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#c00\" stroke-dasharray=\"6 4\"/>",
            sx(x0),
            sy(ya),
            sx(x1),
            sy(yb)
        );
        let ly = PAD + 16.0 + 16.0 * series.len() as f64;
        let _ = write!(svg, "<text x=\"{:.1}\" y=\"{ly:.1}\" fill=\"#c00\">{}</text>", PAD + 8.0, escape(&f.label));
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emits_closed_document() {
        let pts = [(10.0, 1.0), (100.0, 3.0), (1000.0, 10.0)];
        let s = loglog_svg("t", "N", "D", &[Series { label: "a<b", points: &pts, color: "#06c" }], Some(&Line { slope: 0.5, intercept: 0.0, label: "fit".into() }));
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("a&lt;b") && s.matches("<circle").count() == 3);
    }
}
