//! Minimal static SVG 1.1 line charts.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];
const MAX_POINTS: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    /// `None` breaks the line.
    pub points: Vec<(f64, Option<f64>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

// 1-2-5 tick spacing giving roughly `target` intervals.
fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let raw = (hi - lo) / target as f64;
    let magnitude = 10f64.powf(raw.log10().floor());
    let spacing = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * magnitude)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * magnitude);
    let first = (lo / spacing).ceil() as i64;
    let last = (hi / spacing).floor() as i64;
    (first..=last).map(|k| k as f64 * spacing).collect()
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.abs() >= 1e4 || v.abs() < 1e-3 {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

impl LineChart {
    fn bounds(&self) -> Option<(f64, f64, f64, f64)> {
        let mut pts = self
            .series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter_map(|&(x, y)| y.map(|y| (x, y)))
            .filter(|(x, y)| x.is_finite() && y.is_finite());
        let (x0, y0) = pts.next()?;
        let (mut xl, mut xh, mut yl, mut yh) = (x0, x0, y0, y0);
        for (x, y) in pts {
            xl = xl.min(x);
            xh = xh.max(x);
            yl = yl.min(y);
            yh = yh.max(y);
        }
        if xh == xl {
            xl -= 0.5;
            xh += 0.5;
        }
        if yh == yl {
            yl -= 0.5;
            yh += 0.5;
        }
        let pad = 0.05 * (yh - yl);
        Some((xl, xh, yl - pad, yh + pad))
    }

    pub fn to_svg(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">
<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>
<text x="{:.1}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
            LEFT + 0.5 * (WIDTH - LEFT - RIGHT),
            escape(&self.title)
        );
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let _ = writeln!(
            out,
            r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
        );
        let Some((xl, xh, yl, yh)) = self.bounds() else {
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">no data</text>"#,
                LEFT + 0.5 * plot_w,
                TOP + 0.5 * plot_h
            );
            out.push_str("</svg>\n");
            return out;
        };
        let sx = |x: f64| LEFT + (x - xl) / (xh - xl) * plot_w;
        let sy = |y: f64| TOP + (yh - y) / (yh - yl) * plot_h;

        for t in nice_ticks(xl, xh, 6) {
            let x = sx(t);
            let _ = writeln!(
                out,
                r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#ccc"/><text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"##,
                TOP,
                TOP + plot_h,
                TOP + plot_h + 16.0,
                fmt_tick(t)
            );
        }
        for t in nice_ticks(yl, yh, 6) {
            let y = sy(t);
            let _ = writeln!(
                out,
                r##"<line x1="{LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ccc"/><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"##,
                LEFT + plot_w,
                LEFT - 6.0,
                y + 4.0,
                fmt_tick(t)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
            LEFT + 0.5 * plot_w,
            HEIGHT - 14.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="18" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>"#,
            TOP + 0.5 * plot_h,
            TOP + 0.5 * plot_h,
            escape(&self.y_label)
        );

        for (idx, series) in self.series.iter().enumerate() {
            let colour = PALETTE[idx % PALETTE.len()];
            let stride = series.points.len().div_ceil(MAX_POINTS).max(1);
            let last = series.points.len().saturating_sub(1);
            let mut segment: Vec<String> = Vec::new();
            let flush = |segment: &mut Vec<String>, out: &mut String| {
                if segment.len() > 1 {
                    let _ = writeln!(
                        out,
                        r#"<polyline fill="none" stroke="{colour}" stroke-width="1.8" points="{}"/>"#,
                        segment.join(" ")
                    );
                } else if let Some(p) = segment.first() {
                    let (x, y) = p.split_once(',').expect("point");
                    let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="2" fill="{colour}"/>"#);
                }
                segment.clear();
            };
            for (k, &(x, y)) in series.points.iter().enumerate() {
                if k % stride != 0 && k != last {
                    continue;
                }
                match y {
                    Some(y) if y.is_finite() && x.is_finite() => {
                        segment.push(format!("{:.2},{:.2}", sx(x), sy(y)))
                    }
                    _ => flush(&mut segment, &mut out),
                }
            }
            flush(&mut segment, &mut out);

            let ly = TOP + 14.0 + 20.0 * idx as f64;
            let lx = LEFT + plot_w + 14.0;
            let _ = writeln!(
                out,
                r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{colour}" stroke-width="2.5"/><text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">{}</text>"#,
                lx + 22.0,
                lx + 28.0,
                ly + 4.0,
                escape(&series.label)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart(points: Vec<(f64, Option<f64>)>) -> LineChart {
        LineChart {
            title: "E vs <γ>".into(),
            x_label: "coupling".into(),
            y_label: "energy".into(),
            series: vec![Series {
                label: "N = 1".into(),
                points,
            }],
        }
    }

    #[test]
    fn well_formed_document() {
        let svg = chart(vec![(0.0, Some(1.0)), (1.0, Some(0.5)), (2.0, Some(0.2))]).to_svg();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("E vs &lt;γ&gt;"));
        assert_eq!(svg.matches("<svg").count(), 1);
    }

    #[test]
    fn gaps_split_lines() {
        let svg = chart(vec![
            (0.0, None),
            (1.0, Some(-0.1)),
            (2.0, Some(-0.3)),
            (3.0, None),
            (4.0, Some(-0.5)),
            (5.0, Some(-0.9)),
        ])
        .to_svg();
        assert_eq!(svg.matches("<polyline").count(), 2);
    }

    #[test]
    fn empty_chart_renders_placeholder() {
        let svg = chart(vec![(0.0, None)]).to_svg();
        assert!(svg.contains("no data"));
    }

    #[test]
    fn ticks_are_round() {
        assert_eq!(nice_ticks(0.0, 10.0, 5), vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        assert_eq!(fmt_tick(0.25), "0.25");
        assert_eq!(fmt_tick(-0.0001), "-1.0e-4");
    }

    #[test]
    fn deterministic() {
        let c = chart((0..5000).map(|k| (k as f64, Some((k as f64).sin()))).collect());
        assert_eq!(c.to_svg(), c.to_svg());
        assert!(c.to_svg().len() < 200_000);
    }
}
