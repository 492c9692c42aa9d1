//! Minimal SVG line charts: one polyline per numeric column against the first
//! numeric column.

use std::fmt::Write;

use super::table::{format_sig, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LogAxes {
    pub x: bool,
    pub y: bool,
}

impl std::str::FromStr for LogAxes {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "x" => Ok(Self { x: true, y: false }),
            "y" => Ok(Self { x: false, y: true }),
            "xy" | "yx" => Ok(Self { x: true, y: true }),
            _ => Err(format!("expected x, y or xy, got `{s}`")),
        }
    }
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 450.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite() && (!log || *v > 0.0)) {
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo <= 1e-300_f64.max(1e-12 * lo.abs()) {
            lo -= 0.5;
            hi += 0.5;
        }
        Self { lo, hi, log }
    }

    /// Position in `[0, 1]`, or `None` for values that cannot be drawn.
    fn unit(&self, v: f64) -> Option<f64> {
        if !v.is_finite() || (self.log && v <= 0.0) {
            return None;
        }
        let v = if self.log { v.log10() } else { v };
        Some((v - self.lo) / (self.hi - self.lo))
    }

    /// Tick positions in axis coordinates (log10 units on log axes).
    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let (a, b) = (self.lo.ceil() as i64, self.hi.floor() as i64);
            let step = ((b - a) / 8 + 1).max(1);
            return (a..=b).step_by(step as usize).map(|k| k as f64).collect();
        }
        let raw = (self.hi - self.lo) / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|s| *s >= raw)
            .unwrap_or(10.0 * mag);
        let mut t = (self.lo / step).ceil() * step;
        let mut out = Vec::new();
        while t <= self.hi + 1e-9 * step {
            out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
            t += step;
        }
        out
    }

    fn label(&self, tick: f64) -> String {
        if self.log {
            format!("1e{}", tick as i64)
        } else {
            format_sig(tick, 6)
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Renders `table` as a chart, or `None` when it has fewer than two numeric
/// columns.
pub fn render(table: &Table, log: LogAxes) -> Option<String> {
    let numeric: Vec<usize> = (0..table.columns.len())
        .filter(|&j| table.is_numeric(j))
        .collect();
    let (&xj, series) = numeric.split_first()?;
    if series.is_empty() {
        return None;
    }
    let xs = table.numeric_column(xj);
    let ys: Vec<Vec<f64>> = series.iter().map(|&j| table.numeric_column(j)).collect();
    let xa = Axis::fit(xs.iter().copied(), log.x);
    let ya = Axis::fit(ys.iter().flatten().copied(), log.y);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |u: f64| LEFT + u * pw;
    let py = |u: f64| TOP + (1.0 - u) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let (x0, x1, y0, y1) = (px(0.0), px(1.0), py(0.0), py(1.0));
    let _ = writeln!(
        s,
        r#"<path d="M{x0:.2},{y1:.2} L{x0:.2},{y0:.2} L{x1:.2},{y0:.2}" fill="none" stroke="black"/>"#
    );
    for t in xa.ticks() {
        let x = px((t - xa.lo) / (xa.hi - xa.lo));
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y0 + 5.0,
            y0 + 18.0,
            escape(&xa.label(t))
        );
    }
    for t in ya.ticks() {
        let y = py((t - ya.lo) / (ya.hi - ya.lo));
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            y + 4.0,
            escape(&ya.label(t))
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 10.0,
        escape(&table.columns[xj])
    );
    for (k, (col, y)) in series.iter().zip(&ys).enumerate() {
        let color = COLORS[k % COLORS.len()];
        let points: Vec<String> = xs
            .iter()
            .zip(y)
            .filter_map(|(&xv, &yv)| {
                Some(format!("{:.2},{:.2}", px(xa.unit(xv)?), py(ya.unit(yv)?)))
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            points.join(" ")
        );
        let ly = TOP + 16.0 * (k as f64 + 1.0);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            x1 + 10.0,
            x1 + 30.0,
            x1 + 35.0,
            ly + 4.0,
            escape(&table.columns[*col])
        );
    }
    s.push_str("</svg>\n");
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_one_polyline_per_series() {
        let mut t = Table::new(&["t", "a", "b"]);
        for k in 1..=5 {
            let x = k as f64;
            t.push(vec![x.into(), (x * x).into(), (1.0 / x).into()]);
        }
        let svg = render(&t, LogAxes { x: true, y: true }).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(svg.contains(">1e0<"));
    }

    #[test]
    fn log_axes_skip_nonpositive_points() {
        let mut t = Table::new(&["x", "y"]);
        t.push(vec![1.0.into(), (-1.0).into()]);
        t.push(vec![2.0.into(), 3.0.into()]);
        let svg = render(&t, LogAxes { x: false, y: true }).unwrap();
        let line = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
        assert_eq!(line.matches(',').count(), 1);
    }

    #[test]
    fn needs_two_numeric_columns() {
        let mut t = Table::new(&["kind", "x"]);
        t.push(vec!["inner".into(), 1.0.into()]);
        assert!(render(&t, LogAxes::default()).is_none());
    }
}
