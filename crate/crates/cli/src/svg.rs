//! Minimal SVG line plots.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Linear,
    Log,
}

impl Axis {
    fn map(self, v: f64) -> Option<f64> {
        match self {
            Axis::Linear => v.is_finite().then_some(v),
            Axis::Log => (v > 0.0 && v.is_finite()).then(|| v.log10()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

impl Series {
    pub fn new(label: impl Into<String>, xs: &[f64], ys: &[f64]) -> Self {
        Self { label: label.into(), points: xs.iter().copied().zip(ys.iter().copied()).collect(), dashed: false }
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }
}

#[derive(Debug, Clone)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_axis: Axis,
    pub y_axis: Axis,
    pub series: Vec<Series>,
    /// Written into a `<metadata>` element when set.
    pub timestamp: Option<String>,
}

impl LinePlot {
    pub fn new(title: impl Into<String>, x_label: impl Into<String>, y_label: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            x_axis: Axis::Linear,
            y_axis: Axis::Linear,
            series: Vec::new(),
            timestamp: None,
        }
    }

    pub fn axes(mut self, x: Axis, y: Axis) -> Self {
        self.x_axis = x;
        self.y_axis = y;
        self
    }

    pub fn with(mut self, s: Series) -> Self {
        self.series.push(s);
        self
    }

    pub fn render(&self) -> String {
        let mapped: Vec<Vec<(f64, f64)>> = self
            .series
            .iter()
            .map(|s| {
                s.points
                    .iter()
                    .filter_map(|(x, y)| Some((self.x_axis.map(*x)?, self.y_axis.map(*y)?)))
                    .collect()
            })
            .collect();
        let all = mapped.iter().flatten();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in all {
            x0 = x0.min(*x);
            x1 = x1.max(*x);
            y0 = y0.min(*y);
            y1 = y1.max(*y);
        }
        if !(x0.is_finite() && y0.is_finite()) {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        if x1 - x0 < 1e-300 {
            x1 = x0 + 1.0;
        }
        if y1 - y0 < 1e-300 {
            (y0, y1) = (y0 - 0.5, y0 + 0.5);
        }
        let pw = WIDTH - 2.0 * MARGIN;
        let ph = HEIGHT - 2.0 * MARGIN;
        let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * pw;
        let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        if let Some(ts) = &self.timestamp {
            let _ = writeln!(s, "<metadata>{}</metadata>", escape(ts));
        }
        let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, MARGIN / 2.0, escape(&self.title));
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, WIDTH / 2.0, HEIGHT - 15.0, escape(&self.x_label));
        let _ = writeln!(
            s,
            r#"<text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );
        for i in 0..=4 {
            let f = i as f64 / 4.0;
            let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                px(xv),
                HEIGHT - MARGIN + 16.0,
                tick(self.x_axis, xv)
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                MARGIN - 4.0,
                py(yv) + 4.0,
                tick(self.y_axis, yv)
            );
        }
        for (k, (series, pts)) in self.series.iter().zip(&mapped).enumerate() {
            let color = COLORS[k % COLORS.len()];
            let path: Vec<String> = pts.iter().map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y))).collect();
            let dash = if series.dashed { r#" stroke-dasharray="6,4""# } else { "" };
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
                path.join(" ")
            );
            let ly = MARGIN + 16.0 + 16.0 * k as f64;
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{ly:.2}" text-anchor="end" fill="{color}">{}</text>"#,
                WIDTH - MARGIN - 8.0,
                escape(&series.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn tick(axis: Axis, v: f64) -> String {
    match axis {
        Axis::Linear => format!("{v:.3}"),
        Axis::Log => format!("{:.2e}", 10f64.powf(v)),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_axes_drop_nonpositive_points_and_render_deterministically() {
        let plot = LinePlot::new("decay", "t", "sup")
            .axes(Axis::Log, Axis::Log)
            .with(Series::new("a <b>", &[1.0, 10.0, 100.0], &[1.0, 0.0, 1e-3]))
            .with(Series::new("bound", &[1.0, 100.0], &[2.0, 2e-3]).dashed());
        let a = plot.render();
        assert_eq!(a, plot.render());
        assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
        assert!(a.contains("a &lt;b&gt;") && a.contains("stroke-dasharray"));
        assert!(!a.contains("<metadata>"));
        assert_eq!(a.matches("<polyline").count(), 2);
    }
}
