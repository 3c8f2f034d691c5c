//! Minimal SVG charts: scatter, error bars, and line overlays. CSV files
//! are the authoritative outputs; these exist for quick visual checks.

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 70.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Optional (low, high) error bar per point.
    pub bars: Option<Vec<(f64, f64)>>,
}

pub struct Chart<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub series: Vec<Series>,
    /// Drawn as connected lines instead of markers.
    pub lines: bool,
    /// Provenance comment embedded in the file.
    pub provenance: &'a str,
}

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn from_values(values: impl Iterator<Item = f64>) -> Self {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in values {
            if v.is_finite() {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        if !lo.is_finite() {
            lo = 0.0;
            hi = 1.0;
        }
        if hi - lo < 1e-12 {
            lo -= 0.5;
            hi += 0.5;
        }
        let pad = 0.06 * (hi - lo);
        Axis { lo: lo - pad, hi: hi + pad }
    }

    fn ticks(&self) -> Vec<f64> {
        let span = self.hi - self.lo;
        let raw = span / 6.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|&s| span / s <= 7.0)
            .unwrap_or(mag * 10.0);
        let first = (self.lo / step).ceil() * step;
        let mut t = Vec::new();
        let mut v = first;
        while v <= self.hi + 1e-9 * step {
            t.push(v);
            v += step;
        }
        t
    }
}

pub fn render(chart: &Chart) -> String {
    let xs = Axis::from_values(
        chart.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)),
    );
    let ys = Axis::from_values(chart.series.iter().flat_map(|s| {
        s.points
            .iter()
            .map(|p| p.1)
            .chain(s.bars.iter().flatten().flat_map(|b| [b.0, b.1]))
    }));
    let px = |x: f64| MARGIN + (x - xs.lo) / (xs.hi - xs.lo) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - ys.lo) / (ys.hi - ys.lo) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = format!(
        r#"<svg version="1.1" width="{WIDTH}" height="{HEIGHT}" xmlns="http://www.w3.org/2000/svg">"#
    );
    svg.push_str(&format!("\n<!-- {} -->\n", chart.provenance));
    svg.push_str(r#"<rect width="100%" height="100%" fill="white"/>"#);

    // axes and ticks
    svg.push_str(&format!(
        r#"<path d="M{m} {t} L{m} {b} L{r} {b}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    ));
    for tx in xs.ticks() {
        let x = px(tx);
        svg.push_str(&format!(
            r#"<line x1="{x:.1}" y1="{b}" x2="{x:.1}" y2="{b2}" stroke="black"/>"#,
            b = HEIGHT - MARGIN,
            b2 = HEIGHT - MARGIN + 6.0
        ));
        svg.push_str(&format!(
            r#"<text x="{x:.1}" y="{y}" text-anchor="middle" font-family="monospace" font-size="12">{tx:.3}</text>"#,
            y = HEIGHT - MARGIN + 20.0
        ));
        svg.push_str(&format!(
            r#"<line x1="{x:.1}" y1="{m}" x2="{x:.1}" y2="{b}" stroke="gainsboro"/>"#,
            m = MARGIN,
            b = HEIGHT - MARGIN
        ));
    }
    for ty in ys.ticks() {
        let y = py(ty);
        svg.push_str(&format!(
            r#"<line x1="{m2}" y1="{y:.1}" x2="{m}" y2="{y:.1}" stroke="black"/>"#,
            m = MARGIN,
            m2 = MARGIN - 6.0
        ));
        svg.push_str(&format!(
            r#"<text x="{x}" y="{y:.1}" text-anchor="end" dominant-baseline="middle" font-family="monospace" font-size="12">{ty:.3}</text>"#,
            x = MARGIN - 10.0
        ));
        svg.push_str(&format!(
            r#"<line x1="{m}" y1="{y:.1}" x2="{r}" y2="{y:.1}" stroke="gainsboro"/>"#,
            m = MARGIN,
            r = WIDTH - MARGIN
        ));
    }
    svg.push_str(&format!(
        r#"<text x="{x}" y="28" text-anchor="middle" font-family="monospace" font-size="16">{}</text>"#,
        chart.title,
        x = WIDTH / 2.0
    ));
    svg.push_str(&format!(
        r#"<text x="{x}" y="{y}" text-anchor="middle" font-family="monospace" font-size="13">{}</text>"#,
        chart.x_label,
        x = WIDTH / 2.0,
        y = HEIGHT - 18.0
    ));
    svg.push_str(&format!(
        r#"<text x="20" y="{y}" text-anchor="middle" font-family="monospace" font-size="13" transform="rotate(-90 20 {y})">{}</text>"#,
        chart.y_label,
        y = HEIGHT / 2.0
    ));

    for (si, series) in chart.series.iter().enumerate() {
        let color = COLORS[si % COLORS.len()];
        if let Some(bars) = &series.bars {
            for ((x, _), (lo, hi)) in series.points.iter().zip(bars) {
                let xp = px(*x);
                svg.push_str(&format!(
                    r#"<line x1="{xp:.1}" y1="{:.1}" x2="{xp:.1}" y2="{:.1}" stroke="{color}" stroke-width="1.5"/>"#,
                    py(*lo),
                    py(*hi)
                ));
                for v in [lo, hi] {
                    svg.push_str(&format!(
                        r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-width="1.5"/>"#,
                        xp - 5.0,
                        py(*v),
                        xp + 5.0,
                        py(*v)
                    ));
                }
            }
        }
        if chart.lines {
            let mut d = String::new();
            for (i, (x, y)) in series.points.iter().enumerate() {
                d.push_str(&format!(
                    "{}{:.1} {:.1} ",
                    if i == 0 { 'M' } else { 'L' },
                    px(*x),
                    py(*y)
                ));
            }
            svg.push_str(&format!(
                r#"<path d="{d}" stroke="{color}" stroke-width="1.5" fill="none"/>"#
            ));
        } else {
            for (x, y) in &series.points {
                svg.push_str(&format!(
                    r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}" fill-opacity="0.6"/>"#,
                    px(*x),
                    py(*y)
                ));
            }
        }
        // legend
        let ly = MARGIN + 18.0 * si as f64 + 4.0;
        svg.push_str(&format!(
            r#"<rect x="{x}" y="{y:.1}" width="12" height="12" fill="{color}"/>"#,
            x = WIDTH - MARGIN - 170.0,
            y = ly
        ));
        svg.push_str(&format!(
            r#"<text x="{x}" y="{y:.1}" font-family="monospace" font-size="12" dominant-baseline="middle">{}</text>"#,
            series.label,
            x = WIDTH - MARGIN - 152.0,
            y = ly + 6.0
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
