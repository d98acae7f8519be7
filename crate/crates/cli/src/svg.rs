//! Minimal deterministic SVG rendering: fixed canvas, fixed-precision
//! coordinates, no timestamps or randomness, so identical inputs give
//! byte-identical figures.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 62.0;
const MARGIN_RIGHT: f64 = 18.0;
const MARGIN_TOP: f64 = 18.0;
const MARGIN_BOTTOM: f64 = 48.0;

const PALETTE: [&str; 6] = [
    "#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2", "#9d755d",
];

struct Frame {
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN_LEFT
            + (v - self.x_lo) / (self.x_hi - self.x_lo) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT
            - MARGIN_BOTTOM
            - (v - self.y_lo) / (self.y_hi - self.y_lo) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn open_svg(out: &mut String) {
    let _ = write!(
        out,
        "<svg xmlns='http://www.w3.org/2000/svg' width='{WIDTH:.0}' height='{HEIGHT:.0}' \
         viewBox='0 0 {WIDTH:.0} {HEIGHT:.0}' font-family='monospace' font-size='11'>\n\
         <rect width='{WIDTH:.0}' height='{HEIGHT:.0}' fill='white'/>\n"
    );
}

fn axes(out: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    let _ = writeln!(
        out,
        "<line x1='{x0:.2}' y1='{y0:.2}' x2='{x1:.2}' y2='{y0:.2}' stroke='#333' stroke-width='1'/>"
    );
    let _ = writeln!(
        out,
        "<line x1='{x0:.2}' y1='{y0:.2}' x2='{x0:.2}' y2='{y1:.2}' stroke='#333' stroke-width='1'/>"
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let xv = frame.x_lo + t * (frame.x_hi - frame.x_lo);
        let xp = frame.x(xv);
        let _ = writeln!(
            out,
            "<line x1='{xp:.2}' y1='{y0:.2}' x2='{xp:.2}' y2='{:.2}' stroke='#333' stroke-width='1'/>",
            y0 + 4.0
        );
        let _ = writeln!(
            out,
            "<text x='{xp:.2}' y='{:.2}' text-anchor='middle' fill='#333'>{xv:.2}</text>",
            y0 + 16.0
        );
        let yv = frame.y_lo + t * (frame.y_hi - frame.y_lo);
        let yp = frame.y(yv);
        let _ = writeln!(
            out,
            "<line x1='{:.2}' y1='{yp:.2}' x2='{x0:.2}' y2='{yp:.2}' stroke='#333' stroke-width='1'/>",
            x0 - 4.0
        );
        let _ = writeln!(
            out,
            "<text x='{:.2}' y='{:.2}' text-anchor='end' fill='#333'>{yv:.3}</text>",
            x0 - 7.0,
            yp + 3.5
        );
    }
    let _ = writeln!(
        out,
        "<text x='{:.2}' y='{:.2}' text-anchor='middle' fill='#333'>{}</text>",
        (x0 + x1) / 2.0,
        HEIGHT - 10.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        "<text x='14' y='{:.2}' text-anchor='middle' fill='#333' transform='rotate(-90 14 {:.2})'>{}</text>",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

fn legend(out: &mut String, names: &[String]) {
    if names.len() < 2 {
        return;
    }
    for (i, name) in names.iter().enumerate() {
        let y = MARGIN_TOP + 6.0 + 16.0 * i as f64;
        let x = WIDTH - MARGIN_RIGHT - 170.0;
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            out,
            "<rect x='{x:.2}' y='{y:.2}' width='10' height='10' fill='{color}' fill-opacity='0.7'/>"
        );
        let _ = writeln!(
            out,
            "<text x='{:.2}' y='{:.2}' fill='#333'>{}</text>",
            x + 14.0,
            y + 9.0,
            escape(name)
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// One histogram bin: (low, high, count).
pub type Bin = (f64, f64, usize);

/// Overlaid bar histograms. Each series is (name, bins).
pub fn histogram_svg(series: &[(String, Vec<Bin>)], x_label: &str) -> String {
    let mut x_lo = f64::INFINITY;
    let mut x_hi = f64::NEG_INFINITY;
    let mut y_hi = 0.0f64;
    for (_, bins) in series {
        for &(low, high, count) in bins {
            x_lo = x_lo.min(low);
            x_hi = x_hi.max(high);
            y_hi = y_hi.max(count as f64);
        }
    }
    if !x_lo.is_finite() || x_hi <= x_lo {
        x_lo = 0.0;
        x_hi = 1.0;
    }
    if y_hi <= 0.0 {
        y_hi = 1.0;
    }
    let frame = Frame {
        x_lo,
        x_hi,
        y_lo: 0.0,
        y_hi: y_hi * 1.05,
    };

    let mut out = String::new();
    open_svg(&mut out);
    for (i, (_, bins)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        for &(low, high, count) in bins {
            if count == 0 {
                continue;
            }
            let x = frame.x(low);
            let w = frame.x(high) - x;
            let y = frame.y(count as f64);
            let h = frame.y(0.0) - y;
            let _ = writeln!(
                out,
                "<rect x='{x:.2}' y='{y:.2}' width='{w:.2}' height='{h:.2}' fill='{color}' \
                 fill-opacity='0.55' stroke='{color}' stroke-width='0.8'/>"
            );
        }
    }
    axes(&mut out, &frame, x_label, "count");
    legend(
        &mut out,
        &series.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
    );
    out.push_str("</svg>\n");
    out
}

/// Scatter plot; each series is (name, points).
pub fn scatter_svg(series: &[(String, Vec<(f64, f64)>)], x_label: &str, y_label: &str) -> String {
    let mut x_lo = f64::INFINITY;
    let mut x_hi = f64::NEG_INFINITY;
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for (_, pts) in series {
        for &(x, y) in pts {
            x_lo = x_lo.min(x);
            x_hi = x_hi.max(x);
            y_lo = y_lo.min(y);
            y_hi = y_hi.max(y);
        }
    }
    if !x_lo.is_finite() {
        x_lo = 0.0;
        x_hi = 1.0;
    }
    if x_hi <= x_lo {
        x_hi = x_lo + 1.0;
    }
    if !y_lo.is_finite() {
        y_lo = 0.0;
        y_hi = 1.0;
    }
    if y_hi <= y_lo {
        y_hi = y_lo + 1.0;
    }
    let pad_x = (x_hi - x_lo) * 0.05;
    let pad_y = (y_hi - y_lo) * 0.05;
    let frame = Frame {
        x_lo: x_lo - pad_x,
        x_hi: x_hi + pad_x,
        y_lo: y_lo - pad_y,
        y_hi: y_hi + pad_y,
    };

    let mut out = String::new();
    open_svg(&mut out);
    for (i, (_, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        for &(x, y) in pts {
            let _ = writeln!(
                out,
                "<circle cx='{:.2}' cy='{:.2}' r='3.5' fill='{color}' fill-opacity='0.8'/>",
                frame.x(x),
                frame.y(y)
            );
        }
    }
    axes(&mut out, &frame, x_label, y_label);
    legend(
        &mut out,
        &series.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_is_deterministic_and_draws_every_bin() {
        let bins = vec![(0.0, 0.5, 3usize), (0.5, 1.0, 7), (1.0, 1.5, 0)];
        let a = histogram_svg(&[("run".to_string(), bins.clone())], "relative error");
        let b = histogram_svg(&[("run".to_string(), bins)], "relative error");
        assert_eq!(a, b);
        // Two nonzero bins -> two bars.
        assert_eq!(a.matches("<rect").count() - 1, 2); // minus background rect
    }

    #[test]
    fn scatter_plots_all_points() {
        let pts: Vec<(f64, f64)> = (10..=20).map(|n| (n as f64, 1.0 / n as f64)).collect();
        let svgtext = scatter_svg(&[("p_gs".to_string(), pts)], "n", "p_gs");
        assert_eq!(svgtext.matches("<circle").count(), 11);
    }
}
