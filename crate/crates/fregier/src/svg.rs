//! Minimal deterministic SVG 1.1 emitter for the experiment figures.
//!
//! Output is a pure function of the drawing calls: fixed 1000×700 viewBox,
//! fixed decimal formatting, no timestamps or identifiers, so identical
//! configurations produce byte-identical files.

use nalgebra::Point2;

use crate::conic::{EllipseAxes, ProjLine};

const WIDTH: f64 = 1000.0;
const HEIGHT: f64 = 700.0;
/// Fraction of each dimension reserved as margin on both sides.
const MARGIN: f64 = 0.05;

/// A canvas whose world→screen transform is fixed by the reference ellipse
/// (or circle) the figure is built around: the ellipse's bounding box fills
/// the 1000×700 viewBox up to a 5% margin, y pointing up.
pub struct Canvas {
    scale: f64,
    body: String,
}

impl Canvas {
    /// Canvas fitted to the axis-aligned ellipse with semi-axes `(a, b)`.
    pub fn fit_ellipse(a: f64, b: f64) -> Canvas {
        let usable_w = WIDTH * (1.0 - 2.0 * MARGIN);
        let usable_h = HEIGHT * (1.0 - 2.0 * MARGIN);
        let scale = (usable_w / (2.0 * a)).min(usable_h / (2.0 * b));
        let mut c = Canvas {
            scale,
            body: String::new(),
        };
        c.body.push_str(&format!(
            "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
        ));
        c
    }

    fn sx(&self, x: f64) -> f64 {
        WIDTH / 2.0 + self.scale * x
    }

    fn sy(&self, y: f64) -> f64 {
        HEIGHT / 2.0 - self.scale * y
    }

    fn fmt(v: f64) -> String {
        format!("{v:.3}")
    }

    /// Axis-aligned ellipse outline centred at `c`.
    pub fn ellipse(&mut self, c: &Point2<f64>, rx: f64, ry: f64, stroke: &str, width: f64) {
        self.body.push_str(&format!(
            "<ellipse cx=\"{}\" cy=\"{}\" rx=\"{}\" ry=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>\n",
            Self::fmt(self.sx(c.x)),
            Self::fmt(self.sy(c.y)),
            Self::fmt(self.scale * rx),
            Self::fmt(self.scale * ry),
        ));
    }

    /// Possibly tilted ellipse given by its axis data.
    pub fn ellipse_axes(&mut self, axes: &EllipseAxes, stroke: &str, width: f64) {
        let deg = -axes.tilt.to_degrees();
        self.body.push_str(&format!(
            "<ellipse cx=\"{}\" cy=\"{}\" rx=\"{}\" ry=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\" transform=\"rotate({} {} {})\"/>\n",
            Self::fmt(self.sx(axes.center.x)),
            Self::fmt(self.sy(axes.center.y)),
            Self::fmt(self.scale * axes.a1),
            Self::fmt(self.scale * axes.b1),
            Self::fmt(deg),
            Self::fmt(self.sx(axes.center.x)),
            Self::fmt(self.sy(axes.center.y)),
        ));
    }

    pub fn circle(&mut self, c: &Point2<f64>, r: f64, stroke: &str, width: f64, dashed: bool) {
        let dash = if dashed {
            " stroke-dasharray=\"6 4\""
        } else {
            ""
        };
        self.body.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\"{dash}/>\n",
            Self::fmt(self.sx(c.x)),
            Self::fmt(self.sy(c.y)),
            Self::fmt(self.scale * r),
        ));
    }

    pub fn segment(&mut self, p: &Point2<f64>, q: &Point2<f64>, stroke: &str, width: f64) {
        self.body.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>\n",
            Self::fmt(self.sx(p.x)),
            Self::fmt(self.sy(p.y)),
            Self::fmt(self.sx(q.x)),
            Self::fmt(self.sy(q.y)),
        ));
    }

    /// Infinite line clipped to the world window.
    pub fn line(&mut self, l: &ProjLine, stroke: &str, width: f64) {
        let xmax = WIDTH / (2.0 * self.scale);
        let ymax = HEIGHT / (2.0 * self.scale);
        let mut pts: Vec<Point2<f64>> = Vec::new();
        let mut push = |x: f64, y: f64| {
            if x.abs() <= xmax * 1.0001 && y.abs() <= ymax * 1.0001 {
                pts.push(Point2::new(x, y));
            }
        };
        // Intersections with the four window borders.
        if l.y.abs() > 1e-12 * l.x.abs() {
            for x in [-xmax, xmax] {
                push(x, -(l.x * x + l.z) / l.y);
            }
        }
        if l.x.abs() > 1e-12 * l.y.abs() {
            for y in [-ymax, ymax] {
                push(-(l.y * y + l.z) / l.x, y);
            }
        }
        // Keep the two extreme points.
        if pts.len() >= 2 {
            pts.sort_by(|p, q| (p.x, p.y).partial_cmp(&(q.x, q.y)).unwrap());
            let (p, q) = (pts[0], pts[pts.len() - 1]);
            if (q - p).norm() > 1e-9 {
                self.segment(&p, &q, stroke, width);
            }
        }
    }

    pub fn polygon(&mut self, pts: &[Point2<f64>], stroke: &str, width: f64) {
        if pts.is_empty() {
            return;
        }
        let coords: Vec<String> = pts
            .iter()
            .map(|p| format!("{},{}", Self::fmt(self.sx(p.x)), Self::fmt(self.sy(p.y))))
            .collect();
        self.body.push_str(&format!(
            "<polygon points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>\n",
            coords.join(" ")
        ));
    }

    pub fn dot(&mut self, p: &Point2<f64>, r: f64, fill: &str) {
        self.body.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{r}\" fill=\"{fill}\"/>\n",
            Self::fmt(self.sx(p.x)),
            Self::fmt(self.sy(p.y)),
        ));
    }

    pub fn label(&mut self, p: &Point2<f64>, text: &str, fill: &str) {
        self.body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"16\" fill=\"{fill}\">{}</text>\n",
            Self::fmt(self.sx(p.x) + 8.0),
            Self::fmt(self.sy(p.y) - 8.0),
            xml_escape(text),
        ));
    }

    pub fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n{}</svg>\n",
            self.body
        )
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
