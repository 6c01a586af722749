//! Envelopes of chords subtending a fixed inscribed angle.
//!
//! Fix a point `M` on an ellipse `E` and an angle `θ ∈ (0, π)`. As `N` runs
//! over `E`, the chord `NL` cut out by rotating the ray `MN` by `θ` around
//! `M` envelopes a smaller conic `E′`. At `θ = π/2` the envelope collapses
//! to a single point — the classical Frégier point of `M` — and for other
//! angles it is an ellipse whose area, tangent lines from `M`, and centre
//! obey the closed forms checked throughout this crate.
//!
//! Everything here works in the cartesian chart and is deliberately
//! independent of the trilinear closed forms in [`crate::frame`], so the two
//! routes can be compared against each other.

use nalgebra::{Matrix2, Point2, Vector2, Vector3};
use std::f64::consts::PI;

use crate::conic::{
    self, dehomogenize, homogenize, join, normalize_proj, DualConic, EllipseAxes, PointConic,
    ProjLine, ProjPoint,
};
use crate::error::{Error, Result};

/// Axis-aligned origin-centred ellipse `x²/a² + y²/b² = 1`.
#[derive(Debug, Clone, Copy)]
pub struct Ellipse {
    pub a: f64,
    pub b: f64,
}

impl Ellipse {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(Error::InvalidInput(format!(
                "semi-axes must be positive finite numbers, got a={a}, b={b}"
            )));
        }
        Ok(Ellipse { a, b })
    }

    pub fn point(&self, t: f64) -> Point2<f64> {
        Point2::new(self.a * t.cos(), self.b * t.sin())
    }

    /// Unit tangent direction at parameter `t` (counterclockwise).
    pub fn tangent_dir(&self, t: f64) -> Vector2<f64> {
        Vector2::new(-self.a * t.sin(), self.b * t.cos()).normalize()
    }

    pub fn conic(&self) -> PointConic {
        PointConic::from_coeffs(
            1.0 / (self.a * self.a),
            0.0,
            1.0 / (self.b * self.b),
            0.0,
            0.0,
            -1.0,
        )
    }

    pub fn area(&self) -> f64 {
        PI * self.a * self.b
    }

    /// Relative on-curve residual `|x²/a² + y²/b² − 1|`.
    pub fn residual(&self, p: &Point2<f64>) -> f64 {
        (p.x * p.x / (self.a * self.a) + p.y * p.y / (self.b * self.b) - 1.0).abs()
    }

    /// Second intersection of the line through `p` (on the ellipse) with
    /// direction `dir`; errors when the line is tangent at `p`.
    pub fn second_intersection(&self, p: &Point2<f64>, dir: &Vector2<f64>) -> Result<Point2<f64>> {
        let qa = dir.x * dir.x / (self.a * self.a) + dir.y * dir.y / (self.b * self.b);
        let qb = 2.0 * (p.x * dir.x / (self.a * self.a) + p.y * dir.y / (self.b * self.b));
        // p is on the ellipse, so the constant term vanishes and the other
        // root of qa·s² + qb·s = 0 is s = −qb/qa.
        let s = -qb / qa;
        if s.abs() < 1e-9 * (self.a + self.b) {
            return Err(Error::Degenerate(
                "ray is tangent to the ellipse at its base point".into(),
            ));
        }
        Ok(p + s * dir)
    }
}

fn validate_theta(theta: f64) -> Result<()> {
    if !theta.is_finite() || theta <= 0.0 || theta >= PI {
        return Err(Error::InvalidInput(format!(
            "inscribed angle must lie strictly inside (0, π), got {theta}"
        )));
    }
    Ok(())
}

fn validate_on_ellipse(e: &Ellipse, p: &Point2<f64>, what: &str) -> Result<()> {
    if e.residual(p) > 1e-7 {
        return Err(Error::InvalidInput(format!(
            "{what} = ({}, {}) is not on the ellipse (residual {:.2e})",
            p.x,
            p.y,
            e.residual(p)
        )));
    }
    Ok(())
}

/// One chord of the fixed-angle family: `N = E(t)` and `L`, the second
/// intersection of the ray `MN` rotated by `θ` about `M`.
#[derive(Debug, Clone)]
pub struct Chord {
    pub n: Point2<f64>,
    pub l: Point2<f64>,
    /// Homogeneous line through `N` and `L`.
    pub line: ProjLine,
}

/// Construct the chord seen from `M` under angle `θ` whose first endpoint is
/// `E(t)`. Fails (degenerate sample) when `E(t)` collides with `M`, when the
/// rotated ray is tangent at `M`, or when the chord shrinks to a point.
///
/// The second endpoint is the other intersection of the *line* through `M`
/// along the rotated direction, so when that direction points out of the
/// ellipse the chord subtends the supplement `π − θ` instead of `θ`. Chords
/// at supplementary angles envelope the same conic, so the family traced by
/// sweeping `t` is the right one either way — and near `θ = π` it is the
/// supplement branch that keeps the family nonempty.
pub fn chord_at(e: &Ellipse, m: &Point2<f64>, theta: f64, t: f64) -> Result<Chord> {
    validate_theta(theta)?;
    validate_on_ellipse(e, m, "M")?;
    let n = e.point(t);
    let d = n - m;
    if d.norm() < 1e-9 * (e.a + e.b) {
        return Err(Error::Degenerate("sample point coincides with M".into()));
    }
    let (s, c) = theta.sin_cos();
    let rotated = Vector2::new(c * d.x - s * d.y, s * d.x + c * d.y).normalize();
    let l = e.second_intersection(m, &rotated)?;
    if (l - n).norm() < 1e-9 * (e.a + e.b) {
        return Err(Error::Degenerate("chord endpoints coincide".into()));
    }
    Ok(Chord {
        n,
        l,
        line: normalize_proj(&join(&homogenize(&n), &homogenize(&l))),
    })
}

/// What the fitted envelope turned out to be.
#[derive(Debug, Clone)]
pub enum EnvelopeShape {
    /// Nondegenerate envelope: point-form conic plus its axis data.
    Ellipse {
        conic: PointConic,
        axes: EllipseAxes,
    },
    /// Rank-1 dual: every chord passes through this point (θ = π/2).
    Point(Point2<f64>),
}

/// Result of [`fit_envelope`].
#[derive(Debug, Clone)]
pub struct EnvelopeFit {
    pub dual: DualConic,
    pub shape: EnvelopeShape,
    /// Chords used in the fit.
    pub used: usize,
    /// Chords held out of the fit for validation.
    pub held_out: usize,
    /// Largest tangency residual of a held-out chord against the fitted dual.
    pub holdout_max: f64,
    /// Mean tangency residual over the held-out chords.
    pub holdout_mean: f64,
}

impl EnvelopeFit {
    /// Area of the envelope; zero when it is a point.
    pub fn area(&self) -> f64 {
        match &self.shape {
            EnvelopeShape::Ellipse { axes, .. } => axes.area(),
            EnvelopeShape::Point(_) => 0.0,
        }
    }

    pub fn axes(&self) -> Option<&EllipseAxes> {
        match &self.shape {
            EnvelopeShape::Ellipse { axes, .. } => Some(axes),
            EnvelopeShape::Point(_) => None,
        }
    }

    pub fn point_conic(&self) -> Option<&PointConic> {
        match &self.shape {
            EnvelopeShape::Ellipse { conic, .. } => Some(conic),
            EnvelopeShape::Point(_) => None,
        }
    }
}

/// Fit the chord envelope at `M` for angle `θ` from `samples` evenly spaced
/// chord samples.
///
/// Every fourth valid chord is withheld from the dual-conic fit and used
/// only to score it, so the residuals report genuine out-of-sample tangency.
/// The degenerate `θ = π/2` case is detected from the chord geometry itself
/// (a concurrent family), not from the input angle.
pub fn fit_envelope(
    e: &Ellipse,
    m: &Point2<f64>,
    theta: f64,
    samples: usize,
) -> Result<EnvelopeFit> {
    validate_theta(theta)?;
    validate_on_ellipse(e, m, "M")?;
    if samples < 24 {
        return Err(Error::InvalidInput(format!(
            "envelope fit needs at least 24 samples, got {samples}"
        )));
    }
    let mut chords = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = 2.0 * PI * (i as f64) / (samples as f64);
        if let Ok(ch) = chord_at(e, m, theta, t) {
            chords.push(ch);
        }
    }
    if chords.len() < 20 {
        return Err(Error::Numerical(format!(
            "only {} of {samples} chord samples were usable",
            chords.len()
        )));
    }
    let mut fit_lines = Vec::new();
    let mut holdout = Vec::new();
    for (i, ch) in chords.iter().enumerate() {
        if i % 4 == 3 {
            holdout.push(ch.line);
        } else {
            fit_lines.push(ch.line);
        }
    }
    // A concurrent chord family (θ = π/2) makes the dual fit underdetermined,
    // so detect it first and represent the point envelope by its rank-1 dual.
    let (dual, shape) = if let Some(k) = conic::common_point_of_lines(&fit_lines) {
        (
            DualConic(k * k.transpose()),
            EnvelopeShape::Point(dehomogenize(&k)?),
        )
    } else {
        let dual = conic::dual_conic_from_lines(&fit_lines)?;
        let shape = if let Some(k) = dual.pencil_point() {
            EnvelopeShape::Point(dehomogenize(&k)?)
        } else {
            let conic = dual.point_form();
            let axes = conic::ellipse_metrics(&conic)?;
            EnvelopeShape::Ellipse { conic, axes }
        };
        (dual, shape)
    };
    let mut holdout_max = 0.0f64;
    let mut holdout_sum = 0.0f64;
    for l in &holdout {
        let r = conic::tangency_residual(&dual, l);
        holdout_max = holdout_max.max(r);
        holdout_sum += r;
    }
    let holdout_mean = if holdout.is_empty() {
        0.0
    } else {
        holdout_sum / holdout.len() as f64
    };
    Ok(EnvelopeFit {
        dual,
        shape,
        used: fit_lines.len(),
        held_out: holdout.len(),
        holdout_max,
        holdout_mean,
    })
}

/// Classical Frégier point of `M = (Mx, My)` on the ellipse: the common
/// point of all right-angle chords,
/// `K = ((a²−b²)/(a²+b²)·Mx, −(a²−b²)/(a²+b²)·My)`.
pub fn fregier_point(e: &Ellipse, m: &Point2<f64>) -> Point2<f64> {
    let c = (e.a * e.a - e.b * e.b) / (e.a * e.a + e.b * e.b);
    Point2::new(c * m.x, -c * m.y)
}

/// Squared ratio `k² = area(E′)² / (area(E)·|cos θ|)²` as a closed form in
/// the caustic ratio `ρ` and the angle:
/// `k² = ρ³(ρ+4)³cos²θ / ((ρ+1)² + (2ρ−1)cos²θ)³`.
pub fn area_ratio_sq(rho: f64, theta: f64) -> f64 {
    let c2 = theta.cos().powi(2);
    rho.powi(3) * (rho + 4.0).powi(3) * c2 / ((rho + 1.0).powi(2) + (2.0 * rho - 1.0) * c2).powi(3)
}

/// Predicted envelope area `√(k²)·|cos θ|·πab`. For a circle (`ρ = 1/2`)
/// this reduces to `πR²cos²θ`, the area of the concentric envelope circle of
/// radius `R|cos θ|`.
pub fn predicted_area(e: &Ellipse, rho: f64, theta: f64) -> f64 {
    area_ratio_sq(rho, theta).sqrt() * theta.cos().abs() * e.area()
}

/// Tangency points of the two tangents from `m` to the envelope conic.
fn tangency_points(envelope: &PointConic, m: &Point2<f64>) -> Result<(Point2<f64>, Point2<f64>)> {
    let (lines, _) = conic::tangent_lines_from_point(envelope, &homogenize(m))?;
    if lines.len() != 2 {
        return Err(Error::Degenerate(format!(
            "expected two tangents from M to the envelope, found {}",
            lines.len()
        )));
    }
    let dual = envelope.dual();
    let contact = |l: &ProjLine| -> Result<Point2<f64>> { dehomogenize(&(dual.0 * l)) };
    Ok((contact(&lines[0])?, contact(&lines[1])?))
}

/// Angle of the sector with apex `m` spanned by the envelope: the angle
/// between the rays from `m` to the two tangency points. Equals `|π − 2θ|`
/// for the fixed-angle chord envelope.
pub fn tangent_angle(envelope: &PointConic, m: &Point2<f64>) -> Result<f64> {
    let (t1, t2) = tangency_points(envelope, m)?;
    let r1 = (t1 - m).normalize();
    let r2 = (t2 - m).normalize();
    Ok(r1.dot(&r2).clamp(-1.0, 1.0).acos())
}

/// Relative residual of `m` against the orthoptic (director) circle of the
/// ellipse `axes`: `| |m−c|² − (a₁²+b₁²) | / (a₁²+b₁²)`. Zero exactly when
/// the two tangents from `m` are perpendicular.
pub fn orthoptic_residual(axes: &EllipseAxes, m: &Point2<f64>) -> f64 {
    let r2 = axes.a1 * axes.a1 + axes.b1 * axes.b1;
    ((m - axes.center).norm_squared() - r2).abs() / r2
}

/// Recover the envelope's squared semi-axes from its area and the distance
/// `d = |M − centre|` measured at the orthoptic angle `θ = π/4`, where
/// `d² = a₁² + b₁²`: the two roots of `z² − d²·z + (area/π)² = 0`.
pub fn axes_from_area_and_km(area: f64, d: f64) -> Result<(f64, f64)> {
    if !(area > 0.0 && d > 0.0) {
        return Err(Error::InvalidInput(
            "area and distance must be positive".into(),
        ));
    }
    let p = d * d;
    let q = (area / PI) * (area / PI);
    let disc = p * p - 4.0 * q;
    if disc < 0.0 {
        return Err(Error::Numerical(format!(
            "no real axes: d⁴ < 4(area/π)² (disc = {disc:e})"
        )));
    }
    let big = 0.5 * (p + disc.sqrt());
    let small = q / big;
    Ok((big.sqrt(), small.sqrt()))
}

/// What the centre locus degenerates to.
#[derive(Debug, Clone)]
pub enum LocusShape {
    /// All centres coincide (circle case: every envelope is concentric).
    Point(Point2<f64>),
    /// Least-squares conic through the centres, with axis data when it is a
    /// real ellipse.
    Conic {
        conic: PointConic,
        axes: Option<EllipseAxes>,
    },
}

/// Locus of envelope centres as `M` runs over the ellipse.
#[derive(Debug, Clone)]
pub struct CenterLocus {
    /// Sampled centres (Frégier points when `θ = π/2`), one per `M` sample.
    pub centers: Vec<Point2<f64>>,
    pub shape: LocusShape,
}

/// Decide whether a centre cloud is a single point (within `tol`) or a
/// genuine conic, and fit accordingly.
pub fn classify_centers(centers: &[Point2<f64>], tol: f64) -> Result<LocusShape> {
    if centers.len() < 5 {
        return Err(Error::InvalidInput(format!(
            "centre classification needs at least 5 points, got {}",
            centers.len()
        )));
    }
    let mean = centers
        .iter()
        .fold(Vector2::zeros(), |acc, p| acc + p.coords)
        / centers.len() as f64;
    let spread = centers
        .iter()
        .map(|p| (p.coords - mean).norm())
        .fold(0.0f64, f64::max);
    if spread < tol {
        return Ok(LocusShape::Point(Point2::from(mean)));
    }
    let pts: Vec<ProjPoint> = centers.iter().map(homogenize).collect();
    let conic = conic::conic_from_points(&pts)?;
    let axes = conic::ellipse_metrics(&conic).ok();
    Ok(LocusShape::Conic { conic, axes })
}

/// Sample `num_m` base points `M` on the ellipse, fit the envelope at each,
/// and fit a conic through the resulting centres.
pub fn center_locus(e: &Ellipse, theta: f64, num_m: usize, samples: usize) -> Result<CenterLocus> {
    validate_theta(theta)?;
    if num_m < 6 {
        return Err(Error::InvalidInput(format!(
            "centre locus needs at least 6 base points, got {num_m}"
        )));
    }
    let mut centers = Vec::with_capacity(num_m);
    for j in 0..num_m {
        // Fixed phase offset keeps the samples clear of the axis points,
        // where the centre locus degenerates hardest.
        let t = 2.0 * PI * (j as f64 + 0.37) / (num_m as f64);
        let m = e.point(t);
        let fit = fit_envelope(e, &m, theta, samples)?;
        let c = match &fit.shape {
            EnvelopeShape::Ellipse { axes, .. } => axes.center,
            EnvelopeShape::Point(k) => *k,
        };
        centers.push(c);
    }
    let shape = classify_centers(&centers, 1e-9 * (e.a + e.b))?;
    Ok(CenterLocus { centers, shape })
}

/// All points `M` on the ellipse from which the chord `NL` is seen under the
/// inscribed angle `θ`.
///
/// The locus of such viewpoints in the plane is a pair of mirror circular
/// arcs through `N` and `L`; intersecting the two full circles with the
/// ellipse and filtering by the realised angle yields every solution. When
/// the ellipse itself is one of those circles the answer is an arc of `E` —
/// infinitely many solutions — reported as a degeneracy.
pub fn reverse_problem(
    e: &Ellipse,
    n: &Point2<f64>,
    l: &Point2<f64>,
    theta: f64,
) -> Result<Vec<Point2<f64>>> {
    validate_theta(theta)?;
    validate_on_ellipse(e, n, "N")?;
    validate_on_ellipse(e, l, "L")?;
    let chord = l - n;
    let len = chord.norm();
    if len < 1e-9 * (e.a + e.b) {
        return Err(Error::InvalidInput(
            "chord endpoints N and L coincide".into(),
        ));
    }
    let mid = Point2::from((n.coords + l.coords) / 2.0);
    let perp = Vector2::new(-chord.y, chord.x) / len;
    let r = len / (2.0 * theta.sin());
    let offset = len / (2.0 * theta.tan());
    let e_conic = e.conic();
    let e_norm = e_conic.0 / e_conic.0.norm();
    let mut solutions: Vec<Point2<f64>> = Vec::new();
    for side in [1.0, -1.0] {
        let c = mid + side * offset * perp;
        let circle = PointConic::from_coeffs(
            1.0,
            0.0,
            1.0,
            -2.0 * c.x,
            -2.0 * c.y,
            c.x * c.x + c.y * c.y - r * r,
        );
        let c_norm = circle.0 / circle.0.norm();
        let dist = (c_norm - e_norm).norm().min((c_norm + e_norm).norm());
        if dist < 1e-9 {
            return Err(Error::Degenerate(
                "viewpoint circle coincides with the ellipse: infinitely many solutions".into(),
            ));
        }
        for p in conic::ellipse_conic_intersections(e.a, e.b, &circle)? {
            if (p - n).norm() < 1e-7 * (e.a + e.b) || (p - l).norm() < 1e-7 * (e.a + e.b) {
                continue;
            }
            // Points on the wrong arc of the circle see the chord under π−θ.
            let v1 = (n - p).normalize();
            let v2 = (l - p).normalize();
            let ang = v1.dot(&v2).clamp(-1.0, 1.0).acos();
            if (ang - theta).abs() > 1e-6 {
                continue;
            }
            if solutions
                .iter()
                .all(|q| (q - p).norm() > 1e-8 * (e.a + e.b))
            {
                solutions.push(p);
            }
        }
    }
    solutions.sort_by(|p, q| {
        p.y.atan2(p.x)
            .partial_cmp(&q.y.atan2(q.x))
            .expect("finite angles")
    });
    Ok(solutions)
}

/// The fourth intersection of the circle through `M, T₁, T₂` with the
/// ellipse, and the angles under which it sees the contact chord.
#[derive(Debug, Clone, Copy)]
pub struct FourthPoint {
    pub point: Point2<f64>,
    /// Angle between the rays from the fourth point to `T₁` and `T₂`.
    pub ray_angle: f64,
    /// Obtuse representative of the corresponding line pair's angle.
    pub line_angle_obtuse: f64,
}

/// Report of [`inscribed_special_check`].
#[derive(Debug, Clone)]
pub struct SpecialAngleReport {
    /// Second intersections with the ellipse of the two tangents from `M`
    /// to the envelope: with `M` they span the circumscribing triangle.
    pub t1: Point2<f64>,
    pub t2: Point2<f64>,
    /// Tangency residual of the triangle's third side `T₁T₂` against the
    /// envelope. Vanishes exactly at the special angles `θ = π/3, 2π/3`,
    /// where the envelope is inscribed in the triangle `MT₁T₂`.
    pub chord_residual: f64,
    pub chord_tangent_to_envelope: bool,
    pub fourth: Option<FourthPoint>,
}

/// Check the special-angle geometry at `M`: the tangents from `M` to the
/// envelope meet the ellipse again at `T₁, T₂`, and the chord `T₁T₂` is
/// tangent to the envelope exactly when `cos²θ = 1/4` (θ = π/3 or 2π/3).
/// Also locates the fourth intersection `M′` of the circumcircle `MT₁T₂`
/// with the ellipse, which sees `T₁T₂` under `|π − 2θ|` along rays — the
/// obtuse representative of that line pair's angle is `2θ` for `θ < π/2`.
pub fn inscribed_special_check(
    e: &Ellipse,
    m: &Point2<f64>,
    theta: f64,
    samples: usize,
) -> Result<SpecialAngleReport> {
    let fit = fit_envelope(e, m, theta, samples)?;
    let conic = fit.point_conic().ok_or_else(|| {
        Error::Degenerate("envelope collapses to a point; tangency chord undefined".into())
    })?;
    let (lines, _) = conic::tangent_lines_from_point(conic, &homogenize(m))?;
    if lines.len() != 2 {
        return Err(Error::Degenerate(format!(
            "expected two tangents from M to the envelope, found {}",
            lines.len()
        )));
    }
    let far_point = |l: &ProjLine| -> Result<Point2<f64>> {
        let dir = Vector2::new(-l.y, l.x).normalize();
        e.second_intersection(m, &dir)
    };
    let t1 = far_point(&lines[0])?;
    let t2 = far_point(&lines[1])?;
    let chord = join(&homogenize(&t1), &homogenize(&t2));
    let chord_residual = conic::tangency_residual(&fit.dual, &chord);
    let fourth = circumcircle_fourth_point(e, m, &t1, &t2).ok();
    Ok(SpecialAngleReport {
        t1,
        t2,
        chord_residual,
        chord_tangent_to_envelope: chord_residual < 1e-8,
        fourth,
    })
}

fn circumcircle_fourth_point(
    e: &Ellipse,
    m: &Point2<f64>,
    t1: &Point2<f64>,
    t2: &Point2<f64>,
) -> Result<FourthPoint> {
    // Circle x² + y² + Dx + Ey + F = 0 through the three points.
    let rows = [m, t1, t2];
    let a = nalgebra::Matrix3::from_fn(|i, j| match j {
        0 => rows[i].x,
        1 => rows[i].y,
        _ => 1.0,
    });
    let rhs = Vector3::from_fn(|i, _| -(rows[i].x * rows[i].x + rows[i].y * rows[i].y));
    let def = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("M, T₁, T₂ are collinear; no circumcircle".into()))?;
    let circle = PointConic::from_coeffs(1.0, 0.0, 1.0, def[0], def[1], def[2]);
    let scale = e.a + e.b;
    let mut candidates: Vec<Point2<f64>> = conic::ellipse_conic_intersections(e.a, e.b, &circle)?
        .into_iter()
        .filter(|p| {
            (p - m).norm() > 1e-6 * scale
                && (p - t1).norm() > 1e-6 * scale
                && (p - t2).norm() > 1e-6 * scale
        })
        .collect();
    if candidates.is_empty() {
        return Err(Error::Numerical(
            "circumcircle meets the ellipse only at M, T₁, T₂".into(),
        ));
    }
    // Generically exactly one point survives the filter; if roundoff leaves
    // several, prefer M's side of the chord (M′ shares M's arc) and
    // proximity to M.
    let chord = join(&homogenize(t1), &homogenize(t2));
    let side_m = chord.dot(&homogenize(m));
    candidates.sort_by(|p, q| {
        let sp = (chord.dot(&homogenize(p)) * side_m).signum();
        let sq = (chord.dot(&homogenize(q)) * side_m).signum();
        sq.partial_cmp(&sp)
            .unwrap()
            .then((p - m).norm().partial_cmp(&(q - m).norm()).unwrap())
    });
    let p = candidates[0];
    let r1 = (t1 - p).normalize();
    let r2 = (t2 - p).normalize();
    let ray_angle = r1.dot(&r2).clamp(-1.0, 1.0).acos();
    let line_angle_obtuse = if ray_angle < PI / 2.0 {
        PI - ray_angle
    } else {
        ray_angle
    };
    Ok(FourthPoint {
        point: p,
        ray_angle,
        line_angle_obtuse,
    })
}

/// Rotation by `angle` as a 2×2 matrix (counterclockwise).
pub fn rotation(angle: f64) -> Matrix2<f64> {
    let (s, c) = angle.sin_cos();
    Matrix2::new(c, -s, s, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn circle_envelope_is_a_concentric_circle_of_radius_cos_theta() {
        let e = Ellipse::new(1.0, 1.0).unwrap();
        let m = e.point(0.3);
        let theta = PI / 3.0;
        let fit = fit_envelope(&e, &m, theta, 48).unwrap();
        let axes = fit.axes().expect("circle envelope is an ellipse");
        assert_relative_eq!(axes.a1, 0.5, epsilon = 1e-9);
        assert_relative_eq!(axes.b1, 0.5, epsilon = 1e-9);
        assert!(axes.center.coords.norm() < 1e-9);
        assert!(
            fit.holdout_max < 1e-12,
            "holdout residual {}",
            fit.holdout_max
        );
    }

    #[test]
    fn right_angle_envelope_collapses_to_the_fregier_point() {
        let e = Ellipse::new(2.0, 1.0).unwrap();
        let m = Point2::new(2.0, 0.0);
        let fit = fit_envelope(&e, &m, PI / 2.0, 48).unwrap();
        match fit.shape {
            EnvelopeShape::Point(k) => {
                let want = fregier_point(&e, &m);
                assert_relative_eq!(want.x, 1.2, epsilon = 1e-15);
                assert_relative_eq!(want.y, 0.0, epsilon = 1e-15);
                assert!(
                    (k - want).norm() < 1e-9,
                    "fitted point {k:?} vs closed form {want:?}"
                );
            }
            EnvelopeShape::Ellipse { .. } => panic!("θ=π/2 envelope must be a point"),
        }
    }

    #[test]
    fn fitted_area_matches_the_closed_form() {
        let e = Ellipse::new(2.0, 1.0).unwrap();
        let rho = crate::frame::BilliardFrame::new(2.0, 1.0).unwrap().rho;
        let m = e.point(1.1);
        for (theta, want) in [
            (PI / 6.0, 3.8683592752999694),
            (PI / 4.0, 2.166_202_511_868_553),
            (PI / 3.0, 0.926_462_295_747_561_1),
        ] {
            let fit = fit_envelope(&e, &m, theta, 48).unwrap();
            assert_relative_eq!(fit.area(), want, max_relative = 1e-9);
            assert_relative_eq!(predicted_area(&e, rho, theta), want, max_relative = 1e-12);
        }
    }

    #[test]
    fn envelope_is_invariant_under_theta_to_pi_minus_theta() {
        let e = Ellipse::new(1.5, 1.0).unwrap();
        let m = e.point(0.7);
        let f1 = fit_envelope(&e, &m, PI / 5.0, 48).unwrap();
        let f2 = fit_envelope(&e, &m, 4.0 * PI / 5.0, 48).unwrap();
        let (a1, a2) = (f1.axes().unwrap(), f2.axes().unwrap());
        assert_relative_eq!(a1.a1, a2.a1, max_relative = 1e-9);
        assert_relative_eq!(a1.b1, a2.b1, max_relative = 1e-9);
        assert!((a1.center - a2.center).norm() < 1e-9);
    }

    #[test]
    fn tangent_angle_is_pi_minus_two_theta() {
        let e = Ellipse::new(2.0, 1.0).unwrap();
        let m = e.point(0.9);
        for theta in [PI / 6.0, PI / 4.0, PI / 3.0] {
            let fit = fit_envelope(&e, &m, theta, 48).unwrap();
            let ang = tangent_angle(fit.point_conic().unwrap(), &m).unwrap();
            assert_relative_eq!(ang, PI - 2.0 * theta, epsilon = 1e-8);
        }
        // Supplementary angle: same envelope, same sector.
        let fit = fit_envelope(&e, &m, 2.0 * PI / 3.0, 48).unwrap();
        let ang = tangent_angle(fit.point_conic().unwrap(), &m).unwrap();
        assert_relative_eq!(ang, PI / 3.0, epsilon = 1e-8);
    }

    #[test]
    fn orthoptic_angle_places_m_on_the_director_circle() {
        let e = Ellipse::new(2.0, 1.0).unwrap();
        let m = e.point(2.1);
        let fit = fit_envelope(&e, &m, PI / 4.0, 48).unwrap();
        let axes = fit.axes().unwrap();
        assert!(orthoptic_residual(axes, &m) < 1e-8);
        // And the axes are recoverable from (area, |M−centre|).
        let d = (m - axes.center).norm();
        let (a1, b1) = axes_from_area_and_km(axes.area(), d).unwrap();
        assert_relative_eq!(a1, axes.a1, max_relative = 1e-7);
        assert_relative_eq!(b1, axes.b1, max_relative = 1e-7);
    }

    #[test]
    fn reverse_problem_recovers_the_viewpoint() {
        let e = Ellipse::new(2.0, 1.0).unwrap();
        let m = e.point(0.65);
        let theta = PI / 3.0;
        let ch = chord_at(&e, &m, theta, 2.9).unwrap();
        let sols = reverse_problem(&e, &ch.n, &ch.l, theta).unwrap();
        assert!(
            sols.iter().any(|p| (p - m).norm() < 1e-7),
            "original viewpoint missing from {sols:?}"
        );
        for p in &sols {
            let ang = ((ch.n - p).normalize().dot(&(ch.l - p).normalize())).acos();
            assert_relative_eq!(ang, theta, epsilon = 1e-6);
        }
    }

    #[test]
    fn reverse_problem_flags_the_circle_degeneracy() {
        // On a circle every point of the appropriate arc sees a chord under
        // the same angle: the viewpoint circle coincides with the ellipse.
        let e = Ellipse::new(1.0, 1.0).unwrap();
        let n = e.point(0.0);
        let l = e.point(PI / 2.0);
        let err = reverse_problem(&e, &n, &l, PI / 4.0).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)), "got {err:?}");
    }

    #[test]
    fn envelope_is_inscribed_in_the_tangent_triangle_only_at_pi_thirds() {
        let e = Ellipse::new(2.0, 1.0).unwrap();
        let m = e.point(0.9);
        for theta in [PI / 3.0, 2.0 * PI / 3.0] {
            let special = inscribed_special_check(&e, &m, theta, 48).unwrap();
            assert!(
                special.chord_tangent_to_envelope,
                "residual {} at θ={theta}",
                special.chord_residual
            );
        }
        for theta in [PI / 4.0, 2.0 * PI / 5.0] {
            let generic = inscribed_special_check(&e, &m, theta, 48).unwrap();
            assert!(
                generic.chord_residual > 1e-4,
                "residual {} unexpectedly small at θ={theta}",
                generic.chord_residual
            );
        }
        let special = inscribed_special_check(&e, &m, PI / 3.0, 48).unwrap();
        let fourth = special.fourth.expect("fourth point exists at θ=π/3");
        assert!(e.residual(&fourth.point) < 1e-8);
        assert_relative_eq!(fourth.ray_angle, PI / 3.0, epsilon = 1e-7);
        assert_relative_eq!(fourth.line_angle_obtuse, 2.0 * PI / 3.0, epsilon = 1e-7);
    }
}
