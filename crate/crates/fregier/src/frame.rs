//! Trilinear coordinates adapted to the isosceles 3-periodic billiard orbit
//! of an ellipse.
//!
//! For an ellipse `x²/a² + y²/b² = 1` with `a ≥ b` there is a unique
//! isosceles triangle, apex at `(0, b)`, that is a closed billiard
//! trajectory (each side reflects off the ellipse at the vertices). Its
//! shape is governed by a single parameter `h ∈ [0, 1)` solving
//! `(a/b)² = (1+h)(3−h) / ((1−h)(3+h))`.
//!
//! Working in trilinear coordinates with respect to that triangle turns the
//! ellipse into the Steiner circumellipse form `βγ + γα + αβ = 0`, makes its
//! points rational in a parameter `u`, and gives closed forms for the
//! envelope machinery built on top: the degenerate tangent-line pair of the
//! fixed-angle chord envelope, the envelope centre, the centre locus, and
//! the inscribed caustic of the triangle family (the Mandart inellipse).

use nalgebra::{Matrix3, Point2, Vector3};

use crate::conic::{
    self, dehomogenize, homogenize, normalize_proj, DualConic, LineConicIntersection, PointConic,
    ProjLine, ProjPoint,
};
use crate::error::{Error, Result};

/// Shape parameter `h` of the isosceles billiard triangle for aspect ratio
/// `a/b ≥ 1`: the root in `[0, 1)` of `(1−q)h² − 2(q+1)h − 3(1−q) = 0`
/// where `q = (a/b)²`.
pub fn solve_h(a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
        return Err(Error::InvalidInput(format!(
            "semi-axes must be positive finite numbers, got a={a}, b={b}"
        )));
    }
    if a < b {
        return Err(Error::InvalidInput(format!(
            "expected a ≥ b (major axis horizontal), got a={a} < b={b}"
        )));
    }
    let q = (a / b) * (a / b);
    let c2 = 1.0 - q;
    let c1 = -2.0 * (q + 1.0);
    let c0 = -3.0 * (1.0 - q);
    if c2.abs() < 1e-14 {
        // Circle limit: the equation is linear and h = 0 (equilateral orbit).
        return Ok(-c0 / c1);
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    debug_assert!(disc > 0.0);
    // Citardauq form picks the root in [0, 1) without cancellation.
    let h = 2.0 * c0 / (-c1 + disc.sqrt());
    debug_assert!((0.0..1.0).contains(&h));
    Ok(h)
}

/// The isosceles 3-periodic billiard triangle of an ellipse together with
/// the trilinear change of frame it induces.
#[derive(Debug, Clone)]
pub struct BilliardFrame {
    pub a: f64,
    pub b: f64,
    /// Triangle shape parameter in `[0, 1)`; `0` is the equilateral orbit of
    /// a circle.
    pub h: f64,
    /// Caustic ratio `ρ = (1−h²)/2`.
    pub rho: f64,
    /// Semi-perimeter of the orbit triangle.
    pub s: f64,
    /// Apex vertex `A = (0, b)`.
    pub vertex_a: Point2<f64>,
    /// Base vertex `B` (negative x).
    pub vertex_b: Point2<f64>,
    /// Base vertex `C` (positive x).
    pub vertex_c: Point2<f64>,
    /// Side lengths opposite `A`, `B`, `C`.
    pub side_a: f64,
    pub side_b: f64,
    pub side_c: f64,
    /// Trilinear → cartesian homogeneous change of frame.
    phi: Matrix3<f64>,
    phi_inv: Matrix3<f64>,
}

impl BilliardFrame {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let h = solve_h(a, b)?;
        let rho = (1.0 - h * h) / 2.0;
        let s = b * (3.0 - h) * (3.0 + h).sqrt() / (2.0 * (1.0 - h).sqrt());
        let xb = b * (1.0 + h) * (3.0 - h) / (2.0 * ((1.0 - h) * (3.0 + h)).sqrt());
        let vertex_a = Point2::new(0.0, b);
        let vertex_b = Point2::new(-xb, -b * (1.0 - h) / 2.0);
        let vertex_c = Point2::new(xb, -b * (1.0 - h) / 2.0);
        let side_a = (vertex_b - vertex_c).norm();
        let side_b = (vertex_c - vertex_a).norm();
        let side_c = (vertex_a - vertex_b).norm();
        // Columns are the vertices weighted by opposite side lengths, so that
        // Φ·(α,β,γ) homogenises "actual trilinears" into cartesian points.
        let phi = Matrix3::new(
            side_a * vertex_a.x,
            side_b * vertex_b.x,
            side_c * vertex_c.x,
            side_a * vertex_a.y,
            side_b * vertex_b.y,
            side_c * vertex_c.y,
            side_a,
            side_b,
            side_c,
        );
        let phi_inv = phi
            .try_inverse()
            .ok_or_else(|| Error::Numerical("degenerate billiard triangle frame".into()))?;
        Ok(BilliardFrame {
            a,
            b,
            h,
            rho,
            s,
            vertex_a,
            vertex_b,
            vertex_c,
            side_a,
            side_b,
            side_c,
            phi,
            phi_inv,
        })
    }

    /// The ellipse in cartesian point form, `x²/a² + y²/b² − 1 = 0`.
    pub fn ellipse_conic(&self) -> PointConic {
        PointConic::from_coeffs(
            1.0 / (self.a * self.a),
            0.0,
            1.0 / (self.b * self.b),
            0.0,
            0.0,
            -1.0,
        )
    }

    /// The same ellipse in the trilinear frame: `βγ + γα + αβ = 0`
    /// (the circumconic of the orbit triangle).
    pub fn ellipse_conic_tri(&self) -> PointConic {
        PointConic(Matrix3::new(0.0, 0.5, 0.5, 0.5, 0.0, 0.5, 0.5, 0.5, 0.0))
    }

    // ------------------------------------------------------------------
    // Frame changes
    // ------------------------------------------------------------------

    /// Trilinear point → homogeneous cartesian point.
    pub fn tri_to_cart_h(&self, p: &ProjPoint) -> ProjPoint {
        self.phi * p
    }

    /// Trilinear point → affine cartesian point (errors on ideal points).
    pub fn tri_to_cart(&self, p: &ProjPoint) -> Result<Point2<f64>> {
        dehomogenize(&self.tri_to_cart_h(p))
    }

    /// Homogeneous cartesian point → trilinear point.
    pub fn cart_h_to_tri(&self, p: &ProjPoint) -> ProjPoint {
        self.phi_inv * p
    }

    /// Affine cartesian point → trilinear point.
    pub fn cart_to_tri(&self, p: &Point2<f64>) -> ProjPoint {
        normalize_proj(&(self.phi_inv * homogenize(p)))
    }

    /// Cartesian line → trilinear line.
    pub fn cart_line_to_tri(&self, l: &ProjLine) -> ProjLine {
        self.phi.transpose() * l
    }

    /// Trilinear line → cartesian line.
    pub fn tri_line_to_cart(&self, l: &ProjLine) -> ProjLine {
        self.phi_inv.transpose() * l
    }

    /// Point conic, cartesian matrix → trilinear matrix.
    pub fn conic_to_tri(&self, c: &PointConic) -> PointConic {
        PointConic(self.phi.transpose() * c.0 * self.phi)
    }

    /// Point conic, trilinear matrix → cartesian matrix.
    pub fn conic_to_cart(&self, c: &PointConic) -> PointConic {
        PointConic(self.phi_inv.transpose() * c.0 * self.phi_inv)
    }

    // ------------------------------------------------------------------
    // Rational points of the ellipse
    // ------------------------------------------------------------------

    /// Rational parametrisation of the ellipse in trilinears:
    /// `M(u) = (u+1 : u(u+1) : −u)`. `u = 0` is vertex `A`, `u = −1` is `C`,
    /// and `u → ∞` tends to `B`.
    pub fn ellipse_point_tri(&self, u: f64) -> ProjPoint {
        normalize_proj(&Vector3::new(u + 1.0, u * (u + 1.0), -u))
    }

    /// Cartesian image of `M(u)`.
    pub fn ellipse_point_cart(&self, u: f64) -> Result<Point2<f64>> {
        self.tri_to_cart(&self.ellipse_point_tri(u))
    }

    /// `M(u)` mapped into the circle picture (x compressed by `b/a`, placing
    /// the point on the circle of radius `b`), in closed form.
    pub fn circle_picture_point(&self, u: f64) -> Point2<f64> {
        let h = self.h;
        // u² + (1+h)(u+1) has negative discriminant for h ∈ [0,1): the
        // denominator never vanishes.
        let den = u * u + (1.0 + h) * (u + 1.0);
        let x = -u * (u + 2.0) * self.s * (1.0 - h * h).sqrt() / (den * (9.0 - h * h).sqrt());
        let y =
            ((h - 1.0) * u * u + 2.0 * (1.0 + h) * u + 2.0 * (1.0 + h)) * self.s * (1.0 - h).sqrt()
                / (den * (3.0 - h) * (3.0 + h).sqrt());
        Point2::new(x, y)
    }

    /// Intersect the trilinear line `(1 : m : n)` with the ellipse by solving
    /// the chord–conic system directly in the cartesian chart. Points come
    /// back in trilinears.
    pub fn line_ellipse_intersection_tri(&self, m: f64, n: f64) -> Result<LineConicIntersection> {
        let l_cart = self.tri_line_to_cart(&Vector3::new(1.0, m, n));
        let hits = conic::line_conic_intersection(&self.ellipse_conic(), &l_cart)?;
        Ok(LineConicIntersection {
            points: hits
                .points
                .iter()
                .map(|p| normalize_proj(&self.cart_h_to_tri(p)))
                .collect(),
            tangent: hits.tangent,
        })
    }

    // ------------------------------------------------------------------
    // Fixed-angle chord envelope, in closed form
    // ------------------------------------------------------------------

    /// The degenerate dual pencil parameter: `w = √((3+h)(1−h))·cot θ`.
    fn pair_w(&self, theta: f64) -> f64 {
        ((3.0 + self.h) * (1.0 - self.h)).sqrt() / theta.tan()
    }

    /// Scalar building blocks of the tangent-pair closed form at `M(u)`.
    fn pair_ks(&self, u: f64) -> (f64, f64, f64, f64) {
        let h = self.h;
        let k1 = ((1.0 - h) * u * u + (1.0 + h) * (1.0 + h) * (u + 1.0)) * (u + 2.0);
        let k2 = h * u + u * u + h + u + 1.0;
        let k3 = 2.0 * h * u.powi(3) - h * h * u + 3.0 * h * u * u
            - 2.0 * u.powi(3)
            - h * h
            - 3.0 * u * u
            - 2.0 * h
            - 3.0 * u
            - 1.0;
        let k4 = h * h * u * u + h * u.powi(3) + 2.0 * h * h * u + 3.0 * h * u * u - u.powi(3)
            + h * h
            + 6.0 * h * u
            + 2.0 * h
            + 1.0;
        (k1, k2, k3, k4)
    }

    /// The two tangent lines from `M(u)` to the fixed-angle chord envelope,
    /// in trilinear line coordinates. They form the degenerate members of
    /// the dual pencil `A ± k₂w·T`, where `A` is the chord from `M` to its
    /// Frégier point and `T` is the tangent to the ellipse at `M`; at
    /// `θ = π/2` both collapse onto `A`.
    pub fn tangent_pair_tri(&self, u: f64, theta: f64) -> (ProjLine, ProjLine) {
        let w = self.pair_w(theta);
        let (k1, k2, k3, k4) = self.pair_ks(u);
        let mk = |sgn: f64| {
            normalize_proj(&Vector3::new(
                (k1 + sgn * k2 * u * w) * u,
                k3 + sgn * k2 * w,
                (k4 + sgn * k2 * (u + 1.0) * w) * (u + 1.0),
            ))
        };
        (mk(1.0), mk(-1.0))
    }

    /// Same pair in cartesian line coordinates.
    pub fn tangent_pair_cart(&self, u: f64, theta: f64) -> (ProjLine, ProjLine) {
        let (lp, lm) = self.tangent_pair_tri(u, theta);
        (
            normalize_proj(&self.tri_line_to_cart(&lp)),
            normalize_proj(&self.tri_line_to_cart(&lm)),
        )
    }

    /// Centre of the fixed-angle chord envelope at `M(u)`, in trilinears.
    pub fn envelope_center_tri(&self, u: f64, theta: f64) -> ProjPoint {
        let h = self.h;
        let w2 = (3.0 + h) * (1.0 - h) / theta.tan().powi(2);
        let (_, k2, _, _) = self.pair_ks(u);
        let g = 3.0 - h * h;
        let common = u * u + u + 1.0;
        let alpha = (-(h * u + h + 2.0) * h - h * (u + 2.0) * u + common) * g + k2 * (1.0 - h) * w2;
        let beta = ((h * u + h + 2.0) * h + h * (u + 4.0) * u + common) * g + k2 * (1.0 + h) * w2;
        let gamma = ((h * u + h + 2.0) * h - h * u * u + common) * g + k2 * (1.0 + h) * w2;
        normalize_proj(&Vector3::new(alpha, beta, gamma))
    }

    /// Cartesian image of the envelope centre.
    pub fn envelope_center_cart(&self, u: f64, theta: f64) -> Result<Point2<f64>> {
        self.tri_to_cart(&self.envelope_center_tri(u, theta))
    }

    /// Coefficients `(k₁..k₆)` of the locus of envelope centres as `M` runs
    /// over the ellipse, as the trilinear conic
    /// `k₁α² + k₂β² + k₃γ² + k₄βγ + k₅γα + k₆αβ = 0`.
    pub fn locus_conic_coeffs(&self, theta: f64) -> [f64; 6] {
        let h = self.h;
        let w2 = (3.0 + h) * (1.0 - h) / theta.tan().powi(2);
        let g = 3.0 - h * h;
        let k2 = ((1.0 + h) * (3.0 - h) * w2 + g * (3.0 + h) * (1.0 - h)) * (w2 + g);
        let k1 = k2 * (1.0 + h) * (1.0 + h);
        let k4 = -((1.0 + h) * (3.0 - h) * w2 + 2.0 * g * g) * (1.0 + 2.0 * h - h * h) * w2
            - (h.powi(4) - 4.0 * h * h + 4.0 * h + 3.0) * g * g;
        let k5 = -((1.0 + h) * (3.0 - h) * w2 + 2.0 * g * g) * (1.0 - h * h) * w2
            - (h.powi(4) + 2.0 * h.powi(3) - 2.0 * h + 3.0) * g * g;
        [k1, k2, k2, k4, k5, k5]
    }

    /// The centre locus as a trilinear point conic.
    pub fn locus_conic_tri(&self, theta: f64) -> PointConic {
        let [k1, k2, k3, k4, k5, k6] = self.locus_conic_coeffs(theta);
        PointConic(Matrix3::new(
            k1,
            k6 / 2.0,
            k5 / 2.0,
            k6 / 2.0,
            k2,
            k4 / 2.0,
            k5 / 2.0,
            k4 / 2.0,
            k3,
        ))
    }

    /// The centre locus in the cartesian chart.
    pub fn locus_conic_cart(&self, theta: f64) -> PointConic {
        self.conic_to_cart(&self.locus_conic_tri(theta))
    }

    /// Common centre of every centre locus: `(1−h : 1+h : 1+h)` in
    /// trilinears (a fixed point on the y-axis).
    pub fn locus_center_tri(&self) -> ProjPoint {
        normalize_proj(&Vector3::new(1.0 - self.h, 1.0 + self.h, 1.0 + self.h))
    }

    // ------------------------------------------------------------------
    // The inscribed caustic of the orbit triangle (Mandart inellipse)
    // ------------------------------------------------------------------

    /// The caustic inscribed in the orbit triangle, in trilinear point form
    /// and dual form. The dual is `(1+h)²βγ + (1−h)γα + (1−h)αβ = 0` (zero
    /// diagonal: the three side lines of the triangle are tangents).
    pub fn mandart_caustic_tri(&self) -> (PointConic, DualConic) {
        let h = self.h;
        let p1 = (1.0 + h).powi(4);
        let p2 = (1.0 - h) * (1.0 - h);
        let q1 = -2.0 * p2;
        let q2 = -2.0 * (1.0 + h) * (1.0 + h) * (1.0 - h);
        let point = PointConic(Matrix3::new(
            p1,
            q2 / 2.0,
            q2 / 2.0,
            q2 / 2.0,
            p2,
            q1 / 2.0,
            q2 / 2.0,
            q1 / 2.0,
            p2,
        ));
        let d1 = (1.0 + h) * (1.0 + h);
        let d2 = 1.0 - h;
        let dual = DualConic(Matrix3::new(
            0.0,
            d2 / 2.0,
            d2 / 2.0,
            d2 / 2.0,
            0.0,
            d1 / 2.0,
            d2 / 2.0,
            d1 / 2.0,
            0.0,
        ));
        (point, dual)
    }

    /// Cartesian shape of the caustic: axis-aligned, centred at the origin,
    /// semi-axes `(a(1+h)/2, b(1−h)/2)` — confocal with the ellipse.
    pub fn mandart_axes(&self) -> conic::EllipseAxes {
        conic::EllipseAxes {
            center: Point2::new(0.0, 0.0),
            a1: self.a * (1.0 + self.h) / 2.0,
            b1: self.b * (1.0 - self.h) / 2.0,
            tilt: 0.0,
        }
    }

    /// Confocal parameter of the caustic: `λ₃ = b²(1+h)(3−h)/4`, the common
    /// value of `a² − a_c²` and `b² − b_c²`.
    pub fn mandart_lambda(&self) -> f64 {
        self.b * self.b * (1.0 + self.h) * (3.0 - self.h) / 4.0
    }

    /// For `M(u)` on the ellipse, the two chords tangent to the caustic hit
    /// the ellipse again at `M(u₂)`, `M(u₃)` where `u₂, u₃` are the roots of
    /// `X² − μX + ψ = 0`; returns `(μ, ψ, u₂, u₃)`. The map `u ↦ {u₂, u₃}`
    /// closes up into 3-cycles — this is the Poncelet porism for the
    /// triangle family.
    pub fn caustic_tangent_params(&self, u: f64) -> Result<CausticTangents> {
        let h = self.h;
        if u.abs() < 1e-12 || (u + 1.0).abs() < 1e-12 {
            return Err(Error::Degenerate(
                "chord parametrisation breaks at the triangle vertices (u = 0, −1)".into(),
            ));
        }
        let mu = ((1.0 - h) * u * u + (3.0 + h * h) * u + (1.0 + h) * (1.0 + h))
            / ((h - 1.0) * (u + 1.0) * u);
        let psi = -(1.0 + h) * (1.0 + h) / ((h - 1.0) * u);
        let disc = mu * mu - 4.0 * psi;
        if disc < 0.0 {
            return Err(Error::Numerical(format!(
                "tangent-chord quadratic has no real roots at u={u} (disc={disc:e})"
            )));
        }
        let q = -0.5 * (-mu - mu.signum() * disc.sqrt());
        let (u2, u3) = (q, psi / q);
        Ok(CausticTangents { mu, psi, u2, u3 })
    }
}

/// Output of [`BilliardFrame::caustic_tangent_params`].
#[derive(Debug, Clone, Copy)]
pub struct CausticTangents {
    /// Sum of the partner parameters.
    pub mu: f64,
    /// Product of the partner parameters.
    pub psi: f64,
    pub u2: f64,
    pub u3: f64,
}

/// Closed form for the two intersections of the trilinear line `(1 : m : n)`
/// with the circumconic `βγ + γα + αβ = 0`:
/// `M± = (−2mn : (m−n+1 ± √Δ)n : −(m−n−1 ± √Δ)m)` with
/// `Δ = (m−n)² − 2(m+n) + 1`.
pub fn circumconic_line_points(m: f64, n: f64) -> Result<(ProjPoint, ProjPoint)> {
    let delta = (m - n) * (m - n) - 2.0 * (m + n) + 1.0;
    if delta < 0.0 {
        return Err(Error::Numerical(format!(
            "line (1 : {m} : {n}) misses the circumconic (Δ = {delta:e})"
        )));
    }
    let r = delta.sqrt();
    let mk = |sgn: f64| {
        normalize_proj(&Vector3::new(
            -2.0 * m * n,
            (m - n + 1.0 + sgn * r) * n,
            -(m - n - 1.0 + sgn * r) * m,
        ))
    };
    Ok((mk(1.0), mk(-1.0)))
}
