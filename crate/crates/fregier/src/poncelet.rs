//! Poncelet orbits in the concentric circle–ellipse picture.
//!
//! Squashing an elliptic billiard `x²/a² + y²/b² = 1` along the major axis
//! by `b/a` turns it into the circle of radius `R = b`, and carries each
//! confocal caustic (parameter `λ ∈ (0, b²)`) to a concentric axis-aligned
//! ellipse with semi-axes `a_c = (b/a)√(a²−λ)`, `b_c = √(b²−λ)`. Tangency is
//! affine-invariant, so billiard trajectories become chords of the circle
//! tangent to the squashed caustic, and Poncelet's closure theorem applies:
//! if one orbit closes after `n` steps, all of them do.
//!
//! At each vertex `Pᵢ` of an n-periodic orbit the two adjacent chords make
//! an inscribed angle `θᵢ`, defining a concentric envelope circle of radius
//! `rᵢ = R·|cos θᵢ|`. This module generates orbits, tunes the caustic to a
//! prescribed period by bisection on the rotation defect, and measures the
//! sums `Σcos²θᵢ`, `Σπrᵢ²`, `Σ(short diagonal)²` whose invariance across
//! orbit phases is proved for `n = 3` and scanned numerically beyond.

use nalgebra::{Point2, Vector2, Vector3};
use std::f64::consts::PI;

use crate::conic::{self, DualConic, PointConic};
use crate::error::{Error, Result};

/// A concentric circle (radius `R = b`) with an interior axis-aligned
/// elliptical caustic, obtained by squashing a confocal billiard pair.
#[derive(Debug, Clone, Copy)]
pub struct CirclePicture {
    /// Outer circle radius (equals the source minor semi-axis `b`).
    pub r: f64,
    /// Source billiard semi-axes.
    pub a: f64,
    pub b: f64,
    /// Confocal parameter of the source caustic.
    pub lambda: f64,
    /// Caustic semi-axes after the squash.
    pub a_c: f64,
    pub b_c: f64,
}

/// Build the circle picture for the confocal caustic `λ` of the `(a, b)`
/// billiard.
pub fn circle_picture(a: f64, b: f64, lambda: f64) -> Result<CirclePicture> {
    if !(a.is_finite() && b.is_finite() && a >= b && b > 0.0) {
        return Err(Error::InvalidInput(format!(
            "expected semi-axes a ≥ b > 0, got a={a}, b={b}"
        )));
    }
    if !(lambda > 0.0 && lambda < b * b) {
        return Err(Error::InvalidInput(format!(
            "invalid confocal parameter: λ={lambda} outside (0, b²={})",
            b * b
        )));
    }
    Ok(CirclePicture {
        r: b,
        a,
        b,
        lambda,
        a_c: (b / a) * (a * a - lambda).sqrt(),
        b_c: (b * b - lambda).sqrt(),
    })
}

impl CirclePicture {
    /// Caustic in point form.
    pub fn caustic_conic(&self) -> PointConic {
        PointConic::from_coeffs(
            1.0 / (self.a_c * self.a_c),
            0.0,
            1.0 / (self.b_c * self.b_c),
            0.0,
            0.0,
            -1.0,
        )
    }

    /// Caustic in dual (tangent-line) form.
    pub fn caustic_dual(&self) -> DualConic {
        self.caustic_conic().dual()
    }

    /// Circle point at phase `t`.
    pub fn circle_point(&self, t: f64) -> Point2<f64> {
        Point2::new(self.r * t.cos(), self.r * t.sin())
    }

    /// Advance one step of the tangent-chord map: of the two tangents from
    /// `p` to the caustic, follow the one whose contact point lies
    /// counterclockwise of `p`, and return its second intersection with the
    /// circle.
    pub fn next_vertex(&self, p: &Point2<f64>) -> Result<Point2<f64>> {
        // Lines l₁x + l₂y + l₃ = 0 through p tangent to the caustic satisfy
        // (a_c²−px²)l₁² − 2 px py l₁l₂ + (b_c²−py²)l₂² = 0.
        let qa = self.a_c * self.a_c - p.x * p.x;
        let qb = -p.x * p.y;
        let qc = self.b_c * self.b_c - p.y * p.y;
        let disc = qb * qb - qa * qc;
        if disc < 0.0 {
            return Err(Error::Numerical(format!(
                "no real tangents: point ({}, {}) lies inside the caustic",
                p.x, p.y
            )));
        }
        let root = disc.sqrt();
        // Solve for the better-conditioned ratio of (l₁ : l₂).
        let dirs: [Vector2<f64>; 2] = if qa.abs() >= qc.abs() {
            let q = -(qb + qb.signum() * root);
            if q.abs() < 1e-300 {
                // qb ≈ 0 and qa·qc ≤ 0: axis-symmetric tangents.
                [
                    Vector2::new((-qc / qa).sqrt(), 1.0),
                    Vector2::new(-(-qc / qa).sqrt(), 1.0),
                ]
            } else {
                [Vector2::new(q / qa, 1.0), Vector2::new(qc / q, 1.0)]
            }
        } else {
            let q = -(qb + qb.signum() * root);
            if q.abs() < 1e-300 {
                [
                    Vector2::new(1.0, (-qa / qc).sqrt()),
                    Vector2::new(1.0, -(-qa / qc).sqrt()),
                ]
            } else {
                [Vector2::new(1.0, q / qc), Vector2::new(1.0, qa / q)]
            }
        };
        let dual = self.caustic_dual();
        let ccw_tangent = Vector2::new(-p.y, p.x);
        let mut best: Option<Point2<f64>> = None;
        for n in dirs {
            let line = Vector3::new(n.x, n.y, -(n.x * p.x + n.y * p.y));
            // Contact point of a tangent line is its image under the dual.
            let contact = conic::dehomogenize(&(dual.0 * line))?;
            if (contact - p).dot(&ccw_tangent) <= 0.0 {
                continue;
            }
            // Second circle intersection along the line through p.
            let d = Vector2::new(-n.y, n.x);
            let s = -2.0 * (p.coords.dot(&d)) / d.norm_squared();
            if s.abs() < 1e-12 * self.r {
                return Err(Error::Numerical(
                    "tangent chord degenerates to a point on the circle".into(),
                ));
            }
            best = Some(p + s * d);
        }
        best.ok_or_else(|| Error::Numerical("no counterclockwise-advancing tangent found".into()))
    }

    /// Total counterclockwise angle swept by `n` steps of the tangent-chord
    /// map starting at phase `t0`.
    pub fn advance_angle(&self, t0: f64, n: usize) -> Result<f64> {
        let mut p = self.circle_point(t0);
        let mut phase = p.y.atan2(p.x);
        let mut total = 0.0;
        for _ in 0..n {
            p = self.next_vertex(&p)?;
            let next_phase = p.y.atan2(p.x);
            total += (next_phase - phase).rem_euclid(2.0 * PI);
            phase = next_phase;
        }
        Ok(total)
    }

    /// Run the tangent-chord map `n` steps from phase `t0` and collect the
    /// orbit data.
    pub fn orbit(&self, t0: f64, n: usize) -> Result<Orbit> {
        if n < 3 {
            return Err(Error::InvalidInput(format!(
                "orbit length must be ≥ 3, got {n}"
            )));
        }
        let start = self.circle_point(t0);
        let mut vertices = Vec::with_capacity(n);
        let mut p = start;
        for _ in 0..n {
            vertices.push(p);
            p = self.next_vertex(&p)?;
        }
        let closure_defect = (p - start).norm();
        let dual = self.caustic_dual();
        let mut edge_tangency_max = 0.0f64;
        for i in 0..n {
            let q = vertices[(i + 1) % n];
            let line = conic::join(&conic::homogenize(&vertices[i]), &conic::homogenize(&q));
            edge_tangency_max = edge_tangency_max.max(conic::tangency_residual(&dual, &line));
        }
        // Vertex angles and envelope-circle radii assume wraparound, i.e.
        // they are meaningful only when the closure defect is small.
        let mut angles = Vec::with_capacity(n);
        let mut radii = Vec::with_capacity(n);
        for i in 0..n {
            let prev = vertices[(i + n - 1) % n];
            let next = vertices[(i + 1) % n];
            let v1 = (prev - vertices[i]).normalize();
            let v2 = (next - vertices[i]).normalize();
            let theta = v1.dot(&v2).clamp(-1.0, 1.0).acos();
            angles.push(theta);
            radii.push(self.r * theta.cos().abs());
        }
        Ok(Orbit {
            r: self.r,
            vertices,
            angles,
            radii,
            closure_defect,
            edge_tangency_max,
        })
    }
}

/// An orbit of the tangent-chord map on the circle.
#[derive(Debug, Clone)]
pub struct Orbit {
    /// Circle radius the orbit lives on.
    pub r: f64,
    pub vertices: Vec<Point2<f64>>,
    /// Inscribed angle `θᵢ = ∠P_{i−1}PᵢP_{i+1}` at each vertex (mod-n
    /// neighbours).
    pub angles: Vec<f64>,
    /// Envelope-circle radius `rᵢ = R·|cos θᵢ|` at each vertex.
    pub radii: Vec<f64>,
    /// Distance between the n-th image of the start and the start.
    pub closure_defect: f64,
    /// Largest tangency residual of an edge against the caustic.
    pub edge_tangency_max: f64,
}

impl Orbit {
    pub fn n(&self) -> usize {
        self.vertices.len()
    }
}

/// Tune the confocal parameter so the orbit closes after `n` steps winding
/// `p` times around the centre, by bisection on the monotone rotation
/// defect `advance(λ) − 2πp`.
pub fn find_caustic_for_period(a: f64, b: f64, n: usize, p: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("period must be ≥ 3, got {n}")));
    }
    if p == 0 || 2 * p >= n {
        return Err(Error::InvalidInput(format!(
            "winding number must satisfy 1 ≤ p < n/2, got p={p}, n={n}"
        )));
    }
    let target = 2.0 * PI * (p as f64);
    let b2 = b * b;
    let mut lo = 1e-9 * b2;
    let mut hi = (1.0 - 1e-9) * b2;
    let defect = |lambda: f64| -> Result<f64> {
        let cfg = circle_picture(a, b, lambda)?;
        Ok(cfg.advance_angle(0.0, n)? - target)
    };
    let f_lo = defect(lo)?;
    let f_hi = defect(hi)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Numerical(format!(
            "period {n}/{p} not attainable: defect has no sign change in the caustic bracket \
             ({f_lo:.3e} .. {f_hi:.3e})"
        )));
    }
    for _ in 0..200 {
        if hi - lo < 1e-14 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = defect(mid)?;
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The three sums of an n-periodic orbit.
#[derive(Debug, Clone, Copy)]
pub struct InvariantSums {
    pub n: usize,
    /// `Σ cos²θᵢ`.
    pub sum_cos2: f64,
    /// `Σ πrᵢ²` — total area of the vertex envelope circles.
    pub sum_area: f64,
    /// `Σ |P_{i−1}P_{i+1}|²` over the short diagonals (triangle edges when
    /// `n = 3`).
    pub sum_diag2: f64,
}

/// Compute the invariant sums; requires an actually closed orbit since the
/// angles wrap around modulo `n`.
pub fn invariant_sums(orbit: &Orbit) -> Result<InvariantSums> {
    if orbit.closure_defect > 1e-6 * orbit.r {
        return Err(Error::Numerical(format!(
            "orbit is not periodic (closure defect {:.3e}); tune the caustic first",
            orbit.closure_defect
        )));
    }
    let n = orbit.n();
    let sum_cos2 = orbit.angles.iter().map(|t| t.cos() * t.cos()).sum();
    let sum_area = orbit.radii.iter().map(|r| PI * r * r).sum();
    let sum_diag2 = (0..n)
        .map(|i| {
            let prev = orbit.vertices[(i + n - 1) % n];
            let next = orbit.vertices[(i + 1) % n];
            (next - prev).norm_squared()
        })
        .sum();
    Ok(InvariantSums {
        n,
        sum_cos2,
        sum_area,
        sum_diag2,
    })
}

/// Residual of the inscribed-angle identity
/// `Σcos²θᵢ + Σ(short diag)²/(4R²) = n`, which holds for every orbit on a
/// circle regardless of the caustic.
pub fn identity_residual(sums: &InvariantSums, r: f64) -> f64 {
    (sums.sum_cos2 + sums.sum_diag2 / (4.0 * r * r) - sums.n as f64).abs()
}

/// Outcome of the printed 3-orbit bound `3/4 ≤ Σrᵢ²/R² ≤ 1`.
#[derive(Debug, Clone, Copy)]
pub struct RadiiBound {
    pub ratio: f64,
    pub holds: bool,
}

/// Check the radii bound; only stated (and only checked) for `n = 3`.
pub fn radii_bound_check(orbit: &Orbit) -> Result<RadiiBound> {
    if orbit.n() != 3 {
        return Err(Error::InvalidInput(format!(
            "the radii bound is stated for n=3 only, got n={}",
            orbit.n()
        )));
    }
    let ratio = orbit.radii.iter().map(|r| r * r).sum::<f64>() / (orbit.r * orbit.r);
    Ok(RadiiBound {
        ratio,
        holds: (0.75..=1.0).contains(&ratio),
    })
}

/// Range statistics of one invariant across orbit phases.
#[derive(Debug, Clone, Copy)]
pub struct PhaseStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// `(max − min) / max(|mean|, ε)`.
    pub relative_spread: f64,
}

impl PhaseStats {
    pub fn from_values(values: &[f64]) -> PhaseStats {
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        PhaseStats {
            min,
            max,
            mean,
            relative_spread: (max - min) / mean.abs().max(1e-300),
        }
    }
}

/// Invariance measurements for one period `n`.
#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub n: usize,
    pub lambda: f64,
    pub phases: usize,
    pub cos2: PhaseStats,
    pub area: PhaseStats,
    pub diag2: PhaseStats,
    pub closure_defect_max: f64,
    pub identity_residual_max: f64,
    pub edge_tangency_max: f64,
    /// Per-phase raw sums, in phase order, for emission.
    pub rows: Vec<(f64, InvariantSums, f64)>,
}

/// For each period `n` in `n_lo..=n_hi`, tune the caustic and measure the
/// invariant sums over `phases` evenly spaced orbit phases.
pub fn conjecture_scan(
    a: f64,
    b: f64,
    n_lo: usize,
    n_hi: usize,
    phases: usize,
) -> Result<Vec<InvariantReport>> {
    if n_lo < 3 || n_hi < n_lo {
        return Err(Error::InvalidInput(format!(
            "period range {n_lo}..{n_hi} must satisfy 3 ≤ n_lo ≤ n_hi"
        )));
    }
    if phases < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 phases, got {phases}"
        )));
    }
    let mut reports = Vec::new();
    for n in n_lo..=n_hi {
        let lambda = find_caustic_for_period(a, b, n, 1)?;
        let cfg = circle_picture(a, b, lambda)?;
        let mut rows = Vec::with_capacity(phases);
        let mut defect_max = 0.0f64;
        let mut ident_max = 0.0f64;
        let mut tangency_max = 0.0f64;
        for j in 0..phases {
            // The orbit from phase t covers the same polygon as from
            // t + 2π/n, so spreading phases over one step period suffices;
            // a fixed offset avoids starting exactly on the axes.
            let t0 = 2.0 * PI * (j as f64 + 0.29) / (phases as f64 * n as f64);
            let orbit = cfg.orbit(t0, n)?;
            let sums = invariant_sums(&orbit)?;
            defect_max = defect_max.max(orbit.closure_defect);
            ident_max = ident_max.max(identity_residual(&sums, orbit.r));
            tangency_max = tangency_max.max(orbit.edge_tangency_max);
            rows.push((t0, sums, orbit.closure_defect));
        }
        let collect = |f: &dyn Fn(&InvariantSums) -> f64| -> Vec<f64> {
            rows.iter().map(|(_, s, _)| f(s)).collect()
        };
        reports.push(InvariantReport {
            n,
            lambda,
            phases,
            cos2: PhaseStats::from_values(&collect(&|s| s.sum_cos2)),
            area: PhaseStats::from_values(&collect(&|s| s.sum_area)),
            diag2: PhaseStats::from_values(&collect(&|s| s.sum_diag2)),
            closure_defect_max: defect_max,
            identity_residual_max: ident_max,
            edge_tangency_max: tangency_max,
            rows,
        });
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::BilliardFrame;
    use approx::assert_relative_eq;

    #[test]
    fn equilateral_and_square_caustics_have_the_textbook_parameters() {
        // Circle billiard: n=3 caustic is the inradius-1/2 circle (λ = 3/4),
        // n=4 the radius-√2/2 circle (λ = 1/2).
        let l3 = find_caustic_for_period(1.0, 1.0, 3, 1).unwrap();
        assert_relative_eq!(l3, 0.75, epsilon = 1e-10);
        let l4 = find_caustic_for_period(1.0, 1.0, 4, 1).unwrap();
        assert_relative_eq!(l4, 0.5, epsilon = 1e-10);
        let cfg = circle_picture(1.0, 1.0, l3).unwrap();
        assert_relative_eq!(cfg.a_c, 0.5, epsilon = 1e-9);
        assert_relative_eq!(cfg.b_c, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn equilateral_step_from_the_axis() {
        let cfg = circle_picture(1.0, 1.0, 0.75).unwrap();
        let q = cfg.next_vertex(&Point2::new(1.0, 0.0)).unwrap();
        let want = 2.0 * PI / 3.0;
        assert_relative_eq!(q.y.atan2(q.x).rem_euclid(2.0 * PI), want, epsilon = 1e-12);
        let orbit = cfg.orbit(0.0, 3).unwrap();
        assert!(orbit.closure_defect < 1e-12);
        for t in &orbit.angles {
            assert_relative_eq!(*t, PI / 3.0, epsilon = 1e-10);
        }
        let sums = invariant_sums(&orbit).unwrap();
        assert_relative_eq!(sums.sum_cos2, 0.75, epsilon = 1e-12);
        assert_relative_eq!(sums.sum_diag2, 9.0, epsilon = 1e-10);
    }

    #[test]
    fn pentagon_caustic_radius_is_cos_pi_fifths() {
        let l5 = find_caustic_for_period(1.0, 1.0, 5, 1).unwrap();
        let cfg = circle_picture(1.0, 1.0, l5).unwrap();
        let want = (PI / 5.0).cos();
        assert_relative_eq!(cfg.b_c, want, epsilon = 1e-7);
        let q = cfg.next_vertex(&Point2::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(
            q.y.atan2(q.x).rem_euclid(2.0 * PI),
            2.0 * PI / 5.0,
            epsilon = 1e-7
        );
    }

    #[test]
    fn three_periodic_caustic_matches_the_squashed_billiard_caustic() {
        let fr = BilliardFrame::new(2.0, 1.0).unwrap();
        let lambda = find_caustic_for_period(2.0, 1.0, 3, 1).unwrap();
        assert_relative_eq!(lambda, fr.mandart_lambda(), epsilon = 1e-8);
        let cfg = circle_picture(2.0, 1.0, lambda).unwrap();
        // Squash of (a(1+h)/2, b(1−h)/2) is (b(1+h)/2, b(1−h)/2).
        assert_relative_eq!(cfg.a_c, fr.b * (1.0 + fr.h) / 2.0, epsilon = 1e-8);
        assert_relative_eq!(cfg.b_c, fr.b * (1.0 - fr.h) / 2.0, epsilon = 1e-8);
    }

    #[test]
    fn orbit_from_the_apex_recovers_the_squashed_billiard_triangle() {
        let fr = BilliardFrame::new(2.0, 1.0).unwrap();
        let cfg = circle_picture(2.0, 1.0, fr.mandart_lambda()).unwrap();
        // Apex (0, b) squashes to phase π/2.
        let orbit = cfg.orbit(PI / 2.0, 3).unwrap();
        assert!(orbit.closure_defect < 1e-9);
        let squash = |p: Point2<f64>| Point2::new(p.x * fr.b / fr.a, p.y);
        let want = [
            squash(fr.vertex_a),
            squash(fr.vertex_b),
            squash(fr.vertex_c),
        ];
        for v in &orbit.vertices {
            assert!(
                want.iter().any(|w| (w - v).norm() < 1e-8),
                "orbit vertex {v:?} is not a squashed triangle vertex"
            );
        }
    }

    #[test]
    fn three_orbit_invariants_match_the_closed_forms() {
        for (a, b, cos2, diag2) in [
            (2.0, 1.0, 0.8858048469644504, 8.456_780_612_142_198),
            (1.5, 1.0, 0.8186701685285397, 8.725_319_325_885_842),
            (1.2, 1.0, 0.7674501846463156, 8.930_199_261_414_737),
        ] {
            let fr = BilliardFrame::new(a, b).unwrap();
            let lambda = find_caustic_for_period(a, b, 3, 1).unwrap();
            let cfg = circle_picture(a, b, lambda).unwrap();
            let orbit = cfg.orbit(0.83, 3).unwrap();
            let sums = invariant_sums(&orbit).unwrap();
            assert_relative_eq!(sums.sum_cos2, cos2, max_relative = 1e-8);
            assert_relative_eq!(sums.sum_diag2, diag2, max_relative = 1e-8);
            assert_relative_eq!(sums.sum_cos2, 1.0 - fr.rho / 2.0, max_relative = 1e-8);
            assert_relative_eq!(
                sums.sum_diag2,
                2.0 * b * b * (fr.rho + 4.0),
                max_relative = 1e-8
            );
            assert_relative_eq!(
                sums.sum_area,
                PI * b * b * (1.0 - fr.rho / 2.0),
                max_relative = 1e-8
            );
            assert!(identity_residual(&sums, orbit.r) < 1e-12);
            assert!(orbit.edge_tangency_max < 1e-9);
            let bound = radii_bound_check(&orbit).unwrap();
            assert!(bound.holds, "ratio {}", bound.ratio);
        }
    }

    #[test]
    fn closure_holds_from_any_phase_once_tuned() {
        let lambda = find_caustic_for_period(2.0, 1.0, 5, 1).unwrap();
        let cfg = circle_picture(2.0, 1.0, lambda).unwrap();
        for j in 0..8 {
            let orbit = cfg.orbit(0.17 + j as f64 * 0.71, 5).unwrap();
            assert!(
                orbit.closure_defect < 1e-9,
                "defect {}",
                orbit.closure_defect
            );
            let sums = invariant_sums(&orbit).unwrap();
            assert!(identity_residual(&sums, orbit.r) < 1e-10);
        }
    }

    #[test]
    fn scan_reports_exact_constancy_on_the_circle() {
        let reports = conjecture_scan(1.0, 1.0, 4, 5, 8).unwrap();
        assert_eq!(reports.len(), 2);
        for rep in &reports {
            // The square's Σcos² is exactly 0, so spread must be scored
            // against an O(1) scale rather than the mean.
            let spread = (rep.cos2.max - rep.cos2.min) / rep.cos2.mean.abs().max(1.0);
            assert!(spread < 1e-13, "n={} spread {}", rep.n, spread);
            assert!(rep.closure_defect_max < 1e-9);
        }
    }
}
