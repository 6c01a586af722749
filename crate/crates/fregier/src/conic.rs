//! Projective conic machinery over homogeneous coordinates in RP².
//!
//! Points and lines are `Vector3<f64>` up to scale; a conic is a symmetric
//! 3×3 matrix, either in point form (`xᵀCx = 0`) or in line/dual form
//! (`ℓᵀC*ℓ = 0`). The two forms are exchanged by the adjugate, which is
//! computed cofactor-by-cofactor so that rank-deficient matrices (point
//! conics, line pairs) stay meaningful.

use nalgebra::{Matrix2, Matrix3, Point2, Vector2, Vector3};

use crate::error::{Error, Result};

/// Homogeneous point `(x : y : z)`.
pub type ProjPoint = Vector3<f64>;
/// Homogeneous line `(l₁ : l₂ : l₃)`, the locus `l₁x + l₂y + l₃z = 0`.
pub type ProjLine = Vector3<f64>;

/// Relative singular-value threshold below which a direction is treated as
/// part of the nullspace when ranking conic matrices.
pub const RANK_TOL: f64 = 1e-9;

/// Scale a homogeneous vector so its largest-magnitude entry is 1.
pub fn normalize_proj(v: &Vector3<f64>) -> Vector3<f64> {
    let m = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if m == 0.0 {
        *v
    } else {
        v / m
    }
}

/// Do two homogeneous vectors denote the same projective element?
pub fn proj_eq(u: &Vector3<f64>, v: &Vector3<f64>, tol: f64) -> bool {
    u.cross(v).norm() <= tol * u.norm() * v.norm()
}

/// Embed an affine point as a homogeneous one.
pub fn homogenize(p: &Point2<f64>) -> ProjPoint {
    Vector3::new(p.x, p.y, 1.0)
}

/// Project a homogeneous point back to the affine plane.
pub fn dehomogenize(p: &ProjPoint) -> Result<Point2<f64>> {
    let m = p.x.abs().max(p.y.abs());
    if p.z.abs() <= 1e-14 * m.max(1e-300) {
        return Err(Error::Degenerate(format!(
            "ideal point ({:e} : {:e} : {:e}) has no affine image",
            p.x, p.y, p.z
        )));
    }
    Ok(Point2::new(p.x / p.z, p.y / p.z))
}

/// Line through two points (cross product in the dual).
pub fn join(p: &ProjPoint, q: &ProjPoint) -> ProjLine {
    p.cross(q)
}

/// Intersection of two lines.
pub fn meet(l: &ProjLine, m: &ProjLine) -> ProjPoint {
    l.cross(m)
}

/// Adjugate (transposed cofactor matrix). For an invertible `M` this is
/// `det(M)·M⁻¹`, but the cofactor formula also survives rank loss, which is
/// exactly the regime where dual conics degenerate to points.
pub fn adjugate(m: &Matrix3<f64>) -> Matrix3<f64> {
    let c = |i: usize, j: usize| -> f64 {
        let (i1, i2) = ((i + 1) % 3, (i + 2) % 3);
        let (j1, j2) = ((j + 1) % 3, (j + 2) % 3);
        m[(i1, j1)] * m[(i2, j2)] - m[(i1, j2)] * m[(i2, j1)]
    };
    // adj(M)[i][j] = cofactor_{ji}; for symmetric M the result is symmetric.
    Matrix3::from_fn(|i, j| c(j, i))
}

/// Projective classification of a point conic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConicClass {
    RealEllipse,
    ImaginaryEllipse,
    Hyperbola,
    Parabola,
    /// Rank 2 with a single real point (a pair of conjugate imaginary lines).
    PointConic,
    /// Rank 2 with two real lines (crossing or parallel).
    LinePair,
    /// Rank 1: a doubled line.
    DoubleLine,
}

/// Conic in point form: `xᵀ C x = 0`.
#[derive(Debug, Clone, Copy)]
pub struct PointConic(pub Matrix3<f64>);

/// Conic in line (dual) form: `ℓᵀ C* ℓ = 0`, the set of tangent lines.
#[derive(Debug, Clone, Copy)]
pub struct DualConic(pub Matrix3<f64>);

impl PointConic {
    /// Build from scalar coefficients of `Ax² + Bxy + Cy² + Dx + Ey + F`.
    pub fn from_coeffs(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Self {
        PointConic(Matrix3::new(
            a,
            b / 2.0,
            d / 2.0,
            b / 2.0,
            c,
            e / 2.0,
            d / 2.0,
            e / 2.0,
            f,
        ))
    }

    /// Coefficients `(A, B, C, D, E, F)` of `Ax² + Bxy + Cy² + Dx + Ey + F`.
    pub fn coeffs(&self) -> [f64; 6] {
        let m = &self.0;
        [
            m[(0, 0)],
            2.0 * m[(0, 1)],
            m[(1, 1)],
            2.0 * m[(0, 2)],
            2.0 * m[(1, 2)],
            m[(2, 2)],
        ]
    }

    /// Evaluate the quadratic form at a homogeneous point.
    pub fn eval(&self, p: &ProjPoint) -> f64 {
        (p.transpose() * self.0 * p)[0]
    }

    /// Polar line of a point (the tangent when the point lies on the conic).
    pub fn polar(&self, p: &ProjPoint) -> ProjLine {
        self.0 * p
    }

    /// Dual conic via the adjugate.
    pub fn dual(&self) -> DualConic {
        DualConic(adjugate(&self.0))
    }

    /// Numerical rank with singular values below `RANK_TOL·σ₁` discarded.
    pub fn rank(&self) -> usize {
        matrix_rank(&self.0)
    }

    /// Eigenstructure/determinant-sign classification.
    pub fn classify(&self) -> ConicClass {
        classify_conic(&self.0)
    }
}

impl DualConic {
    pub fn eval(&self, l: &ProjLine) -> f64 {
        (l.transpose() * self.0 * l)[0]
    }

    /// Point conic via the adjugate. Only meaningful at full rank; a rank-1
    /// dual (all lines through one point) has a zero adjugate.
    pub fn point_form(&self) -> PointConic {
        PointConic(adjugate(&self.0))
    }

    pub fn rank(&self) -> usize {
        matrix_rank(&self.0)
    }

    /// If the dual has numerical rank 1 it represents the pencil of lines
    /// through a single point `K` (the matrix is `±KKᵀ` up to scale);
    /// return that point.
    pub fn pencil_point(&self) -> Option<ProjPoint> {
        let svd = self.0.svd(true, false);
        let sv = svd.singular_values;
        if sv[1] > RANK_TOL * sv[0] {
            return None;
        }
        let u = svd.u.as_ref().expect("SVD with U requested");
        Some(normalize_proj(&u.column(0).into_owned()))
    }
}

fn matrix_rank(m: &Matrix3<f64>) -> usize {
    let sv = m.svd(false, false).singular_values;
    if sv[0] == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOL * sv[0]).count()
}

fn classify_conic(m: &Matrix3<f64>) -> ConicClass {
    let m = m / m.norm();
    let rank = matrix_rank(&m);
    let det3 = m.determinant();
    // Determinant of the quadratic part; its sign separates the affine types.
    let j = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let jtol = 1e-12;
    match rank {
        3 => {
            if j > jtol {
                // Ellipse type; real iff trace of the quadratic part opposes det3.
                if (m[(0, 0)] + m[(1, 1)]) * det3 < 0.0 {
                    ConicClass::RealEllipse
                } else {
                    ConicClass::ImaginaryEllipse
                }
            } else if j < -jtol {
                ConicClass::Hyperbola
            } else {
                ConicClass::Parabola
            }
        }
        2 => {
            if j > jtol {
                ConicClass::PointConic
            } else {
                ConicClass::LinePair
            }
        }
        _ => ConicClass::DoubleLine,
    }
}

/// Fit the conic through ≥5 points as the SVD nullspace of the incidence
/// system, one row `[x², xy, y², xz, yz, z²]` per point.
pub fn conic_from_points(points: &[ProjPoint]) -> Result<PointConic> {
    if points.len() < 5 {
        return Err(Error::InvalidInput(format!(
            "conic fit needs at least 5 points, got {}",
            points.len()
        )));
    }
    let coeffs = nullspace_coeffs(points)?;
    let conic = PointConic(Matrix3::new(
        coeffs[0],
        coeffs[1] / 2.0,
        coeffs[3] / 2.0,
        coeffs[1] / 2.0,
        coeffs[2],
        coeffs[4] / 2.0,
        coeffs[3] / 2.0,
        coeffs[4] / 2.0,
        coeffs[5],
    ));
    Ok(conic)
}

/// Fit the dual conic tangent to ≥5 lines; same incidence system with line
/// coordinates in place of point coordinates. A concurrent family of lines
/// is legal input here — the result then has rank 1 (see
/// [`DualConic::pencil_point`]) — so no rank check is applied.
pub fn dual_conic_from_lines(lines: &[ProjLine]) -> Result<DualConic> {
    if lines.len() < 5 {
        return Err(Error::InvalidInput(format!(
            "dual conic fit needs at least 5 lines, got {}",
            lines.len()
        )));
    }
    let coeffs = nullspace_coeffs(lines)?;
    Ok(DualConic(Matrix3::new(
        coeffs[0],
        coeffs[1] / 2.0,
        coeffs[3] / 2.0,
        coeffs[1] / 2.0,
        coeffs[2],
        coeffs[4] / 2.0,
        coeffs[3] / 2.0,
        coeffs[4] / 2.0,
        coeffs[5],
    )))
}

/// If all lines pass through a single point (to numerical rank), return it.
///
/// This is the degenerate case a tangent-line fit cannot see: a concurrent
/// family is enveloped by the pencil point, but its Veronese system is rank
/// 3 and admits a whole space of dual conics, so detect concurrency directly
/// on the stacked line coordinates instead.
pub fn common_point_of_lines(lines: &[ProjLine]) -> Option<ProjPoint> {
    if lines.len() < 2 {
        return None;
    }
    let mut rows: Vec<Vector3<f64>> = lines.iter().map(normalize_proj).collect();
    while rows.len() < 3 {
        rows.push(Vector3::zeros());
    }
    let a = nalgebra::DMatrix::from_fn(rows.len(), 3, |i, j| rows[i][j]);
    let svd = a.svd(false, true);
    let sv = &svd.singular_values;
    if sv[2] > RANK_TOL * sv[0] {
        return None;
    }
    let vt = svd.v_t.as_ref().expect("SVD with Vᵀ requested");
    let row = vt.row(2);
    Some(normalize_proj(&Vector3::new(row[0], row[1], row[2])))
}

/// Smallest right singular vector of the Veronese incidence matrix, with the
/// rows normalised so no single sample dominates the fit.
fn nullspace_coeffs(elems: &[Vector3<f64>]) -> Result<[f64; 6]> {
    let mut rows = Vec::with_capacity(elems.len());
    for v in elems {
        let v = normalize_proj(v);
        let row = [
            v.x * v.x,
            v.x * v.y,
            v.y * v.y,
            v.x * v.z,
            v.y * v.z,
            v.z * v.z,
        ];
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidInput(
                "zero homogeneous vector in conic fit".into(),
            ));
        }
        rows.push(row.map(|x| x / norm));
    }
    // Pad to at least 6 rows: a thin SVD of an m×6 matrix with m < 6 never
    // exposes the nullspace vector.
    while rows.len() < 6 {
        rows.push([0.0; 6]);
    }
    let a = nalgebra::DMatrix::from_fn(rows.len(), 6, |i, j| rows[i][j]);
    let svd = a.svd(false, true);
    let vt = svd.v_t.as_ref().expect("SVD with Vᵀ requested");
    let sv = &svd.singular_values;
    let smin = sv[sv.len() - 1];
    let snext = sv[sv.len() - 2];
    // Two (near-)zero singular values mean a pencil of conics fits the data:
    // the sample set is degenerate (e.g. ≥4 collinear points).
    if snext <= RANK_TOL * sv[0] && smin <= RANK_TOL * sv[0] {
        return Err(Error::Degenerate(
            "conic fit is underdetermined: the samples admit a pencil of conics".into(),
        ));
    }
    let n = vt.nrows();
    let row = vt.row(n - 1);
    Ok([row[0], row[1], row[2], row[3], row[4], row[5]])
}

/// Result of intersecting a line with a conic.
#[derive(Debug, Clone)]
pub struct LineConicIntersection {
    /// 0, 1 (tangency, doubled) or 2 homogeneous points.
    pub points: Vec<ProjPoint>,
    /// True when the discriminant vanished to tolerance: the line touches
    /// the conic and `points` holds the single contact point.
    pub tangent: bool,
}

/// Intersect a line with a point conic by restricting the quadratic form to
/// a projective basis `{P₀, P₁}` of the line.
pub fn line_conic_intersection(
    conic: &PointConic,
    line: &ProjLine,
) -> Result<LineConicIntersection> {
    if line.norm() == 0.0 {
        return Err(Error::InvalidInput(
            "zero line has no conic intersection".into(),
        ));
    }
    let (p0, p1) = line_basis(line);
    let a = conic.eval(&p1);
    let b = (p0.transpose() * conic.0 * p1)[0];
    let c = conic.eval(&p0);
    // Roots of a·t² + 2b·t + c = 0 parametrise X = P₀ + t·P₁, with the
    // t → ∞ root (X = P₁) covered by the homogeneous branch below.
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        // Line lies entirely on a degenerate conic.
        return Ok(LineConicIntersection {
            points: vec![normalize_proj(&p0), normalize_proj(&p1)],
            tangent: false,
        });
    }
    let (a, b, c) = (a / scale, b / scale, c / scale);
    let tol = 1e-12;
    if a.abs() <= tol {
        if b.abs() <= tol {
            // c ≠ 0: no intersection in this chart, conic misses the line.
            return Ok(LineConicIntersection {
                points: vec![],
                tangent: false,
            });
        }
        // Linear: one root plus the root at infinity of the chart (t = ∞ ↦ P₁).
        let t = -c / (2.0 * b);
        return Ok(LineConicIntersection {
            points: vec![normalize_proj(&(p0 + t * p1)), normalize_proj(&p1)],
            tangent: false,
        });
    }
    let disc = b * b - a * c;
    if disc.abs() <= tol {
        let t = -b / a;
        return Ok(LineConicIntersection {
            points: vec![normalize_proj(&(p0 + t * p1))],
            tangent: true,
        });
    }
    if disc < 0.0 {
        return Ok(LineConicIntersection {
            points: vec![],
            tangent: false,
        });
    }
    // Citardauq pairing keeps both roots accurate when b dominates.
    let q = -(b + b.signum() * disc.sqrt());
    let t1 = q / a;
    let t2 = c / q;
    Ok(LineConicIntersection {
        points: vec![
            normalize_proj(&(p0 + t1 * p1)),
            normalize_proj(&(p0 + t2 * p1)),
        ],
        tangent: false,
    })
}

/// Two independent points spanning a line, chosen from the coordinate
/// triangle for stability.
fn line_basis(line: &ProjLine) -> (ProjPoint, ProjPoint) {
    let l = normalize_proj(line);
    // The basis vector most transverse to ℓ gives the best-conditioned cross
    // products.
    let abs = [l.x.abs(), l.y.abs(), l.z.abs()];
    let imax = if abs[0] >= abs[1] && abs[0] >= abs[2] {
        0
    } else if abs[1] >= abs[2] {
        1
    } else {
        2
    };
    let e = [Vector3::x(), Vector3::y(), Vector3::z()];
    let p0 = l.cross(&e[(imax + 1) % 3]);
    let p1 = l.cross(&e[(imax + 2) % 3]);
    (p0, p1)
}

/// Tangent lines from a point to a conic, together with the point's polar.
///
/// An exterior point yields two tangents, a point on the conic yields one
/// (its polar), an interior point none.
pub fn tangent_lines_from_point(
    conic: &PointConic,
    p: &ProjPoint,
) -> Result<(Vec<ProjLine>, ProjLine)> {
    let polar = conic.polar(p);
    if polar.norm() <= 1e-14 * conic.0.norm() * p.norm() {
        return Err(Error::Degenerate(
            "point is the singular centre of the conic; every line through it is polar".into(),
        ));
    }
    let hits = line_conic_intersection(conic, &polar)?;
    if hits.tangent {
        // P lies on the conic: the polar is the tangent there.
        return Ok((vec![normalize_proj(&polar)], normalize_proj(&polar)));
    }
    let lines = hits
        .points
        .iter()
        .map(|t| normalize_proj(&join(p, t)))
        .collect();
    Ok((lines, normalize_proj(&polar)))
}

/// Scale-invariant measure of how far a line is from tangency to a dual
/// conic: `|ℓᵀC*ℓ| / (‖ℓ‖² ‖C*‖_F)`.
pub fn tangency_residual(dual: &DualConic, line: &ProjLine) -> f64 {
    let denom = line.norm_squared() * dual.0.norm();
    if denom == 0.0 {
        return f64::INFINITY;
    }
    dual.eval(line).abs() / denom
}

/// Centre, semi-axes and tilt of a real ellipse.
#[derive(Debug, Clone, Copy)]
pub struct EllipseAxes {
    pub center: Point2<f64>,
    /// Semi-major axis.
    pub a1: f64,
    /// Semi-minor axis.
    pub b1: f64,
    /// Angle of the major axis against +x, in [0, π).
    pub tilt: f64,
}

impl EllipseAxes {
    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.a1 * self.b1
    }

    /// Rebuild the point-form conic matrix (normalised so the constant block
    /// comes from `(p−c)ᵀM(p−c) = 1`).
    pub fn to_conic(&self) -> PointConic {
        let (s, c) = self.tilt.sin_cos();
        let r = Matrix2::new(c, -s, s, c);
        let d = Matrix2::new(
            1.0 / (self.a1 * self.a1),
            0.0,
            0.0,
            1.0 / (self.b1 * self.b1),
        );
        let m = r * d * r.transpose();
        let cvec = Vector2::new(self.center.x, self.center.y);
        let mc = m * cvec;
        let f = (cvec.transpose() * m * cvec)[0] - 1.0;
        PointConic(Matrix3::new(
            m[(0, 0)],
            m[(0, 1)],
            -mc[0],
            m[(1, 0)],
            m[(1, 1)],
            -mc[1],
            -mc[0],
            -mc[1],
            f,
        ))
    }
}

/// Extract centre/axes/tilt from a point conic, failing unless it is a real
/// ellipse.
pub fn ellipse_metrics(conic: &PointConic) -> Result<EllipseAxes> {
    if conic.classify() != ConicClass::RealEllipse {
        return Err(Error::Numerical(format!(
            "conic is not a real ellipse (classified as {:?})",
            conic.classify()
        )));
    }
    let m = conic.0 / conic.0.norm();
    let quad = Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let rhs = -Vector2::new(m[(0, 2)], m[(1, 2)]);
    let center = quad
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("singular quadratic part in ellipse metrics".into()))?;
    // Value of the form at the centre is the effective constant term after
    // translating the centre to the origin.
    let ch = Vector3::new(center.x, center.y, 1.0);
    let f = (ch.transpose() * m * ch)[0];
    if f.abs() <= 1e-300 {
        return Err(Error::Numerical("ellipse degenerates to a point".into()));
    }
    let eig = nalgebra::SymmetricEigen::new(quad);
    let lam = eig.eigenvalues;
    let ratio0 = -f / lam[0];
    let ratio1 = -f / lam[1];
    if ratio0 <= 0.0 || ratio1 <= 0.0 {
        return Err(Error::Numerical(
            "indefinite axis lengths: conic is not a real ellipse".into(),
        ));
    }
    let (r_major, r_minor, major_idx) = if ratio0 >= ratio1 {
        (ratio0, ratio1, 0)
    } else {
        (ratio1, ratio0, 1)
    };
    let v = eig.eigenvectors.column(major_idx);
    let mut tilt = v[1].atan2(v[0]);
    if tilt < 0.0 {
        tilt += std::f64::consts::PI;
    }
    if tilt >= std::f64::consts::PI {
        tilt -= std::f64::consts::PI;
    }
    Ok(EllipseAxes {
        center: Point2::new(center.x, center.y),
        a1: r_major.sqrt(),
        b1: r_minor.sqrt(),
        tilt,
    })
}

/// Real intersections of an axis-aligned origin-centred ellipse
/// `x²/a² + y²/b² = 1` with an arbitrary conic.
///
/// The ellipse is rationally parametrised by `z = tan(t/2)`, turning the
/// second conic into a quartic in `z` solved via the companion matrix; the
/// parametrisation's excluded point `(−a, 0)` is checked separately and each
/// root gets one Newton polish.
pub fn ellipse_conic_intersections(a: f64, b: f64, other: &PointConic) -> Result<Vec<Point2<f64>>> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidInput(
            "ellipse semi-axes must be positive".into(),
        ));
    }
    let m = other.0 / other.0.norm();
    let (qa, qb2, qc) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
    let (qd2, qe2, qf) = (m[(0, 2)], m[(1, 2)], m[(2, 2)]);
    // Substituting x = a(1−z²)/(1+z²), y = 2bz/(1+z²) and clearing (1+z²)².
    let c4 = qa * a * a - 2.0 * qd2 * a + qf;
    let c3 = -4.0 * qb2 * a * b + 4.0 * qe2 * b;
    let c2 = -2.0 * qa * a * a + 4.0 * qc * b * b + 2.0 * qf;
    let c1 = 4.0 * qb2 * a * b + 4.0 * qe2 * b;
    let c0 = qa * a * a + 2.0 * qd2 * a + qf;
    let coeffs = [c0, c1, c2, c3, c4];
    let mut points: Vec<Point2<f64>> = Vec::new();
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Err(Error::Degenerate(
            "conics coincide: every point of the ellipse is an intersection".into(),
        ));
    }
    for z in real_quartic_roots(&coeffs.map(|c| c / scale)) {
        // One Newton step against the polished quartic.
        let z = polish_quartic_root(&coeffs, z);
        let den = 1.0 + z * z;
        let p = Point2::new(a * (1.0 - z * z) / den, 2.0 * b * z / den);
        push_unique(&mut points, p, 1e-9 * (a + b));
    }
    // Excluded point of the z-chart.
    let west = Point2::new(-a, 0.0);
    if other.eval(&homogenize(&west)).abs() <= 1e-10 {
        push_unique(&mut points, west, 1e-9 * (a + b));
    }
    Ok(points)
}

fn push_unique(points: &mut Vec<Point2<f64>>, p: Point2<f64>, tol: f64) {
    if points.iter().all(|q| (q - p).norm() > tol) {
        points.push(p);
    }
}

/// Real roots of `c₄z⁴ + c₃z³ + c₂z² + c₁z + c₀`, coefficients given low to
/// high, degenerating gracefully to lower degrees when leading coefficients
/// vanish (a vanishing `c₄` is how the chart's excluded point shows up).
fn real_quartic_roots(c: &[f64; 5]) -> Vec<f64> {
    let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return vec![];
    }
    let tol = 1e-13 * scale;
    let mut coeffs: Vec<f64> = c.to_vec();
    while coeffs.len() > 1 && coeffs.last().unwrap().abs() <= tol {
        coeffs.pop();
    }
    let found = match coeffs.len() - 1 {
        0 => roots::Roots::No([]),
        1 => roots::find_roots_linear(coeffs[1], coeffs[0]),
        2 => roots::find_roots_quadratic(coeffs[2], coeffs[1], coeffs[0]),
        3 => roots::find_roots_cubic(coeffs[3], coeffs[2], coeffs[1], coeffs[0]),
        _ => roots::find_roots_quartic(coeffs[4], coeffs[3], coeffs[2], coeffs[1], coeffs[0]),
    };
    let mut roots: Vec<f64> = found.as_ref().to_vec();
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}

fn polish_quartic_root(c: &[f64; 5], z0: f64) -> f64 {
    let mut z = z0;
    for _ in 0..2 {
        let f = (((c[4] * z + c[3]) * z + c[2]) * z + c[1]) * z + c[0];
        let df = ((4.0 * c[4] * z + 3.0 * c[3]) * z + 2.0 * c[2]) * z + c[1];
        if df.abs() < 1e-300 {
            break;
        }
        let step = f / df;
        if !step.is_finite() {
            break;
        }
        z -= step;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_circle() -> PointConic {
        PointConic::from_coeffs(1.0, 0.0, 1.0, 0.0, 0.0, -1.0)
    }

    #[test]
    fn adjugate_inverts_up_to_det() {
        let m = Matrix3::new(2.0, 1.0, 0.5, 1.0, 3.0, -1.0, 0.5, -1.0, 4.0);
        let adj = adjugate(&m);
        let prod = m * adj;
        let det = m.determinant();
        assert_relative_eq!(prod, Matrix3::identity() * det, epsilon = 1e-12);
    }

    #[test]
    fn adjugate_of_rank_one_dual_is_zero() {
        let k = Vector3::new(1.2, -0.3, 1.0);
        let rank1 = k * k.transpose();
        assert!(adjugate(&rank1).norm() < 1e-14);
    }

    #[test]
    fn conic_through_five_points_recovers_circle() {
        let pts: Vec<ProjPoint> = [0.1f64, 1.0, 2.2, 3.3, 4.6]
            .iter()
            .map(|t| Vector3::new(t.cos(), t.sin(), 1.0))
            .collect();
        let c = conic_from_points(&pts).unwrap();
        let target = unit_circle();
        let got = c.0 / c.0.norm();
        let want = target.0 / target.0.norm();
        let err = ((got - want).norm()).min((got + want).norm());
        assert!(err < 1e-10, "fitted circle deviates by {err}");
    }

    #[test]
    fn collinear_points_are_rejected() {
        let pts: Vec<ProjPoint> = (0..6)
            .map(|i| Vector3::new(i as f64, 2.0 * i as f64 + 1.0, 1.0))
            .collect();
        assert!(matches!(conic_from_points(&pts), Err(Error::Degenerate(_))));
    }

    #[test]
    fn concurrent_lines_expose_their_common_point() {
        let k = Vector3::new(0.4, -1.1, 1.0);
        let lines: Vec<ProjLine> = [0.3f64, 0.9, 1.7, 2.5, 3.9, 5.1]
            .iter()
            .map(|t| {
                let q = Vector3::new(k.x + t.cos(), k.y + t.sin(), 1.0);
                join(&k, &q)
            })
            .collect();
        let p = common_point_of_lines(&lines).expect("concurrent family");
        assert!(proj_eq(&p, &k, 1e-9));
        // Perturb one line away from the pencil: no common point any more.
        let mut skew = lines.clone();
        skew[3][2] += 0.05;
        assert!(common_point_of_lines(&skew).is_none());
        // A rank-1 dual built from the point reports it back.
        let dual = DualConic(k * k.transpose());
        assert_eq!(dual.rank(), 1);
        let q = dual
            .pencil_point()
            .expect("rank-1 dual must expose its point");
        assert!(proj_eq(&q, &k, 1e-9));
    }

    #[test]
    fn line_circle_intersection_secant_and_tangent() {
        let c = unit_circle();
        // Horizontal secant y = 1/2.
        let sec = line_conic_intersection(&c, &Vector3::new(0.0, 1.0, -0.5)).unwrap();
        assert_eq!(sec.points.len(), 2);
        assert!(!sec.tangent);
        for p in &sec.points {
            let q = dehomogenize(p).unwrap();
            assert_relative_eq!(q.y, 0.5, epsilon = 1e-12);
            assert_relative_eq!(q.x.abs(), (0.75f64).sqrt(), epsilon = 1e-12);
        }
        // Tangent x = 1.
        let tan = line_conic_intersection(&c, &Vector3::new(1.0, 0.0, -1.0)).unwrap();
        assert!(tan.tangent);
        assert_eq!(tan.points.len(), 1);
        let q = dehomogenize(&tan.points[0]).unwrap();
        assert_relative_eq!(q.x, 1.0, epsilon = 1e-9);
        assert_relative_eq!(q.y, 0.0, epsilon = 1e-9);
        // Missing line x = 2.
        let miss = line_conic_intersection(&c, &Vector3::new(1.0, 0.0, -2.0)).unwrap();
        assert!(miss.points.is_empty());
    }

    #[test]
    fn tangents_from_exterior_point_touch_the_circle() {
        let c = unit_circle();
        let p = Vector3::new(2.0, 0.0, 1.0);
        let (lines, polar) = tangent_lines_from_point(&c, &p).unwrap();
        assert_eq!(lines.len(), 2);
        // Polar of (2,0) wrt the unit circle is x = 1/2.
        assert!(proj_eq(&polar, &Vector3::new(1.0, 0.0, -0.5), 1e-12));
        let dual = c.dual();
        for l in &lines {
            assert!(tangency_residual(&dual, l) < 1e-12);
        }
    }

    #[test]
    fn tangency_residual_matches_hand_value() {
        // Unit circle dual = diag(1, 1, -1); line x = 2 i.e. (1, 0, -2):
        // |1·1 + 0 − 4| / (5·√3) = 3/(5√3).
        let dual = DualConic(Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0)));
        let line = Vector3::new(1.0, 0.0, -2.0);
        let want = 3.0 / (5.0 * 3.0f64.sqrt());
        assert_relative_eq!(tangency_residual(&dual, &line), want, epsilon = 1e-15);
    }

    #[test]
    fn metrics_round_trip_on_tilted_ellipse() {
        let axes = EllipseAxes {
            center: Point2::new(0.7, -1.3),
            a1: 2.5,
            b1: 0.9,
            tilt: 0.6,
        };
        let conic = axes.to_conic();
        assert_eq!(conic.classify(), ConicClass::RealEllipse);
        let back = ellipse_metrics(&conic).unwrap();
        assert_relative_eq!(back.center.x, axes.center.x, epsilon = 1e-12);
        assert_relative_eq!(back.center.y, axes.center.y, epsilon = 1e-12);
        assert_relative_eq!(back.a1, axes.a1, epsilon = 1e-12);
        assert_relative_eq!(back.b1, axes.b1, epsilon = 1e-12);
        assert_relative_eq!(back.tilt, axes.tilt, epsilon = 1e-12);
    }

    #[test]
    fn classification_spots_degenerate_forms() {
        // x² + y² = 0: a single real point.
        let point = PointConic::from_coeffs(1.0, 0.0, 1.0, 0.0, 0.0, 0.0);
        assert_eq!(point.classify(), ConicClass::PointConic);
        // x² − y² = 0: two crossing lines.
        let pair = PointConic::from_coeffs(1.0, 0.0, -1.0, 0.0, 0.0, 0.0);
        assert_eq!(pair.classify(), ConicClass::LinePair);
        // x² + y² + 1 = 0: no real points.
        let imag = PointConic::from_coeffs(1.0, 0.0, 1.0, 0.0, 0.0, 1.0);
        assert_eq!(imag.classify(), ConicClass::ImaginaryEllipse);
        // xy = 1: hyperbola.
        let hyp = PointConic::from_coeffs(0.0, 1.0, 0.0, 0.0, 0.0, -1.0);
        assert_eq!(hyp.classify(), ConicClass::Hyperbola);
    }

    #[test]
    fn ellipse_circle_intersections_found_including_excluded_point() {
        // Ellipse (a,b) = (2,1) against the circle centred at origin with r = 1:
        // meets exactly at (0, ±1).
        let circ = PointConic::from_coeffs(1.0, 0.0, 1.0, 0.0, 0.0, -1.0);
        let pts = ellipse_conic_intersections(2.0, 1.0, &circ).unwrap();
        assert_eq!(pts.len(), 2);
        for p in &pts {
            assert_relative_eq!(p.x, 0.0, epsilon = 1e-9);
            assert_relative_eq!(p.y.abs(), 1.0, epsilon = 1e-9);
        }
        // Circle centred at (1,0) through (−2, 0): r = 3, tangency at the
        // excluded point of the rational chart.
        let circ2 = PointConic::from_coeffs(1.0, 0.0, 1.0, -2.0, 0.0, 1.0 - 9.0);
        let pts2 = ellipse_conic_intersections(2.0, 1.0, &circ2).unwrap();
        assert!(
            pts2.iter()
                .any(|p| (p - Point2::new(-2.0, 0.0)).norm() < 1e-8),
            "tangency at the chart's excluded point must be reported: {pts2:?}"
        );
    }
}
