//! End-to-end acceptance run: eleven numbered criteria covering the
//! envelope fits, the closed forms, and the billiard experiments, printing
//! one PASS/FAIL/FLAG line per criterion (run with `--nocapture` to see
//! them on a passing build).
//!
//! Criterion 2 carries a documented discrepancy: the printed area relation
//! omits a |cos θ| factor (see the criterion's detail line), so the suite
//! reports it as FAIL without failing the build, while asserting the parts
//! that do hold — constancy over M and the corrected relation. Criterion 9
//! may FLAG instead of PASS by design; a FLAG never fails the build either.

use std::f64::consts::PI;

use nalgebra::Vector3;

use fregier::conic::{self, normalize_proj, ProjLine};
use fregier::envelope::{
    area_ratio_sq, center_locus, chord_at, fit_envelope, fregier_point, inscribed_special_check,
    predicted_area, tangent_angle, Ellipse, EnvelopeShape, LocusShape,
};
use fregier::frame::BilliardFrame;
use fregier::poncelet::{circle_picture, conjecture_scan, InvariantReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    /// Fails as printed in the contract, for reasons the suite documents;
    /// does not fail the build.
    FailDocumented,
    Fail,
    /// Measurement outside the supporting tolerance; reported, not fatal.
    Flag,
}

impl Status {
    fn word(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::FailDocumented => "FAIL (documented)",
            Status::Flag => "FLAG",
        }
    }
}

fn from_bool(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// Sampled positions of M staying clear of the axis vertices.
fn m_angles(count: usize) -> Vec<f64> {
    (0..count)
        .map(|j| 2.0 * PI * (j as f64 + 0.37) / count as f64)
        .collect()
}

fn criterion_1() -> (Status, String) {
    let e = Ellipse::new(1.0, 1.0).unwrap();
    let m = e.point(0.7);
    let mut worst = 0.0f64;
    for &theta in &[PI / 6.0, PI / 4.0, PI / 3.0, 2.0 * PI / 5.0] {
        let fit = fit_envelope(&e, &m, theta, 48).unwrap();
        let axes = fit
            .axes()
            .expect("circle envelope must be a conic, not a point");
        let r = theta.cos().abs();
        worst = worst
            .max(axes.center.coords.norm())
            .max((axes.a1 - r).abs())
            .max((axes.b1 - r).abs());
    }
    (
        from_bool(worst < 1e-9),
        format!("unit-circle envelopes are concentric circles of radius |cos θ| (worst deviation {worst:.2e}, tol 1e-9)"),
    )
}

fn criterion_2() -> (Status, String) {
    let e = Ellipse::new(2.0, 1.0).unwrap();
    let frame = BilliardFrame::new(2.0, 1.0).unwrap();
    let mut worst_spread = 0.0f64;
    let mut worst_printed = 0.0f64;
    let mut worst_corrected = 0.0f64;
    for &theta in &[PI / 6.0, PI / 4.0, PI / 3.0] {
        let areas: Vec<f64> = m_angles(20)
            .iter()
            .map(|&t| fit_envelope(&e, &e.point(t), theta, 48).unwrap().area())
            .collect();
        let max = areas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = areas.iter().cloned().fold(f64::INFINITY, f64::min);
        let mean = areas.iter().sum::<f64>() / areas.len() as f64;
        worst_spread = worst_spread.max((max - min) / mean);
        let printed = area_ratio_sq(frame.rho, theta).sqrt() * e.area();
        let corrected = predicted_area(&e, frame.rho, theta);
        worst_printed = worst_printed.max((mean / printed - 1.0).abs());
        worst_corrected = worst_corrected.max((mean / corrected - 1.0).abs());
    }
    let spread_ok = worst_spread < 1e-8;
    let corrected_ok = worst_corrected < 1e-8;
    let printed_ok = worst_printed < 1e-8;
    let status = match (spread_ok && corrected_ok, printed_ok) {
        (true, true) => Status::Pass,
        (true, false) => Status::FailDocumented,
        (false, _) => Status::Fail,
    };
    (
        status,
        format!(
            "area is M-invariant (spread {worst_spread:.2e} < 1e-8) but the stated relation \
             area = √(k²)·πab misses a |cos θ| factor (rel. err. {worst_printed:.2e}); \
             with it, area = √(k²)·|cos θ|·πab holds to {worst_corrected:.2e} — \
             at ρ = 1/2 only the corrected form reproduces the circle's πR²cos²θ from criterion 1"
        ),
    )
}

fn criterion_3() -> (Status, String) {
    let e = Ellipse::new(2.0, 1.0).unwrap();
    let mut worst = 0.0f64;
    for &theta in &[PI / 6.0, PI / 4.0, PI / 3.0, 2.0 * PI / 5.0, 3.0 * PI / 5.0] {
        let expected = (PI - 2.0 * theta).abs();
        for &t in &m_angles(10) {
            let m = e.point(t);
            let fit = fit_envelope(&e, &m, theta, 48).unwrap();
            let conic = fit
                .point_conic()
                .expect("non-right angle gives a conic envelope");
            worst = worst.max((tangent_angle(conic, &m).unwrap() - expected).abs());
        }
    }
    (
        from_bool(worst < 1e-9),
        format!("tangents from M meet at |π−2θ| over a 10×5 (M, θ) grid (worst deviation {worst:.2e}, tol 1e-9)"),
    )
}

fn criterion_4() -> (Status, String) {
    let e = Ellipse::new(2.0, 1.0).unwrap();
    let frame = BilliardFrame::new(2.0, 1.0).unwrap();
    let theta = PI / 3.0;
    let locus = center_locus(&e, theta, 12, 48).unwrap();
    let LocusShape::Conic { axes, .. } = &locus.shape else {
        return (
            Status::Fail,
            "centre locus unexpectedly degenerated to a point".into(),
        );
    };
    let Some(axes) = axes else {
        return (Status::Fail, "centre locus conic is not an ellipse".into());
    };
    let o = frame.tri_to_cart(&frame.locus_center_tri()).unwrap();
    let center_err = (axes.center - o).norm();
    // The sampled centres against the closed-form trilinear locus conic.
    let q = frame.locus_conic_tri(theta);
    let qn = q.0.norm();
    let mut worst_residual = 0.0f64;
    for c in &locus.centers {
        let x = normalize_proj(&frame.cart_to_tri(c));
        worst_residual = worst_residual.max(q.eval(&x).abs() / (qn * x.norm_squared()));
    }
    let ok = center_err < 1e-7 * e.b && worst_residual < 1e-8;
    (
        from_bool(ok),
        format!(
            "12 fitted centres form an ellipse centred {center_err:.2e} from the closed-form \
             fixed point (tol 1e-7·b) and satisfy its trilinear conic to {worst_residual:.2e} (tol 1e-8)"
        ),
    )
}

fn criterion_5() -> (Status, String) {
    // Degenerate right-angle envelope on the (2, 1) ellipse.
    let e = Ellipse::new(2.0, 1.0).unwrap();
    let m = e.point(0.7);
    let fit = fit_envelope(&e, &m, PI / 2.0, 48).unwrap();
    let EnvelopeShape::Point(k) = fit.shape else {
        return (
            Status::Fail,
            "right-angle envelope did not collapse to a point".into(),
        );
    };
    // Brute force: intersect two independent right-angle chords directly.
    let c1 = chord_at(&e, &m, PI / 2.0, 0.3).unwrap();
    let c2 = chord_at(&e, &m, PI / 2.0, 1.9).unwrap();
    let brute = conic::dehomogenize(&conic::meet(&c1.line, &c2.line)).unwrap();
    let err_brute = (k - brute).norm();
    let err_closed = (k - fregier_point(&e, &m)).norm();
    // Unit circle: the point must be the origin.
    let circle = Ellipse::new(1.0, 1.0).unwrap();
    let cfit = fit_envelope(&circle, &circle.point(0.7), PI / 2.0, 48).unwrap();
    let EnvelopeShape::Point(ck) = cfit.shape else {
        return (
            Status::Fail,
            "circle right-angle envelope did not collapse to a point".into(),
        );
    };
    let err_circle = ck.coords.norm();
    let ok = err_brute < 1e-8 * e.b && err_circle < 1e-12;
    (
        from_bool(ok),
        format!(
            "fitted right-angle point sits {err_brute:.2e} from the brute-force chord \
             intersection (tol 1e-8·b; closed form agrees to {err_closed:.2e}) and the unit \
             circle's point sits {err_circle:.2e} from the origin (tol 1e-12)"
        ),
    )
}

fn criterion_6() -> (Status, String) {
    let e = Ellipse::new(2.0, 1.0).unwrap();
    let m = e.point(0.7);
    let mut special_max = 0.0f64;
    let mut generic_min = f64::INFINITY;
    for &theta in &[PI / 3.0, 2.0 * PI / 3.0] {
        let rep = inscribed_special_check(&e, &m, theta, 48).unwrap();
        special_max = special_max.max(rep.chord_residual);
    }
    for &theta in &[PI / 4.0, 2.0 * PI / 5.0] {
        let rep = inscribed_special_check(&e, &m, theta, 48).unwrap();
        generic_min = generic_min.min(rep.chord_residual);
    }
    let rep = inscribed_special_check(&e, &m, PI / 3.0, 48).unwrap();
    let Some(fourth) = rep.fourth else {
        return (
            Status::Fail,
            "no fourth circumcircle point found at θ = π/3".into(),
        );
    };
    let angle_err = (fourth.line_angle_obtuse - 2.0 * PI / 3.0).abs();
    let ok = special_max < 1e-8 && generic_min > 1e-4 && angle_err < 1e-8;
    (
        from_bool(ok),
        format!(
            "T₁T₂ touches the envelope at θ ∈ {{π/3, 2π/3}} (residual ≤ {special_max:.2e} < 1e-8), \
             misses at θ ∈ {{π/4, 2π/5}} (residual ≥ {generic_min:.2e} > 1e-4), and the fourth \
             circumcircle point sees it at 2π/3 within {angle_err:.2e} (tol 1e-8)"
        ),
    )
}

fn criterion_7() -> (Status, String) {
    let e = Ellipse::new(2.0, 1.0).unwrap();
    let theta = PI / 4.0;
    let mut worst = 0.0f64;
    for &t in &m_angles(10) {
        let m = e.point(t);
        let fit = fit_envelope(&e, &m, theta, 48).unwrap();
        let axes = fit.axes().expect("θ = π/4 envelope is an ellipse");
        let km2 = (m - axes.center).norm_squared();
        worst = worst.max((km2 - (axes.a1 * axes.a1 + axes.b1 * axes.b1)).abs());
    }
    (
        from_bool(worst < 1e-8 * e.b * e.b),
        format!("M lies on the orthoptic circle at θ = π/4: |MK|² = a₁² + b₁² within {worst:.2e} over 10 M (tol 1e-8·b²)"),
    )
}

fn criterion_8() -> (Status, String, Vec<InvariantReport>) {
    let mut reports = Vec::new();
    let mut worst_area = 0.0f64;
    let mut worst_diag = 0.0f64;
    let mut bound_ok = true;
    for &(a, b) in &[(2.0, 1.0), (1.5, 1.0), (1.2, 1.0)] {
        let rep = conjecture_scan(a, b, 3, 3, 32).unwrap().remove(0);
        let frame = BilliardFrame::new(a, b).unwrap();
        let pred_area = PI * b * b * (1.0 - frame.rho / 2.0);
        let pred_diag = 2.0 * b * b * (frame.rho + 4.0);
        for (_, sums, _) in &rep.rows {
            worst_area = worst_area.max((sums.sum_area / pred_area - 1.0).abs());
            worst_diag = worst_diag.max((sums.sum_diag2 / pred_diag - 1.0).abs());
            // For a triangle orbit Σrᵢ²/R² = Σcos²θᵢ.
            bound_ok &= (0.75..=1.0).contains(&sums.sum_cos2);
        }
        reports.push(rep);
    }
    let ok = worst_area < 1e-8 && worst_diag < 1e-8 && bound_ok;
    (
        from_bool(ok),
        format!(
            "3-orbit sums over 3 ellipses × 32 phases: Σπrᵢ² = πb²(1−ρ/2) within {worst_area:.2e} \
             and Σdᵢ² = 2b²(ρ+4) within {worst_diag:.2e} (tol 1e-8 rel.); bound 3/4 ≤ Σrᵢ²/R² ≤ 1 {}",
            if bound_ok { "holds in every run" } else { "VIOLATED" }
        ),
        reports,
    )
}

fn criterion_9() -> (Status, String, Vec<InvariantReport>) {
    let reports = conjecture_scan(2.0, 1.0, 4, 8, 32).unwrap();
    let mut details = Vec::new();
    let mut all_support = true;
    for rep in &reports {
        let spread = (rep.cos2.max - rep.cos2.min) / rep.cos2.mean.abs().max(1.0);
        all_support &= spread < 1e-7;
        details.push(format!("n={} spread {spread:.2e}", rep.n));
    }
    let status = if all_support {
        Status::Pass
    } else {
        Status::Flag
    };
    let verdict = if all_support {
        "all Σcos²θᵢ spreads < 1e-7, supporting the invariance conjecture"
    } else {
        "a spread exceeds 1e-7 — faithful measurement reported, not a build failure"
    };
    (
        status,
        format!("{verdict} ({})", details.join(", ")),
        reports,
    )
}

fn criterion_10(reports: &[InvariantReport]) -> (Status, String) {
    let worst = reports
        .iter()
        .map(|r| r.identity_residual_max)
        .fold(0.0f64, f64::max);
    let orbits: usize = reports.iter().map(|r| r.rows.len()).sum();
    (
        from_bool(worst < 1e-10),
        format!("Σcos²θᵢ + Σdᵢ²/(4R²) = n on every one of {orbits} generated orbits (worst residual {worst:.2e}, tol 1e-10)"),
    )
}

/// Projective distance between two lines, invariant to scale and sign.
fn line_gap(l1: &ProjLine, l2: &ProjLine) -> f64 {
    let a = normalize_proj(l1);
    let b = normalize_proj(l2);
    (a - b).norm().min((a + b).norm())
}

fn pair_gap(got: (ProjLine, ProjLine), want: &[Vector3<f64>]) -> f64 {
    let direct = line_gap(&got.0, &want[0]).max(line_gap(&got.1, &want[1]));
    let swapped = line_gap(&got.0, &want[1]).max(line_gap(&got.1, &want[0]));
    direct.min(swapped)
}

fn criterion_11() -> (Status, String) {
    let e = Ellipse::new(2.0, 1.0).unwrap();
    let frame = BilliardFrame::new(2.0, 1.0).unwrap();
    let us = [0.2, 0.5, 0.9, 1.4, 2.2];
    let thetas = [PI / 6.0, PI / 4.0, PI / 3.0, 2.0 * PI / 5.0, 3.0 * PI / 5.0];
    let mut worst_lines = 0.0f64;
    let mut worst_center = 0.0f64;
    for &u in &us {
        let m = frame.ellipse_point_cart(u).unwrap();
        for &theta in &thetas {
            let fit = fit_envelope(&e, &m, theta, 48).unwrap();
            let conic_fit = fit.point_conic().expect("conic envelope on the grid");
            let (fitted, _) =
                conic::tangent_lines_from_point(conic_fit, &conic::homogenize(&m)).unwrap();
            assert_eq!(fitted.len(), 2, "two tangents from M");
            worst_lines = worst_lines.max(pair_gap(frame.tangent_pair_cart(u, theta), &fitted));
            let center = frame.envelope_center_cart(u, theta).unwrap();
            worst_center = worst_center.max((fit.axes().unwrap().center - center).norm());
        }
    }
    // Caustic tangent parameters against a numeric tangent-chord step in the
    // circle picture (θ-independent, checked per u).
    let picture = circle_picture(2.0, 1.0, frame.mandart_lambda()).unwrap();
    let mut worst_caustic = 0.0f64;
    for &u in &us {
        let ct = frame.caustic_tangent_params(u).unwrap();
        let p = frame.circle_picture_point(u);
        let q = picture.next_vertex(&p).unwrap();
        let d2 = (q - frame.circle_picture_point(ct.u2)).norm();
        let d3 = (q - frame.circle_picture_point(ct.u3)).norm();
        worst_caustic = worst_caustic.max(d2.min(d3));
    }
    let worst = worst_lines.max(worst_center).max(worst_caustic);
    (
        from_bool(worst < 1e-7),
        format!(
            "closed forms match fits on a 5×5 (u, θ) grid: tangent pair to {worst_lines:.2e}, \
             centre to {worst_center:.2e}, caustic tangent parameters to {worst_caustic:.2e} (tol 1e-7)"
        ),
    )
}

#[test]
fn acceptance() {
    let mut results: Vec<(usize, Status, String)> = Vec::new();
    let c1 = criterion_1();
    results.push((1, c1.0, c1.1));
    let c2 = criterion_2();
    results.push((2, c2.0, c2.1));
    let c3 = criterion_3();
    results.push((3, c3.0, c3.1));
    let c4 = criterion_4();
    results.push((4, c4.0, c4.1));
    let c5 = criterion_5();
    results.push((5, c5.0, c5.1));
    let c6 = criterion_6();
    results.push((6, c6.0, c6.1));
    let c7 = criterion_7();
    results.push((7, c7.0, c7.1));
    let (s8, d8, mut reports) = criterion_8();
    results.push((8, s8, d8));
    let (s9, d9, scan_reports) = criterion_9();
    results.push((9, s9, d9));
    reports.extend(scan_reports);
    let c10 = criterion_10(&reports);
    results.push((10, c10.0, c10.1));
    let c11 = criterion_11();
    results.push((11, c11.0, c11.1));

    for (i, status, detail) in &results {
        println!("criterion {i}: {} — {detail}", status.word());
    }
    let fatal: Vec<usize> = results
        .iter()
        .filter(|(_, s, _)| *s == Status::Fail)
        .map(|(i, _, _)| *i)
        .collect();
    assert!(
        fatal.is_empty(),
        "criteria failed beyond the documented discrepancy: {fatal:?}"
    );
}
