//! The billiard frame is a second, independent route to the envelope: a
//! trilinear chart built on the orbit triangle of the (a, b) table, in
//! which the chord tangents, the envelope centre, and the centre locus all
//! have closed forms. This demo builds the chart and checks it against the
//! purely numerical fit.

use std::f64::consts::PI;

use fregier::conic::{homogenize, normalize_proj, tangent_lines_from_point, ProjLine};
use fregier::envelope::{fit_envelope, Ellipse};
use fregier::frame::BilliardFrame;
use nalgebra::Point2;

fn line_gap(l1: &ProjLine, l2: &ProjLine) -> f64 {
    let a = normalize_proj(l1);
    let b = normalize_proj(l2);
    (a - b).norm().min((a + b).norm())
}

fn main() -> fregier::Result<()> {
    let (a, b) = (2.0, 1.0);
    let e = Ellipse::new(a, b)?;
    let frame = BilliardFrame::new(a, b)?;

    println!(
        "frame scalars: h = {:.15}, ρ = (1−h²)/2 = {:.15}",
        frame.h, frame.rho
    );

    // Chart round trip on an arbitrary point.
    let p = Point2::new(0.83, -0.41);
    let back = frame.tri_to_cart(&frame.cart_to_tri(&p))?;
    println!(
        "chart round trip moved (0.83, −0.41) by {:.3e}",
        (back - p).norm()
    );

    // The ellipse maps onto the circumconic βγ + γα + αβ = 0 of the chart
    // triangle; u parametrizes it rationally.
    let mut worst: f64 = 0.0;
    for j in 0..7 {
        let u = 0.3 + j as f64 * 0.45;
        let x = frame.ellipse_point_tri(u);
        worst = worst.max((x.y * x.z + x.z * x.x + x.x * x.y).abs() / x.norm_squared());
    }
    println!("worst circumconic residual along the ellipse image: {worst:.3e}");
    println!();

    // Closed-form tangent pair and envelope centre vs the numerical fit.
    let (u, theta) = (0.9, PI / 3.0);
    let m = frame.ellipse_point_cart(u)?;
    let fit = fit_envelope(&e, &m, theta, 48)?;
    let conic = fit.point_conic().expect("conic envelope at θ = π/3");
    let (fitted, _) = tangent_lines_from_point(conic, &homogenize(&m))?;

    let (f1, f2) = frame.tangent_pair_cart(u, theta);
    let gap = line_gap(&f1, &fitted[0])
        .max(line_gap(&f2, &fitted[1]))
        .min(line_gap(&f1, &fitted[1]).max(line_gap(&f2, &fitted[0])));
    println!("at u = {u}, θ = π/3:");
    println!("  tangent pair, closed form vs fit: gap {gap:.3e}");

    let center = frame.envelope_center_cart(u, theta)?;
    println!(
        "  envelope centre, closed form vs fit: gap {:.3e}",
        (fit.axes().expect("conic envelope").center - center).norm()
    );
    Ok(())
}
