//! At θ = π/4 the two tangents from the viewpoint to the envelope are
//! perpendicular, so M lies on the envelope's orthoptic (director) circle:
//! |M − K|² = a₁² + b₁². That single distance plus the area pins down both
//! semi-axes, which is a handy consistency check on the fit.

use std::f64::consts::{FRAC_PI_4, PI};

use fregier::envelope::{axes_from_area_and_km, fit_envelope, orthoptic_residual, Ellipse};

fn main() -> fregier::Result<()> {
    let e = Ellipse::new(2.0, 1.0)?;

    for j in 0..5 {
        let t = 2.0 * PI * (j as f64 + 0.21) / 5.0;
        let m = e.point(t);
        let fit = fit_envelope(&e, &m, FRAC_PI_4, 48)?;
        let axes = fit.axes().expect("θ = π/4 envelope is an ellipse");

        let d = (m - axes.center).norm();
        let (a1, b1) = axes_from_area_and_km(axes.area(), d)?;

        println!("t = {t:.3}");
        println!(
            "  orthoptic residual of M        : {:.3e}",
            orthoptic_residual(axes, &m)
        );
        println!(
            "  |MK|² − (a₁² + b₁²)            : {:+.3e}",
            d * d - (axes.a1 * axes.a1 + axes.b1 * axes.b1)
        );
        println!("  axes from (area, |MK|)         : ({a1:.12}, {b1:.12})");
        println!(
            "  axes from the fit directly     : ({:.12}, {:.12})",
            axes.a1, axes.b1
        );
    }
    Ok(())
}
