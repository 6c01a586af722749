//! The viewpoint sees the envelope under the angle |π − 2θ|: the two
//! tangents from M to the fitted envelope open exactly that far. Tabulate
//! the measured angle against the prediction over a fan of θ.

use std::f64::consts::PI;

use fregier::envelope::{fit_envelope, tangent_angle, Ellipse};

fn main() -> fregier::Result<()> {
    let e = Ellipse::new(1.8, 1.0)?;
    let m = e.point(2.3);

    println!(
        "{:>10}  {:>20}  {:>20}  {:>10}",
        "θ", "measured", "|π − 2θ|", "gap"
    );
    for k in 1..=11 {
        let theta = PI * k as f64 / 12.0;
        if (theta - PI / 2.0).abs() < 1e-12 {
            // Collapses to a point: no tangent pair to measure.
            println!("{theta:10.6}  {:>20}  {:>20}  {:>10}", "(point)", "0", "—");
            continue;
        }
        let fit = fit_envelope(&e, &m, theta, 64)?;
        let conic = fit.point_conic().expect("nondegenerate for θ ≠ π/2");
        let seen = tangent_angle(conic, &m)?;
        let want = (PI - 2.0 * theta).abs();
        println!(
            "{theta:10.6}  {seen:20.16}  {want:20.16}  {:10.3e}",
            (seen - want).abs()
        );
    }
    Ok(())
}
