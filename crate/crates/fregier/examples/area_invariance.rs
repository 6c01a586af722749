//! The envelope's area does not depend on where the viewpoint sits on the
//! ellipse — only on the angle. Sweep M around the ellipse at fixed θ and
//! watch the fitted area stay put while centre and tilt move.

use std::f64::consts::PI;

use fregier::envelope::{fit_envelope, predicted_area, Ellipse};
use fregier::frame::BilliardFrame;

fn main() -> fregier::Result<()> {
    let e = Ellipse::new(2.0, 1.0)?;
    let frame = BilliardFrame::new(2.0, 1.0)?;
    let theta = 2.0 * PI / 5.0;

    println!("θ = 2π/5, sweeping the viewpoint:");
    println!("{:>6}  {:>22}  {:>22}", "t", "area", "centre");

    let mut areas = Vec::new();
    for j in 0..12 {
        let t = 2.0 * PI * (j as f64 + 0.37) / 12.0;
        let fit = fit_envelope(&e, &e.point(t), theta, 48)?;
        let axes = fit.axes().expect("θ ≠ π/2 keeps the envelope an ellipse");
        println!(
            "{t:6.3}  {:22.16}  ({:+.6}, {:+.6})",
            axes.area(),
            axes.center.x,
            axes.center.y
        );
        areas.push(axes.area());
    }

    let min = areas.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = areas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mean = areas.iter().sum::<f64>() / areas.len() as f64;
    println!();
    println!(
        "relative spread (max−min)/mean = {:.3e}",
        (max - min) / mean
    );
    println!(
        "closed form √(k²)·|cos θ|·πab  = {:.16}",
        predicted_area(&e, frame.rho, theta)
    );
    Ok(())
}
