//! At θ = π/2 every chord of the family passes through one point — the
//! envelope collapses. The fit detects the concurrency on its own and the
//! collapse point matches the classical closed form
//! K = ((a²−b²)/(a²+b²)·Mx, −(a²−b²)/(a²+b²)·My).

use std::f64::consts::{FRAC_PI_2, PI};

use fregier::envelope::{fit_envelope, fregier_point, Ellipse, EnvelopeShape};

fn main() -> fregier::Result<()> {
    let e = Ellipse::new(2.0, 1.0)?;
    println!("right-angle chords on the (2, 1) ellipse:");
    println!(
        "{:>6}  {:>32}  {:>12}",
        "t", "fitted collapse point", "vs closed form"
    );

    for j in 0..6 {
        let t = 2.0 * PI * (j as f64 + 0.5) / 6.0;
        let m = e.point(t);
        let fit = fit_envelope(&e, &m, FRAC_PI_2, 48)?;
        match fit.shape {
            EnvelopeShape::Point(k) => {
                let gap = (k - fregier_point(&e, &m)).norm();
                println!("{t:6.3}  ({:+.12}, {:+.12})  {gap:12.3e}", k.x, k.y);
            }
            EnvelopeShape::Ellipse { .. } => {
                println!("{t:6.3}  unexpectedly did not collapse");
            }
        }
    }

    // On a circle all of these points are the centre.
    let c = Ellipse::new(1.0, 1.0)?;
    let fit = fit_envelope(&c, &c.point(1.1), FRAC_PI_2, 48)?;
    if let EnvelopeShape::Point(k) = fit.shape {
        println!();
        println!(
            "unit circle: collapse point ({:+.3e}, {:+.3e}) — the centre",
            k.x, k.y
        );
    }
    Ok(())
}
