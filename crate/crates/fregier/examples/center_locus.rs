//! As the viewpoint travels around the ellipse (θ fixed), the envelope
//! centres trace a conic of their own. Fit that locus from the swept
//! centres and compare it with the closed form carried by the billiard
//! frame, whose centre is independent of θ.

use std::f64::consts::PI;

use fregier::envelope::{center_locus, Ellipse, LocusShape};
use fregier::frame::BilliardFrame;

fn main() -> fregier::Result<()> {
    let (a, b) = (2.0, 1.0);
    let e = Ellipse::new(a, b)?;
    let frame = BilliardFrame::new(a, b)?;
    let theta = PI / 3.0;

    let locus = center_locus(&e, theta, 16, 48)?;
    println!("swept {} envelope centres at θ = π/3", locus.centers.len());

    match &locus.shape {
        LocusShape::Point(p) => println!("locus collapsed to ({:.9}, {:.9})", p.x, p.y),
        LocusShape::Conic { axes, .. } => {
            let axes = axes.as_ref().expect("locus of centres is an ellipse here");
            println!("locus is an ellipse:");
            println!(
                "  centre    ({:+.12}, {:+.12})",
                axes.center.x, axes.center.y
            );
            println!("  semi-axes ({:.12}, {:.12})", axes.a1, axes.b1);

            let predicted = frame.tri_to_cart(&frame.locus_center_tri())?;
            println!(
                "  frame's predicted centre ({:+.12}, {:+.12}), gap {:.3e}",
                predicted.x,
                predicted.y,
                (axes.center - predicted).norm()
            );
        }
    }

    // The same locus in the frame's trilinear chart: every swept centre
    // satisfies the chart-side quadric.
    let q = frame.locus_conic_tri(theta);
    let mut worst: f64 = 0.0;
    for c in &locus.centers {
        let x = frame.cart_to_tri(c);
        worst = worst.max(q.eval(&x).abs() / (q.0.norm() * x.norm_squared()));
    }
    println!("worst trilinear-chart residual over the swept centres: {worst:.3e}");
    Ok(())
}
