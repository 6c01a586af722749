//! θ = π/3 and θ = 2π/3 are special: the tangents from M to the envelope
//! meet the ellipse again at T₁, T₂, and only at those two angles is the
//! third side T₁T₂ itself tangent to the envelope — the envelope sits
//! inscribed in the triangle M T₁ T₂. The circumcircle of that triangle
//! meets the ellipse at a fourth point with an angle story of its own.

use std::f64::consts::PI;

use fregier::envelope::{inscribed_special_check, Ellipse};

fn main() -> fregier::Result<()> {
    let e = Ellipse::new(2.0, 1.0)?;
    let m = e.point(0.9);

    println!(
        "{:>8}  {:>14}  tangent to envelope?",
        "θ/π", "T₁T₂ residual"
    );
    for (label, theta) in [
        ("1/3", PI / 3.0),
        ("2/3", 2.0 * PI / 3.0),
        ("1/4", PI / 4.0),
        ("2/5", 2.0 * PI / 5.0),
    ] {
        let rep = inscribed_special_check(&e, &m, theta, 64)?;
        println!(
            "{label:>8}  {:14.3e}  {}",
            rep.chord_residual,
            if rep.chord_tangent_to_envelope {
                "yes"
            } else {
                "no"
            }
        );
    }

    let rep = inscribed_special_check(&e, &m, PI / 3.0, 64)?;
    if let Some(fourth) = rep.fourth {
        println!();
        println!("fourth circumcircle point at θ = π/3:");
        println!("  M′ = ({:+.9}, {:+.9})", fourth.point.x, fourth.point.y);
        println!(
            "  ray angle ∠T₁M′T₂       = {:.12}  (= π − 2θ = π/3)",
            fourth.ray_angle
        );
        println!(
            "  obtuse line-pair angle  = {:.12}  (= 2θ = 2π/3)",
            fourth.line_angle_obtuse
        );
    }
    Ok(())
}
