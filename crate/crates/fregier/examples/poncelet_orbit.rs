//! Build a closed billiard triangle in the circle picture: squash the
//! (a, b) table to a circle of radius b, tune the confocal caustic until
//! the orbit closes after three bounces, and check the three invariant
//! sums against their closed forms in the caustic ratio ρ.

use std::f64::consts::PI;

use fregier::frame::BilliardFrame;
use fregier::poncelet::{
    circle_picture, find_caustic_for_period, identity_residual, invariant_sums, radii_bound_check,
};

fn main() -> fregier::Result<()> {
    let (a, b) = (2.0, 1.0);
    let lambda = find_caustic_for_period(a, b, 3, 1)?;
    let picture = circle_picture(a, b, lambda)?;
    let frame = BilliardFrame::new(a, b)?;

    println!("period-3 caustic: λ = {lambda:.15}");
    println!(
        "frame's Mandart λ  = {:.15}  (same conic)",
        frame.mandart_lambda()
    );
    println!(
        "caustic semi-axes  = ({:.12}, {:.12})",
        picture.a_c, picture.b_c
    );
    println!();

    let orbit = picture.orbit(0.4, 3)?;
    println!("orbit from phase 0.4:");
    for (i, v) in orbit.vertices.iter().enumerate() {
        println!(
            "  P{i} = ({:+.12}, {:+.12})   θ{i} = {:.12}   r{i} = {:.12}",
            v.x, v.y, orbit.angles[i], orbit.radii[i]
        );
    }
    println!("  closure defect     {:.3e}", orbit.closure_defect);
    println!("  edge tangency max  {:.3e}", orbit.edge_tangency_max);
    println!();

    let sums = invariant_sums(&orbit)?;
    let rho = frame.rho;
    println!("invariant sums vs the ρ = {rho:.12} closed forms:");
    println!(
        "  Σ cos²θ  = {:.15}   predicted 1 − ρ/2      = {:.15}",
        sums.sum_cos2,
        1.0 - rho / 2.0
    );
    println!(
        "  Σ πr²    = {:.15}   predicted πb²(1 − ρ/2) = {:.15}",
        sums.sum_area,
        PI * b * b * (1.0 - rho / 2.0)
    );
    println!(
        "  Σ diag²  = {:.15}   predicted 2b²(ρ + 4)   = {:.15}",
        sums.sum_diag2,
        2.0 * b * b * (rho + 4.0)
    );
    println!(
        "  identity Σcos² + Σdiag²/(4R²) − n = {:+.3e}",
        identity_residual(&sums, orbit.r)
    );

    let bound = radii_bound_check(&orbit)?;
    println!(
        "  radii bound: Σr²/R² = {:.12} ∈ [3/4, 1]? {}",
        bound.ratio,
        if bound.holds { "yes" } else { "NO" }
    );
    Ok(())
}
