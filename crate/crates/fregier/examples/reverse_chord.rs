//! The reverse problem: given a chord N L and an angle θ, find the points
//! of the ellipse that see the chord under θ. Round-trips a forward-built
//! chord, then shows the circle's degeneracy, where the inscribed-angle
//! theorem makes the answer a whole arc instead of isolated points.

use std::f64::consts::PI;

use fregier::envelope::{chord_at, reverse_problem, Ellipse};
use fregier::Error;

fn main() -> fregier::Result<()> {
    let e = Ellipse::new(2.0, 1.0)?;
    let m = e.point(1.2);

    let ch = chord_at(&e, &m, PI / 3.0, 0.2)?;
    // The construction may realise θ or its supplement depending on which
    // side of the tangent at M the rotated ray lands, so ask the chord what
    // it actually subtends before going back.
    let v1 = (ch.n - m).normalize();
    let v2 = (ch.l - m).normalize();
    let seen = v1.dot(&v2).clamp(-1.0, 1.0).acos();

    println!("chord built from M = ({:.6}, {:.6}):", m.x, m.y);
    println!("  N = ({:+.9}, {:+.9})", ch.n.x, ch.n.y);
    println!("  L = ({:+.9}, {:+.9})", ch.l.x, ch.l.y);
    println!(
        "  subtends {seen:.12} at M  (requested π/3, landed on {})",
        if (seen - PI / 3.0).abs() < 1e-9 {
            "θ"
        } else {
            "its supplement"
        }
    );

    let sols = reverse_problem(&e, &ch.n, &ch.l, seen)?;
    println!("viewpoints recovered from (N, L, {seen:.6}):");
    for s in &sols {
        println!(
            "  ({:+.12}, {:+.12})  distance to M = {:.3e}",
            s.x,
            s.y,
            (s - m).norm()
        );
    }

    // On a circle, the locus of viewpoints under the chord's own inscribed
    // angle is the whole arc, so isolated solutions don't exist and the
    // call is refused as a documented degeneracy.
    let c = Ellipse::new(1.0, 1.0)?;
    let n = c.point(0.3);
    let l = c.point(2.1);
    let arc_angle = (2.1 - 0.3) / 2.0;
    match reverse_problem(&c, &n, &l, arc_angle) {
        Err(err @ Error::Degenerate(_)) => {
            println!();
            println!("unit circle at the arc's own angle {arc_angle}: {err}");
            println!(
                "(reported as a documented degeneracy, exit code {})",
                err.exit_code()
            );
        }
        other => println!("unexpected outcome on the circle: {other:?}"),
    }
    Ok(())
}
