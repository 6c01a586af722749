//! Emit the full artifact set — SVG figures, CSV tables, JSON sidecars —
//! for one envelope fit and one Poncelet run, the same files the CLI
//! writes. Output lands in `out/figures/`.

use std::f64::consts::PI;
use std::path::PathBuf;

use fregier::experiments::{run_envelope, run_poncelet, EnvelopeParams, PonceletParams};

fn main() -> fregier::Result<()> {
    let out_dir = PathBuf::from("out/figures");

    let envelope = run_envelope(&EnvelopeParams {
        a: 2.0,
        b: 1.0,
        theta: PI / 3.0,
        m_angle: 0.7,
        samples: 48,
        out_dir: out_dir.clone(),
    })?;
    let poncelet = run_poncelet(&PonceletParams {
        a: 2.0,
        b: 1.0,
        n: 3,
        phases: 32,
        out_dir,
    })?;

    for note in envelope.notes.iter().chain(&poncelet.notes) {
        println!("{note}");
    }
    for f in envelope.files.iter().chain(&poncelet.files) {
        println!("wrote {}", f.display());
    }
    Ok(())
}
