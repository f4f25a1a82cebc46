//! Certifies that the canonical line stays off the coordinate hyperplanes.
use polybergman::projections::{generic_position_certificate, p_gamma};
use polybergman::spectral::{CompactifiedGrid, Point};

fn main() -> polybergman::Result<()> {
    let grid = CompactifiedGrid::log(1e-3, 100.0, 200)?;
    for n in [2, 4, 8] {
        let report = generic_position_certificate(n, &grid)?;
        println!(
            "n = {n}: min ln margin {:.3} at x = {:.4}, k = {}; norm defect {:e}",
            report.min_ln_margin, report.argmin.0, report.argmin.1, report.max_norm_defect
        );
    }
    let p = p_gamma(4, Point::Finite(0.3))?;
    println!("P_gamma(0.3): trace {}, idempotency defect {:e}", p.trace(), p.idempotency_defect());
    Ok(())
}
