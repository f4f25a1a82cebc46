//! Closed-form kernel entries against a Gauss–Laguerre oracle, and a Gram matrix check.
use polybergman::kernels::{gram_matrix, gram_report, kernel_kgamma, kernel_pt, kernel_pt_oracle, HalfPlanePoint, KGammaMethod};
use polybergman::quadrature::HalfLineRule;

fn main() -> polybergman::Result<()> {
    let z: HalfPlanePoint = "0.3+0.7i".parse()?;
    let w: HalfPlanePoint = "-1+1.2i".parse()?;
    let n = 3;
    let closed = kernel_pt(n, z, w)?;
    let oracle = kernel_pt_oracle(n, z, w, HalfLineRule::default_adaptive())?;
    println!("K_{n}(z, w) at z = {}, w = {}:\n{}", z.as_complex(), w.as_complex(), closed.entries);
    println!("max relative error vs oracle: {:e}", closed.max_relative_error(&oracle));

    let q = kernel_kgamma(n, z, w, KGammaMethod::Quadrature)?;
    let r = kernel_kgamma(n, z, w, KGammaMethod::PhiRepresentation)?;
    println!("K^gamma: quadrature {q}, phi form {r}, gap {:e}", (q - r).norm());

    let pts: Vec<HalfPlanePoint> = ["i", "0.5+0.5i", "-1+2i", "2+0.3i"]
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_, _>>()?;
    let g = gram_report(&gram_matrix(n, &pts)?);
    println!(
        "Gram matrix: hermitian defect {:e}, eigenvalues in [{:e}, {:e}]",
        g.hermitian_defect, g.min_eigenvalue, g.max_eigenvalue
    );
    Ok(())
}
