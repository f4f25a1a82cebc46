//! Spectral matrices of a vertical Toeplitz operator, closed form against quadrature.
use polybergman::spectral::{gamma_matrix, gamma_matrix_quadrature, gamma_on_grid, spectral_table, CompactifiedGrid};
use polybergman::symbols::VerticalSymbol;

fn main() -> polybergman::Result<()> {
    let n = 3;
    let a = VerticalSymbol::indicator(0.5, 2.0)?;
    let x = 0.8;
    let closed = gamma_matrix(n, &a, x)?;
    let quad = gamma_matrix_quadrature(n, &a, x)?;
    let diff = (&closed.entries - &quad.entries).amax();
    println!("gamma^a({x}) for a = 1[0.5, 2], n = {n}:\n{}", closed.entries);
    println!("closed form vs quadrature: {diff:e}");

    let grid = CompactifiedGrid::log(0.05, 20.0, 6)?;
    let table = spectral_table(&gamma_on_grid(n, &a, &grid)?)?;
    print!("{}", table.to_string_lossy());
    Ok(())
}
