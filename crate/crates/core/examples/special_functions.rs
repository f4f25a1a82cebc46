//! Gamma, digamma, Nielsen beta and the Laplace integrals behind the kernel.
use num_complex::Complex64;
use polybergman::specfun::{digamma, gamma_fn, laguerre_ell, laplace_j, laplace_tj, nielsen_beta, EULER_GAMMA};

fn main() -> polybergman::Result<()> {
    println!("Gamma(5)       = {}", gamma_fn(5.0)?.re);
    println!("Gamma(1/2)^2   = {}", gamma_fn(0.5)?.re.powi(2));
    println!("psi(1) + gamma = {:e}", digamma(1.0)?.re + EULER_GAMMA);
    println!("beta(1)        = {} (ln 2 = {})", nielsen_beta(1.0)?.re, std::f64::consts::LN_2);

    // J(p) = ∫ e^{-pt} √(1 - e^{-2t}) dt at a complex argument
    let p = Complex64::new(2.5, -1.0);
    println!("J({p})  = {}", laplace_j(p)?);
    println!("tJ({p}) = {}", laplace_tj(p)?);

    for k in 0..4 {
        println!("l_{k}(1.5) = {:+.15}", laguerre_ell(k, 1.5)?);
    }
    Ok(())
}
