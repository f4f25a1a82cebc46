//! The isometry R_n* on vector profiles, and R_n recovering them from sampled fields.
use polybergman::kernels::HalfPlanePoint;
use polybergman::quadrature::PlaneRule;
use polybergman::transforms::{
    apply_rn_sampled, build_image_element, sample_image_element, sample_rn_star, HalfLineProfile, VectorProfile,
};

fn main() -> polybergman::Result<()> {
    let n = 2;
    let a = HalfLineProfile::power_exp(1, 1.0)?;
    let h = build_image_element(n, &a, HalfPlanePoint::new(0.0, 1.0)?)?;
    println!("h(i) = [{}, {}]", h[0], h[1]);

    let rule = PlaneRule::acceptance();
    let image = sample_image_element(n, &a, &rule)?;
    println!("|h|^2 = {:.6}, |a|^2 = {:.6}", image.norm_sq(), a.norm_sq()?);

    let f = VectorProfile::new(vec![HalfLineProfile::power_exp(1, 1.0)?, HalfLineProfile::power_exp(2, 1.5)?])?;
    let field = sample_rn_star(n, &f, &rule)?;
    println!("|R* f|^2 = {:.6}, |f|^2 = {:.6}", field.norm_sq(), f.norm_sq()?);
    for x in [0.5, 1.0, 2.0] {
        let back = apply_rn_sampled(n, &field, x)?;
        let want = f.evaluate(x);
        println!("x = {x}: R R* f = [{:.6}, {:.6}], f = [{:.6}, {:.6}]", back[0].re, back[1].re, want[0].re, want[1].re);
    }
    Ok(())
}
