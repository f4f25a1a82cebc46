//! Integrates the kernel against an element of the image and recovers its values.
use polybergman::kernels::{reproducing_check, HalfPlanePoint};
use polybergman::quadrature::PlaneRule;
use polybergman::transforms::HalfLineProfile;

fn main() -> polybergman::Result<()> {
    let a = HalfLineProfile::power_exp(1, 1.0)?;
    let points = [HalfPlanePoint::new(0.0, 1.0)?, HalfPlanePoint::new(0.7, 0.6)?];
    // a small box; errors shrink as the box grows
    for rule in [PlaneRule::new(20.0, 0.005, 20.0, 256, 128)?, PlaneRule::acceptance()] {
        for r in reproducing_check(2, &a, &points, &rule)? {
            println!("z = {:.2}  relative residual {:.3e}", r.z.as_complex(), r.relative);
        }
    }
    Ok(())
}
