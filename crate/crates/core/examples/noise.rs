//! Critical visibilities under depolarizing noise, numerically and in closed form.

use ctxgap::algebra::GoldenQuartic;
use ctxgap::noise::{critical_visibility_exact, kcbs_visibility_closed_form, noise_table, published_inputs, render_noise_table};

fn main() -> Result<(), ctxgap::noise::NoiseError> {
    print!("{}", render_noise_table(&noise_table(&published_inputs(100, 0))?));
    let eta3 = &GoldenQuartic::one() + &GoldenQuartic::sqrt5();
    let quad = critical_visibility_exact(3, &eta3, 8, 3)?;
    let kcbs = critical_visibility_exact(2, &GoldenQuartic::sqrt5(), 5, 3)?;
    assert!(quad == kcbs && kcbs == kcbs_visibility_closed_form());
    println!("v*(KCBS) = v*(Quad-C5, d=3) = 1/(3√5 - 5) = {:.10}", kcbs.to_f64());
    Ok(())
}
