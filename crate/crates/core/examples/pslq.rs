//! Integer relations for 1 + √5 at 50 digits, and the residual screen at 15 digits.

use ctxgap::algebra::{pslq_candidates, pslq_find, residual_test, BigReal, PslqSettings};

fn main() -> Result<(), ctxgap::algebra::AlgebraError> {
    let s = PslqSettings::default();
    let x = &BigReal::from_i64(1, 50) + &BigReal::from_i64(5, 50).sqrt()?;
    if let Some(p) = pslq_find(&x, 4, &s)? {
        println!("{}  ->  {p}  r = {:.1e}", x.to_decimal(30), residual_test(&p, &x, 1e-15)?);
    }
    let x15 = BigReal::parse("3.46784372984022", 15)?;
    for c in pslq_candidates(&x15, 4, 1e-15, &s)? {
        match (c.polynomial, c.residual) {
            (Some(p), Some(r)) => println!("k={}  {p}  r = {r:.3}", c.degree),
            _ => println!("k={}  none", c.degree),
        }
    }
    Ok(())
}
