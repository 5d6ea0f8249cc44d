use tame_iwasawa::characters::DirichletCharacter;
use tame_iwasawa::stickelberger::{bernoulli_b1, lambda_minus, stickelberger_series, DEFAULT_PRECISION};

fn main() -> tame_iwasawa::Result<()> {
    let p = 37;
    let omega = DirichletCharacter::teichmuller(p);
    for k in (3..p - 1).step_by(2) {
        let chi = omega.pow(k as i64);
        let l = lambda_minus(&chi)?;
        let b = bernoulli_b1(&chi.inverse())?;
        let irregular = b.divisible_by_p(p, DEFAULT_PRECISION)?;
        if l.lambda > 0 || irregular {
            println!("omega^{k}: lambda {} levels {:?}, p | B_1(chi^-1): {irregular}", l.lambda, l.levels_used);
        }
    }

    let series = stickelberger_series(&omega.pow(5), 2, DEFAULT_PRECISION)?;
    let ring = &series.ring;
    for (i, c) in series.t_coefficients(4).iter().enumerate() {
        println!("T^{i}: {:?} (valuation {:?})", c.coords(), ring.valuation(c));
    }
    Ok(())
}
