use tame_iwasawa::annihilators::{annihilator, lcm_degree, lcm_degree_oracle};
use tame_iwasawa::characters::{class_representatives, FieldSpec};

fn main() -> tame_iwasawa::Result<()> {
    let field = FieldSpec::full_cyclotomic(3, 7)?;
    let s = [2, 13, 19, 37, 43];
    for (i, chi) in class_representatives(&field).iter().enumerate() {
        let mut family = Vec::new();
        for q in s {
            if let Some(f) = annihilator(chi, q)? {
                println!(
                    "{}, q = {q}: (1+T)^{} - zeta kappa_0^{}, zeta = {:?}",
                    chi.label(i),
                    f.degree(),
                    f.degree(),
                    f.zeta
                );
                family.push(f);
            }
        }
        println!("  deg lcm = {} (roots counted in C: {})", lcm_degree(&family), lcm_degree_oracle(&family));
    }
    Ok(())
}
