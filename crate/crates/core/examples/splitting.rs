use tame_iwasawa::characters::{class_representatives, FieldSpec};
use tame_iwasawa::frobenius::{m_index, rational_tower_count, splitting_count, FrobeniusProfile};

fn main() -> tame_iwasawa::Result<()> {
    for (p, q) in [(3, 7), (3, 19), (3, 163), (5, 7), (5, 11)] {
        let m = m_index(q, p)?;
        let count = rational_tower_count(q, p, m + 1)?;
        println!("p = {p}, q = {q}: m_q = {m}, primes above q at level {} = {count}", m + 1);
    }

    let field = FieldSpec::full_cyclotomic(3, 7)?;
    for q in [2, 13, 7] {
        for n in 0..3 {
            let s = splitting_count(&field, q, n)?;
            println!(
                "Q(mu_21), q = {q}, n = {n}: f_n = {}, r_n = {}, e_n = {}",
                s.residue_degree, s.prime_count, s.p_exponent
            );
        }
    }

    let labelled: Vec<_> = class_representatives(&field)
        .into_iter()
        .enumerate()
        .map(|(i, c)| (format!("{i}:{}", c.label(i)), c))
        .collect();
    let profile = FrobeniusProfile::new(&field, 13, &labelled, 8)?;
    println!("{}", serde_json::to_string_pretty(&profile).unwrap());
    Ok(())
}
