use tame_iwasawa::characters::FieldSpec;
use tame_iwasawa::rank::{rank_rational, rank_total, LambdaProvider};

fn main() -> tame_iwasawa::Result<()> {
    // Q(mu_5) is regular, so every lambda is 0
    let t = rank_total(&FieldSpec::cyclotomic(5)?, &[7, 11], &LambdaProvider::constant(0))?;
    for r in &t.records {
        println!(
            "{:<8} S_chi {:?}  m {:?}  degF {}  P {}  rank {}",
            r.character, r.s_chi, r.m_map, r.deg_f, r.p_chi, r.rank
        );
    }
    println!("total {}\n", t.total);

    // Q(sqrt 2, mu_3) with Greenberg's conjecture for the even part
    let t = rank_total(&FieldSpec::new(3, 8, vec![7])?, &[5, 7, 13], &LambdaProvider::greenberg())?;
    for r in &t.records {
        println!("{:<8} rank {} lambda {:?}", r.character, r.rank, r.lambda);
    }
    println!("total {} conjectural {}\n", t.total, t.conjectural);

    for s in [vec![7, 13], vec![7, 19], vec![5], vec![7, 13, 19, 37]] {
        println!("Q_inf, p = 3, S = {s:?}: rank {}", rank_rational(&s, 3)?);
    }
    Ok(())
}
