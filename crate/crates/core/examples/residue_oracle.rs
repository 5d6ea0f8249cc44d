use tame_iwasawa::characters::{class_representatives, FieldSpec};
use tame_iwasawa::frobenius::inertia_trivial;
use tame_iwasawa::residue::{
    chi_quotient_order, norm_map_cokernel, parity_parts, rank_estimate, residue_module, stabilization_level,
    verify_annihilator,
};

fn main() -> tame_iwasawa::Result<()> {
    let field = FieldSpec::full_cyclotomic(3, 7)?;
    let reps = class_representatives(&field);
    for q in [2, 13, 19, 7] {
        let n0 = stabilization_level(&field, q)?;
        let module = residue_module(&field, q, n0)?;
        println!("q = {q}: n0 = {n0}, {} cosets, e_n = {}", module.cosets(), module.exponent());
        for (i, chi) in reps.iter().enumerate() {
            let (full, plus, minus) = parity_parts(&module, chi)?;
            println!(
                "  {:<6} |M_chi| = p^{} (+ {plus}, - {minus})  rank {}  annihilated {:?}  norm cokernel p^{}",
                chi.label(i),
                chi_quotient_order(&module, chi)?,
                rank_estimate(&field, q, chi, n0, n0 + 1)?,
                inertia_trivial(chi, q).then(|| verify_annihilator(&field, q, chi, n0)).transpose()?,
                norm_map_cokernel(&field, q, chi, n0)?,
            );
            assert_eq!(full, plus + minus);
        }
    }
    Ok(())
}
