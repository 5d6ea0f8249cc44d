use tame_iwasawa::characters::{conjugacy_classes, enumerate_characters, FieldSpec};

fn main() -> tame_iwasawa::Result<()> {
    // K = Q(sqrt 2, mu_3): f = 8, H = {1, 7}
    for field in [FieldSpec::cyclotomic(5)?, FieldSpec::new(3, 8, vec![7])?, FieldSpec::full_cyclotomic(5, 7)?] {
        let chars = enumerate_characters(&field);
        println!("p = {}, f = {}, |G| = {}", field.p(), field.f(), field.group_order());
        for class in conjugacy_classes(&chars, field.p()) {
            let chi = &chars[class[0]];
            println!(
                "  {:<8} order {:>2}  conductor {:>3}  {:?}  d_chi {}  class {:?}",
                chi.label(class[0]),
                chi.order(),
                chi.conductor(),
                chi.parity(),
                chi.d_chi(),
                class
            );
        }
    }
    Ok(())
}
