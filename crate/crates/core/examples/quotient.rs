//! Quotients recognizers by their coarsest congruence and classifies the
//! languages through the result.

use oalg::corpus::fixtures;
use oalg::quotient::{classify_language, coarsest_congruence, restrict_to_generated, syntactic};
use oalg::term::RecognizedLanguage;

fn show(title: &str, lang: &RecognizedLanguage) {
    println!("== {title}");
    let reachable = restrict_to_generated(lang).unwrap();
    let c = coarsest_congruence(&reachable);
    println!(
        "{} elements, {} reachable, {} blocks",
        lang.algebra.size(),
        reachable.algebra.size(),
        c.representatives().len()
    );
    let q = syntactic(lang).unwrap();
    print!("{}", q.algebra);
    println!("verdict: {}\n", classify_language(lang).unwrap().marks());
}

fn main() {
    // Nonempty words: ci and oi cannot be told apart by any context.
    let nonempty =
        RecognizedLanguage::from_names(fixtures::min(), &[('a', "ci"), ('b', "ci")], &["ci", "oi"])
            .unwrap();
    show("nonempty words over 𝒪_min", &nonempty);

    // Words without b: only 1 and 0 are reachable from a ↦ 1, b ↦ 0 in 𝒪_even.
    let no_b = RecognizedLanguage::from_names(fixtures::even(), &[('a', "1"), ('b', "0")], &["1"])
        .unwrap();
    show("no b over 𝒪_even", &no_b);

    let gap_free = RecognizedLanguage::from_names(
        fixtures::gap(),
        &[('a', "cci")],
        &["1", "cci", "coi", "oci", "ooi"],
    )
    .unwrap();
    show("gap-free words over 𝒪_gap", &gap_free);
}
