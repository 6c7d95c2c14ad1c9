//! Synthesizes expressions for the built-in recognizers in every class their
//! algebra grants, and checks each one on short finite words.

use oalg::corpus::registry;
use oalg::expr::{expr_class, FiniteMatcher};
use oalg::synth::{granted_classes, Synthesis};
use oalg::term::enumerate_finite_words;
use oalg::varieties::variety_membership;

fn main() {
    for id in ["lang.min", "lang.even", "lang.gap", "lang.pd"] {
        let lang = registry::load_language(id).unwrap();
        let granted = granted_classes(&variety_membership(&lang.algebra));
        if granted.is_empty() {
            println!("{id}: no class granted");
        }
        for class in granted {
            let s = Synthesis::run(&lang, class).unwrap();
            let m = FiniteMatcher::new(&s.expr);
            let agree = enumerate_finite_words(&lang.alphabet, 6)
                .all(|w| m.matches(&w) == lang.accepts_word(&w).unwrap());
            println!(
                "{id:<10} {class:<17} nodes {:>5}  in class: {}  agrees up to length 6: {agree}",
                s.expr.dag_size(),
                expr_class(&s.expr).contains(class),
            );
        }
    }
    let s = Synthesis::run(&registry::even_a(), oalg::expr::ExprClass::Marked).unwrap();
    println!(
        "\neven number of a (marked):\n{}",
        s.expr.to_shared_string()
    );
}
