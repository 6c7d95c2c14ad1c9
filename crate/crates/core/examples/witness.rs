//! Evaluates term words in recognizers and locates the factor responsible for
//! a value falling below a given element.

use oalg::corpus::registry;
use oalg::term::{eval_term, find_witness, TermWord};

fn main() {
    let lang = registry::has_gap();
    let alg = &lang.algebra;
    for text in [
        "(cat a b)",
        "(omega a)",
        "(omegastar a)",
        "(cat (omega a) (omegastar a))",
        "(shuffle a b)",
    ] {
        let t = TermWord::parse(text).unwrap();
        let v = eval_term(&lang, &t).unwrap();
        println!(
            "{text:<32} = {:<4} accepted: {}",
            alg.elem_name(v),
            lang.accepts_term(&t).unwrap()
        );
    }

    println!();
    let t = TermWord::parse("(cat a (omega (cat b a)) (omegastar b))").unwrap();
    let below = alg.elem("coi").unwrap();
    let w = find_witness(&lang, &t, below).unwrap();
    println!(
        "term {t} has value {}",
        alg.elem_name(eval_term(&lang, &t).unwrap())
    );
    println!(
        "{} (replays: {})",
        w.describe(alg),
        w.confirm(&lang, &t, below)
    );
}
