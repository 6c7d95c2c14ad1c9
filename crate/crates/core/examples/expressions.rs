//! Parses and classifies the expression corpus, and checks a few finite words
//! against each expression.

use oalg::corpus::exprs;
use oalg::expr::{expr_class, finite_membership, Expr};

fn main() {
    for item in exprs::items() {
        let c = expr_class(&item.expr);
        let strongest: Vec<&str> = c.strongest().iter().map(|c| c.key()).collect();
        let words: Vec<&str> = ["", "a", "b", "ab", "ba", "aab"]
            .into_iter()
            .filter(|w| finite_membership(&item.expr, w))
            .collect();
        println!(
            "{:>2} {:<20} {:<18} finite members among short words: {:?}",
            item.item,
            item.name,
            strongest.join(","),
            words
        );
    }

    let e = Expr::parse("$x = !(!0 b !0); $x a $x").unwrap();
    println!("\nparsed {e}");
    println!(
        "shared form:\n{}",
        Expr::union(e.clone(), e).to_shared_string()
    );
}
