//! Prints the variety verdicts of the built-in algebras with the reason for
//! every negative verdict.

use oalg::corpus::fixtures;
use oalg::varieties::{variety_membership, Variety};

fn main() {
    let header: Vec<&str> = Variety::ALL.iter().map(|v| v.key()).collect();
    println!("{:<10} {}", "", header.join(" "));
    for alg in fixtures::all() {
        let v = variety_membership(&alg);
        let cells: Vec<String> = Variety::ALL
            .iter()
            .map(|&k| {
                format!(
                    "{:^w$}",
                    if v.get(k) { "✓" } else { "✗" },
                    w = k.key().len()
                )
            })
            .collect();
        println!("{:<10} {}", alg.name(), cells.join(" "));
    }
    println!();
    for alg in [fixtures::gap(), fixtures::even(), fixtures::pd()] {
        println!("== {}", alg.name());
        print!("{}", variety_membership(&alg));
    }
}
