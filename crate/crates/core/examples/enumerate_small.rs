//! Enumerates every valid o-algebra on two and three elements and tallies
//! their variety verdicts and structure checks.

use std::collections::BTreeMap;

use oalg::green::structure_check;
use oalg::small::{candidates, valid_algebras};
use oalg::varieties::variety_membership;

fn main() {
    for n in 2..=3 {
        let total = candidates(n).count();
        let valid: Vec<_> = valid_algebras(n).collect();
        let mut tally: BTreeMap<String, usize> = BTreeMap::new();
        let mut structure_failures = 0;
        for alg in &valid {
            *tally.entry(variety_membership(alg).marks()).or_default() += 1;
            structure_failures += structure_check(alg).len();
        }
        println!(
            "n = {n}: {} valid of {total} candidates, {structure_failures} structure violations",
            valid.len()
        );
        for (marks, count) in tally {
            println!("  {marks}  {count}");
        }
    }
}
