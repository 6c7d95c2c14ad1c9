//! Validates the built-in algebras, then breaks one table cell and shows the
//! violations found, each replayed against the mutated tables.

use oalg::corpus::fixtures;

fn main() {
    for alg in fixtures::all() {
        let violations = alg.validate();
        println!(
            "{:<10} {} elements, {} violations",
            alg.name(),
            alg.size(),
            violations.len()
        );
    }

    let gap = fixtures::gap();
    let cci = gap.elem("cci").unwrap();
    let ooi = gap.elem("ooi").unwrap();
    let broken = gap.with_omega(cci, ooi).unwrap();
    let violations = broken.validate();
    println!(
        "\nafter setting ω(cci) = ooi: {} violations",
        violations.len()
    );
    for v in violations.iter().take(5) {
        println!(
            "  axiom {}: {} (replays: {})",
            v.axiom(),
            v.describe(&broken),
            v.replays(&broken)
        );
    }
}
