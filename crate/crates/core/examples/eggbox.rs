//! Draws the J-classes of every built-in algebra as eggbox diagrams.

use oalg::corpus::fixtures;
use oalg::green::{render_eggbox, GreenData};

fn main() {
    for alg in fixtures::all() {
        println!("== {}", alg.name());
        let g = GreenData::new(&alg);
        for egg in g.jclasses() {
            print!("{}", render_eggbox(&alg, egg));
        }
        println!();
    }
}
