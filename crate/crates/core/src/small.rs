//! Exhaustive enumeration of small o-algebras.
//!
//! The unit is element `0`. Entries involving the unit that the axioms force
//! (`ω(1) = ω*(1) = 1`, `sh({1}) = 1` and `sh(P ∪ {1}) = sh(P)`) are fixed
//! rather than enumerated.

use crate::algebra::{singleton, Elem, OAlgebra, Subset};

/// Associative product tables on `0..n` with unit `0`.
pub fn monoid_tables(n: usize) -> Vec<Vec<Vec<Elem>>> {
    let free: Vec<(usize, usize)> = (1..n).flat_map(|a| (1..n).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    let mut table: Vec<Vec<Elem>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    if a == 0 {
                        b
                    } else if b == 0 {
                        a
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    let total = n.pow(free.len() as u32);
    for code in 0..total {
        let mut c = code;
        for &(a, b) in &free {
            table[a][b] = c % n;
            c /= n;
        }
        let assoc = (0..n).all(|x| {
            (0..n).all(|y| (0..n).all(|z| table[table[x][y]][z] == table[x][table[y][z]]))
        });
        if assoc {
            out.push(table.clone());
        }
    }
    out
}

fn names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i == 0 {
                "1".to_string()
            } else {
                format!("m{i}")
            }
        })
        .collect()
}

/// Every candidate algebra of size `n`, valid or not, in a fixed order.
pub fn candidates(n: usize) -> impl Iterator<Item = OAlgebra> {
    assert!((1..=4).contains(&n), "enumeration is limited to n ≤ 4");
    let tables = monoid_tables(n);
    let non_unit_sets: Vec<Subset> = (1u32..(1 << n)).filter(|s| s & 1 == 0).collect();
    let free_omega = n.pow((n - 1) as u32);
    let free_shuffle = n.pow(non_unit_sets.len() as u32);
    let per_table = free_omega * free_omega * free_shuffle;
    let count = tables.len() * per_table;
    (0..count).map(move |code| {
        let table = &tables[code / per_table];
        let mut c = code % per_table;
        let mut digit = || {
            let d = c % n;
            c /= n;
            d
        };
        let mut omega = vec![0; n];
        let mut omegastar = vec![0; n];
        for a in 1..n {
            omega[a] = digit();
        }
        for a in 1..n {
            omegastar[a] = digit();
        }
        let mut shuffle = vec![0; 1 << n];
        for &s in &non_unit_sets {
            shuffle[s as usize] = digit();
        }
        for s in 1u32..(1 << n) {
            if s & 1 != 0 {
                shuffle[s as usize] = if s == singleton(0) {
                    0
                } else {
                    shuffle[(s & !1) as usize]
                };
            }
        }
        OAlgebra::new(
            format!("small{n}#{code}"),
            names(n),
            0,
            table.clone(),
            omega,
            omegastar,
            shuffle,
        )
        .expect("entries are in range")
    })
}

/// Every valid algebra of size `n` with unit `0`.
pub fn valid_algebras(n: usize) -> impl Iterator<Item = OAlgebra> {
    candidates(n).filter(OAlgebra::is_valid)
}
