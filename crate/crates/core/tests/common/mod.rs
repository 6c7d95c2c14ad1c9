//! Helpers shared by the integration tests. The oracles here are written
//! directly from the definitions and do not call the library routines they
//! are used to check.

#![allow(dead_code)]

use oalg::algebra::{members, singleton};
use oalg::term::{RecognizedLanguage, TermWord};
use oalg::{Elem, OAlgebra, Subset};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One letter per element (`a`, `b`, … in carrier order), each mapped to its
/// element, accepting `accepting`.
pub fn letter_language(alg: &OAlgebra, accepting: Subset) -> RecognizedLanguage {
    let letters: Vec<char> = (0..alg.size()).map(|i| (b'a' + i as u8) as char).collect();
    let h: Vec<Elem> = alg.elements().collect();
    RecognizedLanguage::new(alg.clone(), &letters, &h, accepting).expect("letter language")
}

/// A random term of depth at most `depth` over `alphabet`.
pub fn random_term(rng: &mut ChaCha8Rng, alphabet: &[char], depth: usize) -> TermWord {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        if rng.gen_bool(0.05) {
            return TermWord::Empty;
        }
        return TermWord::letter(alphabet[rng.gen_range(0..alphabet.len())]);
    }
    let kids = |rng: &mut ChaCha8Rng, k: usize| -> Vec<TermWord> {
        (0..k)
            .map(|_| random_term(rng, alphabet, depth - 1))
            .collect()
    };
    match rng.gen_range(0..4) {
        0 => {
            let k = rng.gen_range(2..=3);
            TermWord::cat(kids(rng, k))
        }
        1 => TermWord::omega(random_term(rng, alphabet, depth - 1)),
        2 => TermWord::omegastar(random_term(rng, alphabet, depth - 1)),
        _ => {
            let k = rng.gen_range(1..=3);
            TermWord::shuffle(kids(rng, k))
        }
    }
}

/// Direct evaluation of a term from the operation tables.
pub fn eval(lang: &RecognizedLanguage, t: &TermWord) -> Elem {
    let alg = &lang.algebra;
    match t {
        TermWord::Empty => alg.unit(),
        TermWord::Letter(c) => {
            let i = lang.alphabet.iter().position(|x| x == c).unwrap();
            lang.h[i]
        }
        TermWord::Concat(v) => v
            .iter()
            .fold(alg.unit(), |acc, x| alg.mul(acc, eval(lang, x))),
        TermWord::OmegaPow(u) => alg.omega(eval(lang, u)),
        TermWord::OmegaStarPow(u) => alg.omegastar(eval(lang, u)),
        TermWord::Shuffle(v) => alg.shuffle(v.iter().fold(0, |s, x| s | singleton(eval(lang, x)))),
    }
}

/// `{b | a ≤J b}`: elements `b` with `a = x·b·y` for some `x, y`.
pub fn upward(alg: &OAlgebra, a: Elem) -> Subset {
    alg.elements()
        .filter(|&b| {
            alg.elements()
                .any(|x| alg.elements().any(|y| alg.mul(alg.mul(x, b), y) == a))
        })
        .fold(0, |s, b| s | singleton(b))
}

/// Every partition of `0..n` as a label vector with labels in first-use order.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..=k {
            cur.push(l);
            go(i + 1, n, cur, k.max(l + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), 0, &mut out);
    out
}

/// Checks a partition against every operation: products, both powers,
/// shuffles of any two sets meeting the same blocks, and saturation of the
/// accepting set.
pub fn is_compatible(lang: &RecognizedLanguage, labels: &[usize]) -> bool {
    let alg = &lang.algebra;
    let n = alg.size();
    let same = |a: Elem, b: Elem| labels[a] == labels[b];
    let acc = |a: Elem| lang.accepting & singleton(a) != 0;
    for a in 0..n {
        for b in 0..n {
            if !same(a, b) {
                continue;
            }
            if acc(a) != acc(b)
                || !same(alg.omega(a), alg.omega(b))
                || !same(alg.omegastar(a), alg.omegastar(b))
            {
                return false;
            }
            for c in 0..n {
                if !same(alg.mul(a, c), alg.mul(b, c)) || !same(alg.mul(c, a), alg.mul(c, b)) {
                    return false;
                }
            }
        }
    }
    let blocks = |p: Subset| members(p).fold(0u64, |s, e| s | (1 << labels[e]));
    for p in 1u32..(1 << n) {
        for q in p + 1..(1 << n) {
            if blocks(p) == blocks(q) && !same(alg.shuffle(p), alg.shuffle(q)) {
                return false;
            }
        }
    }
    true
}

/// True iff every block of `fine` lies inside a block of `coarse`.
pub fn refines(fine: &[usize], coarse: &[usize]) -> bool {
    (0..fine.len()).all(|a| (0..fine.len()).all(|b| fine[a] != fine[b] || coarse[a] == coarse[b]))
}

/// The implication chain among the five verdicts, in the order
/// `fo, fo_finite, fo_cut, fo_finite_cut, fo_scattered`.
pub fn lattice_ok(v: [bool; 5]) -> bool {
    let imp = |p: bool, q: bool| !p || q;
    imp(v[0], v[1]) && imp(v[1], v[3]) && imp(v[0], v[2]) && imp(v[2], v[3]) && imp(v[3], v[4])
}
