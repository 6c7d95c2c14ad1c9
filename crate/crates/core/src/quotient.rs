//! Coarsest congruences saturating an accepting set, quotient algebras, and
//! the language classification built on them.

use std::collections::HashMap;

use crate::algebra::{members, singleton, Elem, OAlgebra, Subset};
use crate::error::{Error, Result};
use crate::term::RecognizedLanguage;
use crate::varieties::{variety_membership, VarietyVerdict};

/// A partition of the carrier, blocks numbered by least element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence {
    pub block: Vec<usize>,
    pub count: usize,
}

impl Congruence {
    /// Renumbers arbitrary labels so blocks are ordered by least element.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = HashMap::new();
        let block: Vec<usize> = labels
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Congruence {
            count: map.len(),
            block,
        }
    }

    pub fn identity(n: usize) -> Self {
        Congruence::from_labels(&(0..n).collect::<Vec<_>>())
    }

    /// Least element of each block.
    pub fn representatives(&self) -> Vec<Elem> {
        (0..self.count)
            .map(|b| self.block.iter().position(|&x| x == b).unwrap())
            .collect()
    }

    fn image(&self, set: Subset) -> Subset {
        members(set).fold(0, |acc, e| acc | singleton(self.block[e]))
    }

    /// True if every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Congruence) -> bool {
        let n = self.block.len();
        (0..n).all(|a| {
            (0..n).all(|b| self.block[a] != self.block[b] || other.block[a] == other.block[b])
        })
    }
}

/// Checks the congruence conditions directly: compatibility with the
/// product, ω, ω*, with sh on sets having the same block image, and
/// saturation of the accepting set.
pub fn is_congruence(lang: &RecognizedLanguage, c: &Congruence) -> bool {
    let alg = &lang.algebra;
    let n = alg.size();
    let b = &c.block;
    let acc = |a: Elem| lang.accepting & singleton(a) != 0;
    for x in 0..n {
        for y in 0..n {
            if b[x] != b[y] {
                continue;
            }
            if acc(x) != acc(y)
                || b[alg.omega(x)] != b[alg.omega(y)]
                || b[alg.omegastar(x)] != b[alg.omegastar(y)]
            {
                return false;
            }
            for z in 0..n {
                if b[alg.mul(x, z)] != b[alg.mul(y, z)] || b[alg.mul(z, x)] != b[alg.mul(z, y)] {
                    return false;
                }
            }
        }
    }
    let mut seen: Vec<Option<usize>> = vec![None; 1 << c.count];
    for set in 1..=alg.carrier() {
        let v = b[alg.shuffle(set)];
        let slot = &mut seen[c.image(set) as usize];
        match *slot {
            Some(w) if w != v => return false,
            _ => *slot = Some(v),
        }
    }
    true
}

/// Refines `{F, M∖F}` until every element's signature is stable.
///
/// The signature of `a` lists the blocks of `a`, of `a·c` and `c·a` for each
/// `c`, of `ω(a)` and `ω*(a)`, and of `sh(S ∪ {a})` for each `S ⊆ M`. Taking
/// `S ∋ b` covers absorbing a duplicate, so set-level compatibility follows.
pub fn coarsest_congruence(lang: &RecognizedLanguage) -> Congruence {
    let alg = &lang.algebra;
    let n = alg.size();
    let full = alg.carrier();
    let labels: Vec<usize> = (0..n)
        .map(|a| usize::from(lang.accepting & singleton(a) != 0))
        .collect();
    let mut cong = Congruence::from_labels(&labels);
    loop {
        let b = &cong.block;
        let sigs: Vec<Vec<usize>> = (0..n)
            .map(|a| {
                let mut s = Vec::with_capacity(3 + 2 * n + (1 << n));
                s.push(b[a]);
                s.extend((0..n).map(|c| b[alg.mul(a, c)]));
                s.extend((0..n).map(|c| b[alg.mul(c, a)]));
                s.push(b[alg.omega(a)]);
                s.push(b[alg.omegastar(a)]);
                s.extend((0..=full).map(|set| b[alg.shuffle(set | singleton(a))]));
                s
            })
            .collect();
        let mut ids: HashMap<&Vec<usize>, usize> = HashMap::new();
        let labels: Vec<usize> = sigs
            .iter()
            .map(|s| {
                let next = ids.len();
                *ids.entry(s).or_insert(next)
            })
            .collect();
        let next = Congruence::from_labels(&labels);
        if next.count == cong.count {
            return cong;
        }
        cong = next;
    }
}

/// A quotient algebra with its projection and the induced recognizer.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: OAlgebra,
    /// Block of each original element.
    pub projection: Vec<Elem>,
    pub language: RecognizedLanguage,
}

/// Builds the quotient tables through block representatives, checking that
/// every representative choice agrees.
pub fn quotient(lang: &RecognizedLanguage, c: &Congruence) -> Result<Quotient> {
    let alg = &lang.algebra;
    let n = alg.size();
    let k = c.count;
    let b = &c.block;
    let reps = c.representatives();
    let ill = |what: String| Err(Error::IllDefined(what));

    let mut product = vec![vec![0; k]; k];
    for x in 0..n {
        for y in 0..n {
            let v = b[alg.mul(x, y)];
            if v != b[alg.mul(reps[b[x]], reps[b[y]])] {
                return ill(format!(
                    "product of {} and {}",
                    alg.elem_name(x),
                    alg.elem_name(y)
                ));
            }
            product[b[x]][b[y]] = v;
        }
    }
    let mut omega = vec![0; k];
    let mut omegastar = vec![0; k];
    for x in 0..n {
        if b[alg.omega(x)] != b[alg.omega(reps[b[x]])]
            || b[alg.omegastar(x)] != b[alg.omegastar(reps[b[x]])]
        {
            return ill(format!("omega of {}", alg.elem_name(x)));
        }
        omega[b[x]] = b[alg.omega(x)];
        omegastar[b[x]] = b[alg.omegastar(x)];
    }
    let mut shuffle: Vec<Option<Elem>> = vec![None; 1 << k];
    for set in 1..=alg.carrier() {
        let v = b[alg.shuffle(set)];
        let slot = &mut shuffle[c.image(set) as usize];
        match *slot {
            Some(w) if w != v => return ill(format!("shuffle of {}", alg.format_set(set))),
            _ => *slot = Some(v),
        }
    }
    let unit = b[alg.unit()];
    let shuffle: Vec<Elem> = shuffle.into_iter().map(|v| v.unwrap_or(unit)).collect();
    let names = reps.iter().map(|&r| alg.elem_name(r).to_string()).collect();
    let qalg = OAlgebra::new(
        format!("{}/~", alg.name()),
        names,
        unit,
        product,
        omega,
        omegastar,
        shuffle,
    )?;
    let h: Vec<Elem> = lang.h.iter().map(|&e| b[e]).collect();
    let accepting = c.image(lang.accepting);
    let language = RecognizedLanguage::new(qalg.clone(), &lang.alphabet, &h, accepting)?;
    Ok(Quotient {
        algebra: qalg,
        projection: b.clone(),
        language,
    })
}

/// Smallest subset containing the unit and the letter images that is closed
/// under every operation.
pub fn generated_set(lang: &RecognizedLanguage) -> Subset {
    let alg = &lang.algebra;
    let mut set = singleton(alg.unit()) | lang.h.iter().fold(0, |s, &e| s | singleton(e));
    loop {
        let mut next = set;
        for a in members(set) {
            next |= singleton(alg.omega(a)) | singleton(alg.omegastar(a));
            for b in members(set) {
                next |= singleton(alg.mul(a, b));
            }
        }
        for s in crate::algebra::subsets_of(set).skip(1) {
            next |= singleton(alg.shuffle(s));
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

/// The subalgebra on a closed subset, elements kept in index order, with
/// the embedding into the original carrier.
pub fn subalgebra(alg: &OAlgebra, set: Subset) -> Result<(OAlgebra, Vec<Elem>)> {
    let emb: Vec<Elem> = members(set).collect();
    let pos = |a: Elem| -> Result<Elem> {
        emb.binary_search(&a).map_err(|_| {
            Error::Precondition(format!("subset is not closed at {}", alg.elem_name(a)))
        })
    };
    let k = emb.len();
    let product = emb
        .iter()
        .map(|&x| {
            emb.iter()
                .map(|&y| pos(alg.mul(x, y)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let omega = emb
        .iter()
        .map(|&x| pos(alg.omega(x)))
        .collect::<Result<Vec<_>>>()?;
    let omegastar = emb
        .iter()
        .map(|&x| pos(alg.omegastar(x)))
        .collect::<Result<Vec<_>>>()?;
    let unit = pos(alg.unit())?;
    let mut shuffle = vec![unit; 1 << k];
    for s in 1..(1u32 << k) {
        let orig = members(s).fold(0, |acc, i| acc | singleton(emb[i]));
        shuffle[s as usize] = pos(alg.shuffle(orig))?;
    }
    let names = emb.iter().map(|&e| alg.elem_name(e).to_string()).collect();
    let sub = OAlgebra::new(alg.name(), names, unit, product, omega, omegastar, shuffle)?;
    Ok((sub, emb))
}

/// Restricts a recognizer to the subalgebra generated by its letters.
pub fn restrict_to_generated(lang: &RecognizedLanguage) -> Result<RecognizedLanguage> {
    let set = generated_set(lang);
    let (sub, emb) = subalgebra(&lang.algebra, set)?;
    let pos = |a: Elem| emb.binary_search(&a).expect("letter image is generated");
    let h: Vec<Elem> = lang.h.iter().map(|&e| pos(e)).collect();
    let accepting = members(lang.accepting & set).fold(0, |s, e| s | singleton(pos(e)));
    RecognizedLanguage::new(sub, &lang.alphabet, &h, accepting)
}

/// The reachable part of the recognizer divided by its coarsest congruence.
pub fn syntactic(lang: &RecognizedLanguage) -> Result<Quotient> {
    let reachable = restrict_to_generated(lang)?;
    let c = coarsest_congruence(&reachable);
    quotient(&reachable, &c)
}

/// Decides the five varieties for the language of a recognizer.
pub fn classify_language(lang: &RecognizedLanguage) -> Result<VarietyVerdict> {
    Ok(variety_membership(&syntactic(lang)?.algebra))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixtures;

    /// Every partition of `0..n`, as label vectors.
    fn partitions(n: usize) -> Vec<Vec<usize>> {
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

    fn assert_coarsest(lang: &RecognizedLanguage) {
        let c = coarsest_congruence(lang);
        assert!(is_congruence(lang, &c));
        for labels in partitions(lang.algebra.size()) {
            let p = Congruence::from_labels(&labels);
            if is_congruence(lang, &p) {
                assert!(
                    p.refines(&c),
                    "{labels:?} is compatible but not below {c:?}"
                );
            }
        }
    }

    /// `min` with the sink `oi` split into two copies.
    fn min_with_duplicate() -> RecognizedLanguage {
        let (one, ci, oi, oj) = (0, 1, 2, 3);
        let alg = OAlgebra::from_fn(
            "min2",
            &["1", "ci", "oi", "oj"],
            one,
            vec![vec![one, ci, oi, oj], vec![ci; 4], vec![oi; 4], vec![oj; 4]],
            vec![one, ci, oi, oj],
            vec![one, oi, oi, oi],
            |s| if s == singleton(one) { one } else { oi },
        )
        .unwrap();
        assert_eq!(alg.validate(), vec![]);
        RecognizedLanguage::new(alg, &['a', 'b'], &[ci, ci], singleton(ci)).unwrap()
    }

    #[test]
    fn full_accepting_set_gives_one_block() {
        let alg = fixtures::gap();
        let lang = RecognizedLanguage::new(alg.clone(), &['a'], &[1], alg.carrier()).unwrap();
        let c = coarsest_congruence(&lang);
        assert_eq!(c.count, 1);
        let q = quotient(&lang, &c).unwrap();
        assert_eq!(q.algebra.size(), 1);
    }

    #[test]
    fn duplicate_sink_collapses_to_min() {
        let lang = min_with_duplicate();
        let c = coarsest_congruence(&lang);
        assert_eq!(c.count, 3);
        assert_coarsest(&lang);
        let q = quotient(&lang, &c).unwrap();
        assert!(q.algebra.is_valid());
        let min = fixtures::min();
        assert_eq!(q.algebra.clone().with_name("min"), min);
    }

    #[test]
    fn even_is_already_syntactic() {
        let alg = fixtures::even();
        let lang =
            RecognizedLanguage::from_names(alg, &[('a', "s"), ('b', "1")], &["1", "s2"]).unwrap();
        let c = coarsest_congruence(&lang);
        assert_eq!(c, Congruence::identity(4));
        assert_coarsest(&lang);
        let q = quotient(&lang, &Congruence::identity(4)).unwrap();
        assert_eq!(q.algebra.clone().with_name("even"), lang.algebra);
    }

    #[test]
    fn bad_partition_is_ill_defined() {
        let lang = min_with_duplicate();
        // Merging 1 with ci breaks the product: 1·oi = oi but ci·oi = ci.
        let c = Congruence::from_labels(&[0, 0, 1, 2]);
        assert!(!is_congruence(&lang, &c));
        assert!(matches!(quotient(&lang, &c), Err(Error::IllDefined(_))));
    }

    #[test]
    fn classification_examples() {
        let min =
            RecognizedLanguage::from_names(fixtures::min(), &[('a', "ci"), ('b', "ci")], &["ci"])
                .unwrap();
        assert!(classify_language(&min).unwrap().fo);
        let even = RecognizedLanguage::from_names(
            fixtures::even(),
            &[('a', "s"), ('b', "1")],
            &["1", "s2"],
        )
        .unwrap();
        let v = classify_language(&even).unwrap();
        assert!(!v.fo && v.fo_finite);
        let all = min.with_accepting(min.algebra.carrier());
        assert_eq!(classify_language(&all).unwrap().marks(), "✓✓✓✓✓");
    }

    #[test]
    fn generated_subalgebra_of_pd_letter() {
        let lang = RecognizedLanguage::from_names(fixtures::pd(), &[('a', "g")], &["g"]).unwrap();
        let set = generated_set(&lang);
        let alg = &lang.algebra;
        assert_eq!(
            set,
            singleton(alg.unit()) | singleton(alg.elem("g").unwrap())
        );
        let r = restrict_to_generated(&lang).unwrap();
        assert!(r.algebra.is_valid());
        assert_eq!(r.algebra.size(), 2);
    }
}
