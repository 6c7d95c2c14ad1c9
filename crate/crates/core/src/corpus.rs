//! Named algebras, languages and expressions used by the examples, tests and
//! the command line tool.

pub mod fixtures {
    use crate::algebra::{singleton, OAlgebra, Subset};

    /// `{1, ci, oi}`: every nonempty word is sent to whether it has a first
    /// letter (`ci`) or not (`oi`).
    pub fn min() -> OAlgebra {
        let (one, ci, oi) = (0, 1, 2);
        OAlgebra::from_fn(
            "min",
            &["1", "ci", "oi"],
            one,
            vec![vec![one, ci, oi], vec![ci, ci, ci], vec![oi, oi, oi]],
            vec![one, ci, oi],
            vec![one, oi, oi],
            |set| if set == singleton(one) { one } else { oi },
        )
        .expect("min fixture")
    }

    /// `{1, cci, coi, oci, ooi, 0}`: tracks whether a word has a first and a
    /// last letter, and sends words with a gap to `0`.
    pub fn gap() -> OAlgebra {
        let (one, cci, coi, oci, ooi, zero) = (0, 1, 2, 3, 4, 5);
        let row = |r: [usize; 4]| vec![r[0], r[1], r[2], r[3]];
        let mut product = vec![vec![one, cci, coi, oci, ooi, zero]];
        for (x, r) in [
            (cci, row([cci, coi, cci, coi])),
            (coi, row([cci, coi, zero, zero])),
            (oci, row([oci, ooi, oci, ooi])),
            (ooi, row([oci, ooi, zero, zero])),
        ] {
            let mut full = vec![x];
            full.extend(r);
            full.push(zero);
            product.push(full);
        }
        product.push(vec![zero; 6]);
        OAlgebra::from_fn(
            "gap",
            &["1", "cci", "coi", "oci", "ooi", "0"],
            one,
            product,
            vec![one, coi, coi, ooi, zero, zero],
            vec![one, oci, ooi, oci, zero, zero],
            |set| if set == singleton(one) { one } else { zero },
        )
        .expect("gap fixture")
    }

    /// `{1, s, g, 0}`: `s` is a letter, `g` a longer word of letters that
    /// avoids the letter of `s` in shuffles.
    pub fn pd() -> OAlgebra {
        let (one, s, g, zero) = (0, 1, 2, 3);
        OAlgebra::from_fn(
            "pd",
            &["1", "s", "g", "0"],
            one,
            vec![
                vec![one, s, g, zero],
                vec![s, g, g, zero],
                vec![g, g, g, zero],
                vec![zero; 4],
            ],
            vec![one, g, g, zero],
            vec![one, g, g, zero],
            |set: Subset| {
                if set == singleton(one) {
                    one
                } else if set & (singleton(s) | singleton(zero)) != 0 {
                    zero
                } else {
                    g
                }
            },
        )
        .expect("pd fixture")
    }

    /// `{1, s, s2, 0}`: parity of a finite number of letters; every infinite
    /// word goes to `0`.
    pub fn even() -> OAlgebra {
        let (one, s, s2, zero) = (0, 1, 2, 3);
        OAlgebra::from_fn(
            "even",
            &["1", "s", "s2", "0"],
            one,
            vec![
                vec![one, s, s2, zero],
                vec![s, s2, s, zero],
                vec![s2, s, s2, zero],
                vec![zero; 4],
            ],
            vec![one, zero, zero, zero],
            vec![one, zero, zero, zero],
            |set| if set == singleton(one) { one } else { zero },
        )
        .expect("even fixture")
    }

    /// `{1, z}` with `z` absorbing.
    pub fn absorbing() -> OAlgebra {
        let (one, z) = (0, 1);
        OAlgebra::from_fn(
            "absorbing",
            &["1", "z"],
            one,
            vec![vec![one, z], vec![z, z]],
            vec![one, z],
            vec![one, z],
            |set| if set == singleton(one) { one } else { z },
        )
        .expect("absorbing fixture")
    }

    /// The one-element algebra.
    pub fn trivial() -> OAlgebra {
        OAlgebra::from_fn("trivial", &["1"], 0, vec![vec![0]], vec![0], vec![0], |_| 0)
            .expect("trivial fixture")
    }

    /// The four reference algebras.
    pub fn all() -> Vec<OAlgebra> {
        vec![min(), gap(), pd(), even()]
    }
}

/// Example expressions over `{a, b}`.
pub mod exprs {
    use crate::expr::{Expr, ExprClass, Ops};

    pub const AB: [char; 2] = ['a', 'b'];

    fn ops() -> Ops {
        Ops::new(&AB)
    }

    fn l(c: char) -> Expr {
        Expr::letter(c)
    }

    fn all() -> Expr {
        Expr::all()
    }

    fn eps() -> Expr {
        ops().eps()
    }

    /// `Σ*σΣ*`.
    fn has(c: char) -> Expr {
        ops().contains_letter(c)
    }

    /// `ΣΣ*`, as the plain union `aΣ* + bΣ*`.
    fn first_plain() -> Expr {
        Expr::union_all(AB.map(|c| Expr::cat(l(c), all())))
    }

    /// `Σ*Σ`, as the plain union `Σ*a + Σ*b`.
    fn last_plain() -> Expr {
        Expr::union_all(AB.map(|c| Expr::cat(all(), l(c))))
    }

    pub fn sigma_plus() -> Expr {
        Expr::inter(all(), Expr::neg(eps()))
    }

    pub fn some_letter() -> Expr {
        Expr::union_all(AB.map(has))
    }

    /// The domain has a minimum: `εσΣ*` over the letters.
    pub fn f_min() -> Expr {
        Expr::union_all(AB.map(|c| Expr::cat_all([eps(), l(c), all()])))
    }

    /// The domain has a maximum.
    pub fn f_max() -> Expr {
        Expr::union_all(AB.map(|c| Expr::cat_all([all(), l(c), eps()])))
    }

    /// Two consecutive letters somewhere.
    fn consecutive() -> Expr {
        Expr::union_all(
            AB.iter()
                .flat_map(|&s| AB.map(move |t| Expr::cat_all([all(), l(s), eps(), l(t), all()]))),
        )
    }

    /// The domain is dense.
    pub fn dense() -> Expr {
        Expr::neg(Expr::union(consecutive(), eps()))
    }

    pub fn f_exist_ab() -> Expr {
        Expr::cat_all([all(), l('a'), eps(), l('b'), all()])
    }

    pub fn f_no_ab() -> Expr {
        Expr::neg(f_exist_ab())
    }

    /// Occurrences of `ab` arbitrarily close to the end but no last one.
    pub fn ab_cofinal() -> Expr {
        let last_ab = Expr::cat_all([all(), l('a'), eps(), l('b'), f_no_ab()]);
        Expr::inter(Expr::neg(last_ab), f_exist_ab())
    }

    /// The domain is finite: `(Σ)*` in marked form.
    pub fn finite_marked() -> Expr {
        ops().prefixed_star(eps(), &AB.map(|c| (c, eps())))
    }

    /// The domain is finite of even size: `(ΣΣ)*` in marked form.
    pub fn even_size_marked() -> Expr {
        let one = Expr::union_all(AB.map(|c| ops().single(c)));
        ops().prefixed_star(eps(), &AB.map(|c| (c, one.clone())))
    }

    pub fn f_well_founded() -> Expr {
        Expr::neg(Expr::cat(
            all(),
            Expr::neg(Expr::union(first_plain(), eps())),
        ))
    }

    pub fn f_reverse_well_founded() -> Expr {
        Expr::neg(Expr::cat(
            Expr::neg(Expr::union(last_plain(), eps())),
            all(),
        ))
    }

    pub fn finite_power_free() -> Expr {
        Expr::inter(f_well_founded(), f_reverse_well_founded())
    }

    /// Words without a last letter and nonempty.
    fn no_max() -> Expr {
        Expr::neg(Expr::union(last_plain(), eps()))
    }

    /// Words without a first letter and nonempty.
    fn no_min() -> Expr {
        Expr::neg(Expr::union(first_plain(), eps()))
    }

    /// There is a gap.
    pub fn f_gap() -> Expr {
        Expr::cat(no_max(), no_min())
    }

    pub fn f_no_gap() -> Expr {
        Expr::neg(f_gap())
    }

    /// Exactly one gap.
    pub fn f_one_gap() -> Expr {
        Expr::cat(
            Expr::inter(f_no_gap(), no_max()),
            Expr::inter(f_no_gap(), no_min()),
        )
    }

    /// Exactly one gap and a minimum.
    pub fn f_min_one_gap() -> Expr {
        Expr::inter(f_one_gap(), f_min())
    }

    /// An ω-sequence of gaps.
    pub fn omega_gaps() -> Expr {
        Expr::cat(
            Expr::inter(Expr::neg(Expr::cat(all(), f_one_gap())), f_gap()),
            all(),
        )
    }

    /// An ω*-sequence of gaps.
    pub fn omegastar_gaps() -> Expr {
        Expr::cat(
            all(),
            Expr::inter(Expr::neg(Expr::cat(f_one_gap(), all())), f_gap()),
        )
    }

    /// At most finitely many gaps.
    pub fn finitely_many_gaps() -> Expr {
        Expr::inter(Expr::neg(omega_gaps()), Expr::neg(omegastar_gaps()))
    }

    /// A nonzero even number of gaps.
    pub fn even_gaps() -> Expr {
        Expr::cat_all([
            f_one_gap(),
            Expr::star(Expr::cat(f_min_one_gap(), f_min_one_gap())),
            f_min_one_gap(),
        ])
    }

    /// The domain is scattered.
    pub fn scatter_all() -> Expr {
        Expr::scatter(Expr::union(l('a'), l('b')))
    }

    /// The occurrences of `a` are scattered.
    pub fn scatter_a() -> Expr {
        let not_a = Expr::star(l('b'));
        Expr::scatter(Expr::cat_all([not_a.clone(), l('a'), not_a]))
    }

    /// No occurrence of `b`.
    pub fn f_nob() -> Expr {
        Expr::neg(has('b'))
    }

    /// Dense words over `a`.
    pub fn f_dense_a() -> Expr {
        let aa = Expr::cat_all([all(), l('a'), eps(), l('a'), all()]);
        Expr::inter_all([Expr::neg(aa), f_nob(), has('a')])
    }

    /// An odd number of `b`s separated by dense words over `a`.
    pub fn f_oddb_dense_a() -> Expr {
        let d = f_dense_a();
        let body = Expr::cat_all([l('b'), d.clone(), l('b'), d]);
        Expr::cat_all([eps(), Expr::star(body), l('b'), eps()])
    }

    /// The occurrences of `b` are scattered.
    pub fn scatter_b() -> Expr {
        Expr::scatter(Expr::cat_all([f_nob(), l('b'), f_nob()]))
    }

    /// A finite, even and nonzero number of `a`s.
    pub fn even_a() -> Expr {
        let no_a = Expr::neg(has('a'));
        let pair = Expr::cat_all([l('a'), no_a.clone(), l('a'), no_a.clone()]);
        Expr::cat_all([
            no_a.clone(),
            l('a'),
            no_a.clone(),
            l('a'),
            no_a,
            Expr::star(pair),
        ])
    }

    /// One example expression with the class it is stated to have.
    #[derive(Clone, Debug)]
    pub struct CorpusItem {
        /// Position in the example list, 1 to 14.
        pub item: u8,
        pub name: &'static str,
        pub expr: Expr,
        pub class: ExprClass,
    }

    /// The fourteen example items, several expressions per item where the
    /// item names more than one language.
    pub fn items() -> Vec<CorpusItem> {
        use ExprClass::*;
        let it = |item, name, expr, class| CorpusItem {
            item,
            name,
            expr,
            class,
        };
        vec![
            it(1, "all", all(), MarkedStarFree),
            it(1, "no_a", Expr::neg(has('a')), MarkedStarFree),
            it(1, "epsilon", eps(), MarkedStarFree),
            it(1, "sigma_plus", sigma_plus(), MarkedStarFree),
            it(2, "some_letter", some_letter(), MarkedStarFree),
            it(3, "fMin", f_min(), MarkedStarFree),
            it(3, "fMax", f_max(), MarkedStarFree),
            it(4, "dense", dense(), MarkedStarFree),
            it(5, "fexistab", f_exist_ab(), MarkedStarFree),
            it(5, "fnoab", f_no_ab(), MarkedStarFree),
            it(6, "ab_cofinal", ab_cofinal(), MarkedStarFree),
            it(7, "finite", finite_marked(), Marked),
            it(7, "even_size", even_size_marked(), Marked),
            it(8, "well_founded", f_well_founded(), PowerFree),
            it(
                8,
                "reverse_well_founded",
                f_reverse_well_founded(),
                PowerFree,
            ),
            it(9, "finite", finite_power_free(), PowerFree),
            it(10, "fGap", f_gap(), PowerFree),
            it(10, "fnogap", f_no_gap(), PowerFree),
            it(10, "fonegap", f_one_gap(), PowerFree),
            it(10, "fminonegap", f_min_one_gap(), PowerFree),
            it(11, "omega_gaps", omega_gaps(), PowerFree),
            it(11, "omegastar_gaps", omegastar_gaps(), PowerFree),
            it(12, "finitely_many_gaps", finitely_many_gaps(), PowerFree),
            it(13, "evenGaps", even_gaps(), ScatterFree),
            it(14, "scatterAll", scatter_all(), Scatter),
            it(14, "scatterA", scatter_a(), Scatter),
        ]
    }
}

/// Named fixtures reachable by id.
pub mod registry {
    use super::{exprs, fixtures};
    use crate::algebra::OAlgebra;
    use crate::error::{Error, Result};
    use crate::expr::{Expr, ExprClass};
    use crate::term::RecognizedLanguage;

    #[derive(Clone, Debug)]
    pub enum Fixture {
        Algebra(OAlgebra),
        Language(RecognizedLanguage),
        Expr {
            expr: Expr,
            class: ExprClass,
        },
        Pair {
            expr: Expr,
            language: RecognizedLanguage,
        },
    }

    pub const IDS: [&str; 27] = [
        "algebra.min",
        "algebra.gap",
        "algebra.pd",
        "algebra.even",
        "lang.min",
        "lang.gap",
        "lang.pd",
        "lang.even",
        "expr.fNob",
        "expr.fDensea",
        "expr.fOddbDensea",
        "expr.fWellFounded",
        "expr.fMin",
        "expr.fMax",
        "expr.fexistab",
        "expr.fGap",
        "expr.fonegap",
        "expr.evenGaps",
        "expr.scatterAll",
        "expr.scatterA",
        "expr.scatterB",
        "expr.evenA",
        "expr.finite",
        "expr.dense",
        "pair.firstLetter",
        "pair.evenA",
        "pair.noB",
    ];

    /// `(𝒪_min, a,b ↦ ci, {ci})`: words with a first letter.
    pub fn first_letter() -> RecognizedLanguage {
        RecognizedLanguage::from_names(fixtures::min(), &[('a', "ci"), ('b', "ci")], &["ci"])
            .expect("first letter recognizer")
    }

    /// `(𝒪_gap, a,b ↦ cci, {0})`: words with a gap.
    pub fn has_gap() -> RecognizedLanguage {
        RecognizedLanguage::from_names(fixtures::gap(), &[('a', "cci"), ('b', "cci")], &["0"])
            .expect("gap recognizer")
    }

    /// `(𝒪_pd, a ↦ s, b ↦ g, {0})`.
    pub fn pd_language() -> RecognizedLanguage {
        RecognizedLanguage::from_names(fixtures::pd(), &[('a', "s"), ('b', "g")], &["0"])
            .expect("pd recognizer")
    }

    /// `(𝒪_even, a ↦ s, b ↦ 1, {s2})`: a finite, even, nonzero number of `a`s.
    pub fn even_a() -> RecognizedLanguage {
        RecognizedLanguage::from_names(fixtures::even(), &[('a', "s"), ('b', "1")], &["s2"])
            .expect("even recognizer")
    }

    /// `({1, z}, a ↦ 1, b ↦ z, {1})`: no occurrence of `b`.
    pub fn no_b() -> RecognizedLanguage {
        RecognizedLanguage::from_names(fixtures::absorbing(), &[('a', "1"), ('b', "z")], &["1"])
            .expect("no-b recognizer")
    }

    pub fn load_fixture(id: &str) -> Result<Fixture> {
        use ExprClass::*;
        let e = |expr, class| Fixture::Expr { expr, class };
        Ok(match id {
            "algebra.min" => Fixture::Algebra(fixtures::min()),
            "algebra.gap" => Fixture::Algebra(fixtures::gap()),
            "algebra.pd" => Fixture::Algebra(fixtures::pd()),
            "algebra.even" => Fixture::Algebra(fixtures::even()),
            "lang.min" => Fixture::Language(first_letter()),
            "lang.gap" => Fixture::Language(has_gap()),
            "lang.pd" => Fixture::Language(pd_language()),
            "lang.even" => Fixture::Language(even_a()),
            "expr.fNob" => e(exprs::f_nob(), MarkedStarFree),
            "expr.fDensea" => e(exprs::f_dense_a(), MarkedStarFree),
            "expr.fOddbDensea" => e(exprs::f_oddb_dense_a(), Marked),
            "expr.fWellFounded" => e(exprs::f_well_founded(), PowerFree),
            "expr.fMin" => e(exprs::f_min(), MarkedStarFree),
            "expr.fMax" => e(exprs::f_max(), MarkedStarFree),
            "expr.fexistab" => e(exprs::f_exist_ab(), MarkedStarFree),
            "expr.fGap" => e(exprs::f_gap(), PowerFree),
            "expr.fonegap" => e(exprs::f_one_gap(), PowerFree),
            "expr.evenGaps" => e(exprs::even_gaps(), ScatterFree),
            "expr.scatterAll" => e(exprs::scatter_all(), Scatter),
            "expr.scatterA" => e(exprs::scatter_a(), Scatter),
            "expr.scatterB" => e(exprs::scatter_b(), Scatter),
            "expr.evenA" => e(exprs::even_a(), Marked),
            "expr.finite" => e(exprs::finite_marked(), Marked),
            "expr.dense" => e(exprs::dense(), MarkedStarFree),
            "pair.firstLetter" => Fixture::Pair {
                expr: exprs::f_min(),
                language: first_letter(),
            },
            "pair.evenA" => Fixture::Pair {
                expr: exprs::even_a(),
                language: even_a(),
            },
            "pair.noB" => Fixture::Pair {
                expr: exprs::f_nob(),
                language: no_b(),
            },
            _ => return Err(Error::UnknownFixture(id.to_string())),
        })
    }

    /// The algebra behind an algebra, language or pair fixture.
    pub fn load_algebra(id: &str) -> Result<OAlgebra> {
        match load_fixture(id)? {
            Fixture::Algebra(a) => Ok(a),
            Fixture::Language(l) | Fixture::Pair { language: l, .. } => Ok(l.algebra),
            Fixture::Expr { .. } => Err(Error::Precondition(format!("{id} is an expression"))),
        }
    }

    pub fn load_language(id: &str) -> Result<RecognizedLanguage> {
        match load_fixture(id)? {
            Fixture::Language(l) | Fixture::Pair { language: l, .. } => Ok(l),
            _ => Err(Error::Precondition(format!("{id} is not a language"))),
        }
    }

    pub fn load_expr(id: &str) -> Result<Expr> {
        match load_fixture(id)? {
            Fixture::Expr { expr, .. } | Fixture::Pair { expr, .. } => Ok(expr),
            _ => Err(Error::Precondition(format!("{id} is not an expression"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::exprs;
    use super::registry::{self, Fixture};
    use crate::expr::{expr_class, FiniteMatcher};
    use crate::green::structure_check;
    use crate::term::enumerate_finite_words;

    #[test]
    fn items_have_their_stated_class() {
        for it in exprs::items() {
            let c = expr_class(&it.expr);
            assert!(c.contains(it.class), "item {} {}", it.item, it.name);
            for &s in it.class.stronger() {
                assert!(!c.contains(s), "item {} {} is also {s}", it.item, it.name);
            }
        }
    }

    #[test]
    fn every_id_loads() {
        for id in registry::IDS {
            let f = registry::load_fixture(id).unwrap();
            if let Fixture::Algebra(a) = &f {
                assert!(a.is_valid());
                assert!(structure_check(a).is_empty());
            }
            if let Fixture::Expr { expr, class } = &f {
                assert!(expr_class(expr).contains(*class), "{id}");
            }
        }
        assert!(registry::load_fixture("algebra.nope").is_err());
    }

    #[test]
    fn pairs_agree_on_short_words() {
        for id in ["pair.firstLetter", "pair.evenA", "pair.noB"] {
            let Fixture::Pair { expr, language } = registry::load_fixture(id).unwrap() else {
                panic!("{id}")
            };
            let m = FiniteMatcher::new(&expr);
            for w in enumerate_finite_words(&language.alphabet, 6) {
                assert_eq!(
                    m.matches(&w),
                    language.accepts_word(&w).unwrap(),
                    "{id} {w:?}"
                );
            }
        }
    }

    #[test]
    fn finite_semantics_of_examples() {
        let cases = [
            (exprs::f_dense_a(), "a", true),
            (exprs::f_dense_a(), "aa", false),
            (exprs::f_gap(), "ab", false),
            (exprs::even_size_marked(), "abab", true),
            (exprs::even_size_marked(), "aba", false),
            (exprs::f_oddb_dense_a(), "bab", false),
            (exprs::f_oddb_dense_a(), "b", true),
            (exprs::f_oddb_dense_a(), "babab", true),
            (exprs::f_well_founded(), "abba", true),
            (exprs::ab_cofinal(), "ab", false),
            (exprs::dense(), "", false),
            (exprs::dense(), "a", true),
            (exprs::dense(), "ab", false),
        ];
        for (e, w, expect) in cases {
            assert_eq!(
                crate::expr::finite_membership(&e, w),
                expect,
                "{e} on {w:?}"
            );
        }
    }
}
