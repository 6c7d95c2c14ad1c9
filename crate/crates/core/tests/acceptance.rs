//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each with
//! its measured values and pinned tolerances, and exits nonzero on any
//! failure.

mod common;

use std::time::{Duration, Instant};

use oalg::algebra::{singleton, subsets_of};
use oalg::cli::run_with;
use oalg::corpus::{exprs, fixtures, registry};
use oalg::expr::{expr_class, ExprClass, FiniteMatcher};
use oalg::green::structure_check;
use oalg::quotient::{coarsest_congruence, syntactic};
use oalg::small::valid_algebras;
use oalg::synth::synth_language;
use oalg::term::{enumerate_finite_words, find_witness, RecognizedLanguage};
use oalg::varieties::variety_membership;
use oalg::{Error, OAlgebra};
use rand::seq::SliceRandom;
use rand::Rng;

use common::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Every algebra any criterion touched, for the lattice check.
#[derive(Default)]
struct Seen {
    algebras: Vec<OAlgebra>,
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("oalg").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).expect("utf-8 output"))
}

fn named_fixtures() -> Vec<OAlgebra> {
    vec![
        fixtures::min(),
        fixtures::gap(),
        fixtures::pd(),
        fixtures::even(),
    ]
}

// ---------------------------------------------------------------------------

/// Single-cell mutations aimed at one axiom family, in a fixed order.
fn targeted_mutations(alg: &OAlgebra, family: u8) -> Vec<(String, OAlgebra)> {
    let n = alg.size();
    let u = alg.unit();
    let mut out = Vec::new();
    let mut push = |label: String, m: oalg::Result<OAlgebra>| {
        if let Ok(m) = m {
            out.push((label, m));
        }
    };
    let non_unit: Vec<usize> = alg.elements().filter(|&a| a != u).collect();
    match family {
        1 => {
            for &a in &non_unit {
                for &b in &non_unit {
                    let v = (alg.mul(a, b) + 1) % n;
                    push(format!("{a}·{b}:={v}"), alg.with_product(a, b, v));
                }
            }
        }
        2 => {
            for &a in &non_unit {
                let v = (alg.omega(a) + 1) % n;
                push(format!("ω({a}):={v}"), alg.with_omega(a, v));
            }
        }
        3 => {
            for &a in &non_unit {
                let v = (alg.omegastar(a) + 1) % n;
                push(format!("ω*({a}):={v}"), alg.with_omegastar(a, v));
            }
        }
        4 => {
            let rest = alg.carrier() & !singleton(u);
            for p in subsets_of(rest).filter(|&p| p != 0) {
                let v = (alg.shuffle(p) + 1) % n;
                push(format!("sh({p:#b}):={v}"), alg.with_shuffle(p, v));
            }
        }
        _ => {
            let v = (u + 1) % n;
            push("ω(1)".into(), alg.with_omega(u, v));
            push("ω*(1)".into(), alg.with_omegastar(u, v));
            push("sh({1})".into(), alg.with_shuffle(singleton(u), v));
            for &a in &non_unit {
                let p = singleton(a) | singleton(u);
                let v = (alg.shuffle(p) + 1) % n;
                push(format!("sh({{{a},1}})"), alg.with_shuffle(p, v));
            }
        }
    }
    out
}

fn criterion_1(seen: &mut Seen) -> Outcome {
    let start = Instant::now();
    let algs = named_fixtures();
    let mut bad_fixtures = Vec::new();
    for a in &algs {
        if !a.validate().is_empty() {
            bad_fixtures.push(a.name().to_string());
        }
        seen.algebras.push(a.clone());
    }
    // Four mutations per family, drawn round-robin over the fixtures, each
    // required to break an identity of its family.
    let mut picked = 0;
    let mut per_family = [0usize; 5];
    let mut failures = Vec::new();
    for family in 1..=5u8 {
        let lists: Vec<Vec<(String, OAlgebra)>> =
            algs.iter().map(|a| targeted_mutations(a, family)).collect();
        let longest = lists.iter().map(Vec::len).max().unwrap_or(0);
        'outer: for i in 0..longest {
            for (k, list) in lists.iter().enumerate() {
                if per_family[family as usize - 1] == 4 {
                    break 'outer;
                }
                let Some((label, m)) = list.get(i) else {
                    continue;
                };
                let vs = m.validate();
                if !vs.iter().any(|v| v.axiom() == family) {
                    continue;
                }
                picked += 1;
                per_family[family as usize - 1] += 1;
                if vs.is_empty() || !vs.iter().all(|v| v.replays(m)) {
                    failures.push(format!("{} {label}", algs[k].name()));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = bad_fixtures.is_empty()
        && picked == 20
        && per_family.iter().all(|&c| c >= 2)
        && failures.is_empty()
        && elapsed < Duration::from_secs(5);
    outcome(
        pass,
        format!(
            "invalid fixtures {bad_fixtures:?}; {picked} mutations, per family {per_family:?}, failures {failures:?}; {:.2}s (limit 5s)",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2(seen: &mut Seen) -> Outcome {
    let expected = "\
+-----+-----+
| cci | coi |
+-----+-----+
| oci | ooi |
+-----+-----+
";
    let (code, out) = cli(&["eggbox", "algebra.gap"]);
    let gap = fixtures::gap();
    seen.algebras.push(gap.clone());
    let e = |s| gap.elem(s).unwrap();
    let labels_ok = gap.omega(e("cci")) == e("coi") && gap.omegastar(e("cci")) == e("oci");
    let pass = code == 0 && out.contains(expected) && labels_ok;
    outcome(
        pass,
        format!(
            "exit {code}, grid present {}, coi = ω(cci) and oci = ω*(cci) {labels_ok}",
            out.contains(expected)
        ),
    )
}

fn criterion_3(seen: &mut Seen) -> Outcome {
    let expected = [
        ("algebra.min", "✓ ✓ ✓ ✓ ✓"),
        ("algebra.gap", "✗ ✗ ✓ ✓ ✓"),
        ("algebra.even", "✗ ✓ ✗ ✓ ✓"),
        ("algebra.pd", "✗ ✗ ✗ ✗ ✗"),
    ];
    let mut wrong = Vec::new();
    for (id, row) in expected {
        let (code, out) = cli(&["varieties", id]);
        let first = out.lines().next().unwrap_or("");
        let got = first.split_once(": ").map(|x| x.1).unwrap_or("");
        if code != 0 || got != row {
            wrong.push(format!("{id}: {got}"));
        }
        seen.algebras.push(registry::load_algebra(id).unwrap());
    }
    outcome(
        wrong.is_empty(),
        format!("mismatches {wrong:?} (exact match)"),
    )
}

fn criterion_4(seen: &mut Seen) -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut violations = 0;
    let mut check = |alg: &OAlgebra, seen: &mut Seen| {
        checked += 1;
        violations += structure_check(alg).len();
        seen.algebras.push(alg.clone());
    };
    let mut fixture_list = named_fixtures();
    fixture_list.push(fixtures::absorbing());
    fixture_list.push(fixtures::trivial());
    for a in &fixture_list {
        check(a, seen);
    }
    let two: Vec<OAlgebra> = valid_algebras(2).collect();
    for a in &two {
        check(a, seen);
    }
    let three: Vec<OAlgebra> = valid_algebras(3).collect();
    for a in &three {
        check(a, seen);
    }
    // Sampled draws: a random valid table under a random relabelling of the
    // carrier, so the unit also moves.
    let mut rng = rng(4);
    let mut sampled = 0;
    let mut invalid_samples = 0;
    for _ in 0..1000 {
        let base = &three[rng.gen_range(0..three.len())];
        let mut perm: Vec<usize> = (0..3).collect();
        perm.shuffle(&mut rng);
        let alg = base.permuted(&perm);
        if !alg.is_valid() {
            invalid_samples += 1;
        }
        sampled += 1;
        check(&alg, seen);
    }
    let elapsed = start.elapsed();
    let pass = violations == 0
        && invalid_samples == 0
        && sampled >= 1000
        && elapsed < Duration::from_secs(120);
    outcome(
        pass,
        format!(
            "{checked} algebras ({} |M|=2, {} distinct |M|=3, {sampled} sampled |M|=3 relabellings), {violations} violations; {:.2}s (limit 120s)",
            two.len(),
            three.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_5(_: &mut Seen) -> Outcome {
    let mut checks = 0;
    let mut failures = Vec::new();
    for alg in named_fixtures() {
        for a in alg.elements() {
            let name = alg.elem_name(a).to_string();
            let mut ok = |what: &str, good: bool| {
                checks += 1;
                if !good {
                    failures.push(format!("{} {what}({name})", alg.name()));
                }
            };
            let r = alg.ordinal_power(a);
            ok("ordinal_power", matches!(r, Ok(r) if alg.omega(r) == r));
            let r = alg.ordinalstar_power(a);
            ok(
                "ordinalstar_power",
                matches!(r, Ok(r) if alg.omegastar(r) == r),
            );
            let r = alg.scattered_power(a);
            ok(
                "scattered_power",
                matches!(r, Ok(r) if alg.mul(alg.omegastar(r), alg.omega(r)) == r),
            );
            let mut contexts: Vec<Vec<usize>> = vec![vec![]];
            contexts.extend(alg.elements().map(|c| vec![c]));
            for ctx in contexts {
                let r = alg.shuffle_limit(a, &ctx);
                let good = matches!(r, Ok(r) if {
                    let g = alg.mul(alg.omegastar(r), alg.omega(r));
                    let f = ctx.iter().fold(g, |acc, &c| alg.mul(alg.mul(acc, c), g));
                    alg.shuffle(singleton(f)) == r
                });
                ok("shuffle_limit", good);
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{checks} fixpoint checks, failures {failures:?}"),
    )
}

fn criterion_6(seen: &mut Seen) -> Outcome {
    let mut rng = rng(6);
    let mut report = Vec::new();
    let mut failures = 0;
    let mut short = false;
    for alg in named_fixtures() {
        seen.algebras.push(alg.clone());
        let lang = letter_language(&alg, 0);
        let (mut below, mut above) = (0, 0);
        let mut attempts = 0;
        while (below < 500 || above < 500) && attempts < 200_000 {
            attempts += 1;
            let t = random_term(&mut rng, &lang.alphabet, 4);
            let a = rng.gen_range(0..alg.size());
            let v = eval(&lang, &t);
            let outside = upward(&alg, a) & singleton(v) == 0;
            if outside && below < 500 {
                below += 1;
                match find_witness(&lang, &t, a) {
                    Ok(w) if w.confirm(&lang, &t, a) => {}
                    _ => failures += 1,
                }
            } else if !outside && above < 500 {
                above += 1;
                if !matches!(find_witness(&lang, &t, a), Err(Error::Precondition(_))) {
                    failures += 1;
                }
            }
        }
        short |= below < 500 || above < 500;
        report.push(format!("{}: {below}∉Z/{above}∈Z", alg.name()));
    }
    outcome(
        !short && failures == 0,
        format!("{} ; {failures} failures", report.join(", ")),
    )
}

fn criterion_7(_: &mut Seen) -> Outcome {
    let expected = |item: u8| match item {
        1..=6 => ExprClass::MarkedStarFree,
        7 => ExprClass::Marked,
        8..=12 => ExprClass::PowerFree,
        13 => ExprClass::ScatterFree,
        _ => ExprClass::Scatter,
    };
    let items = exprs::items();
    let mut covered = [false; 14];
    let mut wrong = Vec::new();
    for it in &items {
        covered[it.item as usize - 1] = true;
        let strongest = expr_class(&it.expr).strongest();
        if strongest != vec![expected(it.item)] {
            wrong.push(format!("item {} {}: {strongest:?}", it.item, it.name));
        }
    }
    let all_items = covered.iter().all(|&c| c);
    outcome(
        all_items && wrong.is_empty(),
        format!(
            "{} expressions over items 1-14 (all present: {all_items}), mismatches {wrong:?}",
            items.len()
        ),
    )
}

fn criterion_8(seen: &mut Seen) -> Outcome {
    let start = Instant::now();
    let mut report = Vec::new();
    let mut pass = true;
    for id in ["pair.firstLetter", "pair.evenA", "pair.noB"] {
        let expr = registry::load_expr(id).unwrap();
        let lang = registry::load_language(id).unwrap();
        seen.algebras.push(lang.algebra.clone());
        let m = FiniteMatcher::new(&expr);
        let words: Vec<String> = enumerate_finite_words(&lang.alphabet, 8).collect();
        let disagree = words
            .iter()
            .filter(|w| m.matches(w) != lang.accepts_word(w).unwrap())
            .count();
        pass &= words.len() == 511 && disagree == 0;
        report.push(format!(
            "{id}: {} words, {disagree} disagreements",
            words.len()
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(30);
    outcome(
        pass,
        format!(
            "{}; {:.2}s (limit 30s)",
            report.join(", "),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_9(seen: &mut Seen) -> Outcome {
    let start = Instant::now();
    let mut algs: Vec<OAlgebra> = vec![
        fixtures::min(),
        fixtures::pd(),
        fixtures::even(),
        fixtures::absorbing(),
    ];
    algs.extend(valid_algebras(3));
    let mut recognizers: Vec<RecognizedLanguage> = Vec::new();
    for alg in &algs {
        for f in subsets_of(alg.carrier()) {
            recognizers.push(letter_language(alg, f));
        }
    }
    let mut mismatches = 0;
    for lang in &recognizers {
        let n = lang.algebra.size();
        let compatible: Vec<Vec<usize>> = set_partitions(n)
            .into_iter()
            .filter(|p| is_compatible(lang, p))
            .collect();
        let c = coarsest_congruence(lang);
        let ok = is_compatible(lang, &c.block) && compatible.iter().all(|p| refines(p, &c.block));
        if !ok {
            mismatches += 1;
        }
        if let Ok(q) = syntactic(lang) {
            seen.algebras.push(q.algebra);
        }
    }
    let elapsed = start.elapsed();
    let pass = recognizers.len() >= 10 && mismatches == 0 && elapsed < Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "{} recognizers with |M| ≤ 4, {mismatches} mismatches against exhaustive search; {:.2}s (limit 60s)",
            recognizers.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_10(_: &mut Seen) -> Outcome {
    let cases = [
        (
            "first letter over 𝒪_min",
            registry::first_letter(),
            ExprClass::MarkedStarFree,
        ),
        ("even a over 𝒪_even", registry::even_a(), ExprClass::Marked),
        ("gap over 𝒪_gap", registry::has_gap(), ExprClass::PowerFree),
    ];
    let mut report = Vec::new();
    let mut pass = true;
    for (name, lang, class) in cases {
        match synth_language(&lang, class) {
            Ok(e) => {
                let in_class = expr_class(&e).contains(class);
                let m = FiniteMatcher::new(&e);
                let disagree = enumerate_finite_words(&lang.alphabet, 6)
                    .filter(|w| m.matches(w) != lang.accepts_word(w).unwrap())
                    .count();
                pass &= in_class && disagree == 0;
                report.push(format!(
                    "{name}: {class} {in_class}, {disagree} disagreements up to length 6"
                ));
            }
            Err(e) => {
                pass = false;
                report.push(format!("{name}: {e}"));
            }
        }
    }
    outcome(pass, format!("{} (finite words only)", report.join("; ")))
}

fn criterion_11(seen: &mut Seen) -> Outcome {
    let bad: Vec<String> = seen
        .algebras
        .iter()
        .filter(|a| !lattice_ok(variety_membership(a).as_array()))
        .map(|a| a.name().to_string())
        .collect();
    outcome(
        bad.is_empty(),
        format!("{} algebras, violations {bad:?}", seen.algebras.len()),
    )
}

fn main() {
    let criteria: [(&str, fn(&mut Seen) -> Outcome); 11] = [
        ("fixture validity and mutation detection", criterion_1),
        ("eggbox of algebra.gap", criterion_2),
        ("variety matrix", criterion_3),
        (
            "structure checks on fixtures and small algebras",
            criterion_4,
        ),
        ("implicit-operation fixpoints", criterion_5),
        ("witness completeness on random terms", criterion_6),
        ("expression corpus classes", criterion_7),
        ("oracle agreement on fixture pairs", criterion_8),
        ("quotient coarseness", criterion_9),
        ("synthesis round trip", criterion_10),
        ("verdict lattice", criterion_11),
    ];
    let mut seen = Seen::default();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f(&mut seen);
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name} [{:.2}s]: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
