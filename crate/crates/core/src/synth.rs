//! Expressions from recognizers.
//!
//! For every element `a` the language `W_a` of words evaluating to `a` is
//! built by induction on the upward J-closure `Z` of `a`. Writing `J` for the
//! J-class of `a` and `Z' = Z ∖ J`, a level first describes the words falling
//! out of `Z`, then the words in `J`, then the R-, L- and H-classes, and
//! finally `W_a` itself.
//!
//! Only finite-word behaviour can be checked by execution. Constructions that
//! only concern infinite words are written so that they contain no finite
//! word; their infinite-word behaviour is not machine-checked.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use serde::Serialize;

use crate::algebra::{members, singleton, Elem, OAlgebra, Subset};
use crate::error::{Error, Result};
use crate::expr::{
    expr_class, smart_cat, smart_inter, smart_neg, smart_union, Expr, ExprClass, Ops,
};
use crate::green::{classify_idempotents, jclass_report, GreenData, JClassFlags};
use crate::term::RecognizedLanguage;
use crate::varieties::{variety_membership, Variety, VarietyVerdict};

/// The variety whose membership grants synthesis in a class.
pub fn required_variety(class: ExprClass) -> Variety {
    match class {
        ExprClass::MarkedStarFree => Variety::Fo,
        ExprClass::Marked => Variety::FoFinite,
        ExprClass::PowerFree => Variety::FoCut,
        ExprClass::ScatterFree => Variety::FoFiniteCut,
        ExprClass::Scatter => Variety::FoScattered,
    }
}

/// Classes granted by a verdict.
pub fn granted_classes(v: &VarietyVerdict) -> Vec<ExprClass> {
    ExprClass::ALL
        .into_iter()
        .filter(|&c| v.get(required_variety(c)))
        .collect()
}

/// One construction step, for the audit trail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    /// The language built, such as `W[ci]` or `R[oi]`.
    pub target: String,
    /// The construction that produced it.
    pub construction: String,
    /// Number of distinct nodes in the expression.
    pub dag_size: usize,
}

/// Languages shared by every element of one J-class.
#[derive(Clone, Debug)]
struct Level {
    /// Elements of the J-class.
    j: Subset,
    /// `Words(J)`.
    words_j: Expr,
    /// Nonempty `R_r` languages keyed by `r`.
    r_lang: BTreeMap<Elem, Expr>,
    /// Nonempty `L_ℓ` languages keyed by `ℓ`.
    l_lang: BTreeMap<Elem, Expr>,
    /// The level's building blocks with their images, used by the group case.
    blocks: Vec<(Elem, Expr)>,
}

/// State of one synthesis run.
pub struct SynthContext<'a> {
    lang: &'a RecognizedLanguage,
    class: ExprClass,
    ops: Ops,
    green: GreenData,
    flags: Vec<JClassFlags>,
    words: HashMap<Elem, Expr>,
    levels: HashMap<usize, Rc<Level>>,
    trace: Vec<TraceEntry>,
}

impl<'a> SynthContext<'a> {
    /// Fails with `HypothesisUnsatisfied` unless the algebra's verdict grants
    /// `class`.
    pub fn new(lang: &'a RecognizedLanguage, class: ExprClass) -> Result<Self> {
        let alg = &lang.algebra;
        let verdict = variety_membership(alg);
        let need = required_variety(class);
        if !verdict.get(need) {
            let why = verdict.justification(need).unwrap_or("").to_string();
            return Err(Error::HypothesisUnsatisfied(format!(
                "{class} needs {}: {why}",
                need.key()
            )));
        }
        let green = GreenData::new(alg);
        let kinds = classify_idempotents(alg);
        let flags = jclass_report(&green, &kinds).classes;
        Ok(SynthContext {
            lang,
            class,
            ops: Ops::new(&lang.alphabet),
            green,
            flags,
            words: HashMap::new(),
            levels: HashMap::new(),
            trace: Vec::new(),
        })
    }

    pub fn class(&self) -> ExprClass {
        self.class
    }

    pub fn trace(&self) -> &[TraceEntry] {
        &self.trace
    }

    fn alg(&self) -> &OAlgebra {
        &self.lang.algebra
    }

    fn record(&mut self, target: String, construction: &str, e: &Expr) {
        debug_assert!(
            expr_class(e).contains(self.class),
            "{target} via {construction} leaves {}",
            self.class
        );
        self.trace.push(TraceEntry {
            target,
            construction: construction.to_string(),
            dag_size: e.dag_size(),
        });
    }

    /// `W_a`, the words evaluating to `a`.
    pub fn words_eq(&mut self, a: Elem) -> Result<Expr> {
        if let Some(e) = self.words.get(&a) {
            return Ok(e.clone());
        }
        let level = self.level(a)?;
        let (e, how) = if self.green.h_set(a) == singleton(a) {
            (self.words_eq_h(a, &level), "H-class is trivial")
        } else {
            if !self.class.allows_star() {
                return Err(Error::HypothesisUnsatisfied(format!(
                    "{} lies in a nontrivial group and {} has no star",
                    self.alg().elem_name(a),
                    self.class
                )));
            }
            (self.group_words(a, &level), "automaton over the R-class")
        };
        let name = format!("W[{}]", self.alg().elem_name(a));
        self.record(name, how, &e);
        self.words.insert(a, e.clone());
        Ok(e)
    }

    /// `W_{≡R a}`.
    pub fn words_eq_r(&mut self, a: Elem) -> Result<Expr> {
        let level = self.level(a)?;
        Ok(self.class_words(a, &level, Side::Right))
    }

    /// `W_{≡L a}`.
    pub fn words_eq_l(&mut self, a: Elem) -> Result<Expr> {
        let level = self.level(a)?;
        Ok(self.class_words(a, &level, Side::Left))
    }

    /// `W_{≡H a}`.
    pub fn words_eq_h_of(&mut self, a: Elem) -> Result<Expr> {
        let level = self.level(a)?;
        Ok(self.words_eq_h(a, &level))
    }

    /// `Words(¬Z)` for the upward closure `Z` of `a`.
    pub fn words_not_z(&mut self, a: Elem) -> Result<Expr> {
        self.ensure_above(a)?;
        let b = self.builder(a);
        let e = b.not_z()?;
        self.trace.extend(b.trace.into_inner());
        Ok(e)
    }

    /// `Words(J)` for the J-class of `a`.
    pub fn words_j(&mut self, a: Elem) -> Result<Expr> {
        Ok(self.level(a)?.words_j.clone())
    }

    /// `R_r` at the level of `a`, empty when no case of the construction
    /// produces `r`.
    pub fn r_lang(&mut self, a: Elem, r: Elem) -> Result<Expr> {
        let level = self.level(a)?;
        Ok(level.r_lang.get(&r).cloned().unwrap_or_else(Expr::empty))
    }

    /// `L_ℓ` at the level of `a`.
    pub fn l_lang(&mut self, a: Elem, l: Elem) -> Result<Expr> {
        let level = self.level(a)?;
        Ok(level.l_lang.get(&l).cloned().unwrap_or_else(Expr::empty))
    }

    /// Right limit language of an idempotent strictly J-above `a`.
    pub fn right_limit(&mut self, a: Elem, e: Elem) -> Result<Expr> {
        self.ensure_above(a)?;
        let b = self.builder(a);
        if b.zp & singleton(e) == 0 || !self.alg().is_idempotent(e) {
            return Err(Error::Precondition(format!(
                "{} is not an idempotent strictly J-above {}",
                self.alg().elem_name(e),
                self.alg().elem_name(a)
            )));
        }
        Ok(b.e_right(e))
    }

    /// The language of the recognizer: the union of `W_a` over accepting `a`.
    pub fn language(&mut self) -> Result<Expr> {
        let mut out = Expr::empty();
        for a in members(self.lang.accepting) {
            out = smart_union(out, self.words_eq(a)?);
        }
        self.record("L".into(), "union over accepting elements", &out);
        Ok(out)
    }

    fn ensure_above(&mut self, a: Elem) -> Result<()> {
        let z = self.green.upward_closure(a);
        let j = self.green.j_set(a);
        for b in members(z & !j) {
            self.words_eq(b)?;
        }
        Ok(())
    }

    fn builder(&self, a: Elem) -> Builder<'_> {
        let z = self.green.upward_closure(a);
        let j = self.green.j_set(a);
        let zp = z & !j;
        let n = self.alg().size();
        let w = (0..n)
            .map(|b| {
                if zp & singleton(b) != 0 {
                    self.words[&b].clone()
                } else {
                    Expr::empty()
                }
            })
            .collect();
        Builder {
            alg: self.alg(),
            lang: self.lang,
            green: &self.green,
            flags: &self.flags[self.green.j_class_id(a)],
            class: self.class,
            ops: &self.ops,
            z,
            zp,
            j,
            w,
            trace: Default::default(),
        }
    }

    fn level(&mut self, a: Elem) -> Result<Rc<Level>> {
        let id = self.green.j_class_id(a);
        if let Some(l) = self.levels.get(&id) {
            return Ok(l.clone());
        }
        self.ensure_above(a)?;
        let b = self.builder(a);
        let not_z = b.not_z()?;
        let words_j = smart_inter(smart_neg(not_z), smart_neg(b.wset(b.zp)));
        let r_lang = b.r_family();
        let l_lang = b.l_family();
        let blocks = b.blocks();
        let j = b.j;
        let label = b.label();
        let mut trace = b.trace.into_inner();
        let level = Rc::new(Level {
            j,
            words_j,
            r_lang,
            l_lang,
            blocks,
        });
        self.trace.append(&mut trace);
        self.record(
            format!("Words(J{label})"),
            "complement of the fall and of Z'",
            &level.words_j,
        );
        for (r, e) in &level.r_lang {
            let name = format!("R[{}]{label}", self.alg().elem_name(*r));
            self.record(name, "right factor family", e);
        }
        for (l, e) in &level.l_lang {
            let name = format!("L[{}]{label}", self.alg().elem_name(*l));
            self.record(name, "left factor family", e);
        }
        self.levels.insert(id, level.clone());
        Ok(level)
    }

    /// `W_{≡R a}` or `W_{≡L a}`.
    fn class_words(&self, a: Elem, level: &Level, side: Side) -> Expr {
        let alg = self.alg();
        let g = &self.green;
        let zp = self.green.upward_closure(a) & !level.j;
        let below = |x: Elem| match side {
            Side::Right => g.le_r(x, a),
            Side::Left => g.le_l(x, a),
        };
        let mut parts = Expr::empty();
        let family = match side {
            Side::Right => &level.r_lang,
            Side::Left => &level.l_lang,
        };
        let eps = self.ops.eps();
        // Prefix words: W_b for b in Z', or the empty word when Z' is empty.
        let mut heads: Vec<(Elem, Expr)> =
            members(zp).map(|b| (b, self.words[&b].clone())).collect();
        if zp == 0 {
            heads.push((alg.unit(), eps.clone()));
        }
        for (b, wb) in &heads {
            for (&c, &h) in self.lang.alphabet.iter().zip(&self.lang.h) {
                for (&r, rl) in family {
                    let (img, piece) = match side {
                        Side::Right => (
                            alg.mul(alg.mul(*b, h), r),
                            Expr::cat_all([wb.clone(), Expr::letter(c), rl.clone()]),
                        ),
                        Side::Left => (
                            alg.mul(alg.mul(r, h), *b),
                            Expr::cat_all([rl.clone(), Expr::letter(c), wb.clone()]),
                        ),
                    };
                    if below(img) {
                        parts = smart_union(parts, piece);
                    }
                }
            }
        }
        let mut out = smart_inter(level.words_j.clone(), parts);
        let unit_in_class = match side {
            Side::Right => g.r_equiv(alg.unit(), a),
            Side::Left => g.l_equiv(alg.unit(), a),
        };
        if unit_in_class {
            out = smart_union(out, eps);
        }
        out
    }

    fn words_eq_h(&self, a: Elem, level: &Level) -> Expr {
        smart_inter(
            self.class_words(a, level, Side::Right),
            self.class_words(a, level, Side::Left),
        )
    }

    /// `W_a` when the H-class of `a` is a nontrivial group: words are read
    /// as a sequence of blocks separated by letters, and the automaton over
    /// the elements R-above `a` is turned into an expression.
    fn group_words(&self, a: Elem, level: &Level) -> Expr {
        let alg = self.alg();
        let g = &self.green;
        let z = g.upward_closure(a);
        let states: Vec<Elem> = members(z).filter(|&m| g.le_r(a, m)).collect();
        let idx = |m: Elem| states.iter().position(|&s| s == m);
        let mut block_at: BTreeMap<Elem, Expr> = BTreeMap::new();
        for (img, e) in &level.blocks {
            let slot = block_at.entry(*img).or_insert_with(Expr::empty);
            *slot = smart_union(slot.clone(), e.clone());
        }
        let n = states.len();
        let mut coef: Vec<Vec<Rx>> = vec![vec![Rx::empty(); n]; n];
        for (i, &m) in states.iter().enumerate() {
            for (&c, &h) in self.lang.alphabet.iter().zip(&self.lang.h) {
                for (&img, blk) in &block_at {
                    let next = alg.mul(alg.mul(m, h), img);
                    if let Some(j) = idx(next) {
                        coef[i][j] = Rx::alt(coef[i][j].clone(), Rx::tok(c, blk.clone()));
                    }
                }
            }
        }
        let constant: Vec<Rx> = states
            .iter()
            .map(|&m| if m == a { Rx::Eps } else { Rx::empty() })
            .collect();
        let solved = solve(coef, constant);
        let mut out = Expr::empty();
        for (&img, blk) in &block_at {
            if let Some(i) = idx(img) {
                out = smart_union(out, render(blk.clone(), &solved[i]));
            }
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Right,
    Left,
}

/// Synthesizes an expression of class `class` for the recognized language.
pub fn synth_language(lang: &RecognizedLanguage, class: ExprClass) -> Result<Expr> {
    SynthContext::new(lang, class)?.language()
}

/// Synthesis output with its trace.
#[derive(Clone, Debug)]
pub struct Synthesis {
    pub expr: Expr,
    pub class: ExprClass,
    pub trace: Vec<TraceEntry>,
}

impl Synthesis {
    pub fn run(lang: &RecognizedLanguage, class: ExprClass) -> Result<Self> {
        let mut cx = SynthContext::new(lang, class)?;
        let expr = cx.language()?;
        Ok(Synthesis {
            expr,
            class,
            trace: cx.trace,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "class": self.class.key(),
            "expression": self.expr.to_shared_string(),
            "dag_size": self.expr.dag_size(),
            "trace": self.trace,
            "validation": "finite words only; infinite-word behaviour follows the construction and is not executed",
        })
    }
}

// ---------------------------------------------------------------------------
// One level of the induction

struct Builder<'c> {
    alg: &'c OAlgebra,
    lang: &'c RecognizedLanguage,
    green: &'c GreenData,
    flags: &'c JClassFlags,
    class: ExprClass,
    ops: &'c Ops,
    z: Subset,
    zp: Subset,
    j: Subset,
    /// `W_b` for `b ∈ Z'`, empty elsewhere.
    w: Vec<Expr>,
    trace: std::cell::RefCell<Vec<TraceEntry>>,
}

impl Builder<'_> {
    fn label(&self) -> String {
        let names: Vec<&str> = members(self.j).map(|b| self.alg.elem_name(b)).collect();
        format!("{{{}}}", names.join(","))
    }

    fn note(&self, target: &str, construction: &str, e: &Expr) {
        if e.is_empty_set() {
            return;
        }
        self.trace.borrow_mut().push(TraceEntry {
            target: format!("{target}{}", self.label()),
            construction: construction.to_string(),
            dag_size: e.dag_size(),
        });
    }

    fn marked(&self) -> bool {
        self.class.is_marked()
    }

    fn in_z(&self, b: Elem) -> bool {
        self.z & singleton(b) != 0
    }

    fn in_zp(&self, b: Elem) -> bool {
        self.zp & singleton(b) != 0
    }

    fn in_j(&self, b: Elem) -> bool {
        self.j & singleton(b) != 0
    }

    fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.alg.mul(a, b)
    }

    fn letters(&self) -> impl Iterator<Item = (char, Elem)> + '_ {
        self.lang
            .alphabet
            .iter()
            .copied()
            .zip(self.lang.h.iter().copied())
    }

    fn idempotents(&self, set: Subset) -> Vec<Elem> {
        members(set)
            .filter(|&e| self.alg.is_idempotent(e))
            .collect()
    }

    /// Union of `W_b` over `set ⊆ Z'`.
    fn wset(&self, set: Subset) -> Expr {
        debug_assert_eq!(set & !self.zp, 0);
        members(set).fold(Expr::empty(), |acc, b| smart_union(acc, self.w[b].clone()))
    }

    fn set_where(&self, pred: impl Fn(Elem) -> bool) -> Subset {
        self.alg
            .elements()
            .filter(|&b| pred(b))
            .fold(0, |s, b| s | singleton(b))
    }

    /// `W_{∉Z'}`.
    fn not_zp(&self) -> Expr {
        smart_neg(self.wset(self.zp))
    }

    fn all(&self) -> Expr {
        Expr::all()
    }

    fn cat(&self, a: Expr, b: Expr) -> Expr {
        smart_cat(a, b)
    }

    /// `X·Σ·Σ*`.
    fn then_letter(&self, x: &Expr) -> Expr {
        if x.is_empty_set() {
            return x.clone();
        }
        self.ops.initial(x)
    }

    /// `Σ*·Σ·X`.
    fn letter_then(&self, x: &Expr) -> Expr {
        if x.is_empty_set() {
            return x.clone();
        }
        self.ops.final_(x)
    }

    /// `X·Σ*`. Marked classes use `X + XΣΣ*`, which misses continuations
    /// without a first letter.
    fn post_all(&self, x: Expr) -> Expr {
        if x.is_empty_set() {
            return x;
        }
        if self.marked() {
            smart_union(x.clone(), self.then_letter(&x))
        } else {
            self.cat(x, self.all())
        }
    }

    /// `Σ*·X`, mirrored.
    fn pre_all(&self, x: Expr) -> Expr {
        if x.is_empty_set() {
            return x;
        }
        if self.marked() {
            smart_union(x.clone(), self.letter_then(&x))
        } else {
            self.cat(self.all(), x)
        }
    }

    fn factor(&self, x: Expr) -> Expr {
        self.pre_all(self.post_all(x))
    }

    fn nonempty(&self, x: Expr) -> Expr {
        smart_inter(x, smart_neg(self.ops.eps()))
    }

    // -- building blocks ----------------------------------------------------

    fn j_of(&self, e: Elem) -> Subset {
        self.green.j_set(e)
    }

    fn above(&self, e: Elem) -> Subset {
        self.set_where(|b| self.green.le_j(e, b))
    }

    /// `e→` for an idempotent `e ∈ Z'`.
    fn e_right(&self, e: Elem) -> Expr {
        let ops = self.ops;
        let x = smart_inter(
            smart_inter(
                ops.cofinal(&self.wset(self.j_of(e))),
                ops.all_prefixes(&self.wset(self.above(e))),
            ),
            self.then_letter(&self.wset(self.green.r_set(e))),
        );
        self.note(&format!("{}→", self.alg.elem_name(e)), "right limit", &x);
        x
    }

    /// `←f` for an idempotent `f ∈ Z'`.
    fn e_left(&self, f: Elem) -> Expr {
        let ops = self.ops;
        let x = smart_inter(
            smart_inter(
                ops.coinitial(&self.wset(self.j_of(f))),
                ops.all_suffixes(&self.wset(self.above(f))),
            ),
            self.letter_then(&self.wset(self.green.l_set(f))),
        );
        self.note(&format!("←{}", self.alg.elem_name(f)), "left limit", &x);
        x
    }

    /// Nonempty words with cofinally many factors outside `Z'`.
    fn jr(&self) -> Expr {
        self.nonempty(self.ops.cofinal(&self.not_zp()))
    }

    /// Nonempty words with coinitially many factors outside `Z'`.
    fn jl(&self) -> Expr {
        self.nonempty(self.ops.coinitial(&self.not_zp()))
    }

    /// Possible images in `Z` of words in `jr`.
    fn jr_images(&self) -> Subset {
        let mut out = 0;
        for e in self.idempotents(self.j) {
            let w = self.alg.omega(e);
            out |= self.set_where(|x| self.in_j(x) && self.green.l_equiv(x, w));
        }
        out & self.z
    }

    fn jl_images(&self) -> Subset {
        let mut out = 0;
        for e in self.idempotents(self.j) {
            let w = self.alg.omegastar(e);
            out |= self.set_where(|x| self.in_j(x) && self.green.r_equiv(x, w));
        }
        out & self.z
    }

    /// Prefix gadget: every prefix in the R-class of `e` followed by a letter
    /// extends by a J-class factor staying in that R-class. Combined with a
    /// prefix in the R-class it contains no finite word.
    fn extend_right(&self, e: Elem) -> Expr {
        let r = self.green.r_set(e);
        let je = self.j_of(e);
        let mut out = self.all();
        for b in members(r) {
            for (c, h) in self.letters() {
                let cs =
                    members(je).filter(|&x| self.green.r_equiv(self.mul(self.mul(b, h), x), e));
                let next = cs.fold(Expr::empty(), |acc, x| smart_union(acc, self.w[x].clone()));
                let bad = Expr::cat_all([
                    self.w[b].clone(),
                    Expr::letter(c),
                    smart_neg(self.then_letter(&next)),
                ]);
                out = smart_inter(out, smart_neg(bad));
            }
        }
        out
    }

    /// Suffix gadget mirroring [`Builder::extend_right`] for `←f`, restricted
    /// to prefixes in `region`.
    fn extend_left(&self, f: Elem, region: &Expr) -> Expr {
        let l = self.green.l_set(f);
        let jf = self.j_of(f);
        let mut out = self.all();
        for b in members(l) {
            for (c, h) in self.letters() {
                let cs =
                    members(jf).filter(|&x| self.green.l_equiv(self.mul(self.mul(x, h), b), f));
                let next = cs.fold(Expr::empty(), |acc, x| smart_union(acc, self.w[x].clone()));
                let left = smart_inter(region.clone(), smart_neg(self.letter_then(&next)));
                let bad = Expr::cat_all([left, Expr::letter(c), self.w[b].clone()]);
                out = smart_inter(out, smart_neg(bad));
            }
        }
        out
    }

    /// `e→·←f`.
    fn pair_ef(&self, e: Elem, f: Elem) -> Expr {
        if !self.marked() {
            return self.cat(self.e_right(e), self.e_left(f));
        }
        let region = smart_neg(self.wset(self.above(e)));
        let region_r = smart_neg(self.wset(self.above(f)));
        Expr::inter_all([
            self.extend_right(e),
            self.then_letter(&self.wset(self.green.r_set(e))),
            self.extend_left(f, &region),
            self.letter_then(&self.wset(self.green.l_set(f))),
            smart_neg(self.ops.all_prefixes(&smart_neg(region))),
            smart_neg(self.ops.all_suffixes(&smart_neg(region_r))),
        ])
    }

    /// `e→·jl`.
    fn pair_e_jl(&self, e: Elem) -> Expr {
        if !self.marked() {
            return self.cat(self.e_right(e), self.jl());
        }
        let above = self.wset(self.above(e));
        let region = smart_neg(above.clone());
        // Past the e-part, every prefix before a letter ends with a factor
        // outside Z'.
        let after = self.each_letter_bad(|c| {
            let left = smart_inter(region.clone(), smart_neg(self.letter_then(&self.not_zp())));
            Expr::cat_all([left, Expr::letter(c), self.all()])
        });
        Expr::inter_all([
            self.extend_right(e),
            self.then_letter(&self.wset(self.green.r_set(e))),
            after,
            smart_neg(self.ops.all_prefixes(&above)),
        ])
    }

    /// `jr·←f`.
    fn pair_jr_f(&self, f: Elem) -> Expr {
        if !self.marked() {
            return self.cat(self.jr(), self.e_left(f));
        }
        let above = self.wset(self.above(f));
        let region = smart_neg(above.clone());
        let before = self.each_letter_bad(|c| {
            let right = smart_inter(region.clone(), smart_neg(self.then_letter(&self.not_zp())));
            Expr::cat_all([self.all(), Expr::letter(c), right])
        });
        let all_f = self.all();
        Expr::inter_all([
            self.extend_left(f, &all_f),
            self.letter_then(&self.wset(self.green.l_set(f))),
            before,
            smart_neg(self.ops.all_suffixes(&above)),
        ])
    }

    /// `∩σ ¬bad(σ)`.
    fn each_letter_bad(&self, bad: impl Fn(char) -> Expr) -> Expr {
        self.lang
            .alphabet
            .iter()
            .fold(self.all(), |acc, &c| smart_inter(acc, smart_neg(bad(c))))
    }

    // -- the fall out of Z ---------------------------------------------------

    fn not_z(&self) -> Result<Expr> {
        let pieces = [
            ("letter", self.letter_fall()),
            ("omega", self.omega_fall()),
            ("omega*", self.omegastar_fall()),
            ("concatenation", self.concat_fall()),
            ("shuffle", self.shuffle_fall()?),
            ("gap", self.gap_fall()?),
        ];
        let mut out = Expr::empty();
        for (name, e) in pieces {
            self.note(&format!("fall[{name}]"), "witness detection", &e);
            out = smart_union(out, e);
        }
        Ok(out)
    }

    fn letter_fall(&self) -> Expr {
        let mut out = Expr::empty();
        for (c, h) in self.letters() {
            if !self.in_z(h) {
                out = smart_union(out, self.ops.contains_letter(c));
            }
        }
        out
    }

    fn omega_fall(&self) -> Expr {
        let mut out = Expr::empty();
        for e in self.idempotents(self.z) {
            if self.in_z(self.alg.omega(e)) {
                continue;
            }
            if self.in_zp(e) {
                out = smart_union(out, self.factor(self.e_right(e)));
            } else {
                let jr = self.jr();
                out = smart_union(out, smart_union(jr.clone(), self.then_letter(&jr)));
            }
        }
        out
    }

    fn omegastar_fall(&self) -> Expr {
        let mut out = Expr::empty();
        for e in self.idempotents(self.z) {
            if self.in_z(self.alg.omegastar(e)) {
                continue;
            }
            if self.in_zp(e) {
                out = smart_union(out, self.factor(self.e_left(e)));
            } else {
                let jl = self.jl();
                out = smart_union(out, smart_union(jl.clone(), self.letter_then(&jl)));
            }
        }
        out
    }

    fn concat_fall(&self) -> Expr {
        let rs = self.r_family();
        let ls = self.l_family();
        let mut out = Expr::empty();
        for (&l, le) in &ls {
            for (c, h) in self.letters() {
                for (&r, re) in &rs {
                    if !self.in_z(self.mul(self.mul(l, h), r)) {
                        out = smart_union(
                            out,
                            Expr::cat_all([le.clone(), Expr::letter(c), re.clone()]),
                        );
                    }
                }
                for b in members(self.zp) {
                    let lb = self.mul(self.mul(l, h), b);
                    for (c2, h2) in self.letters() {
                        for (&r, re) in &rs {
                            if !self.in_z(self.mul(self.mul(lb, h2), r)) {
                                out = smart_union(
                                    out,
                                    Expr::cat_all([
                                        le.clone(),
                                        Expr::letter(c),
                                        self.w[b].clone(),
                                        Expr::letter(c2),
                                        re.clone(),
                                    ]),
                                );
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn unreachable(&self, what: &str) -> Error {
        Error::CaseUnreachable(format!(
            "{what} at J-class {} under {}",
            self.label(),
            self.class
        ))
    }

    fn shuffle_fall(&self) -> Result<Expr> {
        let fl = self.flags;
        let xr = self.jr_images();
        let xl = self.jl_images();
        if fl.regular.is_none() {
            let jr = self.jr();
            let mut out = self.then_letter(&jr);
            for f in self.idempotents(self.zp) {
                out = smart_union(out, self.post_all(self.pair_jr_f(f)));
            }
            return Ok(out);
        }
        if fl.ordinal_regular.is_none() && fl.ordinalstar_regular.is_none() {
            return match self.class {
                ExprClass::MarkedStarFree => {
                    Err(self.unreachable("shuffle fall of a regular class"))
                }
                ExprClass::Marked => Ok(self.ops.infinitely_many_marked(&self.not_zp())),
                _ => Ok(self.ops.infinitely_many_unrestricted(&self.not_zp())),
            };
        }
        if fl.scattered_regular.is_none() {
            if self.marked() {
                return Err(self.unreachable("shuffle fall of an ordinal regular class"));
            }
            if self.products_fall(xr, self.alg.unit(), xl) {
                return Ok(self.factor(self.cat(self.jr(), self.jl())));
            }
            return Ok(Expr::empty());
        }
        if fl.shuffle_regular.is_none() {
            if self.class != ExprClass::Scatter {
                return Err(self.unreachable("shuffle fall of a scattered regular class"));
            }
            return Ok(self.ops.densely_many(&self.not_zp()));
        }
        // Shuffle regular: a factor of Z' between a right and a left J-limit.
        let mut out = Expr::empty();
        let (jr, jl) = (self.jr(), self.jl());
        let mut middles: Vec<(Elem, Expr)> =
            members(self.zp).map(|b| (b, self.w[b].clone())).collect();
        if self.zp & singleton(self.alg.unit()) == 0 {
            middles.push((self.alg.unit(), self.ops.eps()));
        }
        for (c, h) in self.letters() {
            if self.products_fall(xr, h, xl) {
                out = smart_union(
                    out,
                    Expr::cat_all([jr.clone(), Expr::letter(c), jl.clone()]),
                );
            }
            for (b, wb) in &middles {
                for (c2, h2) in self.letters() {
                    let mid = self.mul(self.mul(h, *b), h2);
                    if self.products_fall(xr, mid, xl) {
                        out = smart_union(
                            out,
                            Expr::cat_all([
                                jr.clone(),
                                Expr::letter(c),
                                wb.clone(),
                                Expr::letter(c2),
                                jl.clone(),
                            ]),
                        );
                    }
                }
            }
        }
        Ok(self.factor(out))
    }

    /// True iff `x·mid·y ∉ Z` for every `x ∈ xs`, `y ∈ ys`. Images outside
    /// `Z` are absorbing and are not listed.
    fn products_fall(&self, xs: Subset, mid: Elem, ys: Subset) -> bool {
        members(xs).all(|x| members(ys).all(|y| !self.in_z(self.mul(self.mul(x, mid), y))))
    }

    fn gap_fall(&self) -> Result<Expr> {
        let mut out = Expr::empty();
        let idem = self.idempotents(self.z);
        let mut jr_jl = false;
        for &e in &idem {
            for &f in &idem {
                let oe = self.alg.omega(e);
                let of = self.alg.omegastar(f);
                if self.in_z(self.mul(oe, of)) {
                    continue;
                }
                let piece = match (self.in_zp(e), self.in_zp(f)) {
                    (true, true) => self.pair_ef(e, f),
                    (false, true) => self.pair_jr_f(f),
                    (true, false) => self.pair_e_jl(e),
                    (false, false) => {
                        if jr_jl {
                            continue;
                        }
                        jr_jl = true;
                        let both_fall = !self.in_z(oe) && !self.in_z(of);
                        match self.class {
                            ExprClass::MarkedStarFree => {
                                return Err(self.unreachable("gap fall inside the class"))
                            }
                            ExprClass::Marked if both_fall => {
                                out = smart_union(
                                    out,
                                    self.ops.infinitely_many_marked(&self.not_zp()),
                                );
                                continue;
                            }
                            ExprClass::Marked => {
                                return Err(self.unreachable("gap fall at an ordinal regular class"))
                            }
                            _ => self.cat(self.jr(), self.jl()),
                        }
                    }
                };
                out = smart_union(out, self.factor(piece));
            }
        }
        Ok(out)
    }

    // -- factor families -----------------------------------------------------

    /// `R_r` for every `r` produced by some case.
    fn r_family(&self) -> BTreeMap<Elem, Expr> {
        let mut m: BTreeMap<Elem, Expr> = BTreeMap::new();
        let mut add = |r: Elem, e: Expr| {
            if e.is_empty_set() {
                return;
            }
            let slot = m.entry(r).or_insert_with(Expr::empty);
            *slot = smart_union(slot.clone(), e);
        };
        add(self.alg.unit(), self.all());
        let zp_idem = self.idempotents(self.zp);
        let j_idem = self.idempotents(self.j);
        for &e in &zp_idem {
            add(self.alg.omegastar(e), self.post_all(self.e_left(e)));
        }
        for &e in &j_idem {
            add(self.alg.omegastar(e), self.jl());
        }
        for &e in &zp_idem {
            for &f in &j_idem {
                add(
                    self.mul(self.alg.omega(e), self.alg.omegastar(f)),
                    self.pair_e_jl(e),
                );
            }
        }
        for &e in &zp_idem {
            let oe = self.alg.omega(e);
            if self.green.lt_j(oe, e) {
                add(oe, self.post_all(self.e_right(e)));
            }
        }
        for &e in &zp_idem {
            for &f in &zp_idem {
                if self.pair_allowed(e, f) {
                    let r = self.mul(self.alg.omega(e), self.alg.omegastar(f));
                    add(r, self.post_all(self.pair_ef(e, f)));
                }
            }
        }
        m
    }

    /// `L_ℓ` for every `ℓ` produced by some case.
    fn l_family(&self) -> BTreeMap<Elem, Expr> {
        let mut m: BTreeMap<Elem, Expr> = BTreeMap::new();
        let mut add = |l: Elem, e: Expr| {
            if e.is_empty_set() {
                return;
            }
            let slot = m.entry(l).or_insert_with(Expr::empty);
            *slot = smart_union(slot.clone(), e);
        };
        add(self.alg.unit(), self.all());
        let zp_idem = self.idempotents(self.zp);
        let j_idem = self.idempotents(self.j);
        for &e in &zp_idem {
            add(self.alg.omega(e), self.pre_all(self.e_right(e)));
        }
        for &e in &j_idem {
            add(self.alg.omega(e), self.jr());
        }
        for &e in &j_idem {
            for &f in &zp_idem {
                add(
                    self.mul(self.alg.omega(e), self.alg.omegastar(f)),
                    self.pair_jr_f(f),
                );
            }
        }
        for &f in &zp_idem {
            let of = self.alg.omegastar(f);
            if self.green.lt_j(of, f) {
                add(of, self.pre_all(self.e_left(f)));
            }
        }
        for &e in &zp_idem {
            for &f in &zp_idem {
                if self.pair_allowed(e, f) {
                    let l = self.mul(self.alg.omega(e), self.alg.omegastar(f));
                    add(l, self.pre_all(self.pair_ef(e, f)));
                }
            }
        }
        m
    }

    /// Whether `e→·←f` enters the factor families.
    fn pair_allowed(&self, e: Elem, f: Elem) -> bool {
        let g = self.green;
        let ef = self.mul(self.alg.omega(e), self.alg.omegastar(f));
        if self.marked() {
            g.lt_j(ef, e) || g.lt_j(ef, f)
        } else {
            !g.j_equiv(e, f) || g.lt_j(self.alg.omega(e), e) || g.lt_j(self.alg.omegastar(f), f)
        }
    }

    /// Blocks between letters in the group case, with their images.
    fn blocks(&self) -> Vec<(Elem, Expr)> {
        let mut out: Vec<(Elem, Expr)> = members(self.zp).map(|b| (b, self.w[b].clone())).collect();
        if self.zp & singleton(self.alg.unit()) == 0 {
            out.push((self.alg.unit(), self.ops.eps()));
        }
        if self.flags.regular.is_none() || self.class.allows_star() {
            let zp_idem = self.idempotents(self.zp);
            for &e in &zp_idem {
                out.push((self.alg.omega(e), self.e_right(e)));
                out.push((self.alg.omegastar(e), self.e_left(e)));
            }
            for &e in &zp_idem {
                for &f in &zp_idem {
                    let ef = self.mul(self.alg.omega(e), self.alg.omegastar(f));
                    if self.green.lt_j(ef, e) || self.green.lt_j(ef, f) {
                        out.push((ef, self.pair_ef(e, f)));
                    }
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Left-marked regular expressions over letter-block tokens

/// A regular expression whose nonempty words start with a token `σ·B`.
#[derive(Clone, Debug)]
enum Rx {
    Eps,
    Tok(char, Expr),
    Cat(Rc<Rx>, Rc<Rx>),
    Alt(Vec<Rx>),
    Star(Rc<Rx>),
}

impl Rx {
    fn empty() -> Rx {
        Rx::Alt(Vec::new())
    }

    fn is_empty(&self) -> bool {
        matches!(self, Rx::Alt(v) if v.is_empty())
    }

    fn tok(c: char, b: Expr) -> Rx {
        Rx::Tok(c, b)
    }

    fn alt(a: Rx, b: Rx) -> Rx {
        match (a, b) {
            (a, b) if a.is_empty() => b,
            (a, b) if b.is_empty() => a,
            (Rx::Alt(mut v), Rx::Alt(w)) => {
                v.extend(w);
                Rx::Alt(v)
            }
            (Rx::Alt(mut v), b) => {
                v.push(b);
                Rx::Alt(v)
            }
            (a, Rx::Alt(mut w)) => {
                w.insert(0, a);
                Rx::Alt(w)
            }
            (a, b) => Rx::Alt(vec![a, b]),
        }
    }

    fn cat(a: Rx, b: Rx) -> Rx {
        if a.is_empty() || b.is_empty() {
            return Rx::empty();
        }
        match (a, b) {
            (Rx::Eps, b) => b,
            (a, Rx::Eps) => a,
            (a, b) => Rx::Cat(Rc::new(a), Rc::new(b)),
        }
    }

    fn star(a: Rx) -> Rx {
        if a.is_empty() || matches!(a, Rx::Eps) {
            return Rx::Eps;
        }
        Rx::Star(Rc::new(a))
    }

    fn nullable(&self) -> bool {
        match self {
            Rx::Eps | Rx::Star(_) => true,
            Rx::Tok(..) => false,
            Rx::Cat(a, b) => a.nullable() && b.nullable(),
            Rx::Alt(v) => v.iter().any(Rx::nullable),
        }
    }
}

/// Solves `X_i = Σ_j A[i][j]·X_j + B_i` by elimination with Arden's rule.
fn solve(mut a: Vec<Vec<Rx>>, mut b: Vec<Rx>) -> Vec<Rx> {
    let n = b.len();
    for k in 0..n {
        let loop_k = Rx::star(a[k][k].clone());
        for j in 0..n {
            if j != k {
                a[k][j] = Rx::cat(loop_k.clone(), a[k][j].clone());
            }
        }
        a[k][k] = Rx::empty();
        b[k] = Rx::cat(loop_k, b[k].clone());
        for i in 0..n {
            if i == k || a[i][k].is_empty() {
                continue;
            }
            let via = a[i][k].clone();
            for j in 0..n {
                if j != k && !a[k][j].is_empty() {
                    a[i][j] = Rx::alt(a[i][j].clone(), Rx::cat(via.clone(), a[k][j].clone()));
                }
            }
            b[i] = Rx::alt(b[i].clone(), Rx::cat(via, b[k].clone()));
            a[i][k] = Rx::empty();
        }
    }
    b
}

/// `prefix·L(r)` as a marked expression.
fn render(prefix: Expr, r: &Rx) -> Expr {
    if prefix.is_empty_set() {
        return prefix;
    }
    match r {
        Rx::Eps => prefix,
        Rx::Tok(c, b) => smart_cat(smart_cat(prefix, Expr::letter(*c)), b.clone()),
        Rx::Cat(x, y) => render(render(prefix, x), y),
        Rx::Alt(v) => v.iter().fold(Expr::empty(), |acc, x| {
            smart_union(acc, render(prefix.clone(), x))
        }),
        Rx::Star(x) => {
            let alts = first_tokens(x);
            if alts.is_empty() {
                return prefix;
            }
            let ops = Ops::new(&[]);
            ops.prefixed_star(prefix, &alts)
        }
    }
}

/// The nonempty words of `L(r)` as `Σσ σ·M_σ`, one entry per letter.
fn first_tokens(r: &Rx) -> Vec<(char, Expr)> {
    let raw = raw_first(r);
    let mut merged: Vec<(char, Expr)> = Vec::new();
    for (c, m) in raw {
        match merged.iter_mut().find(|(d, _)| *d == c) {
            Some((_, acc)) => *acc = smart_union(acc.clone(), m),
            None => merged.push((c, m)),
        }
    }
    merged
}

fn raw_first(r: &Rx) -> Vec<(char, Expr)> {
    match r {
        Rx::Eps => Vec::new(),
        Rx::Tok(c, b) => vec![(*c, b.clone())],
        Rx::Alt(v) => v.iter().flat_map(raw_first).collect(),
        Rx::Cat(x, y) => {
            let mut out: Vec<(char, Expr)> = raw_first(x)
                .into_iter()
                .map(|(c, m)| (c, render(m, y)))
                .collect();
            if x.nullable() {
                out.extend(raw_first(y));
            }
            out
        }
        Rx::Star(x) => raw_first(x)
            .into_iter()
            .map(|(c, m)| (c, render(m, r)))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{fixtures, registry};
    use crate::expr::FiniteMatcher;
    use crate::term::enumerate_finite_words;

    fn agrees(lang: &RecognizedLanguage, e: &Expr, n: usize) -> std::result::Result<(), String> {
        let m = FiniteMatcher::new(e);
        for w in enumerate_finite_words(&lang.alphabet, n) {
            if m.matches(&w) != lang.accepts_word(&w).unwrap() {
                return Err(w);
            }
        }
        Ok(())
    }

    #[test]
    fn first_letter_marked_star_free() {
        let lang = registry::first_letter();
        let e = synth_language(&lang, ExprClass::MarkedStarFree).unwrap();
        assert!(expr_class(&e).marked_star_free);
        assert_eq!(agrees(&lang, &e, 6), Ok(()));
    }

    #[test]
    fn even_a_marked() {
        let lang = registry::even_a();
        let e = synth_language(&lang, ExprClass::Marked).unwrap();
        assert!(expr_class(&e).marked);
        assert_eq!(agrees(&lang, &e, 6), Ok(()));
    }

    #[test]
    fn gap_power_free() {
        let lang = registry::has_gap();
        let e = synth_language(&lang, ExprClass::PowerFree).unwrap();
        assert!(expr_class(&e).power_free);
        assert_eq!(agrees(&lang, &e, 6), Ok(()));
    }

    #[test]
    fn denied_class_is_rejected() {
        let lang = registry::even_a();
        assert!(matches!(
            synth_language(&lang, ExprClass::MarkedStarFree),
            Err(Error::HypothesisUnsatisfied(_))
        ));
        assert!(matches!(
            synth_language(&registry::pd_language(), ExprClass::Scatter),
            Err(Error::HypothesisUnsatisfied(_))
        ));
    }

    #[test]
    fn every_element_of_every_granted_class() {
        for lang in [
            registry::first_letter(),
            registry::even_a(),
            registry::has_gap(),
            registry::no_b(),
        ] {
            let verdict = variety_membership(&lang.algebra);
            for class in granted_classes(&verdict) {
                let mut cx = SynthContext::new(&lang, class).unwrap();
                for a in lang.algebra.elements() {
                    let e = cx.words_eq(a).unwrap();
                    assert!(expr_class(&e).contains(class));
                    let single = lang.with_accepting(singleton(a));
                    assert_eq!(
                        agrees(&single, &e, 5),
                        Ok(()),
                        "{} {a} {class}",
                        lang.algebra.name()
                    );
                }
            }
        }
    }

    #[test]
    fn trivial_algebra() {
        let lang =
            RecognizedLanguage::from_names(fixtures::trivial(), &[('a', "1")], &["1"]).unwrap();
        let mut cx = SynthContext::new(&lang, ExprClass::MarkedStarFree).unwrap();
        let not_z = cx.words_not_z(0).unwrap();
        assert!(not_z.is_empty_set());
        let r = cx.words_eq_r(0).unwrap();
        assert_eq!(agrees(&lang, &r, 4), Ok(()));
        let r1 = FiniteMatcher::new(&cx.r_lang(0, 0).unwrap());
        assert!(r1.matches("") && r1.matches("aaa"));
    }

    #[test]
    fn limits_have_no_finite_words() {
        let lang = registry::has_gap();
        let zero = lang.algebra.elem("0").unwrap();
        let cci = lang.algebra.elem("cci").unwrap();
        let mut cx = SynthContext::new(&lang, ExprClass::PowerFree).unwrap();
        let e = cx.right_limit(zero, cci).unwrap();
        let m = FiniteMatcher::new(&e);
        assert!(enumerate_finite_words(&lang.alphabet, 5).all(|w| !m.matches(&w)));
        assert!(!cx.trace().is_empty());
    }

    #[test]
    fn arden_rendering() {
        // Words over {a} of even positive length as tokens `a·ε`.
        let ops = Ops::new(&['a']);
        let eps = ops.eps();
        let t = Rx::tok('a', eps.clone());
        let coef = vec![vec![Rx::empty(), t.clone()], vec![t, Rx::empty()]];
        let sol = solve(coef, vec![Rx::Eps, Rx::empty()]);
        let e = render(eps, &sol[0]);
        assert!(expr_class(&e).marked);
        let m = FiniteMatcher::new(&e);
        for n in 0..7 {
            assert_eq!(m.matches(&"a".repeat(n)), n % 2 == 0, "{n}");
        }
    }
}
