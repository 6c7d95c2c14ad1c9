//! Green's relations, eggbox layouts, idempotent kinds, J-class types and the
//! structural consistency checks that every valid o-algebra satisfies.

use std::fmt;

use serde::Serialize;

use crate::algebra::{members, singleton, subsets_of, Elem, OAlgebra, Subset};

/// One J-class laid out as R-class rows by L-class columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eggbox {
    pub members: Vec<Elem>,
    /// R-classes, each sorted, ordered by least element.
    pub rows: Vec<Vec<Elem>>,
    /// L-classes, each sorted, ordered by least element.
    pub cols: Vec<Vec<Elem>>,
    /// `cells[i][j]` is the H-class `rows[i] ∩ cols[j]`.
    pub cells: Vec<Vec<Vec<Elem>>>,
}

/// Green preorders and partitions of a finite monoid.
#[derive(Clone, Debug)]
pub struct GreenData {
    n: usize,
    le_r: Vec<bool>,
    le_l: Vec<bool>,
    le_j: Vec<bool>,
    r_class: Vec<usize>,
    l_class: Vec<usize>,
    j_class: Vec<usize>,
    h_class: Vec<usize>,
    jclasses: Vec<Eggbox>,
}

/// Numbers the classes of an equivalence by order of least member.
fn partition(n: usize, equiv: impl Fn(Elem, Elem) -> bool) -> Vec<usize> {
    let mut id = vec![usize::MAX; n];
    let mut next = 0;
    for a in 0..n {
        if id[a] == usize::MAX {
            for b in a..n {
                if id[b] == usize::MAX && equiv(a, b) {
                    id[b] = next;
                }
            }
            next += 1;
        }
    }
    id
}

fn classes(ids: &[usize], within: &[Elem]) -> Vec<Vec<Elem>> {
    let mut out: Vec<(usize, Vec<Elem>)> = Vec::new();
    for &a in within {
        match out.iter_mut().find(|(id, _)| *id == ids[a]) {
            Some((_, v)) => v.push(a),
            None => out.push((ids[a], vec![a])),
        }
    }
    out.into_iter().map(|(_, v)| v).collect()
}

impl GreenData {
    pub fn new(alg: &OAlgebra) -> Self {
        let n = alg.size();
        let mut le_r = vec![false; n * n];
        let mut le_l = vec![false; n * n];
        let mut le_j = vec![false; n * n];
        for b in 0..n {
            for x in 0..n {
                le_r[alg.mul(b, x) * n + b] = true;
                le_l[alg.mul(x, b) * n + b] = true;
                for y in 0..n {
                    le_j[alg.mul(alg.mul(x, b), y) * n + b] = true;
                }
            }
        }
        let r_class = partition(n, |a, b| le_r[a * n + b] && le_r[b * n + a]);
        let l_class = partition(n, |a, b| le_l[a * n + b] && le_l[b * n + a]);
        let j_class = partition(n, |a, b| le_j[a * n + b] && le_j[b * n + a]);
        let h_class = partition(n, |a, b| {
            r_class[a] == r_class[b] && l_class[a] == l_class[b]
        });
        let all: Vec<Elem> = (0..n).collect();
        let jclasses = classes(&j_class, &all)
            .into_iter()
            .map(|members| {
                let rows = classes(&r_class, &members);
                let cols = classes(&l_class, &members);
                let cells = rows
                    .iter()
                    .map(|row| {
                        cols.iter()
                            .map(|col| row.iter().copied().filter(|a| col.contains(a)).collect())
                            .collect()
                    })
                    .collect();
                Eggbox {
                    members,
                    rows,
                    cols,
                    cells,
                }
            })
            .collect();
        GreenData {
            n,
            le_r,
            le_l,
            le_j,
            r_class,
            l_class,
            j_class,
            h_class,
            jclasses,
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// `a ≤R b`: `a = b·x` for some `x`.
    pub fn le_r(&self, a: Elem, b: Elem) -> bool {
        self.le_r[a * self.n + b]
    }

    /// `a ≤L b`: `a = x·b` for some `x`.
    pub fn le_l(&self, a: Elem, b: Elem) -> bool {
        self.le_l[a * self.n + b]
    }

    /// `a ≤J b`: `a = x·b·y` for some `x, y`.
    pub fn le_j(&self, a: Elem, b: Elem) -> bool {
        self.le_j[a * self.n + b]
    }

    pub fn le_h(&self, a: Elem, b: Elem) -> bool {
        self.le_r(a, b) && self.le_l(a, b)
    }

    /// `a <J b`.
    pub fn lt_j(&self, a: Elem, b: Elem) -> bool {
        self.le_j(a, b) && !self.le_j(b, a)
    }

    pub fn r_equiv(&self, a: Elem, b: Elem) -> bool {
        self.r_class[a] == self.r_class[b]
    }

    pub fn l_equiv(&self, a: Elem, b: Elem) -> bool {
        self.l_class[a] == self.l_class[b]
    }

    pub fn j_equiv(&self, a: Elem, b: Elem) -> bool {
        self.j_class[a] == self.j_class[b]
    }

    pub fn h_equiv(&self, a: Elem, b: Elem) -> bool {
        self.h_class[a] == self.h_class[b]
    }

    pub fn r_class_id(&self, a: Elem) -> usize {
        self.r_class[a]
    }

    pub fn l_class_id(&self, a: Elem) -> usize {
        self.l_class[a]
    }

    pub fn h_class_id(&self, a: Elem) -> usize {
        self.h_class[a]
    }

    /// Index of the J-class of `a` in [`GreenData::jclasses`].
    pub fn j_class_id(&self, a: Elem) -> usize {
        self.j_class[a]
    }

    /// J-classes ordered by least element.
    pub fn jclasses(&self) -> &[Eggbox] {
        &self.jclasses
    }

    fn set_where(&self, pred: impl Fn(Elem) -> bool) -> Subset {
        (0..self.n)
            .filter(|&b| pred(b))
            .fold(0, |s, b| s | singleton(b))
    }

    pub fn j_set(&self, a: Elem) -> Subset {
        self.set_where(|b| self.j_equiv(a, b))
    }

    pub fn r_set(&self, a: Elem) -> Subset {
        self.set_where(|b| self.r_equiv(a, b))
    }

    pub fn l_set(&self, a: Elem) -> Subset {
        self.set_where(|b| self.l_equiv(a, b))
    }

    pub fn h_set(&self, a: Elem) -> Subset {
        self.set_where(|b| self.h_equiv(a, b))
    }

    /// `{b | b ≥J a}`.
    pub fn upward_closure(&self, a: Elem) -> Subset {
        self.set_where(|b| self.le_j(a, b))
    }
}

/// Computes Green's relations of `alg`.
pub fn green(alg: &OAlgebra) -> GreenData {
    GreenData::new(alg)
}

/// Upward J-closure `{b | b ≥J a}`.
pub fn upward_closure(alg: &OAlgebra, a: Elem) -> Subset {
    GreenData::new(alg).upward_closure(a)
}

// ---------------------------------------------------------------------------
// Eggbox rendering

fn cell_text(alg: &OAlgebra, cell: &[Elem]) -> String {
    cell.iter()
        .map(|&a| alg.elem_name(a))
        .collect::<Vec<_>>()
        .join(",")
}

/// Draws a J-class as a box grid, one H-class per box.
pub fn render_eggbox(alg: &OAlgebra, egg: &Eggbox) -> String {
    let texts: Vec<Vec<String>> = egg
        .cells
        .iter()
        .map(|row| row.iter().map(|c| cell_text(alg, c)).collect())
        .collect();
    let widths: Vec<usize> = (0..egg.cols.len())
        .map(|j| {
            texts
                .iter()
                .map(|r| r[j].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let border: String = widths.iter().fold("+".to_string(), |mut s, &w| {
        s.push_str(&"-".repeat(w + 2));
        s.push('+');
        s
    });
    let mut out = border.clone();
    out.push('\n');
    for row in &texts {
        out.push('|');
        for (t, &w) in row.iter().zip(&widths) {
            out.push_str(&format!(" {t:<w$} |"));
        }
        out.push('\n');
        out.push_str(&border);
        out.push('\n');
    }
    out
}

/// Nested arrays of element names: rows, then cells, then members.
pub fn eggbox_json(alg: &OAlgebra, egg: &Eggbox) -> serde_json::Value {
    serde_json::Value::from(
        egg.cells
            .iter()
            .map(|row| {
                serde_json::Value::from(
                    row.iter()
                        .map(|c| {
                            serde_json::Value::from(
                                c.iter().map(|&a| alg.elem_name(a)).collect::<Vec<_>>(),
                            )
                        })
                        .collect::<Vec<_>>(),
                )
            })
            .collect::<Vec<_>>(),
    )
}

// ---------------------------------------------------------------------------
// Idempotent kinds

/// Kinds of one element. Every kind other than `idempotent` implies it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Kinds {
    pub idempotent: bool,
    pub gap_insensitive: bool,
    pub ordinal: bool,
    pub ordinal_star: bool,
    pub scattered: bool,
    pub shuffle: bool,
    pub shuffle_simple: bool,
    /// `{a | e·a·e = e}`, empty for non-idempotents.
    pub k_max: Subset,
}

/// Per-element idempotent kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentKinds {
    pub kinds: Vec<Kinds>,
}

impl IdempotentKinds {
    pub fn of(&self, a: Elem) -> &Kinds {
        &self.kinds[a]
    }
}

pub fn classify_idempotents(alg: &OAlgebra) -> IdempotentKinds {
    let kinds = alg
        .elements()
        .map(|e| {
            if !alg.is_idempotent(e) {
                return Kinds::default();
            }
            let ordinal = alg.omega(e) == e;
            let ordinal_star = alg.omegastar(e) == e;
            let shuffle = alg.shuffle(singleton(e)) == e;
            let k_max = alg
                .elements()
                .filter(|&a| alg.mul(alg.mul(e, a), e) == e)
                .fold(0, |s, a| s | singleton(a));
            let shuffle_simple = subsets_of(k_max).all(|k| alg.shuffle(k | singleton(e)) == e);
            Kinds {
                idempotent: true,
                gap_insensitive: alg.mul(alg.omega(e), alg.omegastar(e)) == e,
                ordinal,
                ordinal_star,
                scattered: ordinal && ordinal_star,
                shuffle,
                shuffle_simple,
                k_max,
            }
        })
        .collect();
    IdempotentKinds { kinds }
}

/// The seven J-class types. Each field holds the least idempotent of that
/// kind in the class, if any.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct JClassFlags {
    pub members: Vec<Elem>,
    pub regular: Option<Elem>,
    pub ordinal_regular: Option<Elem>,
    pub ordinalstar_regular: Option<Elem>,
    pub gap_insensitive_regular: Option<Elem>,
    pub scattered_regular: Option<Elem>,
    pub shuffle_regular: Option<Elem>,
    pub shuffle_simple_regular: Option<Elem>,
}

impl JClassFlags {
    /// Flag names paired with their witnesses, in a fixed order.
    pub fn entries(&self) -> [(&'static str, Option<Elem>); 7] {
        [
            ("regular", self.regular),
            ("ordinal_regular", self.ordinal_regular),
            ("ordinalstar_regular", self.ordinalstar_regular),
            ("gap_insensitive_regular", self.gap_insensitive_regular),
            ("scattered_regular", self.scattered_regular),
            ("shuffle_regular", self.shuffle_regular),
            ("shuffle_simple_regular", self.shuffle_simple_regular),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JClassReport {
    pub classes: Vec<JClassFlags>,
}

pub fn classify_jclasses(alg: &OAlgebra) -> JClassReport {
    let g = GreenData::new(alg);
    let kinds = classify_idempotents(alg);
    jclass_report(&g, &kinds)
}

pub fn jclass_report(g: &GreenData, kinds: &IdempotentKinds) -> JClassReport {
    let classes = g
        .jclasses()
        .iter()
        .map(|egg| {
            let first =
                |pred: fn(&Kinds) -> bool| egg.members.iter().copied().find(|&e| pred(kinds.of(e)));
            JClassFlags {
                members: egg.members.clone(),
                regular: first(|k| k.idempotent),
                ordinal_regular: first(|k| k.ordinal),
                ordinalstar_regular: first(|k| k.ordinal_star),
                gap_insensitive_regular: first(|k| k.gap_insensitive),
                scattered_regular: first(|k| k.scattered),
                shuffle_regular: first(|k| k.shuffle),
                shuffle_simple_regular: first(|k| k.shuffle_simple),
            }
        })
        .collect();
    JClassReport { classes }
}

// ---------------------------------------------------------------------------
// Structure checks

/// A structural property that failed. None of these fire on a valid algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum StructureViolation {
    /// Idempotents `e ≡J f` with `ω(e)`, `ω(f)` not L-equivalent.
    OmegaNotL { e: Elem, f: Elem },
    /// Idempotents `e ≡J f` with `ω*(e)`, `ω*(f)` not R-equivalent.
    OmegaStarNotR { e: Elem, f: Elem },
    /// `ω(e) ≡J e` or `ω*(e) ≡J e` but `J(e)` has an H-class with two elements.
    NontrivialH { e: Elem, a: Elem, b: Elem },
    /// `sh(S) ≡J sh(R)` with different values.
    ShuffleNotUnique { s: Subset, r: Subset },
    /// A J-class that is gap insensitive regular but not scattered regular,
    /// or the reverse.
    GapInsensitiveVsScattered { class: usize },
    /// Two scattered idempotents in one J-class.
    TwoScattered { e: Elem, f: Elem },
    /// `a ≤R b` and `a ≡J b` without `a ≡R b` (or the L version).
    NotStable { a: Elem, b: Elem },
    /// A regular J-class with an R- or L-class free of idempotents.
    IdempotentFreeLine { class: usize },
}

pub fn structure_check(alg: &OAlgebra) -> Vec<StructureViolation> {
    use StructureViolation::*;
    let g = GreenData::new(alg);
    let kinds = classify_idempotents(alg);
    let report = jclass_report(&g, &kinds);
    let n = alg.size();
    let mut out = Vec::new();
    let idem: Vec<Elem> = alg.elements().filter(|&e| kinds.of(e).idempotent).collect();

    for &e in &idem {
        for &f in &idem {
            if e < f && g.j_equiv(e, f) {
                if !g.l_equiv(alg.omega(e), alg.omega(f)) {
                    out.push(OmegaNotL { e, f });
                }
                if !g.r_equiv(alg.omegastar(e), alg.omegastar(f)) {
                    out.push(OmegaStarNotR { e, f });
                }
            }
        }
        if g.j_equiv(alg.omega(e), e) || g.j_equiv(alg.omegastar(e), e) {
            let class = &g.jclasses()[g.j_class_id(e)];
            for row in &class.cells {
                for cell in row {
                    if cell.len() > 1 {
                        out.push(NontrivialH {
                            e,
                            a: cell[0],
                            b: cell[1],
                        });
                    }
                }
            }
        }
    }

    // sh is determined by its image on each J-class.
    let mut seen: Vec<Option<(Subset, Elem)>> = vec![None; g.jclasses().len()];
    for s in 1..=alg.carrier() {
        let v = alg.shuffle(s);
        let slot = &mut seen[g.j_class_id(v)];
        match *slot {
            None => *slot = Some((s, v)),
            Some((r, w)) if w != v => out.push(ShuffleNotUnique { s: r, r: s }),
            _ => {}
        }
    }

    for (class, flags) in report.classes.iter().enumerate() {
        if flags.gap_insensitive_regular.is_some() != flags.scattered_regular.is_some() {
            out.push(GapInsensitiveVsScattered { class });
        }
        let scattered: Vec<Elem> = flags
            .members
            .iter()
            .copied()
            .filter(|&e| kinds.of(e).scattered)
            .collect();
        if scattered.len() > 1 {
            out.push(TwoScattered {
                e: scattered[0],
                f: scattered[1],
            });
        }
        if flags.regular.is_some() {
            let egg = &g.jclasses()[class];
            let has_idem = |line: &Vec<Elem>| line.iter().any(|&a| kinds.of(a).idempotent);
            if !egg.rows.iter().all(has_idem) || !egg.cols.iter().all(has_idem) {
                out.push(IdempotentFreeLine { class });
            }
        }
    }

    for a in 0..n {
        for b in 0..n {
            if g.j_equiv(a, b)
                && ((g.le_r(a, b) && !g.r_equiv(a, b)) || (g.le_l(a, b) && !g.l_equiv(a, b)))
            {
                out.push(NotStable { a, b });
            }
        }
    }
    out
}

impl fmt::Display for StructureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Members of a subset as a vector.
pub fn set_elems(set: Subset) -> Vec<Elem> {
    members(set).collect()
}
