//! Finite o-algebras: carrier, tables, axiom validation and the implicit
//! operations obtained by iterating the derived operations to a fixpoint.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an element in the carrier.
pub type Elem = usize;
/// Subset of the carrier as a bitmask over element indices.
pub type Subset = u32;

/// Largest supported carrier. The shuffle table has `2^n` entries.
pub const MAX_SIZE: usize = 16;

/// Iterates the members of a subset in increasing index order.
pub fn members(set: Subset) -> impl Iterator<Item = Elem> {
    let mut rest = set;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let e = rest.trailing_zeros() as Elem;
            rest &= rest - 1;
            Some(e)
        }
    })
}

/// Iterates all subsets of `set`, starting with the empty set.
pub fn subsets_of(set: Subset) -> impl Iterator<Item = Subset> {
    let mut next = Some(0u32);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == set {
            None
        } else {
            Some((cur.wrapping_sub(set)) & set)
        };
        Some(cur)
    })
}

pub fn singleton(e: Elem) -> Subset {
    1 << e
}

/// A finite o-algebra `(M, 1, ·, ω, ω*, sh)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OAlgebra {
    name: String,
    names: Vec<String>,
    unit: Elem,
    product: Vec<Elem>,
    omega: Vec<Elem>,
    omegastar: Vec<Elem>,
    /// Indexed by subset mask; entry 0 is unused.
    shuffle: Vec<Elem>,
}

impl OAlgebra {
    /// Builds an algebra from total tables, checking only that every entry is
    /// in range. Use [`OAlgebra::validate`] for the axioms.
    pub fn new(
        name: impl Into<String>,
        names: Vec<String>,
        unit: Elem,
        product: Vec<Vec<Elem>>,
        omega: Vec<Elem>,
        omegastar: Vec<Elem>,
        shuffle: Vec<Elem>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 || n > MAX_SIZE {
            return Err(Error::Structural(format!(
                "carrier size {n} outside 1..={MAX_SIZE}"
            )));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::Structural(format!("duplicate element name '{a}'")));
            }
        }
        let check = |what: &str, v: Elem| {
            if v < n {
                Ok(())
            } else {
                Err(Error::Structural(format!("{what} entry {v} out of range")))
            }
        };
        check("unit", unit)?;
        if product.len() != n || product.iter().any(|row| row.len() != n) {
            return Err(Error::Structural(format!("product table must be {n}x{n}")));
        }
        let product: Vec<Elem> = product.into_iter().flatten().collect();
        for &v in &product {
            check("product", v)?;
        }
        if omega.len() != n || omegastar.len() != n {
            return Err(Error::Structural(format!(
                "omega and omegastar tables must have {n} entries"
            )));
        }
        for &v in omega.iter().chain(&omegastar) {
            check("omega", v)?;
        }
        if shuffle.len() != 1 << n {
            return Err(Error::Structural(format!(
                "shuffle table must have {} entries",
                1usize << n
            )));
        }
        for &v in &shuffle[1..] {
            check("shuffle", v)?;
        }
        Ok(OAlgebra {
            name: name.into(),
            names,
            unit,
            product,
            omega,
            omegastar,
            shuffle,
        })
    }

    /// Like [`OAlgebra::new`] with the shuffle map given as a function on
    /// nonempty subsets.
    pub fn from_fn(
        name: impl Into<String>,
        names: &[&str],
        unit: Elem,
        product: Vec<Vec<Elem>>,
        omega: Vec<Elem>,
        omegastar: Vec<Elem>,
        shuffle: impl Fn(Subset) -> Elem,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 || n > MAX_SIZE {
            return Err(Error::Structural(format!(
                "carrier size {n} outside 1..={MAX_SIZE}"
            )));
        }
        let mut table = vec![unit; 1 << n];
        for (set, slot) in table.iter_mut().enumerate().skip(1) {
            *slot = shuffle(set as Subset);
        }
        OAlgebra::new(
            name,
            names.iter().map(|s| s.to_string()).collect(),
            unit,
            product,
            omega,
            omegastar,
            table,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn unit(&self) -> Elem {
        self.unit
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elem_name(&self, a: Elem) -> &str {
        &self.names[a]
    }

    pub fn elem(&self, name: &str) -> Result<Elem> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size()
    }

    /// The full carrier as a subset.
    pub fn carrier(&self) -> Subset {
        ((1u64 << self.size()) - 1) as Subset
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.product[a * self.size() + b]
    }

    pub fn omega(&self, a: Elem) -> Elem {
        self.omega[a]
    }

    pub fn omegastar(&self, a: Elem) -> Elem {
        self.omegastar[a]
    }

    /// Shuffle power of a nonempty subset.
    pub fn shuffle(&self, set: Subset) -> Elem {
        assert!(set != 0, "shuffle of the empty set");
        self.shuffle[set as usize]
    }

    /// Product of a finite sequence, folded left; the empty sequence maps to 1.
    pub fn product_word(&self, seq: &[Elem]) -> Elem {
        seq.iter().fold(self.unit, |acc, &x| self.mul(acc, x))
    }

    pub fn pow(&self, a: Elem, n: usize) -> Elem {
        (0..n).fold(self.unit, |acc, _| self.mul(acc, a))
    }

    pub fn is_idempotent(&self, a: Elem) -> bool {
        self.mul(a, a) == a
    }

    pub fn format_set(&self, set: Subset) -> String {
        let items: Vec<&str> = members(set).map(|e| self.elem_name(e)).collect();
        format!("{{{}}}", items.join(","))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Returns a copy with one product entry replaced.
    pub fn with_product(&self, a: Elem, b: Elem, v: Elem) -> Result<Self> {
        self.patched(
            |m| {
                let n = m.size();
                m.product[a * n + b] = v;
            },
            v,
        )
    }

    pub fn with_omega(&self, a: Elem, v: Elem) -> Result<Self> {
        self.patched(|m| m.omega[a] = v, v)
    }

    pub fn with_omegastar(&self, a: Elem, v: Elem) -> Result<Self> {
        self.patched(|m| m.omegastar[a] = v, v)
    }

    pub fn with_shuffle(&self, set: Subset, v: Elem) -> Result<Self> {
        if set == 0 || set > self.carrier() {
            return Err(Error::Structural(format!("invalid subset mask {set}")));
        }
        self.patched(|m| m.shuffle[set as usize] = v, v)
    }

    fn patched(&self, f: impl FnOnce(&mut OAlgebra), v: Elem) -> Result<Self> {
        if v >= self.size() {
            return Err(Error::Structural(format!("entry {v} out of range")));
        }
        let mut m = self.clone();
        f(&mut m);
        Ok(m)
    }

    /// Applies a bijection `perm` (old index to new index) to the carrier.
    pub fn permuted(&self, perm: &[Elem]) -> Self {
        let n = self.size();
        let mut inv = vec![0; n];
        for (old, &new) in perm.iter().enumerate() {
            inv[new] = old;
        }
        let map_set =
            |set: Subset| -> Subset { members(set).fold(0, |acc, e| acc | singleton(perm[e])) };
        let names = (0..n).map(|i| self.names[inv[i]].clone()).collect();
        let product = (0..n)
            .map(|i| (0..n).map(|j| perm[self.mul(inv[i], inv[j])]).collect())
            .collect();
        let omega = (0..n).map(|i| perm[self.omega(inv[i])]).collect();
        let omegastar = (0..n).map(|i| perm[self.omegastar(inv[i])]).collect();
        let mut shuffle = vec![perm[self.unit]; 1 << n];
        for set in 1..(1u32 << n) {
            shuffle[map_set(set) as usize] = perm[self.shuffle(set)];
        }
        OAlgebra::new(
            self.name.clone(),
            names,
            perm[self.unit],
            product,
            omega,
            omegastar,
            shuffle,
        )
        .expect("permutation preserves structure")
    }
}

/// One instance of an axiom identity. Each variant reads `lhs = rhs` with the
/// listed witnesses; the derived order is the reporting order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Identity {
    /// `1·a = a`
    UnitLeft { a: Elem },
    /// `a·1 = a`
    UnitRight { a: Elem },
    /// `(a·b)·c = a·(b·c)`
    Assoc { a: Elem, b: Elem, c: Elem },
    /// `ω(a) = a·ω(a)`
    OmegaUnfold { a: Elem },
    /// `ω(a·b) = a·ω(b·a)`
    OmegaShift { a: Elem, b: Elem },
    /// `ω(aⁿ) = ω(a)`
    OmegaPower { a: Elem, n: usize },
    /// `ω*(a) = ω*(a)·a`
    OmegaStarUnfold { a: Elem },
    /// `ω*(a·b) = ω*(b·a)·b`
    OmegaStarShift { a: Elem, b: Elem },
    /// `ω*(aⁿ) = ω*(a)`
    OmegaStarPower { a: Elem, n: usize },
    /// `sh(P) = sh(P)·sh(P)`
    ShuffleSquare { p: Subset },
    /// `sh(P) = sh(P)·c·sh(P)` for `c ∈ P`
    ShuffleSandwich { p: Subset, c: Elem },
    /// `sh(P) = ω(sh(P))`
    ShuffleOmega { p: Subset },
    /// `sh(P) = ω(sh(P)·c)` for `c ∈ P`
    ShuffleOmegaRight { p: Subset, c: Elem },
    /// `sh(P) = ω*(sh(P))`
    ShuffleOmegaStar { p: Subset },
    /// `sh(P) = ω*(c·sh(P))` for `c ∈ P`
    ShuffleOmegaStarLeft { p: Subset, c: Elem },
    /// `sh(P) = sh(P' ∪ P'')` for `P' ⊆ P` and nonempty `P'' ⊆ E(P)`
    ShuffleUnion { p: Subset, p1: Subset, p2: Subset },
    /// `1 = ω(1)`
    UnitOmega,
    /// `1 = ω*(1)`
    UnitOmegaStar,
    /// `1 = sh({1})`
    UnitShuffle,
    /// `sh(P) = sh(P ∪ {1})`
    ShuffleUnit { p: Subset },
}

impl Identity {
    /// Axiom family, 1 to 5.
    pub fn axiom(&self) -> u8 {
        use Identity::*;
        match self {
            UnitLeft { .. } | UnitRight { .. } | Assoc { .. } => 1,
            OmegaUnfold { .. } | OmegaShift { .. } | OmegaPower { .. } => 2,
            OmegaStarUnfold { .. } | OmegaStarShift { .. } | OmegaStarPower { .. } => 3,
            ShuffleSquare { .. }
            | ShuffleSandwich { .. }
            | ShuffleOmega { .. }
            | ShuffleOmegaRight { .. }
            | ShuffleOmegaStar { .. }
            | ShuffleOmegaStarLeft { .. }
            | ShuffleUnion { .. } => 4,
            UnitOmega | UnitOmegaStar | UnitShuffle | ShuffleUnit { .. } => 5,
        }
    }

    /// Short identifier of the identity within its axiom family.
    pub fn label(&self) -> &'static str {
        use Identity::*;
        match self {
            UnitLeft { .. } => "1a=a",
            UnitRight { .. } => "a1=a",
            Assoc { .. } => "(ab)c=a(bc)",
            OmegaUnfold { .. } => "w(a)=a.w(a)",
            OmegaShift { .. } => "w(ab)=a.w(ba)",
            OmegaPower { .. } => "w(a^n)=w(a)",
            OmegaStarUnfold { .. } => "w*(a)=w*(a).a",
            OmegaStarShift { .. } => "w*(ab)=w*(ba).b",
            OmegaStarPower { .. } => "w*(a^n)=w*(a)",
            ShuffleSquare { .. } => "sh(P)=sh(P)sh(P)",
            ShuffleSandwich { .. } => "sh(P)=sh(P).c.sh(P)",
            ShuffleOmega { .. } => "sh(P)=w(sh(P))",
            ShuffleOmegaRight { .. } => "sh(P)=w(sh(P).c)",
            ShuffleOmegaStar { .. } => "sh(P)=w*(sh(P))",
            ShuffleOmegaStarLeft { .. } => "sh(P)=w*(c.sh(P))",
            ShuffleUnion { .. } => "sh(P)=sh(P'+P'')",
            UnitOmega => "1=w(1)",
            UnitOmegaStar => "1=w*(1)",
            UnitShuffle => "1=sh({1})",
            ShuffleUnit { .. } => "sh(P)=sh(P+{1})",
        }
    }

    /// Evaluates both sides of the identity in `alg`.
    pub fn sides(&self, alg: &OAlgebra) -> (Elem, Elem) {
        use Identity::*;
        let m = |a, b| alg.mul(a, b);
        let one = alg.unit();
        match *self {
            UnitLeft { a } => (m(one, a), a),
            UnitRight { a } => (m(a, one), a),
            Assoc { a, b, c } => (m(m(a, b), c), m(a, m(b, c))),
            OmegaUnfold { a } => (alg.omega(a), m(a, alg.omega(a))),
            OmegaShift { a, b } => (alg.omega(m(a, b)), m(a, alg.omega(m(b, a)))),
            OmegaPower { a, n } => (alg.omega(alg.pow(a, n)), alg.omega(a)),
            OmegaStarUnfold { a } => (alg.omegastar(a), m(alg.omegastar(a), a)),
            OmegaStarShift { a, b } => (alg.omegastar(m(a, b)), m(alg.omegastar(m(b, a)), b)),
            OmegaStarPower { a, n } => (alg.omegastar(alg.pow(a, n)), alg.omegastar(a)),
            ShuffleSquare { p } => {
                let s = alg.shuffle(p);
                (s, m(s, s))
            }
            ShuffleSandwich { p, c } => {
                let s = alg.shuffle(p);
                (s, m(m(s, c), s))
            }
            ShuffleOmega { p } => {
                let s = alg.shuffle(p);
                (s, alg.omega(s))
            }
            ShuffleOmegaRight { p, c } => {
                let s = alg.shuffle(p);
                (s, alg.omega(m(s, c)))
            }
            ShuffleOmegaStar { p } => {
                let s = alg.shuffle(p);
                (s, alg.omegastar(s))
            }
            ShuffleOmegaStarLeft { p, c } => {
                let s = alg.shuffle(p);
                (s, alg.omegastar(m(c, s)))
            }
            ShuffleUnion { p, p1, p2 } => (alg.shuffle(p), alg.shuffle(p1 | p2)),
            UnitOmega => (one, alg.omega(one)),
            UnitOmegaStar => (one, alg.omegastar(one)),
            UnitShuffle => (one, alg.shuffle(singleton(one))),
            ShuffleUnit { p } => (alg.shuffle(p), alg.shuffle(p | singleton(one))),
        }
    }

    pub fn describe(&self, alg: &OAlgebra) -> String {
        use Identity::*;
        let e = |x: Elem| alg.elem_name(x).to_string();
        let s = |x: Subset| alg.format_set(x);
        let args = match *self {
            UnitLeft { a } | UnitRight { a } | OmegaUnfold { a } | OmegaStarUnfold { a } => {
                format!("a={}", e(a))
            }
            Assoc { a, b, c } => format!("a={} b={} c={}", e(a), e(b), e(c)),
            OmegaShift { a, b } | OmegaStarShift { a, b } => format!("a={} b={}", e(a), e(b)),
            OmegaPower { a, n } | OmegaStarPower { a, n } => format!("a={} n={n}", e(a)),
            ShuffleSquare { p }
            | ShuffleOmega { p }
            | ShuffleOmegaStar { p }
            | ShuffleUnit { p } => format!("P={}", s(p)),
            ShuffleSandwich { p, c }
            | ShuffleOmegaRight { p, c }
            | ShuffleOmegaStarLeft { p, c } => format!("P={} c={}", s(p), e(c)),
            ShuffleUnion { p, p1, p2 } => format!("P={} P'={} P''={}", s(p), s(p1), s(p2)),
            UnitOmega | UnitOmegaStar | UnitShuffle => String::new(),
        };
        format!("axiom {} [{}] {}", self.axiom(), self.label(), args)
            .trim_end()
            .to_string()
    }
}

/// A failing axiom instance: `expected` is the left side, `actual` the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct AxiomViolation {
    pub identity: Identity,
    pub expected: Elem,
    pub actual: Elem,
}

impl AxiomViolation {
    pub fn axiom(&self) -> u8 {
        self.identity.axiom()
    }

    /// True if evaluating the witness in `alg` reproduces this mismatch.
    pub fn replays(&self, alg: &OAlgebra) -> bool {
        let (l, r) = self.identity.sides(alg);
        l == self.expected && r == self.actual && l != r
    }

    pub fn describe(&self, alg: &OAlgebra) -> String {
        format!(
            "{}: expected {}, got {}",
            self.identity.describe(alg),
            alg.elem_name(self.expected),
            alg.elem_name(self.actual)
        )
    }
}

impl OAlgebra {
    /// Checks every axiom instance and returns the failing ones in
    /// identity order.
    pub fn validate(&self) -> Vec<AxiomViolation> {
        let mut out = Vec::new();
        self.scan(&mut |v| {
            out.push(v);
            true
        });
        out.sort();
        out
    }

    /// True if no axiom instance fails. Stops at the first failure.
    pub fn is_valid(&self) -> bool {
        let mut ok = true;
        self.scan(&mut |_| {
            ok = false;
            false
        });
        ok
    }

    /// Runs every identity, calling `sink` on failures. Stops when `sink`
    /// returns false.
    fn scan(&self, sink: &mut dyn FnMut(AxiomViolation) -> bool) {
        let n = self.size();
        let mut check = |id: Identity| -> bool {
            let (l, r) = id.sides(self);
            if l != r {
                sink(AxiomViolation {
                    identity: id,
                    expected: l,
                    actual: r,
                })
            } else {
                true
            }
        };
        macro_rules! run {
            ($id:expr) => {
                if !check($id) {
                    return;
                }
            };
        }
        use Identity::*;

        run!(UnitOmega);
        run!(UnitOmegaStar);
        run!(UnitShuffle);
        for a in 0..n {
            run!(UnitLeft { a });
            run!(UnitRight { a });
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    run!(Assoc { a, b, c });
                }
            }
        }
        for a in 0..n {
            run!(OmegaUnfold { a });
            run!(OmegaStarUnfold { a });
            for b in 0..n {
                run!(OmegaShift { a, b });
                run!(OmegaStarShift { a, b });
            }
            for k in 1..=n {
                run!(OmegaPower { a, n: k });
                run!(OmegaStarPower { a, n: k });
            }
        }

        let full = self.carrier();
        let mut stamp = vec![0u32; 1 << n];
        for p in 1..=full {
            run!(ShuffleUnit { p });
            run!(ShuffleSquare { p });
            run!(ShuffleOmega { p });
            run!(ShuffleOmegaStar { p });
            for c in members(p) {
                run!(ShuffleSandwich { p, c });
                run!(ShuffleOmegaRight { p, c });
                run!(ShuffleOmegaStarLeft { p, c });
            }
            let s = self.shuffle(p);
            let mut e_set = singleton(s);
            for a in members(p) {
                e_set |= singleton(self.mul(a, s)) | singleton(self.mul(s, a));
                for b in members(p) {
                    e_set |= singleton(self.mul(self.mul(a, s), b));
                }
            }
            // Only the union matters, so each resulting set is checked once.
            for p2 in subsets_of(e_set).skip(1) {
                for p1 in subsets_of(p) {
                    let q = (p1 | p2) as usize;
                    if stamp[q] != p {
                        stamp[q] = p;
                        run!(ShuffleUnion { p, p1, p2 });
                    }
                }
            }
        }
    }
}

impl fmt::Display for OAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.size();
        let w = self
            .names
            .iter()
            .map(|s| s.chars().count())
            .max()
            .unwrap_or(1);
        writeln!(
            f,
            "algebra {} ({} elements, unit {})",
            self.name,
            n,
            self.elem_name(self.unit)
        )?;
        write!(f, "{:>w$} |", "·")?;
        for b in 0..n {
            write!(f, " {:>w$}", self.names[b])?;
        }
        writeln!(f)?;
        for a in 0..n {
            write!(f, "{:>w$} |", self.names[a])?;
            for b in 0..n {
                write!(f, " {:>w$}", self.names[self.mul(a, b)])?;
            }
            writeln!(f)?;
        }
        for a in 0..n {
            writeln!(
                f,
                "ω({a}) = {o}   ω*({a}) = {s}",
                a = self.names[a],
                o = self.names[self.omega(a)],
                s = self.names[self.omegastar(a)]
            )?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Implicit operations

impl OAlgebra {
    fn cap(&self) -> usize {
        self.size() + 1
    }

    fn diverged(&self, op: &'static str, start: Elem) -> Error {
        Error::NonConvergence {
            op,
            start: self.elem_name(start).to_string(),
            cap: self.cap(),
        }
    }

    /// The idempotent among the powers `a, a², …, a^|M|`.
    pub fn idempotent_power(&self, a: Elem) -> Result<Elem> {
        let mut x = a;
        for _ in 0..self.size() {
            if self.is_idempotent(x) {
                return Ok(x);
            }
            x = self.mul(x, a);
        }
        Err(self.diverged("idempotent_power", a))
    }

    /// Least `k ≥ 1` such that `a^k` is idempotent.
    pub fn idempotent_exponent(&self, a: Elem) -> Result<usize> {
        let mut x = a;
        for k in 1..=self.size() {
            if self.is_idempotent(x) {
                return Ok(k);
            }
            x = self.mul(x, a);
        }
        Err(self.diverged("idempotent_exponent", a))
    }

    fn fixpoint(&self, op: &'static str, a: Elem, step: impl Fn(Elem) -> Elem) -> Result<Elem> {
        let mut x = a;
        for _ in 0..self.cap() {
            let y = step(x);
            if y == x {
                return Ok(x);
            }
            x = y;
        }
        Err(self.diverged(op, a))
    }

    /// Iterates `ω` from `a` to a fixpoint.
    pub fn ordinal_power(&self, a: Elem) -> Result<Elem> {
        self.fixpoint("ordinal_power", a, |x| self.omega(x))
    }

    /// Iterates `ω*` from `a` to a fixpoint.
    pub fn ordinalstar_power(&self, a: Elem) -> Result<Elem> {
        self.fixpoint("ordinalstar_power", a, |x| self.omegastar(x))
    }

    /// Iterates `x ↦ ω*(x)·ω(x)` from `a` to a fixpoint.
    pub fn scattered_power(&self, a: Elem) -> Result<Elem> {
        self.fixpoint("scattered_power", a, |x| {
            self.mul(self.omegastar(x), self.omega(x))
        })
    }

    /// Iterates `e ↦ sh({g·a₁·g·…·aₖ·g})` with `g = ω*(e)·ω(e)` to a
    /// fixpoint. With an empty context the shuffled element is `g` itself.
    pub fn shuffle_limit(&self, e: Elem, ctx: &[Elem]) -> Result<Elem> {
        self.fixpoint("shuffle_limit", e, |x| {
            let g = self.mul(self.omegastar(x), self.omega(x));
            let f = ctx.iter().fold(g, |acc, &a| self.mul(self.mul(acc, a), g));
            self.shuffle(singleton(f))
        })
    }
}

// ---------------------------------------------------------------------------
// JSON documents

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShuffleEntry {
    pub set: Vec<String>,
    pub value: String,
}

/// The JSON form of an algebra. Element references are by name.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub name: String,
    pub elements: Vec<String>,
    pub unit: String,
    pub product: Vec<Vec<String>>,
    pub omega: BTreeMap<String, String>,
    pub omegastar: BTreeMap<String, String>,
    pub shuffle: Vec<ShuffleEntry>,
}

impl OAlgebra {
    /// JSON form listing only the shuffle entries of unit-free subsets.
    pub fn to_doc(&self) -> AlgebraDoc {
        let name = |a: Elem| self.names[a].clone();
        let n = self.size();
        let unit_bit = singleton(self.unit);
        let shuffle = (1..=self.carrier())
            .filter(|&set| set & unit_bit == 0)
            .map(|set| ShuffleEntry {
                set: members(set).map(name).collect(),
                value: name(self.shuffle(set)),
            })
            .collect();
        AlgebraDoc {
            name: self.name.clone(),
            elements: self.names.clone(),
            unit: name(self.unit),
            product: (0..n)
                .map(|a| (0..n).map(|b| name(self.mul(a, b))).collect())
                .collect(),
            omega: (0..n).map(|a| (name(a), name(self.omega(a)))).collect(),
            omegastar: (0..n).map(|a| (name(a), name(self.omegastar(a)))).collect(),
            shuffle,
        }
    }

    /// Loads an algebra from its JSON form. Subsets containing the unit may
    /// be omitted; their values are derived from the unit-free part.
    pub fn from_doc(doc: &AlgebraDoc) -> Result<Self> {
        let n = doc.elements.len();
        if n == 0 || n > MAX_SIZE {
            return Err(Error::Structural(format!(
                "carrier size {n} outside 1..={MAX_SIZE}"
            )));
        }
        let idx = |s: &str| -> Result<Elem> {
            doc.elements
                .iter()
                .position(|e| e == s)
                .ok_or_else(|| Error::UnknownElement(s.to_string()))
        };
        let unit = idx(&doc.unit)?;
        let product = doc
            .product
            .iter()
            .map(|row| row.iter().map(|s| idx(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let unary = |map: &BTreeMap<String, String>, what: &str| -> Result<Vec<Elem>> {
            let mut out = vec![None; n];
            for (k, v) in map {
                out[idx(k)?] = Some(idx(v)?);
            }
            out.into_iter()
                .enumerate()
                .map(|(i, v)| {
                    v.ok_or_else(|| {
                        Error::Structural(format!("{what} missing entry for {}", doc.elements[i]))
                    })
                })
                .collect()
        };
        let omega = unary(&doc.omega, "omega")?;
        let omegastar = unary(&doc.omegastar, "omegastar")?;

        let mut given: Vec<Option<Elem>> = vec![None; 1 << n];
        for entry in &doc.shuffle {
            let mut set: Subset = 0;
            for s in &entry.set {
                set |= singleton(idx(s)?);
            }
            if set == 0 {
                return Err(Error::Structural("shuffle entry for the empty set".into()));
            }
            if given[set as usize].is_some() {
                return Err(Error::Structural(format!(
                    "duplicate shuffle entry for {{{}}}",
                    entry.set.join(",")
                )));
            }
            given[set as usize] = Some(idx(&entry.value)?);
        }
        let unit_bit = singleton(unit);
        let mut shuffle = vec![unit; 1 << n];
        for set in 1..(1u32 << n) {
            let derived = if set == unit_bit {
                Some(unit)
            } else if set & unit_bit != 0 {
                given[(set & !unit_bit) as usize]
            } else {
                None
            };
            shuffle[set as usize] = match (given[set as usize], derived) {
                (Some(v), Some(d)) if v != d => {
                    return Err(Error::Structural(format!(
                        "shuffle entry for {} contradicts the unit-free entry",
                        set_names(&doc.elements, set)
                    )))
                }
                (Some(v), _) | (None, Some(v)) => v,
                (None, None) => {
                    return Err(Error::Structural(format!(
                        "missing shuffle entry for {}",
                        set_names(&doc.elements, set)
                    )))
                }
            };
        }
        OAlgebra::new(
            doc.name.clone(),
            doc.elements.clone(),
            unit,
            product,
            omega,
            omegastar,
            shuffle,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("algebra serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: AlgebraDoc = serde_json::from_str(text)?;
        OAlgebra::from_doc(&doc)
    }
}

fn set_names(names: &[String], set: Subset) -> String {
    let items: Vec<&str> = members(set).map(|e| names[e].as_str()).collect();
    format!("{{{}}}", items.join(","))
}
