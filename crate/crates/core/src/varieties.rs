//! The property flags over idempotent kinds and the five variety deciders
//! stated through J-class types.

use std::fmt;

use serde::Serialize;

use crate::algebra::{Elem, OAlgebra};
use crate::green::{classify_idempotents, jclass_report, GreenData, JClassFlags};

/// The five varieties, weakest condition last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variety {
    Fo,
    FoFinite,
    FoCut,
    FoFiniteCut,
    FoScattered,
}

impl Variety {
    pub const ALL: [Variety; 5] = [
        Variety::Fo,
        Variety::FoFinite,
        Variety::FoCut,
        Variety::FoFiniteCut,
        Variety::FoScattered,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Variety::Fo => "fo",
            Variety::FoFinite => "fo_finite",
            Variety::FoCut => "fo_cut",
            Variety::FoFiniteCut => "fo_finite_cut",
            Variety::FoScattered => "fo_scattered",
        }
    }

    /// Varieties implied by membership in `self`, including itself.
    pub fn implied(self) -> &'static [Variety] {
        use Variety::*;
        match self {
            Fo => &[Fo, FoFinite, FoCut, FoFiniteCut, FoScattered],
            FoFinite => &[FoFinite, FoFiniteCut, FoScattered],
            FoCut => &[FoCut, FoFiniteCut, FoScattered],
            FoFiniteCut => &[FoFiniteCut, FoScattered],
            FoScattered => &[FoScattered],
        }
    }
}

/// Membership in each variety with a reason for every negative answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VarietyVerdict {
    pub fo: bool,
    pub fo_finite: bool,
    pub fo_cut: bool,
    pub fo_finite_cut: bool,
    pub fo_scattered: bool,
    /// One entry per false verdict, keyed by variety.
    pub justifications: Vec<(Variety, String)>,
}

impl VarietyVerdict {
    pub fn get(&self, v: Variety) -> bool {
        match v {
            Variety::Fo => self.fo,
            Variety::FoFinite => self.fo_finite,
            Variety::FoCut => self.fo_cut,
            Variety::FoFiniteCut => self.fo_finite_cut,
            Variety::FoScattered => self.fo_scattered,
        }
    }

    pub fn as_array(&self) -> [bool; 5] {
        Variety::ALL.map(|v| self.get(v))
    }

    /// Checks the implication lattice between the five verdicts.
    pub fn lattice_holds(&self) -> bool {
        let imp = |a: bool, b: bool| !a || b;
        imp(self.fo, self.fo_finite)
            && imp(self.fo_finite, self.fo_finite_cut)
            && imp(self.fo, self.fo_cut)
            && imp(self.fo_cut, self.fo_finite_cut)
            && imp(self.fo_finite_cut, self.fo_scattered)
    }

    pub fn justification(&self, v: Variety) -> Option<&str> {
        self.justifications
            .iter()
            .find(|(k, _)| *k == v)
            .map(|(_, s)| s.as_str())
    }

    /// Compact form such as `✗✗✓✓✓`.
    pub fn marks(&self) -> String {
        self.as_array()
            .iter()
            .map(|&b| if b { '✓' } else { '✗' })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        for v in Variety::ALL {
            obj.insert(v.key().into(), self.get(v).into());
        }
        let just: serde_json::Map<String, serde_json::Value> = self
            .justifications
            .iter()
            .map(|(k, s)| (k.key().to_string(), s.clone().into()))
            .collect();
        obj.insert("justifications".into(), just.into());
        obj.into()
    }
}

impl fmt::Display for VarietyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in Variety::ALL {
            let mark = if self.get(v) { "yes" } else { "no" };
            write!(f, "{:<14}{:<5}", v.key(), mark)?;
            if let Some(j) = self.justification(v) {
                write!(f, "{j}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// True iff every element has `aⁿ = aⁿ⁺¹` for some `n`.
pub fn is_aperiodic(alg: &OAlgebra) -> bool {
    first_periodic(alg).is_none()
}

/// Least element whose powers cycle with period above one.
fn first_periodic(alg: &OAlgebra) -> Option<Elem> {
    alg.elements().find(|&a| {
        let mut x = a;
        for _ in 0..=alg.size() {
            let y = alg.mul(x, a);
            if y == x {
                return false;
            }
            x = y;
        }
        true
    })
}

/// The six property flags over idempotent kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyFlags {
    /// Aperiodicity.
    pub a: bool,
    /// All idempotents are gap insensitive.
    pub eigi: bool,
    /// All ordinal idempotents are gap insensitive.
    pub oigi: bool,
    /// All ordinal* idempotents are gap insensitive.
    pub ostigi: bool,
    /// All scattered idempotents are shuffle idempotents.
    pub scish: bool,
    /// All shuffle idempotents are shuffle simple.
    pub shiss: bool,
}

pub fn property_flags(alg: &OAlgebra) -> PropertyFlags {
    let kinds = classify_idempotents(alg);
    let all = |p: fn(&crate::green::Kinds) -> bool| kinds.kinds.iter().all(p);
    PropertyFlags {
        a: is_aperiodic(alg),
        eigi: all(|k| !k.idempotent || k.gap_insensitive),
        oigi: all(|k| !k.ordinal || k.gap_insensitive),
        ostigi: all(|k| !k.ordinal_star || k.gap_insensitive),
        scish: all(|k| !k.scattered || k.shuffle),
        shiss: all(|k| !k.shuffle || k.shuffle_simple),
    }
}

fn first_offender(
    alg: &OAlgebra,
    classes: &[JClassFlags],
    label: &str,
    hyp: impl Fn(&JClassFlags) -> Option<Elem>,
) -> Option<String> {
    classes.iter().find_map(|c| {
        let e = hyp(c)?;
        if c.shuffle_simple_regular.is_some() {
            return None;
        }
        let names: Vec<&str> = c.members.iter().map(|&a| alg.elem_name(a)).collect();
        Some(format!(
            "J-class {{{}}} is {label} (idempotent {}) but not shuffle simple regular",
            names.join(","),
            alg.elem_name(e)
        ))
    })
}

/// Decides the five varieties through the J-class conditions.
pub fn variety_membership(alg: &OAlgebra) -> VarietyVerdict {
    let g = GreenData::new(alg);
    let kinds = classify_idempotents(alg);
    let report = jclass_report(&g, &kinds);
    let cls = &report.classes;

    let fo = first_offender(alg, cls, "regular", |c| c.regular);
    let fo_finite = first_offender(alg, cls, "ordinal or ordinal* regular", |c| {
        c.ordinal_regular.or(c.ordinalstar_regular)
    });
    let scattered = first_offender(alg, cls, "scattered regular", |c| c.scattered_regular);
    let fo_cut = match first_periodic(alg) {
        Some(a) => Some(format!(
            "not aperiodic: the powers of {} cycle",
            alg.elem_name(a)
        )),
        None => scattered.clone(),
    };
    let fo_scattered = first_offender(alg, cls, "shuffle regular", |c| c.shuffle_regular);

    let mut justifications = Vec::new();
    let mut decide = |v: Variety, reason: Option<String>| {
        let ok = reason.is_none();
        if let Some(r) = reason {
            justifications.push((v, r));
        }
        ok
    };
    VarietyVerdict {
        fo: decide(Variety::Fo, fo),
        fo_finite: decide(Variety::FoFinite, fo_finite),
        fo_cut: decide(Variety::FoCut, fo_cut),
        fo_finite_cut: decide(Variety::FoFiniteCut, scattered),
        fo_scattered: decide(Variety::FoScattered, fo_scattered),
        justifications,
    }
}
