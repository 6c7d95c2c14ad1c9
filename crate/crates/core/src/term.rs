//! Term words: finite syntax for regular countable words, their evaluation
//! under a recognizer, and witnesses explaining why a value falls J-below a
//! target.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{members, singleton, Elem, OAlgebra, Subset};
use crate::error::{Error, Result};
use crate::green::GreenData;

/// An algebra with a letter morphism and an accepting set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecognizedLanguage {
    pub algebra: OAlgebra,
    pub alphabet: Vec<char>,
    /// `h[i]` is the image of `alphabet[i]`.
    pub h: Vec<Elem>,
    pub accepting: Subset,
}

impl RecognizedLanguage {
    pub fn new(
        algebra: OAlgebra,
        alphabet: &[char],
        h: &[Elem],
        accepting: Subset,
    ) -> Result<Self> {
        if alphabet.len() != h.len() {
            return Err(Error::Structural("morphism must map every letter".into()));
        }
        for (i, c) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(c) {
                return Err(Error::Structural(format!("letter '{c}' listed twice")));
            }
        }
        if let Some(&bad) = h.iter().find(|&&e| e >= algebra.size()) {
            return Err(Error::Structural(format!(
                "letter image {bad} out of range"
            )));
        }
        if accepting & !algebra.carrier() != 0 {
            return Err(Error::Structural("accepting set out of range".into()));
        }
        Ok(RecognizedLanguage {
            algebra,
            alphabet: alphabet.to_vec(),
            h: h.to_vec(),
            accepting,
        })
    }

    /// Builds a recognizer from element names.
    pub fn from_names(algebra: OAlgebra, h: &[(char, &str)], accepting: &[&str]) -> Result<Self> {
        let alphabet: Vec<char> = h.iter().map(|&(c, _)| c).collect();
        let images = h
            .iter()
            .map(|&(_, n)| algebra.elem(n))
            .collect::<Result<Vec<_>>>()?;
        let mut acc = 0;
        for n in accepting {
            acc |= singleton(algebra.elem(n)?);
        }
        RecognizedLanguage::new(algebra, &alphabet, &images, acc)
    }

    pub fn image(&self, c: char) -> Result<Elem> {
        self.alphabet
            .iter()
            .position(|&x| x == c)
            .map(|i| self.h[i])
            .ok_or(Error::UnknownLetter(c))
    }

    /// Value of a finite word.
    pub fn eval_word(&self, word: &str) -> Result<Elem> {
        word.chars().try_fold(self.algebra.unit(), |acc, c| {
            Ok(self.algebra.mul(acc, self.image(c)?))
        })
    }

    pub fn accepts_word(&self, word: &str) -> Result<bool> {
        Ok(self.accepting & singleton(self.eval_word(word)?) != 0)
    }

    pub fn accepts_term(&self, t: &TermWord) -> Result<bool> {
        Ok(self.accepting & singleton(eval_term(self, t)?) != 0)
    }

    pub fn with_accepting(&self, accepting: Subset) -> Self {
        RecognizedLanguage {
            accepting,
            ..self.clone()
        }
    }
}

/// JSON form of a recognizer. `algebra` is either an inline algebra document
/// or a string naming a file or fixture.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LanguageDoc {
    pub algebra: serde_json::Value,
    pub alphabet: Vec<String>,
    pub h: BTreeMap<String, String>,
    pub accepting: Vec<String>,
}

impl RecognizedLanguage {
    pub fn to_doc(&self) -> LanguageDoc {
        let a = &self.algebra;
        LanguageDoc {
            algebra: serde_json::to_value(a.to_doc()).expect("algebra serializes"),
            alphabet: self.alphabet.iter().map(|c| c.to_string()).collect(),
            h: self
                .alphabet
                .iter()
                .zip(&self.h)
                .map(|(c, &e)| (c.to_string(), a.elem_name(e).to_string()))
                .collect(),
            accepting: members(self.accepting)
                .map(|e| a.elem_name(e).to_string())
                .collect(),
        }
    }

    /// Loads a recognizer; `resolve` turns a string reference into an algebra.
    pub fn from_doc(doc: &LanguageDoc, resolve: impl Fn(&str) -> Result<OAlgebra>) -> Result<Self> {
        let algebra = match &doc.algebra {
            serde_json::Value::String(s) => resolve(s)?,
            v => OAlgebra::from_doc(&serde_json::from_value(v.clone())?)?,
        };
        let mut alphabet = Vec::new();
        for s in &doc.alphabet {
            let mut it = s.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => alphabet.push(c),
                _ => {
                    return Err(Error::Structural(format!(
                        "letter '{s}' is not one character"
                    )))
                }
            }
        }
        let mut h = Vec::new();
        for c in &alphabet {
            let name = doc
                .h
                .get(&c.to_string())
                .ok_or_else(|| Error::Structural(format!("no image for letter '{c}'")))?;
            h.push(algebra.elem(name)?);
        }
        if let Some(k) = doc.h.keys().find(|k| !doc.alphabet.contains(k)) {
            return Err(Error::Structural(format!(
                "image given for unknown letter '{k}'"
            )));
        }
        let mut acc = 0;
        for n in &doc.accepting {
            acc |= singleton(algebra.elem(n)?);
        }
        RecognizedLanguage::new(algebra, &alphabet, &h, acc)
    }
}

// ---------------------------------------------------------------------------
// Terms

/// A term denoting a regular countable word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermWord {
    Empty,
    Letter(char),
    /// At least two factors.
    Concat(Vec<TermWord>),
    OmegaPow(Box<TermWord>),
    OmegaStarPow(Box<TermWord>),
    /// At least one child, pairwise distinct.
    Shuffle(Vec<TermWord>),
}

impl TermWord {
    pub fn letter(c: char) -> Self {
        TermWord::Letter(c)
    }

    /// Concatenation; a single factor is returned as is and no factors give
    /// the empty word.
    pub fn cat(mut parts: Vec<TermWord>) -> Self {
        match parts.len() {
            0 => TermWord::Empty,
            1 => parts.pop().unwrap(),
            _ => TermWord::Concat(parts),
        }
    }

    pub fn omega(t: TermWord) -> Self {
        TermWord::OmegaPow(Box::new(t))
    }

    pub fn omegastar(t: TermWord) -> Self {
        TermWord::OmegaStarPow(Box::new(t))
    }

    /// Shuffle of the given children, dropping repeated ones.
    pub fn shuffle(children: Vec<TermWord>) -> Self {
        let mut out: Vec<TermWord> = Vec::new();
        for c in children {
            if !out.contains(&c) {
                out.push(c);
            }
        }
        assert!(!out.is_empty(), "shuffle of no terms");
        TermWord::Shuffle(out)
    }

    pub fn children(&self) -> &[TermWord] {
        match self {
            TermWord::Empty | TermWord::Letter(_) => &[],
            TermWord::Concat(v) | TermWord::Shuffle(v) => v,
            TermWord::OmegaPow(t) | TermWord::OmegaStarPow(t) => std::slice::from_ref(&**t),
        }
    }

    /// The subterm at `path`, one child index per step.
    pub fn at(&self, path: &[usize]) -> Option<&TermWord> {
        path.iter().try_fold(self, |t, &i| t.children().get(i))
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut p = TermParser { src: text, pos: 0 };
        let t = p.term()?;
        p.skip_ws();
        if p.pos < text.len() {
            return Err(p.error("trailing input"));
        }
        Ok(t)
    }
}

impl fmt::Display for TermWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, head: &str, items: &[TermWord]| {
            write!(f, "({head}")?;
            for t in items {
                write!(f, " {t}")?;
            }
            write!(f, ")")
        };
        match self {
            TermWord::Empty => write!(f, "eps"),
            TermWord::Letter(c) => write!(f, "{c}"),
            TermWord::Concat(v) => list(f, "cat", v),
            TermWord::OmegaPow(t) => write!(f, "(omega {t})"),
            TermWord::OmegaStarPow(t) => write!(f, "(omegastar {t})"),
            TermWord::Shuffle(v) => list(f, "shuffle", v),
        }
    }
}

struct TermParser<'a> {
    src: &'a str,
    pos: usize,
}

impl TermParser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn atom(&mut self) -> &str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '(' || c == ')' {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn term(&mut self) -> Result<TermWord> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("expected a term")),
            Some(')') => Err(self.error("unexpected ')'")),
            Some('(') => {
                self.pos += 1;
                self.skip_ws();
                let head_pos = self.pos;
                let head = self.atom().to_string();
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(')') => {
                            self.pos += 1;
                            break;
                        }
                        None => return Err(self.error("unclosed '('")),
                        _ => items.push(self.term()?),
                    }
                }
                let bad = |m: &str| Error::Syntax {
                    offset: head_pos,
                    message: m.to_string(),
                };
                match head.as_str() {
                    "cat" if items.len() >= 2 => Ok(TermWord::Concat(items)),
                    "cat" => Err(bad("cat needs at least two terms")),
                    "omega" | "omegastar" if items.len() == 1 => {
                        let t = items.pop().unwrap();
                        Ok(if head == "omega" {
                            TermWord::omega(t)
                        } else {
                            TermWord::omegastar(t)
                        })
                    }
                    "omega" | "omegastar" => Err(bad("expects exactly one term")),
                    "shuffle" if !items.is_empty() => Ok(TermWord::shuffle(items)),
                    "shuffle" => Err(bad("shuffle needs at least one term")),
                    _ => Err(bad("expected cat, omega, omegastar or shuffle")),
                }
            }
            Some(_) => {
                let start = self.pos;
                let a = self.atom();
                let mut cs = a.chars();
                match (a, cs.next(), cs.next()) {
                    ("eps", _, _) => Ok(TermWord::Empty),
                    (_, Some(c), None) => Ok(TermWord::Letter(c)),
                    _ => Err(Error::Syntax {
                        offset: start,
                        message: format!("unknown atom '{a}'"),
                    }),
                }
            }
        }
    }
}

/// Value of a term under the recognizer's morphism.
pub fn eval_term(lang: &RecognizedLanguage, t: &TermWord) -> Result<Elem> {
    let alg = &lang.algebra;
    Ok(match t {
        TermWord::Empty => alg.unit(),
        TermWord::Letter(c) => lang.image(*c)?,
        TermWord::Concat(v) => v.iter().try_fold(alg.unit(), |acc, c| {
            Ok::<_, Error>(alg.mul(acc, eval_term(lang, c)?))
        })?,
        TermWord::OmegaPow(u) => alg.omega(eval_term(lang, u)?),
        TermWord::OmegaStarPow(u) => alg.omegastar(eval_term(lang, u)?),
        TermWord::Shuffle(v) => {
            let set = v
                .iter()
                .try_fold(0, |s, c| Ok::<_, Error>(s | singleton(eval_term(lang, c)?)))?;
            alg.shuffle(set)
        }
    })
}

/// `{b | b ≥J a}`.
pub fn upward_closure(alg: &OAlgebra, a: Elem) -> Subset {
    GreenData::new(alg).upward_closure(a)
}

// ---------------------------------------------------------------------------
// Witnesses

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessKind {
    Letter,
    Concatenation,
    Omega,
    OmegaStar,
    Shuffle,
}

/// A factor of a term whose value leaves the upward closure `Z`.
///
/// Payloads by kind:
/// * `Letter`: `[h(σ)]` with `h(σ) ∉ Z`.
/// * `Concatenation`: `[u, v]` with `u, v ∈ Z` and `u·v ∉ Z`. At a `cat` node
///   `index` is the position of `v`; at an ω- or ω*-node `regroup` is the
///   power of the repeated value on the `Z` side.
/// * `Omega` and `OmegaStar`: `[e]`, an idempotent in `Z` whose ω (resp. ω*)
///   is outside `Z`, with `regroup` the exponent that exposes it.
/// * `Shuffle`: the set of child values, all in `Z`, whose shuffle is not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub path: Vec<usize>,
    pub index: Option<usize>,
    pub regroup: Option<usize>,
    pub payload: Vec<Elem>,
}

impl Witness {
    /// Checks the defining condition of the kind against `z` only.
    pub fn condition_holds(&self, alg: &OAlgebra, z: Subset) -> bool {
        let inz = |a: Elem| z & singleton(a) != 0;
        match (self.kind, self.payload.as_slice()) {
            (WitnessKind::Letter, &[a]) => !inz(a),
            (WitnessKind::Concatenation, &[u, v]) => inz(u) && inz(v) && !inz(alg.mul(u, v)),
            (WitnessKind::Omega, &[e]) => inz(e) && alg.is_idempotent(e) && !inz(alg.omega(e)),
            (WitnessKind::OmegaStar, &[e]) => {
                inz(e) && alg.is_idempotent(e) && !inz(alg.omegastar(e))
            }
            (WitnessKind::Shuffle, k) if !k.is_empty() => {
                let set = k.iter().fold(0, |s, &a| s | singleton(a));
                k.iter().all(|&a| inz(a)) && !inz(alg.shuffle(set))
            }
            _ => false,
        }
    }

    /// Replays the witness against the term: the node at `path` has the
    /// right shape, the payload is recomputed from it, and the kind's
    /// condition holds for `Z(a)`.
    pub fn confirm(&self, lang: &RecognizedLanguage, t: &TermWord, a: Elem) -> bool {
        let alg = &lang.algebra;
        let z = upward_closure(alg, a);
        let Some(node) = t.at(&self.path) else {
            return false;
        };
        let expected = self.recompute(lang, node);
        expected.as_deref() == Some(self.payload.as_slice()) && self.condition_holds(alg, z)
    }

    fn recompute(&self, lang: &RecognizedLanguage, node: &TermWord) -> Option<Vec<Elem>> {
        let alg = &lang.algebra;
        let ev = |t: &TermWord| eval_term(lang, t).ok();
        match (self.kind, node) {
            (WitnessKind::Letter, TermWord::Letter(_)) => ev(node).map(|v| vec![v]),
            (WitnessKind::Concatenation, TermWord::Concat(cs)) => self.index.and_then(|i| {
                if i == 0 || i >= cs.len() {
                    return None;
                }
                let prefix = cs[..i]
                    .iter()
                    .try_fold(alg.unit(), |acc, c| Some(alg.mul(acc, ev(c)?)))?;
                Some(vec![prefix, ev(&cs[i])?])
            }),
            (WitnessKind::Concatenation, TermWord::OmegaPow(u)) => {
                let m = ev(u)?;
                self.regroup.map(|j| vec![alg.pow(m, j), m])
            }
            (WitnessKind::Concatenation, TermWord::OmegaStarPow(u)) => {
                let m = ev(u)?;
                self.regroup.map(|j| vec![m, alg.pow(m, j)])
            }
            (WitnessKind::Omega, TermWord::OmegaPow(u))
            | (WitnessKind::OmegaStar, TermWord::OmegaStarPow(u)) => {
                let m = ev(u)?;
                self.regroup.map(|k| vec![alg.pow(m, k)])
            }
            (WitnessKind::Shuffle, TermWord::Shuffle(cs)) => {
                let set = cs.iter().try_fold(0, |s, c| Some(s | singleton(ev(c)?)))?;
                Some(members(set).collect())
            }
            _ => None,
        }
    }

    pub fn describe(&self, alg: &OAlgebra) -> String {
        let names: Vec<&str> = self.payload.iter().map(|&a| alg.elem_name(a)).collect();
        let mut s = format!("{:?} witness at path {:?}", self.kind, self.path);
        if let Some(i) = self.index {
            s.push_str(&format!(", factor {i}"));
        }
        if let Some(k) = self.regroup {
            s.push_str(&format!(", regroup {k}"));
        }
        s.push_str(&format!(": [{}]", names.join(", ")));
        s
    }
}

/// Finds a witness for `eval(t) ∉ Z(a)`, leftmost-innermost first.
pub fn find_witness(lang: &RecognizedLanguage, t: &TermWord, a: Elem) -> Result<Witness> {
    let alg = &lang.algebra;
    let z = upward_closure(alg, a);
    let v = eval_term(lang, t)?;
    if z & singleton(v) != 0 {
        return Err(Error::Precondition(format!(
            "term value {} is J-above {}",
            alg.elem_name(v),
            alg.elem_name(a)
        )));
    }
    let mut path = Vec::new();
    search(lang, z, t, &mut path)?
        .ok_or_else(|| Error::Internal(format!("no witness found in {t} for {}", alg.elem_name(a))))
}

fn search(
    lang: &RecognizedLanguage,
    z: Subset,
    t: &TermWord,
    path: &mut Vec<usize>,
) -> Result<Option<Witness>> {
    let alg = &lang.algebra;
    let inz = |a: Elem| z & singleton(a) != 0;
    let witness = |kind, path: &[usize], index, regroup, payload| Witness {
        kind,
        path: path.to_vec(),
        index,
        regroup,
        payload,
    };
    // Descend into the first child leaving Z, if any.
    for (i, c) in t.children().iter().enumerate() {
        if !inz(eval_term(lang, c)?) {
            path.push(i);
            let found = search(lang, z, c, path)?;
            path.pop();
            return Ok(found);
        }
    }
    Ok(match t {
        TermWord::Empty => None,
        TermWord::Letter(c) => Some(witness(
            WitnessKind::Letter,
            path,
            None,
            None,
            vec![lang.image(*c)?],
        )),
        TermWord::Concat(cs) => {
            let mut acc = alg.unit();
            let mut found = None;
            for (i, c) in cs.iter().enumerate() {
                let v = eval_term(lang, c)?;
                let next = alg.mul(acc, v);
                if !inz(next) {
                    found = Some(witness(
                        WitnessKind::Concatenation,
                        path,
                        Some(i),
                        None,
                        vec![acc, v],
                    ));
                    break;
                }
                acc = next;
            }
            found
        }
        TermWord::OmegaPow(u) | TermWord::OmegaStarPow(u) => {
            let star = matches!(t, TermWord::OmegaStarPow(_));
            let m = eval_term(lang, u)?;
            let k = alg.idempotent_exponent(m)?;
            let e = alg.pow(m, k);
            if inz(e) {
                let kind = if star {
                    WitnessKind::OmegaStar
                } else {
                    WitnessKind::Omega
                };
                Some(witness(kind, path, None, Some(k), vec![e]))
            } else {
                let mut j = 1;
                let mut x = m;
                while inz(alg.mul(x, m)) {
                    x = alg.mul(x, m);
                    j += 1;
                }
                let payload = if star { vec![m, x] } else { vec![x, m] };
                Some(witness(
                    WitnessKind::Concatenation,
                    path,
                    None,
                    Some(j),
                    payload,
                ))
            }
        }
        TermWord::Shuffle(cs) => {
            let set = cs
                .iter()
                .try_fold(0, |s, c| Ok::<_, Error>(s | singleton(eval_term(lang, c)?)))?;
            Some(witness(
                WitnessKind::Shuffle,
                path,
                None,
                None,
                members(set).collect(),
            ))
        }
    })
}

/// All words of length at most `n`, shortest first and lexicographic within
/// a length.
pub fn enumerate_finite_words(alphabet: &[char], n: usize) -> impl Iterator<Item = String> + '_ {
    let mut current: Vec<usize> = Vec::new();
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let word: String = current.iter().map(|&i| alphabet[i]).collect();
        // Advance like an odometer; grow when every position wrapped.
        let mut i = current.len();
        loop {
            if i == 0 {
                if current.len() == n || alphabet.is_empty() {
                    done = true;
                } else {
                    current = vec![0; current.len() + 1];
                }
                break;
            }
            i -= 1;
            current[i] += 1;
            if current[i] < alphabet.len() {
                break;
            }
            current[i] = 0;
        }
        Some(word)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixtures;

    fn gap_lang() -> RecognizedLanguage {
        RecognizedLanguage::from_names(fixtures::gap(), &[('a', "cci")], &["0"]).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let t = TermWord::parse("(cat (omega a) (omegastar (shuffle a b a)) eps)").unwrap();
        assert_eq!(
            t.to_string(),
            "(cat (omega a) (omegastar (shuffle a b)) eps)"
        );
        assert_eq!(TermWord::parse(&t.to_string()).unwrap(), t);
        match TermWord::parse("(cat a") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("{other:?}"),
        }
        match TermWord::parse("(omega ab)") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 7),
            other => panic!("{other:?}"),
        }
        assert!(TermWord::parse("(cat a)").is_err());
    }

    #[test]
    fn eval_examples() {
        let gap = gap_lang();
        let t = TermWord::parse("(omega a)").unwrap();
        assert_eq!(
            eval_term(&gap, &t).unwrap(),
            gap.algebra.elem("coi").unwrap()
        );
        assert_eq!(
            eval_term(&gap, &TermWord::Empty).unwrap(),
            gap.algebra.unit()
        );
        let pd = RecognizedLanguage::from_names(fixtures::pd(), &[('a', "s")], &[]).unwrap();
        let t = TermWord::parse("(shuffle a)").unwrap();
        assert_eq!(eval_term(&pd, &t).unwrap(), pd.algebra.elem("0").unwrap());
        assert_eq!(
            eval_term(&pd, &TermWord::Letter('z')),
            Err(Error::UnknownLetter('z'))
        );
    }

    #[test]
    fn concatenation_witness() {
        let lang = gap_lang();
        let alg = &lang.algebra;
        let t = TermWord::parse("(cat (omega a) (omegastar a))").unwrap();
        let cci = alg.elem("cci").unwrap();
        let w = find_witness(&lang, &t, cci).unwrap();
        assert_eq!(w.kind, WitnessKind::Concatenation);
        assert_eq!(
            w.payload,
            vec![alg.elem("coi").unwrap(), alg.elem("oci").unwrap()]
        );
        assert!(w.confirm(&lang, &t, cci));
    }

    #[test]
    fn omega_witness_with_regroup() {
        let lang = RecognizedLanguage::from_names(fixtures::even(), &[('a', "s")], &[]).unwrap();
        let alg = &lang.algebra;
        let t = TermWord::parse("(omega a)").unwrap();
        let s = alg.elem("s").unwrap();
        let w = find_witness(&lang, &t, s).unwrap();
        assert_eq!(w.kind, WitnessKind::Omega);
        assert_eq!(w.regroup, Some(2));
        assert_eq!(w.payload, vec![alg.elem("s2").unwrap()]);
        assert!(w.confirm(&lang, &t, s));
    }

    #[test]
    fn precondition() {
        let lang = gap_lang();
        let t = TermWord::parse("a").unwrap();
        let cci = lang.algebra.elem("cci").unwrap();
        assert!(matches!(
            find_witness(&lang, &t, cci),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn word_enumeration() {
        let w: Vec<String> = enumerate_finite_words(&['a'], 1).collect();
        assert_eq!(w, vec!["", "a"]);
        let w: Vec<String> = enumerate_finite_words(&['a', 'b'], 2).collect();
        assert_eq!(w, vec!["", "a", "b", "aa", "ab", "ba", "bb"]);
        assert_eq!(enumerate_finite_words(&['a', 'b', 'c'], 3).count(), 40);
        assert_eq!(enumerate_finite_words(&['a', 'b'], 0).count(), 1);
    }

    #[test]
    fn language_json_round_trip() {
        let lang = gap_lang();
        let doc = lang.to_doc();
        let back = RecognizedLanguage::from_doc(&doc, |_| unreachable!()).unwrap();
        assert_eq!(back, lang);
    }
}
