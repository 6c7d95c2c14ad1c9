//! Scatter expressions: syntax trees, text syntax, class conformance, the
//! derived combinators and a membership oracle for finite words.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// One node of an expression. Children are shared through [`Expr`].
#[derive(Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Empty,
    Letter(char),
    Union(Expr, Expr),
    Inter(Expr, Expr),
    Neg(Expr),
    Concat(Expr, Expr),
    Star(Expr),
    Scatter(Expr),
}

/// A reference-counted expression. Equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Expr(Rc<Node>);

impl Expr {
    fn mk(n: Node) -> Self {
        Expr(Rc::new(n))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    fn key(&self) -> *const Node {
        Rc::as_ptr(&self.0)
    }

    pub fn empty() -> Self {
        Expr::mk(Node::Empty)
    }

    pub fn letter(c: char) -> Self {
        Expr::mk(Node::Letter(c))
    }

    pub fn union(a: Expr, b: Expr) -> Self {
        Expr::mk(Node::Union(a, b))
    }

    pub fn inter(a: Expr, b: Expr) -> Self {
        Expr::mk(Node::Inter(a, b))
    }

    pub fn neg(a: Expr) -> Self {
        Expr::mk(Node::Neg(a))
    }

    pub fn cat(a: Expr, b: Expr) -> Self {
        Expr::mk(Node::Concat(a, b))
    }

    pub fn star(a: Expr) -> Self {
        Expr::mk(Node::Star(a))
    }

    pub fn scatter(a: Expr) -> Self {
        Expr::mk(Node::Scatter(a))
    }

    /// `Σ*`, written `!0`.
    pub fn all() -> Self {
        Expr::neg(Expr::empty())
    }

    pub fn is_empty_set(&self) -> bool {
        matches!(self.node(), Node::Empty)
    }

    /// True for `!0`.
    pub fn is_all(&self) -> bool {
        matches!(self.node(), Node::Neg(x) if x.is_empty_set())
    }

    /// Left fold of `+`; the empty union is `0`.
    pub fn union_all(items: impl IntoIterator<Item = Expr>) -> Self {
        items
            .into_iter()
            .reduce(Expr::union)
            .unwrap_or_else(Expr::empty)
    }

    /// Left fold of `&`; the empty intersection is `!0`.
    pub fn inter_all(items: impl IntoIterator<Item = Expr>) -> Self {
        items
            .into_iter()
            .reduce(Expr::inter)
            .unwrap_or_else(Expr::all)
    }

    /// Left fold of concatenation. Panics on an empty list.
    pub fn cat_all(items: impl IntoIterator<Item = Expr>) -> Self {
        items
            .into_iter()
            .reduce(Expr::cat)
            .expect("concatenation of no expressions")
    }

    /// Number of distinct nodes in the expression DAG.
    pub fn dag_size(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if seen.insert(e.key()) {
                stack.extend(e.children().into_iter().cloned());
            }
        }
        seen.len()
    }

    pub fn children(&self) -> Vec<&Expr> {
        match self.node() {
            Node::Empty | Node::Letter(_) => vec![],
            Node::Union(a, b) | Node::Inter(a, b) | Node::Concat(a, b) => vec![a, b],
            Node::Neg(a) | Node::Star(a) | Node::Scatter(a) => vec![a],
        }
    }

    /// Letters occurring in the expression.
    pub fn letters(&self) -> BTreeSet<char> {
        let mut out = BTreeSet::new();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.key()) {
                continue;
            }
            if let Node::Letter(c) = e.node() {
                out.insert(*c);
            }
            stack.extend(e.children().into_iter().cloned());
        }
        out
    }

    /// Peephole rewrites: `!!E → E`, `E+0 → E`, `0+E → E`, `E&!0 → E`,
    /// `!0&E → E`, `0&E → 0`, `E&0 → 0`, `0E → 0`, `E0 → 0`. Shared subterms
    /// stay shared.
    pub fn simplify(&self) -> Expr {
        let mut memo = HashMap::new();
        simplify_rec(self, &mut memo)
    }

    pub fn parse(text: &str) -> Result<Expr> {
        ExprParser::new(text, None).parse()
    }

    /// Parses and rejects letters outside `alphabet`.
    pub fn parse_over(text: &str, alphabet: &[char]) -> Result<Expr> {
        ExprParser::new(text, Some(alphabet)).parse()
    }
}

fn simplify_rec(e: &Expr, memo: &mut HashMap<*const Node, Expr>) -> Expr {
    if let Some(x) = memo.get(&e.key()) {
        return x.clone();
    }
    let out = match e.node() {
        Node::Empty | Node::Letter(_) => e.clone(),
        Node::Union(a, b) => smart_union(simplify_rec(a, memo), simplify_rec(b, memo)),
        Node::Inter(a, b) => smart_inter(simplify_rec(a, memo), simplify_rec(b, memo)),
        Node::Concat(a, b) => smart_cat(simplify_rec(a, memo), simplify_rec(b, memo)),
        Node::Neg(a) => smart_neg(simplify_rec(a, memo)),
        Node::Star(a) => Expr::star(simplify_rec(a, memo)),
        Node::Scatter(a) => Expr::scatter(simplify_rec(a, memo)),
    };
    memo.insert(e.key(), out.clone());
    out
}

/// `+` with `E+0 → E` and `0+E → E`.
pub fn smart_union(a: Expr, b: Expr) -> Expr {
    if a.is_empty_set() {
        b
    } else if b.is_empty_set() {
        a
    } else {
        Expr::union(a, b)
    }
}

/// `&` with `E&!0 → E`, `!0&E → E` and absorption of `0`.
pub fn smart_inter(a: Expr, b: Expr) -> Expr {
    if a.is_empty_set() || b.is_all() {
        a
    } else if b.is_empty_set() || a.is_all() {
        b
    } else {
        Expr::inter(a, b)
    }
}

/// Concatenation with `0E → 0` and `E0 → 0`.
pub fn smart_cat(a: Expr, b: Expr) -> Expr {
    if a.is_empty_set() {
        a
    } else if b.is_empty_set() {
        b
    } else {
        Expr::cat(a, b)
    }
}

/// Complement with `!!E → E`.
pub fn smart_neg(a: Expr) -> Expr {
    match a.node() {
        Node::Neg(x) => x.clone(),
        _ => Expr::neg(a),
    }
}

// ---------------------------------------------------------------------------
// Text syntax

struct ExprParser<'a> {
    src: &'a str,
    pos: usize,
    alphabet: Option<&'a [char]>,
    bindings: HashMap<String, Expr>,
}

impl<'a> ExprParser<'a> {
    fn new(src: &'a str, alphabet: Option<&'a [char]>) -> Self {
        ExprParser {
            src,
            pos: 0,
            alphabet,
            bindings: HashMap::new(),
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn peek(&mut self) -> Option<char> {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn parse(mut self) -> Result<Expr> {
        while let Some(name) = self.binding_head()? {
            let e = self.union()?;
            if self.peek() != Some(';') {
                return Err(self.error("expected ';'"));
            }
            self.bump();
            self.bindings.insert(name, e);
        }
        let e = self.union()?;
        match self.peek() {
            None => Ok(e),
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
        }
    }

    /// Consumes `$name =` if the input continues with a binding.
    fn binding_head(&mut self) -> Result<Option<String>> {
        let start = self.pos;
        if self.peek() != Some('$') {
            return Ok(None);
        }
        let name = self.name()?;
        if self.peek() == Some('=') {
            self.bump();
            Ok(Some(name))
        } else {
            self.pos = start;
            Ok(None)
        }
    }

    /// Reads `$` followed by alphanumerics.
    fn name(&mut self) -> Result<String> {
        self.bump();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !c.is_ascii_alphanumeric() && c != '_')
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error("expected a name after '$'"));
        }
        self.pos += len;
        Ok(rest[..len].to_string())
    }

    fn union(&mut self) -> Result<Expr> {
        let mut e = self.inter()?;
        while self.peek() == Some('+') {
            self.bump();
            e = Expr::union(e, self.inter()?);
        }
        Ok(e)
    }

    fn inter(&mut self) -> Result<Expr> {
        let mut e = self.concat()?;
        while self.peek() == Some('&') {
            self.bump();
            e = Expr::inter(e, self.concat()?);
        }
        Ok(e)
    }

    fn starts_unary(c: char) -> bool {
        c == '0' || c == '(' || c == '!' || c == '$' || c.is_alphabetic()
    }

    fn concat(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            match self.peek() {
                Some('.') => {
                    self.bump();
                    e = Expr::cat(e, self.unary()?);
                }
                Some(c) if Self::starts_unary(c) => e = Expr::cat(e, self.unary()?),
                _ => return Ok(e),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some('!') {
            self.bump();
            return Ok(Expr::neg(self.unary()?));
        }
        let mut e = self.atom()?;
        loop {
            match self.peek() {
                Some('*') => e = Expr::star(e),
                Some('~') => e = Expr::scatter(e),
                _ => return Ok(e),
            }
            self.bump();
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('0') => {
                self.bump();
                Ok(Expr::empty())
            }
            Some('(') => {
                self.bump();
                let e = self.union()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.bump();
                Ok(e)
            }
            Some('$') => {
                let at = self.pos;
                let name = self.name()?;
                self.bindings.get(&name).cloned().ok_or(Error::Syntax {
                    offset: at,
                    message: format!("unbound name '${name}'"),
                })
            }
            Some(c) if c.is_alphabetic() => {
                if let Some(alpha) = self.alphabet {
                    if !alpha.contains(&c) {
                        return Err(Error::UnknownLetter(c));
                    }
                }
                self.bump();
                Ok(Expr::letter(c))
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Expr> {
        Expr::parse(s)
    }
}

fn level(n: &Node) -> u8 {
    match n {
        Node::Union(..) => 1,
        Node::Inter(..) => 2,
        Node::Concat(..) => 3,
        Node::Neg(_) => 4,
        Node::Star(_) | Node::Scatter(_) => 5,
        Node::Empty | Node::Letter(_) => 6,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    let paren = level(e.node()) < min;
    if paren {
        write!(f, "(")?;
    }
    match e.node() {
        Node::Empty => write!(f, "0")?,
        Node::Letter(c) => write!(f, "{c}")?,
        Node::Union(a, b) => {
            write_at(f, a, 1)?;
            write!(f, " + ")?;
            write_at(f, b, 2)?;
        }
        Node::Inter(a, b) => {
            write_at(f, a, 2)?;
            write!(f, " & ")?;
            write_at(f, b, 3)?;
        }
        Node::Concat(a, b) => {
            write_at(f, a, 3)?;
            write!(f, " ")?;
            write_at(f, b, 4)?;
        }
        Node::Neg(a) => {
            write!(f, "!")?;
            write_at(f, a, 4)?;
        }
        Node::Star(a) => {
            write_at(f, a, 5)?;
            write!(f, "*")?;
        }
        Node::Scatter(a) => {
            write_at(f, a, 5)?;
            write!(f, "~")?;
        }
    }
    if paren {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, 1)
    }
}

impl Expr {
    /// Text with every compound subterm that occurs more than once bound to a
    /// name: `$1 = …;` lines, children first, then the root. Parses back to
    /// the same shared structure, and stays linear in the DAG size where the
    /// plain form can be exponential.
    pub fn to_shared_string(&self) -> String {
        // Hash-cons so that structurally equal subterms built separately
        // count as one node.
        let mut canon_of: HashMap<*const Node, usize> = HashMap::new();
        let mut table: HashMap<(u8, usize, usize, char), usize> = HashMap::new();
        let mut reps: Vec<Expr> = Vec::new();
        let mut parents: Vec<usize> = Vec::new();
        let mut ptrs: Vec<Vec<*const Node>> = Vec::new();
        let mut order = Vec::new();
        postorder(self, &mut HashSet::new(), &mut order);
        for e in &order {
            let id = |x: &Expr| canon_of[&x.key()];
            let key = match e.node() {
                Node::Empty => (0, 0, 0, ' '),
                Node::Letter(c) => (1, 0, 0, *c),
                Node::Union(x, y) => (2, id(x), id(y), ' '),
                Node::Inter(x, y) => (3, id(x), id(y), ' '),
                Node::Concat(x, y) => (4, id(x), id(y), ' '),
                Node::Neg(x) => (5, id(x), 0, ' '),
                Node::Star(x) => (6, id(x), 0, ' '),
                Node::Scatter(x) => (7, id(x), 0, ' '),
            };
            let c = match table.get(&key) {
                Some(&c) => c,
                None => {
                    for x in e.children() {
                        parents[id(x)] += 1;
                    }
                    table.insert(key, reps.len());
                    reps.push(e.clone());
                    parents.push(0);
                    ptrs.push(Vec::new());
                    reps.len() - 1
                }
            };
            canon_of.insert(e.key(), c);
            ptrs[c].push(e.key());
        }
        let mut names: HashMap<*const Node, String> = HashMap::new();
        let mut out = String::new();
        let mut count = 0;
        for (c, e) in reps.iter().enumerate() {
            if parents[c] < 2 {
                continue;
            }
            let text = Named(e, &names, 1).to_string();
            if text.len() <= 3 {
                continue;
            }
            count += 1;
            let name = format!("${count}");
            out.push_str(&format!("{name} = {text};\n"));
            for &p in &ptrs[c] {
                names.insert(p, name.clone());
            }
        }
        out.push_str(&Named(self, &names, 1).to_string());
        out
    }
}

fn postorder(e: &Expr, seen: &mut HashSet<*const Node>, order: &mut Vec<Expr>) {
    if !seen.insert(e.key()) {
        return;
    }
    for c in e.children() {
        postorder(c, seen, order);
    }
    order.push(e.clone());
}

/// Prints `e` with named subterms replaced by their names.
struct Named<'a>(&'a Expr, &'a HashMap<*const Node, String>, u8);

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Named(e, names, min) = *self;
        let sub = |x: &Expr, m: u8| -> String {
            match names.get(&x.key()) {
                Some(n) => n.clone(),
                None => Named(x, names, m).to_string(),
            }
        };
        let paren = level(e.node()) < min;
        if paren {
            write!(f, "(")?;
        }
        match e.node() {
            Node::Empty => write!(f, "0")?,
            Node::Letter(c) => write!(f, "{c}")?,
            Node::Union(a, b) => write!(f, "{} + {}", sub(a, 1), sub(b, 2))?,
            Node::Inter(a, b) => write!(f, "{} & {}", sub(a, 2), sub(b, 3))?,
            Node::Concat(a, b) => write!(f, "{} {}", sub(a, 3), sub(b, 4))?,
            Node::Neg(a) => write!(f, "!{}", sub(a, 4))?,
            Node::Star(a) => write!(f, "{}*", sub(a, 5))?,
            Node::Scatter(a) => write!(f, "{}~", sub(a, 5))?,
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Classes

/// The five expression classes, strongest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExprClass {
    MarkedStarFree,
    Marked,
    PowerFree,
    ScatterFree,
    Scatter,
}

impl ExprClass {
    pub const ALL: [ExprClass; 5] = [
        ExprClass::MarkedStarFree,
        ExprClass::Marked,
        ExprClass::PowerFree,
        ExprClass::ScatterFree,
        ExprClass::Scatter,
    ];

    pub fn key(self) -> &'static str {
        match self {
            ExprClass::MarkedStarFree => "marked_star_free",
            ExprClass::Marked => "marked",
            ExprClass::PowerFree => "power_free",
            ExprClass::ScatterFree => "scatter_free",
            ExprClass::Scatter => "scatter",
        }
    }

    /// True if expressions in this class may use the Kleene star.
    pub fn allows_star(self) -> bool {
        matches!(
            self,
            ExprClass::Marked | ExprClass::ScatterFree | ExprClass::Scatter
        )
    }

    /// True if concatenation is restricted to the marked forms.
    pub fn is_marked(self) -> bool {
        matches!(self, ExprClass::MarkedStarFree | ExprClass::Marked)
    }

    /// Classes strictly contained in this one.
    pub fn stronger(self) -> &'static [ExprClass] {
        use ExprClass::*;
        match self {
            MarkedStarFree => &[],
            Marked => &[MarkedStarFree],
            PowerFree => &[MarkedStarFree],
            ScatterFree => &[MarkedStarFree, Marked, PowerFree],
            Scatter => &[MarkedStarFree, Marked, PowerFree, ScatterFree],
        }
    }
}

impl FromStr for ExprClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExprClass::ALL
            .into_iter()
            .find(|c| c.key() == s)
            .ok_or_else(|| Error::Syntax {
                offset: 0,
                message: format!("unknown expression class '{s}'"),
            })
    }
}

impl fmt::Display for ExprClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Class membership of one expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExprClassSet {
    pub marked_star_free: bool,
    pub marked: bool,
    pub power_free: bool,
    pub scatter_free: bool,
    pub scatter: bool,
}

impl ExprClassSet {
    pub fn contains(&self, c: ExprClass) -> bool {
        match c {
            ExprClass::MarkedStarFree => self.marked_star_free,
            ExprClass::Marked => self.marked,
            ExprClass::PowerFree => self.power_free,
            ExprClass::ScatterFree => self.scatter_free,
            ExprClass::Scatter => self.scatter,
        }
    }

    /// The strongest classes the expression belongs to.
    pub fn strongest(&self) -> Vec<ExprClass> {
        ExprClass::ALL
            .into_iter()
            .filter(|&c| self.contains(c) && !c.stronger().iter().any(|&s| self.contains(s)))
            .collect()
    }
}

#[derive(Default)]
struct ClassMemo {
    has_star: HashMap<*const Node, bool>,
    has_scatter: HashMap<*const Node, bool>,
    marked: HashMap<*const Node, bool>,
}

fn any_node(e: &Expr, memo: &mut HashMap<*const Node, bool>, pred: fn(&Node) -> bool) -> bool {
    if let Some(&v) = memo.get(&e.key()) {
        return v;
    }
    let v = pred(e.node()) || e.children().into_iter().any(|c| any_node(c, memo, pred));
    memo.insert(e.key(), v);
    v
}

/// Items of a maximal concatenation chain, left to right.
fn flatten<'a>(e: &'a Expr, out: &mut Vec<&'a Expr>) {
    match e.node() {
        Node::Concat(a, b) => {
            flatten(a, out);
            flatten(b, out);
        }
        _ => out.push(e),
    }
}

fn marked(e: &Expr, memo: &mut HashMap<*const Node, bool>) -> bool {
    if let Some(&v) = memo.get(&e.key()) {
        return v;
    }
    let v = match e.node() {
        Node::Empty => true,
        Node::Letter(_) | Node::Star(_) | Node::Scatter(_) => false,
        Node::Union(a, b) | Node::Inter(a, b) => marked(a, memo) && marked(b, memo),
        Node::Neg(a) => marked(a, memo),
        Node::Concat(..) => {
            let mut items = Vec::new();
            flatten(e, &mut items);
            let mut chains = HashMap::new();
            chain_marked(&items, 0, items.len(), memo, &mut chains)
        }
    };
    memo.insert(e.key(), v);
    v
}

/// Whether `items[i..j]` is generated by the marked grammar as a
/// concatenation chain.
fn chain_marked(
    items: &[&Expr],
    i: usize,
    j: usize,
    memo: &mut HashMap<*const Node, bool>,
    chains: &mut HashMap<(usize, usize), bool>,
) -> bool {
    if j - i == 1 {
        return marked(items[i], memo);
    }
    if let Some(&v) = chains.get(&(i, j)) {
        return v;
    }
    let mut v = (i + 1..j - 1).any(|k| {
        matches!(items[k].node(), Node::Letter(_))
            && chain_marked(items, i, k, memo, chains)
            && chain_marked(items, k + 1, j, memo, chains)
    });
    if !v {
        if let Node::Star(y) = items[j - 1].node() {
            let mut inner = Vec::new();
            flatten(y, &mut inner);
            v = inner.len() >= 2
                && matches!(inner[0].node(), Node::Letter(_))
                && {
                    let mut sub = HashMap::new();
                    chain_marked(&inner, 1, inner.len(), memo, &mut sub)
                }
                && chain_marked(items, i, j - 1, memo, chains);
        }
    }
    chains.insert((i, j), v);
    v
}

/// Decides the syntactic classes of an expression.
pub fn expr_class(e: &Expr) -> ExprClassSet {
    let mut memo = ClassMemo::default();
    let star = any_node(e, &mut memo.has_star, |n| matches!(n, Node::Star(_)));
    let scatter = any_node(e, &mut memo.has_scatter, |n| matches!(n, Node::Scatter(_)));
    let m = marked(e, &mut memo.marked);
    ExprClassSet {
        marked_star_free: m && !star,
        marked: m,
        power_free: !star && !scatter,
        scatter_free: !scatter,
        scatter: true,
    }
}

// ---------------------------------------------------------------------------
// Combinators over an alphabet

/// Builds the derived languages over a fixed alphabet. Every `Σ` is expanded
/// into a union over letters so that marked inputs give marked outputs.
#[derive(Clone, Debug)]
pub struct Ops {
    alphabet: Vec<char>,
}

impl Ops {
    pub fn new(alphabet: &[char]) -> Self {
        Ops {
            alphabet: alphabet.to_vec(),
        }
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    fn each(&self, f: impl Fn(char) -> Expr) -> Expr {
        Expr::union_all(self.alphabet.iter().map(|&c| f(c)))
    }

    /// `Σ*`.
    pub fn all(&self) -> Expr {
        Expr::all()
    }

    /// `Σ*σΣ*`: words containing the letter.
    pub fn contains_letter(&self, c: char) -> Expr {
        Expr::cat_all([Expr::all(), Expr::letter(c), Expr::all()])
    }

    /// The empty word, `¬(∪σ Σ*σΣ*)`.
    pub fn eps(&self) -> Expr {
        Expr::neg(self.each(|c| self.contains_letter(c)))
    }

    /// Nonempty words.
    pub fn nonempty(&self) -> Expr {
        self.each(|c| self.contains_letter(c))
    }

    /// The one-letter word, `εσε`.
    pub fn single(&self, c: char) -> Expr {
        let eps = self.eps();
        Expr::cat_all([eps.clone(), Expr::letter(c), eps])
    }

    /// `F·Σ·Σ*`: a prefix in `F` followed by a letter.
    pub fn initial(&self, f: &Expr) -> Expr {
        self.each(|c| Expr::cat_all([f.clone(), Expr::letter(c), Expr::all()]))
    }

    /// `Σ*·Σ·F`.
    pub fn final_(&self, f: &Expr) -> Expr {
        self.each(|c| Expr::cat_all([Expr::all(), Expr::letter(c), f.clone()]))
    }

    /// `¬(¬F·Σ·Σ*)`: every prefix ending before a letter is in `F`.
    pub fn all_prefixes(&self, f: &Expr) -> Expr {
        Expr::neg(self.initial(&Expr::neg(f.clone())))
    }

    /// `¬(Σ*·Σ·¬F)`.
    pub fn all_suffixes(&self, f: &Expr) -> Expr {
        Expr::neg(self.final_(&Expr::neg(f.clone())))
    }

    /// `Σ*σFτΣ*` summed over letters: a factor in `F` strictly inside.
    pub fn inner_factor(&self, f: &Expr) -> Expr {
        Expr::union_all(self.alphabet.iter().flat_map(|&s| {
            self.alphabet.iter().map(move |&t| {
                Expr::cat_all([
                    Expr::all(),
                    Expr::letter(s),
                    f.clone(),
                    Expr::letter(t),
                    Expr::all(),
                ])
            })
        }))
    }

    /// After every letter there is an inner factor in `F`.
    pub fn cofinal(&self, f: &Expr) -> Expr {
        let no_factor = Expr::neg(self.inner_factor(f));
        Expr::neg(self.each(|c| Expr::cat_all([Expr::all(), Expr::letter(c), no_factor.clone()])))
    }

    /// Before every letter there is an inner factor in `F`.
    pub fn coinitial(&self, f: &Expr) -> Expr {
        let no_factor = Expr::neg(self.inner_factor(f));
        Expr::neg(self.each(|c| Expr::cat_all([no_factor.clone(), Expr::letter(c), Expr::all()])))
    }

    /// `P·(σ₁M₁ + … + σₖMₖ)*` written with marked stars only.
    pub fn prefixed_star(&self, prefix: Expr, alts: &[(char, Expr)]) -> Expr {
        match alts {
            [] => prefix,
            [(c, m)] => Expr::cat(prefix, Expr::star(Expr::cat(Expr::letter(*c), m.clone()))),
            _ => Expr::union_all((0..alts.len()).map(|i| {
                let others: Vec<(char, Expr)> = alts
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, x)| x.clone())
                    .collect();
                let (c, m) = &alts[i];
                let body = self.prefixed_star(m.clone(), &others);
                Expr::cat(
                    prefix.clone(),
                    Expr::star(Expr::cat(Expr::letter(*c), body)),
                )
            })),
        }
    }

    /// Infinitely many non-overlapping factors in `F`, with marked
    /// concatenation only: `¬(N·(ΣN)*)` where `N = ¬(FΣF)`.
    pub fn infinitely_many_marked(&self, f: &Expr) -> Expr {
        let n = Expr::neg(self.each(|c| Expr::cat_all([f.clone(), Expr::letter(c), f.clone()])));
        let alts: Vec<(char, Expr)> = self.alphabet.iter().map(|&c| (c, n.clone())).collect();
        Expr::neg(self.prefixed_star(n, &alts))
    }

    /// Infinitely many non-overlapping factors in `F` using unrestricted
    /// concatenation: a nonempty factor that is cofinal or coinitial in `F`.
    pub fn infinitely_many_unrestricted(&self, f: &Expr) -> Expr {
        let core = Expr::inter(
            Expr::union(self.cofinal(f), self.coinitial(f)),
            Expr::neg(self.eps()),
        );
        Expr::cat_all([Expr::all(), core, Expr::all()])
    }

    /// Densely many non-overlapping factors in `F`: `¬((¬(FF))~)`.
    pub fn densely_many(&self, f: &Expr) -> Expr {
        Expr::neg(Expr::scatter(Expr::neg(Expr::cat(f.clone(), f.clone()))))
    }
}

// ---------------------------------------------------------------------------
// Finite-word membership

/// An expression compiled for repeated membership tests on finite words.
pub struct FiniteMatcher {
    /// Nodes in children-first order.
    nodes: Vec<Op>,
}

enum Op {
    Empty,
    Letter(char),
    Union(usize, usize),
    Inter(usize, usize),
    Neg(usize),
    Concat(usize, usize),
    Star(usize),
}

impl FiniteMatcher {
    pub fn new(e: &Expr) -> Self {
        let mut nodes = Vec::new();
        let mut index = HashMap::new();
        compile(e, &mut nodes, &mut index);
        FiniteMatcher { nodes }
    }

    pub fn matches(&self, word: &str) -> bool {
        let w: Vec<char> = word.chars().collect();
        let n = w.len();
        let span = n + 1;
        let idx = |i: usize, j: usize| i * span + j;
        let mut tables: Vec<Vec<bool>> = Vec::with_capacity(self.nodes.len());
        for op in &self.nodes {
            let mut t = vec![false; span * span];
            for len in 0..=n {
                for i in 0..=n - len {
                    let j = i + len;
                    t[idx(i, j)] = match *op {
                        Op::Empty => false,
                        Op::Letter(c) => len == 1 && w[i] == c,
                        Op::Union(a, b) => tables[a][idx(i, j)] || tables[b][idx(i, j)],
                        Op::Inter(a, b) => tables[a][idx(i, j)] && tables[b][idx(i, j)],
                        Op::Neg(a) => !tables[a][idx(i, j)],
                        Op::Concat(a, b) => {
                            (i..=j).any(|k| tables[a][idx(i, k)] && tables[b][idx(k, j)])
                        }
                        // Shorter spans of the same node are already filled.
                        Op::Star(a) => {
                            len == 0 || (i + 1..=j).any(|k| tables[a][idx(i, k)] && t[idx(k, j)])
                        }
                    };
                }
            }
            tables.push(t);
        }
        tables.last().map(|t| t[idx(0, n)]).unwrap_or(false)
    }
}

fn compile(e: &Expr, nodes: &mut Vec<Op>, index: &mut HashMap<*const Node, usize>) -> usize {
    if let Some(&i) = index.get(&e.key()) {
        return i;
    }
    let op = match e.node() {
        Node::Empty => Op::Empty,
        Node::Letter(c) => Op::Letter(*c),
        Node::Union(a, b) => Op::Union(compile(a, nodes, index), compile(b, nodes, index)),
        Node::Inter(a, b) => Op::Inter(compile(a, nodes, index), compile(b, nodes, index)),
        Node::Concat(a, b) => Op::Concat(compile(a, nodes, index), compile(b, nodes, index)),
        Node::Neg(a) => Op::Neg(compile(a, nodes, index)),
        // Every finite ordering is scattered, so both iterations agree.
        Node::Star(a) | Node::Scatter(a) => Op::Star(compile(a, nodes, index)),
    };
    nodes.push(op);
    let i = nodes.len() - 1;
    index.insert(e.key(), i);
    i
}

/// Membership of a finite word in the language of `e`.
pub fn finite_membership(e: &Expr, word: &str) -> bool {
    FiniteMatcher::new(e).matches(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    fn p_err(s: &str) -> Error {
        Expr::parse(s).unwrap_err()
    }

    #[test]
    fn parse_shapes() {
        assert_eq!(p("!0"), Expr::all());
        assert_eq!(
            p("(a b)*"),
            Expr::star(Expr::cat(Expr::letter('a'), Expr::letter('b')))
        );
        assert_eq!(p("!a*"), Expr::neg(Expr::star(Expr::letter('a'))));
        assert_eq!(
            p("a + b & c d"),
            Expr::union(
                Expr::letter('a'),
                Expr::inter(
                    Expr::letter('b'),
                    Expr::cat(Expr::letter('c'), Expr::letter('d'))
                )
            )
        );
        assert_eq!(p("a.b"), p("ab"));
        assert_eq!(p("a b c"), Expr::cat(p("ab"), p("c")));
    }

    #[test]
    fn parse_errors() {
        match Expr::parse("(a + b") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("{other:?}"),
        }
        match Expr::parse("a + * b") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            Expr::parse_over("a c", &['a', 'b']),
            Err(Error::UnknownLetter('c'))
        );
    }

    #[test]
    fn print_round_trip() {
        for s in [
            "!0",
            "(a + b)*",
            "!(!0 b !0)",
            "a (b c)",
            "a + (b + c)",
            "(a & b) c~",
            "!!a**",
            "(!a)*",
            "0",
        ] {
            let e = p(s);
            assert_eq!(p(&e.to_string()), e, "{s} printed as {e}");
        }
        assert_eq!(p("a (b c)").to_string(), "a (b c)");
        for s in ["(a + b) !(a + b)", "$x = a b; $x* $x", "0", "a"] {
            let e = p(s);
            let text = e.to_shared_string();
            let back = p(&text);
            assert_eq!(back, e, "{s} shared as {text}");
        }
        assert_eq!(
            p("$x = a + b; $x $x").to_shared_string(),
            "$1 = a + b;\n$1 $1"
        );
        assert_eq!(
            p("(a + b) (a + b)").to_shared_string(),
            "$1 = a + b;\n$1 $1"
        );
        assert!(matches!(p_err("$y"), Error::Syntax { .. }));
        assert_eq!(p("(a b) c").to_string(), "a b c");
    }

    #[test]
    fn classes() {
        let nob = p("!(!0 b !0)");
        let c = expr_class(&nob);
        assert!(c.marked_star_free && c.marked && c.power_free);

        let c = expr_class(&p("(a a)*"));
        assert!(!c.marked && c.scatter_free && !c.power_free);

        let c = expr_class(&p("!0 (a !0)*"));
        assert!(c.marked && !c.marked_star_free);

        let c = expr_class(&p("a"));
        assert!(!c.marked && c.power_free);

        let c = expr_class(&p("!((!(!0 !0))~)"));
        assert_eq!(c.strongest(), vec![ExprClass::Scatter]);
    }

    #[test]
    fn oracle_examples() {
        let nob = p("!(!0 b !0)");
        assert!(!finite_membership(&nob, "aba"));
        assert!(finite_membership(&nob, "aa"));
        assert!(finite_membership(&nob, ""));
        assert!(finite_membership(&p("(a b)*"), ""));
        assert!(finite_membership(&p("(a b)~"), "abab"));
        assert!(!finite_membership(&p("(a b)*"), "aba"));
    }

    #[test]
    fn combinators_on_finite_words() {
        let ops = Ops::new(&['a']);
        let init = ops.initial(&Expr::all());
        for w in ["", "a", "aa", "aaa"] {
            assert_eq!(finite_membership(&init, w), !w.is_empty(), "{w:?}");
            assert!(finite_membership(&ops.all_prefixes(&Expr::all()), w));
        }
        assert_eq!(
            expr_class(&ops.densely_many(&Expr::all())).strongest(),
            vec![ExprClass::Scatter]
        );
        let ops = Ops::new(&['a', 'b']);
        let eps = ops.eps();
        assert!(finite_membership(&eps, ""));
        assert!(!finite_membership(&eps, "a"));
        assert!(expr_class(&eps).marked_star_free);
        assert!(expr_class(&ops.single('a')).marked_star_free);
        let any_star = ops.prefixed_star(ops.eps(), &[('a', ops.eps()), ('b', ops.eps())]);
        assert!(expr_class(&any_star).marked);
        for w in ["", "a", "ab", "bba"] {
            assert!(finite_membership(&any_star, w));
        }
    }

    #[test]
    fn simplify_rules() {
        assert_eq!(p("!!a").simplify(), p("a"));
        assert_eq!(p("a + 0").simplify(), p("a"));
        assert_eq!(p("0 a").simplify(), p("0"));
        assert_eq!(p("a & !0").simplify(), p("a"));
        assert_eq!(p("(0 + b) (a & !0)").simplify(), p("b a"));
    }
}
