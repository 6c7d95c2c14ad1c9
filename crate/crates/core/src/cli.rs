//! Command-line front end. Every subcommand reads fixtures or JSON files,
//! writes results to stdout and diagnostics to stderr, and maps the outcome to
//! an exit code: 0 success, 1 domain-level negative, 2 usage or parse error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::algebra::{members, OAlgebra};
use crate::corpus::registry::{self, Fixture};
use crate::error::{Error, Result};
use crate::expr::{expr_class, finite_membership, Expr, ExprClass};
use crate::green::{classify_idempotents, eggbox_json, jclass_report, render_eggbox, GreenData};
use crate::quotient::{classify_language, syntactic};
use crate::synth::Synthesis;
use crate::term::{eval_term, find_witness, LanguageDoc, RecognizedLanguage, TermWord};
use crate::varieties::{variety_membership, Variety};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "oalg", version, about = "Workbench for finite o-algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every axiom; exit 1 if any instance fails.
    Validate {
        /// Fixture id or algebra JSON file.
        algebra: String,
        #[arg(long)]
        json: bool,
    },
    /// Green classes and the J-order.
    Green { algebra: String },
    /// Eggbox diagram of every J-class.
    Eggbox {
        algebra: String,
        #[arg(long)]
        json: bool,
    },
    /// Idempotent kinds and J-class types.
    Idempotents { algebra: String },
    /// The five variety verdicts.
    Varieties {
        algebra: String,
        #[arg(long)]
        json: bool,
    },
    /// Variety verdicts of the syntactic algebra of a language.
    Classify {
        /// Fixture id or language JSON file.
        language: String,
        #[arg(long)]
        json: bool,
    },
    /// Value of a term word.
    Eval { language: String, term: String },
    /// A factor of the term that leaves the upward closure of an element.
    Witness {
        language: String,
        term: String,
        #[arg(long)]
        below: String,
    },
    /// Finite-word membership; exit 1 if the word is rejected.
    Member {
        /// Fixture id or file holding expression text.
        expr: String,
        word: String,
    },
    /// Syntactic expression classes.
    Exprclass {
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Reachable part modulo the coarsest congruence.
    Quotient {
        language: String,
        #[arg(long)]
        json: bool,
    },
    /// Expression of a given class for the language, with its trace.
    Synth {
        language: String,
        #[arg(long)]
        class: String,
        /// Print only the expression, in a form `member` reads back.
        #[arg(long)]
        expr_only: bool,
    },
    /// JSON document of a built-in fixture.
    ExportFixture { id: String },
}

/// Runs the command line against the process streams.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line against the given streams.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let mut buf = String::new();
    let code = match execute(cli.command, &mut buf) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    };
    let _ = out.write_all(buf.as_bytes());
    code
}

/// Exit code for an error: input problems are usage errors, everything else
/// is a domain-level negative.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. }
        | Error::Json(_)
        | Error::Io(_)
        | Error::UnknownFixture(_)
        | Error::UnknownElement(_)
        | Error::UnknownLetter(_)
        | Error::Structural(_) => EXIT_USAGE,
        _ => EXIT_NEGATIVE,
    }
}

fn is_fixture_id(s: &str) -> bool {
    registry::IDS.contains(&s)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// An algebra from a fixture id or a JSON file.
pub fn load_algebra(arg: &str) -> Result<OAlgebra> {
    if is_fixture_id(arg) {
        return registry::load_algebra(arg);
    }
    OAlgebra::from_json(&read(Path::new(arg))?)
}

/// A recognizer from a fixture id or a JSON file. A string `algebra` field
/// names a fixture or a path relative to the language file.
pub fn load_language(arg: &str) -> Result<RecognizedLanguage> {
    if is_fixture_id(arg) {
        return registry::load_language(arg);
    }
    let path = PathBuf::from(arg);
    let doc: LanguageDoc = serde_json::from_str(&read(&path)?)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    RecognizedLanguage::from_doc(&doc, |s| {
        if is_fixture_id(s) {
            registry::load_algebra(s)
        } else {
            OAlgebra::from_json(&read(&dir.join(s))?)
        }
    })
}

/// An expression from a fixture id or a file of expression text.
pub fn load_expr(arg: &str) -> Result<Expr> {
    if is_fixture_id(arg) {
        return registry::load_expr(arg);
    }
    Expr::parse(read(Path::new(arg))?.trim())
}

fn to_pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn names(alg: &OAlgebra, elems: &[usize]) -> String {
    elems
        .iter()
        .map(|&a| alg.elem_name(a))
        .collect::<Vec<_>>()
        .join(", ")
}

fn execute(cmd: Command, out: &mut String) -> Result<i32> {
    use std::fmt::Write as _;
    let w = out;
    match cmd {
        Command::Validate { algebra, json } => {
            let alg = load_algebra(&algebra)?;
            let violations = alg.validate();
            if json {
                let items: Vec<serde_json::Value> = violations
                    .iter()
                    .map(|v| {
                        serde_json::json!({
                            "axiom": v.axiom(),
                            "identity": v.identity,
                            "description": v.describe(&alg),
                        })
                    })
                    .collect();
                let doc = serde_json::json!({
                    "algebra": alg.name(),
                    "valid": violations.is_empty(),
                    "violations": items,
                });
                writeln!(w, "{}", to_pretty(&doc)).ok();
            } else if violations.is_empty() {
                writeln!(w, "{}: valid ({} elements)", alg.name(), alg.size()).ok();
            } else {
                writeln!(w, "{}: {} violations", alg.name(), violations.len()).ok();
                for v in &violations {
                    writeln!(w, "{}", v.describe(&alg)).ok();
                }
            }
            Ok(if violations.is_empty() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::Green { algebra } => {
            let alg = load_algebra(&algebra)?;
            let g = GreenData::new(&alg);
            for (i, egg) in g.jclasses().iter().enumerate() {
                writeln!(w, "J{i}: {{{}}}", names(&alg, &egg.members)).ok();
                let show = |classes: &[Vec<usize>]| {
                    classes
                        .iter()
                        .map(|c| format!("{{{}}}", names(&alg, c)))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                writeln!(w, "  R: {}", show(&egg.rows)).ok();
                writeln!(w, "  L: {}", show(&egg.cols)).ok();
                let cells: Vec<Vec<usize>> = egg.cells.iter().flatten().cloned().collect();
                writeln!(w, "  H: {}", show(&cells)).ok();
                let below: Vec<String> = g
                    .jclasses()
                    .iter()
                    .enumerate()
                    .filter(|(k, other)| *k != i && g.lt_j(other.members[0], egg.members[0]))
                    .map(|(k, _)| format!("J{k}"))
                    .collect();
                writeln!(w, "  strictly below: {}", below.join(" ")).ok();
            }
            Ok(EXIT_OK)
        }
        Command::Eggbox { algebra, json } => {
            let alg = load_algebra(&algebra)?;
            let g = GreenData::new(&alg);
            if json {
                let doc: Vec<serde_json::Value> = g
                    .jclasses()
                    .iter()
                    .map(|egg| {
                        serde_json::json!({
                            "members": egg.members.iter().map(|&a| alg.elem_name(a)).collect::<Vec<_>>(),
                            "cells": eggbox_json(&alg, egg),
                        })
                    })
                    .collect();
                writeln!(w, "{}", to_pretty(&serde_json::Value::from(doc))).ok();
            } else {
                for (i, egg) in g.jclasses().iter().enumerate() {
                    if i > 0 {
                        writeln!(w).ok();
                    }
                    writeln!(w, "J{i}: {{{}}}", names(&alg, &egg.members)).ok();
                    write!(w, "{}", render_eggbox(&alg, egg)).ok();
                }
            }
            Ok(EXIT_OK)
        }
        Command::Idempotents { algebra } => {
            let alg = load_algebra(&algebra)?;
            let kinds = classify_idempotents(&alg);
            for e in alg.elements().filter(|&e| kinds.of(e).idempotent) {
                let k = kinds.of(e);
                let flags = [
                    ("gap_insensitive", k.gap_insensitive),
                    ("ordinal", k.ordinal),
                    ("ordinal_star", k.ordinal_star),
                    ("scattered", k.scattered),
                    ("shuffle", k.shuffle),
                    ("shuffle_simple", k.shuffle_simple),
                ];
                let on: Vec<&str> = flags.iter().filter(|f| f.1).map(|f| f.0).collect();
                writeln!(w, "{}: idempotent {}", alg.elem_name(e), on.join(" ")).ok();
            }
            let g = GreenData::new(&alg);
            let report = jclass_report(&g, &kinds);
            for (i, class) in report.classes.iter().enumerate() {
                let types: Vec<String> = class
                    .entries()
                    .iter()
                    .filter_map(|(name, e)| e.map(|e| format!("{name}[{}]", alg.elem_name(e))))
                    .collect();
                writeln!(
                    w,
                    "J{i} {{{}}}: {}",
                    names(&alg, &class.members),
                    types.join(" ")
                )
                .ok();
            }
            Ok(EXIT_OK)
        }
        Command::Varieties { algebra, json } => {
            let alg = load_algebra(&algebra)?;
            let v = variety_membership(&alg);
            if json {
                writeln!(w, "{}", to_pretty(&v.to_json())).ok();
            } else {
                write_verdict(w, alg.name(), &v);
            }
            Ok(EXIT_OK)
        }
        Command::Classify { language, json } => {
            let lang = load_language(&language)?;
            let q = syntactic(&lang)?;
            let v = classify_language(&lang)?;
            if json {
                let mut doc = v.to_json();
                doc["syntactic_size"] = q.algebra.size().into();
                writeln!(w, "{}", to_pretty(&doc)).ok();
            } else {
                writeln!(w, "syntactic algebra: {} elements", q.algebra.size()).ok();
                write_verdict(w, "verdict", &v);
            }
            Ok(EXIT_OK)
        }
        Command::Eval { language, term } => {
            let lang = load_language(&language)?;
            let t = TermWord::parse(&term)?;
            let v = eval_term(&lang, &t)?;
            writeln!(w, "{}", lang.algebra.elem_name(v)).ok();
            Ok(EXIT_OK)
        }
        Command::Witness {
            language,
            term,
            below,
        } => {
            let lang = load_language(&language)?;
            let t = TermWord::parse(&term)?;
            let a = lang.algebra.elem(&below)?;
            let wit = find_witness(&lang, &t, a)?;
            writeln!(w, "{}", wit.describe(&lang.algebra)).ok();
            writeln!(w, "replays: {}", wit.confirm(&lang, &t, a)).ok();
            Ok(EXIT_OK)
        }
        Command::Member { expr, word } => {
            let e = load_expr(&expr)?;
            let m = finite_membership(&e, &word);
            writeln!(w, "{m}").ok();
            Ok(if m { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Exprclass { expr, json } => {
            let e = load_expr(&expr)?;
            let c = expr_class(&e);
            let strongest: Vec<&str> = c.strongest().iter().map(|c| c.key()).collect();
            if json {
                let mut doc = serde_json::to_value(c)?;
                doc["strongest"] = strongest.into();
                writeln!(w, "{}", to_pretty(&doc)).ok();
            } else {
                for k in ExprClass::ALL {
                    let mark = if c.contains(k) { "yes" } else { "no" };
                    writeln!(w, "{:<18}{mark}", k.key()).ok();
                }
                writeln!(w, "strongest: {}", strongest.join(" ")).ok();
            }
            Ok(EXIT_OK)
        }
        Command::Quotient { language, json } => {
            let lang = load_language(&language)?;
            let q = syntactic(&lang)?;
            if json {
                writeln!(
                    w,
                    "{}",
                    to_pretty(&serde_json::to_value(q.language.to_doc())?)
                )
                .ok();
            } else {
                write!(w, "{}", q.algebra).ok();
                let acc: Vec<usize> = members(q.language.accepting).collect();
                writeln!(w, "accepting: {{{}}}", names(&q.algebra, &acc)).ok();
                for (c, &e) in lang.alphabet.iter().zip(&q.language.h) {
                    writeln!(w, "h({c}) = {}", q.algebra.elem_name(e)).ok();
                }
            }
            Ok(EXIT_OK)
        }
        Command::Synth {
            language,
            class,
            expr_only,
        } => {
            let lang = load_language(&language)?;
            let class: ExprClass = class.parse()?;
            let s = Synthesis::run(&lang, class)?;
            writeln!(w, "{}", s.expr.to_shared_string()).ok();
            if !expr_only {
                writeln!(w, "{}", to_pretty(&s.to_json())).ok();
            }
            Ok(EXIT_OK)
        }
        Command::ExportFixture { id } => {
            let doc = match registry::load_fixture(&id)? {
                Fixture::Algebra(a) => serde_json::to_value(a.to_doc())?,
                Fixture::Language(l) => serde_json::to_value(l.to_doc())?,
                Fixture::Expr { expr, class } => serde_json::json!({
                    "expression": expr.to_string(),
                    "class": class.key(),
                }),
                Fixture::Pair { expr, language } => serde_json::json!({
                    "expression": expr.to_string(),
                    "language": serde_json::to_value(language.to_doc())?,
                }),
            };
            writeln!(w, "{}", to_pretty(&doc)).ok();
            Ok(EXIT_OK)
        }
    }
}

fn write_verdict(w: &mut String, label: &str, v: &crate::varieties::VarietyVerdict) {
    use std::fmt::Write as _;
    let row: Vec<String> = v.marks().chars().map(String::from).collect();
    let header: Vec<&str> = Variety::ALL.iter().map(|v| v.key()).collect();
    writeln!(w, "{label}: {}", row.join(" ")).ok();
    writeln!(w, "({})", header.join(" ")).ok();
    write!(w, "{v}").ok();
}
