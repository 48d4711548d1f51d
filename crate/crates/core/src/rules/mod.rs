//! If-then rule libraries compiled into knowledge networks.
//!
//! Rule files hold one rule per line:
//!
//! ```text
//! # comment
//! IF mammal AND predator THEN beast
//! penguin_rule: IF bird AND NOT airborne AND aquatic AND black_white THEN penguin
//! ```
//!
//! Rules without an explicit `id:` prefix are named `R<n>` by position.

mod compile;
mod infer;
mod oracle;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::network::EvalError;

pub use compile::{compile_rule_library, CompileMode, KnowledgeNetwork, UnknownMode};
pub use infer::{
    describe_excitation, infer, infer_bounded, trace_inference, trace_inference_bounded,
    InferenceRound,
};
pub use oracle::oracle_infer;

/// The 14-rule animal library shipped with the crate.
pub const ANIMALS: &str = include_str!("../../../../animals.rules");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

/// A possibly negated atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: String,
    pub sign: Sign,
}

impl Literal {
    pub fn positive(atom: impl Into<String>) -> Self {
        Self {
            atom: atom.into(),
            sign: Sign::Positive,
        }
    }

    pub fn negative(atom: impl Into<String>) -> Self {
        Self {
            atom: atom.into(),
            sign: Sign::Negative,
        }
    }

    /// Parses an observed fact: `atom` or `!atom`.
    pub fn parse_fact(text: &str) -> Result<Self, RuleError> {
        let text = text.trim();
        let (sign, atom) = match text.strip_prefix('!') {
            Some(rest) => (Sign::Negative, rest.trim()),
            None => (Sign::Positive, text),
        };
        if !is_identifier(atom) {
            return Err(RuleError::InvalidFact(text.to_owned()));
        }
        Ok(Self {
            atom: atom.to_owned(),
            sign,
        })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Positive => f.write_str(&self.atom),
            Sign::Negative => write!(f, "!{}", self.atom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: String,
    pub antecedents: Vec<Literal>,
    pub consequent: String,
}

impl Rule {
    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.antecedents.iter().map(|l| l.atom.as_str())
    }

    pub fn mentions(&self, atom: &str) -> bool {
        self.atoms().any(|a| a == atom)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: IF ", self.id)?;
        for (i, lit) in self.antecedents.iter().enumerate() {
            if i > 0 {
                f.write_str(" AND ")?;
            }
            if lit.sign == Sign::Negative {
                f.write_str("NOT ")?;
            }
            f.write_str(&lit.atom)?;
        }
        write!(f, " THEN {}", self.consequent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("duplicate rule id `{0}`")]
    DuplicateRuleId(String),
    #[error("rule `{id}`: {reason}")]
    InvalidRule { id: String, reason: String },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("atom `{0}` observed both positive and negative")]
    ConflictingObservation(String),
    #[error("invalid fact `{0}`; expected `atom` or `!atom`")]
    InvalidFact(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Ordered rules plus the registry of every atom they mention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleLibrary {
    rules: Vec<Rule>,
    atoms: Vec<String>,
}

impl RuleLibrary {
    pub fn new(rules: Vec<Rule>) -> Result<Self, RuleError> {
        let mut ids = BTreeSet::new();
        let mut atoms = Vec::new();
        for rule in &rules {
            if !ids.insert(rule.id.as_str()) {
                return Err(RuleError::DuplicateRuleId(rule.id.clone()));
            }
            let invalid = |reason: String| RuleError::InvalidRule {
                id: rule.id.clone(),
                reason,
            };
            if rule.antecedents.is_empty() {
                return Err(invalid("no antecedents".into()));
            }
            let mut seen = BTreeSet::new();
            for atom in rule.atoms().chain([rule.consequent.as_str()]) {
                if !is_identifier(atom) {
                    return Err(invalid(format!("`{atom}` is not a valid atom")));
                }
            }
            for atom in rule.atoms() {
                if !seen.insert(atom) {
                    return Err(invalid(format!("atom `{atom}` repeated in antecedents")));
                }
            }
            if seen.contains(rule.consequent.as_str()) {
                return Err(invalid(format!(
                    "consequent `{}` also appears as an antecedent",
                    rule.consequent
                )));
            }
            for atom in rule.atoms().chain([rule.consequent.as_str()]) {
                if !atoms.iter().any(|a| a == atom) {
                    atoms.push(atom.to_owned());
                }
            }
        }
        Ok(Self { rules, atoms })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Every atom, in order of first mention.
    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn contains_atom(&self, atom: &str) -> bool {
        self.atoms.iter().any(|a| a == atom)
    }

    /// Atoms that are never a consequent.
    pub fn attribute_atoms(&self) -> Vec<String> {
        self.atoms
            .iter()
            .filter(|a| !self.rules.iter().any(|r| &r.consequent == *a))
            .cloned()
            .collect()
    }
}

const KEYWORDS: [&str; 4] = ["IF", "AND", "THEN", "NOT"];

fn is_identifier(word: &str) -> bool {
    let mut chars = word.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !KEYWORDS.contains(&word)
}

fn parse_line(line: usize, text: &str, position: usize) -> Result<Rule, RuleError> {
    let malformed = |message: String| RuleError::Malformed { line, message };
    let (id, body) = match text.split_once(':') {
        Some((id, body)) => {
            let id = id.trim();
            if !is_identifier(id) {
                return Err(malformed(format!("invalid rule id `{id}`")));
            }
            (id.to_owned(), body)
        }
        None => (format!("R{position}"), text),
    };
    let mut words = body.split_whitespace().peekable();
    if words.next() != Some("IF") {
        return Err(malformed("expected `IF`".into()));
    }
    let mut antecedents = Vec::new();
    loop {
        let sign = if words.peek() == Some(&"NOT") {
            words.next();
            Sign::Negative
        } else {
            Sign::Positive
        };
        match words.next() {
            Some(atom) if is_identifier(atom) => antecedents.push(Literal {
                atom: atom.to_owned(),
                sign,
            }),
            Some(other) => return Err(malformed(format!("expected an atom, found `{other}`"))),
            None => return Err(malformed("expected an atom, found end of line".into())),
        }
        match words.next() {
            Some("AND") => continue,
            Some("THEN") => break,
            Some(other) => {
                return Err(malformed(format!("expected `AND` or `THEN`, found `{other}`")))
            }
            None => return Err(malformed("missing `THEN`".into())),
        }
    }
    let consequent = match (words.next(), words.next()) {
        (Some(atom), None) if is_identifier(atom) => atom.to_owned(),
        (Some(_), Some(extra)) => return Err(malformed(format!("unexpected `{extra}` after consequent"))),
        (Some(other), None) => return Err(malformed(format!("invalid consequent `{other}`"))),
        (None, _) => return Err(malformed("missing consequent".into())),
    };
    let rule = Rule {
        id,
        antecedents,
        consequent,
    };
    // Per-rule invariants are reported against the line.
    RuleLibrary::new(vec![rule.clone()]).map_err(|e| malformed(e.to_string()))?;
    Ok(rule)
}

/// Parses `IF <lit> (AND <lit>)* THEN <atom>` lines, `<lit>` being `atom` or
/// `NOT atom`. `#` starts a comment; blank lines are skipped.
pub fn parse_rule_library(text: &str) -> Result<RuleLibrary, RuleError> {
    let mut rules = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        rules.push(parse_line(index + 1, content, rules.len() + 1)?);
    }
    RuleLibrary::new(rules)
}
