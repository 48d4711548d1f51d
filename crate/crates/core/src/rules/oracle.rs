//! Direct forward chaining over the rules, independent of any network.

use std::collections::{BTreeMap, BTreeSet};

use super::infer::check_observed;
use super::{CompileMode, Literal, Rule, RuleError, RuleLibrary, Sign};

fn holds(facts: &BTreeMap<String, Sign>, lit: &Literal) -> bool {
    facts.get(&lit.atom) == Some(&lit.sign)
}

/// Literals of `other` absent from `rule`.
fn distinguishing<'a>(rule: &'a Rule, other: &'a Rule) -> impl Iterator<Item = &'a Literal> {
    other
        .antecedents
        .iter()
        .filter(move |l| !rule.antecedents.contains(l))
}

fn conjunctive_fires(lib: &RuleLibrary, facts: &BTreeMap<String, Sign>, rule: &Rule) -> bool {
    rule.antecedents.iter().all(|l| holds(facts, l))
        && !lib.rules().iter().any(|other| {
            other.consequent != rule.consequent
                && other.antecedents.len() > rule.antecedents.len()
                && rule.antecedents.iter().all(|l| other.antecedents.contains(l))
                && distinguishing(rule, other).all(|l| holds(facts, l))
        })
}

fn competitive_fires(lib: &RuleLibrary, facts: &BTreeMap<String, Sign>, rule: &Rule) -> bool {
    rule.antecedents.iter().any(|lit| {
        holds(facts, lit)
            && !lib.rules().iter().any(|other| {
                other.consequent != rule.consequent
                    && other.mentions(&lit.atom)
                    && other
                        .antecedents
                        .iter()
                        .any(|d| !rule.mentions(&d.atom) && holds(facts, d))
            })
    })
}

/// Synchronous forward chaining with sticky facts: each step fires every
/// rule whose condition holds on the facts at the start of the step.
/// Returns derived atoms, excluding observed positives.
pub fn oracle_infer(
    lib: &RuleLibrary,
    observed: &[Literal],
    mode: CompileMode,
) -> Result<BTreeSet<String>, RuleError> {
    let mut facts = check_observed(|a| lib.contains_atom(a), observed)?;
    let mut derived = BTreeSet::new();
    loop {
        let fresh: BTreeSet<String> = lib
            .rules()
            .iter()
            .filter(|r| !facts.contains_key(&r.consequent))
            .filter(|r| match mode {
                CompileMode::Conjunctive => conjunctive_fires(lib, &facts, r),
                CompileMode::Competitive => competitive_fires(lib, &facts, r),
            })
            .map(|r| r.consequent.clone())
            .collect();
        if fresh.is_empty() {
            return Ok(derived);
        }
        for atom in fresh {
            facts.insert(atom.clone(), Sign::Positive);
            derived.insert(atom);
        }
    }
}
