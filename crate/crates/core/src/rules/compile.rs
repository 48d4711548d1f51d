use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::network::{
    ExcitationRef, GroupKind, LinkId, Network, NetworkError, NeuronId, NeuronKind, Polarity,
};

use super::{Literal, RuleLibrary, Sign};

/// How competing rules suppress one another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CompileMode {
    /// Each rule is one CEL (or a lone EL); a strictly more specific rule
    /// with a different consequent masks it once all of its extra literals
    /// hold.
    #[default]
    Conjunctive,
    /// Every antecedent excites the consequent on its own; a shared
    /// antecedent's link is masked by any distinguishing literal of a
    /// competing rule.
    Competitive,
}

impl fmt::Display for CompileMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Conjunctive => "conj",
            Self::Competitive => "comp",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown mode `{0}`; expected `conj` or `comp`")]
pub struct UnknownMode(pub String);

impl FromStr for CompileMode {
    type Err = UnknownMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "conj" | "conjunctive" => Ok(Self::Conjunctive),
            "comp" | "competitive" => Ok(Self::Competitive),
            _ => Err(UnknownMode(s.to_owned())),
        }
    }
}

/// A rule library compiled into a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeNetwork {
    pub network: Network,
    /// Atom name to its neuron; the neuron label is the atom name.
    pub atoms: BTreeMap<String, NeuronId>,
    /// Rule id to the excitation units that carry it.
    pub rules: BTreeMap<String, Vec<ExcitationRef>>,
    pub mode: CompileMode,
}

fn polarity(sign: Sign) -> Polarity {
    match sign {
        Sign::Positive => Polarity::Positive,
        Sign::Negative => Polarity::Negative,
    }
}

pub fn compile_rule_library(
    library: &RuleLibrary,
    mode: CompileMode,
) -> Result<KnowledgeNetwork, NetworkError> {
    let mut network = Network::new();
    let mut atoms = BTreeMap::new();
    for atom in library.atoms() {
        let is_consequent = library.rules().iter().any(|r| &r.consequent == atom);
        let is_antecedent = library.rules().iter().any(|r| r.mentions(atom));
        let kind = match (is_consequent, is_antecedent) {
            (false, _) => NeuronKind::Input,
            (true, false) => NeuronKind::Output,
            (true, true) => NeuronKind::Internal,
        };
        let id = network.add_neuron(atom.clone(), kind)?;
        if kind == NeuronKind::Output {
            network.mark_output(&id)?;
        }
        atoms.insert(atom.clone(), id);
    }

    // Exciting links, one per antecedent, in rule order.
    let mut rule_links: Vec<Vec<LinkId>> = Vec::with_capacity(library.rules().len());
    for rule in library.rules() {
        let post = &atoms[&rule.consequent];
        let links = rule
            .antecedents
            .iter()
            .map(|lit| network.add_exciting_link(polarity(lit.sign), &atoms[&lit.atom], post))
            .collect::<Result<Vec<_>, _>>()?;
        rule_links.push(links);
    }

    let mut rules = BTreeMap::new();
    match mode {
        CompileMode::Conjunctive => {
            let mut units = Vec::with_capacity(rule_links.len());
            for links in &rule_links {
                units.push(if links.len() >= 2 {
                    ExcitationRef::Group(network.add_group(GroupKind::Cel, links)?)
                } else {
                    ExcitationRef::Link(links[0].clone())
                });
            }
            let lits: Vec<BTreeSet<&Literal>> = library
                .rules()
                .iter()
                .map(|r| r.antecedents.iter().collect())
                .collect();
            let mut seen = BTreeSet::new();
            for (i, r1) in library.rules().iter().enumerate() {
                for (j, r2) in library.rules().iter().enumerate() {
                    if i == j
                        || r1.consequent == r2.consequent
                        || !(lits[i].is_subset(&lits[j]) && lits[i].len() < lits[j].len())
                    {
                        continue;
                    }
                    let extra: Vec<&Literal> = r2
                        .antecedents
                        .iter()
                        .filter(|l| !lits[i].contains(l))
                        .collect();
                    let key: BTreeSet<&Literal> = extra.iter().copied().collect();
                    if !seen.insert((key, i)) {
                        continue;
                    }
                    let inhibitors = extra
                        .iter()
                        .map(|l| {
                            network.add_inhibitory_link(
                                polarity(l.sign),
                                &atoms[&l.atom],
                                units[i].clone(),
                            )
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    if inhibitors.len() >= 2 {
                        network.add_group(GroupKind::Cil, &inhibitors)?;
                    }
                }
            }
            for (rule, unit) in library.rules().iter().zip(units) {
                rules.insert(rule.id.clone(), vec![unit]);
            }
        }
        CompileMode::Competitive => {
            let el_of: HashMap<(usize, &str), &LinkId> = library
                .rules()
                .iter()
                .zip(&rule_links)
                .enumerate()
                .flat_map(|(i, (rule, links))| {
                    rule.atoms().zip(links).map(move |(atom, link)| ((i, atom), link))
                })
                .collect();
            let mut seen = BTreeSet::new();
            for (i, r) in library.rules().iter().enumerate() {
                for r2 in library.rules() {
                    if r.consequent == r2.consequent {
                        continue;
                    }
                    let shared: Vec<&str> = r.atoms().filter(|a| r2.mentions(a)).collect();
                    for s in shared {
                        let target = el_of[&(i, s)];
                        for d in r2.antecedents.iter().filter(|l| !r.mentions(&l.atom)) {
                            if !seen.insert((d.atom.as_str(), d.sign, target)) {
                                continue;
                            }
                            network.add_inhibitory_link(
                                polarity(d.sign),
                                &atoms[&d.atom],
                                ExcitationRef::Link(target.clone()),
                            )?;
                        }
                    }
                }
            }
            for (rule, links) in library.rules().iter().zip(rule_links) {
                rules.insert(
                    rule.id.clone(),
                    links.into_iter().map(ExcitationRef::Link).collect(),
                );
            }
        }
    }

    Ok(KnowledgeNetwork {
        network,
        atoms,
        rules,
        mode,
    })
}
