use std::collections::{BTreeMap, BTreeSet};

use crate::network::{
    evaluate_bounded, evaluate_traced_bounded, Assignment, ExcitationRef, Network, NeuronId, NeuronState,
    Polarity, Schedule,
};

use super::{KnowledgeNetwork, Literal, RuleError, Sign};

/// One round of a rule inference, rendered with atom names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferenceRound {
    pub round: usize,
    /// Atoms that became positive this round.
    pub activated: Vec<String>,
    /// Active inhibitions as `source -| excitation`.
    pub active_inhibitions: Vec<String>,
    /// Active but masked excitations, e.g. `yellow -> leopard`.
    pub masked: Vec<String>,
    pub fixed_point: bool,
}

pub(super) fn check_observed(
    known: impl Fn(&str) -> bool,
    observed: &[Literal],
) -> Result<BTreeMap<String, Sign>, RuleError> {
    let mut facts = BTreeMap::new();
    for lit in observed {
        if !known(&lit.atom) {
            return Err(RuleError::UnknownAtom(lit.atom.clone()));
        }
        if let Some(previous) = facts.insert(lit.atom.clone(), lit.sign) {
            if previous != lit.sign {
                return Err(RuleError::ConflictingObservation(lit.atom.clone()));
            }
        }
    }
    Ok(facts)
}

fn assignment(knet: &KnowledgeNetwork, observed: &[Literal]) -> Result<Assignment, RuleError> {
    let facts = check_observed(|a| knet.atoms.contains_key(a), observed)?;
    Ok(facts
        .into_iter()
        .map(|(atom, sign)| {
            let state = match sign {
                Sign::Positive => NeuronState::Positive,
                Sign::Negative => NeuronState::Negative,
            };
            (knet.atoms[&atom].clone(), state)
        })
        .collect())
}

fn label(net: &Network, id: &NeuronId) -> String {
    net.neuron(id).map_or_else(|| id.to_string(), |n| n.label.clone())
}

fn signed(net: &Network, polarity: Polarity, id: &NeuronId) -> String {
    match polarity {
        Polarity::Positive => label(net, id),
        Polarity::Negative => format!("!{}", label(net, id)),
    }
}

/// Renders an excitation unit as `a & !b -> c`.
pub fn describe_excitation(net: &Network, unit: &ExcitationRef) -> String {
    let links = match unit {
        ExcitationRef::Link(id) => net.exciting_link(id).into_iter().collect::<Vec<_>>(),
        ExcitationRef::Group(id) => net
            .group(id)
            .map(|g| g.members.iter().filter_map(|m| net.exciting_link(m)).collect())
            .unwrap_or_default(),
    };
    let Some(first) = links.first() else {
        return unit.to_string();
    };
    let pres: Vec<String> = links.iter().map(|l| signed(net, l.polarity, &l.pre)).collect();
    format!("{} -> {}", pres.join(" & "), label(net, &first.post))
}

/// Derived atoms: every atom the network makes positive, excluding observed
/// positives.
pub fn infer(knet: &KnowledgeNetwork, observed: &[Literal]) -> Result<BTreeSet<String>, RuleError> {
    infer_bounded(knet, observed, None)
}

/// As [`infer`]; `max_rounds` overrides the default budget of one round per
/// neuron.
pub fn infer_bounded(
    knet: &KnowledgeNetwork,
    observed: &[Literal],
    max_rounds: Option<usize>,
) -> Result<BTreeSet<String>, RuleError> {
    let assignment = assignment(knet, observed)?;
    let limit = max_rounds.unwrap_or_else(|| knet.network.neurons().len().max(1));
    let done = evaluate_bounded(&knet.network, &assignment, &Schedule::FreeRun, limit)?;
    Ok(done
        .activation
        .positive_neurons(&knet.network)
        .into_iter()
        .filter(|id| !assignment.contains_key(id))
        .map(|id| label(&knet.network, &id))
        .collect())
}

/// As [`infer`], returning the per-round record instead.
pub fn trace_inference(
    knet: &KnowledgeNetwork,
    observed: &[Literal],
) -> Result<Vec<InferenceRound>, RuleError> {
    trace_inference_bounded(knet, observed, None)
}

pub fn trace_inference_bounded(
    knet: &KnowledgeNetwork,
    observed: &[Literal],
    max_rounds: Option<usize>,
) -> Result<Vec<InferenceRound>, RuleError> {
    let net = &knet.network;
    let assignment = assignment(knet, observed)?;
    let (_, records) = evaluate_traced_bounded(net, &assignment, &Schedule::FreeRun, max_rounds)?;
    Ok(records
        .into_iter()
        .map(|record| {
            let mut activated: Vec<String> =
                record.activated.iter().map(|id| label(net, id)).collect();
            activated.sort();
            let active_inhibitions = record
                .active_inhibitory_links
                .iter()
                .filter_map(|id| net.inhibitory_link(id))
                .map(|il| {
                    format!(
                        "{} -| {}",
                        signed(net, il.polarity, &il.pre),
                        describe_excitation(net, &il.target)
                    )
                })
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let masked = record
                .masked
                .iter()
                .map(|unit| describe_excitation(net, unit))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            InferenceRound {
                round: record.round,
                activated,
                active_inhibitions,
                masked,
                fixed_point: record.fixed_point,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{compile_rule_library, parse_rule_library, CompileMode, ANIMALS};

    fn facts(text: &[&str]) -> Vec<Literal> {
        text.iter().map(|t| Literal::parse_fact(t).unwrap()).collect()
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn animals(mode: CompileMode) -> KnowledgeNetwork {
        compile_rule_library(&parse_rule_library(ANIMALS).unwrap(), mode).unwrap()
    }

    #[test]
    fn specificity_override() {
        let lib = parse_rule_library("IF A THEN E\nIF A AND B THEN D").unwrap();
        let knet = compile_rule_library(&lib, CompileMode::Conjunctive).unwrap();
        assert_eq!(infer(&knet, &facts(&["A", "B"])).unwrap(), set(&["D"]));
        assert_eq!(infer(&knet, &facts(&["A"])).unwrap(), set(&["E"]));
        assert_eq!(infer(&knet, &facts(&["A", "!B"])).unwrap(), set(&["E"]));
        assert_eq!(infer(&knet, &facts(&["B"])).unwrap(), set(&[]));
    }

    #[test]
    fn tiger_query() {
        let knet = animals(CompileMode::Competitive);
        assert_eq!(
            infer(&knet, &facts(&["yellow", "black_strips"])).unwrap(),
            set(&["tiger"])
        );
        let trace = trace_inference(&knet, &facts(&["yellow", "black_strips"])).unwrap();
        let masked: BTreeSet<&str> = trace
            .iter()
            .flat_map(|r| r.masked.iter().map(String::as_str))
            .collect();
        for m in ["yellow -> leopard", "yellow -> giraffe", "black_strips -> zebra"] {
            assert!(masked.contains(m), "{m} not masked: {masked:?}");
        }
        assert!(trace.last().unwrap().fixed_point);
    }

    #[test]
    fn hair_is_a_mammal() {
        let knet = animals(CompileMode::Conjunctive);
        assert_eq!(infer(&knet, &facts(&["hair"])).unwrap(), set(&["mammal"]));
    }

    #[test]
    fn competitive_mode_fires_on_any_surviving_antecedent() {
        let knet = animals(CompileMode::Competitive);
        let derived = infer(&knet, &facts(&["hair"])).unwrap();
        assert!(derived.contains("mammal") && derived.contains("beast"));
    }

    #[test]
    fn leopard_chain_trace() {
        let knet = animals(CompileMode::Conjunctive);
        let observed = facts(&["hair", "predator", "yellow", "spots"]);
        assert_eq!(
            infer(&knet, &observed).unwrap(),
            set(&["mammal", "beast", "leopard"])
        );
        let trace = trace_inference(&knet, &observed).unwrap();
        let activated: Vec<Vec<String>> = trace.iter().map(|r| r.activated.clone()).collect();
        assert_eq!(
            activated,
            [vec!["mammal".to_string()], vec!["beast".into()], vec!["leopard".into()], vec![]]
        );
        assert_eq!(trace.iter().map(|r| r.round).collect::<Vec<_>>(), [1, 2, 3, 4]);
        assert!(trace[3].fixed_point && !trace[2].fixed_point);
    }

    #[test]
    fn penguin_needs_negative_airborne() {
        let knet = animals(CompileMode::Conjunctive);
        let observed = facts(&["feather", "egg", "!airborne", "aquatic", "black_white"]);
        assert_eq!(infer(&knet, &observed).unwrap(), set(&["bird", "penguin"]));
        let observed = facts(&["feather", "egg", "aquatic", "black_white"]);
        assert_eq!(infer(&knet, &observed).unwrap(), set(&["bird"]));
    }

    #[test]
    fn empty_observation_derives_nothing() {
        let knet = animals(CompileMode::Conjunctive);
        assert!(infer(&knet, &[]).unwrap().is_empty());
        assert_eq!(trace_inference(&knet, &[]).unwrap().len(), 1);
    }

    #[test]
    fn observation_errors() {
        let knet = animals(CompileMode::Conjunctive);
        assert_eq!(
            infer(&knet, &facts(&["wings"])),
            Err(RuleError::UnknownAtom("wings".into()))
        );
        assert_eq!(
            infer(&knet, &facts(&["hair", "!hair"])),
            Err(RuleError::ConflictingObservation("hair".into()))
        );
        assert!(infer(&knet, &facts(&["hair", "hair"])).is_ok());
    }

    #[test]
    fn observed_intermediate_atoms_are_not_reported() {
        let knet = animals(CompileMode::Conjunctive);
        assert_eq!(
            infer(&knet, &facts(&["mammal", "hair"])).unwrap(),
            set(&[])
        );
        // A negative observation blocks derivation of that atom.
        assert_eq!(infer(&knet, &facts(&["hair", "!mammal"])).unwrap(), set(&[]));
    }

    #[test]
    fn round_budget() {
        let knet = animals(CompileMode::Conjunctive);
        let observed = facts(&["hair", "predator", "yellow", "spots"]);
        assert!(matches!(
            infer_bounded(&knet, &observed, Some(2)),
            Err(RuleError::Eval(crate::network::EvalError::RoundLimit(2)))
        ));
        assert!(infer_bounded(&knet, &observed, Some(4)).is_ok());
        assert!(trace_inference_bounded(&knet, &observed, Some(3)).is_err());
    }

    #[test]
    fn describes_groups() {
        let knet = animals(CompileMode::Conjunctive);
        let unit = &knet.rules["R12"][0];
        assert_eq!(
            describe_excitation(&knet.network, unit),
            "bird & !airborne & long_neck & long_leg & black_white -> ostrich"
        );
    }
}
