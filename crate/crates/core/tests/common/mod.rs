//! Seeded generators and property checks shared by the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use pldnn::expr::{BinaryOp, Expression};
use pldnn::network::{
    deserialize_network, evaluate, excitation_status, serialize_network, step_round,
    ActivationState, Assignment, ExcitationRef, GroupKind, LinkId, Network, NeuronId, NeuronKind,
    NeuronState, Polarity, Schedule,
};
use pldnn::rules::{Literal, Rule, RuleLibrary, Sign};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn polarity(rng: &mut ChaCha8Rng) -> Polarity {
    if rng.gen_bool(0.5) {
        Polarity::Positive
    } else {
        Polarity::Negative
    }
}

/// A random well-formed network with CELs, ILs and CILs, plus an assignment
/// covering its declared inputs (and sometimes clamping a few other neurons).
pub fn random_network(rng: &mut ChaCha8Rng) -> (Network, Assignment) {
    let mut net = Network::new();
    let n = rng.gen_range(1..=10);
    let neurons: Vec<NeuronId> = (0..n)
        .map(|i| net.add_neuron(format!("v{i}"), NeuronKind::Internal).unwrap())
        .collect();
    let inputs: Vec<&NeuronId> = neurons.iter().filter(|_| rng.gen_bool(0.3)).collect();
    for id in &inputs {
        net.mark_input(id).unwrap();
    }

    let mut links: Vec<(LinkId, NeuronId)> = Vec::new();
    if n >= 2 {
        for _ in 0..rng.gen_range(0..=2 * n) {
            let pre = neurons.choose(rng).unwrap().clone();
            let post = neurons.choose(rng).unwrap().clone();
            if pre == post {
                continue;
            }
            let id = net.add_exciting_link(polarity(rng), &pre, &post).unwrap();
            links.push((id, post));
        }
    }

    // CELs from links sharing a post.
    let mut by_post: BTreeMap<NeuronId, Vec<LinkId>> = BTreeMap::new();
    for (id, post) in &links {
        by_post.entry(post.clone()).or_default().push(id.clone());
    }
    let mut units: Vec<ExcitationRef> = Vec::new();
    for (_, mut members) in by_post {
        members.shuffle(rng);
        while members.len() >= 2 && rng.gen_bool(0.4) {
            let size = rng.gen_range(2..=members.len().min(3));
            let group: Vec<LinkId> = members.drain(..size).collect();
            units.push(ExcitationRef::Group(net.add_group(GroupKind::Cel, &group).unwrap()));
        }
        units.extend(members.into_iter().map(ExcitationRef::Link));
    }

    // ILs on units, some bundled into CILs.
    if !units.is_empty() {
        for _ in 0..rng.gen_range(0..=n) {
            let target = units.choose(rng).unwrap().clone();
            let k = if rng.gen_bool(0.3) { 2 } else { 1 };
            let ils: Vec<LinkId> = (0..k)
                .map(|_| {
                    let pre = neurons.choose(rng).unwrap().clone();
                    net.add_inhibitory_link(polarity(rng), &pre, target.clone())
                        .unwrap()
                })
                .collect();
            if ils.len() >= 2 {
                net.add_group(GroupKind::Cil, &ils).unwrap();
            }
        }
    }

    let mut assignment = Assignment::new();
    for id in &neurons {
        if inputs.contains(&id) || rng.gen_bool(0.15) {
            let state = if rng.gen_bool(0.5) {
                NeuronState::Positive
            } else {
                NeuronState::Negative
            };
            assignment.insert(id.clone(), state);
        }
    }
    (net, assignment)
}

/// Rebuilds `net` with every storage vector shuffled.
pub fn shuffled(net: &Network, rng: &mut ChaCha8Rng) -> Network {
    let mut parts = net.clone().into_parts();
    parts.neurons.shuffle(rng);
    parts.exciting_links.shuffle(rng);
    parts.inhibitory_links.shuffle(rng);
    parts.groups.shuffle(rng);
    for group in &mut parts.groups {
        group.members.shuffle(rng);
    }
    Network::from_parts(parts).expect("shuffling keeps a network valid")
}

fn states(net: &Network, act: &ActivationState) -> BTreeMap<NeuronId, NeuronState> {
    act.neuron_states(net)
}

/// Steps round by round: states only ever leave resting, each newly positive
/// neuron is the post of an unmasked active excitation (and every such
/// resting post does become positive), the fixed point arrives within
/// |neurons| rounds, it agrees with `evaluate`, and one more round changes
/// nothing.
pub fn check_convergence(net: &Network, assignment: &Assignment) -> Result<(), String> {
    let mut act = ActivationState::from_states(net, assignment).map_err(|e| e.to_string())?;
    let limit = net.neurons().len().max(1);
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > limit {
            return Err(format!("no fixed point within {limit} rounds"));
        }
        let before = states(net, &act);
        let status = excitation_status(net, &act).map_err(|e| e.to_string())?;
        let expected: BTreeSet<NeuronId> = status
            .effective
            .iter()
            .filter_map(|u| net.excitation_post(u))
            .filter(|post| before[*post].is_resting())
            .cloned()
            .collect();
        let next = step_round(net, &act).map_err(|e| e.to_string())?;
        let after = states(net, &next);
        let mut activated = BTreeSet::new();
        for (id, old) in &before {
            let new = after[id];
            if !old.is_resting() && new != *old {
                return Err(format!("{id} left state {old:?} for {new:?}"));
            }
            if old.is_resting() && !new.is_resting() {
                if new != NeuronState::Positive {
                    return Err(format!("{id} activated to {new:?}"));
                }
                activated.insert(id.clone());
            }
        }
        if activated != expected {
            return Err(format!(
                "round {rounds}: activated {activated:?}, unmasked excitations reach {expected:?}"
            ));
        }
        act = next;
        if activated.is_empty() {
            break;
        }
    }
    let done = evaluate(net, assignment, &Schedule::FreeRun).map_err(|e| e.to_string())?;
    if done.rounds != rounds {
        return Err(format!("evaluate took {} rounds, stepping took {rounds}", done.rounds));
    }
    if states(net, &done.activation) != states(net, &act) {
        return Err("evaluate disagrees with stepping".into());
    }
    let again = step_round(net, &done.activation).map_err(|e| e.to_string())?;
    if states(net, &again) != states(net, &done.activation) {
        return Err("step_round moved a fixed point".into());
    }
    Ok(())
}

pub fn check_order_independence(
    net: &Network,
    assignment: &Assignment,
    rng: &mut ChaCha8Rng,
) -> Result<(), String> {
    let other = shuffled(net, rng);
    if &other != net {
        return Err("shuffled network compares unequal".into());
    }
    let a = evaluate(net, assignment, &Schedule::FreeRun).map_err(|e| e.to_string())?;
    let b = evaluate(&other, assignment, &Schedule::FreeRun).map_err(|e| e.to_string())?;
    if a.rounds != b.rounds || states(net, &a.activation) != states(&other, &b.activation) {
        return Err("storage order changed the outcome".into());
    }
    Ok(())
}

pub fn check_serialization(net: &Network, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let text = serialize_network(net);
    let back = deserialize_network(&text).map_err(|e| e.to_string())?;
    if &back != net {
        return Err("round trip changed the network".into());
    }
    if serialize_network(&back) != text || serialize_network(&shuffled(net, rng)) != text {
        return Err("serialization is not byte-stable".into());
    }
    Ok(())
}

/// Runs every network property on one seeded network.
pub fn check_all(seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    let (net, assignment) = random_network(&mut rng);
    check_convergence(&net, &assignment)?;
    check_order_independence(&net, &assignment, &mut rng)?;
    check_serialization(&net, &mut rng)
}

pub const VARIABLES: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

/// A random expression of depth at most `depth` over the first `vars`
/// variables.
pub fn random_expression(rng: &mut ChaCha8Rng, depth: usize, vars: usize) -> Expression {
    if depth == 0 || rng.gen_bool(0.2) {
        return Expression::var(VARIABLES[rng.gen_range(0..vars)]);
    }
    if rng.gen_bool(0.2) {
        return Expression::not(random_expression(rng, depth - 1, vars));
    }
    let op = *[
        BinaryOp::And,
        BinaryOp::Or,
        BinaryOp::Xor,
        BinaryOp::Nand,
        BinaryOp::Nor,
    ]
    .choose(rng)
    .unwrap();
    Expression::binary(
        op,
        random_expression(rng, depth - 1, vars),
        random_expression(rng, depth - 1, vars),
    )
}

/// Plain recursive evaluation, the reference for compiled circuits.
pub fn eval_formula(expr: &Expression, env: &BTreeMap<String, bool>) -> bool {
    match expr {
        Expression::Var(name) => env[name],
        Expression::Not(inner) => !eval_formula(inner, env),
        Expression::Binary(op, l, r) => {
            let (l, r) = (eval_formula(l, env), eval_formula(r, env));
            match op {
                BinaryOp::And => l && r,
                BinaryOp::Or => l || r,
                BinaryOp::Xor => l != r,
                BinaryOp::Nand => !(l && r),
                BinaryOp::Nor => !(l || r),
            }
        }
    }
}

/// A random library over at most 8 atoms and at most 6 rules. Antecedents
/// are drawn from a small pool so rules overlap and compete.
pub fn random_library(rng: &mut ChaCha8Rng) -> RuleLibrary {
    let atoms = rng.gen_range(3..=8);
    let names: Vec<String> = (0..atoms).map(|i| format!("p{i}")).collect();
    let count = rng.gen_range(1..=6);
    let mut rules = Vec::with_capacity(count);
    for i in 0..count {
        let consequent = names.choose(rng).unwrap().clone();
        let pool: Vec<&String> = names.iter().filter(|a| **a != consequent).collect();
        let size = rng.gen_range(1..=pool.len().min(3));
        let antecedents = pool
            .choose_multiple(rng, size)
            .map(|atom| Literal {
                atom: (*atom).clone(),
                sign: if rng.gen_bool(0.75) {
                    Sign::Positive
                } else {
                    Sign::Negative
                },
            })
            .collect();
        rules.push(Rule {
            id: format!("R{}", i + 1),
            antecedents,
            consequent,
        });
    }
    RuleLibrary::new(rules).expect("generated rules are well-formed")
}

/// Every consistent signed observation over `atoms` with at most `max`
/// facts.
pub fn signed_subsets(atoms: &[String], max: usize) -> Vec<Vec<Literal>> {
    fn walk(
        atoms: &[String],
        start: usize,
        max: usize,
        current: &mut Vec<Literal>,
        out: &mut Vec<Vec<Literal>>,
    ) {
        out.push(current.clone());
        if current.len() == max {
            return;
        }
        for i in start..atoms.len() {
            for sign in [Sign::Positive, Sign::Negative] {
                current.push(Literal {
                    atom: atoms[i].clone(),
                    sign,
                });
                walk(atoms, i + 1, max, current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(atoms, 0, max, &mut Vec::new(), &mut out);
    out
}
