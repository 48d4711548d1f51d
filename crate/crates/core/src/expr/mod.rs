//! Propositional expressions compiled into gate circuits.
//!
//! Each operator node instantiates one gate construction wired onto the
//! outputs of its operands; `!(a & b)` and `!(a | b)` fuse into NAND and NOR.
//! Gate outputs are scheduled by depth, and the circuit is evaluated with
//! [`Schedule::Layered`] so a gate output that stays resting once its layer
//! settles reads as negative to the gates above it.

mod parser;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::gates::{format_truth_table, input_vectors, structure_counts, wire_gate, GateKind, StructureCounts};
use crate::network::{evaluate, Assignment, Network, NeuronId, NeuronKind, NeuronState, Schedule};

pub use parser::{parse_expression, BinaryOp, Expression, ParseError};

/// Largest variable count [`circuit_truth_table`] will enumerate.
pub const MAX_TABLE_VARIABLES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateInstance {
    pub kind: GateKind,
    pub operands: Vec<NeuronId>,
    pub output: NeuronId,
    /// One-based layer index.
    pub layer: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub network: Network,
    /// Variable name and input neuron, in order of first appearance.
    pub variables: Vec<(String, NeuronId)>,
    pub output: NeuronId,
    /// Gate-output neurons per layer; layer `k` is at index `k - 1`.
    pub layers: Vec<Vec<NeuronId>>,
    pub gates: Vec<GateInstance>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("no value bound for variable `{0}`")]
    MissingVariable(String),
    #[error("`{0}` is not a variable of this expression")]
    UnknownVariable(String),
    #[error("{0} variables exceed the truth-table limit of {MAX_TABLE_VARIABLES}")]
    TooManyVariables(usize),
}

struct Compiler {
    network: Network,
    inputs: BTreeMap<String, NeuronId>,
    layers: Vec<Vec<NeuronId>>,
    gates: Vec<GateInstance>,
}

impl Compiler {
    /// Returns the neuron carrying `expr` and its depth.
    fn signal(&mut self, expr: &Expression, root: bool) -> (NeuronId, usize) {
        match expr {
            Expression::Var(name) => (self.inputs[name].clone(), 0),
            Expression::Not(inner) => match inner.as_ref() {
                Expression::Binary(BinaryOp::And, l, r) => self.gate(GateKind::Nand, &[l, r], root),
                Expression::Binary(BinaryOp::Or, l, r) => self.gate(GateKind::Nor, &[l, r], root),
                other => self.gate(GateKind::Not, &[other], root),
            },
            Expression::Binary(op, l, r) => {
                let kind = match op {
                    BinaryOp::And => GateKind::And,
                    BinaryOp::Or => GateKind::Or,
                    BinaryOp::Xor => GateKind::Xor,
                    BinaryOp::Nand => GateKind::Nand,
                    BinaryOp::Nor => GateKind::Nor,
                };
                self.gate(kind, &[l, r], root)
            }
        }
    }

    fn gate(&mut self, kind: GateKind, operands: &[&Expression], root: bool) -> (NeuronId, usize) {
        let (ids, depths): (Vec<_>, Vec<_>) =
            operands.iter().map(|e| self.signal(e, false)).unzip();
        let layer = depths.into_iter().max().unwrap_or(0) + 1;
        // `#` never appears in a variable name, so gate labels cannot clash.
        let label = format!("{}#{}", kind.name().to_lowercase(), self.gates.len() + 1);
        let neuron_kind = if root {
            NeuronKind::Output
        } else {
            NeuronKind::Internal
        };
        let output = self
            .network
            .add_neuron(label, neuron_kind)
            .expect("gate labels are unique");
        wire_gate(&mut self.network, kind, &ids, &output).expect("operands exist");
        if self.layers.len() < layer {
            self.layers.resize(layer, Vec::new());
        }
        self.layers[layer - 1].push(output.clone());
        self.gates.push(GateInstance {
            kind,
            operands: ids,
            output: output.clone(),
            layer,
        });
        (output, layer)
    }
}

pub fn compile_expression(expr: &Expression) -> Circuit {
    let mut compiler = Compiler {
        network: Network::new(),
        inputs: BTreeMap::new(),
        layers: Vec::new(),
        gates: Vec::new(),
    };
    let mut variables = Vec::new();
    for name in expr.variables() {
        let id = compiler
            .network
            .add_neuron(name.clone(), NeuronKind::Input)
            .expect("variables are distinct");
        compiler.network.mark_input(&id).expect("known neuron");
        compiler.inputs.insert(name.clone(), id.clone());
        variables.push((name, id));
    }
    let (output, _) = compiler.signal(expr, true);
    compiler.network.mark_output(&output).expect("known neuron");
    Circuit {
        network: compiler.network,
        variables,
        output,
        layers: compiler.layers,
        gates: compiler.gates,
    }
}

impl Circuit {
    pub fn variable_names(&self) -> Vec<String> {
        self.variables.iter().map(|(name, _)| name.clone()).collect()
    }

    pub fn schedule(&self) -> Schedule {
        Schedule::Layered(self.layers.clone())
    }

    fn run(&self, assignment: Assignment, schedule: &Schedule) -> bool {
        let done = evaluate(&self.network, &assignment, schedule)
            .expect("compiled circuits are valid and fully assigned");
        done.activation
            .neuron_state(&self.network, &self.output)
            .is_some_and(NeuronState::is_positive)
    }
}

pub fn evaluate_circuit(
    circuit: &Circuit,
    assignment: &BTreeMap<String, bool>,
) -> Result<bool, CircuitError> {
    if let Some(unknown) = assignment
        .keys()
        .find(|name| !circuit.variables.iter().any(|(v, _)| v == *name))
    {
        return Err(CircuitError::UnknownVariable(unknown.clone()));
    }
    let mut inputs = Assignment::new();
    for (name, id) in &circuit.variables {
        let value = assignment
            .get(name)
            .ok_or_else(|| CircuitError::MissingVariable(name.clone()))?;
        inputs.insert(id.clone(), NeuronState::from_bool(*value));
    }
    Ok(circuit.run(inputs, &circuit.schedule()))
}

/// Outputs over every assignment, variables in first-appearance order with
/// the first most significant and false before true.
pub fn circuit_truth_table(circuit: &Circuit) -> Result<Vec<bool>, CircuitError> {
    let n = circuit.variables.len();
    if n > MAX_TABLE_VARIABLES {
        return Err(CircuitError::TooManyVariables(n));
    }
    let schedule = circuit.schedule();
    Ok(input_vectors(n)
        .map(|row| {
            let inputs = circuit
                .variables
                .iter()
                .zip(row)
                .map(|((_, id), b)| (id.clone(), NeuronState::from_bool(b)))
                .collect();
            circuit.run(inputs, &schedule)
        })
        .collect())
}

/// `0/1` table with a header of variable names and `out`.
pub fn format_circuit_table(circuit: &Circuit) -> Result<String, CircuitError> {
    let outputs = circuit_truth_table(circuit)?;
    Ok(format_truth_table(&circuit.variable_names(), &outputs))
}

/// Structure of a compiled circuit next to the spiking neural P system
/// reference neuron counts of the same gates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonReport {
    pub counts: StructureCounts,
    /// Per gate instance, in construction order.
    pub gates: Vec<(GateKind, usize)>,
    pub reference_total: usize,
}

impl ComparisonReport {
    pub fn pldnn_neurons(&self) -> usize {
        self.counts.neurons
    }

    pub fn pldnn_links(&self) -> usize {
        self.counts.links()
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pldnn structure")?;
        for line in self.counts.to_string().lines() {
            writeln!(f, "  {line}")?;
        }
        writeln!(f, "  links {}", self.pldnn_links())?;
        writeln!(f, "snp reference neurons per gate (literature values)")?;
        for (kind, neurons) in &self.gates {
            writeln!(f, "  {kind} {neurons}")?;
        }
        writeln!(f, "  total {}", self.reference_total)?;
        writeln!(
            f,
            "neurons pldnn {} reference {}",
            self.pldnn_neurons(),
            self.reference_total
        )
    }
}

pub fn comparison_report(circuit: &Circuit) -> ComparisonReport {
    let gates: Vec<(GateKind, usize)> = circuit
        .gates
        .iter()
        .map(|g| (g.kind, g.kind.snp_reference_neurons()))
        .collect();
    ComparisonReport {
        counts: structure_counts(&circuit.network),
        reference_total: gates.iter().map(|(_, n)| n).sum(),
        gates,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{build_gate, gate_truth_table};
    use proptest::prelude::*;

    // Independent oracle: direct recursive evaluation of the formula.
    fn oracle(expr: &Expression, env: &BTreeMap<String, bool>) -> bool {
        match expr {
            Expression::Var(name) => env[name],
            Expression::Not(inner) => !oracle(inner, env),
            Expression::Binary(op, l, r) => {
                let (a, b) = (oracle(l, env), oracle(r, env));
                match op {
                    BinaryOp::And => a && b,
                    BinaryOp::Or => a || b,
                    BinaryOp::Xor => a ^ b,
                    BinaryOp::Nand => !(a && b),
                    BinaryOp::Nor => !(a || b),
                }
            }
        }
    }

    fn oracle_table(expr: &Expression) -> Vec<bool> {
        let vars = expr.variables();
        (0..1usize << vars.len())
            .map(|row| {
                let env = vars
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v.clone(), row >> (vars.len() - 1 - i) & 1 == 1))
                    .collect();
                oracle(expr, &env)
            })
            .collect()
    }

    fn env(pairs: &[(&str, bool)]) -> BTreeMap<String, bool> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    const REFERENCE: &str = "(x1 & x2) | !(x3 & x4)";

    #[test]
    fn reference_expression_structure() {
        let circuit = compile_expression(&parse_expression(REFERENCE).unwrap());
        let kinds: Vec<_> = circuit.gates.iter().map(|g| g.kind).collect();
        assert_eq!(kinds, [GateKind::And, GateKind::Nand, GateKind::Or]);
        assert_eq!(circuit.layers.len(), 2);
        let report = comparison_report(&circuit);
        assert_eq!(report.pldnn_neurons(), 7);
        assert_eq!(report.reference_total, 6 + 8 + 10);
        assert!(report.pldnn_neurons() < report.reference_total);
    }

    #[test]
    fn reference_expression_values() {
        let circuit = compile_expression(&parse_expression(REFERENCE).unwrap());
        let all_true = env(&[("x1", true), ("x2", true), ("x3", true), ("x4", true)]);
        assert_eq!(evaluate_circuit(&circuit, &all_true), Ok(true));
        let mixed = env(&[("x1", false), ("x2", false), ("x3", true), ("x4", true)]);
        assert_eq!(evaluate_circuit(&circuit, &mixed), Ok(false));
        assert_eq!(
            circuit_truth_table(&circuit).unwrap(),
            oracle_table(&parse_expression(REFERENCE).unwrap())
        );
    }

    #[test]
    fn identity_circuit() {
        let circuit = compile_expression(&Expression::var("a"));
        assert!(circuit.gates.is_empty());
        assert_eq!(circuit.output, circuit.variables[0].1);
        assert_eq!(evaluate_circuit(&circuit, &env(&[("a", true)])), Ok(true));
        assert_eq!(evaluate_circuit(&circuit, &env(&[("a", false)])), Ok(false));
        let report = comparison_report(&circuit);
        assert!(report.gates.is_empty());
        assert_eq!(report.reference_total, 0);
    }

    #[test]
    fn xor_circuit_matches_gate_budget() {
        let circuit = compile_expression(&parse_expression("a ^ b").unwrap());
        let counts = structure_counts(&circuit.network);
        assert_eq!((counts.neurons, counts.pel, counts.pil), (3, 2, 2));
        assert_eq!(counts.links(), 4);
    }

    #[test]
    fn single_gate_circuits_match_gate_tables() {
        for (text, kind) in [
            ("a & b", GateKind::And),
            ("a | b", GateKind::Or),
            ("!a", GateKind::Not),
            ("a NOR b", GateKind::Nor),
            ("!(a | b)", GateKind::Nor),
            ("a ^ b", GateKind::Xor),
            ("a NAND b", GateKind::Nand),
        ] {
            let circuit = compile_expression(&parse_expression(text).unwrap());
            assert_eq!(
                circuit_truth_table(&circuit).unwrap(),
                gate_truth_table(&build_gate(kind)),
                "{text}"
            );
        }
    }

    #[test]
    fn tautology_and_not_report() {
        let circuit = compile_expression(&parse_expression("a | !a").unwrap());
        assert_eq!(circuit_truth_table(&circuit).unwrap(), [true, true]);
        let not = comparison_report(&compile_expression(&parse_expression("!a").unwrap()));
        assert_eq!((not.pldnn_neurons(), not.reference_total), (2, 4));
    }

    #[test]
    fn binding_errors() {
        let circuit = compile_expression(&parse_expression("a & b").unwrap());
        assert_eq!(
            evaluate_circuit(&circuit, &env(&[("a", true)])),
            Err(CircuitError::MissingVariable("b".into()))
        );
        assert_eq!(
            evaluate_circuit(&circuit, &env(&[("a", true), ("b", true), ("c", true)])),
            Err(CircuitError::UnknownVariable("c".into()))
        );
    }

    #[test]
    fn truth_table_variable_guard() {
        let text = (0..21).map(|i| format!("v{i}")).collect::<Vec<_>>().join(" | ");
        let circuit = compile_expression(&parse_expression(&text).unwrap());
        assert_eq!(
            circuit_truth_table(&circuit),
            Err(CircuitError::TooManyVariables(21))
        );
    }

    #[test]
    fn table_text() {
        let circuit = compile_expression(&parse_expression("a & !b").unwrap());
        assert_eq!(
            format_circuit_table(&circuit).unwrap(),
            "a b out\n0 0 0\n0 1 0\n1 0 1\n1 1 0\n"
        );
    }

    fn arb_expr() -> impl Strategy<Value = Expression> {
        let leaf = (0..6u8).prop_map(|i| Expression::var(format!("v{i}")));
        leaf.prop_recursive(6, 64, 2, |inner| {
            let op = prop::sample::select(vec![
                BinaryOp::And,
                BinaryOp::Or,
                BinaryOp::Xor,
                BinaryOp::Nand,
                BinaryOp::Nor,
            ]);
            prop_oneof![
                inner.clone().prop_map(Expression::not),
                (op, inner.clone(), inner).prop_map(|(op, l, r)| Expression::binary(op, l, r)),
            ]
        })
    }

    proptest! {
        #[test]
        fn circuits_agree_with_formula(expr in arb_expr()) {
            let circuit = compile_expression(&expr);
            prop_assert_eq!(circuit_truth_table(&circuit).unwrap(), oracle_table(&expr));
        }

        #[test]
        fn layers_respect_dependencies(expr in arb_expr()) {
            let circuit = compile_expression(&expr);
            let layer_of: BTreeMap<_, _> = circuit
                .gates
                .iter()
                .map(|g| (g.output.clone(), g.layer))
                .collect();
            for gate in &circuit.gates {
                prop_assert!(circuit.layers[gate.layer - 1].contains(&gate.output));
                for op in &gate.operands {
                    prop_assert!(layer_of.get(op).copied().unwrap_or(0) < gate.layer);
                }
            }
            let scheduled: usize = circuit.layers.iter().map(Vec::len).sum();
            prop_assert_eq!(scheduled, circuit.gates.len());
        }

        #[test]
        fn compilation_is_deterministic(expr in arb_expr()) {
            let a = compile_expression(&expr);
            let b = compile_expression(&expr);
            prop_assert_eq!(structure_counts(&a.network), structure_counts(&b.network));
            prop_assert_eq!(a, b);
        }
    }
}
