//! The six two-layer gate constructions and their census.

use std::fmt;
use std::str::FromStr;

use crate::network::{
    evaluate, Assignment, ExcitationRef, GroupKind, Network, NetworkError, NeuronId, NeuronKind,
    NeuronState, Polarity, Schedule,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    And,
    Or,
    Not,
    Nor,
    Xor,
    Nand,
}

impl GateKind {
    pub const ALL: [GateKind; 6] = [
        Self::And,
        Self::Or,
        Self::Not,
        Self::Nor,
        Self::Xor,
        Self::Nand,
    ];

    pub fn arity(self) -> usize {
        match self {
            Self::Not => 1,
            _ => 2,
        }
    }

    /// The boolean function this gate emulates.
    pub fn apply(self, inputs: &[bool]) -> bool {
        match (self, inputs) {
            (Self::Not, [a]) => !a,
            (Self::And, [a, b]) => *a && *b,
            (Self::Or, [a, b]) => *a || *b,
            (Self::Nor, [a, b]) => !(*a || *b),
            (Self::Xor, [a, b]) => a != b,
            (Self::Nand, [a, b]) => !(*a && *b),
            _ => panic!("{self} takes {} input(s)", self.arity()),
        }
    }

    /// Neuron count of the spiking neural P system (astrocyte-like control)
    /// construction of the same gate. Literature reference value only.
    pub fn snp_reference_neurons(self) -> usize {
        match self {
            Self::And => 6,
            Self::Or => 10,
            Self::Not => 4,
            Self::Nor => 4,
            Self::Xor => 7,
            Self::Nand => 8,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::And => "AND",
            Self::Or => "OR",
            Self::Not => "NOT",
            Self::Nor => "NOR",
            Self::Xor => "XOR",
            Self::Nand => "NAND",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown gate kind `{0}`; expected one of AND, OR, NOT, NOR, XOR, NAND")]
pub struct UnknownGate(pub String);

impl FromStr for GateKind {
    type Err = UnknownGate;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownGate(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateNetwork {
    pub network: Network,
    /// Input neurons in operand order.
    pub inputs: Vec<NeuronId>,
    pub output: NeuronId,
    pub kind: GateKind,
}

/// Wires the links of a `kind` gate from `operands` onto `output` inside an
/// existing network.
///
/// * AND: two PELs grouped in a CEL
/// * OR: two PELs
/// * NOT: one NEL
/// * NOR: two NELs grouped in a CEL
/// * XOR: two PELs, each masked by a PIL from the other operand
/// * NAND: two NELs
pub fn wire_gate(
    network: &mut Network,
    kind: GateKind,
    operands: &[NeuronId],
    output: &NeuronId,
) -> Result<(), NetworkError> {
    if operands.len() != kind.arity() {
        return Err(NetworkError::InvalidComponent(format!(
            "{kind} takes {} operand(s), got {}",
            kind.arity(),
            operands.len()
        )));
    }
    let polarity = match kind {
        GateKind::And | GateKind::Or | GateKind::Xor => Polarity::Positive,
        GateKind::Not | GateKind::Nor | GateKind::Nand => Polarity::Negative,
    };
    let links = operands
        .iter()
        .map(|op| network.add_exciting_link(polarity, op, output))
        .collect::<Result<Vec<_>, _>>()?;
    match kind {
        GateKind::And | GateKind::Nor => {
            network.add_group(GroupKind::Cel, &links)?;
        }
        GateKind::Xor => {
            network.add_inhibitory_link(
                Polarity::Positive,
                &operands[0],
                ExcitationRef::Link(links[1].clone()),
            )?;
            network.add_inhibitory_link(
                Polarity::Positive,
                &operands[1],
                ExcitationRef::Link(links[0].clone()),
            )?;
        }
        GateKind::Or | GateKind::Not | GateKind::Nand => {}
    }
    Ok(())
}

pub fn build_gate(kind: GateKind) -> GateNetwork {
    let mut network = Network::new();
    let inputs: Vec<NeuronId> = (1..=kind.arity())
        .map(|i| {
            network
                .add_neuron(format!("in{i}"), NeuronKind::Input)
                .expect("fresh label")
        })
        .collect();
    let output = network
        .add_neuron("out", NeuronKind::Output)
        .expect("fresh label");
    for input in &inputs {
        network.mark_input(input).expect("known neuron");
    }
    network.mark_output(&output).expect("known neuron");
    wire_gate(&mut network, kind, &inputs, &output).expect("gate construction is well-formed");
    GateNetwork {
        network,
        inputs,
        output,
        kind,
    }
}

/// All input vectors over {false, true}^arity in lexicographic order, first
/// operand most significant, false (negative) first.
pub fn input_vectors(arity: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1usize << arity).map(move |row| {
        (0..arity)
            .map(|bit| row >> (arity - 1 - bit) & 1 == 1)
            .collect()
    })
}

/// Free-run outputs of the gate for every input vector, in
/// [`input_vectors`] order.
pub fn gate_truth_table(gate: &GateNetwork) -> Vec<bool> {
    input_vectors(gate.inputs.len())
        .map(|row| {
            let assignment: Assignment = gate
                .inputs
                .iter()
                .cloned()
                .zip(row.iter().map(|&b| NeuronState::from_bool(b)))
                .collect();
            let done = evaluate(&gate.network, &assignment, &Schedule::FreeRun)
                .expect("gate networks are valid");
            done.activation
                .neuron_state(&gate.network, &gate.output)
                .is_some_and(NeuronState::is_positive)
        })
        .collect()
}

/// Component census of a network.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct StructureCounts {
    pub neurons: usize,
    pub pel: usize,
    pub nel: usize,
    pub pil: usize,
    pub nil: usize,
    pub cel: usize,
    pub cil: usize,
}

impl StructureCounts {
    /// Simple links of every kind.
    pub fn links(&self) -> usize {
        self.pel + self.nel + self.pil + self.nil
    }
}

impl fmt::Display for StructureCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "neurons {}", self.neurons)?;
        writeln!(f, "pel {}", self.pel)?;
        writeln!(f, "nel {}", self.nel)?;
        writeln!(f, "pil {}", self.pil)?;
        writeln!(f, "nil {}", self.nil)?;
        writeln!(f, "cel {}", self.cel)?;
        writeln!(f, "cil {}", self.cil)
    }
}

pub fn structure_counts(network: &Network) -> StructureCounts {
    let mut counts = StructureCounts {
        neurons: network.neurons().len(),
        ..StructureCounts::default()
    };
    for link in network.exciting_links() {
        match link.polarity {
            Polarity::Positive => counts.pel += 1,
            Polarity::Negative => counts.nel += 1,
        }
    }
    for link in network.inhibitory_links() {
        match link.polarity {
            Polarity::Positive => counts.pil += 1,
            Polarity::Negative => counts.nil += 1,
        }
    }
    for group in network.groups() {
        match group.kind {
            GroupKind::Cel => counts.cel += 1,
            GroupKind::Cil => counts.cil += 1,
        }
    }
    counts
}

/// `in1 in2 out` header followed by one `0/1` row per input vector.
pub fn format_truth_table(names: &[String], outputs: &[bool]) -> String {
    let mut text = names.join(" ");
    if !names.is_empty() {
        text.push(' ');
    }
    text.push_str("out\n");
    for (row, out) in input_vectors(names.len()).zip(outputs) {
        for bit in row {
            text.push(if bit { '1' } else { '0' });
            text.push(' ');
        }
        text.push(if *out { '1' } else { '0' });
        text.push('\n');
    }
    text
}
