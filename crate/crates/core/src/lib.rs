//! Logical neural networks built from tri-state neurons, exciting links and
//! inhibitory links that target other links.
//!
//! * [`network`] — topology, validation, synchronous evaluation, documents
//!   and DOT export
//! * [`gates`] — the six two-layer logic gates
//! * [`expr`] — propositional expressions compiled into gate circuits
//! * [`rules`] — if-then rule libraries compiled into knowledge networks
//!
//! ```
//! use pldnn::gates::{build_gate, gate_truth_table, GateKind};
//!
//! assert_eq!(gate_truth_table(&build_gate(GateKind::And)), [false, false, false, true]);
//! ```

pub mod expr;
pub mod gates;
pub mod network;
pub mod rules;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/neurons-and-links.md")]
    struct NeuronsAndLinks;
    #[doc = include_str!("../../../book/src/evaluation.md")]
    struct Evaluation;
    #[doc = include_str!("../../../book/src/gates.md")]
    struct Gates;
    #[doc = include_str!("../../../book/src/expressions.md")]
    struct Expressions;
    #[doc = include_str!("../../../book/src/rules.md")]
    struct Rules;
    #[doc = include_str!("../../../book/src/serialization.md")]
    struct Serialization;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
