//! Network topology: tri-state neurons, exciting links between neurons, and
//! inhibitory links whose post-end is an exciting link rather than a neuron.
//!
//! A [`Network`] is only ever mutated through [`Network::add_component`] (and
//! its typed shorthands), which checks every invariant touched by the new
//! component, or through [`Network::remove_component`], which does not
//! cascade and may therefore leave dangling references behind for
//! [`validate_network`] to report.

mod dot;
mod eval;
mod serial;
mod validate;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use eval::{
    composite_state, effective_excitations, evaluate, evaluate_bounded, evaluate_traced,
    evaluate_traced_bounded,
    excitation_status, link_trigger_state, step_round, ActivationState, Assignment, EvalError,
    Evaluation, ExcitationStatus, RoundRecord, Schedule,
};
pub use dot::export_dot;
pub use serial::{deserialize_network, serialize_network, SerialError, FORMAT_VERSION};
pub use validate::{validate_network, Violation};

use eval::Wiring;

macro_rules! string_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(id: &str) -> Self {
                Self(id.to_owned())
            }
        }
    };
}

string_id!(
    /// Stable identifier of a neuron.
    NeuronId
);
string_id!(
    /// Stable identifier of a simple exciting or inhibitory link.
    LinkId
);
string_id!(
    /// Stable identifier of a composite link (CEL or CIL).
    GroupId
);

/// Tri-valued neuron state, encoded as `0`, `1` and `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NeuronState {
    #[default]
    Resting,
    Positive,
    Negative,
}

impl NeuronState {
    pub const ALL: [NeuronState; 3] = [Self::Resting, Self::Positive, Self::Negative];

    pub fn encode(self) -> i8 {
        match self {
            Self::Resting => 0,
            Self::Positive => 1,
            Self::Negative => -1,
        }
    }

    pub fn from_bool(value: bool) -> Self {
        if value {
            Self::Positive
        } else {
            Self::Negative
        }
    }

    pub fn is_positive(self) -> bool {
        self == Self::Positive
    }

    pub fn is_resting(self) -> bool {
        self == Self::Resting
    }
}

impl TryFrom<i8> for NeuronState {
    type Error = NetworkError;

    fn try_from(value: i8) -> Result<Self, Self::Error> {
        match value {
            0 => Ok(Self::Resting),
            1 => Ok(Self::Positive),
            -1 => Ok(Self::Negative),
            other => Err(NetworkError::InvalidState(other)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NeuronKind {
    Input,
    Internal,
    Output,
}

/// Trigger polarity shared by exciting and inhibitory links: a positive link
/// fires on a positively activated pre-end, a negative link on a negatively
/// activated one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn trigger(self) -> NeuronState {
        match self {
            Self::Positive => NeuronState::Positive,
            Self::Negative => NeuronState::Negative,
        }
    }
}

/// The four simple link kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkKind {
    Pel,
    Nel,
    Pil,
    Nil,
}

impl LinkKind {
    pub const ALL: [LinkKind; 4] = [Self::Pel, Self::Nel, Self::Pil, Self::Nil];

    pub fn polarity(self) -> Polarity {
        match self {
            Self::Pel | Self::Pil => Polarity::Positive,
            Self::Nel | Self::Nil => Polarity::Negative,
        }
    }

    pub fn is_exciting(self) -> bool {
        matches!(self, Self::Pel | Self::Nel)
    }

    fn exciting(polarity: Polarity) -> Self {
        match polarity {
            Polarity::Positive => Self::Pel,
            Polarity::Negative => Self::Nel,
        }
    }

    fn inhibitory(polarity: Polarity) -> Self {
        match polarity {
            Polarity::Positive => Self::Pil,
            Polarity::Negative => Self::Nil,
        }
    }
}

impl fmt::Display for LinkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pel => "PEL",
            Self::Nel => "NEL",
            Self::Pil => "PIL",
            Self::Nil => "NIL",
        })
    }
}

/// Link states are binary: resting or activated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LinkState {
    #[default]
    Resting,
    Active,
}

impl LinkState {
    pub fn is_active(self) -> bool {
        self == Self::Active
    }

    fn from_bool(active: bool) -> Self {
        if active {
            Self::Active
        } else {
            Self::Resting
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neuron {
    pub id: NeuronId,
    pub label: String,
    pub kind: NeuronKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcitingLink {
    pub id: LinkId,
    pub polarity: Polarity,
    pub pre: NeuronId,
    pub post: NeuronId,
    /// CEL this link belongs to, if any.
    pub group: Option<GroupId>,
}

impl ExcitingLink {
    pub fn kind(&self) -> LinkKind {
        LinkKind::exciting(self.polarity)
    }
}

/// Something an inhibitory link can mask: an ungrouped exciting link or a
/// whole CEL. Also used to name the excitation units a round evaluates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExcitationRef {
    Link(LinkId),
    Group(GroupId),
}

impl ExcitationRef {
    pub fn as_str(&self) -> &str {
        match self {
            Self::Link(id) => id.as_str(),
            Self::Group(id) => id.as_str(),
        }
    }
}

impl fmt::Display for ExcitationRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InhibitoryLink {
    pub id: LinkId,
    pub polarity: Polarity,
    pub pre: NeuronId,
    pub target: ExcitationRef,
    /// CIL this link belongs to, if any.
    pub group: Option<GroupId>,
}

impl InhibitoryLink {
    pub fn kind(&self) -> LinkKind {
        LinkKind::inhibitory(self.polarity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Cel,
    Cil,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Cel => "CEL",
            Self::Cil => "CIL",
        })
    }
}

/// Conjunction of at least two simple links of the same family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeGroup {
    pub id: GroupId,
    pub kind: GroupKind,
    pub members: Vec<LinkId>,
}

/// Description of a component to insert; ids are assigned by the network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Component {
    Neuron {
        label: String,
        kind: NeuronKind,
    },
    ExcitingLink {
        polarity: Polarity,
        pre: NeuronId,
        post: NeuronId,
    },
    InhibitoryLink {
        polarity: Polarity,
        pre: NeuronId,
        target: ExcitationRef,
    },
    Group {
        kind: GroupKind,
        members: Vec<LinkId>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentId {
    Neuron(NeuronId),
    Link(LinkId),
    Group(GroupId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("invalid neuron state encoding {0}; expected -1, 0 or 1")]
    InvalidState(i8),
    #[error("dangling reference: {0}")]
    DanglingReference(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("invalid component: {0}")]
    InvalidComponent(String),
    #[error("network has {} invariant violation(s): {}", .0.len(), join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Slot {
    Neuron(usize),
    Exciting(usize),
    Inhibitory(usize),
    Group(usize),
}

/// Plain storage view of a network, in storage order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NetworkParts {
    pub neurons: Vec<Neuron>,
    pub exciting_links: Vec<ExcitingLink>,
    pub inhibitory_links: Vec<InhibitoryLink>,
    pub groups: Vec<CompositeGroup>,
    pub inputs: BTreeSet<NeuronId>,
    pub outputs: BTreeSet<NeuronId>,
}

/// Immutable-during-evaluation topology of neurons and links.
///
/// Equality ignores storage order: two networks are equal when they hold the
/// same components under the same ids.
#[derive(Debug, Default)]
pub struct Network {
    parts: NetworkParts,
    index: HashMap<String, Slot>,
    labels: HashMap<String, usize>,
    next_id: usize,
    wiring: OnceLock<Wiring>,
}

impl Clone for Network {
    fn clone(&self) -> Self {
        Self {
            parts: self.parts.clone(),
            index: self.index.clone(),
            labels: self.labels.clone(),
            next_id: self.next_id,
            wiring: OnceLock::new(),
        }
    }
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        fn sorted<T: Clone, K: Ord>(items: &[T], key: impl Fn(&T) -> K) -> Vec<T> {
            let mut items = items.to_vec();
            items.sort_by_key(key);
            items
        }
        let (a, b) = (&self.parts, &other.parts);
        a.inputs == b.inputs
            && a.outputs == b.outputs
            && sorted(&a.neurons, |n| n.id.clone()) == sorted(&b.neurons, |n| n.id.clone())
            && sorted(&a.exciting_links, |l| l.id.clone())
                == sorted(&b.exciting_links, |l| l.id.clone())
            && sorted(&a.inhibitory_links, |l| l.id.clone())
                == sorted(&b.inhibitory_links, |l| l.id.clone())
            && canonical_groups(&a.groups) == canonical_groups(&b.groups)
    }
}

impl Eq for Network {}

/// Groups sorted by id with members sorted; member order carries no meaning.
fn canonical_groups(groups: &[CompositeGroup]) -> Vec<CompositeGroup> {
    let mut groups = groups.to_vec();
    groups.sort_by(|a, b| a.id.cmp(&b.id));
    for group in &mut groups {
        group.members.sort();
    }
    groups
}

impl Network {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a network from explicit parts, checking every invariant.
    pub fn from_parts(parts: NetworkParts) -> Result<Self, NetworkError> {
        let mut network = Self {
            parts,
            ..Self::default()
        };
        network.rebuild_index();
        validate_network(&network).map_err(NetworkError::Invalid)?;
        Ok(network)
    }

    pub fn parts(&self) -> &NetworkParts {
        &self.parts
    }

    pub fn into_parts(self) -> NetworkParts {
        self.parts
    }

    pub fn neurons(&self) -> &[Neuron] {
        &self.parts.neurons
    }

    pub fn exciting_links(&self) -> &[ExcitingLink] {
        &self.parts.exciting_links
    }

    pub fn inhibitory_links(&self) -> &[InhibitoryLink] {
        &self.parts.inhibitory_links
    }

    pub fn groups(&self) -> &[CompositeGroup] {
        &self.parts.groups
    }

    pub fn inputs(&self) -> &BTreeSet<NeuronId> {
        &self.parts.inputs
    }

    pub fn outputs(&self) -> &BTreeSet<NeuronId> {
        &self.parts.outputs
    }

    pub fn neuron(&self, id: &NeuronId) -> Option<&Neuron> {
        match self.slot(id.as_str())? {
            Slot::Neuron(i) => Some(&self.parts.neurons[i]),
            _ => None,
        }
    }

    pub fn neuron_by_label(&self, label: &str) -> Option<&Neuron> {
        self.labels.get(label).map(|&i| &self.parts.neurons[i])
    }

    pub fn exciting_link(&self, id: &LinkId) -> Option<&ExcitingLink> {
        match self.slot(id.as_str())? {
            Slot::Exciting(i) => Some(&self.parts.exciting_links[i]),
            _ => None,
        }
    }

    pub fn inhibitory_link(&self, id: &LinkId) -> Option<&InhibitoryLink> {
        match self.slot(id.as_str())? {
            Slot::Inhibitory(i) => Some(&self.parts.inhibitory_links[i]),
            _ => None,
        }
    }

    pub fn group(&self, id: &GroupId) -> Option<&CompositeGroup> {
        match self.slot(id.as_str())? {
            Slot::Group(i) => Some(&self.parts.groups[i]),
            _ => None,
        }
    }

    pub(crate) fn slot(&self, id: &str) -> Option<Slot> {
        self.index.get(id).copied()
    }

    pub(crate) fn neuron_index(&self, id: &NeuronId) -> Option<usize> {
        match self.slot(id.as_str())? {
            Slot::Neuron(i) => Some(i),
            _ => None,
        }
    }

    /// Post-end neuron of an excitation unit.
    pub fn excitation_post(&self, unit: &ExcitationRef) -> Option<&NeuronId> {
        match unit {
            ExcitationRef::Link(id) => self.exciting_link(id).map(|l| &l.post),
            ExcitationRef::Group(id) => {
                let group = self.group(id)?;
                self.exciting_link(group.members.first()?).map(|l| &l.post)
            }
        }
    }

    /// Inserts a component under a fresh id.
    pub fn add_component(&mut self, component: Component) -> Result<ComponentId, NetworkError> {
        match component {
            Component::Neuron { label, kind } => self.add_neuron(label, kind).map(ComponentId::Neuron),
            Component::ExcitingLink {
                polarity,
                pre,
                post,
            } => self
                .add_exciting_link(polarity, &pre, &post)
                .map(ComponentId::Link),
            Component::InhibitoryLink {
                polarity,
                pre,
                target,
            } => self
                .add_inhibitory_link(polarity, &pre, target)
                .map(ComponentId::Link),
            Component::Group { kind, members } => {
                self.add_group(kind, &members).map(ComponentId::Group)
            }
        }
    }

    pub fn add_neuron(
        &mut self,
        label: impl Into<String>,
        kind: NeuronKind,
    ) -> Result<NeuronId, NetworkError> {
        let label = label.into();
        if label.is_empty() {
            return Err(NetworkError::InvalidComponent("empty neuron label".into()));
        }
        if self.labels.contains_key(&label) {
            return Err(NetworkError::DuplicateLabel(label));
        }
        let id = NeuronId(self.fresh_id("n"));
        let slot = self.parts.neurons.len();
        self.index.insert(id.0.clone(), Slot::Neuron(slot));
        self.labels.insert(label.clone(), slot);
        self.parts.neurons.push(Neuron {
            id: id.clone(),
            label,
            kind,
        });
        self.touch();
        Ok(id)
    }

    pub fn add_exciting_link(
        &mut self,
        polarity: Polarity,
        pre: &NeuronId,
        post: &NeuronId,
    ) -> Result<LinkId, NetworkError> {
        self.require_neuron(pre)?;
        self.require_neuron(post)?;
        if pre == post {
            return Err(NetworkError::InvalidComponent(format!(
                "self-excitation on neuron `{pre}`"
            )));
        }
        let id = LinkId(self.fresh_id("e"));
        self.index
            .insert(id.0.clone(), Slot::Exciting(self.parts.exciting_links.len()));
        self.parts.exciting_links.push(ExcitingLink {
            id: id.clone(),
            polarity,
            pre: pre.clone(),
            post: post.clone(),
            group: None,
        });
        self.touch();
        Ok(id)
    }

    pub fn add_inhibitory_link(
        &mut self,
        polarity: Polarity,
        pre: &NeuronId,
        target: ExcitationRef,
    ) -> Result<LinkId, NetworkError> {
        self.require_neuron(pre)?;
        match self.slot(target.as_str()) {
            None => return Err(NetworkError::DanglingReference(target.to_string())),
            Some(Slot::Exciting(i)) if matches!(target, ExcitationRef::Link(_)) => {
                if let Some(group) = &self.parts.exciting_links[i].group {
                    return Err(NetworkError::InvalidComponent(format!(
                        "exciting link `{target}` is a member of CEL `{group}`; target the CEL instead"
                    )));
                }
            }
            Some(Slot::Group(i))
                if matches!(target, ExcitationRef::Group(_))
                    && self.parts.groups[i].kind == GroupKind::Cel => {}
            Some(_) => {
                return Err(NetworkError::InvalidComponent(format!(
                    "inhibition target `{target}` is not an exciting link or CEL"
                )))
            }
        }
        let id = LinkId(self.fresh_id("i"));
        self.index.insert(
            id.0.clone(),
            Slot::Inhibitory(self.parts.inhibitory_links.len()),
        );
        self.parts.inhibitory_links.push(InhibitoryLink {
            id: id.clone(),
            polarity,
            pre: pre.clone(),
            target,
            group: None,
        });
        self.touch();
        Ok(id)
    }

    pub fn add_group(&mut self, kind: GroupKind, members: &[LinkId]) -> Result<GroupId, NetworkError> {
        if members.len() < 2 {
            return Err(NetworkError::InvalidComponent(format!(
                "{kind} needs at least two members"
            )));
        }
        let mut slots = Vec::with_capacity(members.len());
        for member in members {
            let index = match (kind, self.slot(member.as_str())) {
                (GroupKind::Cel, Some(Slot::Exciting(i))) => {
                    if self.parts.exciting_links[i].group.is_some() {
                        return Err(already_grouped(member));
                    }
                    i
                }
                (GroupKind::Cil, Some(Slot::Inhibitory(i))) => {
                    if self.parts.inhibitory_links[i].group.is_some() {
                        return Err(already_grouped(member));
                    }
                    i
                }
                (_, None) => return Err(NetworkError::DanglingReference(member.to_string())),
                (_, Some(_)) => {
                    return Err(NetworkError::InvalidComponent(format!(
                        "`{member}` cannot be a member of a {kind}"
                    )))
                }
            };
            if slots.contains(&index) {
                return Err(NetworkError::InvalidComponent(format!(
                    "`{member}` listed twice in {kind}"
                )));
            }
            slots.push(index);
        }
        match kind {
            GroupKind::Cel => {
                let post = &self.parts.exciting_links[slots[0]].post;
                if slots
                    .iter()
                    .any(|&i| &self.parts.exciting_links[i].post != post)
                {
                    return Err(NetworkError::InvalidComponent(
                        "CEL members have differing post neurons".into(),
                    ));
                }
                if let Some(il) = self.parts.inhibitory_links.iter().find(|il| {
                    matches!(&il.target, ExcitationRef::Link(t) if members.contains(t))
                }) {
                    return Err(NetworkError::InvalidComponent(format!(
                        "inhibitory link `{}` targets a prospective CEL member",
                        il.id
                    )));
                }
            }
            GroupKind::Cil => {
                let target = &self.parts.inhibitory_links[slots[0]].target;
                if slots
                    .iter()
                    .any(|&i| &self.parts.inhibitory_links[i].target != target)
                {
                    return Err(NetworkError::InvalidComponent(
                        "CIL members have differing targets".into(),
                    ));
                }
            }
        }
        let id = GroupId(self.fresh_id("g"));
        for &i in &slots {
            match kind {
                GroupKind::Cel => self.parts.exciting_links[i].group = Some(id.clone()),
                GroupKind::Cil => self.parts.inhibitory_links[i].group = Some(id.clone()),
            }
        }
        self.index
            .insert(id.0.clone(), Slot::Group(self.parts.groups.len()));
        self.parts.groups.push(CompositeGroup {
            id: id.clone(),
            kind,
            members: members.to_vec(),
        });
        self.touch();
        Ok(id)
    }

    pub fn mark_input(&mut self, id: &NeuronId) -> Result<(), NetworkError> {
        self.require_neuron(id)?;
        self.parts.inputs.insert(id.clone());
        self.touch();
        Ok(())
    }

    pub fn mark_output(&mut self, id: &NeuronId) -> Result<(), NetworkError> {
        self.require_neuron(id)?;
        self.parts.outputs.insert(id.clone());
        self.touch();
        Ok(())
    }

    /// Removes a component by id without touching anything that refers to
    /// it. Returns `false` when the id is unknown.
    pub fn remove_component(&mut self, id: &str) -> bool {
        let Some(slot) = self.slot(id) else {
            return false;
        };
        match slot {
            Slot::Neuron(i) => {
                let neuron = self.parts.neurons.remove(i);
                self.parts.inputs.remove(&neuron.id);
                self.parts.outputs.remove(&neuron.id);
            }
            Slot::Exciting(i) => {
                self.parts.exciting_links.remove(i);
            }
            Slot::Inhibitory(i) => {
                self.parts.inhibitory_links.remove(i);
            }
            Slot::Group(i) => {
                self.parts.groups.remove(i);
            }
        }
        self.rebuild_index();
        self.touch();
        true
    }

    fn require_neuron(&self, id: &NeuronId) -> Result<(), NetworkError> {
        match self.slot(id.as_str()) {
            Some(Slot::Neuron(_)) => Ok(()),
            _ => Err(NetworkError::DanglingReference(id.to_string())),
        }
    }

    fn fresh_id(&mut self, prefix: &str) -> String {
        loop {
            let id = format!("{prefix}{}", self.next_id);
            self.next_id += 1;
            if !self.index.contains_key(&id) {
                return id;
            }
        }
    }

    /// Rebuilds lookup tables; later entries with a duplicate id or label are
    /// left out of the index and reported by validation.
    fn rebuild_index(&mut self) {
        self.index.clear();
        self.labels.clear();
        let parts = &self.parts;
        for (i, n) in parts.neurons.iter().enumerate() {
            self.index.entry(n.id.0.clone()).or_insert(Slot::Neuron(i));
            self.labels.entry(n.label.clone()).or_insert(i);
        }
        for (i, l) in parts.exciting_links.iter().enumerate() {
            self.index.entry(l.id.0.clone()).or_insert(Slot::Exciting(i));
        }
        for (i, l) in parts.inhibitory_links.iter().enumerate() {
            self.index
                .entry(l.id.0.clone())
                .or_insert(Slot::Inhibitory(i));
        }
        for (i, g) in parts.groups.iter().enumerate() {
            self.index.entry(g.id.0.clone()).or_insert(Slot::Group(i));
        }
    }

    fn touch(&mut self) {
        self.wiring = OnceLock::new();
    }

    pub(crate) fn wiring(&self) -> Result<&Wiring, NetworkError> {
        if let Some(wiring) = self.wiring.get() {
            return Ok(wiring);
        }
        validate_network(self).map_err(NetworkError::Invalid)?;
        Ok(self.wiring.get_or_init(|| Wiring::build(self)))
    }
}

fn already_grouped(member: &LinkId) -> NetworkError {
    NetworkError::InvalidComponent(format!("`{member}` already belongs to a group"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and_gate() -> (Network, NeuronId, NeuronId, NeuronId) {
        let mut net = Network::new();
        let a = net.add_neuron("in1", NeuronKind::Input).unwrap();
        let b = net.add_neuron("in2", NeuronKind::Input).unwrap();
        let out = net.add_neuron("out", NeuronKind::Output).unwrap();
        let pa = net.add_exciting_link(Polarity::Positive, &a, &out).unwrap();
        let pb = net.add_exciting_link(Polarity::Positive, &b, &out).unwrap();
        net.add_group(GroupKind::Cel, &[pa, pb]).unwrap();
        (net, a, b, out)
    }

    #[test]
    fn and_gate_component_counts() {
        let (net, ..) = and_gate();
        assert_eq!(net.neurons().len(), 3);
        assert_eq!(net.exciting_links().len(), 2);
        assert_eq!(net.groups().len(), 1);
        assert!(net.exciting_links().iter().all(|l| l.group.is_some()));
        assert!(validate_network(&net).is_ok());
    }

    #[test]
    fn inhibition_of_missing_link_is_dangling() {
        let (mut net, a, ..) = and_gate();
        let err = net
            .add_component(Component::InhibitoryLink {
                polarity: Polarity::Positive,
                pre: a,
                target: ExcitationRef::Link("e99".into()),
            })
            .unwrap_err();
        assert_eq!(err, NetworkError::DanglingReference("e99".into()));
    }

    #[test]
    fn duplicate_label_rejected() {
        let (mut net, ..) = and_gate();
        let err = net
            .add_component(Component::Neuron {
                label: "out".into(),
                kind: NeuronKind::Internal,
            })
            .unwrap_err();
        assert_eq!(err, NetworkError::DuplicateLabel("out".into()));
    }

    #[test]
    fn cel_with_differing_posts_rejected() {
        let mut net = Network::new();
        let a = net.add_neuron("a", NeuronKind::Input).unwrap();
        let b = net.add_neuron("b", NeuronKind::Output).unwrap();
        let c = net.add_neuron("c", NeuronKind::Output).unwrap();
        let ab = net.add_exciting_link(Polarity::Positive, &a, &b).unwrap();
        let ac = net.add_exciting_link(Polarity::Positive, &a, &c).unwrap();
        assert!(matches!(
            net.add_group(GroupKind::Cel, &[ab.clone(), ac]),
            Err(NetworkError::InvalidComponent(_))
        ));
        assert!(matches!(
            net.add_group(GroupKind::Cel, &[ab]),
            Err(NetworkError::InvalidComponent(_))
        ));
    }

    #[test]
    fn self_link_and_il_on_il_rejected() {
        let mut net = Network::new();
        let a = net.add_neuron("a", NeuronKind::Input).unwrap();
        let b = net.add_neuron("b", NeuronKind::Output).unwrap();
        assert!(net.add_exciting_link(Polarity::Positive, &a, &a).is_err());
        let ab = net.add_exciting_link(Polarity::Positive, &a, &b).unwrap();
        let il = net
            .add_inhibitory_link(Polarity::Positive, &b, ExcitationRef::Link(ab))
            .unwrap();
        assert!(net
            .add_inhibitory_link(Polarity::Positive, &a, ExcitationRef::Link(il))
            .is_err());
    }

    #[test]
    fn grouped_link_cannot_be_targeted_directly() {
        let (mut net, a, ..) = and_gate();
        let member = net.exciting_links()[0].id.clone();
        assert!(net
            .add_inhibitory_link(Polarity::Positive, &a, ExcitationRef::Link(member))
            .is_err());
        let cel = net.groups()[0].id.clone();
        assert!(net
            .add_inhibitory_link(Polarity::Positive, &a, ExcitationRef::Group(cel))
            .is_ok());
    }

    #[test]
    fn state_encoding_is_closed() {
        for state in NeuronState::ALL {
            assert_eq!(NeuronState::try_from(state.encode()).unwrap(), state);
        }
        assert_eq!(
            NeuronState::try_from(2),
            Err(NetworkError::InvalidState(2))
        );
    }

    #[test]
    fn fresh_ids_skip_existing() {
        let (net, ..) = and_gate();
        let mut parts = net.into_parts();
        parts.neurons[0].id = "n7".into();
        for link in &mut parts.exciting_links {
            if link.pre.as_str() == "n0" {
                link.pre = "n7".into();
            }
        }
        let mut net = Network::from_parts(parts).unwrap();
        let ids: Vec<_> = (0..10)
            .map(|i| net.add_neuron(format!("x{i}"), NeuronKind::Internal).unwrap())
            .collect();
        assert!(ids.iter().all(|id| id.as_str() != "n7"));
    }
}
