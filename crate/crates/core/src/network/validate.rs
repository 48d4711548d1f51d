use std::collections::{HashMap, HashSet};
use std::fmt;

use super::{ExcitationRef, GroupId, GroupKind, LinkId, Network, NeuronId};

/// A single broken invariant found by [`validate_network`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateId(String),
    DuplicateLabel(String),
    EmptyLabel(NeuronId),
    SelfExcitation(LinkId),
    DanglingNeuron { component: String, neuron: NeuronId },
    DanglingTarget { link: LinkId, target: String },
    /// Target exists but is not an ungrouped exciting link or a CEL.
    InvalidTarget { link: LinkId, target: String },
    DanglingMember { group: GroupId, member: LinkId },
    InvalidMember { group: GroupId, member: LinkId },
    DuplicateMember { group: GroupId, member: LinkId },
    GroupTooSmall(GroupId),
    /// The link's `group` field disagrees with the group member lists.
    MembershipMismatch(LinkId),
    CelMixedPost(GroupId),
    CilMixedTarget(GroupId),
    UnknownIo(NeuronId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DuplicateId(id) => write!(f, "duplicate id `{id}`"),
            Self::DuplicateLabel(label) => write!(f, "duplicate label `{label}`"),
            Self::EmptyLabel(id) => write!(f, "neuron `{id}` has an empty label"),
            Self::SelfExcitation(id) => write!(f, "exciting link `{id}` connects a neuron to itself"),
            Self::DanglingNeuron { component, neuron } => {
                write!(f, "`{component}` refers to missing neuron `{neuron}`")
            }
            Self::DanglingTarget { link, target } => {
                write!(f, "inhibitory link `{link}` targets missing `{target}`")
            }
            Self::InvalidTarget { link, target } => write!(
                f,
                "inhibitory link `{link}` targets `{target}`, which is not an ungrouped exciting link or CEL"
            ),
            Self::DanglingMember { group, member } => {
                write!(f, "group `{group}` lists missing link `{member}`")
            }
            Self::InvalidMember { group, member } => {
                write!(f, "group `{group}` lists `{member}` of the wrong link family")
            }
            Self::DuplicateMember { group, member } => {
                write!(f, "group `{group}` lists `{member}` more than once")
            }
            Self::GroupTooSmall(id) => write!(f, "group `{id}` has fewer than two members"),
            Self::MembershipMismatch(id) => {
                write!(f, "link `{id}` group field disagrees with group member lists")
            }
            Self::CelMixedPost(id) => write!(f, "CEL `{id}` members have differing post neurons"),
            Self::CilMixedTarget(id) => write!(f, "CIL `{id}` members have differing targets"),
            Self::UnknownIo(id) => write!(f, "input/output set names missing neuron `{id}`"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Neuron,
    Exciting,
    Inhibitory,
    Cel,
    Cil,
}

/// Checks every topology invariant and returns all violations found.
pub fn validate_network(network: &Network) -> Result<(), Vec<Violation>> {
    let parts = network.parts();
    let mut violations = Vec::new();

    let ids = parts
        .neurons
        .iter()
        .map(|n| (n.id.as_str(), Kind::Neuron))
        .chain(parts.exciting_links.iter().map(|l| (l.id.as_str(), Kind::Exciting)))
        .chain(parts.inhibitory_links.iter().map(|l| (l.id.as_str(), Kind::Inhibitory)))
        .chain(parts.groups.iter().map(|g| {
            let kind = match g.kind {
                GroupKind::Cel => Kind::Cel,
                GroupKind::Cil => Kind::Cil,
            };
            (g.id.as_str(), kind)
        }));
    let mut kinds: HashMap<&str, Kind> = HashMap::new();
    for (id, kind) in ids {
        if kinds.insert(id, kind).is_some() {
            violations.push(Violation::DuplicateId(id.to_owned()));
        }
    }
    let kind_of = |id: &str| kinds.get(id).copied();
    let is_neuron = |id: &NeuronId| kind_of(id.as_str()) == Some(Kind::Neuron);

    let mut labels = HashSet::new();
    for n in &parts.neurons {
        if n.label.is_empty() {
            violations.push(Violation::EmptyLabel(n.id.clone()));
        } else if !labels.insert(n.label.as_str()) {
            violations.push(Violation::DuplicateLabel(n.label.clone()));
        }
    }

    // Which group(s) list each link.
    let mut listed_in: HashMap<&str, Vec<&GroupId>> = HashMap::new();
    for g in &parts.groups {
        for m in &g.members {
            listed_in.entry(m.as_str()).or_default().push(&g.id);
        }
    }
    let check_membership = |id: &LinkId, group: &Option<GroupId>, violations: &mut Vec<Violation>| {
        let listed = listed_in.get(id.as_str()).map(Vec::as_slice).unwrap_or(&[]);
        let consistent = match group {
            None => listed.is_empty(),
            Some(g) => listed.len() == 1 && listed[0] == g,
        };
        if !consistent {
            violations.push(Violation::MembershipMismatch(id.clone()));
        }
    };

    let exciting: HashMap<&str, &super::ExcitingLink> = parts
        .exciting_links
        .iter()
        .map(|l| (l.id.as_str(), l))
        .collect();
    let inhibitory: HashMap<&str, &super::InhibitoryLink> = parts
        .inhibitory_links
        .iter()
        .map(|l| (l.id.as_str(), l))
        .collect();

    for l in &parts.exciting_links {
        for end in [&l.pre, &l.post] {
            if !is_neuron(end) {
                violations.push(Violation::DanglingNeuron {
                    component: l.id.to_string(),
                    neuron: end.clone(),
                });
            }
        }
        if l.pre == l.post {
            violations.push(Violation::SelfExcitation(l.id.clone()));
        }
        check_membership(&l.id, &l.group, &mut violations);
    }

    for l in &parts.inhibitory_links {
        if !is_neuron(&l.pre) {
            violations.push(Violation::DanglingNeuron {
                component: l.id.to_string(),
                neuron: l.pre.clone(),
            });
        }
        let target = l.target.as_str();
        let valid = match (&l.target, kind_of(target)) {
            (_, None) => {
                violations.push(Violation::DanglingTarget {
                    link: l.id.clone(),
                    target: target.to_owned(),
                });
                continue;
            }
            (ExcitationRef::Link(_), Some(Kind::Exciting)) => exciting[target].group.is_none(),
            (ExcitationRef::Group(_), Some(Kind::Cel)) => true,
            _ => false,
        };
        if !valid {
            violations.push(Violation::InvalidTarget {
                link: l.id.clone(),
                target: target.to_owned(),
            });
        }
        check_membership(&l.id, &l.group, &mut violations);
    }

    for g in &parts.groups {
        if g.members.len() < 2 {
            violations.push(Violation::GroupTooSmall(g.id.clone()));
        }
        let mut seen = HashSet::new();
        let mut posts = HashSet::new();
        let mut targets = HashSet::new();
        for m in &g.members {
            if !seen.insert(m.as_str()) {
                violations.push(Violation::DuplicateMember {
                    group: g.id.clone(),
                    member: m.clone(),
                });
                continue;
            }
            match (g.kind, kind_of(m.as_str())) {
                (_, None) => violations.push(Violation::DanglingMember {
                    group: g.id.clone(),
                    member: m.clone(),
                }),
                (GroupKind::Cel, Some(Kind::Exciting)) => {
                    posts.insert(&exciting[m.as_str()].post);
                }
                (GroupKind::Cil, Some(Kind::Inhibitory)) => {
                    targets.insert(&inhibitory[m.as_str()].target);
                }
                _ => violations.push(Violation::InvalidMember {
                    group: g.id.clone(),
                    member: m.clone(),
                }),
            }
        }
        if posts.len() > 1 {
            violations.push(Violation::CelMixedPost(g.id.clone()));
        }
        if targets.len() > 1 {
            violations.push(Violation::CilMixedTarget(g.id.clone()));
        }
    }

    for id in parts.inputs.iter().chain(&parts.outputs) {
        if !is_neuron(id) {
            violations.push(Violation::UnknownIo(id.clone()));
        }
    }

    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}
