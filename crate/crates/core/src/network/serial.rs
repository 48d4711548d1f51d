//! Versioned TOML documents for networks.
//!
//! ```toml
//! version = 1
//! inputs = ["n0", "n1"]
//! outputs = ["n2"]
//!
//! [[neurons]]
//! id = "n0"
//! label = "in1"
//! kind = "input"
//!
//! [[exciting_links]]
//! id = "e3"
//! kind = "PEL"
//! pre = "n0"
//! post = "n2"
//!
//! [[inhibitory_links]]
//! id = "i5"
//! kind = "PIL"
//! pre = "n1"
//! target = "e3"
//!
//! [[groups]]
//! id = "g7"
//! kind = "CEL"
//! members = ["e3", "e4"]
//! ```
//!
//! Records are written sorted by id, so equal networks serialize to the same
//! bytes. A link's group membership is stored only on the group.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    CompositeGroup, ExcitationRef, ExcitingLink, GroupId, GroupKind, InhibitoryLink, LinkId,
    LinkKind, Network, NetworkError, NetworkParts, Neuron, NeuronId, NeuronKind,
};

pub const FORMAT_VERSION: i64 = 1;

#[derive(Debug, Error)]
pub enum SerialError {
    #[error("malformed document: {0}")]
    Syntax(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("unsupported document version {0} (expected {FORMAT_VERSION})")]
    UnknownVersion(i64),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    version: i64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    inputs: Vec<NeuronId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    outputs: Vec<NeuronId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    neurons: Vec<NeuronRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    exciting_links: Vec<LinkRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    inhibitory_links: Vec<InhibitionRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    groups: Vec<GroupRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NeuronRecord {
    id: NeuronId,
    label: String,
    kind: NeuronKind,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkRecord {
    id: LinkId,
    kind: String,
    pre: NeuronId,
    post: NeuronId,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InhibitionRecord {
    id: LinkId,
    kind: String,
    pre: NeuronId,
    target: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupRecord {
    id: GroupId,
    kind: String,
    members: Vec<LinkId>,
}

fn link_kind(text: &str, exciting: bool) -> Result<LinkKind, SerialError> {
    LinkKind::ALL
        .into_iter()
        .find(|k| k.is_exciting() == exciting && k.to_string() == text)
        .ok_or_else(|| {
            let expected = if exciting { "PEL or NEL" } else { "PIL or NIL" };
            SerialError::Schema(format!("link kind `{text}`, expected {expected}"))
        })
}

/// Canonical document text for `network`.
pub fn serialize_network(network: &Network) -> String {
    let parts = network.parts();
    let mut neurons: Vec<NeuronRecord> = parts
        .neurons
        .iter()
        .map(|n| NeuronRecord {
            id: n.id.clone(),
            label: n.label.clone(),
            kind: n.kind,
        })
        .collect();
    neurons.sort_by(|a, b| a.id.cmp(&b.id));
    let mut exciting_links: Vec<LinkRecord> = parts
        .exciting_links
        .iter()
        .map(|l| LinkRecord {
            id: l.id.clone(),
            kind: l.kind().to_string(),
            pre: l.pre.clone(),
            post: l.post.clone(),
        })
        .collect();
    exciting_links.sort_by(|a, b| a.id.cmp(&b.id));
    let mut inhibitory_links: Vec<InhibitionRecord> = parts
        .inhibitory_links
        .iter()
        .map(|l| InhibitionRecord {
            id: l.id.clone(),
            kind: l.kind().to_string(),
            pre: l.pre.clone(),
            target: l.target.as_str().to_owned(),
        })
        .collect();
    inhibitory_links.sort_by(|a, b| a.id.cmp(&b.id));
    let mut groups: Vec<GroupRecord> = parts
        .groups
        .iter()
        .map(|g| GroupRecord {
            id: g.id.clone(),
            kind: g.kind.to_string(),
            members: {
                let mut members = g.members.clone();
                members.sort();
                members
            },
        })
        .collect();
    groups.sort_by(|a, b| a.id.cmp(&b.id));
    let document = Document {
        version: FORMAT_VERSION,
        inputs: parts.inputs.iter().cloned().collect(),
        outputs: parts.outputs.iter().cloned().collect(),
        neurons,
        exciting_links,
        inhibitory_links,
        groups,
    };
    toml::to_string(&document).expect("network documents always serialize")
}

/// Parses and validates a document produced by [`serialize_network`].
pub fn deserialize_network(text: &str) -> Result<Network, SerialError> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| SerialError::Syntax(e.message().to_owned()))?;
    match table.get("version") {
        Some(toml::Value::Integer(FORMAT_VERSION)) => {}
        Some(toml::Value::Integer(v)) => return Err(SerialError::UnknownVersion(*v)),
        Some(_) => return Err(SerialError::Schema("`version` must be an integer".into())),
        None => return Err(SerialError::Schema("missing `version`".into())),
    }
    let document: Document = table
        .try_into()
        .map_err(|e: toml::de::Error| SerialError::Schema(e.message().to_owned()))?;

    let mut groups = Vec::with_capacity(document.groups.len());
    let mut membership: BTreeMap<LinkId, GroupId> = BTreeMap::new();
    for record in document.groups {
        let kind = match record.kind.as_str() {
            "CEL" => GroupKind::Cel,
            "CIL" => GroupKind::Cil,
            other => {
                return Err(SerialError::Schema(format!(
                    "group kind `{other}`, expected CEL or CIL"
                )))
            }
        };
        for member in &record.members {
            if membership.insert(member.clone(), record.id.clone()).is_some() {
                return Err(SerialError::Schema(format!(
                    "link `{member}` belongs to more than one group"
                )));
            }
        }
        groups.push(CompositeGroup {
            id: record.id,
            kind,
            members: record.members,
        });
    }
    let group_ids: BTreeSet<&str> = groups.iter().map(|g| g.id.as_str()).collect();

    let exciting_links = document
        .exciting_links
        .into_iter()
        .map(|r| {
            let polarity = link_kind(&r.kind, true)?.polarity();
            Ok(ExcitingLink {
                group: membership.get(&r.id).cloned(),
                id: r.id,
                polarity,
                pre: r.pre,
                post: r.post,
            })
        })
        .collect::<Result<Vec<_>, SerialError>>()?;
    let link_ids: BTreeSet<&str> = exciting_links.iter().map(|l| l.id.as_str()).collect();

    let inhibitory_links = document
        .inhibitory_links
        .into_iter()
        .map(|r| {
            let polarity = link_kind(&r.kind, false)?.polarity();
            let target = if link_ids.contains(r.target.as_str()) {
                ExcitationRef::Link(LinkId::new(r.target))
            } else if group_ids.contains(r.target.as_str()) {
                ExcitationRef::Group(GroupId::new(r.target))
            } else {
                return Err(SerialError::Schema(format!(
                    "inhibitory link `{}` targets unknown excitation `{}`",
                    r.id, r.target
                )));
            };
            Ok(InhibitoryLink {
                group: membership.get(&r.id).cloned(),
                id: r.id,
                polarity,
                pre: r.pre,
                target,
            })
        })
        .collect::<Result<Vec<_>, SerialError>>()?;

    let neurons = document
        .neurons
        .into_iter()
        .map(|r| Neuron {
            id: r.id,
            label: r.label,
            kind: r.kind,
        })
        .collect();

    Ok(Network::from_parts(NetworkParts {
        neurons,
        exciting_links,
        inhibitory_links,
        groups,
        inputs: document.inputs.into_iter().collect(),
        outputs: document.outputs.into_iter().collect(),
    })?)
}
