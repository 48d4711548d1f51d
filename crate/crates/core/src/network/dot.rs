//! Graphviz rendering: green PEL, blue NEL, red PIL, orange NIL.
//!
//! DOT edges cannot end on other edges, so every inhibited excitation is
//! split at a small junction node and the inhibitory link points at the
//! junction. A CEL gets one junction shared by all its members.

use std::collections::BTreeSet;
use std::fmt::Write;

use super::{ExcitationRef, ExcitingLink, Network, Polarity};

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn exciting_color(polarity: Polarity) -> &'static str {
    match polarity {
        Polarity::Positive => "green",
        Polarity::Negative => "blue",
    }
}

fn inhibitory_color(polarity: Polarity) -> &'static str {
    match polarity {
        Polarity::Positive => "red",
        Polarity::Negative => "orange",
    }
}

fn junction(unit: &str) -> String {
    quote(&format!("j_{unit}"))
}

fn tag(link: &ExcitingLink) -> String {
    link.group
        .as_ref()
        .map(|g| format!(", label={}", quote(g.as_str())))
        .unwrap_or_default()
}

/// Deterministic DOT text; an empty network yields an empty graph body.
pub fn export_dot(network: &Network) -> String {
    let mut out = String::from("digraph pldnn {\n");
    if network.neurons().is_empty() {
        out.push_str("}\n");
        return out;
    }
    out.push_str("  rankdir=LR;\n  node [shape=circle];\n");

    let mut neurons: Vec<_> = network.neurons().iter().collect();
    neurons.sort_by(|a, b| a.id.cmp(&b.id));
    for n in neurons {
        let _ = writeln!(out, "  {} [label={}];", quote(n.id.as_str()), quote(&n.label));
    }

    let targeted: BTreeSet<&ExcitationRef> =
        network.inhibitory_links().iter().map(|l| &l.target).collect();
    for unit in &targeted {
        let _ = writeln!(out, "  {} [shape=point, width=0.08];", junction(unit.as_str()));
    }

    let mut links: Vec<&ExcitingLink> = network.exciting_links().iter().collect();
    links.sort_by(|a, b| a.id.cmp(&b.id));
    for link in links {
        let color = exciting_color(link.polarity);
        let unit = match &link.group {
            Some(g) => ExcitationRef::Group(g.clone()),
            None => ExcitationRef::Link(link.id.clone()),
        };
        let pre = quote(link.pre.as_str());
        let post = quote(link.post.as_str());
        if !targeted.contains(&unit) {
            let _ = writeln!(out, "  {pre} -> {post} [color={color}{}];", tag(link));
            continue;
        }
        let j = junction(unit.as_str());
        let _ = writeln!(out, "  {pre} -> {j} [color={color}, arrowhead=none{}];", tag(link));
        if link.group.is_none() {
            let _ = writeln!(out, "  {j} -> {post} [color={color}];");
        }
    }

    // Shared segment from each inhibited CEL's junction to its post.
    let mut groups: Vec<_> = network.groups().iter().collect();
    groups.sort_by(|a, b| a.id.cmp(&b.id));
    for group in groups {
        let unit = ExcitationRef::Group(group.id.clone());
        if !targeted.contains(&unit) {
            continue;
        }
        if let Some(post) = network.excitation_post(&unit) {
            let _ = writeln!(
                out,
                "  {} -> {} [label={}];",
                junction(unit.as_str()),
                quote(post.as_str()),
                quote(group.id.as_str())
            );
        }
    }

    let mut inhibitions: Vec<_> = network.inhibitory_links().iter().collect();
    inhibitions.sort_by(|a, b| a.id.cmp(&b.id));
    for il in inhibitions {
        let group = il
            .group
            .as_ref()
            .map(|g| format!(", label={}", quote(g.as_str())))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "  {} -> {} [color={}, arrowhead=tee{group}];",
            quote(il.pre.as_str()),
            junction(il.target.as_str()),
            inhibitory_color(il.polarity)
        );
    }
    out.push_str("}\n");
    out
}
