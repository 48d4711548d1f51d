//! Synchronous propagation.
//!
//! One round reads every link state off the neuron states at the start of
//! the round, combines composite links, masks every excitation unit targeted
//! by an active inhibition, and finally turns each resting post-end of an
//! unmasked active excitation positive. Neurons never leave a non-resting
//! state, so the positive set only grows and a fixed point is reached in at
//! most one round per activatable neuron plus one confirming round.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use super::{
    CompositeGroup, ExcitationRef, GroupId, GroupKind, LinkId, LinkKind, LinkState, Network,
    NetworkError, NeuronId, NeuronState, Slot,
};

/// Perceived input states, keyed by neuron id. Values must be positive or
/// negative.
pub type Assignment = BTreeMap<NeuronId, NeuronState>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    /// Iterate rounds over the whole network until nothing changes.
    FreeRun,
    /// Settle the listed neurons layer by layer. Only the neurons of the
    /// current layer may activate while it settles; afterwards every neuron
    /// of the layer that is still resting is coerced to negative. Neurons
    /// outside every layer are settled by a final free run.
    Layered(Vec<Vec<NeuronId>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("input neuron `{0}` has no assigned state")]
    UnassignedInput(NeuronId),
    #[error("unknown neuron `{0}`")]
    UnknownNeuron(NeuronId),
    #[error("neuron `{0}` cannot be assigned the resting state")]
    RestingAssignment(NeuronId),
    #[error("neuron `{0}` appears in more than one layer")]
    DuplicateLayerEntry(NeuronId),
    #[error("missing state for member `{0}` of composite link")]
    MissingMemberState(LinkId),
    #[error("activation does not belong to this network")]
    ShapeMismatch,
    #[error("no fixed point within {0} rounds")]
    RoundLimit(usize),
}

/// Trigger table for simple links: positive links fire on a positively
/// activated pre-end, negative links on a negatively activated one, and
/// nothing fires on a resting pre-end.
pub fn link_trigger_state(kind: LinkKind, pre: NeuronState) -> LinkState {
    LinkState::from_bool(pre == kind.polarity().trigger())
}

/// A composite link is active iff every member is active.
pub fn composite_state(
    group: &CompositeGroup,
    member_states: &HashMap<LinkId, LinkState>,
) -> Result<LinkState, EvalError> {
    let mut active = true;
    for member in &group.members {
        let state = member_states
            .get(member)
            .ok_or_else(|| EvalError::MissingMemberState(member.clone()))?;
        active &= state.is_active();
    }
    Ok(LinkState::from_bool(active))
}

#[derive(Debug, Clone, Copy)]
enum UnitSource {
    Link(usize),
    Group(usize),
}

#[derive(Debug, Clone)]
struct Unit {
    reference: ExcitationRef,
    source: UnitSource,
    post: usize,
    inhibitors: Vec<UnitSource>,
}

/// Index-resolved view of a valid network, cached on the network.
#[derive(Debug)]
pub(crate) struct Wiring {
    exciting: Vec<(usize, LinkKind)>,
    inhibitory: Vec<(usize, LinkKind)>,
    groups: Vec<(GroupKind, Vec<usize>)>,
    units: Vec<Unit>,
}

impl Wiring {
    pub(crate) fn build(net: &Network) -> Self {
        let neuron = |id: &NeuronId| net.neuron_index(id).expect("validated network");
        let exciting = net
            .exciting_links()
            .iter()
            .map(|l| (neuron(&l.pre), l.kind()))
            .collect();
        let inhibitory = net
            .inhibitory_links()
            .iter()
            .map(|l| (neuron(&l.pre), l.kind()))
            .collect();
        let groups = net
            .groups()
            .iter()
            .map(|g| {
                let members = g
                    .members
                    .iter()
                    .map(|m| match net.slot(m.as_str()) {
                        Some(Slot::Exciting(i) | Slot::Inhibitory(i)) => i,
                        _ => unreachable!("validated network"),
                    })
                    .collect();
                (g.kind, members)
            })
            .collect();

        let mut units = Vec::new();
        let mut unit_of: HashMap<&str, usize> = HashMap::new();
        for (i, l) in net.exciting_links().iter().enumerate() {
            if l.group.is_none() {
                unit_of.insert(l.id.as_str(), units.len());
                units.push(Unit {
                    reference: ExcitationRef::Link(l.id.clone()),
                    source: UnitSource::Link(i),
                    post: neuron(&l.post),
                    inhibitors: Vec::new(),
                });
            }
        }
        for (i, g) in net.groups().iter().enumerate() {
            if g.kind == GroupKind::Cel {
                let post = &net.exciting_link(&g.members[0]).expect("validated").post;
                unit_of.insert(g.id.as_str(), units.len());
                units.push(Unit {
                    reference: ExcitationRef::Group(g.id.clone()),
                    source: UnitSource::Group(i),
                    post: neuron(post),
                    inhibitors: Vec::new(),
                });
            }
        }
        for (i, l) in net.inhibitory_links().iter().enumerate() {
            let unit = unit_of[l.target.as_str()];
            let inhibitor = match &l.group {
                None => UnitSource::Link(i),
                Some(g) => match net.slot(g.as_str()) {
                    Some(Slot::Group(gi)) => UnitSource::Group(gi),
                    _ => unreachable!("validated network"),
                },
            };
            let inhibitors = &mut units[unit].inhibitors;
            // Every member of a CIL shares the target; register the CIL once.
            let seen = matches!(inhibitor, UnitSource::Group(g)
                if inhibitors.iter().any(|x| matches!(x, UnitSource::Group(h) if *h == g)));
            if !seen {
                inhibitors.push(inhibitor);
            }
        }
        Self {
            exciting,
            inhibitory,
            groups,
            units,
        }
    }
}

/// Per-evaluation mutable state: neuron states plus the link states they
/// induce. Link states are refreshed whenever neuron states change, so they
/// always describe the current neuron states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivationState {
    neurons: Vec<NeuronState>,
    exciting: Vec<LinkState>,
    inhibitory: Vec<LinkState>,
    groups: Vec<LinkState>,
    round: usize,
}

impl ActivationState {
    /// All neurons resting, round zero.
    pub fn new(net: &Network) -> Result<Self, EvalError> {
        let wiring = net.wiring()?;
        let mut state = Self {
            neurons: vec![NeuronState::Resting; net.neurons().len()],
            exciting: Vec::new(),
            inhibitory: Vec::new(),
            groups: Vec::new(),
            round: 0,
        };
        state.refresh(wiring);
        Ok(state)
    }

    /// Starts from explicit neuron states; unlisted neurons rest. Unlike an
    /// [`Assignment`], resting values are accepted here.
    pub fn from_states(
        net: &Network,
        states: &BTreeMap<NeuronId, NeuronState>,
    ) -> Result<Self, EvalError> {
        let wiring = net.wiring()?;
        let mut state = Self::new(net)?;
        for (id, &value) in states {
            let i = net
                .neuron_index(id)
                .ok_or_else(|| EvalError::UnknownNeuron(id.clone()))?;
            state.neurons[i] = value;
        }
        state.refresh(wiring);
        Ok(state)
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn neuron_state(&self, net: &Network, id: &NeuronId) -> Option<NeuronState> {
        net.neuron_index(id).and_then(|i| self.neurons.get(i).copied())
    }

    /// Neuron states keyed by id, independent of storage order.
    pub fn neuron_states(&self, net: &Network) -> BTreeMap<NeuronId, NeuronState> {
        net.neurons()
            .iter()
            .zip(&self.neurons)
            .map(|(n, &s)| (n.id.clone(), s))
            .collect()
    }

    pub fn positive_neurons(&self, net: &Network) -> BTreeSet<NeuronId> {
        net.neurons()
            .iter()
            .zip(&self.neurons)
            .filter(|(_, s)| s.is_positive())
            .map(|(n, _)| n.id.clone())
            .collect()
    }

    pub fn link_state(&self, net: &Network, id: &LinkId) -> Option<LinkState> {
        match net.slot(id.as_str())? {
            Slot::Exciting(i) => self.exciting.get(i).copied(),
            Slot::Inhibitory(i) => self.inhibitory.get(i).copied(),
            _ => None,
        }
    }

    pub fn group_state(&self, net: &Network, id: &GroupId) -> Option<LinkState> {
        match net.slot(id.as_str())? {
            Slot::Group(i) => self.groups.get(i).copied(),
            _ => None,
        }
    }

    fn check_shape(&self, net: &Network) -> Result<(), EvalError> {
        if self.neurons.len() == net.neurons().len()
            && self.exciting.len() == net.exciting_links().len()
            && self.inhibitory.len() == net.inhibitory_links().len()
            && self.groups.len() == net.groups().len()
        {
            Ok(())
        } else {
            Err(EvalError::ShapeMismatch)
        }
    }

    fn refresh(&mut self, wiring: &Wiring) {
        let neurons = &self.neurons;
        self.exciting = wiring
            .exciting
            .iter()
            .map(|&(pre, kind)| link_trigger_state(kind, neurons[pre]))
            .collect();
        self.inhibitory = wiring
            .inhibitory
            .iter()
            .map(|&(pre, kind)| link_trigger_state(kind, neurons[pre]))
            .collect();
        let (exciting, inhibitory) = (&self.exciting, &self.inhibitory);
        self.groups = wiring
            .groups
            .iter()
            .map(|(kind, members)| {
                let table = match kind {
                    GroupKind::Cel => exciting,
                    GroupKind::Cil => inhibitory,
                };
                LinkState::from_bool(members.iter().all(|&m| table[m].is_active()))
            })
            .collect();
    }

    fn source_active(&self, source: UnitSource, exciting: bool) -> bool {
        match source {
            UnitSource::Link(i) if exciting => self.exciting[i].is_active(),
            UnitSource::Link(i) => self.inhibitory[i].is_active(),
            UnitSource::Group(g) => self.groups[g].is_active(),
        }
    }

    fn unit_masked(&self, unit: &Unit) -> bool {
        unit.inhibitors.iter().any(|&s| self.source_active(s, false))
    }

    /// Resting post-ends of effective excitations, optionally restricted to
    /// `allowed` neurons. Sorted, deduplicated neuron indices.
    fn excitable(&self, wiring: &Wiring, allowed: Option<&[bool]>) -> Vec<usize> {
        let mut out: Vec<usize> = wiring
            .units
            .iter()
            .filter(|u| self.neurons[u.post].is_resting())
            .filter(|u| allowed.is_none_or(|a| a[u.post]))
            .filter(|u| self.source_active(u.source, true) && !self.unit_masked(u))
            .map(|u| u.post)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn commit(&mut self, wiring: &Wiring, activated: &[usize]) {
        for &i in activated {
            self.neurons[i] = NeuronState::Positive;
        }
        self.round += 1;
        self.refresh(wiring);
    }
}

/// Classification of every excitation unit under the current neuron states.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExcitationStatus {
    /// Active and not masked.
    pub effective: Vec<ExcitationRef>,
    /// Active but masked by at least one active inhibition.
    pub masked: Vec<ExcitationRef>,
    /// Every active simple inhibitory link, grouped or not.
    pub active_inhibitory_links: Vec<LinkId>,
}

pub fn excitation_status(
    net: &Network,
    activation: &ActivationState,
) -> Result<ExcitationStatus, EvalError> {
    let wiring = net.wiring()?;
    activation.check_shape(net)?;
    // Recompute from neuron states rather than trusting stored link states.
    let mut fresh = activation.clone();
    fresh.refresh(wiring);
    Ok(status_of(net, wiring, &fresh))
}

fn status_of(net: &Network, wiring: &Wiring, act: &ActivationState) -> ExcitationStatus {
    let mut status = ExcitationStatus::default();
    for unit in &wiring.units {
        if !act.source_active(unit.source, true) {
            continue;
        }
        if act.unit_masked(unit) {
            status.masked.push(unit.reference.clone());
        } else {
            status.effective.push(unit.reference.clone());
        }
    }
    status.active_inhibitory_links = net
        .inhibitory_links()
        .iter()
        .zip(&act.inhibitory)
        .filter(|(_, s)| s.is_active())
        .map(|(l, _)| l.id.clone())
        .collect();
    status.effective.sort();
    status.masked.sort();
    status.active_inhibitory_links.sort();
    status
}

/// Active exciting links outside any CEL and active CELs that no active
/// inhibition masks.
pub fn effective_excitations(
    net: &Network,
    activation: &ActivationState,
) -> Result<Vec<ExcitationRef>, EvalError> {
    excitation_status(net, activation).map(|s| s.effective)
}

/// One synchronous round over the whole network.
pub fn step_round(net: &Network, activation: &ActivationState) -> Result<ActivationState, EvalError> {
    let wiring = net.wiring()?;
    activation.check_shape(net)?;
    let mut next = activation.clone();
    next.refresh(wiring);
    let activated = next.excitable(wiring, None);
    next.commit(wiring, &activated);
    Ok(next)
}

/// Final activation plus the number of rounds run, the last of which
/// confirmed the fixed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub activation: ActivationState,
    pub rounds: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub round: usize,
    /// Gate outputs coerced to negative since the previous record.
    pub coerced: Vec<NeuronId>,
    pub activated: Vec<NeuronId>,
    pub active_inhibitory_links: Vec<LinkId>,
    pub masked: Vec<ExcitationRef>,
    pub fixed_point: bool,
}

/// Runs `schedule` to its fixed point, with the round budget defaulting to
/// the neuron count (never less than one).
pub fn evaluate(
    net: &Network,
    assignment: &Assignment,
    schedule: &Schedule,
) -> Result<Evaluation, EvalError> {
    run(net, assignment, schedule, None, None)
}

/// As [`evaluate`] with an explicit round budget.
pub fn evaluate_bounded(
    net: &Network,
    assignment: &Assignment,
    schedule: &Schedule,
    max_rounds: usize,
) -> Result<Evaluation, EvalError> {
    run(net, assignment, schedule, Some(max_rounds), None)
}

/// As [`evaluate`], also returning one record per round.
pub fn evaluate_traced(
    net: &Network,
    assignment: &Assignment,
    schedule: &Schedule,
) -> Result<(Evaluation, Vec<RoundRecord>), EvalError> {
    let mut records = Vec::new();
    let evaluation = run(net, assignment, schedule, None, Some(&mut records))?;
    Ok((evaluation, records))
}

/// As [`evaluate_traced`] with an optional explicit round budget.
pub fn evaluate_traced_bounded(
    net: &Network,
    assignment: &Assignment,
    schedule: &Schedule,
    max_rounds: Option<usize>,
) -> Result<(Evaluation, Vec<RoundRecord>), EvalError> {
    let mut records = Vec::new();
    let evaluation = run(net, assignment, schedule, max_rounds, Some(&mut records))?;
    Ok((evaluation, records))
}

fn run(
    net: &Network,
    assignment: &Assignment,
    schedule: &Schedule,
    max_rounds: Option<usize>,
    mut trace: Option<&mut Vec<RoundRecord>>,
) -> Result<Evaluation, EvalError> {
    let wiring = net.wiring()?;
    let limit = max_rounds.unwrap_or_else(|| net.neurons().len().max(1));

    for (id, state) in assignment {
        if net.neuron_index(id).is_none() {
            return Err(EvalError::UnknownNeuron(id.clone()));
        }
        if state.is_resting() {
            return Err(EvalError::RestingAssignment(id.clone()));
        }
    }
    if let Some(missing) = net.inputs().iter().find(|id| !assignment.contains_key(*id)) {
        return Err(EvalError::UnassignedInput(missing.clone()));
    }
    let mut act = ActivationState::from_states(net, assignment)?;

    let layers: Vec<Vec<usize>> = match schedule {
        Schedule::FreeRun => Vec::new(),
        Schedule::Layered(layers) => {
            let mut seen = BTreeSet::new();
            let mut resolved = Vec::with_capacity(layers.len());
            for layer in layers {
                let mut indices = Vec::with_capacity(layer.len());
                for id in layer {
                    let i = net
                        .neuron_index(id)
                        .ok_or_else(|| EvalError::UnknownNeuron(id.clone()))?;
                    if !seen.insert(i) {
                        return Err(EvalError::DuplicateLayerEntry(id.clone()));
                    }
                    indices.push(i);
                }
                resolved.push(indices);
            }
            resolved
        }
    };

    let mut coerced = Vec::new();
    let mut allowed = vec![false; act.neurons.len()];
    for layer in &layers {
        for &i in layer {
            allowed[i] = true;
        }
        loop {
            let activated = act.excitable(wiring, Some(&allowed));
            if activated.is_empty() {
                break;
            }
            record(net, wiring, &act, &activated, false, &mut coerced, trace.as_deref_mut());
            act.commit(wiring, &activated);
            if act.round > limit {
                return Err(EvalError::RoundLimit(limit));
            }
        }
        for &i in layer {
            allowed[i] = false;
            if act.neurons[i].is_resting() {
                act.neurons[i] = NeuronState::Negative;
                coerced.push(net.neurons()[i].id.clone());
            }
        }
        act.refresh(wiring);
    }

    loop {
        let activated = act.excitable(wiring, None);
        let fixed_point = activated.is_empty();
        record(net, wiring, &act, &activated, fixed_point, &mut coerced, trace.as_deref_mut());
        act.commit(wiring, &activated);
        if act.round > limit {
            return Err(EvalError::RoundLimit(limit));
        }
        if fixed_point {
            break;
        }
    }
    let rounds = act.round;
    Ok(Evaluation {
        activation: act,
        rounds,
    })
}

fn record(
    net: &Network,
    wiring: &Wiring,
    act: &ActivationState,
    activated: &[usize],
    fixed_point: bool,
    coerced: &mut Vec<NeuronId>,
    trace: Option<&mut Vec<RoundRecord>>,
) {
    let Some(trace) = trace else {
        return;
    };
    let status = status_of(net, wiring, act);
    trace.push(RoundRecord {
        round: act.round + 1,
        coerced: std::mem::take(coerced),
        activated: activated
            .iter()
            .map(|&i| net.neurons()[i].id.clone())
            .collect(),
        active_inhibitory_links: status.active_inhibitory_links,
        masked: status.masked,
        fixed_point,
    });
}
