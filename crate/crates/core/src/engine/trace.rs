use std::collections::BTreeMap;

use serde::Serialize;

use super::color::NodeColor;
use super::node::ColorMessage;
use crate::error::TraceError;
use crate::graph::{Dag, NodeIx};

/// Control traffic of the centralized initialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ControlMsg {
    Initialize,
    Ack,
    Start,
}

impl ControlMsg {
    pub fn as_str(self) -> &'static str {
        match self {
            ControlMsg::Initialize => "INITIALIZE",
            ControlMsg::Ack => "ACK",
            ControlMsg::Start => "START",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ControlPhase {
    Send,
    Deliver,
    /// Handled at the node itself without touching a channel.
    Local,
}

impl ControlPhase {
    pub fn as_str(self) -> &'static str {
        match self {
            ControlPhase::Send => "send",
            ControlPhase::Deliver => "deliver",
            ControlPhase::Local => "local",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    Send,
    Deliver,
    ColorChange,
    Clash,
    Control,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Send => "send",
            EventKind::Deliver => "deliver",
            EventKind::ColorChange => "color-change",
            EventKind::Clash => "clash",
            EventKind::Control => "control",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceEvent {
    Send {
        time: f64,
        msg: ColorMessage,
    },
    Deliver {
        time: f64,
        msg: ColorMessage,
    },
    ColorChange {
        time: f64,
        node: NodeIx,
        from: NodeColor,
        to: NodeColor,
    },
    /// `src` sent the message that caused the clash at `node`.
    Clash {
        time: f64,
        node: NodeIx,
        src: NodeIx,
    },
    Control {
        time: f64,
        src: NodeIx,
        dst: NodeIx,
        msg: ControlMsg,
        phase: ControlPhase,
    },
}

impl TraceEvent {
    pub fn time(&self) -> f64 {
        match *self {
            TraceEvent::Send { time, .. }
            | TraceEvent::Deliver { time, .. }
            | TraceEvent::ColorChange { time, .. }
            | TraceEvent::Clash { time, .. }
            | TraceEvent::Control { time, .. } => time,
        }
    }

    pub fn kind(&self) -> EventKind {
        match self {
            TraceEvent::Send { .. } => EventKind::Send,
            TraceEvent::Deliver { .. } => EventKind::Deliver,
            TraceEvent::ColorChange { .. } => EventKind::ColorChange,
            TraceEvent::Clash { .. } => EventKind::Clash,
            TraceEvent::Control { .. } => EventKind::Control,
        }
    }

    /// The color message carried by a send or deliver event.
    pub fn color_message(&self) -> Option<&ColorMessage> {
        match self {
            TraceEvent::Send { msg, .. } | TraceEvent::Deliver { msg, .. } => Some(msg),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Decision {
    Dependent,
    Independent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    /// A clash happened at `node`; the run stopped there.
    Dependent { node: NodeIx, time: f64 },
    /// No clash. `equilibrium_time` is the last color change,
    /// `quiescence_time` the last delivery.
    Independent { equilibrium_time: f64, quiescence_time: f64 },
}

impl Verdict {
    pub fn decision(&self) -> Decision {
        match self {
            Verdict::Dependent { .. } => Decision::Dependent,
            Verdict::Independent { .. } => Decision::Independent,
        }
    }

    pub fn is_dependent(&self) -> bool {
        matches!(self, Verdict::Dependent { .. })
    }
}

/// Global configuration after a configuration change.
///
/// `(time, step)` strictly increases along a trace; several snapshots may
/// share a time when the schedule delivers messages simultaneously.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub step: usize,
    pub colors: Vec<NodeColor>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionTrace {
    pub node_names: Vec<String>,
    pub events: Vec<TraceEvent>,
    pub snapshots: Vec<Snapshot>,
    /// Color messages sent over each edge `(parent, child)`, both directions.
    pub per_channel_counts: BTreeMap<(NodeIx, NodeIx), usize>,
    /// Control messages put on the wire (centralized initialization only).
    pub control_messages: usize,
    pub verdict: Verdict,
}

impl ExecutionTrace {
    pub fn end_time(&self) -> f64 {
        self.events.last().map_or(0.0, TraceEvent::time)
    }

    /// Configuration as of the latest configuration change at or before `t`.
    pub fn snapshot_at(&self, t: f64) -> Result<&Snapshot, TraceError> {
        let end = self.end_time();
        if !(0.0..=end).contains(&t) {
            return Err(TraceError::OutOfRange { t: t.to_string(), end: end.to_string() });
        }
        let idx = self.snapshots.partition_point(|s| s.time <= t);
        Ok(&self.snapshots[idx.saturating_sub(1)])
    }

    pub fn total_messages(&self) -> usize {
        self.per_channel_counts.values().sum()
    }

    pub fn max_per_channel(&self) -> usize {
        self.per_channel_counts.values().copied().max().unwrap_or(0)
    }

    /// Sequence of states each node passed through, starting from uncolored.
    pub fn color_histories(&self) -> Vec<Vec<NodeColor>> {
        let mut hist = vec![vec![NodeColor::None]; self.node_names.len()];
        for ev in &self.events {
            if let TraceEvent::ColorChange { node, to, .. } = *ev {
                hist[node].push(to);
            }
        }
        hist
    }

    /// Time of the last color change, or 0 when nothing changed after start.
    pub fn last_color_change(&self) -> f64 {
        self.events.iter().rev().find(|e| e.kind() == EventKind::ColorChange).map_or(0.0, TraceEvent::time)
    }

    pub fn to_json(&self) -> String {
        let name = |v: NodeIx| self.node_names[v].as_str();
        let (verdict, clash, equilibrium_time, quiescence_time) = match self.verdict {
            Verdict::Dependent { node, time } => {
                ("DEPENDENT", Some(ClashJson { node: name(node), time }), None, None)
            }
            Verdict::Independent { equilibrium_time, quiescence_time } => {
                ("INDEPENDENT", None, Some(equilibrium_time), Some(quiescence_time))
            }
        };
        let events = self
            .events
            .iter()
            .map(|ev| match *ev {
                TraceEvent::Send { time, msg } | TraceEvent::Deliver { time, msg } => EventJson {
                    t: time,
                    kind: ev.kind().as_str(),
                    src: Some(name(msg.src)),
                    dst: Some(name(msg.dst)),
                    payload: msg.payload.to_string(),
                },
                TraceEvent::ColorChange { time, node, to, .. } => EventJson {
                    t: time,
                    kind: ev.kind().as_str(),
                    src: None,
                    dst: Some(name(node)),
                    payload: to.to_string(),
                },
                TraceEvent::Clash { time, node, src } => EventJson {
                    t: time,
                    kind: ev.kind().as_str(),
                    src: Some(name(src)),
                    dst: Some(name(node)),
                    payload: NodeColor::Clash.to_string(),
                },
                TraceEvent::Control { time, src, dst, msg, phase } => EventJson {
                    t: time,
                    kind: ev.kind().as_str(),
                    src: Some(name(src)),
                    dst: Some(name(dst)),
                    payload: format!("{}:{}", phase.as_str(), msg.as_str()),
                },
            })
            .collect();
        let per_channel_counts = self
            .per_channel_counts
            .iter()
            .map(|(&(p, c), &n)| (format!("{}->{}", name(p), name(c)), n))
            .collect();
        let snapshots = self
            .snapshots
            .iter()
            .map(|s| SnapshotJson {
                t: s.time,
                step: s.step,
                colors: s.colors.iter().enumerate().map(|(v, c)| (name(v), c.as_str())).collect(),
            })
            .collect();
        let doc = TraceJson {
            verdict,
            clash,
            equilibrium_time,
            quiescence_time,
            total_messages: self.total_messages(),
            control_messages: self.control_messages,
            events,
            per_channel_counts,
            snapshots,
        };
        serde_json::to_string_pretty(&doc).expect("trace serializes")
    }
}

#[derive(Serialize)]
struct ClashJson<'a> {
    node: &'a str,
    time: f64,
}

#[derive(Serialize)]
struct EventJson<'a> {
    t: f64,
    kind: &'static str,
    src: Option<&'a str>,
    dst: Option<&'a str>,
    payload: String,
}

#[derive(Serialize)]
struct SnapshotJson<'a> {
    t: f64,
    step: usize,
    colors: BTreeMap<&'a str, &'static str>,
}

#[derive(Serialize)]
struct TraceJson<'a> {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    clash: Option<ClashJson<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    equilibrium_time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quiescence_time: Option<f64>,
    total_messages: usize,
    control_messages: usize,
    events: Vec<EventJson<'a>>,
    per_channel_counts: BTreeMap<String, usize>,
    snapshots: Vec<SnapshotJson<'a>>,
}

/// Incremental trace assembly shared by both runners.
pub(crate) struct TraceBuilder<'g> {
    g: &'g Dag,
    colors: Vec<NodeColor>,
    dirty: bool,
    events: Vec<TraceEvent>,
    snapshots: Vec<Snapshot>,
    counts: BTreeMap<(NodeIx, NodeIx), usize>,
    control_messages: usize,
    last_change: f64,
    last_delivery: f64,
}

impl<'g> TraceBuilder<'g> {
    pub(crate) fn new(g: &'g Dag) -> Self {
        TraceBuilder {
            g,
            colors: vec![NodeColor::None; g.len()],
            dirty: false,
            events: Vec::new(),
            snapshots: Vec::new(),
            counts: BTreeMap::new(),
            control_messages: 0,
            last_change: 0.0,
            last_delivery: 0.0,
        }
    }

    pub(crate) fn send(&mut self, time: f64, msg: ColorMessage) {
        let key = if self.g.has_edge(msg.src, msg.dst) { (msg.src, msg.dst) } else { (msg.dst, msg.src) };
        *self.counts.entry(key).or_default() += 1;
        self.events.push(TraceEvent::Send { time, msg });
    }

    pub(crate) fn deliver(&mut self, time: f64, msg: ColorMessage) {
        self.last_delivery = self.last_delivery.max(time);
        self.events.push(TraceEvent::Deliver { time, msg });
    }

    pub(crate) fn color_change(&mut self, time: f64, node: NodeIx, to: NodeColor) {
        let from = std::mem::replace(&mut self.colors[node], to);
        if from != to {
            self.last_change = self.last_change.max(time);
            self.dirty = true;
            self.events.push(TraceEvent::ColorChange { time, node, from, to });
        }
    }

    pub(crate) fn clash(&mut self, time: f64, node: NodeIx, src: NodeIx) {
        self.color_change(time, node, NodeColor::Clash);
        self.events.push(TraceEvent::Clash { time, node, src });
    }

    pub(crate) fn control(
        &mut self,
        time: f64,
        src: NodeIx,
        dst: NodeIx,
        msg: ControlMsg,
        phase: ControlPhase,
    ) {
        if phase == ControlPhase::Send {
            self.control_messages += 1;
        }
        self.events.push(TraceEvent::Control { time, src, dst, msg, phase });
    }

    /// Closes a configuration change, recording a snapshot if any color moved.
    /// The first call always records one.
    pub(crate) fn commit(&mut self, time: f64) {
        if self.dirty || self.snapshots.is_empty() {
            let step = self.snapshots.len();
            self.snapshots.push(Snapshot { time, step, colors: self.colors.clone() });
            self.dirty = false;
        }
    }

    pub(crate) fn last_change(&self) -> f64 {
        self.last_change
    }

    pub(crate) fn last_delivery(&self) -> f64 {
        self.last_delivery
    }

    pub(crate) fn finish(mut self, verdict: Verdict) -> ExecutionTrace {
        let t = self.events.last().map_or(0.0, TraceEvent::time);
        self.commit(t);
        ExecutionTrace {
            node_names: self.g.names().to_vec(),
            events: self.events,
            snapshots: self.snapshots,
            per_channel_counts: self.counts,
            control_messages: self.control_messages,
            verdict,
        }
    }
}
