use serde::Serialize;

use crate::engine::ExecutionTrace;
use crate::graph::{DSepQuery, Dag};

/// Bits per color message on the wire.
pub const BITS_PER_MESSAGE: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MessageAccount {
    pub total_messages: usize,
    pub total_bits: usize,
    pub max_per_channel: usize,
    /// Every color message travelled on an edge of the ancestral graph of
    /// A ∪ B ∪ C.
    pub confinement_ok: bool,
}

pub fn account_messages(trace: &ExecutionTrace, g: &Dag, q: &DSepQuery) -> MessageAccount {
    let total = trace.total_messages();
    // The ancestral graph is induced, so an edge belongs to it iff both ends do.
    let an = g.ancestor_mask(&q.all());
    let confinement_ok = trace
        .events
        .iter()
        .filter_map(|e| e.color_message())
        .all(|m| an[m.src] && an[m.dst] && g.adjacent(m.src, m.dst));
    MessageAccount {
        total_messages: total,
        total_bits: BITS_PER_MESSAGE * total,
        max_per_channel: trace.max_per_channel(),
        confinement_ok,
    }
}
