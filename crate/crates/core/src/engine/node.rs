use std::collections::BTreeSet;

use serde::Serialize;

use super::color::{apply_cug, Color, NodeColor};
use crate::graph::{Dag, NodeIx};

/// Whether a node belongs to the conditioning set.
///
/// Conditioning nodes neither listen to nor talk to their children.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    InC,
    NotInC,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ColorMessage {
    pub payload: Color,
    pub src: NodeIx,
    pub dst: NodeIx,
}

/// Local state of one process.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeState {
    pub color: NodeColor,
    /// Children this node has exchanged a message with.
    pub contacted_children: BTreeSet<NodeIx>,
}

impl NodeState {
    /// Self-activation: take `color` and announce it to every parent.
    pub fn activate(&mut self, g: &Dag, v: NodeIx, color: Color) -> Vec<ColorMessage> {
        self.color = color.into();
        g.parents(v).iter().map(|&p| ColorMessage { payload: color, src: v, dst: p }).collect()
    }

    /// Handles one message addressed to `msg.dst`, mutating the state and
    /// returning the messages to transmit, in emission order.
    ///
    /// The reply to the transmitter (when colors differ and this node was
    /// colored) comes first, followed by the announcement of a changed color
    /// to all parents and all contacted children except the transmitter. A
    /// message that turns the node into a clash still yields the reply; the
    /// caller decides whether anything is transmitted after a clash.
    pub fn receive(&mut self, g: &Dag, msg: &ColorMessage, role: Role) -> Vec<ColorMessage> {
        let v = msg.dst;
        let from_child = g.has_edge(v, msg.src);
        if role == Role::InC && from_child {
            return Vec::new();
        }
        if self.color == NodeColor::Clash {
            return Vec::new();
        }
        if from_child {
            self.contacted_children.insert(msg.src);
        }

        let mut out = Vec::new();
        if let Some(own) = self.color.as_color() {
            if own != msg.payload {
                out.push(ColorMessage { payload: own, src: v, dst: msg.src });
            }
        }

        let old = self.color;
        self.color = apply_cug(old, msg.payload);
        if self.color == old || self.color == NodeColor::Clash {
            return out;
        }
        let new = self.color.as_color().expect("non-clash update yields a color");
        let parents = g.parents(v).iter().copied();
        let children = match role {
            Role::InC => None,
            Role::NotInC => Some(self.contacted_children.iter().copied()),
        };
        out.extend(
            parents.chain(children.into_iter().flatten()).filter(|&w| w != msg.src).map(|w| ColorMessage {
                payload: new,
                src: v,
                dst: w,
            }),
        );
        out
    }
}

/// Pure form of [`NodeState::receive`].
pub fn on_receive(
    g: &Dag,
    state: &NodeState,
    msg: &ColorMessage,
    role: Role,
) -> (NodeState, Vec<ColorMessage>) {
    let mut next = state.clone();
    let out = next.receive(g, msg, role);
    (next, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    // p -> x -> k, q -> x, x -> j
    fn graph() -> Dag {
        Dag::parse("edge p x\nedge q x\nedge x k\nedge x j").unwrap()
    }

    fn ix(g: &Dag, n: &str) -> NodeIx {
        g.index_of(n).unwrap()
    }

    #[test]
    fn white_node_receiving_green_from_parent() {
        let g = graph();
        let (p, q, x, k) = (ix(&g, "p"), ix(&g, "q"), ix(&g, "x"), ix(&g, "k"));
        let state = NodeState { color: NodeColor::White, contacted_children: [k].into() };
        let msg = ColorMessage { payload: Color::Green, src: p, dst: x };
        let (next, out) = on_receive(&g, &state, &msg, Role::NotInC);
        assert_eq!(next.color, NodeColor::Green);
        assert_eq!(
            out,
            [
                ColorMessage { payload: Color::White, src: x, dst: p },
                ColorMessage { payload: Color::Green, src: x, dst: q },
                ColorMessage { payload: Color::Green, src: x, dst: k },
            ]
        );
    }

    #[test]
    fn identical_color_is_silent() {
        let g = graph();
        let state = NodeState { color: NodeColor::Green, ..Default::default() };
        let msg = ColorMessage { payload: Color::Green, src: ix(&g, "p"), dst: ix(&g, "x") };
        let (next, out) = on_receive(&g, &state, &msg, Role::NotInC);
        assert_eq!(next, state);
        assert!(out.is_empty());
    }

    #[test]
    fn conditioning_node_ignores_children() {
        let g = graph();
        let state = NodeState { color: NodeColor::White, ..Default::default() };
        let msg = ColorMessage { payload: Color::Red, src: ix(&g, "k"), dst: ix(&g, "x") };
        let (next, out) = on_receive(&g, &state, &msg, Role::InC);
        assert_eq!(next, state);
        assert!(out.is_empty());
    }

    #[test]
    fn conditioning_node_never_announces_to_children() {
        let g = graph();
        let (p, x, k) = (ix(&g, "p"), ix(&g, "x"), ix(&g, "k"));
        // Contact recorded before x joined C would never happen in a run, but
        // the role alone must suppress child traffic.
        let state = NodeState { color: NodeColor::White, contacted_children: [k].into() };
        let msg = ColorMessage { payload: Color::Red, src: p, dst: x };
        let (next, out) = on_receive(&g, &state, &msg, Role::InC);
        assert_eq!(next.color, NodeColor::Red);
        assert!(out.iter().all(|m| m.dst != k));
        assert_eq!(out[0], ColorMessage { payload: Color::White, src: x, dst: p });
    }

    #[test]
    fn uncolored_node_does_not_reply() {
        let g = graph();
        let (x, k, p, q) = (ix(&g, "x"), ix(&g, "k"), ix(&g, "p"), ix(&g, "q"));
        let msg = ColorMessage { payload: Color::White, src: k, dst: x };
        let (next, out) = on_receive(&g, &NodeState::default(), &msg, Role::NotInC);
        assert_eq!(next.color, NodeColor::White);
        assert!(next.contacted_children.contains(&k));
        let dsts: Vec<NodeIx> = out.iter().map(|m| m.dst).collect();
        assert_eq!(dsts, [p, q]);
    }

    #[test]
    fn clash_keeps_reply_and_stops_announcing() {
        let g = graph();
        let (p, x) = (ix(&g, "p"), ix(&g, "x"));
        let state = NodeState { color: NodeColor::Green, ..Default::default() };
        let msg = ColorMessage { payload: Color::Red, src: p, dst: x };
        let (next, out) = on_receive(&g, &state, &msg, Role::NotInC);
        assert_eq!(next.color, NodeColor::Clash);
        assert_eq!(out, [ColorMessage { payload: Color::Green, src: x, dst: p }]);
    }

    #[test]
    fn activation_targets_parents() {
        let g = graph();
        let x = ix(&g, "x");
        let mut s = NodeState::default();
        let out = s.activate(&g, x, Color::Red);
        assert_eq!(s.color, NodeColor::Red);
        assert_eq!(out.iter().map(|m| m.dst).collect::<Vec<_>>(), [ix(&g, "p"), ix(&g, "q")]);
    }
}
