//! Seed-deterministic discrete-event execution of the color protocol.
//!
//! Every message is handled at `send time + channel delay + processing
//! delay`, clamped so that deliveries on one directed channel never overtake
//! each other. Equal times are resolved by enqueue order, which makes a run a
//! pure function of the graph, the query and the parameters.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::color::{Color, NodeColor};
use super::node::{ColorMessage, NodeState, Role};
use super::params::{InitMode, SchedulePolicy, SimulationParams};
use super::trace::{ControlMsg, ControlPhase, ExecutionTrace, TraceBuilder, TraceEvent, Verdict};
use crate::error::EngineError;
use crate::graph::{DSepQuery, Dag, NodeIx};

#[derive(Debug, Clone, Copy)]
enum Wire {
    Color(ColorMessage),
    Control { src: NodeIx, dst: NodeIx, msg: ControlMsg },
}

#[derive(Debug)]
struct Pending {
    time: f64,
    seq: u64,
    wire: Wire,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    // Reversed so that BinaryHeap pops the earliest (time, seq) first.
    fn cmp(&self, other: &Self) -> Ordering {
        other.time.total_cmp(&self.time).then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Scheduler {
    alpha: f64,
    beta: f64,
    policy: SchedulePolicy,
    rng: ChaCha8Rng,
    heap: BinaryHeap<Pending>,
    seq: u64,
    channel_tail: HashMap<(NodeIx, NodeIx), f64>,
}

impl Scheduler {
    fn new(params: &SimulationParams) -> Self {
        Scheduler {
            alpha: params.alpha,
            beta: params.beta,
            policy: params.schedule,
            rng: ChaCha8Rng::seed_from_u64(params.seed),
            heap: BinaryHeap::new(),
            seq: 0,
            channel_tail: HashMap::new(),
        }
    }

    /// Uniform on `(0, bound]`.
    fn open_uniform(&mut self, bound: f64) -> f64 {
        bound * (1.0 - self.rng.gen::<f64>())
    }

    fn delay(&mut self) -> f64 {
        match self.policy {
            SchedulePolicy::RandomDelays => {
                let channel = self.open_uniform(self.beta);
                let processing = self.open_uniform(self.alpha);
                channel + processing
            }
            SchedulePolicy::FifoZeroDelay => 0.0,
            SchedulePolicy::AdversarialLatest => self.alpha + self.beta,
        }
    }

    fn pop(&mut self) -> Option<Pending> {
        self.heap.pop()
    }
}

/// Per-node bookkeeping of the spanning-tree initialization.
#[derive(Debug, Clone, Default)]
struct InitState {
    initialized: bool,
    parent: Option<NodeIx>,
    heard: usize,
    tree_children: Vec<NodeIx>,
    started: bool,
    start_time: Option<f64>,
    buffered: VecDeque<ColorMessage>,
}

struct Simulator<'g> {
    g: &'g Dag,
    roles: Vec<Role>,
    initial: Vec<Option<Color>>,
    states: Vec<NodeState>,
    sched: Scheduler,
    trace: TraceBuilder<'g>,
    /// Present in centralized mode.
    init: Option<(NodeIx, Vec<InitState>)>,
    /// Stop after the control phase (no colors).
    control_only: bool,
}

enum Step {
    Continue,
    Clash { node: NodeIx, time: f64 },
}

impl<'g> Simulator<'g> {
    fn new(g: &'g Dag, q: &DSepQuery, params: &SimulationParams) -> Result<Self, EngineError> {
        params.validate()?;
        // Re-validate against this graph: a query built for another graph may
        // carry out-of-range indices.
        DSepQuery::from_indices(g, q.a().iter().copied(), q.b().iter().copied(), q.c().iter().copied())?;

        let mut roles = vec![Role::NotInC; g.len()];
        let mut initial = vec![None; g.len()];
        q.a().iter().for_each(|&v| initial[v] = Some(Color::Green));
        q.b().iter().for_each(|&v| initial[v] = Some(Color::Red));
        for &v in q.c() {
            initial[v] = Some(Color::White);
            roles[v] = Role::InC;
        }

        let init = match &params.init {
            InitMode::SelfActivated => None,
            InitMode::Centralized { source } => {
                let s = g.index_of(source).ok_or_else(|| EngineError::UnknownSource(source.clone()))?;
                if let Some(v) = unreachable_from(g, s) {
                    return Err(EngineError::Disconnected(g.name(v).to_string()));
                }
                Some((s, vec![InitState::default(); g.len()]))
            }
        };

        Ok(Simulator {
            g,
            roles,
            initial,
            states: vec![NodeState::default(); g.len()],
            sched: Scheduler::new(params),
            trace: TraceBuilder::new(g),
            init,
            control_only: false,
        })
    }

    fn send_color(&mut self, now: f64, msg: ColorMessage) {
        self.trace.send(now, msg);
        self.sched.push_with_delay(now, msg.src, msg.dst, Wire::Color(msg));
    }

    fn send_control(&mut self, now: f64, src: NodeIx, dst: NodeIx, msg: ControlMsg) {
        self.trace.control(now, src, dst, msg, ControlPhase::Send);
        self.sched.push_with_delay(now, src, dst, Wire::Control { src, dst, msg });
    }

    fn activate(&mut self, now: f64, v: NodeIx) -> Vec<ColorMessage> {
        match self.initial[v] {
            Some(color) => {
                let out = self.states[v].activate(self.g, v, color);
                self.trace.color_change(now, v, color.into());
                out
            }
            None => Vec::new(),
        }
    }

    fn run(mut self) -> ExecutionTrace {
        match self.init {
            None => {
                let mut out = Vec::new();
                for v in 0..self.g.len() {
                    out.extend(self.activate(0.0, v));
                }
                self.trace.commit(0.0);
                for msg in out {
                    self.send_color(0.0, msg);
                }
            }
            Some((source, _)) => {
                self.trace.commit(0.0);
                self.begin_initialization(source);
            }
        }

        while let Some(Pending { time, wire, .. }) = self.sched.pop() {
            let step = match wire {
                Wire::Color(msg) => {
                    if self.awaiting_start(msg.dst) {
                        self.init_state(msg.dst).buffered.push_back(msg);
                        Step::Continue
                    } else {
                        self.handle_color(time, msg)
                    }
                }
                Wire::Control { src, dst, msg } => {
                    self.trace.control(time, src, dst, msg, ControlPhase::Deliver);
                    self.handle_control(time, src, dst, msg)
                }
            };
            if let Step::Clash { node, time } = step {
                return self.trace.finish(Verdict::Dependent { node, time });
            }
        }
        let verdict = Verdict::Independent {
            equilibrium_time: self.trace.last_change(),
            quiescence_time: self.trace.last_delivery(),
        };
        self.trace.finish(verdict)
    }

    fn run_control_phase(&mut self) -> ExecutionTrace {
        let (source, _) = self.init.as_ref().expect("centralized mode");
        self.begin_initialization(*source);
        while let Some(Pending { time, wire, .. }) = self.sched.pop() {
            if let Wire::Control { src, dst, msg } = wire {
                self.trace.control(time, src, dst, msg, ControlPhase::Deliver);
                self.handle_control(time, src, dst, msg);
            }
        }
        let trace = std::mem::replace(&mut self.trace, TraceBuilder::new(self.g));
        trace.finish(Verdict::Independent { equilibrium_time: 0.0, quiescence_time: 0.0 })
    }

    fn handle_color(&mut self, now: f64, msg: ColorMessage) -> Step {
        let v = msg.dst;
        self.trace.deliver(now, msg);
        let out = self.states[v].receive(self.g, &msg, self.roles[v]);
        let color = self.states[v].color;
        if color == NodeColor::Clash {
            self.trace.clash(now, v, msg.src);
            self.trace.commit(now);
            return Step::Clash { node: v, time: now };
        }
        self.trace.color_change(now, v, color);
        self.trace.commit(now);
        for m in out {
            self.send_color(now, m);
        }
        Step::Continue
    }

    fn awaiting_start(&self, v: NodeIx) -> bool {
        matches!(&self.init, Some((_, st)) if !st[v].started)
    }

    fn init_state(&mut self, v: NodeIx) -> &mut InitState {
        &mut self.init.as_mut().expect("centralized mode").1[v]
    }

    fn begin_initialization(&mut self, source: NodeIx) {
        let st = self.init_state(source);
        st.initialized = true;
        for w in self.g.neighbors(source) {
            self.send_control(0.0, source, w, ControlMsg::Initialize);
        }
        self.check_echo_complete(0.0, source);
    }

    fn handle_control(&mut self, now: f64, src: NodeIx, dst: NodeIx, msg: ControlMsg) -> Step {
        match msg {
            ControlMsg::Initialize => {
                let st = self.init_state(dst);
                if st.initialized {
                    st.heard += 1;
                } else {
                    st.initialized = true;
                    st.parent = Some(src);
                    st.heard = 1;
                    for w in self.g.neighbors(dst) {
                        if w != src {
                            self.send_control(now, dst, w, ControlMsg::Initialize);
                        }
                    }
                }
                self.check_echo_complete(now, dst);
                Step::Continue
            }
            ControlMsg::Ack => {
                let st = self.init_state(dst);
                st.heard += 1;
                st.tree_children.push(src);
                self.check_echo_complete(now, dst);
                Step::Continue
            }
            ControlMsg::Start => self.start(now, dst),
        }
    }

    /// Echo completion: every neighbor has been heard from.
    fn check_echo_complete(&mut self, now: f64, v: NodeIx) {
        let degree = self.g.neighbors(v).len();
        let (source, _) = self.init.as_ref().expect("centralized mode");
        let source = *source;
        let st = self.init_state(v);
        if st.heard != degree {
            return;
        }
        // Guard against re-firing: bump past the degree once handled.
        st.heard += 1;
        match st.parent {
            Some(p) => self.send_control(now, v, p, ControlMsg::Ack),
            None if v == source => {
                self.trace.control(now, v, v, ControlMsg::Start, ControlPhase::Local);
                if let Step::Clash { .. } = self.start(now, v) {
                    // A clash while starting the source cannot happen: it has
                    // no buffered traffic before its own start.
                    unreachable!("source clashed at start");
                }
            }
            None => unreachable!("non-source node without a tree parent"),
        }
    }

    fn start(&mut self, now: f64, v: NodeIx) -> Step {
        let st = self.init_state(v);
        st.started = true;
        st.start_time = Some(now);
        let children = st.tree_children.clone();
        for c in children {
            self.send_control(now, v, c, ControlMsg::Start);
        }
        if self.control_only {
            return Step::Continue;
        }
        let out = self.activate(now, v);
        self.trace.commit(now);
        for m in out {
            self.send_color(now, m);
        }
        while let Some(msg) = self.init_state(v).buffered.pop_front() {
            if let step @ Step::Clash { .. } = self.handle_color(now, msg) {
                return step;
            }
        }
        Step::Continue
    }
}

impl Scheduler {
    fn push_with_delay(&mut self, now: f64, src: NodeIx, dst: NodeIx, wire: Wire) {
        let d = self.delay();
        let tail = self.channel_tail.entry((src, dst)).or_insert(0.0);
        let time = (now + d).max(*tail);
        *tail = time;
        let seq = self.seq;
        self.seq += 1;
        self.heap.push(Pending { time, seq, wire });
    }
}

fn unreachable_from(g: &Dag, s: NodeIx) -> Option<NodeIx> {
    let mut seen = vec![false; g.len()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for w in g.neighbors(v) {
            if !std::mem::replace(&mut seen[w], true) {
                queue.push_back(w);
            }
        }
    }
    seen.iter().position(|&x| !x)
}

/// Runs the protocol to the first clash or to quiescence.
pub fn run_query(
    g: &Dag,
    q: &DSepQuery,
    params: &SimulationParams,
) -> Result<(Verdict, ExecutionTrace), EngineError> {
    let trace = Simulator::new(g, q, params)?.run();
    Ok((trace.verdict, trace))
}

/// Outcome of the control phase of the centralized initialization.
#[derive(Debug, Clone, PartialEq)]
pub struct InitializationTrace {
    /// Control events only.
    pub events: Vec<TraceEvent>,
    /// Time at which each node received (or, at the source, issued) START.
    pub start_times: Vec<f64>,
    /// Spanning-tree parent of each node; `None` at the source.
    pub tree_parent: Vec<Option<NodeIx>>,
    /// Control messages put on the wire.
    pub control_messages: usize,
}

/// Runs only the broadcast/convergecast/start phase from `source`.
pub fn centralized_initialize(
    g: &Dag,
    q: &DSepQuery,
    source: &str,
    params: &SimulationParams,
) -> Result<InitializationTrace, EngineError> {
    let params =
        SimulationParams { init: InitMode::Centralized { source: source.to_string() }, ..params.clone() };
    let mut sim = Simulator::new(g, q, &params)?;
    sim.control_only = true;
    let trace = sim.run_control_phase();
    let (_, states) = sim.init.take().expect("centralized mode");
    Ok(InitializationTrace {
        events: trace.events,
        start_times: states.iter().map(|s| s.start_time.expect("every node starts")).collect(),
        tree_parent: states.iter().map(|s| s.parent).collect(),
        control_messages: trace.control_messages,
    })
}
