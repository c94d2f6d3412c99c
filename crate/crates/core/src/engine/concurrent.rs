//! Thread-per-node execution over in-process FIFO channels.
//!
//! Timestamps are logical: every logged event takes the next tick of a
//! shared counter, and events are logged before the message they describe
//! is handed to a channel, so tick order respects causality.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc::{self, Receiver, Sender};
use std::sync::{Arc, Mutex};
use std::thread;

use super::color::{Color, NodeColor};
use super::node::{ColorMessage, NodeState, Role};
use super::params::{InitMode, SimulationParams};
use super::trace::{ExecutionTrace, TraceBuilder, TraceEvent, Verdict};
use crate::error::EngineError;
use crate::graph::{DSepQuery, Dag, NodeIx};

enum Envelope {
    Color(ColorMessage),
    Stop,
}

enum Report {
    Clash { node: NodeIx, tick: usize },
    Quiescent,
}

struct Shared {
    log: Mutex<Vec<TraceEvent>>,
    /// Messages in transit plus nodes still handling one (or activating).
    in_flight: AtomicUsize,
    reports: Mutex<Sender<Report>>,
}

impl Shared {
    /// Logs `make(tick)` and returns the tick.
    fn log(&self, make: impl FnOnce(f64) -> TraceEvent) -> usize {
        let mut log = self.log.lock().expect("log lock");
        let tick = log.len();
        log.push(make(tick as f64));
        tick
    }

    fn report(&self, r: Report) {
        let _ = self.reports.lock().expect("report lock").send(r);
    }

    fn transmit(&self, peers: &[Sender<Envelope>], msg: ColorMessage) {
        self.in_flight.fetch_add(1, Ordering::SeqCst);
        self.log(|time| TraceEvent::Send { time, msg });
        let _ = peers[msg.dst].send(Envelope::Color(msg));
    }

    fn done_one(&self) {
        if self.in_flight.fetch_sub(1, Ordering::SeqCst) == 1 {
            self.report(Report::Quiescent);
        }
    }
}

fn node_loop(
    g: &Dag,
    v: NodeIx,
    role: Role,
    initial: Option<Color>,
    inbox: Receiver<Envelope>,
    peers: Vec<Sender<Envelope>>,
    shared: &Shared,
) {
    let mut state = NodeState::default();
    if let Some(color) = initial {
        let out = state.activate(g, v, color);
        shared.log(|time| TraceEvent::ColorChange { time, node: v, from: NodeColor::None, to: color.into() });
        for m in out {
            shared.transmit(&peers, m);
        }
    }
    shared.done_one();

    while let Ok(Envelope::Color(msg)) = inbox.recv() {
        shared.log(|time| TraceEvent::Deliver { time, msg });
        let old = state.color;
        let out = state.receive(g, &msg, role);
        if state.color == NodeColor::Clash && old != NodeColor::Clash {
            let tick = shared.log(|time| TraceEvent::Clash { time, node: v, src: msg.src });
            shared.report(Report::Clash { node: v, tick });
        } else if state.color != old {
            shared.log(|time| TraceEvent::ColorChange { time, node: v, from: old, to: state.color });
            for m in out {
                shared.transmit(&peers, m);
            }
        } else if state.color != NodeColor::Clash {
            for m in out {
                shared.transmit(&peers, m);
            }
        }
        shared.done_one();
    }
}

/// Runs the protocol with one OS thread per node.
///
/// Only self-activation is supported. Times in the returned trace are
/// logical ticks, not simulated seconds.
pub fn run_query_concurrent(
    g: &Dag,
    q: &DSepQuery,
    params: &SimulationParams,
) -> Result<(Verdict, ExecutionTrace), EngineError> {
    params.validate()?;
    DSepQuery::from_indices(g, q.a().iter().copied(), q.b().iter().copied(), q.c().iter().copied())?;
    if params.init != InitMode::SelfActivated {
        return Err(EngineError::Unsupported("the concurrent runner only supports self-activation"));
    }

    let n = g.len();
    let mut initial = vec![None; n];
    let mut roles = vec![Role::NotInC; n];
    q.a().iter().for_each(|&v| initial[v] = Some(Color::Green));
    q.b().iter().for_each(|&v| initial[v] = Some(Color::Red));
    for &v in q.c() {
        initial[v] = Some(Color::White);
        roles[v] = Role::InC;
    }

    let (report_tx, report_rx) = mpsc::channel();
    let shared = Arc::new(Shared {
        log: Mutex::new(Vec::new()),
        in_flight: AtomicUsize::new(n),
        reports: Mutex::new(report_tx),
    });
    let (senders, receivers): (Vec<_>, Vec<_>) = (0..n).map(|_| mpsc::channel()).unzip();

    let report = thread::scope(|scope| {
        for (v, inbox) in receivers.into_iter().enumerate() {
            let peers = senders.clone();
            let shared = Arc::clone(&shared);
            let (role, init) = (roles[v], initial[v]);
            scope.spawn(move || node_loop(g, v, role, init, inbox, peers, &shared));
        }
        let first = if n == 0 { Report::Quiescent } else { report_rx.recv().expect("a node reports") };
        for tx in &senders {
            let _ = tx.send(Envelope::Stop);
        }
        first
    });

    let log = std::mem::take(&mut *shared.log.lock().expect("log lock"));
    let cutoff = match report {
        Report::Clash { tick, .. } => tick + 1,
        Report::Quiescent => log.len(),
    };
    let mut builder = TraceBuilder::new(g);
    builder.commit(0.0);
    for ev in &log[..cutoff] {
        match *ev {
            TraceEvent::Send { time, msg } => builder.send(time, msg),
            TraceEvent::Deliver { time, msg } => builder.deliver(time, msg),
            TraceEvent::ColorChange { time, node, to, .. } => {
                builder.color_change(time, node, to);
                builder.commit(time);
            }
            TraceEvent::Clash { time, node, src } => {
                builder.clash(time, node, src);
                builder.commit(time);
            }
            TraceEvent::Control { .. } => unreachable!("no control traffic in concurrent runs"),
        }
    }
    let verdict = match report {
        Report::Clash { node, tick } => Verdict::Dependent { node, time: tick as f64 },
        Report::Quiescent => Verdict::Independent {
            equilibrium_time: builder.last_change(),
            quiescence_time: builder.last_delivery(),
        },
    };
    let trace = builder.finish(verdict);
    Ok((verdict, trace))
}
