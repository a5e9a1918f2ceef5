//! Append-only protocol transcripts and per-party capability audits.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Who performed an event.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Actor {
    Auctioneer,
    Bidder(usize),
    Eve,
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Actor::Auctioneer => write!(f, "alice"),
            Actor::Bidder(i) => write!(f, "bob{i}"),
            Actor::Eve => write!(f, "eve"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Prepare,
    Send,
    Receive,
    Intercept,
    Operate,
    Measure,
    Announce,
    Abort,
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Action::Prepare => "prepare",
            Action::Send => "send",
            Action::Receive => "receive",
            Action::Intercept => "intercept",
            Action::Operate => "operate",
            Action::Measure => "measure",
            Action::Announce => "announce",
            Action::Abort => "abort",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub index: usize,
    pub actor: Actor,
    pub action: Action,
    pub payload: String,
    /// For quantum sends, receives and interceptions: the transfer they belong to.
    pub transfer: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    events: Vec<Event>,
    next_transfer: usize,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn record(&mut self, actor: Actor, action: Action, payload: impl Into<String>) -> usize {
        self.push(actor, action, payload.into(), None)
    }

    /// Logs a quantum transmission and returns its transfer id.
    pub fn send(&mut self, from: Actor, payload: impl Into<String>) -> usize {
        let id = self.next_transfer;
        self.next_transfer += 1;
        self.push(from, Action::Send, payload.into(), Some(id));
        id
    }

    pub fn receive(&mut self, to: Actor, transfer: usize, payload: impl Into<String>) {
        self.push(to, Action::Receive, payload.into(), Some(transfer));
    }

    pub fn intercept(&mut self, transfer: usize, payload: impl Into<String>) {
        self.push(Actor::Eve, Action::Intercept, payload.into(), Some(transfer));
    }

    /// Transfers with a send but neither a receive nor an interception.
    pub fn unmatched_sends(&self) -> Vec<usize> {
        let closed: std::collections::HashSet<usize> = self
            .events
            .iter()
            .filter(|e| matches!(e.action, Action::Receive | Action::Intercept))
            .filter_map(|e| e.transfer)
            .collect();
        self.events
            .iter()
            .filter(|e| e.action == Action::Send)
            .filter_map(|e| e.transfer)
            .filter(|t| !closed.contains(t))
            .collect()
    }

    pub fn announcements(&self) -> impl Iterator<Item = &Event> {
        self.events.iter().filter(|e| e.action == Action::Announce)
    }

    /// One event per line: `index<TAB>actor<TAB>action<TAB>payload`.
    pub fn to_log(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&format!("{}\t{}\t{}\t{}\n", e.index, e.actor, e.action, e.payload));
        }
        out
    }

    fn push(&mut self, actor: Actor, action: Action, payload: String, transfer: Option<usize>) -> usize {
        let index = self.events.len();
        self.events.push(Event {
            index,
            actor,
            action,
            payload,
            transfer,
        });
        index
    }
}

/// Quantum capability used by a party.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Capability {
    PrepareZ,
    MeasureZ,
    Reflect,
    /// Anything a classical party may not do, with a short description.
    Other(String),
}

impl Capability {
    pub fn is_classical(&self) -> bool {
        !matches!(self, Capability::Other(_))
    }
}

/// Counts of quantum actions per party, stage and capability.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CapabilityAudit {
    counts: BTreeMap<(Actor, String, Capability), u64>,
}

impl CapabilityAudit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, actor: Actor, stage: &str, cap: Capability) {
        self.record_n(actor, stage, cap, 1);
    }

    pub fn record_n(&mut self, actor: Actor, stage: &str, cap: Capability, n: u64) {
        if n > 0 {
            *self.counts.entry((actor, stage.to_string(), cap)).or_insert(0) += n;
        }
    }

    pub fn merge(&mut self, other: &CapabilityAudit) {
        for (k, v) in &other.counts {
            *self.counts.entry(k.clone()).or_insert(0) += v;
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Actor, &str, &Capability, u64)> {
        self.counts.iter().map(|((a, s, c), n)| (a, s.as_str(), c, *n))
    }

    pub fn count(&self, actor: Actor, stage: &str, cap: &Capability) -> u64 {
        self.counts
            .get(&(actor, stage.to_string(), cap.clone()))
            .copied()
            .unwrap_or(0)
    }

    /// Capabilities outside the classical set used by any bidder.
    pub fn bidder_violations(&self) -> Vec<(Actor, String, Capability, u64)> {
        self.counts
            .iter()
            .filter(|((a, _, c), _)| matches!(a, Actor::Bidder(_)) && !c.is_classical())
            .map(|((a, s, c), n)| (*a, s.clone(), c.clone(), *n))
            .collect()
    }

    pub fn bidders_are_classical(&self) -> bool {
        self.bidder_violations().is_empty()
    }
}
