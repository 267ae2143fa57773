//! Numbers-game sessions with a branching move history, and the store that
//! holds them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use coxroot_core::game::{play, Outcome, Position, Strategy};
use coxroot_core::geom::GroupWord;
use coxroot_core::report::one_based;
use coxroot_core::EgcmGraph;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct HistoryNode {
    pub parent: Option<usize>,
    /// 0-based node fired on the edge from the parent.
    pub fired: Option<usize>,
    pub position: Position,
    pub children: Vec<usize>,
    pub branch: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SessionError {
    IllegalMove(usize),
    UndoAtRoot,
    UnknownHistoryNode(usize),
}

/// One game on a fixed graph. The history is a tree; `cursor` indexes the
/// current node.
#[derive(Debug)]
pub struct Session {
    pub id: String,
    pub graph: Arc<EgcmGraph>,
    nodes: Vec<HistoryNode>,
    cursor: usize,
    branch_count: usize,
    revision: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SessionState {
    pub id: String,
    pub position: Vec<String>,
    pub legal_moves: Vec<usize>,
    pub is_terminal: bool,
    /// Fired nodes from the root to the cursor, in firing order.
    pub fired: Vec<usize>,
    /// A reduced word for the same element, in firing order.
    pub reduced_word: Vec<usize>,
    pub is_reduced: bool,
    pub branch_id: String,
    pub node_id: usize,
    /// Number of state-changing requests applied so far.
    pub revision: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HistoryView {
    pub cursor: usize,
    pub nodes: Vec<HistoryEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HistoryEntry {
    pub id: usize,
    pub parent: Option<usize>,
    pub fired: Option<usize>,
    pub position: Vec<String>,
    pub children: Vec<usize>,
    pub branch_id: String,
}

fn texts(pos: &Position) -> Vec<String> {
    pos.iter().map(|x| x.to_lossless_string()).collect()
}

impl Session {
    pub fn new(id: String, graph: Arc<EgcmGraph>, position: Position) -> Self {
        Session {
            id,
            graph,
            nodes: vec![HistoryNode {
                parent: None,
                fired: None,
                position,
                children: Vec::new(),
                branch: 0,
            }],
            cursor: 0,
            branch_count: 1,
            revision: 0,
        }
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn nodes(&self) -> &[HistoryNode] {
        &self.nodes
    }

    pub fn position(&self) -> &Position {
        &self.nodes[self.cursor].position
    }

    /// 0-based fired nodes from the root to the cursor.
    pub fn path(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut k = self.cursor;
        while let (Some(p), Some(f)) = (self.nodes[k].parent, self.nodes[k].fired) {
            out.push(f);
            k = p;
        }
        out.reverse();
        out
    }

    pub fn state(&self) -> SessionState {
        let g = &self.graph;
        let pos = self.position();
        let path = self.path();
        let reduction = g.reduce(&GroupWord::from_application_order(&path));
        SessionState {
            id: self.id.clone(),
            position: texts(pos),
            legal_moves: one_based(&g.legal_moves(pos)),
            is_terminal: g.is_terminal(pos),
            is_reduced: reduction.length == path.len(),
            reduced_word: one_based(&reduction.word.application_order()),
            fired: one_based(&path),
            branch_id: format!("b{}", self.nodes[self.cursor].branch),
            node_id: self.cursor,
            revision: self.revision,
        }
    }

    pub fn history(&self) -> HistoryView {
        HistoryView {
            cursor: self.cursor,
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(id, n)| HistoryEntry {
                    id,
                    parent: n.parent,
                    fired: n.fired.map(|f| f + 1),
                    position: texts(&n.position),
                    children: n.children.clone(),
                    branch_id: format!("b{}", n.branch),
                })
                .collect(),
        }
    }

    fn step(&mut self, node: usize) -> Result<(), SessionError> {
        if node >= self.graph.n() || !self.graph.tol().is_positive(&self.position()[node]) {
            return Err(SessionError::IllegalMove(node));
        }
        let here = self.cursor;
        if let Some(&child) = self.nodes[here].children.iter().find(|&&c| self.nodes[c].fired == Some(node)) {
            self.cursor = child;
            return Ok(());
        }
        let branch = if self.nodes[here].children.is_empty() {
            self.nodes[here].branch
        } else {
            self.branch_count += 1;
            self.branch_count - 1
        };
        let position = self.graph.fire(&self.nodes[here].position, node);
        self.nodes.push(HistoryNode {
            parent: Some(here),
            fired: Some(node),
            position,
            children: Vec::new(),
            branch,
        });
        let id = self.nodes.len() - 1;
        self.nodes[here].children.push(id);
        self.cursor = id;
        Ok(())
    }

    /// Fires a 0-based node. Refiring a node already explored from here
    /// moves to the existing child instead of duplicating it.
    pub fn fire(&mut self, node: usize) -> Result<(), SessionError> {
        self.step(node)?;
        self.revision += 1;
        Ok(())
    }

    pub fn undo(&mut self) -> Result<(), SessionError> {
        let parent = self.nodes[self.cursor].parent.ok_or(SessionError::UndoAtRoot)?;
        self.cursor = parent;
        self.revision += 1;
        Ok(())
    }

    pub fn jump(&mut self, node_id: usize) -> Result<(), SessionError> {
        if node_id >= self.nodes.len() {
            return Err(SessionError::UnknownHistoryNode(node_id));
        }
        self.cursor = node_id;
        self.revision += 1;
        Ok(())
    }

    /// Plays from the cursor and records every firing on the current branch.
    pub fn auto(&mut self, strategy: &Strategy, max_steps: usize) -> (Outcome, usize) {
        let record = play(&self.graph, self.position(), strategy, max_steps).expect("session position has length n");
        for &node in &record.fired {
            self.step(node).expect("play only fires legal nodes");
        }
        self.revision += 1;
        (record.outcome, record.steps)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct StoreConfig {
    pub max_sessions: usize,
    pub idle_timeout: Duration,
}

impl Default for StoreConfig {
    fn default() -> Self {
        StoreConfig {
            max_sessions: 256,
            idle_timeout: Duration::from_secs(30 * 60),
        }
    }
}

pub type SharedSession = Arc<tokio::sync::Mutex<Session>>;

struct Slot {
    session: SharedSession,
    last_used: Instant,
    tick: u64,
}

/// In-memory sessions with least-recently-used and idle eviction.
pub struct SessionStore {
    config: StoreConfig,
    slots: Mutex<(HashMap<String, Slot>, u64)>,
}

impl SessionStore {
    pub fn new(config: StoreConfig) -> Self {
        SessionStore {
            config,
            slots: Mutex::new((HashMap::new(), 0)),
        }
    }

    pub fn insert(&self, session: Session) -> SharedSession {
        let id = session.id.clone();
        let shared = Arc::new(tokio::sync::Mutex::new(session));
        let mut guard = self.slots.lock().expect("store lock");
        let (slots, tick) = &mut *guard;
        Self::drop_idle(slots, self.config.idle_timeout);
        while slots.len() >= self.config.max_sessions.max(1) {
            let oldest = slots
                .iter()
                .min_by_key(|(_, s)| s.tick)
                .map(|(k, _)| k.clone())
                .expect("non-empty store");
            slots.remove(&oldest);
        }
        *tick += 1;
        slots.insert(
            id,
            Slot {
                session: shared.clone(),
                last_used: Instant::now(),
                tick: *tick,
            },
        );
        shared
    }

    pub fn get(&self, id: &str) -> Option<SharedSession> {
        let mut guard = self.slots.lock().expect("store lock");
        let (slots, tick) = &mut *guard;
        Self::drop_idle(slots, self.config.idle_timeout);
        *tick += 1;
        let slot = slots.get_mut(id)?;
        slot.last_used = Instant::now();
        slot.tick = *tick;
        Some(slot.session.clone())
    }

    pub fn len(&self) -> usize {
        self.slots.lock().expect("store lock").0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Removes sessions idle for longer than the configured timeout.
    pub fn sweep(&self) {
        let mut guard = self.slots.lock().expect("store lock");
        Self::drop_idle(&mut guard.0, self.config.idle_timeout);
    }

    fn drop_idle(slots: &mut HashMap<String, Slot>, idle: Duration) {
        let now = Instant::now();
        slots.retain(|_, s| now.duration_since(s.last_used) <= idle);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use coxroot_core::{BuildConfig, Scalar};

    fn a2_session(x: i64, y: i64) -> Session {
        let g = EgcmGraph::from_table(&[vec!["2", "-1"], vec!["-1", "2"]], None, BuildConfig::default()).unwrap();
        Session::new("s".into(), Arc::new(g), vec![Scalar::int(x), Scalar::int(y)])
    }

    #[test]
    fn fire_and_undo_branch() {
        let mut s = a2_session(1, 1);
        s.fire(0).unwrap();
        assert_eq!(s.state().position, ["-1", "2"]);
        assert_eq!(s.fire(0), Err(SessionError::IllegalMove(0)));
        s.undo().unwrap();
        assert_eq!(s.cursor(), 0);
        assert_eq!(s.undo(), Err(SessionError::UndoAtRoot));
        s.fire(1).unwrap();
        assert_eq!(s.nodes()[0].children, vec![1, 2]);
        assert_ne!(s.nodes()[1].branch, s.nodes()[2].branch);
        s.undo().unwrap();
        s.fire(0).unwrap();
        assert_eq!(s.cursor(), 1, "refiring reuses the existing child");
        assert_eq!(s.nodes().len(), 3);
    }

    #[test]
    fn auto_extends_branch() {
        let mut s = a2_session(1, 1);
        s.fire(1).unwrap();
        let (outcome, steps) = s.auto(&Strategy::FirstLegal, 100);
        assert_eq!((outcome, steps), (Outcome::Terminated, 2));
        let st = s.state();
        assert_eq!(st.position, ["-1", "-1"]);
        assert!(st.is_terminal && st.is_reduced);
        assert_eq!(st.fired.len(), 3);
        assert_eq!(st.branch_id, "b0");
        assert_eq!(st.revision, 2);
    }

    #[test]
    fn store_evicts_least_recently_used() {
        let store = SessionStore::new(StoreConfig {
            max_sessions: 2,
            ..StoreConfig::default()
        });
        for id in ["a", "b"] {
            let mut s = a2_session(1, 1);
            s.id = id.into();
            store.insert(s);
        }
        assert!(store.get("a").is_some());
        let mut c = a2_session(1, 1);
        c.id = "c".into();
        store.insert(c);
        assert!(store.get("b").is_none());
        assert!(store.get("a").is_some() && store.get("c").is_some());
    }

    #[test]
    fn store_drops_idle_sessions() {
        let store = SessionStore::new(StoreConfig {
            max_sessions: 8,
            idle_timeout: Duration::ZERO,
        });
        store.insert(a2_session(1, 1));
        std::thread::sleep(Duration::from_millis(5));
        store.sweep();
        assert!(store.is_empty());
    }
}
