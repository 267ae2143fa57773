//! The numbers game: `W` acting on positions `λ ∈ V*` written in
//! coordinates `x_i = ⟨λ, α_i⟩`.
//!
//! Firing node `i` applies `s_i`: `x_i ↦ −x_i` and `x_j ↦ x_j − a_ij x_i`. A
//! firing is legal when `x_i > 0`. A play stops when the position lies in
//! `−D`, i.e. every coordinate is `≤ 0`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::egcm::{EgcmGraph, GraphError, MatrixType, Mode};
use crate::geom::GroupWord;
use crate::roots::{enumerate_roots, Limits};
use crate::scalar::{Scalar, ScalarParseError};

pub type Position = Vec<Scalar>;

/// Default step bound for plays.
pub const DEFAULT_MAX_STEPS: usize = 100_000;

/// Float-mode plays stop once a coordinate exceeds this magnitude.
pub const DIVERGENCE_CUTOFF: f64 = 1e12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    FirstLegal,
    Random { seed: u64 },
    /// Fire exactly these nodes, in order.
    UserSequence { moves: Vec<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// The final position is in `−D`.
    Terminated,
    StepLimit,
    /// A user sequence ran out while legal moves remained.
    SequenceEnded,
}

#[derive(Clone, Debug)]
pub struct PlayRecord {
    pub initial: Position,
    /// Fired nodes in firing order.
    pub fired: Vec<usize>,
    pub final_position: Position,
    pub outcome: Outcome,
    pub steps: usize,
}

impl PlayRecord {
    /// The group element `s_{i_p}⋯s_{i_1}` taking the initial position to
    /// the final one.
    pub fn word(&self) -> GroupWord {
        GroupWord::from_application_order(&self.fired)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("illegal move at step {}: node {} is not positive", .step + 1, .node + 1)]
    IllegalUserMove { step: usize, node: usize },
    #[error("node {} out of range", .0 + 1)]
    NodeOutOfRange(usize),
    #[error("position has {got} coordinates, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("coordinate {} {value:?}: {source}", .index + 1)]
    ValueSyntax {
        index: usize,
        value: String,
        source: ScalarParseError,
    },
}

impl GameError {
    pub fn code(&self) -> &'static str {
        match self {
            GameError::IllegalUserMove { .. } => "IllegalUserMove",
            GameError::NodeOutOfRange(_) => "NodeOutOfRange",
            GameError::WrongLength { .. } => "WrongLength",
            GameError::ValueSyntax { .. } => "ValueSyntaxError",
        }
    }
}

impl EgcmGraph {
    pub fn fire(&self, pos: &[Scalar], i: usize) -> Position {
        let mut out = pos.to_vec();
        self.fire_in_place(&mut out, i);
        out
    }

    pub fn fire_in_place(&self, pos: &mut [Scalar], i: usize) {
        let xi = pos[i].clone();
        if xi.is_literal_zero() {
            return;
        }
        for (j, x) in pos.iter_mut().enumerate() {
            if j == i {
                *x = -&xi;
            } else {
                let a = self.entry(i, j);
                if !a.is_literal_zero() {
                    *x = &*x - &(a * &xi);
                }
            }
        }
    }

    /// `w.λ`, firing the last letter first.
    pub fn act_on_position(&self, w: &GroupWord, pos: &[Scalar]) -> Position {
        let mut out = pos.to_vec();
        for &i in w.letters().iter().rev() {
            self.fire_in_place(&mut out, i);
        }
        out
    }

    pub fn legal_moves(&self, pos: &[Scalar]) -> Vec<usize> {
        let tol = self.tol();
        (0..pos.len()).filter(|&i| tol.is_positive(&pos[i])).collect()
    }

    /// `λ ∈ −D`.
    pub fn is_terminal(&self, pos: &[Scalar]) -> bool {
        self.legal_moves(pos).is_empty()
    }

    /// `λ ∈ D`.
    pub fn in_chamber(&self, pos: &[Scalar]) -> bool {
        let tol = self.tol();
        pos.iter().all(|x| !tol.is_negative(x))
    }

    /// Reads a position, converting to float in float mode.
    pub fn position(&self, values: Vec<Scalar>) -> Result<Position, GameError> {
        if values.len() != self.n() {
            return Err(GameError::WrongLength {
                expected: self.n(),
                got: values.len(),
            });
        }
        Ok(match self.mode() {
            Mode::Exact if values.iter().all(Scalar::is_exact) => values,
            _ => values.into_iter().map(|v| v.to_float()).collect(),
        })
    }

    /// Parses position text. Decimals are read exactly in exact mode.
    pub fn parse_position<S: AsRef<str>>(&self, values: &[S]) -> Result<Position, GameError> {
        let parse = match self.mode() {
            Mode::Exact => Scalar::parse_exact,
            Mode::Float => Scalar::parse,
        };
        let values = values
            .iter()
            .enumerate()
            .map(|(index, v)| {
                parse(v.as_ref()).map_err(|source| GameError::ValueSyntax {
                    index,
                    value: v.as_ref().to_string(),
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.position(values)
    }
}

fn diverged(pos: &[Scalar]) -> bool {
    pos.iter()
        .any(|x| matches!(x, Scalar::Float(f) if !f.is_finite() || f.abs() > DIVERGENCE_CUTOFF))
}

/// Fires according to `strategy` until the position is in `−D`, the user
/// sequence ends, or `max_steps` firings have happened.
pub fn play(
    g: &EgcmGraph,
    pos: &[Scalar],
    strategy: &Strategy,
    max_steps: usize,
) -> Result<PlayRecord, GameError> {
    if pos.len() != g.n() {
        return Err(GameError::WrongLength {
            expected: g.n(),
            got: pos.len(),
        });
    }
    let mut current = pos.to_vec();
    let mut fired = Vec::new();
    let mut rng = match strategy {
        Strategy::Random { seed } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    let outcome = loop {
        let legal = g.legal_moves(&current);
        if let Strategy::UserSequence { moves } = strategy {
            let Some(&node) = moves.get(fired.len()) else {
                break if legal.is_empty() {
                    Outcome::Terminated
                } else {
                    Outcome::SequenceEnded
                };
            };
            if node >= g.n() {
                return Err(GameError::NodeOutOfRange(node));
            }
            if !legal.contains(&node) {
                return Err(GameError::IllegalUserMove {
                    step: fired.len(),
                    node,
                });
            }
        }
        if legal.is_empty() {
            break Outcome::Terminated;
        }
        if fired.len() >= max_steps || diverged(&current) {
            break Outcome::StepLimit;
        }
        let node = match strategy {
            Strategy::FirstLegal => legal[0],
            Strategy::Random { .. } => *legal
                .choose(rng.as_mut().expect("seeded"))
                .expect("non-empty"),
            Strategy::UserSequence { moves } => moves[fired.len()],
        };
        g.fire_in_place(&mut current, node);
        fired.push(node);
    };
    Ok(PlayRecord {
        initial: pos.to_vec(),
        steps: fired.len(),
        fired,
        final_position: current,
        outcome,
    })
}

#[derive(Clone, Debug)]
pub enum GoodPosition {
    Good(PlayRecord),
    /// No termination within the bound; not a proof of non-membership.
    NotGoodUpToBound(PlayRecord),
}

impl GoodPosition {
    pub fn is_good(&self) -> bool {
        matches!(self, GoodPosition::Good(_))
    }
}

/// Semi-decides `λ ∈ −U` by first-legal play.
pub fn is_good_position(g: &EgcmGraph, pos: &[Scalar], max_steps: usize) -> Result<GoodPosition, GameError> {
    let record = play(g, pos, &Strategy::FirstLegal, max_steps)?;
    Ok(match record.outcome {
        Outcome::Terminated => GoodPosition::Good(record),
        _ => GoodPosition::NotGoodUpToBound(record),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeMembership {
    Member,
    NonMemberUpToBound,
    MemberRank2ClosedForm,
    NonMemberRank2ClosedForm,
}

impl ConeMembership {
    pub fn is_member(self) -> bool {
        matches!(self, ConeMembership::Member | ConeMembership::MemberRank2ClosedForm)
    }
}

/// For rank-2 graphs with `pq = 4`, `p = −a_12`: `λ ∈ U` iff `y > −(p/2)x`
/// or `x = y = 0`.
pub fn rank2_pq4_closed_form(g: &EgcmGraph, pos: &[Scalar]) -> Option<bool> {
    if g.n() != 2 || pos.len() != 2 || !g.is_edge(0, 1) {
        return None;
    }
    let tol = g.tol();
    let p = -g.entry(0, 1);
    let q = -g.entry(1, 0);
    if !tol.eq(&(&p * &q), &Scalar::int(4)) {
        return None;
    }
    let (x, y) = (&pos[0], &pos[1]);
    if tol.is_zero(x) && tol.is_zero(y) {
        return Some(true);
    }
    // y > −(p/2)x  ⇔  2y + p x > 0
    let lhs = Scalar::int(2) * y + &p * x;
    Some(tol.is_positive(&lhs))
}

/// `λ ∈ U ⇔ −λ` is good; rank-2 `pq = 4` graphs use the closed form.
pub fn tits_cone_member(g: &EgcmGraph, pos: &[Scalar], max_steps: usize) -> Result<ConeMembership, GameError> {
    if pos.len() != g.n() {
        return Err(GameError::WrongLength {
            expected: g.n(),
            got: pos.len(),
        });
    }
    if let Some(member) = rank2_pq4_closed_form(g, pos) {
        return Ok(if member {
            ConeMembership::MemberRank2ClosedForm
        } else {
            ConeMembership::NonMemberRank2ClosedForm
        });
    }
    tits_cone_by_play(g, pos, max_steps)
}

/// The play-based semi-decision alone.
pub fn tits_cone_by_play(g: &EgcmGraph, pos: &[Scalar], max_steps: usize) -> Result<ConeMembership, GameError> {
    let neg: Position = pos.iter().map(|x| -x).collect();
    Ok(if is_good_position(g, &neg, max_steps)?.is_good() {
        ConeMembership::Member
    } else {
        ConeMembership::NonMemberUpToBound
    })
}

#[derive(Clone, Debug)]
pub enum FiniteTest {
    /// Play from all-ones terminated; `steps = ℓ(w₀)`.
    Finite { steps: usize, word: GroupWord },
    /// No termination, roots did not exhaust, and the matrix type is zero or minus.
    InfiniteEvidence { matrix_type: MatrixType, steps: usize },
    Inconclusive { steps: usize },
}

impl FiniteTest {
    pub fn label(&self) -> &'static str {
        match self {
            FiniteTest::Finite { .. } => "finite",
            FiniteTest::InfiniteEvidence { .. } => "infinite_evidence",
            FiniteTest::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// Plays from the all-ones position; termination means `W` is finite.
pub fn finite_group_test(g: &EgcmGraph, max_steps: usize) -> Result<FiniteTest, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::NotConnected);
    }
    let start = vec![g.scalar(1); g.n()];
    let record = play(g, &start, &Strategy::FirstLegal, max_steps).expect("valid position");
    if record.outcome == Outcome::Terminated {
        return Ok(FiniteTest::Finite {
            steps: record.steps,
            word: record.word(),
        });
    }
    let exhausted = enumerate_roots(g, Limits::default())
        .map(|s| s.is_exhausted())
        .unwrap_or(false);
    if !exhausted {
        if let Ok(t @ (MatrixType::Zero | MatrixType::Minus)) = g.classify_matrix_type() {
            return Ok(FiniteTest::InfiniteEvidence {
                matrix_type: t,
                steps: record.steps,
            });
        }
    }
    Ok(FiniteTest::Inconclusive {
        steps: record.steps,
    })
}
