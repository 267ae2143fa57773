//! Root enumeration, scalar-multiple sets, inversion sets, the ρ-map to the
//! standard root system and bounded dominance search.

use serde::Serialize;

use crate::egcm::{EgcmGraph, GraphError, OnPath};
use crate::game::{self, Outcome, Strategy};
use crate::geom::{GroupWord, Sign, Witness};
use crate::index::VecIndex;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_length: usize,
    pub max_count: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_length: 30,
            max_count: 10_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RootRecord {
    pub coeffs: Vec<Scalar>,
    /// Shortest witness, lexicographically least among shortest ones.
    pub witness: Witness,
    pub sign: Sign,
}

impl RootRecord {
    pub fn is_positive(&self) -> bool {
        self.sign == Sign::Positive
    }
}

/// Breadth-first orbit of the simple roots, resumable via [`RootSet::expand`].
#[derive(Clone, Debug)]
pub struct RootSet {
    records: Vec<RootRecord>,
    index: VecIndex,
    frontier: Vec<usize>,
    depth: usize,
    exhausted: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum RootsError {
    #[error("root enumeration exceeded {max_count} roots")]
    LimitExceeded {
        max_count: usize,
        partial: Box<RootSet>,
    },
    #[error("N(w) is infinite: node {} lies in an ON-component with non-unital cycle {}", .node + 1, crate::egcm::node_list(&.cycle.0))]
    InfiniteInversionSet { node: usize, cycle: OnPath },
    #[error("root enumeration did not exhaust; W may be infinite")]
    NotFinite,
    #[error("root is not positive")]
    NegativeRoot,
    #[error("node {} out of range", .0 + 1)]
    NodeOutOfRange(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl RootsError {
    pub fn code(&self) -> &'static str {
        match self {
            RootsError::LimitExceeded { .. } => "LimitExceeded",
            RootsError::InfiniteInversionSet { .. } => "InfiniteInversionSet",
            RootsError::NotFinite => "NotFinite",
            RootsError::NegativeRoot => "NegativeRoot",
            RootsError::NodeOutOfRange(_) => "NodeOutOfRange",
            RootsError::Graph(e) => e.code(),
        }
    }
}

impl RootSet {
    /// The simple roots, at depth zero.
    pub fn new(g: &EgcmGraph) -> Self {
        let mut set = RootSet {
            records: Vec::new(),
            index: VecIndex::new(g.is_exact(), g.tol()),
            frontier: Vec::new(),
            depth: 0,
            exhausted: false,
        };
        for i in 0..g.n() {
            let coeffs = g.simple_root(i);
            let (id, _) = set.index.insert(&coeffs);
            set.records.push(RootRecord {
                coeffs,
                witness: Witness {
                    word: GroupWord::identity(),
                    origin: i,
                },
                sign: Sign::Positive,
            });
            set.frontier.push(id);
        }
        set
    }

    /// Roots one reflection beyond the frontier, keyed by position in the
    /// index-to-be, each with its least witness.
    fn next_level(&self, g: &EgcmGraph) -> Vec<(Vec<Scalar>, Witness)> {
        let mut fresh = VecIndex::new(g.is_exact(), g.tol());
        let mut found: Vec<(Vec<Scalar>, Witness)> = Vec::new();
        for &id in &self.frontier {
            let parent = &self.records[id];
            for k in 0..g.n() {
                let child = g.reflect(k, &parent.coeffs);
                if self.index.find(&child).is_some() {
                    continue;
                }
                let mut word = vec![k];
                word.extend_from_slice(parent.witness.word.letters());
                let witness = Witness {
                    word: GroupWord(word),
                    origin: parent.witness.origin,
                };
                let (slot, is_new) = fresh.insert(&child);
                if is_new {
                    found.push((child, witness));
                } else if witness < found[slot].1 {
                    found[slot].1 = witness;
                }
            }
        }
        found
    }

    /// Extends the orbit up to `limits.max_length`. Sets the exhausted flag
    /// when a generator sweep over the frontier yields nothing new.
    pub fn expand(&mut self, g: &EgcmGraph, limits: Limits) -> Result<(), usize> {
        while !self.exhausted {
            let level = self.next_level(g);
            if level.is_empty() {
                self.exhausted = true;
                self.frontier.clear();
                break;
            }
            if self.depth >= limits.max_length {
                break;
            }
            self.frontier.clear();
            for (coeffs, witness) in level {
                let (id, _) = self.index.insert(&coeffs);
                let sign = g.sign(&coeffs);
                self.records.push(RootRecord {
                    coeffs,
                    witness,
                    sign,
                });
                self.frontier.push(id);
            }
            self.depth += 1;
            if self.records.len() > limits.max_count {
                return Err(self.records.len());
            }
        }
        Ok(())
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    /// Length of the longest witness stored.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[RootRecord] {
        &self.records
    }

    pub fn find(&self, coeffs: &[Scalar]) -> Option<&RootRecord> {
        self.index.find(coeffs).map(|id| &self.records[id])
    }

    pub fn contains(&self, coeffs: &[Scalar]) -> bool {
        self.index.find(coeffs).is_some()
    }

    pub fn positive(&self) -> impl Iterator<Item = &RootRecord> {
        self.records.iter().filter(|r| r.is_positive())
    }

    pub fn positive_count(&self) -> usize {
        self.positive().count()
    }

    /// Positive roots grouped into classes of mutual positive multiples.
    /// Classes are ordered by first appearance; members keep enumeration order.
    pub fn ray_classes(&self, g: &EgcmGraph) -> Vec<Vec<&RootRecord>> {
        let mut index = VecIndex::new(g.is_exact(), g.tol());
        let mut classes: Vec<Vec<&RootRecord>> = Vec::new();
        for r in self.positive() {
            let (id, is_new) = index.insert(&ray_key(g, &r.coeffs));
            if is_new {
                classes.push(Vec::new());
            }
            classes[id].push(r);
        }
        classes
    }

    /// Positive scalars `K` with `K·v` an enumerated root.
    pub fn multiples_of(&self, g: &EgcmGraph, v: &[Scalar]) -> Vec<Scalar> {
        let tol = g.tol();
        let Some(pivot) = v.iter().position(|c| !tol.is_zero(c)) else {
            return Vec::new();
        };
        let key = ray_key(g, v);
        self.positive()
            .filter(|r| tol.vec_eq(&ray_key(g, &r.coeffs), &key))
            .map(|r| &r.coeffs[pivot] / &v[pivot])
            .collect()
    }
}

/// `v / |v_k|` for the first nonzero coordinate `k`.
pub fn ray_key(g: &EgcmGraph, v: &[Scalar]) -> Vec<Scalar> {
    let tol = g.tol();
    match v.iter().find(|c| !tol.is_zero(c)) {
        None => v.to_vec(),
        Some(c) => {
            let scale = c.abs();
            v.iter()
                .map(|x| if tol.is_zero(x) { g.scalar(0) } else { x / &scale })
                .collect()
        }
    }
}

pub fn enumerate_roots(g: &EgcmGraph, limits: Limits) -> Result<RootSet, RootsError> {
    let mut set = RootSet::new(g);
    match set.expand(g, limits) {
        Ok(()) => Ok(set),
        Err(_) => Err(RootsError::LimitExceeded {
            max_count: limits.max_count,
            partial: Box::new(set),
        }),
    }
}

/// `𝔖(α_x)` as the set of scalars `K`.
#[derive(Clone, Debug)]
pub struct SMultSet {
    pub node: usize,
    /// Distinct `K` in order of the simple ON-paths producing them; empty
    /// when infinite.
    pub values: Vec<Scalar>,
    pub finite: bool,
    /// A simple ON-cycle with `Π ≠ 1` when the set is infinite.
    pub certificate: Option<OnPath>,
}

impl EgcmGraph {
    pub fn s_mult(&self, x: usize) -> Result<SMultSet, RootsError> {
        if x >= self.n() {
            return Err(RootsError::NodeOutOfRange(x));
        }
        let comp = self.component_of(x);
        match self.non_unital_cycle(comp) {
            Some(cycle) => Ok(SMultSet {
                node: x,
                values: Vec::new(),
                finite: false,
                certificate: Some(cycle),
            }),
            None => Ok(SMultSet {
                node: x,
                values: self.distinct_pi_values(x),
                finite: true,
                certificate: None,
            }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct InversionSet {
    /// The reduced word the set was computed from.
    pub word: GroupWord,
    pub roots: Vec<Vec<Scalar>>,
}

impl InversionSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

impl EgcmGraph {
    fn check_word(&self, w: &GroupWord) -> Result<(), RootsError> {
        match w.letters().iter().find(|&&x| x >= self.n()) {
            Some(&x) => Err(RootsError::NodeOutOfRange(x)),
            None => Ok(()),
        }
    }

    fn require_unital(&self, w: &GroupWord) -> Result<(), RootsError> {
        for &x in w.letters() {
            if let Some(cycle) = self.non_unital_cycle(self.component_of(x)) {
                return Err(RootsError::InfiniteInversionSet { node: x, cycle });
            }
        }
        Ok(())
    }

    /// `N(w)` via `N(u s_i) = s_i(N(u)) ⊔ 𝔖(α_i)` along a reduced word.
    pub fn inversion_set(&self, w: &GroupWord) -> Result<InversionSet, RootsError> {
        self.check_word(w)?;
        self.require_unital(w)?;
        let word = self.reduce(w).word;
        let mut roots: Vec<Vec<Scalar>> = Vec::new();
        for &i in word.letters() {
            for r in roots.iter_mut() {
                self.reflect_in_place(i, r);
            }
            for k in self.distinct_pi_values(i) {
                let mut v = self.zero_vector();
                v[i] = k;
                roots.push(v);
            }
        }
        Ok(InversionSet { word, roots })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NBounds {
    pub f1: usize,
    pub f2: usize,
    pub length: usize,
    pub lower: usize,
    pub upper: usize,
    pub count: usize,
}

impl NBounds {
    pub fn holds(&self) -> bool {
        self.lower <= self.count && self.count <= self.upper
    }
}

impl EgcmGraph {
    /// `f₁ℓ(w) ≤ |N(w)| ≤ f₂ℓ(w)` with `f₁, f₂` taken over the ON-components
    /// containing letters of `w` (both 1 for the identity).
    pub fn n_bounds_report(&self, w: &GroupWord) -> Result<NBounds, RootsError> {
        let set = self.inversion_set(w)?;
        let mut fs: Vec<usize> = Vec::new();
        for &x in set.word.letters() {
            fs.push(self.f_value(self.component_of(x))?);
        }
        let f1 = fs.iter().copied().min().unwrap_or(1);
        let f2 = fs.iter().copied().max().unwrap_or(1);
        let length = set.word.len();
        Ok(NBounds {
            f1,
            f2,
            length,
            lower: f1 * length,
            upper: f2 * length,
            count: set.len(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositiveRootBounds {
    pub count: usize,
    pub std_count: usize,
    pub f1: usize,
    pub f2: usize,
    /// Steps of the numbers game from the all-ones position; this is `ℓ(w₀)`.
    pub longest_element_length: Option<usize>,
}

impl PositiveRootBounds {
    pub fn holds(&self) -> bool {
        self.f1 * self.std_count <= self.count && self.count <= self.f2 * self.std_count
    }
}

/// `|Φ⁺|`, `|Φ⁺_std|` and the f-range over all ON-components, for finite `W`.
pub fn positive_root_bounds(g: &EgcmGraph, limits: Limits) -> Result<PositiveRootBounds, RootsError> {
    let exhausted = |graph: &EgcmGraph| -> Result<RootSet, RootsError> {
        let set = enumerate_roots(graph, limits).map_err(|_| RootsError::NotFinite)?;
        if set.is_exhausted() {
            Ok(set)
        } else {
            Err(RootsError::NotFinite)
        }
    };
    let roots = exhausted(g)?;
    let std = g.standardize();
    let std_roots = exhausted(&std)?;
    let mut fs = Vec::new();
    for c in 0..g.on_components().len() {
        fs.push(g.f_value(c)?);
    }
    let start = vec![g.scalar(1); g.n()];
    let steps_bound = 4 * std_roots.positive_count() + 4;
    let record = game::play(g, &start, &Strategy::FirstLegal, steps_bound)
        .expect("first-legal play is always legal");
    Ok(PositiveRootBounds {
        count: roots.positive_count(),
        std_count: std_roots.positive_count(),
        f1: fs.iter().copied().min().unwrap_or(1),
        f2: fs.iter().copied().max().unwrap_or(1),
        longest_element_length: (record.outcome == Outcome::Terminated).then_some(record.steps),
    })
}

/// `ρ(𝔖(w.α_i)) = w.α_i^std`, computed in the standardized graph `std`.
pub fn rho_map(
    g: &EgcmGraph,
    std: &EgcmGraph,
    witness: &Witness,
) -> Result<Vec<Scalar>, RootsError> {
    g.check_word(&witness.word)?;
    if witness.origin >= g.n() {
        return Err(RootsError::NodeOutOfRange(witness.origin));
    }
    if g.sign(&g.word_root(&witness.word, witness.origin)) != Sign::Positive {
        return Err(RootsError::NegativeRoot);
    }
    Ok(std.word_root(&witness.word, witness.origin))
}

/// A ray class of positive roots with its ρ-image.
#[derive(Clone, Debug)]
pub struct DominanceClass {
    pub representative: Vec<Scalar>,
    pub witness: Witness,
    pub std_image: Vec<Scalar>,
}

impl DominanceClass {
    pub fn new(g: &EgcmGraph, std: &EgcmGraph, witness: Witness) -> Result<Self, RootsError> {
        let std_image = rho_map(g, std, &witness)?;
        Ok(DominanceClass {
            representative: g.word_root(&witness.word, witness.origin),
            witness,
            std_image,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dominance {
    /// No `w` with `ℓ(w) ≤ bound` separates the roots.
    DominatesUpToBound { states: usize },
    /// `w.α ∈ Φ⁻` while `w.β ∈ Φ⁺`.
    NotDominates { witness: GroupWord },
}

/// Searches for `w`, `ℓ(w) ≤ bound`, with `w.α` negative and `w.β` positive.
/// Elements are explored breadth-first and merged when they move the pair
/// `(α, β)` to the same place, since the test only depends on that pair.
pub fn dominance_test(g: &EgcmGraph, alpha: &[Scalar], beta: &[Scalar], bound: usize) -> Dominance {
    let n = g.n();
    let mut seen = VecIndex::new(g.is_exact(), g.tol());
    let mut state: Vec<Scalar> = alpha.iter().chain(beta).cloned().collect();
    seen.insert(&state);
    let mut frontier: Vec<(Vec<Scalar>, GroupWord)> = vec![(std::mem::take(&mut state), GroupWord::identity())];
    for depth in 0..=bound {
        let mut next = Vec::new();
        for (s, w) in &frontier {
            if g.sign(&s[..n]) == Sign::Negative && g.sign(&s[n..]) == Sign::Positive {
                return Dominance::NotDominates { witness: w.clone() };
            }
            if depth == bound {
                continue;
            }
            for k in 0..n {
                let mut a = g.reflect(k, &s[..n]);
                a.extend(g.reflect(k, &s[n..]));
                if seen.insert(&a).1 {
                    let mut word = vec![k];
                    word.extend_from_slice(w.letters());
                    next.push((a, GroupWord(word)));
                }
            }
        }
        if next.is_empty() && depth < bound {
            break;
        }
        frontier = next;
    }
    Dominance::DominatesUpToBound { states: seen.len() }
}

/// Orbit search for multiples of `α_x`: the distinct positive `K` with
/// `K α_x` reached by words of length at most `max_length`.
pub fn orbit_multiples(g: &EgcmGraph, x: usize, max_length: usize, max_count: usize) -> Vec<Scalar> {
    let set = match enumerate_roots(
        g,
        Limits {
            max_length,
            max_count,
        },
    ) {
        Ok(set) => set,
        Err(RootsError::LimitExceeded { partial, .. }) => *partial,
        Err(e) => panic!("unexpected enumeration error: {e}"),
    };
    let mut out: Vec<Scalar> = Vec::new();
    for r in set.positive() {
        if let Some((y, k)) = g.simple_multiple(&r.coeffs) {
            if y == x && !out.iter().any(|v| g.tol().eq(v, &k)) {
                out.push(k);
            }
        }
    }
    out
}
