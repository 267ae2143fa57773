//! E-generalized Cartan matrices and their graphs.
//!
//! An [`EgcmGraph`] owns a validated matrix `A` together with everything that
//! can be read off it combinatorially: bond orders `m_ij`, odd neighbors and
//! odd asymmetries, ON-paths and their Π-products, ON-connected components,
//! the unital ON-cyclic property and f-values. The graph is immutable after
//! construction.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, Constraint, Relation};
use crate::scalar::{Scalar, ScalarParseError, Tolerance, DEFAULT_TOLERANCE};

/// Default upper bound on `k` when recognizing `4cos²(π/k)` in float mode.
pub const DEFAULT_K_MAX: u32 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BuildConfig {
    /// `None` picks exact mode iff every entry is rational.
    pub mode: Option<Mode>,
    pub tolerance: f64,
    pub k_max: u32,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            mode: None,
            tolerance: DEFAULT_TOLERANCE,
            k_max: DEFAULT_K_MAX,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BondOrder {
    Finite(u32),
    Infinite,
}

impl BondOrder {
    pub fn finite(self) -> Option<u32> {
        match self {
            BondOrder::Finite(m) => Some(m),
            BondOrder::Infinite => None,
        }
    }

    pub fn is_odd(self) -> bool {
        matches!(self, BondOrder::Finite(m) if m % 2 == 1)
    }

    pub fn is_even(self) -> bool {
        matches!(self, BondOrder::Finite(m) if m % 2 == 0)
    }
}

impl fmt::Display for BondOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BondOrder::Finite(m) => write!(f, "{m}"),
            BondOrder::Infinite => f.write_str("inf"),
        }
    }
}

/// Vinberg's trichotomy for a connected matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixType {
    Plus,
    Zero,
    Minus,
}

impl fmt::Display for MatrixType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixType::Plus => "plus",
            MatrixType::Zero => "zero",
            MatrixType::Minus => "minus",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("entry ({}, {}): {source}", .i + 1, .j + 1)]
    Parse {
        i: usize,
        j: usize,
        source: ScalarParseError,
    },
    #[error("matrix must be square with at least one row")]
    Shape,
    #[error("diagonal entry ({0}, {0}) is not 2", .i + 1)]
    DiagonalNotTwo { i: usize },
    #[error("off-diagonal entry ({}, {}) is positive", .i + 1, .j + 1)]
    PositiveOffDiagonal { i: usize, j: usize },
    #[error("entry ({0}, {1}) is zero but ({1}, {0}) is not", .i + 1, .j + 1)]
    AsymmetricZeroPair { i: usize, j: usize },
    #[error("product a_ij·a_ji = {product} for ({}, {}) is not 4cos²(π/k) for a unique k ≤ k_max", .i + 1, .j + 1)]
    UnrecognizedBond { i: usize, j: usize, product: String },
    #[error("nodes {} and {} are not odd neighbors", .i + 1, .j + 1)]
    NotOddNeighbors { i: usize, j: usize },
    #[error("sequence {} is not an ON-path", crate::egcm::node_list(.0))]
    InvalidPath(Vec<usize>),
    #[error("ON-component {} is not unital ON-cyclic", crate::egcm::node_list(.0))]
    NotUnitalOnCyclic(Vec<usize>),
    #[error("graph is not connected")]
    NotConnected,
    #[error("node {} out of range", .0 + 1)]
    NodeOutOfRange(usize),
    #[error("matrix type is ambiguous at this tolerance")]
    AmbiguousMatrixType,
}

/// `1 2 3` with 1-based labels, for messages.
pub(crate) fn node_list(nodes: &[usize]) -> String {
    nodes.iter().map(|k| (k + 1).to_string()).collect::<Vec<_>>().join(" ")
}

impl GraphError {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            GraphError::Parse { .. } | GraphError::Shape => "ParseError",
            GraphError::DiagonalNotTwo { .. } => "DiagonalNotTwo",
            GraphError::PositiveOffDiagonal { .. } => "PositiveOffDiagonal",
            GraphError::AsymmetricZeroPair { .. } => "AsymmetricZeroPair",
            GraphError::UnrecognizedBond { .. } => "UnrecognizedBond",
            GraphError::NotOddNeighbors { .. } => "NotOddNeighbors",
            GraphError::InvalidPath(_) => "InvalidPath",
            GraphError::NotUnitalOnCyclic(_) => "NotUnitalONCyclic",
            GraphError::NotConnected => "NotConnected",
            GraphError::NodeOutOfRange(_) => "NodeOutOfRange",
            GraphError::AmbiguousMatrixType => "AmbiguousMatrixType",
        }
    }
}

/// A path of odd neighbors `[γ_{i_0}, …, γ_{i_p}]`, zero-based node indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OnPath(pub Vec<usize>);

impl OnPath {
    pub fn trivial(node: usize) -> Self {
        OnPath(vec![node])
    }

    pub fn nodes(&self) -> &[usize] {
        &self.0
    }

    pub fn start(&self) -> usize {
        self.0[0]
    }

    pub fn end(&self) -> usize {
        *self.0.last().expect("non-empty path")
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_cycle(&self) -> bool {
        !self.is_empty() && self.start() == self.end()
    }

    pub fn is_simple(&self) -> bool {
        let inner = if self.is_cycle() {
            &self.0[..self.0.len() - 1]
        } else {
            &self.0[..]
        };
        let set: BTreeSet<_> = inner.iter().collect();
        set.len() == inner.len()
    }

    /// `self ♮ other`; `other` must start where `self` ends.
    pub fn concat(&self, other: &OnPath) -> OnPath {
        assert_eq!(self.end(), other.start(), "paths do not meet");
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0[1..]);
        OnPath(v)
    }

    pub fn reversed(&self) -> OnPath {
        OnPath(self.0.iter().rev().copied().collect())
    }
}

/// A sequence of nodes even-related to a common root node.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ErSequence {
    pub root: usize,
    pub partners: Vec<usize>,
}

/// Edge of the graph with its labels `(p, q) = (−a_ij, −a_ji)`.
#[derive(Clone, Debug)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub p: Scalar,
    pub q: Scalar,
    pub bond: BondOrder,
}

#[derive(Clone, Debug)]
pub struct EgcmGraph {
    n: usize,
    labels: Vec<String>,
    entries: Vec<Scalar>,
    mode: Mode,
    tol: Tolerance,
    k_max: u32,
    bonds: Vec<BondOrder>,
    components: Vec<Vec<usize>>,
    component_of: Vec<usize>,
}

fn two_cos_pi_over(m: u32) -> f64 {
    2.0 * (PI / m as f64).cos()
}

impl EgcmGraph {
    /// Parses a table of entry strings and validates it.
    pub fn from_table<S: AsRef<str>>(
        rows: &[Vec<S>],
        labels: Option<Vec<String>>,
        config: BuildConfig,
    ) -> Result<Self, GraphError> {
        let exact_decimals = config.mode == Some(Mode::Exact);
        let mut table = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (j, s) in row.iter().enumerate() {
                let parsed = if exact_decimals {
                    Scalar::parse_exact(s.as_ref())
                } else {
                    Scalar::parse(s.as_ref())
                };
                out.push(parsed.map_err(|source| GraphError::Parse { i, j, source })?);
            }
            table.push(out);
        }
        Self::build(table, labels, config)
    }

    /// Validates a matrix and derives bond orders and ON-components.
    pub fn build(
        rows: Vec<Vec<Scalar>>,
        labels: Option<Vec<String>>,
        config: BuildConfig,
    ) -> Result<Self, GraphError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(GraphError::Shape);
        }
        let tol = Tolerance(config.tolerance);
        let all_exact = rows.iter().flatten().all(Scalar::is_exact);
        let mode = match config.mode {
            Some(Mode::Exact) if all_exact => Mode::Exact,
            Some(Mode::Exact) | Some(Mode::Float) => Mode::Float,
            None if all_exact => Mode::Exact,
            None => Mode::Float,
        };
        let mut entries: Vec<Scalar> = rows.into_iter().flatten().collect();
        if mode == Mode::Float {
            for e in entries.iter_mut() {
                let f = e.to_f64();
                // Snap float noise around zero so paired-zero checks are exact.
                *e = Scalar::Float(if f.abs() <= tol.eps() { 0.0 } else { f });
            }
        }

        let two = Scalar::int(2);
        for i in 0..n {
            if !tol.eq(&entries[i * n + i], &two) {
                return Err(GraphError::DiagonalNotTwo { i });
            }
            entries[i * n + i] = match mode {
                Mode::Exact => Scalar::int(2),
                Mode::Float => Scalar::float(2.0),
            };
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && tol.is_positive(&entries[i * n + j]) {
                    return Err(GraphError::PositiveOffDiagonal { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j
                    && entries[i * n + j].is_literal_zero() != entries[j * n + i].is_literal_zero()
                {
                    let (zi, zj) = if entries[i * n + j].is_literal_zero() {
                        (i, j)
                    } else {
                        (j, i)
                    };
                    return Err(GraphError::AsymmetricZeroPair { i: zi, j: zj });
                }
            }
        }

        let mut bonds = vec![BondOrder::Finite(1); n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let product = &entries[i * n + j] * &entries[j * n + i];
                let bond = recognize_bond(&product, mode, tol, config.k_max)
                    .ok_or_else(|| GraphError::UnrecognizedBond {
                        i,
                        j,
                        product: product.to_string(),
                    })?;
                if bond == BondOrder::Finite(2) && !entries[i * n + j].is_literal_zero() {
                    return Err(GraphError::UnrecognizedBond {
                        i,
                        j,
                        product: product.to_string(),
                    });
                }
                bonds[i * n + j] = bond;
                bonds[j * n + i] = bond;
            }
        }

        let labels = labels
            .filter(|l| l.len() == n)
            .unwrap_or_else(|| (1..=n).map(|k| k.to_string()).collect());
        let mut graph = EgcmGraph {
            n,
            labels,
            entries,
            mode,
            tol,
            k_max: config.k_max,
            bonds,
            components: Vec::new(),
            component_of: vec![0; n],
        };
        graph.compute_components();
        Ok(graph)
    }

    fn compute_components(&mut self) {
        let n = self.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.bond(i, j).is_odd() {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
            }
        }
        let mut components: Vec<Vec<usize>> = Vec::new();
        let mut root_to_comp = vec![usize::MAX; n];
        for x in 0..n {
            let r = find(&mut parent, x);
            if root_to_comp[r] == usize::MAX {
                root_to_comp[r] = components.len();
                components.push(Vec::new());
            }
            components[root_to_comp[r]].push(x);
            self.component_of[x] = root_to_comp[r];
        }
        self.components = components;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn tol(&self) -> Tolerance {
        self.tol
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn is_exact(&self) -> bool {
        self.mode == Mode::Exact
    }

    pub fn config(&self) -> BuildConfig {
        BuildConfig {
            mode: Some(self.mode),
            tolerance: self.tol.eps(),
            k_max: self.k_max,
        }
    }

    /// `a_ij`.
    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.n).map(<[Scalar]>::to_vec).collect()
    }

    /// A scalar in this graph's arithmetic mode.
    pub fn scalar(&self, v: i64) -> Scalar {
        match self.mode {
            Mode::Exact => Scalar::int(v),
            Mode::Float => Scalar::float(v as f64),
        }
    }

    pub fn check_node(&self, i: usize) -> Result<(), GraphError> {
        if i < self.n {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange(i))
        }
    }

    /// `m_ij` for `i ≠ j`. Non-adjacent pairs have `m_ij = 2`.
    pub fn bond(&self, i: usize, j: usize) -> BondOrder {
        debug_assert_ne!(i, j);
        self.bonds[i * self.n + j]
    }

    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        i != j && !self.entry(i, j).is_literal_zero()
    }

    pub fn odd_neighbors(&self, i: usize, j: usize) -> bool {
        i != j && self.bond(i, j).is_odd()
    }

    pub fn even_related(&self, i: usize, j: usize) -> bool {
        i != j && self.bond(i, j).is_even()
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.is_edge(i, j) {
                    out.push(Edge {
                        i,
                        j,
                        p: -self.entry(i, j),
                        q: -self.entry(j, i),
                        bond: self.bond(i, j),
                    });
                }
            }
        }
        out
    }

    /// Odd-neighborly pairs `(i, j)`, `i < j`, with `a_ij ≠ a_ji`.
    pub fn odd_asymmetries(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.odd_neighbors(i, j) && !self.tol.eq(self.entry(i, j), self.entry(j, i)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// True when every entry is an integer.
    pub fn is_gcm(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.as_exact().is_some_and(|r| r.is_integer()))
    }

    /// `K_ji = −a_ji / (2cos(π/m_ij))`, the scalar with `v_ji.α_i = K_ji α_j`.
    pub fn k_value(&self, j: usize, i: usize) -> Result<Scalar, GraphError> {
        self.check_node(i)?;
        self.check_node(j)?;
        if !self.odd_neighbors(i, j) {
            return Err(GraphError::NotOddNeighbors { i, j });
        }
        let m = self.bond(i, j).finite().expect("odd bond is finite");
        let neg = -self.entry(j, i);
        if m == 3 {
            return Ok(neg);
        }
        Ok(Scalar::float(neg.to_f64() / two_cos_pi_over(m)))
    }

    /// `Π_P = K_{i_p i_{p−1}} ⋯ K_{i_1 i_0}`.
    pub fn pi_product(&self, path: &OnPath) -> Result<Scalar, GraphError> {
        if path.0.is_empty() {
            return Err(GraphError::InvalidPath(Vec::new()));
        }
        for &x in &path.0 {
            self.check_node(x)?;
        }
        let mut acc = self.scalar(1);
        for w in path.0.windows(2) {
            let k = self
                .k_value(w[1], w[0])
                .map_err(|_| GraphError::InvalidPath(path.0.clone()))?;
            acc = &acc * &k;
        }
        Ok(acc)
    }

    pub fn on_components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of(&self, node: usize) -> usize {
        self.component_of[node]
    }

    fn odd_neighbors_of(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.odd_neighbors(i, j))
    }

    /// Every simple ON-path ending at `end`, including the length-zero path.
    /// ON-cycles through `end` are not listed; their Π-values are covered by
    /// [`EgcmGraph::non_unital_cycle`].
    pub fn simple_on_paths(&self, end: usize) -> Vec<OnPath> {
        let mut out = Vec::new();
        let mut rev = vec![end];
        let mut on_path = vec![false; self.n];
        on_path[end] = true;
        self.extend_backward(&mut rev, &mut on_path, &mut out);
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    fn extend_backward(&self, rev: &mut Vec<usize>, on_path: &mut [bool], out: &mut Vec<OnPath>) {
        out.push(OnPath(rev.iter().rev().copied().collect()));
        let head = *rev.last().expect("non-empty");
        let next: Vec<usize> = self.odd_neighbors_of(head).filter(|&u| !on_path[u]).collect();
        for u in next {
            on_path[u] = true;
            rev.push(u);
            self.extend_backward(rev, on_path, out);
            rev.pop();
            on_path[u] = false;
        }
    }

    /// Simple ON-cycles of length at least three whose smallest node is the
    /// start node, restricted to the given node set.
    pub fn simple_on_cycles(&self, nodes: &[usize]) -> Vec<OnPath> {
        let allowed: BTreeSet<usize> = nodes.iter().copied().collect();
        let mut out = Vec::new();
        for &s in nodes {
            let mut path = vec![s];
            let mut on_path = vec![false; self.n];
            on_path[s] = true;
            self.cycle_dfs(s, &allowed, &mut path, &mut on_path, &mut out);
        }
        out
    }

    fn cycle_dfs(
        &self,
        start: usize,
        allowed: &BTreeSet<usize>,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<OnPath>,
    ) {
        let head = *path.last().expect("non-empty");
        for u in self.odd_neighbors_of(head) {
            if u == start && path.len() >= 3 {
                let mut c = path.clone();
                c.push(start);
                out.push(OnPath(c));
            } else if u > start && !on_path[u] && allowed.contains(&u) {
                on_path[u] = true;
                path.push(u);
                self.cycle_dfs(start, allowed, path, on_path, out);
                path.pop();
                on_path[u] = false;
            }
        }
    }

    /// A simple ON-cycle in the component with `Π ≠ 1`, if one exists.
    pub fn non_unital_cycle(&self, component: usize) -> Option<OnPath> {
        let one = Scalar::one();
        self.simple_on_cycles(&self.components[component])
            .into_iter()
            .find(|c| {
                let pi = self.pi_product(c).expect("cycle of odd neighbors");
                !self.tol.eq(&pi, &one)
            })
    }

    pub fn is_unital_on_cyclic(&self, component: usize) -> bool {
        self.non_unital_cycle(component).is_none()
    }

    pub fn is_unital_on_cyclic_graph(&self) -> bool {
        (0..self.components.len()).all(|c| self.is_unital_on_cyclic(c))
    }

    /// Distinct Π-values over simple ON-paths ending at `end`, in order of
    /// first appearance (the length-zero path first).
    pub fn distinct_pi_values(&self, end: usize) -> Vec<Scalar> {
        let mut values: Vec<Scalar> = Vec::new();
        for p in self.simple_on_paths(end) {
            let pi = self.pi_product(&p).expect("enumerated ON-path");
            if !values.iter().any(|v| self.tol.eq(v, &pi)) {
                values.push(pi);
            }
        }
        values
    }

    /// `f` of an ON-component: the number of scalar-distinct simple ON-paths
    /// into any one of its nodes.
    pub fn f_value(&self, component: usize) -> Result<usize, GraphError> {
        if !self.is_unital_on_cyclic(component) {
            return Err(GraphError::NotUnitalOnCyclic(self.components[component].clone()));
        }
        Ok(self.distinct_pi_values(self.components[component][0]).len())
    }

    /// Ordinary connectivity of `Γ`.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for y in 0..self.n {
                if !seen[y] && self.is_edge(x, y) {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Decides which of `∃v>0: Av>0`, `Av=0` (with nullity one), `Av<0` holds
    /// by phase-one simplex with strict inequalities replaced by a margin of 1.
    pub fn classify_matrix_type(&self) -> Result<MatrixType, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::NotConnected);
        }
        let n = self.n;
        let rows = self.rows();
        // Substitute v = 1 + u with u ≥ 0.
        let row_sums: Vec<Scalar> = rows
            .iter()
            .map(|r| r.iter().fold(Scalar::zero(), |a, x| a + x))
            .collect();
        let system = |rel: Relation, margin: i64| -> Vec<Constraint> {
            rows.iter()
                .zip(&row_sums)
                .map(|(r, s)| Constraint {
                    coeffs: r.clone(),
                    rel,
                    rhs: Scalar::int(margin) - s,
                })
                .collect()
        };
        let plus = linalg::find_feasible(&system(Relation::Ge, 1), n, self.tol).is_some();
        let zero = linalg::find_feasible(&system(Relation::Eq, 0), n, self.tol).is_some()
            && linalg::rank(&rows, self.tol) + 1 == n;
        let minus = linalg::find_feasible(&system(Relation::Le, -1), n, self.tol).is_some();
        match (plus, zero, minus) {
            (true, false, false) => Ok(MatrixType::Plus),
            (false, true, false) => Ok(MatrixType::Zero),
            (false, false, true) => Ok(MatrixType::Minus),
            _ => Err(GraphError::AmbiguousMatrixType),
        }
    }

    /// The symmetric matrix of the standard geometric representation of the
    /// same Coxeter group: `−2cos(π/m_ij)`, `−2` for `m_ij = ∞`.
    pub fn standardize(&self) -> EgcmGraph {
        let n = self.n;
        let exact = (0..n).all(|i| {
            (0..n).all(|j| {
                i == j
                    || matches!(
                        self.bond(i, j),
                        BondOrder::Finite(2) | BondOrder::Finite(3) | BondOrder::Infinite
                    )
            })
        });
        let mut rows = vec![vec![Scalar::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = if i == j {
                    Scalar::int(2)
                } else {
                    match self.bond(i, j) {
                        BondOrder::Finite(2) => Scalar::zero(),
                        BondOrder::Finite(3) => Scalar::int(-1),
                        BondOrder::Infinite => Scalar::int(-2),
                        BondOrder::Finite(m) => Scalar::float(-two_cos_pi_over(m)),
                    }
                };
                if !exact {
                    *e = e.to_float();
                }
            }
        }
        let config = BuildConfig {
            mode: Some(if exact { Mode::Exact } else { Mode::Float }),
            tolerance: self.tol.eps(),
            k_max: self.k_max.max(self.max_finite_bond()),
        };
        EgcmGraph::build(rows, Some(self.labels.clone()), config)
            .expect("standardized matrix is a valid E-GCM")
    }

    fn max_finite_bond(&self) -> u32 {
        self.bonds.iter().filter_map(|b| b.finite()).max().unwrap_or(2)
    }
}

fn recognize_bond(product: &Scalar, mode: Mode, tol: Tolerance, k_max: u32) -> Option<BondOrder> {
    match (mode, product) {
        (Mode::Exact, Scalar::Exact(r)) => {
            if *r >= num_rational::BigRational::from_integer(4.into()) {
                return Some(BondOrder::Infinite);
            }
            if !r.is_integer() {
                return None;
            }
            let m = match r.to_integer().to_i64()? {
                0 => 2,
                1 => 3,
                2 => 4,
                3 => 6,
                _ => return None,
            };
            (m <= k_max.max(2)).then_some(BondOrder::Finite(m))
        }
        _ => {
            let four = Scalar::float(4.0);
            if tol.cmp(product, &four) != std::cmp::Ordering::Less {
                return Some(BondOrder::Infinite);
            }
            let mut found = None;
            for k in 2..=k_max.max(2) {
                let c = two_cos_pi_over(k).powi(2);
                if tol.eq(product, &Scalar::float(c)) {
                    if found.is_some() {
                        return None;
                    }
                    found = Some(BondOrder::Finite(k));
                }
            }
            found
        }
    }
}
