//! The geometric representation of `W` on `V` and the algorithms built on it.
//!
//! Word convention: a [`GroupWord`] `[i_1, …, i_p]` denotes `s_{i_1}⋯s_{i_p}`
//! and acts by applying the *last* letter first. Firing sequences in the
//! numbers game and on the command line are listed in application order,
//! which is the reverse; see [`GroupWord::from_application_order`].

use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::egcm::{BondOrder, EgcmGraph, ErSequence, Mode, OnPath};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Float-mode words longer than this raise a precision warning in [`EgcmGraph::reduce`].
pub const PRECISION_WARNING_LENGTH: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct GroupWord(pub Vec<usize>);

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }

    /// The element obtained by applying `letters[0]` first, then `letters[1]`, …
    pub fn from_application_order(letters: &[usize]) -> Self {
        GroupWord(letters.iter().rev().copied().collect())
    }

    /// Letters in the order they act.
    pub fn application_order(&self) -> Vec<usize> {
        self.0.iter().rev().copied().collect()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord(self.0.iter().rev().copied().collect())
    }

    /// The product `self · other`.
    pub fn then(&self, other: &GroupWord) -> GroupWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GroupWord(v)
    }

    /// `self · s_i`.
    pub fn times(&self, i: usize) -> GroupWord {
        let mut v = self.0.clone();
        v.push(i);
        GroupWord(v)
    }
}

impl std::fmt::Display for GroupWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("s{}", i + 1)).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A word and a simple root index with `word.α_origin` equal to some root.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Witness {
    pub word: GroupWord,
    pub origin: usize,
}

/// A vector in `V` over the simple-root basis, optionally with a witness.
#[derive(Clone, Debug)]
pub struct RootVector {
    pub coeffs: Vec<Scalar>,
    pub witness: Option<Witness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
    Zero,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("nodes {} and {} are not joined by an edge", .i + 1, .j + 1)]
    NoEdge { i: usize, j: usize },
    #[error("bond between {} and {} has infinite order", .i + 1, .j + 1)]
    InfiniteBond { i: usize, j: usize },
    #[error("node {} out of range", .0 + 1)]
    NodeOutOfRange(usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl GeomError {
    pub fn code(&self) -> &'static str {
        match self {
            GeomError::NoEdge { .. } => "NoEdge",
            GeomError::InfiniteBond { .. } => "InfiniteBond",
            GeomError::NodeOutOfRange(_) => "NodeOutOfRange",
            GeomError::Internal(_) => "InternalError",
        }
    }
}

/// Output of [`EgcmGraph::reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub length: usize,
    pub word: GroupWord,
    pub precision_warning: bool,
}

/// Result of [`EgcmGraph::factor_scalar_action`].
#[derive(Clone, Debug)]
pub enum ScalarAction {
    NotMultiple,
    Multiple(Factorization),
}

/// `w = w_{S_p} v_{i_p i_{p−1}} ⋯ v_{i_1 i_0} w_{S_0}` (times `s_i` when
/// `trailing_reflection`), with `w.α_i = k α_x`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub i: usize,
    pub x: usize,
    pub k: Scalar,
    pub path: OnPath,
    /// `S_0, …, S_p`; `S_k` is rooted at the `k`-th node of `path`.
    pub er_sequences: Vec<ErSequence>,
    pub trailing_reflection: bool,
}

impl Factorization {
    pub fn is_negative(&self) -> bool {
        self.trailing_reflection
    }

    /// Re-expands the factorization into generators.
    pub fn expand(&self, g: &EgcmGraph) -> Result<GroupWord, GeomError> {
        let nodes = self.path.nodes();
        let mut out = Vec::new();
        for k in (0..nodes.len()).rev() {
            let s = &self.er_sequences[k];
            for &partner in s.partners.iter().rev() {
                out.extend(g.link_word(partner, s.root)?.0);
            }
            if k > 0 {
                out.extend(g.link_word(nodes[k], nodes[k - 1])?.0);
            }
        }
        if self.trailing_reflection {
            out.push(self.i);
        }
        Ok(GroupWord(out))
    }

    /// `Σ c(j,l)(m_jl − 1)` over path steps and ER pairs, plus one for a
    /// trailing `s_i`.
    pub fn length_sum(&self, g: &EgcmGraph) -> usize {
        let m = |a: usize, b: usize| g.bond(a, b).finite().expect("finite bond") as usize - 1;
        let path: usize = self.path.nodes().windows(2).map(|w| m(w[0], w[1])).sum();
        let er: usize = self
            .er_sequences
            .iter()
            .flat_map(|s| s.partners.iter().map(move |&p| m(s.root, p)))
            .sum();
        path + er + usize::from(self.trailing_reflection)
    }
}

impl EgcmGraph {
    /// `α_i` in this graph's arithmetic mode.
    pub fn simple_root(&self, i: usize) -> Vec<Scalar> {
        (0..self.n())
            .map(|k| self.scalar(i64::from(k == i)))
            .collect()
    }

    pub fn zero_vector(&self) -> Vec<Scalar> {
        vec![self.scalar(0); self.n()]
    }

    /// `S_i(v) = v − 2B(α_i, v)α_i`: only coordinate `i` changes.
    pub fn reflect(&self, i: usize, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = v.to_vec();
        self.reflect_in_place(i, &mut out);
        out
    }

    pub fn reflect_in_place(&self, i: usize, v: &mut [Scalar]) {
        let mut dot = Scalar::zero();
        for (j, c) in v.iter().enumerate() {
            if !c.is_literal_zero() && !self.entry(i, j).is_literal_zero() {
                dot = dot + self.entry(i, j) * c;
            }
        }
        v[i] = &v[i] - &dot;
    }

    /// `w.v`, applying the last letter first.
    pub fn apply_word(&self, w: &GroupWord, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = v.to_vec();
        for &i in w.0.iter().rev() {
            self.reflect_in_place(i, &mut out);
        }
        out
    }

    pub fn word_root(&self, w: &GroupWord, i: usize) -> Vec<Scalar> {
        self.apply_word(w, &self.simple_root(i))
    }

    pub fn sign(&self, v: &[Scalar]) -> Sign {
        let tol = self.tol();
        let (mut pos, mut neg) = (false, false);
        for c in v {
            match tol.sign(c) {
                Ordering::Greater => pos = true,
                Ordering::Less => neg = true,
                Ordering::Equal => {}
            }
        }
        match (pos, neg) {
            (true, false) => Sign::Positive,
            (false, true) => Sign::Negative,
            (false, false) => Sign::Zero,
            (true, true) => Sign::Mixed,
        }
    }

    /// `Some((x, K))` when `v = K α_x` with `K ≠ 0`.
    pub fn simple_multiple(&self, v: &[Scalar]) -> Option<(usize, Scalar)> {
        let tol = self.tol();
        let mut found = None;
        for (k, c) in v.iter().enumerate() {
            if !tol.is_zero(c) {
                if found.is_some() {
                    return None;
                }
                found = Some((k, c.clone()));
            }
        }
        found
    }

    fn is_positive_multiple_of(&self, v: &[Scalar], r: usize) -> bool {
        matches!(self.simple_multiple(v), Some((x, k)) if x == r && self.tol().is_positive(&k))
    }

    /// The matrix of `σ(w)`; column `j` holds `w.α_j`.
    pub fn element_matrix(&self, w: &GroupWord) -> Matrix {
        let n = self.n();
        let cols: Vec<Vec<Scalar>> = (0..n).map(|j| self.word_root(w, j)).collect();
        let rows = (0..n)
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        Matrix::from_rows(rows)
    }

    pub fn same_element(&self, a: &GroupWord, b: &GroupWord) -> bool {
        self.element_matrix(a)
            .approx_eq(&self.element_matrix(b), self.tol())
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<(), GeomError> {
        for x in [i, j] {
            if x >= self.n() {
                return Err(GeomError::NodeOutOfRange(x));
            }
        }
        if i == j {
            return Err(GeomError::NoEdge { i, j });
        }
        Ok(())
    }

    /// `(s_i s_j)^k.α_i`, or `s_j (s_i s_j)^k.α_i` when `extra_sj` is set.
    ///
    /// With `t = pq − 2` and `U_k` the Chebyshev sequence `U_0 = 0`, `U_1 = 1`,
    /// `U_{k+1} = t U_k − U_{k−1}`, the result is `(U_k(pq−1) − U_{k−1}) α_i +
    /// q U_k α_j`. Exact mode evaluates `U_k` by powering the companion matrix;
    /// float mode uses `sin(2kθ)/sin(2θ)` (`pq < 4`), `k` (`pq = 4`) or
    /// `(λ^k − λ^{−k})/(λ − λ^{−1})` (`pq > 4`).
    pub fn dihedral_power(
        &self,
        i: usize,
        j: usize,
        k: u32,
        extra_sj: bool,
    ) -> Result<Vec<Scalar>, GeomError> {
        self.check_pair(i, j)?;
        if !self.is_edge(i, j) {
            return Err(GeomError::NoEdge { i, j });
        }
        let p = -self.entry(i, j);
        let q = -self.entry(j, i);
        let pq = &p * &q;
        let (uk, ukm1) = match self.mode() {
            Mode::Exact => chebyshev_exact(&(&pq - Scalar::int(2)), k),
            Mode::Float => {
                let (a, b) = chebyshev_float(pq.to_f64(), self.bond(i, j), k, self.tol().eps());
                (Scalar::float(a), Scalar::float(b))
            }
        };
        let mut ci = &uk * &(&pq - Scalar::int(1)) - &ukm1;
        let mut cj = &q * &uk;
        if extra_sj {
            cj = &q * &ci - &cj;
        }
        if self.mode() == Mode::Float {
            ci = ci.to_float();
            cj = cj.to_float();
        }
        let mut v = self.zero_vector();
        v[i] = ci;
        v[j] = cj;
        Ok(v)
    }

    /// The element `v_ji`: `(s_i s_j)^{(m−1)/2}` for odd `m = m_ij`,
    /// `s_j (s_i s_j)^{(m−2)/2}` for even `m`. Its length is `m − 1`.
    pub fn link_word(&self, j: usize, i: usize) -> Result<GroupWord, GeomError> {
        self.check_pair(i, j)?;
        let m = match self.bond(i, j) {
            BondOrder::Finite(m) => m as usize,
            BondOrder::Infinite => return Err(GeomError::InfiniteBond { i, j }),
        };
        // Both forms are the alternating word of length m − 1 ending in j.
        let letters = (0..m - 1)
            .map(|t| if (m - 1 - t) % 2 == 1 { j } else { i })
            .collect();
        Ok(GroupWord(letters))
    }

    /// Length of `w` and a reduced word for the same element, built by
    /// appending letters one at a time: `ℓ(u s_i) = ℓ(u) + 1` iff `u.α_i > 0`,
    /// and otherwise the letter whose deletion realizes `u s_i` is located
    /// by tracking `α_i` back through `u`.
    pub fn reduce(&self, w: &GroupWord) -> Reduction {
        let mut u: Vec<usize> = Vec::with_capacity(w.len());
        for &i in &w.0 {
            let word = GroupWord(u);
            let beta = self.word_root(&word, i);
            u = word.0;
            if self.sign(&beta) == Sign::Positive {
                u.push(i);
                continue;
            }
            let mut beta = self.simple_root(i);
            let mut deleted = false;
            for r in (0..u.len()).rev() {
                if self.is_positive_multiple_of(&beta, u[r]) {
                    u.remove(r);
                    deleted = true;
                    break;
                }
                self.reflect_in_place(u[r], &mut beta);
            }
            assert!(deleted, "descent without a deletion point in {w:?}");
        }
        Reduction {
            length: u.len(),
            word: GroupWord(u),
            precision_warning: self.mode() == Mode::Float && w.len() > PRECISION_WARNING_LENGTH,
        }
    }

    pub fn length(&self, w: &GroupWord) -> usize {
        self.reduce(w).length
    }

    pub fn is_reduced(&self, w: &GroupWord) -> bool {
        self.length(w) == w.len()
    }

    /// Decides whether `w.α_i` is a multiple of a simple root and, if so,
    /// factors `w` through link words along an ON-path.
    pub fn factor_scalar_action(&self, w: &GroupWord, i: usize) -> Result<ScalarAction, GeomError> {
        if i >= self.n() {
            return Err(GeomError::NodeOutOfRange(i));
        }
        if let Some(&bad) = w.0.iter().find(|&&x| x >= self.n()) {
            return Err(GeomError::NodeOutOfRange(bad));
        }
        let w = self.reduce(w).word;
        let image = self.word_root(&w, i);
        let Some((x, k)) = self.simple_multiple(&image) else {
            return Ok(ScalarAction::NotMultiple);
        };
        let negative = self.tol().is_negative(&k);
        let base = if negative {
            self.reduce(&w.times(i)).word
        } else {
            w
        };
        let (path, er_sequences) = self.factor_positive(&base, i)?;
        if path.end() != x {
            return Err(GeomError::Internal(format!(
                "factorization ends at {} but w.α_i is a multiple of α_{}",
                path.end(),
                x
            )));
        }
        Ok(ScalarAction::Multiple(Factorization {
            i,
            x,
            k,
            path,
            er_sequences,
            trailing_reflection: negative,
        }))
    }

    /// Induction on `ℓ(w)` for reduced `w` with `w.α_i` a positive multiple of
    /// a simple root.
    fn factor_positive(
        &self,
        w: &GroupWord,
        i: usize,
    ) -> Result<(OnPath, Vec<ErSequence>), GeomError> {
        if w.is_empty() {
            return Ok((
                OnPath::trivial(i),
                vec![ErSequence {
                    root: i,
                    partners: Vec::new(),
                }],
            ));
        }
        let j = *w.0.last().expect("non-empty");
        if j == i {
            return Err(GeomError::Internal(format!("{i} is a right descent of {w:?}")));
        }
        // w = v^J v_J with v_J ∈ W_{i,j}: strip right descents in {i, j}.
        let mut rest = w.clone();
        let mut v_j: Vec<usize> = Vec::new();
        loop {
            let descent = [i, j]
                .into_iter()
                .find(|&s| self.sign(&self.word_root(&rest, s)) == Sign::Negative);
            let Some(s) = descent else { break };
            rest = self.reduce(&rest.times(s)).word;
            v_j.insert(0, s);
        }
        let m = match self.bond(i, j) {
            BondOrder::Finite(m) => m,
            BondOrder::Infinite => return Err(GeomError::InfiniteBond { i, j }),
        };
        if GroupWord(v_j.clone()) != self.link_word(j, i)? {
            return Err(GeomError::Internal(format!(
                "parabolic part {v_j:?} of {w:?} is not v_{j}{i}"
            )));
        }
        if m % 2 == 0 {
            let (path, mut seqs) = self.factor_positive(&rest, i)?;
            seqs[0].partners.insert(0, j);
            Ok((path, seqs))
        } else {
            let (path, seqs) = self.factor_positive(&rest, j)?;
            let path = OnPath(vec![i, j]).concat(&path);
            let mut all = vec![ErSequence {
                root: i,
                partners: Vec::new(),
            }];
            all.extend(seqs);
            Ok((path, all))
        }
    }
}

/// `(U_k, U_{k−1})` for `U_0 = 0, U_1 = 1, U_{k+1} = t U_k − U_{k−1}`.
fn chebyshev_exact(t: &Scalar, k: u32) -> (Scalar, Scalar) {
    // C^k = [[U_{k+1}, −U_k], [U_k, −U_{k−1}]] for C = [[t, −1], [1, 0]].
    type M2 = [[Scalar; 2]; 2];
    fn mul(a: &M2, b: &M2) -> M2 {
        let e = |r: usize, c: usize| &a[r][0] * &b[0][c] + &a[r][1] * &b[1][c];
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }
    let mut result: M2 = [[Scalar::one(), Scalar::zero()], [Scalar::zero(), Scalar::one()]];
    let mut base: M2 = [[t.clone(), Scalar::int(-1)], [Scalar::one(), Scalar::zero()]];
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    let [_, [uk, neg_ukm1]] = result;
    (uk, -neg_ukm1)
}

fn chebyshev_float(pq: f64, bond: BondOrder, k: u32, eps: f64) -> (f64, f64) {
    let k = k as f64;
    if (pq - 4.0).abs() <= eps * 4.0 {
        return (k, k - 1.0);
    }
    match bond {
        BondOrder::Finite(m) => {
            let theta = PI / m as f64;
            let s = (2.0 * theta).sin();
            ((2.0 * k * theta).sin() / s, (2.0 * (k - 1.0) * theta).sin() / s)
        }
        BondOrder::Infinite => {
            let lambda = 0.5 * (pq - 2.0 + (pq * (pq - 4.0)).sqrt());
            let d = lambda - lambda.recip();
            let u = |e: f64| (lambda.powf(e) - lambda.powf(-e)) / d;
            (u(k), u(k - 1.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::egcm::BuildConfig;

    fn graph(rows: &[&[&str]]) -> EgcmGraph {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        EgcmGraph::from_table(&rows, None, BuildConfig::default()).unwrap()
    }

    fn strs(v: &[Scalar]) -> Vec<String> {
        v.iter().map(Scalar::to_string).collect()
    }

    fn a2() -> EgcmGraph {
        graph(&[&["2", "-1"], &["-1", "2"]])
    }

    fn asym5() -> EgcmGraph {
        graph(&[&["2", "-5"], &["-1/5", "2"]])
    }

    #[test]
    fn reflections() {
        let g = a2();
        assert_eq!(strs(&g.reflect(0, &g.simple_root(0))), ["-1", "0"]);
        assert_eq!(strs(&g.reflect(0, &g.simple_root(1))), ["1", "1"]);
    }

    #[test]
    fn word_application_order() {
        let g = a2();
        let w = GroupWord(vec![0, 1]);
        assert_eq!(strs(&g.word_root(&w, 1)), ["-1", "-1"]);
        assert_eq!(strs(&asym5().word_root(&w, 0)), ["0", "1/5"]);
        assert_eq!(
            GroupWord::from_application_order(&[0, 1]).application_order(),
            vec![0, 1]
        );
        assert_eq!(GroupWord::from_application_order(&[0, 1]), GroupWord(vec![1, 0]));
    }

    #[test]
    fn link_words() {
        let g = graph(&[&["2", "-1", "0"], &["-2", "2", "-1"], &["0", "-1", "2"]]);
        assert_eq!(g.link_word(2, 0).unwrap(), GroupWord(vec![2]));
        assert_eq!(g.link_word(1, 0).unwrap(), GroupWord(vec![1, 0, 1]));
        assert_eq!(g.link_word(2, 1).unwrap(), GroupWord(vec![1, 2]));
        let g = asym5();
        let v = g.link_word(1, 0).unwrap();
        assert_eq!(v, GroupWord(vec![0, 1]));
        assert_eq!(strs(&g.word_root(&v, 0)), ["0", "1/5"]);
        let inf = graph(&[&["2", "-1"], &["-4", "2"]]);
        assert_eq!(inf.link_word(1, 0), Err(GeomError::InfiniteBond { i: 0, j: 1 }));
    }

    #[test]
    fn dihedral_pq4() {
        let g = graph(&[&["2", "-1"], &["-4", "2"]]);
        assert_eq!(strs(&g.dihedral_power(0, 1, 2, false).unwrap()), ["5", "8"]);
        for k in 0..30 {
            let mut w = Vec::new();
            for _ in 0..k {
                w.extend([0, 1]);
            }
            let direct = g.word_root(&GroupWord(w), 0);
            assert_eq!(strs(&g.dihedral_power(0, 1, k, false).unwrap()), strs(&direct));
        }
    }

    #[test]
    fn dihedral_terminal_cases() {
        let g = asym5();
        assert_eq!(strs(&g.dihedral_power(0, 1, 1, false).unwrap()), ["0", "1/5"]);
        let b2 = graph(&[&["2", "-1"], &["-2", "2"]]);
        assert_eq!(strs(&b2.dihedral_power(0, 1, 1, true).unwrap()), ["1", "0"]);
        assert_eq!(strs(&b2.dihedral_power(1, 0, 1, true).unwrap()), ["0", "1"]);
    }

    #[test]
    fn dihedral_float_closed_forms_match_iteration() {
        let s5 = 5f64.sqrt();
        let cases = [
            (-(1.0 + s5) / 4.0, -(1.0 + s5)),
            (-3.0, -3.0),
            (-1.0, -4.0),
            (-0.5, -2.0),
        ];
        for (a, b) in cases {
            let rows = vec![
                vec![Scalar::float(2.0), Scalar::float(a)],
                vec![Scalar::float(b), Scalar::float(2.0)],
            ];
            let g = EgcmGraph::build(rows, None, BuildConfig::default()).unwrap();
            for k in 0..=12u32 {
                for extra in [false, true] {
                    let mut w = if extra { vec![1] } else { vec![] };
                    for _ in 0..k {
                        w.extend([0, 1]);
                    }
                    let direct = g.word_root(&GroupWord(w), 0);
                    let closed = g.dihedral_power(0, 1, k, extra).unwrap();
                    assert!(g.tol().vec_eq(&direct, &closed), "{a} {b} k={k} extra={extra}");
                }
            }
        }
    }

    #[test]
    fn reduction() {
        let g = a2();
        let r = g.reduce(&GroupWord(vec![0, 0]));
        assert_eq!((r.length, r.word), (0, GroupWord(vec![])));
        let r = g.reduce(&GroupWord(vec![0, 1, 0, 1]));
        assert_eq!(r.length, 2);
        assert!(g.same_element(&r.word, &GroupWord(vec![1, 0])));
        let h = asym5();
        let a = GroupWord(vec![1, 0, 1]);
        let b = GroupWord(vec![0, 1, 0]);
        assert_eq!(h.length(&a), 3);
        assert_eq!(h.length(&b), 3);
        assert!(h.same_element(&a, &b));
    }

    #[test]
    fn factor_single_even_letter() {
        let g = graph(&[&["2", "0"], &["0", "2"]]);
        let ScalarAction::Multiple(f) = g.factor_scalar_action(&GroupWord(vec![1]), 0).unwrap() else {
            panic!("expected a multiple");
        };
        assert_eq!(f.path, OnPath(vec![0]));
        assert_eq!(f.er_sequences[0].partners, vec![1]);
        assert_eq!((f.x, f.k.to_string()), (0, "1".to_string()));
    }

    #[test]
    fn factor_link_word() {
        let g = asym5();
        let ScalarAction::Multiple(f) = g.factor_scalar_action(&GroupWord(vec![0, 1]), 0).unwrap() else {
            panic!("expected a multiple");
        };
        assert_eq!(f.path, OnPath(vec![0, 1]));
        assert!(f.er_sequences.iter().all(|s| s.partners.is_empty()));
        assert_eq!(f.k.to_string(), "1/5");
        assert_eq!(f.length_sum(&g), 2);
        assert_eq!(f.expand(&g).unwrap(), GroupWord(vec![0, 1]));
    }

    #[test]
    fn factor_not_multiple_and_negative() {
        let g = a2();
        assert!(matches!(
            g.factor_scalar_action(&GroupWord(vec![0]), 1).unwrap(),
            ScalarAction::NotMultiple
        ));
        let ScalarAction::Multiple(f) = g.factor_scalar_action(&GroupWord(vec![0]), 0).unwrap() else {
            panic!("expected a multiple");
        };
        assert!(f.is_negative());
        assert_eq!(f.k.to_string(), "-1");
        assert_eq!(f.expand(&g).unwrap(), GroupWord(vec![0]));
    }
}
