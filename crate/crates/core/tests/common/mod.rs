//! Fixtures, random graph generators and brute-force oracles shared by the
//! integration tests.

#![allow(dead_code, clippy::needless_range_loop)]

use coxroot_core::document::GraphDocument;
use coxroot_core::geom::GroupWord;
use coxroot_core::index::VecIndex;
use coxroot_core::{BuildConfig, EgcmGraph, Scalar};
use rand::Rng;

pub fn fixture(name: &str) -> EgcmGraph {
    let path = format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    GraphDocument::load(&path)
        .unwrap_or_else(|e| panic!("{path}: {e}"))
        .build()
        .unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn from_rows(rows: Vec<Vec<Scalar>>) -> EgcmGraph {
    EgcmGraph::build(rows, None, BuildConfig::default()).expect("valid E-GCM")
}

fn identity_rows(n: usize) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|i| (0..n).map(|j| Scalar::int(if i == j { 2 } else { 0 })).collect())
        .collect()
}

/// An exact unital ON-cyclic graph on `n` nodes: a random tree, possibly
/// closed into one cycle, with odd bonds `a_ij = −c_i/c_j` for random node
/// potentials `c` (so every ON-cycle has `Π = 1`) and occasional `m = 4`
/// bonds.
pub fn random_unital<R: Rng>(rng: &mut R, n: usize) -> EgcmGraph {
    let potentials: Vec<(i64, i64)> = (0..n)
        .map(|_| (rng.gen_range(1..=7), rng.gen_range(1..=5)))
        .collect();
    let mut rows = identity_rows(n);
    let set_bond = |rows: &mut Vec<Vec<Scalar>>, i: usize, j: usize, even: bool, rng: &mut R| {
        if even {
            let (a, b) = [(1, 2), (2, 1)][rng.gen_range(0..2)];
            rows[i][j] = Scalar::int(-a);
            rows[j][i] = Scalar::int(-b);
        } else {
            let (pi, qi) = potentials[i];
            let (pj, qj) = potentials[j];
            // c_i / c_j with c_k = p_k / q_k
            rows[i][j] = -Scalar::ratio(pi * qj, qi * pj);
            rows[j][i] = -Scalar::ratio(pj * qi, qj * pi);
        }
    };
    for v in 1..n {
        let u = rng.gen_range(0..v);
        let even = rng.gen_bool(0.2);
        set_bond(&mut rows, u, v, even, rng);
    }
    if n >= 3 && rng.gen_bool(0.5) {
        let candidates: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|&(i, j)| rows[i][j].is_literal_zero())
            .collect();
        if let Some(&(i, j)) = candidates.get(rng.gen_range(0..candidates.len().max(1))) {
            set_bond(&mut rows, i, j, false, rng);
        }
    }
    from_rows(rows)
}

/// An odd 3- or 4-cycle (all bonds of order 3) whose cycle product is not 1.
pub fn random_nonunital<R: Rng>(rng: &mut R) -> EgcmGraph {
    let n = rng.gen_range(3..=4);
    let mut rows = identity_rows(n);
    let mut product = Scalar::one();
    for k in 0..n {
        let (i, j) = (k, (k + 1) % n);
        let r = Scalar::ratio(rng.gen_range(1..=4), rng.gen_range(1..=4));
        product = &product * &r;
        rows[i][j] = -&r;
        rows[j][i] = -r.recip();
    }
    if product.to_string() == "1" {
        rows[0][1] = &rows[0][1] * &Scalar::int(2);
        rows[1][0] = &rows[1][0] / &Scalar::int(2);
    }
    from_rows(rows)
}

/// A random generalized Cartan matrix with all bonds in `{2, 3, 4, 6, ∞}`.
pub fn random_gcm<R: Rng>(rng: &mut R, n: usize) -> EgcmGraph {
    let mut rows = identity_rows(n);
    let choices = [(0, 0), (1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2), (1, 4), (3, 2)];
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = choices[rng.gen_range(0..choices.len())];
            rows[i][j] = Scalar::int(-a);
            rows[j][i] = Scalar::int(-b);
        }
    }
    from_rows(rows)
}

/// Group elements by Cayley-graph breadth-first search, deduplicated by
/// their matrices. The BFS depth of each element is its length.
pub fn cayley_ball(g: &EgcmGraph, max_len: usize) -> Vec<GroupWord> {
    let key = |w: &GroupWord| -> Vec<Scalar> { g.element_matrix(w).rows().concat() };
    let mut seen = VecIndex::new(g.is_exact(), g.tol());
    let mut out = vec![GroupWord::identity()];
    seen.insert(&key(&out[0]));
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for k in 0..g.n() {
                let v = w.times(k);
                if seen.insert(&key(&v)).1 {
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn random_word<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> GroupWord {
    let len = rng.gen_range(0..=max_len);
    GroupWord((0..len).map(|_| rng.gen_range(0..n)).collect())
}

pub fn random_position<R: Rng>(rng: &mut R, g: &EgcmGraph) -> Vec<Scalar> {
    (0..g.n())
        .map(|_| {
            let v = Scalar::ratio(rng.gen_range(-12..=12), rng.gen_range(1..=4));
            if g.is_exact() {
                v
            } else {
                v.to_float()
            }
        })
        .collect()
}
