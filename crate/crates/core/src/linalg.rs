//! Small dense linear algebra over [`Scalar`]: square matrices, rank, and a
//! phase-one simplex feasibility check.

use std::cmp::Ordering;

use crate::scalar::{Scalar, Tolerance};

/// Dense square matrix, row-major.
#[derive(Clone, Debug)]
pub struct Matrix {
    n: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![Scalar::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Scalar::one();
        }
        Matrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Scalar::zero();
                for k in 0..n {
                    let a = self.get(i, k);
                    if a.is_literal_zero() {
                        continue;
                    }
                    acc = acc + a * other.get(k, j);
                }
                data.push(acc);
            }
        }
        Matrix { n, data }
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Scalar::zero(), |acc, (a, x)| acc + a * x)
            })
            .collect()
    }

    pub fn approx_eq(&self, other: &Matrix, tol: Tolerance) -> bool {
        self.n == other.n && tol.vec_eq(&self.data, &other.data)
    }

    pub fn is_identity(&self, tol: Tolerance) -> bool {
        self.approx_eq(&Matrix::identity(self.n), tol)
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Rank of a (not necessarily square) matrix given as rows.
pub fn rank(rows: &[Vec<Scalar>], tol: Tolerance) -> usize {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        if rank == m.len() {
            break;
        }
        // Largest magnitude pivot; exact entries only need to be nonzero.
        let pivot = (rank..m.len())
            .filter(|&r| !tol.is_zero(&m[r][c]))
            .max_by(|&a, &b| {
                m[a][c]
                    .to_f64()
                    .abs()
                    .partial_cmp(&m[b][c].to_f64().abs())
                    .unwrap_or(Ordering::Equal)
            });
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_literal_zero() {
                let factor = &m[r][c] / &m[rank][c];
                for k in c..cols {
                    let delta = &factor * &m[rank][k];
                    m[r][k] = &m[r][k] - delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// One linear constraint `coeffs · x  rel  rhs`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Scalar>,
    pub rel: Relation,
    pub rhs: Scalar,
}

/// Phase-one simplex with Bland's rule: returns some `x ≥ 0` satisfying every
/// constraint, or `None` if the system is infeasible.
pub fn find_feasible(constraints: &[Constraint], nvars: usize, tol: Tolerance) -> Option<Vec<Scalar>> {
    let m = constraints.len();
    if m == 0 {
        return Some(vec![Scalar::zero(); nvars]);
    }
    // Normalize to rhs ≥ 0.
    let rows: Vec<Constraint> = constraints
        .iter()
        .map(|c| {
            assert_eq!(c.coeffs.len(), nvars);
            if tol.is_negative(&c.rhs) {
                Constraint {
                    coeffs: c.coeffs.iter().map(|x| -x).collect(),
                    rel: match c.rel {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    },
                    rhs: -&c.rhs,
                }
            } else {
                c.clone()
            }
        })
        .collect();

    let nslack = rows.iter().filter(|c| c.rel != Relation::Eq).count();
    let nart = rows.iter().filter(|c| c.rel != Relation::Le).count();
    let width = nvars + nslack + nart;
    let art_start = nvars + nslack;

    let mut tab: Vec<Vec<Scalar>> = Vec::with_capacity(m + 1);
    let mut basis = Vec::with_capacity(m);
    let (mut s, mut a) = (nvars, art_start);
    for c in &rows {
        let mut row = vec![Scalar::zero(); width + 1];
        row[..nvars].clone_from_slice(&c.coeffs);
        row[width] = c.rhs.clone();
        match c.rel {
            Relation::Le => {
                row[s] = Scalar::one();
                basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                row[s] = -Scalar::one();
                s += 1;
                row[a] = Scalar::one();
                basis.push(a);
                a += 1;
            }
            Relation::Eq => {
                row[a] = Scalar::one();
                basis.push(a);
                a += 1;
            }
        }
        tab.push(row);
    }
    // Objective row: minimize the sum of artificials, expressed over non-basics.
    let mut obj = vec![Scalar::zero(); width + 1];
    for (r, &b) in basis.iter().enumerate() {
        if b >= art_start {
            for j in (0..art_start).chain(std::iter::once(width)) {
                obj[j] = &obj[j] - &tab[r][j];
            }
        }
    }
    tab.push(obj);

    let max_iter = 50 * (width + m + 1);
    for _ in 0..max_iter {
        let Some(enter) = (0..width).find(|&j| tol.is_negative(&tab[m][j])) else {
            break;
        };
        let mut leave: Option<(usize, Scalar)> = None;
        for r in 0..m {
            if !tol.is_positive(&tab[r][enter]) {
                continue;
            }
            let ratio = &tab[r][width] / &tab[r][enter];
            let better = match &leave {
                None => true,
                Some((lr, best)) => match tol.cmp(&ratio, best) {
                    Ordering::Less => true,
                    Ordering::Equal => basis[r] < basis[*lr],
                    Ordering::Greater => false,
                },
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        // Phase one is bounded below by zero, so an entering column always has a
        // leaving row.
        let Some((pr, _)) = leave else { break };
        pivot(&mut tab, pr, enter);
        basis[pr] = enter;
    }

    // Objective value is −tab[m][width].
    if !tol.is_zero(&tab[m][width]) {
        return None;
    }
    let mut x = vec![Scalar::zero(); nvars];
    for (r, &b) in basis.iter().enumerate() {
        if b < nvars {
            x[b] = tab[r][width].clone();
        }
    }
    Some(x)
}

fn pivot(tab: &mut [Vec<Scalar>], pr: usize, pc: usize) {
    let p = tab[pr][pc].clone();
    for v in tab[pr].iter_mut() {
        *v = &*v / &p;
    }
    let pivot_row = tab[pr].clone();
    for (r, row) in tab.iter_mut().enumerate() {
        if r == pr || row[pc].is_literal_zero() {
            continue;
        }
        let f = row[pc].clone();
        for (v, pv) in row.iter_mut().zip(&pivot_row) {
            if !pv.is_literal_zero() {
                *v = &*v - &(&f * pv);
            }
        }
    }
}
