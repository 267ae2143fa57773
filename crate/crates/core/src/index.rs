//! Deduplicating index for coefficient vectors.
//!
//! Exact vectors are hashed. Float vectors are matched within tolerance: they
//! are bucketed by a fixed linear projection in a `BTreeMap` and candidates in
//! the projected window are compared coordinate by coordinate. Rounding onto a
//! grid is avoided because a vector straddling a cell boundary would split.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;

use crate::scalar::{Scalar, Tolerance};

#[derive(Clone, Copy, Debug)]
struct Key(f64);

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == Ordering::Equal
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[derive(Clone, Debug)]
enum Inner {
    Exact(HashMap<Vec<BigRational>, usize>),
    Float {
        tol: Tolerance,
        stored: Vec<Vec<f64>>,
        buckets: BTreeMap<Key, Vec<usize>>,
    },
}

#[derive(Clone, Debug)]
pub struct VecIndex {
    inner: Inner,
    len: usize,
}

fn weight(k: usize) -> f64 {
    // Irrational spacing keeps distinct small-integer vectors apart.
    1.0 + ((k as f64 + 1.0) * 0.618_033_988_749_894_9).fract()
}

fn project(v: &[f64]) -> (f64, f64) {
    let mut p = 0.0;
    let mut spread = 0.0;
    for (k, x) in v.iter().enumerate() {
        let w = weight(k);
        p += w * x;
        spread += w * (1.0 + x.abs());
    }
    (p, spread)
}

impl VecIndex {
    pub fn new(exact: bool, tol: Tolerance) -> Self {
        let inner = if exact {
            Inner::Exact(HashMap::new())
        } else {
            Inner::Float {
                tol,
                stored: Vec::new(),
                buckets: BTreeMap::new(),
            }
        };
        VecIndex { inner, len: 0 }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn find(&self, v: &[Scalar]) -> Option<usize> {
        match &self.inner {
            Inner::Exact(map) => exact_key(v).and_then(|k| map.get(&k).copied()),
            Inner::Float {
                tol,
                stored,
                buckets,
            } => {
                let f: Vec<f64> = v.iter().map(Scalar::to_f64).collect();
                let (p, spread) = project(&f);
                let delta = 4.0 * tol.eps() * spread;
                buckets
                    .range(Key(p - delta)..=Key(p + delta))
                    .flat_map(|(_, ids)| ids.iter().copied())
                    .find(|&id| float_close(tol, &stored[id], &f))
            }
        }
    }

    /// Inserts `v` unless an equal vector is present. Returns the id of the
    /// stored vector and whether it was newly inserted. Ids are dense and
    /// assigned in insertion order.
    pub fn insert(&mut self, v: &[Scalar]) -> (usize, bool) {
        if let Some(id) = self.find(v) {
            return (id, false);
        }
        let id = self.len;
        match &mut self.inner {
            Inner::Exact(map) => {
                let key = exact_key(v).expect("exact index requires exact coordinates");
                map.insert(key, id);
            }
            Inner::Float {
                stored, buckets, ..
            } => {
                let f: Vec<f64> = v.iter().map(Scalar::to_f64).collect();
                let (p, _) = project(&f);
                buckets.entry(Key(p)).or_default().push(id);
                stored.push(f);
            }
        }
        self.len += 1;
        (id, true)
    }
}

fn float_close(tol: &Tolerance, a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| {
        let scale = 1f64.max(x.abs()).max(y.abs());
        (x - y).abs() <= tol.eps() * scale
    })
}

fn exact_key(v: &[Scalar]) -> Option<Vec<BigRational>> {
    v.iter().map(|s| s.as_exact().cloned()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_dedup() {
        let mut idx = VecIndex::new(true, Tolerance::default());
        assert_eq!(idx.insert(&[Scalar::int(1), Scalar::ratio(1, 2)]), (0, true));
        assert_eq!(idx.insert(&[Scalar::int(1), Scalar::ratio(2, 4)]), (0, false));
        assert_eq!(idx.insert(&[Scalar::int(1), Scalar::int(0)]), (1, true));
        assert_eq!(idx.len(), 2);
    }

    #[test]
    fn float_dedup_within_tolerance() {
        let mut idx = VecIndex::new(false, Tolerance(1e-9));
        let a = [Scalar::float(0.3), Scalar::float(1e6)];
        let b = [Scalar::float(0.1 + 0.2), Scalar::float(1e6 + 1e-4)];
        let c = [Scalar::float(0.3), Scalar::float(1e6 + 1.0)];
        assert!(idx.insert(&a).1);
        assert_eq!(idx.insert(&b), (0, false));
        assert!(idx.insert(&c).1);
    }
}
