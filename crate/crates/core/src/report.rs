//! Serializable summaries shared by the command line and the HTTP service.
//! Node indices in reports are 1-based.

use serde::Serialize;
use serde_json::Value;

use crate::egcm::{BondOrder, EgcmGraph, MatrixType, Mode};
use crate::roots::SMultSet;
use crate::scalar::Scalar;

#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub n: usize,
    pub labels: Vec<String>,
    pub mode: Mode,
    #[serde(rename = "type")]
    pub matrix_type: Option<MatrixType>,
    /// Error code when the matrix type is undefined (for example `NotConnected`).
    pub type_error: Option<String>,
    /// Bond orders; `null` on the diagonal and `"inf"` for infinite bonds.
    pub m: Vec<Vec<Value>>,
    pub components: Vec<Vec<usize>>,
    pub unital: Vec<bool>,
    pub f_values: Vec<Option<usize>>,
    pub odd_asymmetries: Vec<[usize; 2]>,
    pub s_mult: Vec<SMultReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SMultReport {
    pub node: usize,
    pub finite: bool,
    #[serde(rename = "K_values")]
    pub k_values: Vec<String>,
    /// A simple ON-cycle whose product is not 1, when the set is infinite.
    pub certificate: Option<Vec<usize>>,
}

impl From<&SMultSet> for SMultReport {
    fn from(s: &SMultSet) -> Self {
        SMultReport {
            node: s.node + 1,
            finite: s.finite,
            k_values: strings(&s.values),
            certificate: s.certificate.as_ref().map(|c| one_based(&c.0)),
        }
    }
}

pub fn bond_json(b: BondOrder) -> Value {
    match b {
        BondOrder::Finite(m) => Value::from(m),
        BondOrder::Infinite => Value::from("inf"),
    }
}

pub fn strings(values: &[Scalar]) -> Vec<String> {
    values.iter().map(Scalar::to_string).collect()
}

pub fn one_based(nodes: &[usize]) -> Vec<usize> {
    nodes.iter().map(|&k| k + 1).collect()
}

impl Analysis {
    pub fn of(g: &EgcmGraph) -> Analysis {
        let n = g.n();
        let (matrix_type, type_error) = match g.classify_matrix_type() {
            Ok(t) => (Some(t), None),
            Err(e) => (None, Some(e.code().to_string())),
        };
        let m = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Value::Null } else { bond_json(g.bond(i, j)) })
                    .collect()
            })
            .collect();
        let comps = g.on_components();
        let s_mult = (0..n)
            .map(|x| SMultReport::from(&g.s_mult(x).expect("node in range")))
            .collect();
        Analysis {
            n,
            labels: g.labels().to_vec(),
            mode: g.mode(),
            matrix_type,
            type_error,
            m,
            components: comps.iter().map(|c| one_based(c)).collect(),
            unital: (0..comps.len()).map(|c| g.is_unital_on_cyclic(c)).collect(),
            f_values: (0..comps.len()).map(|c| g.f_value(c).ok()).collect(),
            odd_asymmetries: g
                .odd_asymmetries()
                .into_iter()
                .map(|(i, j)| [i + 1, j + 1])
                .collect(),
            s_mult,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::egcm::BuildConfig;

    #[test]
    fn a2_analysis() {
        let g = EgcmGraph::from_table(&[vec!["2", "-1"], vec!["-1", "2"]], None, BuildConfig::default()).unwrap();
        let v = serde_json::to_value(Analysis::of(&g)).unwrap();
        assert_eq!(v["type"], "plus");
        assert_eq!(v["m"], serde_json::json!([[null, 3], [3, null]]));
        assert_eq!(v["odd_asymmetries"], serde_json::json!([]));
        assert_eq!(v["f_values"], serde_json::json!([1]));
        assert_eq!(v["s_mult"][1]["K_values"], serde_json::json!(["1"]));
    }

    #[test]
    fn disconnected_graph_has_no_type() {
        let g = EgcmGraph::from_table(&[vec!["2", "0"], vec!["0", "2"]], None, BuildConfig::default()).unwrap();
        let a = Analysis::of(&g);
        assert_eq!(a.matrix_type, None);
        assert_eq!(a.type_error.as_deref(), Some("NotConnected"));
        assert_eq!(a.components, vec![vec![1], vec![2]]);
    }
}
