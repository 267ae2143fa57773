//! JSON graph documents.
//!
//! ```json
//! {"n": 2, "entries": [{"i": 1, "j": 2, "value": "-5"}, {"i": 2, "j": 1, "value": "-1/5"}]}
//! ```
//!
//! Indices are 1-based. Omitted off-diagonal entries are 0 and the diagonal
//! is 2; an explicit diagonal entry must equal 2.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::egcm::{BuildConfig, EgcmGraph, GraphError, Mode, DEFAULT_K_MAX};
use crate::scalar::{Scalar, ScalarParseError, DEFAULT_TOLERANCE};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub i: usize,
    pub j: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub entries: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
}

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("entry ({i}, {j}) value {value:?}: {source}")]
    ValueSyntax {
        i: usize,
        j: usize,
        value: String,
        source: ScalarParseError,
    },
    #[error("entry ({i}, {j}) is outside a {n}×{n} matrix")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("entry ({i}, {j}) appears more than once")]
    DuplicateEntry { i: usize, j: usize },
    #[error("{0}")]
    Invalid(String),
}

impl DocumentError {
    pub fn code(&self) -> &'static str {
        match self {
            DocumentError::Io { .. } => "IoError",
            DocumentError::Json { .. } => "JsonError",
            DocumentError::ValueSyntax { .. } => "ValueSyntaxError",
            DocumentError::IndexOutOfRange { .. }
            | DocumentError::DuplicateEntry { .. }
            | DocumentError::Invalid(_) => "ParseError",
        }
    }
}

impl GraphDocument {
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let doc: GraphDocument = serde_json::from_str(text).map_err(|e| DocumentError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        doc.check_syntax()?;
        Ok(doc)
    }

    pub fn from_value(value: serde_json::Value) -> Result<Self, DocumentError> {
        let doc: GraphDocument = serde_json::from_value(value).map_err(|e| DocumentError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        doc.check_syntax()?;
        Ok(doc)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DocumentError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| DocumentError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// Syntactic checks only; matrix semantics are left to [`EgcmGraph::build`].
    pub fn check_syntax(&self) -> Result<(), DocumentError> {
        if self.n == 0 {
            return Err(DocumentError::Invalid("n must be at least 1".into()));
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.n {
                return Err(DocumentError::Invalid(format!(
                    "{} labels for {} nodes",
                    labels.len(),
                    self.n
                )));
            }
        }
        if let Some(t) = self.tolerance {
            if !(t.is_finite() && t > 0.0) {
                return Err(DocumentError::Invalid(format!("tolerance {t} is not positive")));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for e in &self.entries {
            if e.i == 0 || e.j == 0 || e.i > self.n || e.j > self.n {
                return Err(DocumentError::IndexOutOfRange { i: e.i, j: e.j, n: self.n });
            }
            if !seen.insert((e.i, e.j)) {
                return Err(DocumentError::DuplicateEntry { i: e.i, j: e.j });
            }
            Scalar::parse(&e.value).map_err(|source| DocumentError::ValueSyntax {
                i: e.i,
                j: e.j,
                value: e.value.clone(),
                source,
            })?;
        }
        Ok(())
    }

    pub fn config(&self) -> BuildConfig {
        BuildConfig {
            mode: self.mode,
            tolerance: self.tolerance.unwrap_or(DEFAULT_TOLERANCE),
            k_max: self.k_max.unwrap_or(DEFAULT_K_MAX),
        }
    }

    /// The full entry table as strings, with defaults filled in.
    pub fn table(&self) -> Vec<Vec<String>> {
        let mut t: Vec<Vec<String>> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| if i == j { "2".to_string() } else { "0".to_string() })
                    .collect()
            })
            .collect();
        for e in &self.entries {
            t[e.i - 1][e.j - 1] = e.value.clone();
        }
        t
    }

    pub fn build(&self) -> Result<EgcmGraph, GraphError> {
        EgcmGraph::from_table(&self.table(), self.labels.clone(), self.config())
    }

    /// Canonical document for a graph: nonzero off-diagonal entries in
    /// row-major order. Floats are written in shortest round-trip form.
    pub fn from_graph(g: &EgcmGraph) -> Self {
        let n = g.n();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && g.is_edge(i, j) {
                    entries.push(Entry {
                        i: i + 1,
                        j: j + 1,
                        value: document_value(g.entry(i, j)),
                    });
                }
            }
        }
        let default_labels: Vec<String> = (1..=n).map(|k| k.to_string()).collect();
        let labels = (g.labels() != default_labels.as_slice()).then(|| g.labels().to_vec());
        let config = g.config();
        GraphDocument {
            n,
            labels,
            entries,
            mode: Some(g.mode()),
            tolerance: (config.tolerance != DEFAULT_TOLERANCE).then_some(config.tolerance),
            k_max: (config.k_max != DEFAULT_K_MAX).then_some(config.k_max),
        }
    }
}

fn document_value(s: &Scalar) -> String {
    match s {
        Scalar::Exact(_) => s.to_string(),
        Scalar::Float(f) => {
            let text = format!("{f:?}");
            // Keep a decimal point so the value reads back as a float.
            if text.contains(['.', 'e', 'E']) {
                text
            } else {
                format!("{text}.0")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const ASYM: &str = r#"{"n": 2, "entries": [
        {"i": 1, "j": 2, "value": "-5"}, {"i": 2, "j": 1, "value": "-1/5"}]}"#;

    #[test]
    fn parses_and_builds() {
        let doc = GraphDocument::from_json(ASYM).unwrap();
        assert_eq!(doc.n, 2);
        assert_eq!(doc.entries.len(), 2);
        let g = doc.build().unwrap();
        assert!(g.is_exact());
        assert_eq!(g.entry(1, 0).to_string(), "-1/5");
    }

    #[test]
    fn syntax_errors() {
        let bad = r#"{"n": 2, "entries": [{"i": 1, "j": 2, "value": "-1/0"}]}"#;
        assert_eq!(GraphDocument::from_json(bad).unwrap_err().code(), "ValueSyntaxError");
        assert_eq!(GraphDocument::from_json(r#"{"n": 2}"#).unwrap_err().code(), "JsonError");
        let oob = r#"{"n": 2, "entries": [{"i": 3, "j": 1, "value": "-1"}]}"#;
        assert_eq!(GraphDocument::from_json(oob).unwrap_err().code(), "ParseError");
    }

    #[test]
    fn explicit_diagonal_must_be_two() {
        let doc = r#"{"n": 1, "entries": [{"i": 1, "j": 1, "value": "3"}]}"#;
        let err = GraphDocument::from_json(doc).unwrap().build().unwrap_err();
        assert_eq!(err.code(), "DiagonalNotTwo");
    }

    #[test]
    fn decimals_select_float_mode_unless_exact_requested() {
        let doc = r#"{"n": 2, "entries": [
            {"i": 1, "j": 2, "value": "-0.5"}, {"i": 2, "j": 1, "value": "-2"}]}"#;
        let g = GraphDocument::from_json(doc).unwrap().build().unwrap();
        assert_eq!(g.mode(), Mode::Float);
        let mut d = GraphDocument::from_json(doc).unwrap();
        d.mode = Some(Mode::Exact);
        let g = d.build().unwrap();
        assert_eq!(g.mode(), Mode::Exact);
        assert_eq!(g.entry(0, 1).to_string(), "-1/2");
    }

    proptest! {
        #[test]
        fn canonical_documents_round_trip(
            p in 1i64..6, q in 1i64..6, a in -40i64..-1, b in 1i64..9, float in any::<bool>()
        ) {
            // A 3-node chain with one rational odd bond (product 1) and one
            // exact GCM bond whose product is pq.
            let rows = vec![
                vec![Scalar::int(2), Scalar::ratio(a, b), Scalar::zero()],
                vec![Scalar::ratio(b, a), Scalar::int(2), Scalar::int(-p)],
                vec![Scalar::zero(), Scalar::int(-q), Scalar::int(2)],
            ];
            let rows = if float {
                rows.into_iter().map(|r| r.into_iter().map(|x| x.to_float()).collect()).collect()
            } else {
                rows
            };
            let Ok(g) = EgcmGraph::build(rows, None, BuildConfig::default()) else {
                return Ok(());
            };
            let doc = GraphDocument::from_graph(&g);
            let text = doc.to_json_pretty();
            let back = GraphDocument::from_json(&text).unwrap();
            prop_assert_eq!(&back, &doc);
            let g2 = back.build().unwrap();
            prop_assert_eq!(g2.mode(), g.mode());
            prop_assert_eq!(g2.rows(), g.rows());
        }
    }
}
