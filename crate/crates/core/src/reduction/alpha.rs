use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Test-fixture classification of an input. The transducers never read it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaLabel {
    /// `lim inf α(n) = ∞`.
    InC3,
    /// `α(n) = K` infinitely often.
    NotC3 { k: u64 },
}

#[derive(Clone)]
enum AlphaKind {
    Const(u64),
    Identity,
    /// A finite prefix; reading past its end is an error.
    List(Arc<Vec<u64>>),
    Fn(Arc<dyn Fn(usize) -> u64 + Send + Sync>),
}

/// A point `α ∈ ℕ^ℕ` of the Baire space, read lazily at `n ≥ 1`.
#[derive(Clone)]
pub struct BaireInput {
    kind: AlphaKind,
    label: Option<AlphaLabel>,
}

impl BaireInput {
    /// `α ≡ k`, labelled `NotC3`.
    pub fn constant(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::OutOfDomain("α takes positive values".into()));
        }
        Ok(BaireInput {
            kind: AlphaKind::Const(k),
            label: Some(AlphaLabel::NotC3 { k }),
        })
    }

    /// `α(n) = n`, labelled `InC3`.
    pub fn identity() -> Self {
        BaireInput {
            kind: AlphaKind::Identity,
            label: Some(AlphaLabel::InC3),
        }
    }

    /// `α(1), …, α(len)`; unlabelled.
    pub fn from_values(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::OutOfDomain("α list is empty".into()));
        }
        if let Some(i) = values.iter().position(|&v| v == 0) {
            return Err(Error::OutOfDomain(format!("α({}) = 0; α takes positive values", i + 1)));
        }
        Ok(BaireInput {
            kind: AlphaKind::List(Arc::new(values)),
            label: None,
        })
    }

    /// `α(n) = f(n)`; values of 0 are rejected when read.
    pub fn from_fn(f: impl Fn(usize) -> u64 + Send + Sync + 'static) -> Self {
        BaireInput {
            kind: AlphaKind::Fn(Arc::new(f)),
            label: None,
        }
    }

    pub fn with_label(mut self, label: AlphaLabel) -> Self {
        self.label = Some(label);
        self
    }

    pub fn label(&self) -> Option<AlphaLabel> {
        self.label
    }

    /// `α(n)`, `n ≥ 1`.
    pub fn value(&self, n: usize) -> Result<u64> {
        if n == 0 {
            return Err(Error::OutOfDomain("α is indexed from 1".into()));
        }
        let v = match &self.kind {
            AlphaKind::Const(k) => *k,
            AlphaKind::Identity => n as u64,
            AlphaKind::List(v) => *v.get(n - 1).ok_or(Error::StreamExhausted {
                available: v.len(),
                requested: n,
            })?,
            AlphaKind::Fn(f) => f(n),
        };
        if v == 0 {
            return Err(Error::OutOfDomain(format!("α({n}) = 0; α takes positive values")));
        }
        Ok(v)
    }

    /// `α′(n) = min(n, α(n))`.
    pub fn alpha_prime(&self, n: usize) -> Result<u64> {
        Ok(self.value(n)?.min(n as u64))
    }

    /// Parses `const:K`, `identity`, `file:<path>` (whitespace- or
    /// comma-separated values) or an explicit list `3,1,4,…`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec == "identity" {
            return Ok(BaireInput::identity());
        }
        if let Some(k) = spec.strip_prefix("const:").or_else(|| spec.strip_prefix("const ")) {
            let k = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad constant in α spec {spec:?}")))?;
            return BaireInput::constant(k);
        }
        if let Some(path) = spec.strip_prefix("file:").or_else(|| spec.strip_prefix("file ")) {
            let text = std::fs::read_to_string(path.trim()).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            return BaireInput::from_values(parse_list(&text)?);
        }
        let list = spec.strip_prefix("list:").unwrap_or(spec);
        BaireInput::from_values(parse_list(list)?)
    }
}

fn parse_list(text: &str) -> Result<Vec<u64>> {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad α entry {t:?}"))))
        .collect()
}

impl fmt::Debug for BaireInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BaireInput({self})")
    }
}

impl fmt::Display for BaireInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            AlphaKind::Const(k) => write!(f, "const:{k}"),
            AlphaKind::Identity => write!(f, "identity"),
            AlphaKind::List(v) => {
                let shown: Vec<String> = v.iter().take(8).map(|x| x.to_string()).collect();
                write!(f, "list:{}{}", shown.join(","), if v.len() > 8 { ",…" } else { "" })
            }
            AlphaKind::Fn(_) => write!(f, "fn"),
        }
    }
}
