use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Finite-dimensional Hilbert space with named basis states.
///
/// Cloning is cheap; labels are shared.
#[derive(Clone, PartialEq, Eq)]
pub struct HilbertSpace {
    labels: Arc<[String]>,
}

impl HilbertSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidLabels(
                "space must have at least one state".into(),
            ));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidLabels(format!("duplicate label {l:?}")));
            }
        }
        Ok(Self {
            labels: labels.into(),
        })
    }

    /// Space labeled "0", "1", ..., "n-1".
    pub fn numbered(dim: usize) -> Self {
        Self::new((0..dim.max(1)).map(|i| i.to_string())).expect("numbered labels are unique")
    }

    /// The qubit space {"0", "1"}.
    pub fn qubit() -> Self {
        Self::numbered(2)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Product space; labels are concatenated in (self, other) order.
    pub fn tensor(&self, other: &HilbertSpace) -> HilbertSpace {
        let labels: Vec<String> = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| format!("{a}{b}")))
            .collect();
        // Concatenation can collide (e.g. "1"+"11" vs "11"+"1"); fall back to a separator.
        HilbertSpace::new(labels.clone()).unwrap_or_else(|_| {
            HilbertSpace::new(
                self.labels
                    .iter()
                    .flat_map(|a| other.labels.iter().map(move |b| format!("{a},{b}"))),
            )
            .expect("separated product labels are unique")
        })
    }

    pub(crate) fn ensure_same(&self, other: &HilbertSpace) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for HilbertSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}
