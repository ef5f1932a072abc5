use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{AlgebraError, Result};

/// A named set of polynomial variables. Polynomials share rings through `Arc`.
#[derive(Debug, PartialEq, Eq)]
pub struct Ring {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Ring {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Arc<Ring>> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(AlgebraError::Parse(format!("invalid variable name {n:?}")));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(AlgebraError::Parse(format!("duplicate variable {n:?}")));
            }
        }
        Ok(Arc::new(Ring { names, index }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn var(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// A ring with `extra` variables appended after the existing ones.
    pub fn extended<S: Into<String>>(&self, extra: impl IntoIterator<Item = S>) -> Result<Arc<Ring>> {
        Ring::new(self.names.iter().cloned().chain(extra.into_iter().map(Into::into)))
    }

    /// A variable name of the form `{stem}{k}` not yet used in this ring.
    pub fn fresh_name(&self, stem: &str) -> String {
        if self.var(stem).is_none() {
            return stem.to_string();
        }
        (0..).map(|k| format!("{stem}{k}")).find(|n| self.var(n).is_none()).unwrap()
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || a.names == b.names
}
