//! Variable contexts.
//!
//! A context is the fixed, ordered list of variable names for one
//! computation. Index 0 plays the role of the distinguished first variable
//! (the `x1` of the quasi weakly linear shape), index 1 the second, and so
//! on. Every polynomial holds a shared reference to exactly one context;
//! mixing contexts is an error, never a coercion.

use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContextError {
    EmptyName,
    InvalidName(String),
    DuplicateName(String),
}

impl fmt::Display for ContextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContextError::EmptyName => write!(f, "variable names must be nonempty"),
            ContextError::InvalidName(n) => write!(f, "invalid variable name `{n}`"),
            ContextError::DuplicateName(n) => write!(f, "duplicate variable name `{n}`"),
        }
    }
}

impl std::error::Error for ContextError {}

/// Immutable ordered list of distinct variable names.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct VariableContext {
    names: Vec<String>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VariableContext {
    /// Builds a shared context. Names must be distinct identifiers
    /// (`[A-Za-z_][A-Za-z0-9_]*`) so that printed polynomials re-parse.
    pub fn new<I, S>(names: I) -> Result<Arc<Self>, ContextError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(ContextError::EmptyName);
            }
            if !is_identifier(n) {
                return Err(ContextError::InvalidName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(ContextError::DuplicateName(n.clone()));
            }
        }
        Ok(Arc::new(VariableContext { names }))
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

    pub fn name(&self, i: usize) -> Option<&str> {
        self.names.get(i).map(String::as_str)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Cheap equality for shared contexts: pointer identity first, then content.
pub fn same_context(a: &Arc<VariableContext>, b: &Arc<VariableContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
