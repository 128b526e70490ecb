use std::collections::HashSet;

use super::LinError;

/// Shape of the constraint space: clock columns first, then parameter columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Space {
    pub clocks: usize,
    pub parameters: usize,
}

impl Space {
    pub fn new(clocks: usize, parameters: usize) -> Self {
        Space { clocks, parameters }
    }

    pub fn dimension(&self) -> usize {
        self.clocks + self.parameters
    }

    pub fn is_clock(&self, column: usize) -> bool {
        column < self.clocks
    }

    pub fn parameter_column(&self, index: usize) -> usize {
        self.clocks + index
    }

    pub fn clock_columns(&self) -> std::ops::Range<usize> {
        0..self.clocks
    }

    pub fn parameter_columns(&self) -> std::ops::Range<usize> {
        self.clocks..self.dimension()
    }
}

/// What a name refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarRef {
    Clock(usize),
    Parameter(usize),
    Discrete(usize),
}

/// Ordered clock, parameter and discrete-variable names.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VariableRegistry {
    clocks: Vec<String>,
    parameters: Vec<String>,
    discretes: Vec<String>,
}

impl VariableRegistry {
    pub fn new<S: Into<String>>(
        clocks: impl IntoIterator<Item = S>,
        parameters: impl IntoIterator<Item = S>,
        discretes: impl IntoIterator<Item = S>,
    ) -> Result<Self, LinError> {
        let registry = VariableRegistry {
            clocks: clocks.into_iter().map(Into::into).collect(),
            parameters: parameters.into_iter().map(Into::into).collect(),
            discretes: discretes.into_iter().map(Into::into).collect(),
        };
        let mut seen = HashSet::new();
        for name in registry.all_names() {
            if !seen.insert(name) {
                return Err(LinError::DuplicateName(name.to_string()));
            }
        }
        Ok(registry)
    }

    fn all_names(&self) -> impl Iterator<Item = &str> {
        self.clocks
            .iter()
            .chain(&self.parameters)
            .chain(&self.discretes)
            .map(String::as_str)
    }

    pub fn space(&self) -> Space {
        Space::new(self.clocks.len(), self.parameters.len())
    }

    pub fn clocks(&self) -> &[String] {
        &self.clocks
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    pub fn discretes(&self) -> &[String] {
        &self.discretes
    }

    pub fn lookup(&self, name: &str) -> Option<VarRef> {
        if let Some(i) = self.clocks.iter().position(|n| n == name) {
            return Some(VarRef::Clock(i));
        }
        if let Some(i) = self.parameters.iter().position(|n| n == name) {
            return Some(VarRef::Parameter(i));
        }
        self.discretes
            .iter()
            .position(|n| n == name)
            .map(VarRef::Discrete)
    }

    /// Column of a clock or parameter inside constraint rows.
    pub fn column(&self, name: &str) -> Option<usize> {
        match self.lookup(name)? {
            VarRef::Clock(i) => Some(i),
            VarRef::Parameter(i) => Some(self.clocks.len() + i),
            VarRef::Discrete(_) => None,
        }
    }

    /// Name of a constraint column.
    pub fn column_name(&self, column: usize) -> &str {
        if column < self.clocks.len() {
            &self.clocks[column]
        } else {
            &self.parameters[column - self.clocks.len()]
        }
    }
}
