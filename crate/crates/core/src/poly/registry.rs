use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{PolyError, Var};

/// Role of a registered variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarClass {
    /// Power-series variable `x_k`.
    Series,
    /// Placeholder `Y_i` for an unknown series.
    Unknown,
    /// Coefficient unknown `Y_{i,α}` of a flattened system.
    Coefficient,
    /// Order witness `Z_i`.
    Witness,
    /// Placeholder for a partial derivative of an unknown function.
    Derivative,
    /// Coordinate of a countable equation system.
    Coordinate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarInfo {
    pub name: String,
    pub class: VarClass,
}

/// Append-only table of variable names. A polynomial built against one
/// registry stays valid against any extension of it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VariableRegistry {
    vars: Vec<VarInfo>,
    by_name: HashMap<String, Var>,
}

impl VariableRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, name: impl Into<String>, class: VarClass) -> Result<Var, PolyError> {
        let name = name.into();
        if self.by_name.contains_key(&name) {
            return Err(PolyError::DuplicateVariable(name));
        }
        let v = Var(self.vars.len() as u32);
        self.by_name.insert(name.clone(), v);
        self.vars.push(VarInfo { name, class });
        Ok(v)
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, v: Var) -> &str {
        &self.vars[v.index()].name
    }

    pub fn class(&self, v: Var) -> VarClass {
        self.vars[v.index()].class
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn contains(&self, v: Var) -> bool {
        v.index() < self.vars.len()
    }

    pub fn of_class(&self, class: VarClass) -> Vec<Var> {
        (0..self.vars.len() as u32)
            .map(Var)
            .filter(|&v| self.class(v) == class)
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &VarInfo)> {
        self.vars.iter().enumerate().map(|(i, info)| (Var(i as u32), info))
    }

    /// Registry holding `x1..xn` as coordinates, used by equation generators.
    pub fn coordinates(n: usize) -> Self {
        let mut reg = Self::new();
        for i in 1..=n {
            reg.register(format!("x{i}"), VarClass::Coordinate)
                .expect("fresh names");
        }
        reg
    }
}
