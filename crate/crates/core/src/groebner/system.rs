use std::fmt;

use crate::commalg::{CommPoly, Vars};
use crate::error::Result;

/// Equations `f_j = 0` with an optional inequation `f_0 != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicSystem {
    pub vars: Vars,
    pub equations: Vec<CommPoly>,
    pub inequation: Option<CommPoly>,
}

impl AlgebraicSystem {
    /// Re-expresses every polynomial over `vars`; fails if one uses a
    /// variable outside the list.
    pub fn new(vars: Vars, equations: Vec<CommPoly>, inequation: Option<CommPoly>) -> Result<Self> {
        let equations = equations
            .iter()
            .filter(|e| !e.is_zero())
            .map(|e| e.align(&vars))
            .collect::<Result<Vec<_>>>()?;
        let inequation = inequation.map(|f| f.align(&vars)).transpose()?;
        Ok(AlgebraicSystem { vars, equations, inequation })
    }
}

impl fmt::Display for AlgebraicSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars: {}", self.vars.join(" "))?;
        for e in &self.equations {
            writeln!(f, "eq: {e}")?;
        }
        if let Some(n) = &self.inequation {
            writeln!(f, "neq: {n}")?;
        }
        Ok(())
    }
}
