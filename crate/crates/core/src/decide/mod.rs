//! Decision procedures for automorphic equivalence and semiinvariants.

mod case1;
mod comm;
mod engine;
mod equiv;
mod semiinv;
mod sequences;

pub use case1::{case1_decide, case1_semiinv};
pub use comm::{comm_equiv_decide, comm_semiinv_decide, comm_semiinv_heuristic, HeuristicReport};
pub use engine::{build_two_sided_system, TwoSidedSystem};
pub use equiv::equiv_decide;
pub use semiinv::semiinv_decide;
pub use sequences::{enumerate_sequences, for_each_sequence, DegreeSequence, EndShape};

use std::fmt;

use crate::autgroup::{AutWord, XyAlgebra};
use crate::groebner::AlgebraicSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    NotEquivalent,
    Semiinvariant,
    NotSemiinvariant,
    Unknown,
}

impl Verdict {
    pub fn tag(self) -> &'static str {
        match self {
            Verdict::Equivalent => "EQUIVALENT",
            Verdict::NotEquivalent => "NOT_EQUIVALENT",
            Verdict::Semiinvariant => "SEMIINVARIANT",
            Verdict::NotSemiinvariant => "NOT_SEMIINVARIANT",
            Verdict::Unknown => "UNKNOWN",
        }
    }
}

/// Outcome of a decision with its evidence.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub verdict: Verdict,
    /// Verified automorphism with rational coefficients.
    pub witness: Option<AutWord>,
    /// Eigenvalue, or a description of the admissible family.
    pub lambda: Option<String>,
    /// A solvable system whose solutions encode witnesses, when no
    /// rational point was found.
    pub ideal: Option<AlgebraicSystem>,
    pub trace: Vec<String>,
}

impl Certificate {
    pub fn new(verdict: Verdict, trace: Vec<String>) -> Self {
        Certificate { verdict, witness: None, lambda: None, ideal: None, trace }
    }

    pub fn with_witness(mut self, w: AutWord) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_lambda(mut self, l: impl Into<String>) -> Self {
        self.lambda = Some(l.into());
        self
    }

    pub fn with_ideal(mut self, s: AlgebraicSystem) -> Self {
        self.ideal = Some(s);
        self
    }

    pub fn is_decided(&self) -> bool {
        self.verdict != Verdict::Unknown
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RESULT: {}", self.verdict.tag())?;
        if let Some(w) = &self.witness {
            writeln!(f, "WITNESS: {w}")?;
        }
        if let Some(l) = &self.lambda {
            writeln!(f, "LAMBDA: {l}")?;
        }
        if let Some(s) = &self.ideal {
            writeln!(f, "IDEAL:")?;
            write!(f, "{s}")?;
        }
        for t in &self.trace {
            writeln!(f, "TRACE: {t}")?;
        }
        Ok(())
    }
}

/// Exact test `phi(u) = v`.
pub fn verify_witness<A: XyAlgebra>(phi: &AutWord, u: &A, v: &A) -> bool {
    phi.apply(u).map(|w| &w == v).unwrap_or(false)
}
