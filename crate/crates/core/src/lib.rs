//! Decision procedures and proof certificates for constructive provability
//! logic in its tethered (CPL) and de-tethered (CPL*) variants, over finite
//! acyclic frames.
//!
//! * [`syntax`]: frames, propositions, contexts, polarization.
//! * [`cpl`]: the sequent-calculus decider for CPL with replayable proofs.
//! * [`focused`]: the focused, polarized decider for CPL*.
//! * [`nd`]: natural-deduction proof terms for both variants.
//! * [`lp`]: a two-strata Datalog engine compiled through CPL*.
//! * [`validation`]: frame batteries, axiom schemas and countermodels.

pub mod cpl;
pub mod focused;
pub mod lp;
pub mod nd;
pub mod syntax;
pub mod validation;

mod closure;

/// Outcome of a decision procedure. Refutations carry no certificate: they
/// are established by exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofResult<P> {
    Provable(P),
    Refuted,
}

impl<P> ProofResult<P> {
    pub fn is_provable(&self) -> bool {
        matches!(self, ProofResult::Provable(_))
    }

    pub fn proof(&self) -> Option<&P> {
        match self {
            ProofResult::Provable(p) => Some(p),
            ProofResult::Refuted => None,
        }
    }

    pub fn into_proof(self) -> Option<P> {
        match self {
            ProofResult::Provable(p) => Some(p),
            ProofResult::Refuted => None,
        }
    }
}

/// Search was cut off by its step budget before reaching a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("search exceeded its budget of {0} steps")]
pub struct BudgetExhausted(pub u64);

/// Which of the two logics a query or certificate belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Logic {
    /// Tethered: eliminations conclude at the world of the eliminated judgment.
    Cpl,
    /// De-tethered: eliminations may conclude at any world below it.
    CplStar,
}

impl Logic {
    pub fn name(self) -> &'static str {
        match self {
            Logic::Cpl => "cpl",
            Logic::CplStar => "cpl*",
        }
    }

    /// `Γ ⊢ A[w]` in this logic.
    pub fn provable(
        self,
        frame: &syntax::Frame,
        ctx: &syntax::Context,
        a: &syntax::Prop,
        w: syntax::World,
    ) -> bool {
        match self {
            Logic::Cpl => cpl::provable_cpl(frame, ctx, a, w),
            Logic::CplStar => focused::provable_star(frame, ctx, a, w),
        }
    }
}
