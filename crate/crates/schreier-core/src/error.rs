//! Error type shared by every module in the crate.
//!
//! Errors split into two moral categories that callers (in particular the
//! CLI) treat differently:
//!
//! * **precondition failures** — the input does not satisfy the contract of
//!   the operation (a set is not a family member, a vector is not on the unit
//!   sphere, …);
//! * **guard violations** — the input is perfectly valid but the requested
//!   computation is too large for exhaustive/exact treatment (enumeration
//!   window too wide, a construction whose support size would be
//!   astronomical, a search budget exhausted).
//!
//! [`Error::is_guard`] distinguishes the two.

use core::fmt;

/// Convenient alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A set that was required to belong to the family does not.
    NotAMember,
    /// A set that was required to be maximal in the family is not.
    NotMaximal,
    /// A vector that was required to lie on the unit sphere does not.
    NotUnitNorm,
    /// A vector that was required to be finitely supported is not. Vectors
    /// built through this crate always are, so this is unreachable from the
    /// provided constructors; it exists for API completeness.
    NotFinitelySupported,
    /// An operation restricted to a particular exponent was called with
    /// another one (e.g. dual computations demand `p = 1`).
    WrongExponent {
        /// The exponent the operation requires.
        expected: u32,
        /// The exponent it was handed.
        got: u32,
    },
    /// An exhaustive enumeration was requested over a window wider than the
    /// configured guard.
    WindowTooLarge {
        /// The window that was asked for.
        requested: u32,
        /// The largest window the guard allows.
        limit: u32,
    },
    /// A named hypothesis of an operation failed; the payload names it.
    PreconditionViolated(&'static str),
    /// A splitting was requested of something already extreme.
    AlreadyExtreme,
    /// A functional was required to be a signed indicator of a family set
    /// (an element of the norming set `W`) and is not.
    NotInW,
    /// A point that was required to lie in the (dual) unit ball lies
    /// strictly outside it.
    OutsideBall,
    /// An order index that was required to be positive is zero.
    OrderZero,
    /// The ladder data handed to a certificate constructor violates the
    /// block constraints; the payload names the violated constraint.
    InvalidLadder(&'static str),
    /// A construction is exactly defined but its support would be too large
    /// to materialize; the payload is a lower bound on the support size.
    ConstructionTooLarge {
        /// Lower bound on the number of nonzero coordinates the construction
        /// would need.
        estimate: u128,
    },
    /// Adding two scalars would leave the exactly-representable class
    /// (e.g. the sum of two p-th roots with incommensurable radicands where
    /// a single radical is required).
    MixedRadicals,
}

impl Error {
    /// True for guard violations (resource limits), false for precondition
    /// failures. The CLI maps guards to exit code 3 and preconditions to 2.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::WindowTooLarge { .. } | Error::ConstructionTooLarge { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotAMember => write!(f, "set is not a member of the family"),
            Error::NotMaximal => write!(f, "set is not maximal in the family"),
            Error::NotUnitNorm => write!(f, "vector does not have norm exactly 1"),
            Error::NotFinitelySupported => {
                write!(f, "vector is not finitely supported")
            }
            Error::WrongExponent { expected, got } => {
                write!(f, "operation requires p = {expected}, got p = {got}")
            }
            Error::WindowTooLarge { requested, limit } => {
                write!(f, "window {requested} exceeds the guard limit {limit}")
            }
            Error::PreconditionViolated(name) => {
                write!(f, "precondition violated: {name}")
            }
            Error::AlreadyExtreme => write!(f, "input is already extreme"),
            Error::NotInW => write!(f, "functional is not a signed indicator of a family set"),
            Error::OutsideBall => write!(f, "point lies outside the unit ball"),
            Error::OrderZero => write!(f, "operation requires order at least 1"),
            Error::InvalidLadder(name) => write!(f, "invalid ladder data: {name}"),
            Error::ConstructionTooLarge { estimate } => {
                write!(
                    f,
                    "construction would need at least {estimate} nonzero coordinates"
                )
            }
            Error::MixedRadicals => {
                write!(f, "sum of incommensurable radicals is not representable")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
