//! Solvers, verifiers, and generators for restricted disjunctive temporal
//! networks (RDTNs) and hyper temporal networks (HyTNs).
//!
//! The constraint classes are:
//!
//! - t1: difference constraints `Y - X <= w`;
//! - t2: single-variable disjunctions of intervals;
//! - t3: two-variable disjunctions of two intervals;
//! - multi-head / multi-tail hyperarcs: disjunctions of distance
//!   constraints sharing one tail (or one head).
//!
//! Consistency here always means the existence of a non-negative feasible
//! schedule; solvers return the least such schedule when one exists and a
//! checkable certificate otherwise. Weights are exact 64-bit integers with
//! overflow-checked arithmetic throughout.
//!
//! Module map: [`model`] holds the data model, [`stn`] the difference
//! constraint engine, [`t2dtp`] and [`rdtp`] the polynomial solvers for the
//! disjunctive classes, [`twosat`] the meta-variable SAT engine, [`hytn`]
//! the hyper-network value iteration, [`certify`] the certificate
//! verifiers, [`oracle`] the brute-force ground truth, [`gen`] instance
//! generators, and [`io`] the text formats.

pub mod certify;
pub mod gen;
pub mod hytn;
pub mod io;
pub mod model;
pub mod oracle;
pub mod rdtp;
pub mod stn;
pub mod t2dtp;
pub mod twosat;

pub use model::{
    satisfies, Certificate, Interval, Network, Rdtn, Schedule, SolveError, T1Constraint,
    T2Constraint, T3Constraint, TimePointId, Verdict, Weight,
};
