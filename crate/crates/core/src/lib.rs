//! Exact symbolic computation of small I-functions of abelian and nonabelian
//! GIT quotients, their twisted sectors and Lefschetz (complete intersection)
//! twists.
//!
//! The pipeline is: [`gitdata`] validates the presentation and enumerates
//! curve classes and sectors, [`chowring`] builds the Chow ring of each
//! sector of the abelian quotient, [`factors`] evaluates the hypergeometric
//! factors, and [`ifunction`] assembles them into a truncated series.

pub mod chowring;
pub mod coeff;
pub mod error;
pub mod factors;
pub mod gitdata;
pub mod ifunction;
pub mod lattice;
pub mod poly;

pub use error::{Error, Result};
