//! Combinatorial McKay correspondence for finite abelian subgroups of SL(3, ℂ).

pub mod analysis;
pub mod check;
pub mod ct;
pub mod derived;
pub mod divisor;
pub mod error;
pub mod fan;
pub mod fixture;
pub mod group;
pub mod io;
pub mod quiver;
pub mod recipe;
pub mod render;
pub mod sweep;

pub use analysis::Analysis;
pub use divisor::DivisorSum;
pub use error::{Error, Result};
pub use fan::{GGraph, Triangulation, WeightTable};
pub use group::{Character, GroupData, GroupSpec, JuniorPoint, Monomial};
pub use quiver::{Cube, Model};
