//! Exact computations for representations of Dynkin quivers: Auslander-Reiten
//! theory, desingularizations of orbit closures, fibre counts over finite
//! fields, and the Hall-algebra route to the canonical basis.

pub mod ar;
pub mod cli;
pub mod counts;
pub mod desing;
pub mod error;
pub mod fp;
pub mod hall;
pub mod laurent;
pub mod partition;
pub mod poly;
pub mod quiver;
pub mod reps;
pub mod strata;

pub use ar::ArData;
pub use counts::Engine;
pub use error::{Error, Result};
pub use laurent::LaurentPoly;
pub use poly::CountPolynomial;
pub use quiver::{DimVector, DynkinType, Quiver, VertexOrder};
pub use reps::{ConcreteRep, RepClass};
