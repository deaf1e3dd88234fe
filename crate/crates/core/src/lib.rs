pub mod algebra;
pub mod builtins;
pub mod cochain;
pub mod cyclotomic;
pub mod error;
pub mod group;
pub mod groupoid;
pub mod io;

pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupElement, Subgroup};
pub use groupoid::{Groupoid, GroupoidFunctor, LoopGroupoid, NaturalTransformation, Retraction, RetractionData};
pub use cochain::{epsilon_correction, transgress_at, Cochain, Phase};
pub use cyclotomic::{integrate, Cyclotomic};
pub use algebra::{AlgebraRep, DrinfeldDouble, TwistedAlgebra};
