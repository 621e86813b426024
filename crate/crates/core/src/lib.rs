//! Topological constraints on real schemes of flexible curves.
//!
//! The crate is organised around the chain of computations that turns a
//! curve's numerical data into an upper bound on the number of its
//! non-empty ovals:
//!
//! * [`scheme`] parses, canonicalises, classifies and enumerates real
//!   schemes written in (ASCII) Viro notation.
//! * [`bounds`] holds the exact number theory (`p`-adic valuations, the
//!   largest prime-power divisor `h(m)`) and every closed-form bound.
//! * [`cover`] is the Euler-characteristic / normal-Euler-number calculus of
//!   surfaces under 2-fold branched covers, ending in `b₂⁺` of the final
//!   4-manifold.
//! * [`quad_forms`] computes Brown invariants of `Z/4` quadratic refinements
//!   from exact Gauss sums and runs the Guillou–Marin and Yamada congruences.
//! * [`genus`] tabulates the non-orientable genus function of `CP²`.
//! * [`verdict`] ties everything together for a concrete curve and scheme.
//!
//! All arithmetic is exact. Data-parallel loops go through [`exec`], which
//! uses rayon when the `parallel` feature is on.

pub mod bounds;
pub mod cover;
pub mod curve;
pub mod exec;
pub mod genus;
pub mod quad_forms;
pub mod scheme;
pub mod verdict;

pub use curve::{CurveAmbient, CurveSpec, Degree};
pub use exec::Execution;
pub use scheme::{Ambient, Forest, OvalNode, RealScheme, RegionStats};
