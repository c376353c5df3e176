//! Shift-register synthesis over prime fields by module minimisation.
//!
//! The problem: given sequences `S_1..S_l`, moduli `G_1..G_l` and weights
//! `(nu, w_0..w_l)` over GF(p), find a lowest-degree `lambda` admitting
//! `omega_i` with `lambda * S_i = omega_i (mod G_i)` and
//! `nu*deg lambda + w_0 > nu*deg omega_i + w_i` for every i.
//!
//! The solution vectors form a free F[x]-module spanned by an explicit
//! triangular basis; any reduction of that basis to weak Popov form under
//! the weighted degree exposes a minimal solution as its
//! leading-position-0 row. Three reducers are provided:
//!
//! - [`ms`]: the plain row-reduction loop and its modulo-reduced variant,
//!   the reference everything else is checked against;
//! - [`alekhnovich`]: divide-and-conquer over projections with explicit
//!   transformation matrices;
//! - [`demand`]: tracks only the first basis column and computes other
//!   coefficients on demand.
//!
//! [`oracle`] certifies minimality independently by linear algebra and
//! enumeration, and [`rsdecode`] builds Power-Gao Reed-Solomon decoding
//! on top of the solver.

pub mod alekhnovich;
pub mod demand;
pub mod ff;
pub mod instance;
pub mod ms;
pub mod oracle;
pub mod polymat;
pub mod rsdecode;
pub mod sampling;

pub use ff::{Degree, Field, Poly};
pub use instance::{Algorithm, MgLfsrInstance, Solution};
pub use polymat::{PolyMatrix, PolyVector, WeightProfile};
