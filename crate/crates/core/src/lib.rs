//! Second-order invariants of Lorentzian surfaces in the neutral space R^{2,2}.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: vectors, bivectors, Hodge star and bracket;
//! * [`qmap`], [`classify`], [`hyperbola`]: quadratic maps between Lorentz
//!   planes, their invariants, normal forms and curvature hyperbolas;
//! * [`expr`], [`jet`]: expression parsing and second-order jets;
//! * [`surface`], [`integrate`]: frames, second fundamental form, Gauss map and
//!   total-curvature quadrature;
//! * [`asymptotic`], [`quasiumb`], [`ads`]: asymptotic and mean directions,
//!   quasi-umbilic generators, surfaces in anti-de Sitter space;
//! * [`io`], [`cli`]: JSON/CSV formats and the `lorentz22` command.

pub mod ads;
pub mod algebra;
pub mod asymptotic;
pub mod error;
pub mod classify;
pub mod cli;
pub mod expr;
pub mod hyperbola;
pub mod integrate;
pub mod io;
pub mod jet;
pub mod qmap;
pub mod quasiumb;
pub mod surface;

pub use error::{Error, Result};
