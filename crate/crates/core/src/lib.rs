//! Metric projection onto closed balls in `R^n` and its generalized
//! derivatives.
//!
//! * [`projection`]: the projection itself, region classification and the
//!   outward/inward direction split at boundary points.
//! * [`derivative`]: Gâteaux directional derivative, graphical derivative
//!   and the Fréchet derivative off the boundary.
//! * [`coderivative`]: the regular coderivative as an exact structured set.
//! * [`oracle`]: definition-level numerical checks used to corroborate the
//!   closed forms.
//! * [`request`], [`sweep`], [`suites`]: the JSON/CSV front end and
//!   verification suites behind the command-line tool.

pub mod coderivative;
pub mod derivative;
pub mod error;
pub mod hilbert;
pub mod oracle;
pub mod projection;
pub mod request;
pub mod sampling;
pub mod suites;
pub mod sweep;

pub use coderivative::{
    coderivative_special, regular_coderivative, set_equal, set_membership, zero_in_coderivative,
    CoderivativeSet, Segment, SpecialValues, DEFAULT_SET_EPS,
};
pub use derivative::{
    apply_linear, frechet_map, frechet_map_with_tol, gateaux, gateaux_with_tol, graphical,
    graphical_with_tol, LinearMapSpec,
};
pub use error::{Error, Result};
pub use hilbert::{inner, norm, ortho_split, OrthoSplit, Vector};
pub use oracle::{
    contingent_member, fd_directional, limsup_quotient, FdEstimate, LimsupReport, SamplingScheme,
    Verdict,
};
pub use projection::{
    classify, direction_class, project, try_project, Ball, DirectionClass, Region, RegionKind,
    DEFAULT_TAU,
};
