//! Parafermion stabilizer codes over PF(D, 2n).
//!
//! - [`zmod`]: exact linear algebra over Z_D (Howell form, membership, kernels)
//! - [`pf`]: phase-tracked parafermion operators
//! - [`code`]: stabilizer codes, validation, distance and `l_con`
//! - [`builders`]: clock chains, qudit embedding, CSS doubling, D=6 doubling, toric codes
//! - [`search`]: exhaustive and randomized code search
//! - [`oracle`]: explicit Jordan-Wigner matrices used as an independent check
//! - [`io`]: JSON file formats

pub mod builders;
pub mod code;
pub mod distance;
pub mod io;
pub mod oracle;
pub mod pf;
pub mod repro;
pub mod search;
pub mod zmod;

pub use code::{CodeError, CodeReport, DistanceOutcome, ModeLayout, PfCode, ReportOptions, Validity};
pub use pf::{PfError, PfOperator};
pub use zmod::{Howell, ZModError, ZModMatrix};
