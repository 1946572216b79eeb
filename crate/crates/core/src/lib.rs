//! Topological pressure of subsets of subshifts of finite type.
//!
//! The crate computes Carathéodory-type pressures of a subset `Z` of a
//! one-sided subshift of finite type under four covering notions:
//!
//! - classical Bowen balls `B_n(x, δ)`,
//! - mistake Bowen balls `B_n(g; x, δ)`, where up to `g(n, δ)` orbit times
//!   may fail the closeness test,
//! - balls of the average metric `d̄_n`,
//! - strings of cylinder covers, with and without mistakes.
//!
//! Each pressure is reported through finite-scale estimates (the level-one
//! crossing of the covering sum) together with independent oracles: the
//! Perron eigenvalue of a weighted transfer matrix, direct word-count
//! partition functions and exact set-cover infima on small instances.
//!
//! ```
//! use pressurelab::{BallKind, Potential, PressureQuery, SftSystem, Strategy, ZSet};
//!
//! let sys = SftSystem::full_shift(2, 0.5).unwrap();
//! let phi = Potential::zero(&sys);
//! let z = ZSet::WholeSpace;
//! let q = PressureQuery::new(&sys, &z, &phi, BallKind::Bowen);
//! let s = q.critical_value(8, sys.radius(3), Strategy::Uniform).unwrap();
//! assert!((s.value - 2f64.ln()).abs() < 1e-9);
//! ```

#![forbid(unsafe_code)]

pub mod balls;
pub mod error;
pub mod io;
pub mod mistake;
pub mod oracles;
pub mod point;
pub mod potential;
pub mod pressure_ball;
pub mod pressure_cover;
pub mod reduce;
pub mod sampling;
pub mod search;
pub mod system;
pub mod zset;

pub use balls::{BallKind, CensusKind, InclusionReport};
pub use error::{Error, Result};
pub use mistake::{MistakeFamily, MistakeFunction};
pub use point::Point;
pub use potential::Potential;
pub use pressure_ball::{CoverAtom, Critical, PressureEstimate, PressureQuery, Schedule, Strategy, TracePoint};
pub use pressure_cover::{CoverQuery, CylinderCover, StringU, TraceSet};
pub use system::{SftSystem, Word};
pub use zset::ZSet;
