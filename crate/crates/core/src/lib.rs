//! Exact hyperspace arithmetic over the double arrow space 𝔸 and the
//! Sorgenfrey line 𝕊.
//!
//! Points carry rational coordinates, so every comparison is decidable and
//! every construction is exact. The crate covers four layers:
//!
//! * [`order`]: points, the order, successors, intervals and basic open sets;
//! * [`hyperspace`]: canonical interval unions, the maps `ϱ` and `ρ` and the
//!   quotient relations they induce;
//! * [`vietoris`]: subbasic membership, the neighbourhood boxes witnessing
//!   continuity of `ϱ`, and a randomized saturation checker;
//! * [`homeo`]: piecewise affine autohomeomorphisms with lazily generated
//!   tails, and the builder carrying one convergent sequence onto another.

pub mod error;
pub mod homeo;
pub mod hyperspace;
pub mod json;
pub mod order;
pub mod sample;
pub mod vietoris;

pub use error::{Error, Result};
pub use order::{
    compare, is_clopen, mk_interval, point_in_open, predecessor, rat, successor, ClosedInterval, Lower, OpenPiece,
    OpenSetSpec, Point, Rational, SpaceTag, Upper,
};
