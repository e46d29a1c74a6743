//! Finite B_h-sets of integers and lattice points from Q-independent reals.
//!
//! Given Q-independent vectors `theta_1, .., theta_n` in `R^d`, every integer
//! `a_{i,j}` with `0 < |a_{i,j} - q theta_{i,j}| <= m` yields a B_h-set
//! `{a_1, .., a_n}` of lattice points once `q > 2hm / eps_{h,n}`, where
//! `eps_{h,n}` is the least `l-inf` norm of `sum (x_i - y_i) theta_i` over
//! distinct `x, y` in `X_{h,n}`.
//!
//! * [`multiindex`]: `X_{h,n}` and its difference vectors.
//! * [`interval`], [`realnum`]: dyadic interval enclosures of symbolic reals.
//! * [`epsilon`]: rigorous enclosure of the separation constant.
//! * [`construct`]: digit candidates, point sets and certificates.
//! * [`gadic`]: Sidon sets from base-`g` truncations `floor(g^l theta_i)`.
//! * [`verify`]: brute-force representation counts; independent of the above.

pub mod construct;
pub mod epsilon;
pub mod error;
pub mod gadic;
pub mod interval;
pub mod json;
pub mod multiindex;
pub mod realnum;
pub mod verify;

pub use error::{Error, Result};
