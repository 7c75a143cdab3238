//! Symmetric divergence measures on finite discrete probability distributions.
//!
//! The crate carries a fixed catalog of convex generating functions (triangular
//! discrimination, Hellinger, symmetric chi-square, the `K0`/`F` measures, the
//! classical logarithmic divergences, the `K_t` power family and its exponential
//! closed form, the `B` measures, and the coefficient-weighted difference and
//! gap measures built from them), evaluates each measure both through its
//! closed-form sum and through the generic convex-generator functional, and
//! provides two verification engines on top:
//!
//! * [`inequality`] — encodes the known inequality chains among the measures as
//!   DAGs of weighted edges and checks them over seeded randomized pairs of
//!   distributions, and
//! * [`bounds`] — estimates `sup` / `inf` of second-derivative ratios
//!   `f1''/f2''` over `(0, inf)` (with the removable singularity at `x = 1`
//!   handled by two-sided Richardson extrapolation) and certifies the resulting
//!   functional inequalities numerically.
//!
//! All randomized operations take explicit 64-bit seeds and are bitwise
//! reproducible; values are immutable and safe to share across threads.

pub mod bounds;
pub mod distributions;
pub mod divergences;
pub mod generators;
pub mod inequality;
pub mod measures;
pub mod report;
pub mod sampling;
mod sum;

pub use distributions::Distribution;
pub use generators::Generator;
pub use measures::MeasureId;
pub use sum::NeumaierSum;
