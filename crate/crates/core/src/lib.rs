//! Modified trigonometric cubic B-spline differential quadrature for the
//! coupled viscous Burgers equations in one and two space dimensions.

/// Version of this library.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod error;
pub mod format;
pub mod grid;
pub mod matrix;
pub mod spline;
pub mod thomas;
pub mod weights;
pub mod ssprk54;
pub mod burgers;
pub mod problems;
pub mod solver;
pub mod eigen;
pub mod stability;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/basis.md")]
    mod basis {}
    #[doc = include_str!("../../../book/src/weights.md")]
    mod weights {}
    #[doc = include_str!("../../../book/src/time.md")]
    mod time {}
    #[doc = include_str!("../../../book/src/problems.md")]
    mod problems {}
    #[doc = include_str!("../../../book/src/stability.md")]
    mod stability {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
