//! Exact computation of `K2(A,F)` for a generalized Cartan matrix `A` over a
//! field `F`, as a product of quotients of `K2(F)` and `K2(2,F)`.
//!
//! ```
//! use kmk2::text::{parse_matrix, render_factors};
//!
//! let a = parse_matrix("2 -1 -3; -3 2 -1; -1 -3 2").unwrap();
//! let k = kmk2::k2::k2(&a);
//! assert_eq!(render_factors(k.factors().unwrap()), "K2(F)/2K2(F) x K2(F)/13K2(F)");
//! ```

pub mod catalog;
pub mod document;
pub mod dynkin;
pub mod gcm;
pub mod intlat;
pub mod k2;
mod serde_int;
pub mod text;

/// Book chapters, compiled so their examples run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/matrices.md")]
    mod matrices {}
    #[doc = include_str!("../../../book/src/k2.md")]
    mod k2 {}
    #[doc = include_str!("../../../book/src/tables.md")]
    mod tables {}
    #[doc = include_str!("../../../book/src/conjecture.md")]
    mod conjecture {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
