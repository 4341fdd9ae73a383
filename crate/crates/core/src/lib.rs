//! Exact computations for the three-dimensional Sklyanin algebra: graded
//! pieces, the elliptic curve and its translation, `K₀` classes, quiver
//! representations of the Beilinson quiver, and explicit line-bundle
//! representations with membership certificates.

pub mod algebra;
pub mod elliptic;
pub mod error;
pub mod form;
pub mod io;
pub mod ktheory;
pub mod linalg;
pub mod moduli;
pub mod quiver;

pub use error::{Error, Result};

/// Order-preserving map, parallel when the `parallel` feature is on.
pub(crate) fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
