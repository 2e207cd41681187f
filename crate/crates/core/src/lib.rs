//! Maximal-entropy measures of shifts of finite type, built from
//! heteroclinic points.
//!
//! The library counts heteroclinic sets of an edge shift exactly with
//! big-integer matrix powers and compares the resulting empirical measures
//! with the Parry measure. It also has the periodic-point construction and
//! one-block factor codes. The guide in `book/` walks through each module.
//!
//! ```
//! use smale::{catalog, hetero, perron::PerronData, shift::ShiftPoint};
//!
//! let g = catalog::golden_mean();
//! let pd = PerronData::compute(&g).unwrap();
//! let a = ShiftPoint::periodic(&g, g.word(&["a"]).unwrap()).unwrap();
//! let spec = hetero::HeteroSpec::new(&g, a.clone(), 0, a, 0);
//! let series = hetero::ratio_and_entropy_series(&g, &pd, &spec, 20).unwrap();
//! assert!(series.row(20).unwrap().abs_err < 1e-10);
//! ```

pub mod catalog;
pub mod error;
pub mod factor;
pub mod graph;
pub mod hetero;
pub mod matrix;
pub mod parry;
pub mod periodic;
pub mod perron;
pub mod report;
pub mod shift;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/perron.md")]
    mod perron {}
    #[doc = include_str!("../../../book/src/shift-space.md")]
    mod shift_space {}
    #[doc = include_str!("../../../book/src/parry.md")]
    mod parry {}
    #[doc = include_str!("../../../book/src/heteroclinic.md")]
    mod heteroclinic {}
    #[doc = include_str!("../../../book/src/irreducible.md")]
    mod irreducible {}
    #[doc = include_str!("../../../book/src/periodic.md")]
    mod periodic {}
    #[doc = include_str!("../../../book/src/factor-codes.md")]
    mod factor_codes {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
