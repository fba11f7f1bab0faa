//! Generalized maps, homology-preserving simplification and integer
//! homology.
//!
//! ```
//! use gmap_homology::io::builder::polygon;
//! use gmap_homology::{homology_of, SimplifyOptions};
//!
//! let square = polygon(4);
//! let h = homology_of(&square, SimplifyOptions::default()).unwrap();
//! assert_eq!(h.betti, vec![1, 0, 0]);
//! ```

pub mod cli;
pub mod error;
pub mod gmap;
pub mod homology;
pub mod io;
pub mod orientation;
pub mod simplify;

pub use error::{Error, Result};
pub use gmap::{Cell, CellCatalog, DartId, GMap, ValidationReport, Violation};
pub use homology::{betti_and_torsion, homology, ChainComplex, HomologyResult, HomologySummary};
pub use orientation::{assign_signs, check_subclass, signed_incidence, SignedGMap, SubclassReport};
pub use simplify::{simplify, OperationLog, Simplification, SimplifyOptions};

/// Betti numbers and torsion of `g` after simplification.
pub fn homology_of(g: &GMap, opts: SimplifyOptions) -> Result<HomologySummary> {
    let s = simplify(g, opts)?;
    Ok(betti_and_torsion(&ChainComplex::build(&s.signed)?))
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/gmaps.md")]
    mod gmaps {}
    #[doc = include_str!("../../../book/src/orientation.md")]
    mod orientation {}
    #[doc = include_str!("../../../book/src/simplification.md")]
    mod simplification {}
    #[doc = include_str!("../../../book/src/homology.md")]
    mod homology {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
