//! Enumeration, canonical forms and finite-geometry views of sets of
//! mutually orthogonal Latin rectangles.

pub mod enumerate;
pub mod error;
pub mod expected;
pub mod format;
pub mod galois;
pub mod geometry;
pub mod isotopism;
pub mod latin;
pub mod perm;
pub mod symmetry;
pub mod verify;

pub use error::{MolrError, Result};
pub use isotopism::Isotopism;
pub use latin::{are_orthogonal, conjugate_swap, normalize, validate_molr, validate_rectangle, LatinRectangle, MolrSet};
pub use symmetry::{
    aut_order, automorphisms, canonical_form, canonical_key, is_homogeneous, is_orbit_of, is_transitive,
    paratopism_key, rect_orbit_of, stepwise_flags, ClassRecord, Flags,
};
