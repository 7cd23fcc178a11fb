//! Fundamental groups of Galois covers of planar degenerations.
//!
//! A degeneration of a surface into planes is described by which planes meet
//! along which lines and how those lines meet at points. From that data the
//! crate builds a presentation of the group `G̃` generated by the
//! half-twists of the branch curve, maps its squares quotient onto the
//! symmetric group, and computes the kernel, which is the fundamental group
//! of the Galois cover.
//!
//! ```
//! use galcover::pipeline::{analyze, shipped_case, Options};
//! use galcover::coset::Verdict;
//!
//! let d = shipped_case("quartic-three-point").unwrap();
//! let report = analyze(&d, &Options::default()).unwrap();
//! assert_eq!(report.verdict, Verdict::IsoSymmetric { cosets: 24 });
//! assert!(report.kernel.invariants.is_trivial());
//! ```

pub mod braid;
pub mod coset;
pub mod degen;
pub mod fpgroup;
pub mod kernel;
pub mod pipeline;
pub mod vankampen;

pub use coset::{certify_symmetric, todd_coxeter, CosetTable, EnumerationLimits, Verdict};
pub use degen::{PlanarDegeneration, VertexKind};
pub use fpgroup::{Permutation, Presentation, Word};
pub use kernel::{AbelianInvariants, KernelData};
pub use pipeline::{analyze, AnalysisReport, Options};
pub use vankampen::{generate, GeneratedPresentation};

pub mod fixtures {
    //! Degeneration files shipped with the crate.

    macro_rules! case {
        ($name:literal) => {
            ($name, include_str!(concat!("../fixtures/cases/", $name, ".json")))
        };
    }

    pub const CASES: &[(&str, &str)] = &[
        case!("hirzebruch-strip"),
        case!("quadric-plus-plane"),
        case!("veronese-plus-plane"),
        case!("cayley-type-1"),
        case!("cayley-type-2"),
        case!("quartic-four-point-plus-plane"),
        case!("quintic-five-point"),
        case!("quintic-four-point-fan"),
        case!("quartic-three-point"),
    ];
}

#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/degenerations.md")]
    pub struct Degenerations;
    #[doc = include_str!("../../../book/src/presentations.md")]
    pub struct Presentations;
    #[doc = include_str!("../../../book/src/kernels.md")]
    pub struct Kernels;
    #[doc = include_str!("../../../book/src/braids.md")]
    pub struct Braids;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
