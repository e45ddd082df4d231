//! Spline and Haar wavelet bases on aperiodic self-similar discretizations of
//! the real line.
//!
//! The supported point sets are the beta-integers of quadratic Pisot units
//! (both families `x^2 = ax + 1` and `x^2 = ax - 1`) and the Fibonacci chain
//! obtained by cut-and-project with a golden-ratio window. On these sets the
//! crate constructs
//!
//! - non-uniform B-spline scaling functions of any order, by two independent
//!   routes (Cox-de Boor style recurrence and antidifferentiated Vandermonde
//!   weights) that are checked against each other,
//! - compactly supported piecewise-polynomial Riesz wavelets whose
//!   coefficients live in the quadratic field `Q(beta)` and are computed by
//!   exact fraction-free elimination,
//! - Haar-type systems (orthonormal and Riesz variants) for both families,
//! - two-scale refinement tables and a finite-window multiresolution
//!   transform with exact or floating-point coefficients.
//!
//! All structural arithmetic is exact: field elements are pairs of arbitrary
//! precision rationals `p + q*beta`, comparisons go through integer sign
//! tests, and floating point appears only in exports, sampling, and spectral
//! estimates.
//!
//! # Examples
//!
//! The `examples/` directory is the front door; each file is a small guided
//! tour of one capability:
//!
//! ```text
//! examples/
//!   field_arithmetic.rs    exact arithmetic, conjugation, signs, floors
//!   beta_integers.rs       substitution words, greedy digit expansions
//!   fibonacci_chain.rs     cut-and-project nodes, conjugates, neighbor map
//!   word_combinatorics.rs  word classes, their windows, letter counts
//!   bsplines.rs            B-splines by recurrence and by Vandermonde route
//!   scaling_equations.rs   two-scale equations for the hat functions
//!   spline_wavelets.rs     minimal-support wavelets and their coefficients
//!   wavelet_refinement.rs  wavelet scaling equations and scaled norms
//!   haar_systems.rs        Haar scaling functions, wavelets, orthonormality
//!   transform_roundtrip.rs decompose/reconstruct on a finite window
//!   frame_bounds.rs        Gram spectra of wavelet families across windows
//! ```
//!
//! Run one with `cargo run --example fibonacci_chain`.
//!
//! A thin command line frontend (`cargo run -- generate ...`) exposes the
//! generators, table exports, a golden-data verifier, and a dense sampler.

#![forbid(unsafe_code)]

pub mod error;
pub mod export;
pub mod haar;
mod linalg;
pub mod mra;
pub mod quadfield;
pub mod refine;
pub mod spline;
pub mod tiling;
pub mod wavelet;

pub use error::{Error, Result};
pub use export::{
    builtin_golden, chain_rows, csv_field, csv_table, parse_canonical, parse_golden,
    run_verification, sample_series, text_table, wavelet_equations_at_seeds,
    wavelet_summaries, zeta_profiles, ChainRow, CheckStatus, Envelope, EquationTerm,
    GoldenData, RunConfig, SampleFunction, SampleSeries, VerifyCheck, VerifyReport,
    WaveletEquation, WaveletSummary, ZetaProfile,
};
pub use haar::{
    expand_in_orthonormal, fine_scaling_basis, fine_tiles, fine_tiles_mirrored, haar_refinement,
    haar_orthonormal_wavelets, haar_riesz_wavelets, haar_scaling, haar_system, orthonormalize,
    HaarFunction, HaarRefinementRule, HaarRefinementTerm, HaarSystem, HaarVariant, HaarWavelet,
    PlacedFunction, RootScaled,
};
pub use mra::{
    decompose, frame_bounds, project, project_samples, reconstruct, wavelet_occurrences,
    BasisKind, Coefficient, CoefficientEntry, CoefficientVector, FrameBasis, FrameBoundEstimate,
    FrameBoundReport, NumericMode, ProjectionReport,
};
pub use quadfield::{arith, reembed, ArithOp, Family, FieldSpec, QuadRat};
pub use refine::{
    refine_general, refine_linear, scaling_equation_at, scaling_equation_tables,
    wavelet_scaling_equations, RefinementTable, RefinementTerm, WaveletScalingEquation,
};
pub use spline::{
    bspline, bspline_by_recurrence, bspline_by_vandermonde, scaling_classes, PiecewisePoly,
    ScalingClass,
};
pub use tiling::{
    classify_words, fibonacci_node, generate_beta_integers, generate_fibonacci_chain,
    greedy_beta_digit_vec, greedy_beta_digits, left_ends_of_all_words, neighbor_map,
    word_letter_counts, word_string, Direction, Letter, ModelSetSpec, NodeSequence,
    SequenceSource,
    SubstitutionRule, WordClass,
};
pub use wavelet::{
    build_psi_spline, compute_e, enumerate_mother_words, mother_wavelet, mother_wavelet_plans,
    mother_wavelets, support_plan, zeta_from_psi, MotherWavelet, WaveletSupportPlan,
};
