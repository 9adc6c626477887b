//! Countable colourings of abelian groups without elements of order 4 under
//! which no two distinct elements `a`, `b` have `2a`, `2b` and `a + b` all
//! the same colour, with the group machinery needed to build them and
//! finite verifiers that check the construction.
//!
//! * [`group`]: exact arithmetic in `⊕ Z(p^∞) ⊕ (Z/2)^s ⊕ F^r`.
//! * [`presentation`]: Smith normal form and canonical decompositions.
//! * [`embedding`]: a 4-free finitely generated group inside its ambient.
//! * [`colouring`]: the three-layer product colouring.
//! * [`verifier`]: sweeps over finite windows and the order-4 demo.
//! * [`sumset`]: exhaustive searches in small finite groups.

pub mod colouring;
pub mod embedding;
pub mod group;
pub mod presentation;
pub mod sumset;
pub mod verifier;

pub use colouring::{
    colour, halve, is_halvable, pi_projection, Colour, ColouringError, Layer, LayerMask,
};
pub use embedding::{EmbeddingError, EmbeddingMap};
pub use group::{
    AmbientElement, AmbientSignature, FreeMode, GroupError, Order, Profile, PruferCoord, Support,
};
pub use presentation::{
    element_order_in, has_order_four, smith_normal_form, CanonicalDecomposition, IntMatrix,
    Presentation, PresentationError, PrimePower, SnfResult,
};
pub use sumset::{
    all_colourings_forced, find_mono_pair_sumset, min_colours_avoiding, ColouringTable,
    FiniteGroupSpec, MinColours, SearchError, Verdict,
};
pub use verifier::{
    check_coset_uniqueness, enumerate_sample, find_mono_triples, order4_obstruction_demo,
    SampleMode, SampleSpec, SweepOptions, TripleReport, VerifyError,
};
