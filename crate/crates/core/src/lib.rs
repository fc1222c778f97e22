//! Tripartite boxes with binary inputs and outputs: constructing the GHZ box
//! and related one-way-signaling families, wiring parties 2 and 3 together,
//! CHSH evaluation, and certified membership in the bilocality hierarchy
//! (FL, NSBL, TOBL, the asymmetric one-way classes, their union and hull,
//! BL and NS).

pub mod bell;
pub mod classify;
pub mod constructors;
pub mod error;
pub mod format;
pub mod lp;
pub mod scan;
pub mod tensor;
pub mod wiring;

pub use bell::{chsh_max, chsh_value, correlator, ChshVariant};
pub use classify::{
    classify_full, enumerate_vertices, membership, tobl_membership, ClassResult,
    ClassificationReport, HierarchyClass, VertexSet,
};
pub use constructors::{
    ghz_box, noise_box, p_eps_alpha, p_eps_left, p_eps_right, pr_box, BitFn, EpsParams,
    MeasurementAssignment, Observable, PairFn, PrVariant, Signaling,
};
pub use error::{Error, Result};
pub use format::{deserialize, serialize, AnyBox};
pub use lp::{MembershipResult, Verdict, Witness, DEFAULT_TOL};
pub use tensor::{make_box3, mix, no_signaling_check, Box1, Box2, Box3, NsReport, ProbTable};
pub use wiring::{wire_2to3, wire_3to2, wire_general, Mover, WiringSpec};
