//! Linear fractional self-maps of the unit disk: classification, dynamics,
//! intertwining, iteration roots, and one-parameter embedding.

pub mod classify;
pub mod dynamics;
pub mod intertwine;
pub mod moebius;
pub mod roots;
pub mod sample;
pub mod tol;

pub use classify::{
    cayley_conjugate, cayley_matrix, classify, from_halfplane, parabolic_defect, rotation_order,
    self_map_report, ClassTag, DiskMapClass, Family, HalfPlaneAffine, SelfMapReport,
};
pub use dynamics::{hyperbolic_distance, orbit, step_class, Orbit, StepClass};
pub use intertwine::{
    check_conditions, parabolic_conformal_derivative, residual, residual_on_grid, sample_grid,
    solve_family, type_compatible, Compatibility, ConditionReport, FamilyKind, SolutionFamily,
    Verdict,
};
pub use moebius::{fmt_complex, Complex, DiskMap, Error, FixedPoints, Jet, Moebius, SpherePoint};
pub use roots::{
    dyadic_element, elliptic_normal_form, embeddable, identity_roots, root_nonelliptic,
    roots_elliptic, EllipticNormalForm, EmbedKind, EmbedVerdict, RootSequence,
};
