//! Named numerical tolerances used across the crate.
//!
//! Every comparison against an epsilon in this crate goes through one of these
//! constants so the tolerance policy is auditable in one place. Margins and
//! discriminants are always computed on determinant-normalized coefficients,
//! which makes each threshold scale-free.

/// A coefficient matrix is degenerate when `|ad - bc|` is at most this factor
/// times the square of the largest coefficient magnitude.
pub const DET_DEGENERACY_REL: f64 = 1e-12;

/// Two maps are projectively equal when their normalized coefficients agree
/// to within this bound; also the identity-detection cutoff.
pub const PROJ_EQ: f64 = 1e-12;

/// Slack for the self-map margin tests: a map counts as a self-map when the
/// normalized margin is at least `-SELF_MAP_MARGIN`.
pub const SELF_MAP_MARGIN: f64 = 1e-9;

/// A unit-determinant map is parabolic when `|tr^2 - 4|` is within this band.
/// Squaring the trace keeps float noise from synthesized parabolic maps well
/// inside the band (~1e-13) while hyperbolic/elliptic maps with multiplier at
/// least 1e-2 away from 1 land at least ~1e-4 outside it.
pub const CLASS_DISC: f64 = 1e-11;

/// A fixed point is interior when `|z| < 1 - INTERIOR_BAND`.
pub const INTERIOR_BAND: f64 = 1e-9;

/// A parabolic map is an automorphism when its boundary defect
/// `Re(p * phi''(p))` is within this band of zero.
pub const DEFECT_ZERO: f64 = 1e-9;

/// Equality band for the automorphism criterion quantities
/// `|c|^2 + |d|^2 - |a|^2 - |b|^2` and `|a b~ - c d~|` (unit determinant).
pub const AUT_EQUALITY: f64 = 1e-9;

/// Multiplier comparisons (intertwining conditions, rotation order) use this
/// absolute band on the complex difference.
pub const MULTIPLIER_EQ: f64 = 1e-9;

/// Fixed-point set matching compares points in the chordal metric on the
/// sphere against this bound.
pub const FIXED_SET_CHORDAL: f64 = 1e-8;

/// The parabolic second-derivative balance `f'(p) psi''(q) = phi''(p)` is
/// accepted within this bound relative to `max(1, |phi''(p)|)`.
pub const SECOND_DERIV_REL: f64 = 1e-8;

/// Default bound for pointwise intertwining residuals on the sample grid.
pub const RESIDUAL_DEFAULT: f64 = 1e-10;

/// An elliptic n-th root candidate is admitted when its self-map inequality
/// holds with slack at least `-ROOT_ADMIT_SLACK` (admits equality cases).
pub const ROOT_ADMIT_SLACK: f64 = 1e-12;

/// Band half-width for the embedding ratio test. A square-root branch is
/// pruned when its ratio `(1 - |a|)/|1 - a|` falls below the obstruction
/// constant minus this band (the ratio only decreases down a branch, so the
/// prune is final); a branch that survives to full depth is embeddable when
/// its last ratio clears the constant by at least this band, and verdicts
/// that land inside the band are reported as boundary cases.
pub const RATIO_BAND: f64 = 1e-10;

/// Default search depth for the embedding test: branches are followed down
/// to 2^EMBED_MAX_DEPTH-th roots before the surviving ratio is judged.
pub const EMBED_MAX_DEPTH: u32 = 24;

/// Orbits stop early once `1 - |z|` falls below this (the point is at the
/// boundary to machine precision and hyperbolic distances overflow).
pub const ORBIT_BOUNDARY_STOP: f64 = 1e-14;

/// Default step-sequence length for the zero-step dichotomy test.
pub const STEP_COUNT: usize = 256;

/// Default threshold for the zero-step dichotomy test.
pub const STEP_THRESHOLD: f64 = 1e-6;

/// Denominators smaller than this times the coefficient scale raise a pole
/// error instead of evaluating.
pub const POLE_REL: f64 = 1e-14;

/// Default maximum index scanned by `rotation_order`.
pub const ROTATION_ORDER_MAX_N: u32 = 1024;

/// `rotation_order` accepts n as the order when `|lambda^n - 1|` is below this.
pub const ROTATION_ORDER_EPS: f64 = 1e-9;

/// Node budget for the embedding search before reporting inconclusive.
pub const EMBED_NODE_BUDGET: u64 = 1_000_000;
