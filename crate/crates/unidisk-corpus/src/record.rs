//! Serialized form of corpus records: named maps plus expected assertions.

use serde::{Deserialize, Serialize};
use unidisk_core::moebius::{Complex, Error, Moebius, SpherePoint};

/// Coefficient quadruple of a linear fractional map, complex entries as
/// `[re, im]` pairs.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Quad {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub c: [f64; 2],
    pub d: [f64; 2],
}

fn pair(p: [f64; 2]) -> Complex {
    Complex::new(p[0], p[1])
}

impl Quad {
    /// Build the validated map; fails on a degenerate matrix.
    pub fn to_moebius(self) -> Result<Moebius, Error> {
        Moebius::new(pair(self.a), pair(self.b), pair(self.c), pair(self.d))
    }
}

/// A map slot in a record: either inline coefficients or the name of a
/// bundled non-linear-fractional evaluator.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpec {
    /// Registry name such as `example_2_2_exp`.
    Named(String),
    /// Inline linear fractional coefficients.
    Lft(Quad),
}

/// A point of the sphere: `[re, im]` or the string `"inf"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Finite([f64; 2]),
    Marker(String),
}

impl PointSpec {
    /// Convert to a sphere point, rejecting any marker other than `"inf"`.
    pub fn to_sphere(&self) -> Result<SpherePoint, String> {
        match self {
            PointSpec::Finite(p) => Ok(SpherePoint::finite(pair(*p))),
            PointSpec::Marker(s) if s == "inf" => Ok(SpherePoint::infinity()),
            PointSpec::Marker(s) => Err(format!("unknown point marker \"{s}\"")),
        }
    }
}

/// One expected assertion, dispatched to exactly one library operation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Check {
    /// `classify(map)` matches the given tag and optional data.
    Classify {
        map: String,
        tag: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dw: Option<PointSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        multiplier: Option<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        boundary_case: Option<bool>,
    },
    /// `self_map_report(map)` verdict and optional boundary-contact flag.
    SelfMap {
        map: String,
        is_self_map: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        boundary_contact: Option<bool>,
    },
    /// `fixed_points(map)` equals the given set (chordal match, any order).
    FixedPoints { map: String, points: Vec<PointSpec> },
    /// `residual_on_grid(f, phi, psi)` is at most `bound`.
    ResidualLe {
        f: String,
        phi: String,
        psi: String,
        bound: f64,
    },
    /// `proj_distance(f . phi, psi . f)` is at most `bound` (all three linear
    /// fractional).
    DirectEquationLe {
        f: String,
        phi: String,
        psi: String,
        bound: f64,
    },
    /// `check_conditions(f, phi, psi)` verdict and optional reason fragment.
    Conditions {
        f: String,
        phi: String,
        psi: String,
        holds: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reason_contains: Option<String>,
    },
    /// `type_compatible(class(phi), class(psi))` verdict: `possible` or `no`.
    Compatible {
        phi: String,
        psi: String,
        verdict: String,
    },
    /// `cayley_conjugate(map)` has the given dilation and translation.
    Cayley {
        map: String,
        dilation: f64,
        translation: [f64; 2],
    },
    /// `rotation_order` of the multiplier of `map`.
    RotationOrder { map: String, order: u32 },
    /// `roots_elliptic(map, n)` has exactly `count` members, optionally the
    /// listed ones (projective match, any order).
    RootsCount {
        map: String,
        n: u32,
        count: usize,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        roots: Vec<Quad>,
    },
    /// `embeddable(map, depth, default budget)` verdict.
    Embed {
        map: String,
        depth: u32,
        kind: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        boundary: Option<bool>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        prune_depth: Option<u32>,
    },
    /// `step_class(map, from, defaults)` verdict: `zero_step` or
    /// `positive_step`.
    Step {
        map: String,
        from: [f64; 2],
        class: String,
    },
    /// Radial behaviour of a map at a boundary or interior point:
    /// `derivative_zero`, `derivative_infinite`, or `no_radial_limit`.
    BoundaryProbe {
        map: String,
        at: [f64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        target: Option<[f64; 2]>,
        behavior: String,
    },
    /// `solve_family(phi, psi)` kind, optionally sampling verified members.
    Family {
        phi: String,
        psi: String,
        kind: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sample_count: Option<usize>,
    },
    /// `identity_roots(p, lambda, n)` yields an elliptic automorphism whose
    /// n-th iterate is the identity.
    IdentityRoot {
        p: [f64; 2],
        lambda: [f64; 2],
        n: u32,
    },
}

impl Check {
    /// Names of the maps this check reads from the record's `maps` table.
    pub fn map_names(&self) -> Vec<&str> {
        match self {
            Check::Classify { map, .. }
            | Check::SelfMap { map, .. }
            | Check::FixedPoints { map, .. }
            | Check::Cayley { map, .. }
            | Check::RotationOrder { map, .. }
            | Check::RootsCount { map, .. }
            | Check::Embed { map, .. }
            | Check::Step { map, .. }
            | Check::BoundaryProbe { map, .. } => vec![map],
            Check::ResidualLe { f, phi, psi, .. }
            | Check::DirectEquationLe { f, phi, psi, .. }
            | Check::Conditions { f, phi, psi, .. } => vec![f, phi, psi],
            Check::Compatible { phi, psi, .. } | Check::Family { phi, psi, .. } => {
                vec![phi, psi]
            }
            Check::IdentityRoot { .. } => vec![],
        }
    }
}

/// One corpus record: a set of named maps and the assertions about them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExampleRecord {
    /// Stable identifier, e.g. `example_3_1`.
    pub id: String,
    /// What the record demonstrates, in plain language.
    pub note: String,
    /// Named maps referenced by the checks; keys are conventionally `f`,
    /// `phi`, `psi`.
    #[serde(default)]
    pub maps: std::collections::BTreeMap<String, MapSpec>,
    /// The assertions replayed by the runner.
    pub expected: Vec<Check>,
}

pub(crate) fn complex_of(p: [f64; 2]) -> Complex {
    pair(p)
}
