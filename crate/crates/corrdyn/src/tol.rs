//! Pinned numeric tolerances. Every threshold used by the library and the
//! acceptance suite lives here, not inline at call sites.

/// Relative residual allowed when substituting a branch output back into the
/// defining polynomial relation.
pub const RELATION_RESIDUAL: f64 = 1e-10;

/// Residual required of the polynomial root finder, relative to the
/// coefficient scale of the polynomial.
pub const ROOT_RESIDUAL: f64 = 1e-10;

/// Relative spread allowed between `|w - c|` across the q forward branches
/// (they agree exactly in theory).
pub const MODULUS_SYMMETRY: f64 = 1e-12;

/// Relative mismatch allowed between a reported branch derivative and a
/// central finite difference.
pub const DERIVATIVE_FD_REL: f64 = 1e-6;

/// Tolerance for involution identities (J∘J = id, J(1) = 1, J(a) = a).
pub const INVOLUTION: f64 = 1e-12;

/// Half-width of the band `||λ| - 1| ≤ PARABOLIC_BAND` classified Parabolic.
pub const PARABOLIC_BAND: f64 = 1e-9;

/// Multiplier moduli below this count as exactly zero (Superattracting);
/// fixed points at irrational coordinates leave fp noise of this size.
pub const SUPERATTRACTING_BAND: f64 = 1e-12;

/// Relative size of the Cov discriminant `12 - 3u²` under which the two
/// mating branches are treated as coincident (branch point).
pub const BRANCH_POINT_REL: f64 = 1e-12;

/// Newton convergence target for periodic-point continuation (contractual).
pub const NEWTON_RESIDUAL: f64 = 1e-10;

/// Residual to which Newton keeps polishing once the contractual target is
/// met; keeps finite-difference quotients of continued points usable.
pub const NEWTON_POLISH: f64 = 1e-15;

/// Maximum number of parameter-step halvings before continuation gives up.
pub const MAX_STEP_HALVINGS: u32 = 20;

/// Two cycle points closer than this during continuation are reported as a
/// collision (branch point of the motion).
pub const COLLISION_DIST: f64 = 1e-8;

/// Deduplication resolution for point sets (Hutchinson samples, ω-limits).
pub const POINT_DEDUP: f64 = 1e-12;

/// Distance used by `basin_check` to accept an ω-limit point as lying on the
/// attractor.
pub const BASIN_ATTRACTOR_DIST: f64 = 1e-3;

/// Radius of the disk around the parabolic point P inside which limit-set
/// chain membership is granted (default; a CLI knob).
pub const NEAR_P_BUFFER: f64 = 1e-3;

/// klein_check passes iff every uncovered sample is within this chordal
/// distance of P.
pub const KLEIN_UNCOVERED_MAX: f64 = 1e-3;

/// Minimum angle (degrees) between each fundamental-domain boundary and the
/// attracting-repelling axis at P.
pub const TRANSVERSALITY_DEG: f64 = 10.0;

/// Fraction of Unknown pixels above which classify_set refuses to run.
pub const UNKNOWN_FRACTION_MAX: f64 = 0.01;

/// CantorLike verdict: at least this many Inside components ...
pub const CANTOR_MIN_COMPONENTS: usize = 20;
/// ... each with pixel diameter at most this.
pub const CANTOR_MAX_DIAMETER_PX: u32 = 3;

/// Default orbit-tree node budget per query.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// Default orbit-tree depth.
pub const DEFAULT_MAX_DEPTH: u32 = 60;
