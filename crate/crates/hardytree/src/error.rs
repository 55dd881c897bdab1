use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate parent for vertex {0}")]
    DuplicateParent(usize),
    #[error("edge list contains a cycle through vertex {0}")]
    CycleDetected(usize),
    #[error("vertex {0} is not reachable from the root")]
    Disconnected(usize),
    #[error("vertex ids must be dense 0..n, found id {found} with {count} vertices")]
    NonDenseIds { found: usize, count: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("root {0} listed with a parent")]
    RootHasParent(usize),

    #[error("subtree below vertex {base} has {size} vertices, exceeding the enumeration cap {cap}")]
    EnumerationCap { base: usize, size: usize, cap: usize },
    #[error("admissible family below vertex {base} has {count} members, exceeding the hard cap {cap}")]
    EnumerationCount { base: usize, count: u128, cap: u128 },
    #[error("invalid subtree selection: {0}")]
    InvalidSelection(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("level profile is not admissible at step {j}: floor(2^(psi(j)-psi*(j-1))) = 0")]
    PsiStarUnderflow { j: u32 },
    #[error("regular tree would have {0} vertices, exceeding the cap {1}")]
    RegularTreeCap(u128, u128),

    #[error("tree has {size} vertices, exceeding the oracle cap {cap}")]
    TreeTooLarge { size: usize, cap: usize },
    #[error("weights must be strictly positive (vertex {0})")]
    NonPositiveWeight(usize),
    #[error("weights are not constant on level {level}: {a} vs {b}")]
    WeightsNotLevelConstant { level: usize, a: f64, b: f64 },

    #[error("domain mask is empty")]
    EmptyDomain,
    #[error("domain mask is not face-connected")]
    DisconnectedDomain,
    #[error("whitney decomposition is empty at max level {0}; domain too thin")]
    EmptyWhitney(u32),
    #[error("accepted whitney family is not face-connected ({uncovered} cells uncovered)")]
    DisconnectedWhitney { uncovered: usize },
    #[error("boundary generator does not lie on the domain boundary: {0}")]
    GammaOffBoundary(String),
    #[error("block scale {0} below the band range; increase the calibration constant")]
    BlockScaleUnderflow(u32),
    #[error("band width {m} is not a positive multiple of the measured follower gap {s_bar}")]
    BandWidthNotMultiple { m: u32, s_bar: u32 },

    #[error("configuration is admissible; the unboundedness witness only applies outside the admissible range")]
    AdmissibleConfig,
    #[error("optimization did not converge: {0}")]
    NoConvergence(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
