use thiserror::Error;

/// Errors produced by the scheduling library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid robot spec `{id}`: {reason}")]
    InvalidSpec { id: String, reason: String },

    #[error("offset {offset} out of range for robot `{id}` (cycle time {cycle})")]
    OffsetOutOfRange { id: String, offset: u64, cycle: u64 },

    #[error("unknown robot id `{0}`")]
    UnknownRobot(String),

    #[error("state vector is not one-hot")]
    NotOneHot,

    #[error("horizon {horizon} is not a multiple of cycle time {cycle} (robot `{id}`)")]
    NotCommonMultiple { id: String, cycle: u64, horizon: u64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("selection length {got} does not match fleet size {want}")]
    SelectionMismatch { got: usize, want: usize },

    #[error("LCM exceeds the 64-bit integer range")]
    HorizonOverflow,

    #[error("candidate cycle-time interval for robot `{0}` is empty")]
    EmptyCandidateInterval(String),

    #[error("search exceeded the work budget of {budget} (result bounded in [{lower}, {upper}])")]
    WorkBudgetExceeded { budget: u64, lower: u64, upper: u64 },

    #[error("oracle cap exceeded: instance size {size} > cap {cap}")]
    OracleCap { size: u128, cap: u128 },

    #[error("residual capacity negative at slot {slot}: prior schedule infeasible")]
    InfeasibleResidual { slot: u64 },

    #[error("no feasible replan offset for robot `{0}`")]
    ReplanInfeasible(String),

    #[error("offset {offset} is not aligned to job length {length}, or lies outside the window")]
    MisalignedOffset { offset: u64, length: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
