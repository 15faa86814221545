use thiserror::Error;

/// Errors produced while building scenarios, validating strategies, or
/// driving the solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value failed validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A configuration file could not be parsed.
    #[error("config parse error: {0}")]
    ConfigParse(String),

    /// A cell holds more users than there are orthogonal subchannels.
    #[error("cell {cell} has {users} users but only {channels} subchannels")]
    CellOverCapacity {
        cell: usize,
        users: usize,
        channels: usize,
    },

    /// A user sits exactly on a base station, so the path-loss gain is
    /// undefined.
    #[error("user {user} is coincident with base station {bs}; channel gain is undefined")]
    CoincidentPositions { user: usize, bs: usize },

    /// A strategy violates the feasible region for its user.
    #[error("infeasible strategy for user {user}: {reason}")]
    InfeasibleStrategy { user: usize, reason: String },

    /// Exhaustive enumeration was requested on an instance that is too
    /// large.
    #[error("{users} users exceed the exhaustive-search limit of {limit}; lower the user count or raise the limit")]
    TooManyUsers { users: usize, limit: usize },

    /// An unknown sweep axis name was supplied.
    #[error("unknown sweep axis {0:?} (expected one of: users_per_cell, input_bits, workload_cycles, alpha_t, interference_scale)")]
    UnknownAxis(String),

    /// File I/O while reading configs or writing artifacts.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
