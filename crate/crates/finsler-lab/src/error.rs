use thiserror::Error;

/// Failure modes of jet evaluation and the checks built on top of it.
///
/// `Config` maps to CLI exit code 2, everything else raised during
/// evaluation maps to exit code 3. A finished check that merely fails its
/// tolerance is not an `Error`; it is reported as `pass = false`.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point outside the metric's domain: {what}")]
    Domain { what: String },

    #[error(
        "truncation budget exhausted: requested base order {needed_h} / vertical order \
         {needed_v}, but the jet is only valid to ({have_h}, {have_v})"
    )]
    Budget {
        needed_h: u8,
        needed_v: u8,
        have_h: u8,
        have_v: u8,
    },

    #[error("non-finite jet coefficient at multi-index {index}")]
    NonFinite { index: String },

    #[error(
        "fundamental tensor numerically degenerate: condition number {cond:.3e} exceeds {limit:.1e}"
    )]
    Degenerate { cond: f64, limit: f64 },

    #[error("|L| = {l:.3e} under the division floor; the point is too close to the null cone")]
    NearCone { l: f64 },

    #[error("geodesic left the chart at t = {t:.6}")]
    ChartExit { t: f64 },

    #[error("step size collapsed at t = {t:.6} ({detail})")]
    StepCollapse { t: f64, detail: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("evaluation error: {0}")]
    Eval(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            _ => 3,
        }
    }
}
