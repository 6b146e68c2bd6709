use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("degenerate Hamiltonian family: {0}")]
    DegenerateFamily(String),

    #[error("degeneracy on path at sample {sample}: gap {gap:.3e}")]
    DegeneracyOnPath { sample: usize, gap: f64 },

    #[error("point lies within the finite-difference step of a degeneracy (gap {gap:.3e})")]
    SingularPoint { gap: f64 },

    #[error("unknown path `{0}`")]
    UnknownPath(String),

    #[error("SCF did not converge after {iterations} iterations (best residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("SCF failed at path sample {sample} (segment {segment}, tau {tau:.6}): {source}")]
    PathFailure {
        sample: usize,
        segment: usize,
        tau: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(
        "adiabatic resolution failure: step {step} overlap {overlap:.3e} below {threshold}; neighbouring ground states are not connected"
    )]
    Resolution {
        step: usize,
        overlap: f64,
        threshold: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
