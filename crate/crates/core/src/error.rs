use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown protocol family `{0}`")]
    UnknownFamily(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Both pump and Stokes vanish, so the mixing angle is undefined.
    #[error("degenerate drive at t = {t}: Omega_0 = 0")]
    DegenerateDrive { t: f64 },

    #[error("support window search failed to bracket for `{family}` (eps_cut = {eps_cut})")]
    WindowBracket { family: &'static str, eps_cut: f64 },

    #[error("integrator failed at t = {t}: {reason}")]
    StepFailure { t: f64, reason: String },

    #[error("non-finite Hamiltonian sample at t = {t}")]
    NonFiniteHamiltonian { t: f64 },

    #[error("population threshold never crossed: {0}")]
    MissingCrossing(&'static str),

    #[error("robustness region is empty: nominal cell below threshold {threshold}")]
    EmptyRegion { threshold: f64 },

    #[error("no feasible grid point: {0}")]
    Infeasible(String),

    #[error("unknown figure `{0}`")]
    UnknownFigure(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
