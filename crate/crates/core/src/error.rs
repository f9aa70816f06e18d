use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A single parameter outside its domain.
    #[error("parameter `{field}` out of domain: {reason}")]
    Domain { field: &'static str, reason: String },

    /// Every violated field of a compound specification.
    #[error("invalid specification: {}", .0.join("; "))]
    Validation(Vec<String>),

    /// `1 - M = 0` in the sideband relation.
    #[error("degenerate sideband relation: 1 - M = 0")]
    DegenerateRelation,

    /// `Re(n_r) = 0` (or `n_r = 0` in complex mode) in the drag formula.
    #[error("singular refractive index in light drag: n_r = {0}")]
    SingularIndex(String),

    #[error("unknown figure preset `{0}` (valid: fig2, fig3, fig4, fig5, fig6, fig7, fig8)")]
    UnknownFigure(String),

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("series has {0} points, at least 3 are required")]
    TooFewPoints(usize),
}

impl Error {
    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            field,
            reason: reason.into(),
        }
    }

    /// True for errors caused by invalid user input rather than a numerical
    /// singularity.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::Validation(_)
                | Error::UnknownFigure(_)
                | Error::UnknownColumn(_)
                | Error::TooFewPoints(_)
        )
    }
}
