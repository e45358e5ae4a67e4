use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input violates the precondition of the formula being evaluated.
    #[error("{op}: requires {requirement} (got {name} = {value})")]
    Domain {
        op: &'static str,
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// A conditioning event with zero probability under the model.
    #[error("{op}: impossible observation: {reason}")]
    ImpossibleObservation { op: &'static str, reason: String },

    #[error("{0}: grid is empty")]
    EmptyGrid(&'static str),

    #[error("invalid dataset: {0}")]
    Dataset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by invalid user input rather than the runtime
    /// environment.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. } | Error::ImpossibleObservation { .. } | Error::EmptyGrid(_)
        )
    }
}

/// Returns a [`Error::Domain`] unless `ok` holds.
pub(crate) fn ensure(
    ok: bool,
    op: &'static str,
    name: &'static str,
    value: f64,
    requirement: &'static str,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            op,
            name,
            value,
            requirement,
        })
    }
}
