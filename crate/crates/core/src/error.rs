use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HausError {
    #[error("tail not integrable: {0}")]
    TailNotIntegrable(String),

    #[error("divergent integral: {0}")]
    DivergentIntegral(String),

    /// Carries the continuous limit at x = 0 when one exists.
    #[error("zero argument (limit value {limit:?})")]
    ZeroArgument { limit: Option<f64> },

    #[error("invalid alpha {0}: must be positive")]
    InvalidAlpha(f64),

    #[error("oscillatory tail did not converge after {terms} terms (last change {last_change:e})")]
    OscillatoryTailNotConverged { terms: usize, last_change: f64 },

    #[error("kernel mass is {0}, expected 1")]
    KernelMassNotOne(f64),

    #[error("unknown class: {0}")]
    UnknownClass(String),

    #[error("Dini integral diverges: {0}")]
    DiniDivergent(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("errors at numerical floor; slope undefined")]
    DegenerateZeroError,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, HausError>;

/// Collects the first error raised inside an integrand closure, which must
/// itself return a plain number.
#[derive(Default)]
pub(crate) struct ErrSlot(std::cell::RefCell<Option<HausError>>);

impl ErrSlot {
    pub(crate) fn ok(&self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    }

    pub(crate) fn is_set(&self) -> bool {
        self.0.borrow().is_some()
    }

    pub(crate) fn finish<T>(self, v: T) -> Result<T> {
        match self.0.into_inner() {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }
}
