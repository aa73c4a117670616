use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain the formula is defined on.
    #[error("parameter `{name}` out of domain: {value}")]
    Domain { name: &'static str, value: f64 },

    /// A rate was requested whose denominator (accepted-event probability) vanishes.
    #[error("undefined rate: {0} is zero")]
    UndefinedRate(&'static str),

    #[error("no root in bracket: {0}")]
    Infeasible(&'static str),

    /// A boundary was queried outside the span of its precomputed curve.
    #[error("query {value} outside boundary span [{lo}, {hi}]")]
    OutOfSpan { value: f64, lo: f64, hi: f64 },

    #[error("boundary curve has no feasible points")]
    DegenerateCurve,

    #[error("series did not reach tail tolerance within {0} terms")]
    SeriesNotConverged(usize),
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain { name, value })
    }
}

pub(crate) fn check_nonnegative(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { name, value })
    }
}
