use thiserror::Error;

use crate::group::Element;

/// Errors produced by the group and operator machinery.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("invalid group input: {0}")]
    InvalidGroup(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resource cap exceeded: {what} ({value} > {cap})")]
    ResourceCap { what: &'static str, value: u64, cap: u64 },

    #[error("{0} is out of desk scale: {1}")]
    OutOfDeskScale(String, String),

    #[error("unknown catalog id `{0}`")]
    UnknownGroup(String),

    #[error("not a Rota-Baxter operator: identity fails at g = {g}, h = {h}")]
    NotRotaBaxter { g: Element, h: Element },

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("{0} is not normal in the requested subgroup")]
    NotNormal(String),

    #[error("not a homomorphism: fails at ({0}, {1})")]
    NotHomomorphism(Element, Element),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("property violated: {clause} (witness {witness:?})")]
    Property { clause: String, witness: Vec<Element> },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn cap(what: &'static str, value: usize, cap: usize) -> Self {
        Error::ResourceCap { what, value: value as u64, cap: cap as u64 }
    }

    /// True for resource-cap and out-of-scale errors.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::ResourceCap { .. } | Error::OutOfDeskScale(..))
    }
}
