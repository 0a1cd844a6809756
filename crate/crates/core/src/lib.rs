pub mod error;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod sge;
pub mod specfun;
pub mod spectrum;
pub mod verify;
pub mod wavefunction;

pub use error::{Error, Result};
