pub mod audit;
pub mod densmat;
pub mod drude;
pub mod effective;
pub mod error;
pub mod figures;
pub mod oracles;
pub mod quadrature;
pub mod selftest;
pub mod specfun;

pub use error::{Error, Result};
