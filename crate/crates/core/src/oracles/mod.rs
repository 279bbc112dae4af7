//! Independent brute-force routes to the closed forms.

pub mod eigencheck;
pub mod fdt;
pub mod finite_difference;
pub mod matsubara;
pub mod rho_quadrature;
pub mod star_bath;

pub use eigencheck::eigencheck_quadrature;
pub use fdt::{fdt_quadrature_moments, FdtSpec};
pub use finite_difference::{finite_difference, Derivative, Step};
pub use matsubara::matsubara_moments;
pub use rho_quadrature::{rho_block_quadrature, rho_element_quadrature};
pub use star_bath::{star_bath_moments, NormalModes, StarBath};
