//! Numerical integration engines shared by the operator, Fourier and bound modules.

pub mod adaptive;
pub mod gauss;
pub mod oscillatory;

pub use adaptive::{integrate, integrate_kernel_side, integrate_range, QuadResult};
pub use gauss::{gauss_legendre, GaussRule};
pub use oscillatory::{filon, sinc_integral, sinc_integral_with, spherical_bessel, OscResult, SincHints, SincResult};
