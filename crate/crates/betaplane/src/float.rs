//! Generic scalar abstraction: every floating-point quantity in the library is
//! parameterised over [`Real`], so the whole spectral core runs in `f32` or `f64`.
//! Concrete aliases live at the crate root.

use num_complex::Complex;

/// Floating-point scalar usable throughout the spectral core.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::NumAssign
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`, used to inject lattice geometry and
    /// model parameters into a generic computation.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 -> Real conversion")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a generic scalar.
pub type C<T> = Complex<T>;

/// `a + bi` without spelling out `Complex::new` everywhere.
pub fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}
