use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real field used by the geometry layer and the numeric kernels.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts a finite `f64` literal.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn f64(self) -> f64 {
        self.to_f64().expect("finite value")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::of(0.5)
    }

    /// Remainder in [0, m) for m > 0.
    #[inline]
    fn modulo(self, m: Self) -> Self {
        let r = self - m * (self / m).floor();
        if r >= m || r < Self::zero() {
            Self::zero()
        } else {
            r
        }
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
