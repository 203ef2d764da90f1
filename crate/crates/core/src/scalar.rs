use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar the numeric core is generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable in every Scalar")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count is representable in every Scalar")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Convergence floor for iterative routines: never tighter than the
    /// type's own resolution.
    #[inline]
    fn tolerance(requested: f64) -> Self {
        Self::of(requested).max(Self::epsilon() * Self::of(8.0))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `-x ln(x / total)` with the `0 ln 0 = 0` convention.
#[inline]
pub(crate) fn neg_x_log<T: Scalar>(x: T, total: T) -> T {
    if x <= T::zero() || total <= T::zero() {
        T::zero()
    } else {
        -x * (x / total).ln()
    }
}
