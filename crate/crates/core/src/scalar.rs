//! The delay scalar abstraction.
//!
//! Every algorithm in this crate only adds delays, compares them and scales
//! them by small integer counts, so any ordered additive monoid works: the
//! unsigned integers used by the file formats, `f64` for experimentation, or
//! exact rationals.

use std::fmt::{Debug, Display};
use std::ops::Add;

use num_traits::Zero;

/// A value usable as an arc or node delay.
///
/// Implemented automatically for every type that satisfies the bounds.
pub trait DelayScalar: Copy + PartialOrd + Zero + Add<Output = Self> + Debug + Display {
    /// `self` added to itself `count` times (zero for `count == 0`).
    fn times(self, count: usize) -> Self {
        let mut acc = Self::zero();
        let mut base = self;
        let mut k = count;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc + base;
            }
            k >>= 1;
            if k > 0 {
                base = base + base;
            }
        }
        acc
    }

    /// The larger of two values; `self` wins ties (and incomparable pairs).
    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl<T> DelayScalar for T where T: Copy + PartialOrd + Zero + Add<Output = T> + Debug + Display {}
