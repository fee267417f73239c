//! Order-fixed reductions: pairwise summation and Neumaier compensation.

use num_complex::Complex64;

use crate::scalar::Scalar;

const PAIRWISE_LEAF: usize = 32;

/// Pairwise (cascade) summation; the tree shape depends only on the length.
pub fn pairwise<T: Scalar>(xs: &[T]) -> T {
    if xs.len() <= PAIRWISE_LEAF {
        return xs.iter().fold(T::zero(), |a, &b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise(&xs[..mid]) + pairwise(&xs[mid..])
}

pub fn pairwise_complex(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= PAIRWISE_LEAF {
        return xs.iter().fold(Complex64::new(0.0, 0.0), |a, &b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise_complex(&xs[..mid]) + pairwise_complex(&xs[mid..])
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Compensated<T> {
    sum: T,
    carry: T,
}

impl<T: Scalar> Compensated<T> {
    pub fn new() -> Self {
        Compensated { sum: T::zero(), carry: T::zero() }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

impl<T: Scalar> FromIterator<T> for Compensated<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut c = Compensated::new();
        for x in iter {
            c.add(x);
        }
        c
    }
}

pub fn compensated<T: Scalar>(xs: impl IntoIterator<Item = T>) -> T {
    xs.into_iter().collect::<Compensated<T>>().value()
}
