use num_traits::{One, Zero};
use std::fmt::Debug;

use super::rational::Q;

/// Coefficient ring of a [`Series`](super::series::Series).
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync {
    fn zero_elem() -> Self;
    fn one_elem() -> Self;
    fn from_q(x: Q) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn add_assign(&mut self, o: &Self) {
        *self = Coeff::add(self, o);
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        let p = Coeff::mul(a, b);
        self.add_assign(&p);
    }
}

impl Coeff for Q {
    fn zero_elem() -> Self {
        <Q as Zero>::zero()
    }
    fn one_elem() -> Self {
        <Q as One>::one()
    }
    fn from_q(x: Q) -> Self {
        x
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
}
