//! Exact arithmetic: prime fields, their extensions, and the rationals.

mod binomial;
mod fq;
pub mod linalg;
mod rational;

use std::fmt::Debug;
use std::hash::Hash;

use num_rational::BigRational;
use rand::RngCore;

pub use binomial::{gen_binomial, gen_binomial_mod};
pub use fq::{embedding, ext_field_create, is_prime, Embedding, Fq};
pub use rational::{format_rational, parse_rational, Q};

/// A field context. Elements are plain values; every operation goes through
/// the context so that elements of extension fields can stay `Copy`-sized.
// Conversions take `&self` because the context carries the modulus.
#[allow(clippy::wrong_self_convention)]
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// `None` when the denominator is not invertible in the field.
    fn from_rational(&self, r: &BigRational) -> Option<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem;
    /// Canonical JSON form: decimal string, list of decimal strings, or "num/den".
    fn to_json(&self, a: &Self::Elem) -> serde_json::Value;
    /// Short human-readable form, used in polynomial printing.
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}
