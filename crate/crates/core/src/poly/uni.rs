use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exact_arith::Field;

/// Dense univariate polynomial, coefficients low-to-high, no trailing zeros.
#[derive(Clone)]
pub struct UniPoly<F: Field> {
    field: F,
    c: Vec<F::Elem>,
}

impl<F: Field> PartialEq for UniPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}

impl<F: Field> Eq for UniPoly<F> {}

impl<F: Field> std::hash::Hash for UniPoly<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl<F: Field> fmt::Debug for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var("x"))
    }
}

impl<F: Field> UniPoly<F> {
    pub fn new(field: &F, mut c: Vec<F::Elem>) -> Self {
        while c.last().is_some_and(|e| field.is_zero(e)) {
            c.pop();
        }
        UniPoly { field: field.clone(), c }
    }

    pub fn from_i64s(field: &F, c: &[i64]) -> Self {
        Self::new(field, c.iter().map(|&v| field.from_i64(v)).collect())
    }

    pub fn zero(field: &F) -> Self {
        UniPoly { field: field.clone(), c: Vec::new() }
    }

    pub fn one(field: &F) -> Self {
        Self::constant(field, field.one())
    }

    pub fn x(field: &F) -> Self {
        Self::monomial(field, field.one(), 1)
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    pub fn monomial(field: &F, c: F::Elem, n: usize) -> Self {
        let mut v = vec![field.zero(); n + 1];
        v[n] = c;
        Self::new(field, v)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.c
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.c.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with -1 for zero.
    pub fn degree(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.field.is_one(&self.c[0])
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn lead(&self) -> Option<&F::Elem> {
        self.c.last()
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for c in self.c.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        if f.is_zero(s) {
            return Self::zero(f);
        }
        Self::new(f, self.c.iter().map(|c| f.mul(c, s)).collect())
    }

    /// Multiply by x^n.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![self.field.zero(); n];
        v.extend(self.c.iter().cloned());
        UniPoly { field: self.field.clone(), c: v }
    }

    /// Keep the terms of degree < n.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(&self.field, self.c.iter().take(n).cloned().collect())
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(l) => {
                let inv = self.field.inv(l).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        Self::new(f, self.c.iter().enumerate().skip(1).map(|(i, c)| f.mul(c, &f.from_i64(i as i64))).collect())
    }

    pub fn add_poly(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.c.len().max(other.c.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.c.get(i), other.c.get(i)) {
                (Some(a), Some(b)) => f.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::new(f, v)
    }

    pub fn sub_poly(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.c.len().max(other.c.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.c.get(i), other.c.get(i)) {
                (Some(a), Some(b)) => f.sub(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => f.neg(b),
                (None, None) => unreachable!(),
            });
        }
        Self::new(f, v)
    }

    pub fn mul_poly(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut v = vec![f.zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                v[i + j] = f.add(&v[i + j], &f.mul(a, b));
            }
        }
        Self::new(f, v)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division; errors on division by the zero polynomial.
    pub fn divrem(&self, v: &Self) -> Result<(Self, Self)> {
        let f = &self.field;
        let Some(dv) = v.deg() else {
            return Err(Error::Invalid("division by the zero polynomial".into()));
        };
        if self.c.len() <= dv {
            return Ok((Self::zero(f), self.clone()));
        }
        let inv_lead = f.inv(v.lead().unwrap()).expect("nonzero lead");
        let mut r = self.c.clone();
        let mut q = vec![f.zero(); r.len() - dv];
        for i in (0..q.len()).rev() {
            let c = f.mul(&r[i + dv], &inv_lead);
            if f.is_zero(&c) {
                continue;
            }
            for (j, vc) in v.c.iter().enumerate() {
                r[i + j] = f.sub(&r[i + j], &f.mul(&c, vc));
            }
            q[i] = c;
        }
        r.truncate(dv);
        Ok((Self::new(f, q), Self::new(f, r)))
    }

    pub fn rem(&self, v: &Self) -> Self {
        self.divrem(v).expect("nonzero modulus").1
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, v: &Self) -> Self {
        let (q, r) = self.divrem(v).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn divides(&self, u: &Self) -> bool {
        u.divrem(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// (g, s, t) with s*self + t*other = g, g monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).unwrap();
            r0 = r1;
            r1 = r;
            let s = &s0 - &(&q * &s1);
            s0 = s1;
            s1 = s;
            let t = &t0 - &(&q * &t1);
            t0 = t1;
            t1 = t;
        }
        match r0.lead().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = f.inv(&l).unwrap();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// self^e mod m.
    pub fn powmod(&self, e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(&self.field).rem(m);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(m);
            }
        }
        acc
    }

    /// Apply a coefficient map into another field.
    pub fn map_field<G: Field>(&self, g: &G, map: impl Fn(&F::Elem) -> G::Elem) -> UniPoly<G> {
        UniPoly::new(g, self.c.iter().map(map).collect())
    }

    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let mut parts = Vec::new();
        for (i, c) in self.c.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let cs = f.fmt_elem(c);
            let term = match (i, f.is_one(c)) {
                (0, _) => cs,
                (1, true) => var.to_string(),
                (1, false) => format!("{cs}*{var}"),
                (_, true) => format!("{var}^{i}"),
                (_, false) => format!("{cs}*{var}^{i}"),
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}

impl<F: Field> Add for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn add(self, rhs: Self) -> UniPoly<F> {
        self.add_poly(rhs)
    }
}

impl<F: Field> Sub for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn sub(self, rhs: Self) -> UniPoly<F> {
        self.sub_poly(rhs)
    }
}

impl<F: Field> Mul for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn mul(self, rhs: Self) -> UniPoly<F> {
        self.mul_poly(rhs)
    }
}

impl<F: Field> Neg for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn neg(self) -> UniPoly<F> {
        let f = &self.field;
        UniPoly::new(f, self.c.iter().map(|c| f.neg(c)).collect())
    }
}
