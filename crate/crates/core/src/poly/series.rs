use std::fmt;

use super::UniPoly;
use crate::error::{Error, Result};
use crate::exact_arith::Field;

/// Truncated Laurent series `t^val * sum c_i t^i + O(t^prec)`.
#[derive(Clone)]
pub struct PowerSeries<F: Field> {
    field: F,
    val: i64,
    c: Vec<F::Elem>,
    prec: i64,
}

impl<F: Field> fmt::Debug for PowerSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(|(i, c)| format!("{}*t^{}", self.field.fmt_elem(c), self.val + i as i64))
            .collect();
        write!(f, "{} + O(t^{})", terms.join(" + "), self.prec)
    }
}

impl<F: Field> PowerSeries<F> {
    pub fn new(field: &F, val: i64, c: Vec<F::Elem>, prec: i64) -> Self {
        let mut s = PowerSeries { field: field.clone(), val, c, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let keep = (self.prec - self.val).max(0) as usize;
        self.c.truncate(keep);
        let lead = self.c.iter().position(|c| !self.field.is_zero(c));
        match lead {
            None => {
                self.c.clear();
                self.val = self.prec;
            }
            Some(k) => {
                self.c.drain(..k);
                self.val += k as i64;
            }
        }
        while self.c.last().is_some_and(|c| self.field.is_zero(c)) {
            self.c.pop();
        }
    }

    pub fn zero(field: &F, prec: i64) -> Self {
        Self::new(field, prec, Vec::new(), prec)
    }

    pub fn constant(field: &F, c: F::Elem, prec: i64) -> Self {
        Self::new(field, 0, vec![c], prec)
    }

    pub fn from_poly(p: &UniPoly<F>, prec: i64) -> Self {
        Self::new(p.field(), 0, p.coeffs().to_vec(), prec)
    }

    /// `t` itself.
    pub fn var(field: &F, prec: i64) -> Self {
        Self::new(field, 1, vec![field.one()], prec)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Order of the first nonzero coefficient, or `None` if the series is
    /// zero up to its precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Coefficient of t^n (zero outside the stored range).
    pub fn coeff(&self, n: i64) -> F::Elem {
        debug_assert!(n < self.prec, "coefficient beyond precision");
        let i = n - self.val;
        if i < 0 {
            self.field.zero()
        } else {
            self.c.get(i as usize).cloned().unwrap_or_else(|| self.field.zero())
        }
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self::new(&self.field, self.val, self.c.clone(), prec.min(self.prec))
    }

    /// Same coefficients with precision reset to `prec`; coefficients
    /// beyond the old precision are taken to be zero.
    pub fn with_prec(&self, prec: i64) -> Self {
        Self::new(&self.field, self.val, self.c.clone(), prec)
    }

    /// Multiply by t^k.
    pub fn shift(&self, k: i64) -> Self {
        Self::new(&self.field, self.val + k, self.c.clone(), self.prec + k)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    fn combine(&self, o: &Self, negate: bool) -> Self {
        let f = &self.field;
        let prec = self.prec.min(o.prec);
        let val = self.val.min(o.val).min(prec);
        let len = (prec - val).max(0) as usize;
        let mut c = vec![f.zero(); len];
        for (i, a) in self.c.iter().enumerate() {
            let j = (self.val - val) as usize + i;
            if j < len {
                c[j] = f.add(&c[j], a);
            }
        }
        for (i, b) in o.c.iter().enumerate() {
            let j = (o.val - val) as usize + i;
            if j < len {
                c[j] = if negate { f.sub(&c[j], b) } else { f.add(&c[j], b) };
            }
        }
        Self::new(f, val, c, prec)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let f = &self.field;
        let val = self.val + o.val;
        let prec = (self.val + o.prec).min(o.val + self.prec);
        if self.c.is_empty() || o.c.is_empty() {
            return Self::zero(f, prec);
        }
        let len = (prec - val).max(0) as usize;
        let mut c = vec![f.zero(); len.min(self.c.len() + o.c.len() - 1)];
        for (i, a) in self.c.iter().enumerate() {
            if i >= c.len() {
                break;
            }
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if i + j >= c.len() {
                    break;
                }
                c[i + j] = f.add(&c[i + j], &f.mul(a, b));
            }
        }
        Self::new(f, val, c, prec)
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        Self::new(f, self.val, self.c.iter().map(|c| f.mul(c, s)).collect(), self.prec)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self::new(f, self.val, self.c.iter().map(|c| f.neg(c)).collect(), self.prec)
    }

    /// Multiplicative inverse; errors when the series is zero to its precision.
    pub fn inv(&self) -> Result<Self> {
        let f = &self.field;
        if self.c.is_empty() {
            return Err(Error::CapExceeded("series vanishes to its precision; cannot invert".into()));
        }
        let rel = (self.prec - self.val) as usize;
        let a0inv = f.inv(&self.c[0]).unwrap();
        let mut b = vec![f.zero(); rel];
        b[0] = a0inv.clone();
        for n in 1..rel {
            let mut s = f.zero();
            for k in 1..=n.min(self.c.len() - 1) {
                s = f.add(&s, &f.mul(&self.c[k], &b[n - k]));
            }
            b[n] = f.neg(&f.mul(&s, &a0inv));
        }
        Ok(Self::new(f, -self.val, b, -self.val + rel as i64))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(&self.field, self.field.one(), i64::MAX / 4);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow((-e) as u64))
        }
    }

    /// Evaluate a polynomial at this series.
    pub fn eval_poly(&self, p: &UniPoly<F>) -> Self {
        let f = &self.field;
        let mut acc = Self::zero(f, self.prec);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self).add(&Self::constant(f, c.clone(), self.prec));
        }
        acc
    }
}

/// Evaluate `sum_k coeffs[k](u) * x^k` at `x = s(u)` where the coefficients
/// are polynomials in the series variable.
pub fn eval_bivariate<F: Field>(coeffs: &[UniPoly<F>], s: &PowerSeries<F>) -> PowerSeries<F> {
    let f = s.field();
    let prec = s.prec();
    let mut acc = PowerSeries::zero(f, prec);
    for c in coeffs.iter().rev() {
        acc = acc.mul(s).add(&PowerSeries::from_poly(c, prec));
    }
    acc
}

/// Solve `F(x, u) = 0` for a power series `x(u)` with `x(0) = center`,
/// where `F = sum_k coeffs[k](u) x^k` and `dF/dx(center, 0) != 0`.
/// The result is correct modulo `u^prec`.
pub fn series_newton_solve<F: Field>(coeffs: &[UniPoly<F>], center: &F::Elem, prec: i64) -> Result<PowerSeries<F>> {
    let f = coeffs
        .iter()
        .find(|c| !c.is_zero())
        .map(|c| c.field().clone())
        .ok_or_else(|| Error::Invalid("zero equation".into()))?;
    let deriv: Vec<UniPoly<F>> = (1..coeffs.len()).map(|k| coeffs[k].scale(&f.from_i64(k as i64))).collect();
    let at0 = |cs: &[UniPoly<F>]| {
        let mut acc = f.zero();
        for c in cs.iter().rev() {
            acc = f.add(&f.mul(&acc, center), &c.coeff(0));
        }
        acc
    };
    if !f.is_zero(&at0(coeffs)) {
        return Err(Error::Invalid("center is not a solution".into()));
    }
    if f.is_zero(&at0(&deriv)) {
        return Err(Error::Invalid("derivative vanishes at the center".into()));
    }
    let mut x = PowerSeries::constant(&f, center.clone(), 1);
    let mut cur = 1i64;
    while cur < prec {
        cur = (2 * cur).min(prec);
        let xs = x.with_prec(cur);
        let value = eval_bivariate(coeffs, &xs);
        let slope = eval_bivariate(&deriv, &xs);
        x = xs.sub(&value.mul(&slope.inv()?));
    }
    Ok(x.truncate(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{Fq, Q};

    #[test]
    fn inverse_times_self_is_one() {
        let f = Fq::prime(7).unwrap();
        let s = PowerSeries::new(&f, -2, vec![3, 1, 4, 1, 5], 10);
        let prod = s.mul(&s.inv().unwrap());
        assert_eq!(prod.valuation(), Some(0));
        assert_eq!(prod.coeff(0), 1);
        for n in 1..prod.prec() {
            assert_eq!(prod.coeff(n), 0);
        }
    }

    #[test]
    fn square_root_relation() {
        // y^2 = x solved for x in u = y: x - u^2 = 0.
        let q = Q;
        let coeffs = vec![UniPoly::from_i64s(&q, &[0, 0, -1]), UniPoly::from_i64s(&q, &[1])];
        let x = series_newton_solve(&coeffs, &q.zero(), 12).unwrap();
        assert_eq!(x.valuation(), Some(2));
        assert!(q.is_one(&x.coeff(2)));
        for n in 3..12 {
            assert!(q.is_zero(&x.coeff(n)));
        }
    }

    #[test]
    fn newton_prefix_is_stable_under_doubling() {
        // x^2 + x*u + u^3 - 1 - u = 0 near x = 1 over F_5.
        let f = Fq::prime(5).unwrap();
        let coeffs = vec![
            UniPoly::from_i64s(&f, &[-1, -1, 0, 1]),
            UniPoly::from_i64s(&f, &[0, 1]),
            UniPoly::from_i64s(&f, &[1]),
        ];
        let a = series_newton_solve(&coeffs, &1, 16).unwrap();
        let b = series_newton_solve(&coeffs, &1, 32).unwrap();
        for n in 0..16 {
            assert_eq!(a.coeff(n), b.coeff(n));
        }
        let residual = eval_bivariate(&coeffs, &b);
        assert_eq!(residual.valuation(), None);
    }

    #[test]
    fn rejects_singular_center() {
        let q = Q;
        let coeffs = vec![UniPoly::from_i64s(&q, &[0, -1]), UniPoly::zero(&q), UniPoly::from_i64s(&q, &[1])];
        assert!(series_newton_solve(&coeffs, &q.zero(), 4).is_err());
    }
}
