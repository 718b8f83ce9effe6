use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{BiPoly, CabCurve, Curve};
use crate::error::{Error, Result};
use crate::exact_arith::Field;
use crate::poly::UniPoly;

/// Element of the function field k(X), kept canonical as
/// `num(x, y) / den(x)` with `num` reduced modulo f (y-degree < a), `den`
/// monic, and no common factor between `den` and all coefficients of `num`.
#[derive(Clone)]
pub struct FFElem<F: Field> {
    curve: Curve<F>,
    num: BiPoly<F>,
    den: UniPoly<F>,
}

impl<F: Field> PartialEq for FFElem<F> {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl<F: Field> Eq for FFElem<F> {}

impl<F: Field> fmt::Debug for FFElem<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<F: Field> fmt::Display for FFElem<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num_string())
        } else {
            write!(f, "({}) / ({:?})", self.num_string(), self.den)
        }
    }
}

impl<F: Field> FFElem<F> {
    /// `num / den` for any bivariate numerator and nonzero univariate denominator.
    pub fn new(curve: &Curve<F>, num: BiPoly<F>, den: UniPoly<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Invalid("zero denominator".into()));
        }
        Ok(Self::normalized(curve, curve.reduce(num), den))
    }

    pub(crate) fn normalized(curve: &Curve<F>, num: BiPoly<F>, den: UniPoly<F>) -> Self {
        let field = curve.field();
        if num.iter().all(|c| c.is_zero()) {
            return FFElem { curve: curve.clone(), num: curve.reduce(Vec::new()), den: UniPoly::one(field) };
        }
        let mut g = den.clone();
        for c in &num {
            if g.degree() <= 0 {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        let (mut num, mut den) = if g.degree() > 0 {
            (num.iter().map(|c| c.exact_div(&g)).collect(), den.exact_div(&g))
        } else {
            (num, den)
        };
        let lead = den.lead().unwrap().clone();
        if !field.is_one(&lead) {
            let inv = field.inv(&lead).unwrap();
            num = num.iter().map(|c| c.scale(&inv)).collect();
            den = den.scale(&inv);
        }
        FFElem { curve: curve.clone(), num, den }
    }

    pub fn zero(curve: &Curve<F>) -> Self {
        Self::from_poly(curve, UniPoly::zero(curve.field()))
    }

    pub fn one(curve: &Curve<F>) -> Self {
        Self::from_poly(curve, UniPoly::one(curve.field()))
    }

    pub fn constant(curve: &Curve<F>, c: F::Elem) -> Self {
        Self::from_poly(curve, UniPoly::constant(curve.field(), c))
    }

    /// The polynomial p(x).
    pub fn from_poly(curve: &Curve<F>, p: UniPoly<F>) -> Self {
        let mut num = curve.reduce(Vec::new());
        num[0] = p;
        FFElem { curve: curve.clone(), num, den: UniPoly::one(curve.field()) }
    }

    pub fn x(curve: &Curve<F>) -> Self {
        Self::from_poly(curve, UniPoly::x(curve.field()))
    }

    pub fn y(curve: &Curve<F>) -> Self {
        Self::from_bipoly(curve, vec![UniPoly::zero(curve.field()), UniPoly::one(curve.field())])
    }

    /// A polynomial in x and y (any y-degree).
    pub fn from_bipoly(curve: &Curve<F>, p: BiPoly<F>) -> Self {
        FFElem { curve: curve.clone(), num: curve.reduce(p), den: UniPoly::one(curve.field()) }
    }

    /// The monomial c x^i y^j.
    pub fn monomial(curve: &Curve<F>, c: F::Elem, i: usize, j: usize) -> Self {
        let field = curve.field();
        let mut p = vec![UniPoly::zero(field); j + 1];
        p[j] = UniPoly::monomial(field, c, i);
        Self::from_bipoly(curve, p)
    }

    pub fn curve(&self) -> &Curve<F> {
        &self.curve
    }

    /// Numerator coefficients of y^0..y^{a-1}.
    pub fn num(&self) -> &BiPoly<F> {
        &self.num
    }

    pub fn den(&self) -> &UniPoly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// True when the element lies in k[x, y] (denominator 1).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add_elem(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    pub fn sub_elem(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    fn combine(&self, o: &Self, negate: bool) -> Self {
        let c = &self.curve;
        let pick = |a: &UniPoly<F>, b: &UniPoly<F>| if negate { a - b } else { a + b };
        if self.den == o.den {
            let num = self.num.iter().zip(&o.num).map(|(a, b)| pick(a, b)).collect();
            return Self::normalized(c, num, self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        let sf = o.den.exact_div(&g);
        let of = self.den.exact_div(&g);
        let num = self.num.iter().zip(&o.num).map(|(a, b)| pick(&(a * &sf), &(b * &of))).collect();
        Self::normalized(c, num, &self.den * &sf)
    }

    pub fn mul_elem(&self, o: &Self) -> Self {
        let c = &self.curve;
        if self.is_zero() || o.is_zero() {
            return Self::zero(c);
        }
        // Cancel cross factors first to keep degrees small.
        let g1 = content_gcd(&self.num, &o.den);
        let g2 = content_gcd(&o.num, &self.den);
        let n1: BiPoly<F> = self.num.iter().map(|p| p.exact_div(&g1)).collect();
        let n2: BiPoly<F> = o.num.iter().map(|p| p.exact_div(&g2)).collect();
        let d = &self.den.exact_div(&g2) * &o.den.exact_div(&g1);
        let num = c.mul_reduced(&n1, &n2);
        Self::normalized(c, num, d)
    }

    /// Multiply by a polynomial in x.
    pub fn mul_poly(&self, p: &UniPoly<F>) -> Self {
        let num = self.num.iter().map(|c| c * p).collect();
        Self::normalized(&self.curve, num, self.den.clone())
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let num = self.num.iter().map(|c| c.scale(s)).collect();
        Self::normalized(&self.curve, num, self.den.clone())
    }

    pub fn neg_elem(&self) -> Self {
        FFElem { curve: self.curve.clone(), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.curve);
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

    /// Norm from k(X) to k(x) of the numerator: `Res_y(f, num)` up to sign.
    pub fn num_norm(&self) -> UniPoly<F> {
        norm_of(&self.curve, &self.num)
    }

    /// The norm N_{k(X)/k(x)}(self).
    pub fn norm(&self) -> (UniPoly<F>, UniPoly<F>) {
        (self.num_norm(), self.den.pow(self.curve.a() as u64))
    }

    /// Multiplicative inverse. The result has a univariate denominator: the
    /// numerator's adjugate cofactor clears y.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Invalid("inverse of zero".into()));
        }
        let (norm, adj) = norm_and_adjugate(&self.curve, &self.num);
        let num = adj.iter().map(|c| c * &self.den).collect();
        Ok(Self::normalized(&self.curve, num, norm))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self * &o.inv()?)
    }

    /// `-v_inf`: the pole order at the unique place at infinity.
    pub fn pole_order_at_infinity(&self) -> Result<i64> {
        let w = self.curve.weighted_degree(&self.num).ok_or_else(|| Error::Invalid("pole order of zero".into()))?;
        Ok(w - (self.curve.a() as i64) * self.den.degree())
    }

    fn num_string(&self) -> String {
        let mut parts = Vec::new();
        for (j, c) in self.num.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string_var("x");
            parts.push(match j {
                0 => format!("({cs})"),
                1 => format!("({cs})*y"),
                _ => format!("({cs})*y^{j}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn content_gcd<F: Field>(num: &BiPoly<F>, den: &UniPoly<F>) -> UniPoly<F> {
    let mut g = den.clone();
    for c in num {
        if g.degree() <= 0 {
            break;
        }
        if !c.is_zero() {
            g = g.gcd(c);
        }
    }
    if g.degree() <= 0 {
        UniPoly::one(den.field())
    } else {
        g
    }
}

/// Matrix of multiplication by `u` on the basis 1, y, ..., y^{a-1};
/// column m holds the coefficients of u * y^m.
fn mult_matrix<F: Field>(curve: &CabCurve<F>, u: &BiPoly<F>) -> Vec<Vec<UniPoly<F>>> {
    let a = curve.a();
    let field = curve.field();
    let mut cols = Vec::with_capacity(a);
    let mut cur = curve.reduce(u.clone());
    for _ in 0..a {
        cols.push(cur.clone());
        let mut shifted = vec![UniPoly::zero(field)];
        shifted.extend(cur);
        cur = curve.reduce(shifted);
    }
    (0..a).map(|i| (0..a).map(|m| cols[m][i].clone()).collect()).collect()
}

/// Determinant over k[x] by fraction-free elimination.
pub(crate) fn poly_det<F: Field>(mut m: Vec<Vec<UniPoly<F>>>, field: &F) -> UniPoly<F> {
    let n = m.len();
    if n == 0 {
        return UniPoly::one(field);
    }
    let mut sign = false;
    let mut prev = UniPoly::one(field);
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return UniPoly::zero(field);
        };
        if piv != k {
            m.swap(piv, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = v.exact_div(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        -&det
    } else {
        det
    }
}

pub(crate) fn norm_of<F: Field>(curve: &CabCurve<F>, u: &BiPoly<F>) -> UniPoly<F> {
    poly_det(mult_matrix(curve, u), curve.field())
}

/// (N(u), B) with u * B = N(u) in k[x, y]/(f): B is the first column of the
/// adjugate of the multiplication matrix.
fn norm_and_adjugate<F: Field>(curve: &CabCurve<F>, u: &BiPoly<F>) -> (UniPoly<F>, BiPoly<F>) {
    let m = mult_matrix(curve, u);
    let a = m.len();
    let field = curve.field();
    let mut adj = Vec::with_capacity(a);
    for i in 0..a {
        // adj[i][0] = (-1)^i det(M without row 0 and column i).
        let minor: Vec<Vec<UniPoly<F>>> =
            (1..a).map(|r| (0..a).filter(|&c| c != i).map(|c| m[r][c].clone()).collect()).collect();
        let d = poly_det(minor, field);
        adj.push(if i % 2 == 1 { -&d } else { d });
    }
    let mut norm = UniPoly::zero(field);
    for i in 0..a {
        norm = &norm + &(&m[0][i] * &adj[i]);
    }
    (norm, adj)
}

impl<F: Field> Add for &FFElem<F> {
    type Output = FFElem<F>;
    fn add(self, rhs: Self) -> FFElem<F> {
        self.add_elem(rhs)
    }
}

impl<F: Field> Sub for &FFElem<F> {
    type Output = FFElem<F>;
    fn sub(self, rhs: Self) -> FFElem<F> {
        self.sub_elem(rhs)
    }
}

impl<F: Field> Mul for &FFElem<F> {
    type Output = FFElem<F>;
    fn mul(self, rhs: Self) -> FFElem<F> {
        self.mul_elem(rhs)
    }
}

impl<F: Field> Neg for &FFElem<F> {
    type Output = FFElem<F>;
    fn neg(self) -> FFElem<F> {
        self.neg_elem()
    }
}
