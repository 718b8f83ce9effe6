//! Oracles written independently of the library's derivation code. Only the
//! finite-field arithmetic of `Fq` is shared.

#![allow(dead_code)]

use cabtorsion::curve::{AnyCurve, Curve, CurveSpec};
use cabtorsion::exact_arith::{Field, Fq};

/// Integer-coefficient plane curve sum c x^i y^j = 0.
pub type Terms = Vec<(usize, usize, i64)>;

pub fn finite_curve(p: u64, a: usize, b: usize, terms: &Terms) -> Curve<Fq> {
    match CurveSpec::prime(p, a, b, terms).build().unwrap() {
        AnyCurve::Finite(c) => c,
        AnyCurve::Rational(_) => unreachable!("p > 0"),
    }
}

pub fn eval_terms(k: &Fq, terms: &Terms, x: u64, y: u64) -> u64 {
    terms.iter().fold(k.zero(), |acc, &(i, j, c)| {
        let m = k.mul(&k.pow(&x, i as u64), &k.pow(&y, j as u64));
        k.add(&acc, &k.mul(&k.from_i64(c), &m))
    })
}

fn d_dy_terms(terms: &Terms) -> Terms {
    terms.iter().filter(|t| t.1 > 0).map(|&(i, j, c)| (i, j - 1, c * j as i64)).collect()
}

/// Affine points over `k` by exhaustive search.
pub fn affine_points(k: &Fq, terms: &Terms) -> Vec<(u64, u64)> {
    let elems: Vec<u64> = k.elements().collect();
    let mut out = Vec::new();
    for &x in &elems {
        for &y in &elems {
            if k.is_zero(&eval_terms(k, terms, x, y)) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Whether the x-map is unramified at (x, y), i.e. the partial in y is nonzero.
pub fn unramified(k: &Fq, terms: &Terms, x: u64, y: u64) -> bool {
    !k.is_zero(&eval_terms(k, &d_dy_terms(terms), x, y))
}

/// Truncated power series in t.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub c: Vec<u64>,
}

impl Series {
    pub fn constant(k: &Fq, v: u64, prec: usize) -> Self {
        let mut c = vec![k.zero(); prec];
        c[0] = v;
        Series { c }
    }

    pub fn add(&self, k: &Fq, o: &Series) -> Series {
        Series { c: self.c.iter().zip(&o.c).map(|(a, b)| k.add(a, b)).collect() }
    }

    pub fn scale(&self, k: &Fq, s: u64) -> Series {
        Series { c: self.c.iter().map(|a| k.mul(a, &s)).collect() }
    }

    pub fn mul(&self, k: &Fq, o: &Series) -> Series {
        let n = self.c.len();
        let mut c = vec![k.zero(); n];
        for i in 0..n {
            if k.is_zero(&self.c[i]) {
                continue;
            }
            for j in 0..n - i {
                c[i + j] = k.add(&c[i + j], &k.mul(&self.c[i], &o.c[j]));
            }
        }
        Series { c }
    }

    pub fn pow(&self, k: &Fq, e: usize) -> Series {
        let mut acc = Series::constant(k, k.one(), self.c.len());
        for _ in 0..e {
            acc = acc.mul(k, self);
        }
        acc
    }
}

/// F(x0 + t, Y(t)) for the curve polynomial F.
fn eval_series(k: &Fq, terms: &Terms, x0: u64, y: &Series) -> Series {
    let prec = y.c.len();
    let mut x = Series::constant(k, x0, prec);
    if prec > 1 {
        x.c[1] = k.one();
    }
    terms.iter().fold(Series::constant(k, k.zero(), prec), |acc, &(i, j, c)| {
        acc.add(k, &x.pow(k, i).mul(k, &y.pow(k, j)).scale(k, k.from_i64(c)))
    })
}

/// Taylor expansion y(x0 + t) mod t^prec at an unramified point, by simplified
/// Newton iteration; coefficient n is the n-th Hasse-Schmidt derivative of y.
pub fn expand_y(k: &Fq, terms: &Terms, x0: u64, y0: u64, prec: usize) -> Series {
    let fy = eval_terms(k, &d_dy_terms(terms), x0, y0);
    let c = k.neg(&k.inv(&fy).expect("point is unramified"));
    let mut y = Series::constant(k, y0, prec);
    for _ in 0..prec {
        y = y.add(k, &eval_series(k, terms, x0, &y).scale(k, c));
    }
    assert!(eval_series(k, terms, x0, &y).c.iter().all(|v| k.is_zero(v)), "expansion did not converge");
    y
}

/// Expansion of x^i y^j at the point, given the expansion of y.
pub fn expand_monomial(k: &Fq, x0: u64, y: &Series, i: usize, j: usize) -> Series {
    let mut x = Series::constant(k, x0, y.c.len());
    if y.c.len() > 1 {
        x.c[1] = k.one();
    }
    x.pow(k, i).mul(k, &y.pow(k, j))
}

/// Rank by Gaussian elimination.
pub fn rank(k: &Fq, mut m: Vec<Vec<u64>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !k.is_zero(&m[i][col])) else { continue };
        m.swap(r, piv);
        let inv = k.inv(&m[r][col]).unwrap();
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !k.is_zero(&row[col]) {
                let f = k.mul(&row[col], &inv);
                for (x, pv) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x = k.sub(x, &k.mul(&f, pv));
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Monomials x^i y^j (j < a) of pole order a i + b j at most n.
pub fn basis(a: usize, b: usize, n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..a {
        for i in 0..=n / a {
            if a * i + b * j <= n {
                out.push((i, j));
            }
        }
    }
    out
}

/// Whether an unramified affine point lies in X[N]: the Taylor coefficients
/// t^0..t^(N-1) of the basis functions of pole order at most N are dependent.
pub fn in_torsion(k: &Fq, terms: &Terms, a: usize, b: usize, n: usize, pt: (u64, u64)) -> bool {
    let y = expand_y(k, terms, pt.0, pt.1, n);
    let rows: Vec<Vec<u64>> = basis(a, b, n).iter().map(|&(i, j)| expand_monomial(k, pt.0, &y, i, j).c).collect();
    let dim = rows.len();
    rank(k, rows) < dim
}
