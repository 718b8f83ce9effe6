use std::cmp::Ordering;

use serde_json::{json, Value};

use super::{BiPoly, CabCurve, FFElem};
use crate::error::{Error, Result};
use crate::exact_arith::{embedding, ext_field_create, Field, Fq};
use crate::poly::UniPoly;

/// Largest field size `count_points` will enumerate.
pub const COUNT_BUDGET: u64 = 1 << 20;

/// An affine point with coordinates in a finite extension of the base field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    field: Fq,
    x: u64,
    y: u64,
}

/// A place of the curve: the unique point at infinity or an affine point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Infinity,
    Finite(Point),
}

impl Point {
    pub fn new(field: &Fq, x: u64, y: u64) -> Self {
        Point { field: field.clone(), x, y }
    }

    /// Field containing the coordinates.
    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn y(&self) -> u64 {
        self.y
    }

    /// Degree over `base` of the smallest field containing both coordinates.
    pub fn degree_over(&self, base: &Fq) -> usize {
        let rel = self.field.degree() / base.degree();
        let q = base.order();
        (1..=rel)
            .filter(|d| rel.is_multiple_of(*d))
            .find(|&d| {
                let e = q.pow(d as u32);
                self.field.pow(&self.x, e) == self.x && self.field.pow(&self.y, e) == self.y
            })
            .unwrap_or(rel)
    }

    /// Image under the base-field Frobenius.
    pub fn frobenius(&self, base: &Fq) -> Point {
        let q = base.order();
        Point { field: self.field.clone(), x: self.field.pow(&self.x, q), y: self.field.pow(&self.y, q) }
    }

    /// The Galois orbit over `base`, starting at this point.
    pub fn orbit(&self, base: &Fq) -> Vec<Point> {
        let mut out = vec![self.clone()];
        let mut cur = self.frobenius(base);
        while cur != *self {
            out.push(cur.clone());
            cur = cur.frobenius(base);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "x": self.field.to_json(&self.x),
            "y": self.field.to_json(&self.y),
            "field": field_json(&self.field),
        })
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field.order(), self.x, self.y).cmp(&(other.field.order(), other.x, other.y))
    }
}

impl Place {
    pub fn to_json(&self) -> Value {
        match self {
            Place::Infinity => json!("infinity"),
            Place::Finite(p) => p.to_json(),
        }
    }
}

/// JSON description of a finite field: characteristic, degree and modulus.
pub fn field_json(f: &Fq) -> Value {
    json!({
        "p": f.p().to_string(),
        "degree": f.degree().to_string(),
        "modulus": f.modulus().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    })
}

/// Map the coefficients of a bivariate polynomial into an extension.
pub(crate) fn map_bipoly(p: &BiPoly<Fq>, target: &Fq) -> Result<BiPoly<Fq>> {
    let Some(first) = p.first() else {
        return Ok(Vec::new());
    };
    let emb = embedding(first.field(), target)?;
    Ok(p.iter().map(|c| c.map_field(target, |e| emb.map(e))).collect())
}

/// The polynomial in y obtained by substituting x = x0.
pub(crate) fn specialize_x(p: &BiPoly<Fq>, x0: &u64) -> UniPoly<Fq> {
    let field = p[0].field().clone();
    UniPoly::new(&field, p.iter().map(|c| c.eval(x0)).collect())
}

pub(crate) fn eval_bipoly_at(p: &BiPoly<Fq>, x0: &u64, y0: &u64) -> u64 {
    specialize_x(p, x0).eval(y0)
}

impl CabCurve<Fq> {
    /// The defining polynomial with coefficients mapped into `target`.
    pub fn f_over(&self, target: &Fq) -> Result<BiPoly<Fq>> {
        map_bipoly(&self.f, target)
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        let f = self.f_over(p.field())?;
        Ok(eval_bipoly_at(&f, &p.x, &p.y) == 0)
    }

    /// Affine points over the extension of degree m of the base field.
    pub fn affine_points(&self, m: usize) -> Result<Vec<Point>> {
        let base = self.field();
        let size = (base.order() as u128).checked_pow(m as u32);
        if m == 0 || size.is_none_or(|s| s > COUNT_BUDGET as u128) {
            return Err(Error::CapExceeded(format!(
                "field of size {}^{m} exceeds the enumeration budget {COUNT_BUDGET}",
                base.order()
            )));
        }
        let target = ext_field_create(base.p(), base.degree() * m)?;
        let f = self.f_over(&target)?;
        let mut out = Vec::new();
        for x0 in target.elements() {
            for y0 in specialize_x(&f, &x0).roots() {
                out.push(Point::new(&target, x0, y0));
            }
        }
        Ok(out)
    }

    /// Number of points over the degree-m extension, including infinity.
    pub fn count_points(&self, m: usize) -> Result<u64> {
        Ok(self.affine_points(m)?.len() as u64 + 1)
    }
}

/// Result of a closure search: geometric points found within the cap and
/// the degrees of closed points that were left out.
#[derive(Clone, Debug, Default)]
pub struct PointSearch {
    pub points: Vec<Point>,
    pub skipped_degrees: Vec<usize>,
}

impl PointSearch {
    pub fn is_complete(&self) -> bool {
        self.skipped_degrees.is_empty()
    }
}

impl CabCurve<Fq> {
    /// All geometric points (x0, y0) with h(x0) = 0 and g(x0, y0) = 0 for
    /// every g in `extra`, whose field of definition has degree at most
    /// `cap` over the base field.
    pub fn points_above(&self, h: &UniPoly<Fq>, extra: &[BiPoly<Fq>], cap: usize) -> Result<PointSearch> {
        let base = self.field();
        let mut out = PointSearch::default();
        if h.is_zero() {
            return Err(Error::Invalid("points above the zero polynomial".into()));
        }
        for (factor, _) in h.factor() {
            let m = factor.deg().unwrap();
            if m > cap {
                out.skipped_degrees.push(m);
                continue;
            }
            let ext = ext_field_create(base.p(), base.degree() * m)?;
            let f = self.f_over(&ext)?;
            let extra: Vec<BiPoly<Fq>> = extra.iter().map(|g| map_bipoly(g, &ext)).collect::<Result<_>>()?;
            for x0 in factor.roots_in_field(&ext)? {
                let mut g = specialize_x(&f, &x0);
                for e in &extra {
                    let ge = specialize_x(e, &x0);
                    if !ge.is_zero() {
                        g = g.gcd(&ge);
                    }
                }
                if g.degree() <= 0 {
                    continue;
                }
                for (phi, _) in g.factor() {
                    let m2 = phi.deg().unwrap();
                    if m * m2 > cap {
                        out.skipped_degrees.push(m * m2);
                        continue;
                    }
                    let top = ext_field_create(base.p(), base.degree() * m * m2)?;
                    let emb = embedding(&ext, &top)?;
                    let x_top = emb.map(&x0);
                    for y0 in phi.roots_in_field(&top)? {
                        out.points.push(Point::new(&top, x_top, y0));
                    }
                }
            }
        }
        out.points.sort();
        out.skipped_degrees.sort_unstable();
        out.skipped_degrees.dedup();
        Ok(out)
    }
}

impl FFElem<Fq> {
    /// Value at an affine point, or `None` when the reduced denominator
    /// vanishes there.
    pub fn eval_at(&self, p: &Point) -> Result<Option<u64>> {
        let ext = p.field();
        let emb = embedding(self.curve().field(), ext)?;
        let den = self.den().map_field(ext, |c| emb.map(c)).eval(&p.x);
        if den == 0 {
            return Ok(None);
        }
        let num = map_bipoly(self.num(), ext)?;
        let v = eval_bipoly_at(&num, &p.x, &p.y);
        Ok(Some(ext.mul(&v, &ext.inv(&den).unwrap())))
    }
}
