//! C_ab plane curves, function-field arithmetic, Weierstrass semigroup data
//! and point enumeration.

mod ffelem;
mod points;
mod semigroup;
mod spec;

use std::fmt;
use std::sync::{Arc, Mutex};

use num_integer::Integer;

pub use ffelem::FFElem;
pub(crate) use points::{eval_bipoly_at, map_bipoly};
pub use points::{field_json, Place, Point, PointSearch, COUNT_BUDGET};
pub use semigroup::SemigroupData;
pub use spec::{AnyCurve, CurveSpec, Overrides, SpecCoeff, ZCorrection};

use crate::error::{invalid, Error, Result};
use crate::exact_arith::{Field, Fq};
use crate::hasse_schmidt::HsMemo;
use crate::poly::UniPoly;

/// Polynomial in y with coefficients in k[x]; index = power of y.
pub type BiPoly<F> = Vec<UniPoly<F>>;

/// Shared handle to a validated curve.
pub type Curve<F> = Arc<CabCurve<F>>;

/// A smooth affine plane curve `f(x, y) = 0`, monic of degree `a` in `y`,
/// whose unique place at infinity gives `x` a pole of order `a` and `y` a
/// pole of order `b`.
pub struct CabCurve<F: Field> {
    field: F,
    a: usize,
    b: usize,
    genus: usize,
    /// Coefficients of y^0..y^a; the last is 1.
    f: BiPoly<F>,
    fy: BiPoly<F>,
    fx: BiPoly<F>,
    /// Lower-order corrections added to y^{j(gamma)}, indexed by class.
    z_corrections: Vec<BiPoly<F>>,
    pub(crate) hs: Mutex<HsMemo<F>>,
}

impl<F: Field> fmt::Debug for CabCurve<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CabCurve({:?}, a={}, b={}: {})", self.field, self.a, self.b, self.equation())
    }
}

impl<F: Field> CabCurve<F> {
    /// Validate the model given by terms `(i, j, c)` meaning `c x^i y^j`.
    /// The `y^a` term may be omitted; if present its coefficient must be 1.
    pub fn new(field: &F, a: usize, b: usize, terms: &[(usize, usize, F::Elem)]) -> Result<Curve<F>> {
        if a < 2 || b <= a {
            return invalid(format!("need 2 <= a < b, got a={a}, b={b}"));
        }
        if a.gcd(&b) != 1 {
            return invalid(format!("gcd(a, b) = {} is not 1", a.gcd(&b)));
        }
        let mut grid: Vec<Vec<F::Elem>> = vec![Vec::new(); a + 1];
        for (i, j, c) in terms {
            let (i, j) = (*i, *j);
            if j > a {
                return invalid(format!("term x^{i} y^{j} exceeds y-degree {a}"));
            }
            if a * i + b * j > a * b {
                return invalid(format!("term x^{i} y^{j} has weight {} > {}", a * i + b * j, a * b));
            }
            let row = &mut grid[j];
            if row.len() <= i {
                row.resize(i + 1, field.zero());
            }
            row[i] = field.add(&row[i], c);
        }
        let mut f: BiPoly<F> = grid.into_iter().map(|r| UniPoly::new(field, r)).collect();
        if f[a].is_zero() {
            f[a] = UniPoly::one(field);
        } else if !f[a].is_one() {
            return invalid(format!("not monic in y^{a}: coefficient {:?}", f[a]));
        }
        if field.is_zero(&f[0].coeff(b)) {
            return invalid(format!("coefficient of x^{b} must be nonzero"));
        }
        let fy: BiPoly<F> = (0..a).map(|j| f[j + 1].scale(&field.from_i64(j as i64 + 1))).collect();
        let fx: BiPoly<F> = f.iter().map(|c| c.derivative()).collect();
        let curve = CabCurve {
            field: field.clone(),
            a,
            b,
            genus: (a - 1) * (b - 1) / 2,
            f,
            fy,
            fx,
            z_corrections: vec![Vec::new(); a],
            hs: Mutex::new(HsMemo::default()),
        };
        if let Some(desc) = curve.find_singularity() {
            return invalid(format!("singular affine point: {desc}"));
        }
        Ok(Arc::new(curve))
    }

    /// Same curve with lower-order corrections to the z_gamma. Each
    /// correction must have pole order below delta(gamma).
    pub fn with_z_corrections(&self, corrections: Vec<BiPoly<F>>) -> Result<Curve<F>> {
        if corrections.len() != self.a {
            return invalid(format!("expected {} z corrections", self.a));
        }
        for (gamma, corr) in corrections.iter().enumerate() {
            let corr = self.reduce(corr.clone());
            if gamma == 0 && corr.iter().any(|c| !c.is_zero()) {
                return invalid("z_0 is fixed to 1");
            }
            if let Some(w) = self.weighted_degree(&corr) {
                let delta = self.b * self.j_of_class(gamma);
                if w >= delta as i64 {
                    return invalid(format!("correction for class {gamma} has pole order {w} >= {delta}"));
                }
            }
        }
        Ok(Arc::new(CabCurve {
            field: self.field.clone(),
            a: self.a,
            b: self.b,
            genus: self.genus,
            f: self.f.clone(),
            fy: self.fy.clone(),
            fx: self.fx.clone(),
            z_corrections: corrections.into_iter().map(|c| self.reduce(c)).collect(),
            hs: Mutex::new(HsMemo::default()),
        }))
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Pole order of x at infinity (the paper's d).
    pub fn a(&self) -> usize {
        self.a
    }

    /// Pole order of y at infinity.
    pub fn b(&self) -> usize {
        self.b
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Coefficients of y^0..y^a of the defining polynomial.
    pub fn f(&self) -> &BiPoly<F> {
        &self.f
    }

    /// Partial derivative in y, reduced (y-degree < a).
    pub fn fy(&self) -> &BiPoly<F> {
        &self.fy
    }

    pub fn fx(&self) -> &BiPoly<F> {
        &self.fx
    }

    pub fn z_corrections(&self) -> &[BiPoly<F>] {
        &self.z_corrections
    }

    /// The exponent j < a with b*j = gamma (mod a).
    pub fn j_of_class(&self, gamma: usize) -> usize {
        (0..self.a).find(|j| (self.b * j) % self.a == gamma % self.a).unwrap()
    }

    /// Reduce modulo f to y-degree < a, padding to exactly `a` entries.
    pub fn reduce(&self, mut p: BiPoly<F>) -> BiPoly<F> {
        let a = self.a;
        while p.len() > a {
            let c = p.pop().unwrap();
            if c.is_zero() {
                continue;
            }
            let top = p.len();
            for m in 0..a {
                if !self.f[m].is_zero() {
                    let idx = top - a + m;
                    p[idx] = &p[idx] - &(&c * &self.f[m]);
                }
            }
        }
        p.resize(a, UniPoly::zero(&self.field));
        p
    }

    /// Product of two bivariate polynomials, reduced modulo f.
    pub fn mul_reduced(&self, u: &[UniPoly<F>], v: &[UniPoly<F>]) -> BiPoly<F> {
        if u.is_empty() || v.is_empty() {
            return self.reduce(Vec::new());
        }
        let mut out = vec![UniPoly::zero(&self.field); u.len() + v.len() - 1];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(ui * vj);
            }
        }
        self.reduce(out)
    }

    /// max(a*i + b*j) over the support, or `None` for zero.
    pub fn weighted_degree(&self, p: &[UniPoly<F>]) -> Option<i64> {
        p.iter().enumerate().filter_map(|(j, c)| c.deg().map(|i| (self.a * i + self.b * j) as i64)).max()
    }

    pub fn equation(&self) -> String {
        let mut parts = Vec::new();
        for (j, c) in self.f.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let ys = match j {
                0 => String::new(),
                1 => "y".to_string(),
                _ => format!("y^{j}"),
            };
            if c.is_one() && j > 0 {
                parts.push(ys);
            } else if j == 0 {
                parts.push(format!("({})", c.to_string_var("x")));
            } else {
                parts.push(format!("({})*{ys}", c.to_string_var("x")));
            }
        }
        format!("{} = 0", parts.join(" + "))
    }

    /// Common zero of f, f_x, f_y over the algebraic closure, described by
    /// the minimal data found; `None` for a smooth affine model.
    fn find_singularity(&self) -> Option<String> {
        let norm_fy = ffelem::norm_of(self, &self.fy);
        let norm_fx = ffelem::norm_of(self, &self.reduce(self.fx.clone()));
        let mut g = norm_fy.gcd(&norm_fx);
        if norm_fy.is_zero() {
            g = norm_fx.clone();
        }
        if g.is_zero() {
            return Some("f_x and f_y vanish identically on the curve".into());
        }
        if g.degree() <= 0 {
            return None;
        }
        let g = squarefree_any(&g);
        for (gi, h) in d5_gcd(&g, &self.f, &self.fy) {
            if h.len() < 2 {
                continue;
            }
            for (gj, h2) in d5_gcd(&gi, &h, &self.fx) {
                if h2.len() >= 2 {
                    return Some(describe_singular(&gj, &h2));
                }
            }
        }
        None
    }
}

impl CabCurve<Fq> {
    /// Char-2 hyperelliptic models `y^2 + Q(x) y = P(x)`: the correction
    /// S(x) with deg S < deg rad(Q) making `y + S(x)` vanish at every finite
    /// ramification point.
    pub fn hyperelliptic_char2_correction(&self) -> Result<BiPoly<Fq>> {
        let field = &self.field;
        if self.a != 2 || field.p() != 2 {
            return Err(Error::Inapplicable("correction applies to char-2 models with a = 2".into()));
        }
        let q = &self.f[1];
        let p = &self.f[0];
        let rad = q.squarefree_part();
        let zero = UniPoly::zero(field);
        if rad.degree() <= 0 {
            return Ok(vec![zero.clone(), zero]);
        }
        // Square root of P modulo rad(Q): raise to |residue field| / 2
        // with a common residue-field size.
        let degs: Vec<usize> = rad.factor_degrees().keys().cloned().collect();
        let l = degs.iter().fold(1usize, |acc, d| acc.lcm(d));
        let big = field.order().pow(l as u32);
        // y0^2 = P(x0) on the ramification points (Q(x0)=0), and y0 = S(x0)
        // makes y + S vanish there in characteristic 2.
        let s = p.rem(&rad).powmod(big / 2, &rad);
        Ok(vec![s, zero])
    }
}

/// Squarefree part in any characteristic-agnostic way (gcd with derivative
/// over Q, full decomposition over finite fields is not needed here).
fn squarefree_any<F: Field>(g: &UniPoly<F>) -> UniPoly<F> {
    let d = g.derivative();
    if d.is_zero() {
        return g.monic();
    }
    g.exact_div(&g.gcd(&d)).monic()
}

fn describe_singular<F: Field>(gx: &UniPoly<F>, hy: &BiPoly<F>) -> String {
    let field = gx.field();
    if gx.degree() == 1 && hy.len() == 2 {
        let x0 = field.neg(&gx.monic().coeff(0));
        let hx: Vec<F::Elem> = hy.iter().map(|c| c.eval(&x0)).collect();
        if let Some(inv) = field.inv(&hx[1]) {
            let y0 = field.neg(&field.mul(&hx[0], &inv));
            return format!("({}, {})", field.fmt_elem(&x0), field.fmt_elem(&y0));
        }
    }
    let ypoly: Vec<String> = hy.iter().map(|c| format!("({c:?})")).collect();
    format!(
        "x a root of {:?}, y a root of {}",
        gx,
        ypoly.iter().enumerate().map(|(j, c)| format!("{c}*y^{j}")).collect::<Vec<_>>().join(" + ")
    )
}

/// Gcd of two polynomials in y over the product of fields k[x]/(g) for a
/// squarefree g, splitting g whenever a leading coefficient is a zero
/// divisor. Returns pairs (g_i, h_i) with the g_i a factorization of g and
/// h_i the monic gcd over k[x]/(g_i); a constant h_i has length 1.
fn d5_gcd<F: Field>(g: &UniPoly<F>, u: &BiPoly<F>, v: &BiPoly<F>) -> Vec<(UniPoly<F>, BiPoly<F>)> {
    let mut out = Vec::new();
    let mut stack = vec![(g.clone(), u.clone(), v.clone())];
    while let Some((g, u, v)) = stack.pop() {
        if g.degree() <= 0 {
            continue;
        }
        let u = strip_mod(&g, &u);
        let v = strip_mod(&g, &v);
        if v.is_empty() {
            if u.is_empty() {
                let zero = UniPoly::zero(g.field());
                out.push((g, vec![zero]));
                continue;
            }
            match inverse_mod(&g, u.last().unwrap()) {
                Ok(inv) => {
                    let h: BiPoly<F> = u.iter().map(|c| (c * &inv).rem(&g)).collect();
                    out.push((g, h));
                }
                Err(d) => {
                    let other = g.exact_div(&d);
                    stack.push((d, u.clone(), v.clone()));
                    stack.push((other, u, v));
                }
            }
            continue;
        }
        if u.len() < v.len() {
            stack.push((g, v, u));
            continue;
        }
        match inverse_mod(&g, v.last().unwrap()) {
            Ok(inv) => {
                let mut r = u.clone();
                while r.len() >= v.len() {
                    let lc = (r.last().unwrap() * &inv).rem(&g);
                    let shift = r.len() - v.len();
                    for (k, vc) in v.iter().enumerate() {
                        r[shift + k] = (&r[shift + k] - &(&lc * vc)).rem(&g);
                    }
                    r.pop();
                    r = strip_mod(&g, &r);
                }
                stack.push((g, v, r));
            }
            Err(d) => {
                let other = g.exact_div(&d);
                stack.push((d, u.clone(), v.clone()));
                stack.push((other, u, v));
            }
        }
    }
    out
}

fn strip_mod<F: Field>(g: &UniPoly<F>, u: &[UniPoly<F>]) -> BiPoly<F> {
    let mut r: BiPoly<F> = u.iter().map(|c| c.rem(g)).collect();
    while r.last().is_some_and(|c| c.is_zero()) {
        r.pop();
    }
    r
}

/// Inverse of c modulo g, or the nontrivial factor gcd(c, g) when c is a
/// zero divisor.
fn inverse_mod<F: Field>(g: &UniPoly<F>, c: &UniPoly<F>) -> std::result::Result<UniPoly<F>, UniPoly<F>> {
    let (d, s, _) = c.ext_gcd(g);
    if d.is_one() {
        Ok(s.rem(g))
    } else {
        Err(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::Q;

    fn q_curve(a: usize, b: usize, terms: &[(usize, usize, i64)]) -> Result<Curve<Q>> {
        let t: Vec<_> = terms.iter().map(|&(i, j, c)| (i, j, Q.from_i64(c))).collect();
        CabCurve::new(&Q, a, b, &t)
    }

    #[test]
    fn validates_genus_three_quartic() {
        let f7 = Fq::prime(7).unwrap();
        let t = vec![(0, 3, 1), (0, 1, f7.from_i64(-1)), (4, 0, f7.from_i64(-1))];
        let c = CabCurve::new(&f7, 3, 4, &t).unwrap();
        assert_eq!((c.a(), c.b(), c.genus()), (3, 4, 3));
    }

    #[test]
    fn validates_genus_nine_family() {
        let f5 = Fq::prime(5).unwrap();
        let m1 = f5.from_i64(-1);
        let t = vec![(0, 3, 1), (1, 0, m1), (5, 0, m1), (10, 0, m1)];
        let c = CabCurve::new(&f5, 3, 10, &t).unwrap();
        assert_eq!(c.genus(), 9);
    }

    #[test]
    fn rejects_bad_models() {
        assert!(q_curve(2, 6, &[(0, 2, 1), (6, 0, -1)]).is_err());
        assert!(q_curve(3, 4, &[(0, 3, 2), (4, 0, 1)]).is_err());
        assert!(q_curve(3, 4, &[(0, 3, 1), (5, 0, 1), (4, 0, 1)]).is_err());
        assert!(q_curve(3, 4, &[(0, 3, 1), (0, 1, 1)]).is_err());
    }

    #[test]
    fn rejects_singular_point_with_coordinates() {
        // y^2 = x^5 + x^2 is singular at the origin.
        let err = q_curve(2, 5, &[(0, 2, 1), (5, 0, -1), (2, 0, -1)]).unwrap_err();
        assert!(format!("{err}").contains("(0, 0)"), "{err}");
        // y^2 = x^5 - x is smooth.
        assert!(q_curve(2, 5, &[(0, 2, 1), (5, 0, -1), (1, 0, 1)]).is_ok());
    }

    #[test]
    fn singularity_in_extension_is_found() {
        // y^2 = (x^2 + 1)^2 * x over F_3 is singular at x^2 + 1 = 0.
        let f3 = Fq::prime(3).unwrap();
        let m = |v: i64| f3.from_i64(v);
        let t = vec![(0, 2, 1), (5, 0, m(-1)), (3, 0, m(-2)), (1, 0, m(-1))];
        assert!(CabCurve::new(&f3, 2, 5, &t).is_err());
    }

    #[test]
    fn reduction_uses_defining_relation() {
        let c = q_curve(3, 4, &[(0, 3, 1), (0, 1, -1), (4, 0, -1)]).unwrap();
        let y3 = vec![UniPoly::zero(&Q), UniPoly::zero(&Q), UniPoly::zero(&Q), UniPoly::one(&Q)];
        let r = c.reduce(y3);
        assert_eq!(r[0], UniPoly::from_i64s(&Q, &[0, 0, 0, 0, 1]));
        assert_eq!(r[1], UniPoly::one(&Q));
        assert!(r[2].is_zero());
    }

    #[test]
    fn char2_correction_vanishes_on_ramified_points() {
        let f2 = Fq::prime(2).unwrap();
        // y^2 + x y = x^5 + 1
        let t = vec![(0, 2, 1), (1, 1, 1), (5, 0, 1), (0, 0, 1)];
        let c = CabCurve::new(&f2, 2, 5, &t).unwrap();
        let s = c.hyperelliptic_char2_correction().unwrap();
        // Ramified point: x = 0, y^2 = 1 so y = 1; y + S(0) must vanish.
        assert_eq!(f2.add(&1, &s[0].eval(&0)), 0);
    }
}
