//! Local expansions: the ramification locus of the x-map, the invariants
//! (e, r) of each ramified point, valuations, and the Riemann–Hurwitz and
//! derivative-valuation checks.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::curve::{map_bipoly, BiPoly, CabCurve, Curve, FFElem, Place, Point};
use crate::error::{invalid, Error, Result};
use crate::exact_arith::{embedding, Field, Fq};
use crate::hasse_schmidt::{d_of_bipoly, d_poly};
use crate::poly::{series_newton_solve, PowerSeries, UniPoly};

/// Default truncation limit for adaptive series precision.
pub const DEFAULT_SERIES_CAP: usize = 8192;

/// The local parameter x^alpha y^beta at infinity, with a*alpha + b*beta = -1.
pub fn infinity_uniformizer(a: usize, b: usize) -> (i64, i64) {
    let (a, b) = (a as i64, b as i64);
    let beta = (0..a).find(|beta| (b * beta + 1) % a == 0).expect("gcd(a, b) = 1");
    ((-1 - b * beta) / a, beta)
}

/// Expansion at infinity in the uniformizer t: x = t^{-a} X(t) and
/// y = t^{-b} Y(t) with X, Y units.
#[derive(Clone, Debug)]
pub struct InfinityExpansion<F: Field> {
    pub alpha: i64,
    pub beta: i64,
    pub xs: PowerSeries<F>,
    pub ys: PowerSeries<F>,
}

impl<F: Field> InfinityExpansion<F> {
    pub fn new(curve: &CabCurve<F>, prec: i64) -> Result<Self> {
        let field = curve.field();
        let (a, b) = (curve.a() as i64, curve.b() as i64);
        let (alpha, beta) = infinity_uniformizer(curve.a(), curve.b());
        let minus_c = field.neg(&curve.f()[0].coeff(curve.b()));
        let lambda = field.pow(&minus_c, beta as u64);
        let mu = field.pow(&minus_c, (-alpha) as u64);
        // Support of f: (i, j, c, t-shift ab - ai - bj).
        let mut terms = Vec::new();
        for (j, row) in curve.f().iter().enumerate() {
            for (i, c) in row.coeffs().iter().enumerate() {
                if !field.is_zero(c) {
                    terms.push((i, j, c.clone(), a * b - a * i as i64 - b * j as i64));
                }
            }
        }
        let mut xs = PowerSeries::constant(field, lambda, 1);
        let mut ys = PowerSeries::constant(field, mu, 1);
        let mut cur = 1i64;
        while cur < prec {
            cur = (2 * cur).min(prec);
            let x = xs.with_prec(cur);
            let y = ys.with_prec(cur);
            let xp = powers(&x, terms.iter().map(|t| t.0).max().unwrap_or(0), cur);
            let yp = powers(&y, curve.a(), cur);
            let xa = x.powi(alpha)?;
            let yb = y.powi(beta)?;
            let one = PowerSeries::constant(field, field.one(), cur);
            let g1 = xa.mul(&yb).sub(&one);
            let j11 = xa.mul(&yb).mul(&x.inv()?).scale(&field.from_i64(alpha));
            let j12 = xa.mul(&yb).mul(&y.inv()?).scale(&field.from_i64(beta));
            let mut g2 = PowerSeries::zero(field, cur);
            let mut j21 = PowerSeries::zero(field, cur);
            let mut j22 = PowerSeries::zero(field, cur);
            for (i, j, c, s) in &terms {
                let (i, j) = (*i, *j);
                let base = xp[i].mul(&yp[j]).scale(c).shift(*s).with_prec(cur);
                g2 = g2.add(&base);
                if i > 0 {
                    let d = xp[i - 1].mul(&yp[j]).scale(c).scale(&field.from_i64(i as i64));
                    j21 = j21.add(&d.shift(*s).with_prec(cur));
                }
                if j > 0 {
                    let d = xp[i].mul(&yp[j - 1]).scale(c).scale(&field.from_i64(j as i64));
                    j22 = j22.add(&d.shift(*s).with_prec(cur));
                }
            }
            let det_inv = j11.mul(&j22).sub(&j12.mul(&j21)).inv()?;
            let dx = j22.mul(&g1).sub(&j12.mul(&g2)).mul(&det_inv);
            let dy = j11.mul(&g2).sub(&j21.mul(&g1)).mul(&det_inv);
            xs = x.sub(&dx).with_prec(cur);
            ys = y.sub(&dy).with_prec(cur);
        }
        Ok(InfinityExpansion { alpha, beta, xs, ys })
    }

    /// x as a Laurent series in t.
    pub fn x(&self, a: usize) -> PowerSeries<F> {
        self.xs.shift(-(a as i64))
    }

    pub fn y(&self, b: usize) -> PowerSeries<F> {
        self.ys.shift(-(b as i64))
    }

    /// 1/x = t^a / X(t).
    pub fn inv_x(&self, a: usize) -> Result<PowerSeries<F>> {
        Ok(self.xs.inv()?.shift(a as i64))
    }
}

fn powers<F: Field>(s: &PowerSeries<F>, n: usize, prec: i64) -> Vec<PowerSeries<F>> {
    let f = s.field();
    let mut out = vec![PowerSeries::constant(f, f.one(), prec)];
    for k in 1..=n {
        out.push(out[k - 1].mul(s));
    }
    out
}

/// Series x(u), y(u) in a uniformizer u at an affine point.
#[derive(Clone, Debug)]
pub struct LocalExpansion {
    /// True when u = y - y0 (the point ramifies), false when u = x - x0.
    pub in_y: bool,
    pub xs: PowerSeries<Fq>,
    pub ys: PowerSeries<Fq>,
}

/// Taylor coefficients of p at x0: coefficient l is (D_l p)(x0).
fn taylor_at(p: &UniPoly<Fq>, x0: &u64) -> UniPoly<Fq> {
    let deg = p.deg().unwrap_or(0);
    UniPoly::new(p.field(), (0..=deg).map(|l| d_poly(p, l).eval(x0)).collect())
}

fn poly_pow(p: &UniPoly<Fq>, e: usize) -> UniPoly<Fq> {
    p.pow(e as u64)
}

impl LocalExpansion {
    pub fn at(curve: &CabCurve<Fq>, p: &Point, prec: i64) -> Result<Self> {
        let e = p.field();
        let f = curve.f_over(e)?;
        let (x0, y0) = (p.x(), p.y());
        let fy0 = map_bipoly(curve.fy(), e)?;
        let unramified = crate::curve::eval_bipoly_at(&fy0, &x0, &y0) != 0;
        if unramified {
            // f(x0 + u, y0 + Y) = sum_k Y^k sum_j C(j, k) y0^{j-k} f_j(x0 + u).
            let shifted: Vec<UniPoly<Fq>> = f.iter().map(|fj| taylor_at(fj, &x0)).collect();
            let coeffs: Vec<UniPoly<Fq>> = (0..f.len())
                .map(|k| {
                    let mut acc = UniPoly::zero(e);
                    for (j, sj) in shifted.iter().enumerate().skip(k) {
                        let c = e.mul(
                            &crate::hasse_schmidt::binomial_in(e, j as i64, k as u64),
                            &e.pow(&y0, (j - k) as u64),
                        );
                        acc = &acc + &sj.scale(&c);
                    }
                    acc
                })
                .collect();
            let dy = series_newton_solve(&coeffs, &e.zero(), prec)?;
            let ys = dy.add(&PowerSeries::constant(e, y0, prec));
            let xs = PowerSeries::new(e, 0, vec![x0, e.one()], prec);
            Ok(LocalExpansion { in_y: false, xs, ys })
        } else {
            // f(x0 + X, y0 + u) = sum_k X^k sum_j (D_k f_j)(x0) (y0 + u)^j.
            let max_k = f.iter().filter_map(|c| c.deg()).max().unwrap_or(0);
            let yu = UniPoly::new(e, vec![y0, e.one()]);
            let coeffs: Vec<UniPoly<Fq>> = (0..=max_k)
                .map(|k| {
                    let mut acc = UniPoly::zero(e);
                    for (j, fj) in f.iter().enumerate() {
                        let c = d_poly(fj, k).eval(&x0);
                        if c != 0 {
                            acc = &acc + &poly_pow(&yu, j).scale(&c);
                        }
                    }
                    acc
                })
                .collect();
            let dx = series_newton_solve(&coeffs, &e.zero(), prec)
                .map_err(|err| Error::Invalid(format!("singular point {x0}, {y0}: {err}")))?;
            let xs = dx.add(&PowerSeries::constant(e, x0, prec));
            let ys = PowerSeries::new(e, 0, vec![y0, e.one()], prec);
            Ok(LocalExpansion { in_y: true, xs, ys })
        }
    }

    /// Value of a bivariate polynomial (already over the point's field).
    pub fn eval_bipoly(&self, p: &BiPoly<Fq>) -> PowerSeries<Fq> {
        let prec = self.xs.prec();
        let f = self.xs.field();
        let mut acc = PowerSeries::zero(f, prec);
        for c in p.iter().rev() {
            acc = acc.mul(&self.ys).add(&self.xs.eval_poly(c));
        }
        acc
    }
}

/// Valuation of a nonzero function-field element at an affine point,
/// doubling the series precision up to `cap`.
pub fn valuation_at(u: &FFElem<Fq>, p: &Point, cap: usize) -> Result<i64> {
    if u.is_zero() {
        return invalid("valuation of zero");
    }
    let e = p.field();
    let num = map_bipoly(u.num(), e)?;
    let emb = embedding(u.curve().field(), e)?;
    let den = u.den().map_field(e, |c| emb.map(c));
    let mut prec = 16i64;
    loop {
        let loc = LocalExpansion::at(u.curve(), p, prec)?;
        let vn = loc.eval_bipoly(&num).valuation();
        let vd = loc.xs.eval_poly(&den).valuation();
        if let (Some(vn), Some(vd)) = (vn, vd) {
            return Ok(vn - vd);
        }
        if prec as usize >= cap {
            return Err(Error::CapExceeded(format!("series precision {cap} too small for a valuation")));
        }
        prec = (2 * prec).min(cap as i64);
    }
}

/// Valuation at any place.
pub fn valuation_at_place(u: &FFElem<Fq>, place: &Place, cap: usize) -> Result<i64> {
    match place {
        Place::Infinity => Ok(-u.pole_order_at_infinity()?),
        Place::Finite(p) => valuation_at(u, p, cap),
    }
}

/// First index e with a nonzero coefficient and first index r prime to p
/// with a nonzero coefficient.
fn e_and_r<F: Field>(s: &PowerSeries<F>, p: u64) -> Option<(usize, usize)> {
    let e = s.valuation()?;
    let r = (e..s.prec()).find(|&m| (p == 0 || !(m as u64).is_multiple_of(p)) && !s.field().is_zero(&s.coeff(m)))?;
    Some((e as usize, r as usize))
}

/// A closed point of the ramification locus; `degree` geometric points.
#[derive(Clone, Debug)]
pub struct RamPoint {
    pub place: Place,
    pub degree: usize,
    pub e: usize,
    pub r: usize,
    /// x - x0 in u = y - y0, or 1/x in the uniformizer at infinity.
    pub expansion: PowerSeries<Fq>,
    /// v(z_gamma) for gamma = 0..a-1.
    pub vz: Vec<i64>,
}

impl RamPoint {
    pub fn is_tame(&self) -> bool {
        self.r == self.e
    }
}

/// One row of a ramification profile; `count` geometric points share it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfilePoint {
    #[serde(default)]
    pub label: String,
    #[serde(default = "one")]
    pub count: usize,
    pub e: usize,
    pub r: usize,
    /// v(z_gamma) for gamma = 0..d-1 (the first entry is 0).
    pub vz: Vec<i64>,
}

fn one() -> usize {
    1
}

/// Ramification data consumed by the bounds: computed from a curve or
/// supplied by hand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RamificationProfile {
    pub g: usize,
    pub d: usize,
    /// delta(gamma) = pole order of z_gamma, gamma = 0..d-1.
    pub delta_gamma: Vec<usize>,
    pub points: Vec<ProfilePoint>,
    /// False when closed points beyond the extension cap were skipped.
    #[serde(default = "yes")]
    pub complete: bool,
}

fn yes() -> bool {
    true
}

fn numeric_strings_to_numbers(v: &mut Value) {
    match v {
        Value::String(s) => {
            if let Ok(n) = s.parse::<i64>() {
                *v = Value::from(n);
            }
        }
        Value::Array(a) => a.iter_mut().for_each(numeric_strings_to_numbers),
        Value::Object(o) => {
            for (k, x) in o.iter_mut() {
                if k != "label" {
                    numeric_strings_to_numbers(x);
                }
            }
        }
        _ => {}
    }
}

/// Outcome of the Riemann–Hurwitz identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhCheck {
    pub lhs: usize,
    pub rhs: usize,
    pub rho: usize,
    pub holds: bool,
    pub rho_bound_holds: bool,
}

impl RamificationProfile {
    /// Accepts plain JSON numbers or the numeric strings used in reports.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut v: Value = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("profile: {e}")))?;
        numeric_strings_to_numbers(&mut v);
        let stated_rho = v.as_object_mut().and_then(|o| o.remove("rho"));
        let p: Self = serde_json::from_value(v).map_err(|e| Error::Invalid(format!("profile: {e}")))?;
        if let Some(rho) = stated_rho {
            if rho.as_u64() != Some(p.rho() as u64) {
                return invalid(format!("profile: rho = {rho} but the points sum to {}", p.rho()));
            }
        }
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return invalid("profile needs d >= 2");
        }
        if self.delta_gamma.len() != self.d {
            return invalid(format!("delta_gamma needs {} entries", self.d));
        }
        for (k, pt) in self.points.iter().enumerate() {
            if pt.vz.len() != self.d {
                return invalid(format!("point {k}: vz needs {} entries", self.d));
            }
            if pt.e < 1 || pt.r < pt.e {
                return invalid(format!("point {k}: need 1 <= e <= r"));
            }
        }
        Ok(())
    }

    /// rho = |R| counted over the closure.
    pub fn rho(&self) -> usize {
        self.points.iter().map(|p| p.count).sum()
    }

    pub fn sum_e_minus_2(&self) -> i64 {
        self.points.iter().map(|p| p.count as i64 * (p.e as i64 - 2)).sum()
    }

    pub fn sum_r_minus_e(&self) -> i64 {
        self.points.iter().map(|p| p.count as i64 * (p.r as i64 - p.e as i64)).sum()
    }

    /// Sum over R of v(z_gamma).
    pub fn sum_vz(&self, gamma: usize) -> i64 {
        self.points.iter().map(|p| p.count as i64 * p.vz[gamma]).sum()
    }

    pub fn is_tame(&self) -> bool {
        self.points.iter().all(|p| p.r == p.e)
    }

    pub fn check_riemann_hurwitz(&self) -> Result<RhCheck> {
        if !self.complete {
            return Err(Error::CapExceeded("profile is incomplete; raise the extension cap".into()));
        }
        let lhs: usize = self.points.iter().map(|p| p.count * (p.r - 1)).sum();
        let rhs = 2 * (self.g + self.d - 1);
        let rho = self.rho();
        Ok(RhCheck { lhs, rhs, rho, holds: lhs == rhs, rho_bound_holds: rho <= rhs })
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "g": self.g.to_string(),
            "d": self.d.to_string(),
            "rho": self.rho().to_string(),
            "complete": self.complete,
            "delta_gamma": self.delta_gamma.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "points": self.points.iter().map(|p| json!({
                "label": p.label,
                "count": p.count.to_string(),
                "e": p.e.to_string(),
                "r": p.r.to_string(),
                "vz": p.vz.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// The full ramification locus of x over a finite field.
#[derive(Clone, Debug)]
pub struct Ramification {
    pub points: Vec<RamPoint>,
    pub skipped_degrees: Vec<usize>,
    pub profile: RamificationProfile,
}

impl Ramification {
    /// Whether an affine point lies in R (compared inside its own field).
    pub fn contains(&self, curve: &CabCurve<Fq>, p: &Point) -> Result<bool> {
        let fy = map_bipoly(curve.fy(), p.field())?;
        Ok(crate::curve::eval_bipoly_at(&fy, &p.x(), &p.y()) == 0)
    }
}

/// z_gamma = y^{j(gamma)} + correction, as a bivariate polynomial.
pub fn z_gamma<F: Field>(curve: &CabCurve<F>, gamma: usize) -> BiPoly<F> {
    let field = curve.field();
    let j = curve.j_of_class(gamma);
    let mut z = vec![UniPoly::zero(field); curve.a()];
    z[j] = UniPoly::one(field);
    if let Some(c) = curve.z_corrections().get(gamma) {
        for (k, ck) in c.iter().enumerate() {
            z[k] = &z[k] + ck;
        }
    }
    z
}

/// Ramification locus with (e, r) and v(z_gamma) for every point.
pub fn ramification_locus(curve: &Curve<Fq>, cap: usize, series_cap: usize) -> Result<Ramification> {
    let a = curve.a();
    let p = curve.field().p();
    let g = curve.genus();
    let need = 2 * (g + a) as i64 + 4;
    let mut points = Vec::new();

    // Infinity.
    let mut prec = need;
    let (inf_series, e, r) = loop {
        let exp = InfinityExpansion::new(curve, prec)?;
        let s = exp.inv_x(a)?;
        if let Some((e, r)) = e_and_r(&s, p) {
            break (s, e, r);
        }
        if prec as usize >= series_cap {
            return Err(Error::CapExceeded("no index prime to p in the expansion at infinity".into()));
        }
        prec = (2 * prec).min(series_cap as i64);
    };
    let vz_inf: Vec<i64> =
        (0..a).map(|gm| -FFElem::from_bipoly(curve, z_gamma(curve, gm)).pole_order_at_infinity().unwrap()).collect();
    points.push(RamPoint { place: Place::Infinity, degree: 1, e, r, expansion: inf_series, vz: vz_inf });

    // Finite points: common zeros of f and f_y.
    let norm = FFElem::from_bipoly(curve, curve.fy().clone()).num_norm();
    if norm.is_zero() {
        return invalid("f_y vanishes identically: x is not separable");
    }
    let mut skipped = Vec::new();
    if norm.degree() > 0 {
        let found = curve.points_above(&norm, &[curve.fy().clone()], cap)?;
        skipped = found.skipped_degrees.clone();
        let base = curve.field().clone();
        let mut seen = std::collections::HashSet::new();
        for pt in &found.points {
            if seen.contains(pt) {
                continue;
            }
            let orbit = pt.orbit(&base);
            seen.extend(orbit.iter().cloned());
            let mut prec = need;
            let (series, e, r) = loop {
                let loc = LocalExpansion::at(curve, pt, prec)?;
                let s = loc.xs.sub(&PowerSeries::constant(pt.field(), pt.x(), prec));
                if let Some((e, r)) = e_and_r(&s, p) {
                    break (s, e, r);
                }
                if prec as usize >= series_cap {
                    return Err(Error::CapExceeded("no index prime to p in a local expansion".into()));
                }
                prec = (2 * prec).min(series_cap as i64);
            };
            let vz = (0..a)
                .map(|gm| valuation_at(&FFElem::from_bipoly(curve, z_gamma(curve, gm)), pt, series_cap))
                .collect::<Result<Vec<_>>>()?;
            points.push(RamPoint {
                place: Place::Finite(pt.clone()),
                degree: orbit.len(),
                e,
                r,
                expansion: series,
                vz,
            });
        }
    }
    let profile = RamificationProfile {
        g,
        d: a,
        delta_gamma: (0..a).map(|gm| curve.b() * curve.j_of_class(gm)).collect(),
        points: points
            .iter()
            .map(|rp| ProfilePoint {
                label: match &rp.place {
                    Place::Infinity => "infinity".into(),
                    Place::Finite(pt) => {
                        format!("({}, {})", pt.field().fmt_elem(&pt.x()), pt.field().fmt_elem(&pt.y()))
                    }
                },
                count: rp.degree,
                e: rp.e,
                r: rp.r,
                vz: rp.vz.clone(),
            })
            .collect(),
        complete: skipped.is_empty(),
    };
    Ok(Ramification { points, skipped_degrees: skipped, profile })
}

/// A violation of the lower bound for v(D_n f) at a ramified point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationViolation {
    pub point: String,
    pub basis: (usize, usize),
    pub n: usize,
    pub valuation: i64,
    pub bound: i64,
}

/// Summary of the derivative-valuation check.
#[derive(Clone, Debug, Default)]
pub struct ValuationCheck {
    pub checked: usize,
    pub violations: Vec<ValuationViolation>,
}

/// Check v(D_n f) >= bound for f = x^i y^j in `basis`, every point of R and
/// 1 <= n <= n_max. The bound is (n-1)e - (2n-1)r + v(f) at affine points
/// and (3n-1)d - (2n-1)r + v(f) at infinity.
pub fn check_valuation_bounds(
    curve: &Curve<Fq>,
    ram: &Ramification,
    basis: &[(usize, usize)],
    n_max: usize,
    series_cap: usize,
) -> Result<ValuationCheck> {
    let mut out = ValuationCheck::default();
    let d = curve.a() as i64;
    for &(i, j) in basis {
        let f = FFElem::monomial(curve, 1, i, j);
        let ders: Vec<FFElem<Fq>> = (1..=n_max).map(|n| d_of_bipoly(curve, n, f.num())).collect();
        for rp in &ram.points {
            let vf = valuation_at_place(&f, &rp.place, series_cap)?;
            let (e, r) = (rp.e as i64, rp.r as i64);
            for (k, df) in ders.iter().enumerate() {
                let n = k as i64 + 1;
                if df.is_zero() {
                    out.checked += 1;
                    continue;
                }
                let v = valuation_at_place(df, &rp.place, series_cap)?;
                let bound = match rp.place {
                    Place::Infinity => (3 * n - 1) * d - (2 * n - 1) * r + vf,
                    Place::Finite(_) => (n - 1) * e - (2 * n - 1) * r + vf,
                };
                out.checked += 1;
                if v < bound {
                    out.violations.push(ValuationViolation {
                        point: format!("{:?}", rp.place),
                        basis: (i, j),
                        n: n as usize,
                        valuation: v,
                        bound,
                    });
                }
            }
        }
    }
    Ok(out)
}
