//! Points of X whose image in the Jacobian has order dividing N.
//!
//! Finite points off the ramification locus are found as common zeros of
//! nonzero maximal Wronskian minors and kept when the evaluated matrix drops
//! rank. Ramified points are decided by an independent test: whether some
//! function in L(N[∞]) vanishes to order N at the point, read off from the
//! Taylor coefficients of the basis monomials.

use std::collections::{BTreeSet, HashMap};

use serde_json::{json, Value};

use crate::curve::{Curve, Place, Point, SemigroupData};
use crate::error::{Error, Result};
use crate::exact_arith::{linalg, Field, Fq};
use crate::local::{ramification_locus, valuation_at, LocalExpansion, Ramification};
use crate::poly::UniPoly;
use crate::wronskian::{delta, minor_prime, selector_r, PointEvaluator, Variant};

/// Largest number of maximal minors combined when searching for candidates.
pub const MAX_MINORS: usize = 32;

/// How a point's membership was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verification {
    WronskianRank,
    Oracle,
    Both,
}

impl Verification {
    fn as_str(self) -> &'static str {
        match self {
            Verification::WronskianRank => "wronskian_rank",
            Verification::Oracle => "oracle",
            Verification::Both => "both",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionPoint {
    pub place: Place,
    pub in_ramification_locus: bool,
    pub verified_by: Verification,
    /// Degree over the base field of the point's field of definition.
    pub degree: usize,
}

impl TorsionPoint {
    pub fn to_json(&self) -> Value {
        json!({
            "point": self.place.to_json(),
            "in_ramification_locus": self.in_ramification_locus,
            "verified_by": self.verified_by.as_str(),
            "degree": self.degree.to_string(),
        })
    }
}

/// X[N] over the algebraic closure, restricted to fields of degree at most
/// `cap` over the base field.
#[derive(Clone, Debug)]
pub struct TorsionReport {
    pub n: usize,
    pub points: Vec<TorsionPoint>,
    pub cap: usize,
    /// Degrees of closed points that were not examined because of the cap.
    pub skipped_degrees: Vec<usize>,
    pub shortcut: Option<String>,
    /// Description of the minors whose common zeros gave the candidates.
    pub minors_used: Vec<String>,
    pub delta_is_zero: Option<bool>,
    /// Sizes of the Frobenius orbits of the finite points.
    pub orbit_sizes: Vec<usize>,
}

impl TorsionReport {
    pub fn count(&self) -> usize {
        self.points.len()
    }

    /// True when no closed point was skipped, so `count` equals |X[N]|.
    pub fn is_complete(&self) -> bool {
        self.skipped_degrees.is_empty()
    }

    pub fn finite_points(&self) -> impl Iterator<Item = &Point> {
        self.points.iter().filter_map(|t| match &t.place {
            Place::Finite(p) => Some(p),
            Place::Infinity => None,
        })
    }

    fn only_infinity(n: usize, cap: usize, reason: String) -> Self {
        TorsionReport {
            n,
            points: vec![infinity_point()],
            cap,
            skipped_degrees: Vec::new(),
            shortcut: Some(reason),
            minors_used: Vec::new(),
            delta_is_zero: None,
            orbit_sizes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "N": self.n.to_string(),
            "count": self.count().to_string(),
            "complete": self.is_complete(),
            "cap": self.cap.to_string(),
            "skipped_degrees": self.skipped_degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "shortcut": self.shortcut,
            "minors_used": self.minors_used,
            "delta_is_zero": self.delta_is_zero,
            "orbit_sizes": self.orbit_sizes.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "points": self.points.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
        })
    }
}

fn infinity_point() -> TorsionPoint {
    TorsionPoint { place: Place::Infinity, in_ramification_locus: true, verified_by: Verification::Oracle, degree: 1 }
}

/// X[N] = {∞} without computation: when N is not a pole order at ∞, or when
/// only powers of x have pole order at most N and a does not divide N.
pub fn small_order_shortcut(a: usize, b: usize, n: usize) -> Option<String> {
    let sg = SemigroupData::new(a, b, n);
    if !sg.delta.contains(&n) {
        return Some(format!("{n} is not a pole order at infinity"));
    }
    if sg.n_gamma[1..].iter().all(|&k| k == 0) && !n.is_multiple_of(a) {
        return Some(format!("only powers of x lie in L({n}[∞]) and {a} does not divide {n}"));
    }
    None
}

/// Whether some nonzero f in L(N[∞]) vanishes to order at least N at p: the
/// N x 𝒟_N matrix of Taylor coefficients of the basis has a kernel.
pub fn is_torsion_oracle(curve: &Curve<Fq>, p: &Point, n: usize, series_cap: usize) -> Result<bool> {
    if n > series_cap {
        return Err(Error::CapExceeded(format!("order {n} exceeds the series cap {series_cap}")));
    }
    let sg = SemigroupData::new(curve.a(), curve.b(), n);
    let loc = LocalExpansion::at(curve, p, n as i64)?;
    let e = p.field();
    let ypow: Vec<_> =
        std::iter::successors(Some(crate::poly::PowerSeries::constant(e, e.one(), n as i64)), |s| Some(s.mul(&loc.ys)))
            .take(curve.a())
            .collect();
    let xpow_max = sg.basis.iter().map(|&(i, _)| i).max().unwrap_or(0);
    let xpow: Vec<_> =
        std::iter::successors(Some(crate::poly::PowerSeries::constant(e, e.one(), n as i64)), |s| Some(s.mul(&loc.xs)))
            .take(xpow_max + 1)
            .collect();
    let cols: Vec<Vec<u64>> = sg
        .basis
        .iter()
        .map(|&(i, j)| {
            let s = xpow[i].mul(&ypow[j]);
            (0..n as i64).map(|k| s.coeff(k)).collect()
        })
        .collect();
    let rows: Vec<Vec<u64>> = (0..n).map(|k| cols.iter().map(|c| c[k]).collect()).collect();
    Ok(linalg::rank(e, rows) < sg.dn)
}

/// Candidate minors: Δ_N, the Π_{N,s^{(r)}}, then other selectors that
/// contain 1..N_0, at most `MAX_MINORS` of them in total.
fn candidate_selectors(sg: &SemigroupData) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for r in (0..=sg.n - sg.dn).rev() {
        let s = selector_r(sg, r).expect("r in range");
        if !out.contains(&s) {
            out.push(s);
        }
    }
    let k = sg.dn - sg.n0;
    let pool: Vec<usize> = (sg.n0 + 1..=sg.n).collect();
    let mut idx: Vec<usize> = (0..k).collect();
    while out.len() < MAX_MINORS {
        let mut s: Vec<usize> = (1..=sg.n0).collect();
        s.extend(idx.iter().map(|&i| pool[i]));
        if !out.contains(&s) {
            out.push(s);
        }
        // Next k-subset of the pool in lexicographic order.
        let Some(pos) = (0..k).rev().find(|&i| idx[i] < pool.len() - k + i) else {
            break;
        };
        idx[pos] += 1;
        for i in pos + 1..k {
            idx[i] = idx[i - 1] + 1;
        }
    }
    out
}

fn describe_selector(sg: &SemigroupData, s: &[usize]) -> String {
    if s.iter().enumerate().all(|(i, &c)| c == i + 1) {
        return format!("Delta_{}", sg.n);
    }
    if let Some(r) = (0..sg.n - sg.dn).find(|&r| selector_r(sg, r).is_ok_and(|t| t == s)) {
        return format!("Pi_{{{},s^({r})}}", sg.n);
    }
    format!("Pi_{{{},{:?}}}", sg.n, s)
}

/// X[N] over extensions of degree at most `cap`.
pub fn torsion_points(curve: &Curve<Fq>, n: usize, cap: usize, series_cap: usize) -> Result<TorsionReport> {
    let ram = ramification_locus(curve, cap, series_cap)?;
    torsion_points_with(curve, &ram, n, cap, series_cap)
}

/// As `torsion_points`, reusing a computed ramification locus.
pub fn torsion_points_with(
    curve: &Curve<Fq>,
    ram: &Ramification,
    n: usize,
    cap: usize,
    series_cap: usize,
) -> Result<TorsionReport> {
    if n < 2 {
        return Err(Error::Invalid(format!("level N = {n} must be at least 2")));
    }
    if let Some(reason) = small_order_shortcut(curve.a(), curve.b(), n) {
        return Ok(TorsionReport::only_infinity(n, cap, reason));
    }
    let sg = SemigroupData::new(curve.a(), curve.b(), n);
    let base = curve.field().clone();

    // Common zeros of the nonzero minors tested.
    let mut gcd: Option<UniPoly<Fq>> = None;
    let mut nums = Vec::new();
    let mut used = Vec::new();
    let delta_n = delta(curve, n)?;
    for s in candidate_selectors(&sg) {
        let pi =
            if s.iter().enumerate().all(|(i, &c)| c == i + 1) { delta_n.clone() } else { minor_prime(curve, n, &s)? };
        if pi.is_zero() {
            continue;
        }
        let norm = pi.num_norm();
        gcd = Some(match gcd {
            None => norm,
            Some(g) => g.gcd(&norm),
        });
        nums.push(pi.num().clone());
        used.push(describe_selector(&sg, &s));
        if gcd.as_ref().is_some_and(|g| g.degree() == 0) {
            break;
        }
    }
    let Some(gcd) = gcd else {
        return Err(Error::Invalid(format!(
            "no nonzero maximal minor among {} selectors at N = {n}",
            candidate_selectors(&sg).len()
        )));
    };

    let mut points = vec![infinity_point()];
    let mut skipped: BTreeSet<usize> = ram.skipped_degrees.iter().copied().collect();
    let mut evaluators: HashMap<Fq, PointEvaluator> = HashMap::new();
    if gcd.degree() > 0 {
        let found = curve.points_above(&gcd.squarefree_part(), &nums, cap)?;
        skipped.extend(found.skipped_degrees.iter().copied());
        for p in found.points {
            if ram.contains(curve, &p)? {
                continue;
            }
            if !evaluators.contains_key(p.field()) {
                evaluators.insert(p.field().clone(), PointEvaluator::new(curve, n, Variant::NStacked, p.field())?);
            }
            let by_rank = evaluators[p.field()].rank_at(&p, 0)? < sg.dn;
            let by_oracle = is_torsion_oracle(curve, &p, n, series_cap)?;
            if by_rank != by_oracle {
                return Err(Error::Invalid(format!(
                    "rank criterion ({by_rank}) and oracle ({by_oracle}) disagree at {}",
                    p.to_json()
                )));
            }
            if by_rank {
                let degree = p.degree_over(&base);
                points.push(TorsionPoint {
                    place: Place::Finite(p),
                    in_ramification_locus: false,
                    verified_by: Verification::Both,
                    degree,
                });
            }
        }
    }
    for rp in &ram.points {
        let Place::Finite(p) = &rp.place else { continue };
        if is_torsion_oracle(curve, p, n, series_cap)? {
            for q in p.orbit(&base) {
                points.push(TorsionPoint {
                    place: Place::Finite(q),
                    in_ramification_locus: true,
                    verified_by: Verification::Oracle,
                    degree: rp.degree,
                });
            }
        }
    }
    let orbit_sizes = orbit_sizes(&points, &base)?;
    Ok(TorsionReport {
        n,
        points,
        cap,
        skipped_degrees: skipped.into_iter().collect(),
        shortcut: None,
        minors_used: used,
        delta_is_zero: Some(delta_n.is_zero()),
        orbit_sizes,
    })
}

/// Sizes of the Frobenius orbits of the finite points, checking that each
/// orbit is contained in the list.
fn orbit_sizes(points: &[TorsionPoint], base: &Fq) -> Result<Vec<usize>> {
    let finite: Vec<&Point> = points
        .iter()
        .filter_map(|t| match &t.place {
            Place::Finite(p) => Some(p),
            Place::Infinity => None,
        })
        .collect();
    let all: BTreeSet<&Point> = finite.iter().copied().collect();
    let mut seen: BTreeSet<Point> = BTreeSet::new();
    let mut sizes = Vec::new();
    for p in finite {
        if seen.contains(p) {
            continue;
        }
        let orbit = p.orbit(base);
        if orbit.iter().any(|q| !all.contains(q)) {
            return Err(Error::Invalid("torsion set is not closed under Frobenius".into()));
        }
        sizes.push(orbit.len());
        seen.extend(orbit);
    }
    sizes.sort_unstable();
    Ok(sizes)
}

/// X[a] = {ξ ∈ ℛ : e_ξ = a}, the totally ramified points.
pub fn d_torsion(curve: &Curve<Fq>, ram: &Ramification) -> Result<TorsionReport> {
    let a = curve.a();
    let base = curve.field().clone();
    let mut points = vec![infinity_point()];
    for rp in &ram.points {
        let Place::Finite(p) = &rp.place else { continue };
        if rp.e == a {
            for q in p.orbit(&base) {
                points.push(TorsionPoint {
                    place: Place::Finite(q),
                    in_ramification_locus: true,
                    verified_by: Verification::Oracle,
                    degree: rp.degree,
                });
            }
        }
    }
    let bound = 2 * (curve.genus() + a - 1) / (a - 1);
    if points.len() > bound {
        return Err(Error::Invalid(format!(
            "{} totally ramified points exceed 2(g+d-1)/(d-1) = {bound}",
            points.len()
        )));
    }
    let orbit_sizes = orbit_sizes(&points, &base)?;
    Ok(TorsionReport {
        n: a,
        points,
        cap: 0,
        skipped_degrees: ram.skipped_degrees.clone(),
        shortcut: Some("totally ramified points".into()),
        minors_used: Vec::new(),
        delta_is_zero: None,
        orbit_sizes,
    })
}

/// Vanishing orders of minors at a torsion point off ℛ, with the lower
/// bounds they must satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingCheck {
    pub n: usize,
    pub r: usize,
    /// Selector of the nonzero minor Π_{N,s} used for the first bound.
    pub selector: Vec<usize>,
    pub minor_order: i64,
    /// N + 1 - s_{𝒟_N}.
    pub minor_bound: i64,
    /// v(Δ_{N+r}) when Δ_{N+r} is nonzero.
    pub delta_order: Option<i64>,
    /// ℓ (N + ℓ - 𝒟_{N+r}) with ℓ = ⌊r/a⌋ + 1.
    pub delta_bound: i64,
}

impl VanishingCheck {
    pub fn holds(&self) -> bool {
        self.minor_order >= self.minor_bound && self.delta_order.is_none_or(|v| v >= self.delta_bound)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "N": self.n.to_string(),
            "r": self.r.to_string(),
            "selector": self.selector.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "minor_order": self.minor_order.to_string(),
            "minor_bound": self.minor_bound.to_string(),
            "delta_order": self.delta_order.map(|v| v.to_string()),
            "delta_bound": self.delta_bound.to_string(),
            "holds": self.holds(),
        })
    }
}

pub fn vanishing_order_check(
    curve: &Curve<Fq>,
    n: usize,
    r: usize,
    p: &Point,
    series_cap: usize,
) -> Result<VanishingCheck> {
    let sg = SemigroupData::new(curve.a(), curve.b(), n);
    let mut chosen = None;
    for s in candidate_selectors(&sg) {
        let pi = minor_prime(curve, n, &s)?;
        if !pi.is_zero() {
            chosen = Some((s, pi));
            break;
        }
    }
    let Some((selector, pi)) = chosen else {
        return Err(Error::Invalid(format!("every tested maximal minor vanishes at N = {n}")));
    };
    let minor_order = valuation_at(&pi, p, series_cap)?;
    let minor_bound = (n + 1) as i64 - *selector.last().unwrap() as i64;
    let big = SemigroupData::new(curve.a(), curve.b(), n + r);
    let ell = (r / curve.a() + 1) as i64;
    let delta_bound = ell * ((n as i64) + ell - big.dn as i64);
    let dr = delta(curve, n + r)?;
    let delta_order = if dr.is_zero() { None } else { Some(valuation_at(&dr, p, series_cap)?) };
    Ok(VanishingCheck { n, r, selector, minor_order, minor_bound, delta_order, delta_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CabCurve;
    use crate::local::DEFAULT_SERIES_CAP;

    fn fq_curve(p: u64, a: usize, b: usize, terms: &[(usize, usize, i64)]) -> Curve<Fq> {
        let f = Fq::prime(p).unwrap();
        let t: Vec<_> = terms.iter().map(|&(i, j, c)| (i, j, f.from_i64(c))).collect();
        CabCurve::new(&f, a, b, &t).unwrap()
    }

    fn quartic(p: u64) -> Curve<Fq> {
        fq_curve(p, 3, 4, &[(0, 3, 1), (0, 1, -1), (4, 0, -1)])
    }

    #[test]
    fn shortcuts() {
        assert!(small_order_shortcut(3, 4, 5).is_some());
        assert!(small_order_shortcut(3, 4, 2).is_some());
        assert!(small_order_shortcut(3, 4, 4).is_none());
        assert!(small_order_shortcut(3, 10, 7).is_some());
        assert!(small_order_shortcut(3, 10, 9).is_none());
        let r = torsion_points(&quartic(7), 5, 4, DEFAULT_SERIES_CAP).unwrap();
        assert_eq!(r.count(), 1);
    }

    #[test]
    fn quartic_four_torsion_char_three() {
        let c = quartic(3);
        let r = torsion_points(&c, 4, 8, DEFAULT_SERIES_CAP).unwrap();
        assert!(r.is_complete());
        assert_eq!(r.count(), 28);
        assert_eq!(r.delta_is_zero, Some(true));
    }

    #[test]
    fn quartic_four_torsion_char_seven() {
        let c = quartic(7);
        let r = torsion_points(&c, 4, 8, DEFAULT_SERIES_CAP).unwrap();
        assert!(r.is_complete());
        assert_eq!(r.count(), 12);
        assert_eq!(r.orbit_sizes, vec![1, 1, 1, 2, 2, 2, 2]);
        // x (x^4 - 2x^2 + 2)(x^4 + 2x^2 + 2) = x^9 + 4x.
        let mut xs = BTreeSet::new();
        for p in r.finite_points() {
            let e = p.field();
            let h = UniPoly::from_i64s(e, &[0, 4, 0, 0, 0, 0, 0, 0, 0, 1]);
            assert_eq!(h.eval(&p.x()), 0);
            xs.insert((e.degree(), p.x()));
        }
        assert_eq!(xs.len(), 9);
    }

    #[test]
    fn oracle_at_infinity_neighbours() {
        let c = quartic(7);
        let pts = c.affine_points(1).unwrap();
        let ram = ramification_locus(&c, 4, DEFAULT_SERIES_CAP).unwrap();
        for p in &pts {
            if ram.contains(&c, p).unwrap() {
                continue;
            }
            let ev = PointEvaluator::new(&c, 6, Variant::NStacked, p.field()).unwrap();
            let sg = SemigroupData::new(3, 4, 6);
            let by_rank = ev.rank_at(p, 0).unwrap() < sg.dn;
            assert_eq!(by_rank, is_torsion_oracle(&c, p, 6, DEFAULT_SERIES_CAP).unwrap());
        }
    }

    #[test]
    fn three_torsion_is_totally_ramified() {
        let c = quartic(3);
        let ram = ramification_locus(&c, 4, DEFAULT_SERIES_CAP).unwrap();
        let d = d_torsion(&c, &ram).unwrap();
        assert_eq!(d.count(), 1);
        let t = torsion_points_with(&c, &ram, 3, 4, DEFAULT_SERIES_CAP).unwrap();
        assert_eq!(t.count(), 1);
    }

    #[test]
    fn hyperelliptic_two_torsion_is_weierstrass() {
        // y^2 = x^5 - x over F_7: 2-torsion is ∞ plus the five roots.
        let c = fq_curve(7, 2, 5, &[(0, 2, 1), (5, 0, -1), (1, 0, 1)]);
        let ram = ramification_locus(&c, 4, DEFAULT_SERIES_CAP).unwrap();
        let d = d_torsion(&c, &ram).unwrap();
        assert_eq!(d.count(), 6);
        let t = torsion_points_with(&c, &ram, 2, 4, DEFAULT_SERIES_CAP).unwrap();
        assert_eq!(t.count(), 6);
    }

    #[test]
    fn vanishing_orders_on_quartic() {
        let c = quartic(7);
        let r = torsion_points(&c, 4, 8, DEFAULT_SERIES_CAP).unwrap();
        for t in r.points.iter().filter(|t| !t.in_ramification_locus) {
            let Place::Finite(p) = &t.place else { continue };
            let v = vanishing_order_check(&c, 4, 1, p, DEFAULT_SERIES_CAP).unwrap();
            assert!(v.holds(), "{:?}", v);
            assert_eq!(v.minor_bound, 2);
        }
    }
}
