//! Exact evaluation of the cardinality bounds for N-torsion points on the
//! curve. Every value is a rational number; the integer bound is its floor.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::curve::{Curve, SemigroupData};
use crate::error::{invalid, Result};
use crate::exact_arith::{format_rational, Field};
use crate::local::RamificationProfile;
use crate::wronskian::{delta, minor_prime, validate_selector};

/// Whether a bound's hypotheses hold for the given inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Applicability {
    Valid,
    Inapplicable(String),
}

/// Which count a bound controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    /// |X[N]|.
    All,
    /// |X[N] - R|, torsion points off the ramification locus.
    OutsideRamification,
}

impl Scope {
    pub fn as_str(self) -> &'static str {
        match self {
            Scope::All => "all",
            Scope::OutsideRamification => "outside_ramification",
        }
    }
}

/// One evaluated bound with the inputs it was computed from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub formula: &'static str,
    pub scope: Scope,
    /// The bound itself; `None` when the formula is undefined for the inputs.
    pub value: Option<BigRational>,
    pub applicability: Applicability,
    pub inputs: BTreeMap<&'static str, String>,
    /// Intermediate quantities (exact).
    pub extras: BTreeMap<&'static str, BigRational>,
}

impl BoundReport {
    fn new(formula: &'static str, scope: Scope) -> Self {
        BoundReport {
            formula,
            scope,
            value: None,
            applicability: Applicability::Valid,
            inputs: BTreeMap::new(),
            extras: BTreeMap::new(),
        }
    }

    fn input(mut self, key: &'static str, v: impl ToString) -> Self {
        self.inputs.insert(key, v.to_string());
        self
    }

    fn extra(mut self, key: &'static str, v: BigRational) -> Self {
        self.extras.insert(key, v);
        self
    }

    fn value(mut self, v: BigRational) -> Self {
        self.value = Some(v);
        self
    }

    /// Record a failed precondition; the first failure wins.
    fn require(mut self, ok: bool, reason: impl Into<String>) -> Self {
        if !ok && self.applicability == Applicability::Valid {
            self.applicability = Applicability::Inapplicable(reason.into());
        }
        self
    }

    pub fn is_valid(&self) -> bool {
        self.applicability == Applicability::Valid && self.value.is_some()
    }

    /// Floor of the value when the bound applies.
    pub fn integer_bound(&self) -> Option<BigInt> {
        if !self.is_valid() {
            return None;
        }
        self.value.as_ref().map(|v| v.floor().to_integer())
    }

    /// Whether a count is consistent with the bound (vacuous if inapplicable).
    pub fn admits(&self, count: usize) -> bool {
        self.integer_bound().is_none_or(|b| BigInt::from(count) <= b)
    }

    pub fn to_json(&self) -> Value {
        let applicability = match &self.applicability {
            Applicability::Valid => json!("valid"),
            Applicability::Inapplicable(r) => json!({ "inapplicable": r }),
        };
        let inputs: Map<String, Value> = self.inputs.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        let extras: Map<String, Value> =
            self.extras.iter().map(|(k, v)| (k.to_string(), json!(format_rational(v)))).collect();
        json!({
            "formula": self.formula,
            "scope": self.scope.as_str(),
            "value": self.value.as_ref().map(format_rational),
            "integer_bound": self.integer_bound().map(|b| b.to_string()),
            "applicability": applicability,
            "inputs": inputs,
            "extras": extras,
        })
    }
}

/// Counts of basis functions of pole order at most N, split by residue
/// class of the pole order mod d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Levels {
    pub n: usize,
    pub d: usize,
    pub n0: usize,
    pub dn: usize,
    pub n_gamma: Vec<usize>,
    /// S_γ = N_0 + ... + N_γ.
    pub s_gamma: Vec<usize>,
    pub delta_gamma: Vec<usize>,
}

impl Levels {
    /// Levels from the pole orders δ(γ) of the class representatives.
    pub fn new(d: usize, delta_gamma: &[usize], n: usize) -> Result<Self> {
        if d < 2 || delta_gamma.len() != d {
            return invalid(format!("need d >= 2 and {d} pole orders"));
        }
        for (gamma, &dg) in delta_gamma.iter().enumerate() {
            if dg % d != gamma || (gamma == 0 && dg != 0) {
                return invalid(format!("pole order {dg} is not the least element of class {gamma} mod {d}"));
            }
        }
        let n_gamma: Vec<usize> = delta_gamma.iter().map(|&dg| if dg <= n { (n - dg) / d + 1 } else { 0 }).collect();
        let s_gamma: Vec<usize> = n_gamma
            .iter()
            .scan(0, |acc, v| {
                *acc += v;
                Some(*acc)
            })
            .collect();
        Ok(Levels { n, d, n0: n_gamma[0], dn: s_gamma[d - 1], n_gamma, s_gamma, delta_gamma: delta_gamma.to_vec() })
    }

    pub fn from_semigroup(sg: &SemigroupData) -> Self {
        Levels {
            n: sg.n,
            d: sg.a,
            n0: sg.n0,
            dn: sg.dn,
            n_gamma: sg.n_gamma.clone(),
            s_gamma: sg.s_gamma.clone(),
            delta_gamma: sg.delta_gamma.clone(),
        }
    }

    pub fn from_profile(profile: &RamificationProfile, n: usize) -> Result<Self> {
        Levels::new(profile.d, &profile.delta_gamma, n)
    }

    /// The selector s^{(r)}: identity on the first N_0 places, then shifted
    /// by N - 𝒟_N - r.
    pub fn selector(&self, r: usize) -> Result<Vec<usize>> {
        if self.dn > self.n || r > self.n - self.dn {
            return invalid(format!("r = {r} out of range at N = {} with {} basis functions", self.n, self.dn));
        }
        let shift = self.n - self.dn - r;
        Ok((1..=self.dn).map(|i| if i <= self.n0 { i } else { i + shift }).collect())
    }

    fn check(&self, s: &[usize]) -> Result<()> {
        validate_selector(s, self.dn, self.n)
    }
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn selector_string(s: &[usize]) -> String {
    s.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

/// Stable fingerprint of a profile for report inputs.
pub fn profile_hash(profile: &RamificationProfile) -> String {
    let mut h = DefaultHasher::new();
    profile.to_json_value().to_string().hash(&mut h);
    format!("{:016x}", h.finish())
}

/// A_s = Σ_{i=N_0+1}^{𝒟_N} (s_i - i) + Σ_{γ≥1} N_γ S_{γ-1}.
pub fn a_s(lv: &Levels, s: &[usize]) -> Result<BigRational> {
    lv.check(s)?;
    let shifts: usize = (lv.n0 + 1..=lv.dn).map(|i| s[i - 1] - i).sum();
    let classes: usize = (1..lv.d).map(|gm| lv.n_gamma[gm] * lv.s_gamma[gm - 1]).sum();
    Ok(int(shifts + classes))
}

/// Order of vanishing forced at each point of X[N] outside R: N + 1 - s_{𝒟_N}.
fn forced_order(lv: &Levels, s: &[usize]) -> BigRational {
    int(lv.n + 1 - s[lv.dn - 1])
}

fn profile_inputs(r: BoundReport, profile: &RamificationProfile, lv: &Levels, s: &[usize]) -> BoundReport {
    r.input("g", profile.g)
        .input("d", profile.d)
        .input("N", lv.n)
        .input("s", selector_string(s))
        .input("profile_hash", profile_hash(profile))
}

fn check_profile(profile: &RamificationProfile, lv: &Levels) -> Result<()> {
    profile.validate()?;
    if profile.d != lv.d || profile.delta_gamma != lv.delta_gamma {
        return invalid("profile and semigroup disagree on d or the pole orders δ(γ)");
    }
    Ok(())
}

/// Upper bound for the number of zeros of Π_{N,s} outside R, and from it
/// the bound on |X[N] - R|. `minor_nonzero` certifies Π_{N,s} ≠ 0.
pub fn bound_main(profile: &RamificationProfile, lv: &Levels, s: &[usize], minor_nonzero: bool) -> Result<BoundReport> {
    check_profile(profile, lv)?;
    let a = a_s(lv, s)?;
    let g = profile.g as i64;
    let d = profile.d as i64;
    let weight = int(4 * g + 2 * d - 4 - profile.sum_e_minus_2());
    let wild = int((lv.dn - lv.n0) as i64 * profile.sum_r_minus_e());
    let poles: i64 = (1..lv.d).map(|gm| lv.n_gamma[gm] as i64 * profile.sum_vz(gm)).sum();
    let rhs = &a * &weight - wild - int(poles);
    let order = forced_order(lv, s);
    let r = BoundReport::new("main", Scope::OutsideRamification)
        .extra("a_s", a)
        .extra("zeros_outside_ramification", rhs.clone())
        .extra("forced_order", order.clone())
        .value(rhs / order)
        .require(minor_nonzero, "the minor Π_{N,s} is not certified nonzero")
        .require(profile.complete, "profile is incomplete");
    Ok(profile_inputs(r, profile, lv, s))
}

/// The tamely ramified form A_s(ρ + 2g - 2) - Σ_γ N_γ Σ_ξ v_ξ(z_γ),
/// divided by the forced order.
pub fn bound_tame(profile: &RamificationProfile, lv: &Levels, s: &[usize], minor_nonzero: bool) -> Result<BoundReport> {
    check_profile(profile, lv)?;
    let a = a_s(lv, s)?;
    let rho = profile.rho() as i64;
    let poles: i64 = (1..lv.d).map(|gm| lv.n_gamma[gm] as i64 * profile.sum_vz(gm)).sum();
    let rhs = &a * int(rho + 2 * profile.g as i64 - 2) - int(poles);
    let order = forced_order(lv, s);
    let r = BoundReport::new("tame", Scope::OutsideRamification)
        .extra("a_s", a)
        .extra("zeros_outside_ramification", rhs.clone())
        .value(rhs / order)
        .require(profile.is_tame(), "ramification is wild at some point")
        .require(minor_nonzero, "the minor Π_{N,s} is not certified nonzero")
        .require(profile.complete, "profile is incomplete");
    Ok(profile_inputs(r, profile, lv, s))
}

/// Hyperelliptic form 4g A_s / (N + 1 - s_{𝒟_N}).
pub fn bound_hyperelliptic(g: usize, lv: &Levels, s: &[usize], minor_nonzero: bool) -> Result<BoundReport> {
    let a = a_s(lv, s)?;
    let rhs = int(4 * g as i64) * &a;
    let order = forced_order(lv, s);
    Ok(BoundReport::new("hyperelliptic", Scope::OutsideRamification)
        .input("g", g)
        .input("N", lv.n)
        .input("s", selector_string(s))
        .extra("a_s", a)
        .extra("zeros_outside_ramification", rhs.clone())
        .value(rhs / order)
        .require(lv.d == 2, "not a double cover of the line")
        .require(minor_nonzero, "the minor Π_{N,s} is not certified nonzero"))
}

/// Closed form of the hyperelliptic worst case: g(N² - (2g)²) for N even
/// and g(N² - (2g-1)²) for N odd.
pub fn hyperelliptic_worst(g: usize, n: usize) -> BoundReport {
    let (g_i, n_i) = (g as i64, n as i64);
    let m = if n.is_multiple_of(2) { 2 * g_i } else { 2 * g_i - 1 };
    BoundReport::new("hyperelliptic_worst", Scope::OutsideRamification)
        .input("g", g)
        .input("N", n)
        .value(int(g_i * (n_i * n_i - m * m)))
        .require(n >= 2 * g, "needs N >= 2g")
}

/// (3 - 1/g) N² + (8 - 1/g) N + 4g.
pub fn bound_simplified(g: usize, n: usize, delta_nonzero: bool) -> BoundReport {
    let (g_i, n_i) = (g as i64, n as i64);
    let value = if g == 0 {
        None
    } else {
        let inv = frac(1, g_i);
        Some((int(3) - &inv) * int(n_i * n_i) + (int(8) - &inv) * int(n_i) + int(4 * g_i))
    };
    let mut r = BoundReport::new("simplified", Scope::All)
        .input("g", g)
        .input("N", n)
        .input("delta_nonzero", delta_nonzero)
        .require(g >= 1, "genus zero")
        .require(n + 1 >= 2 * g, "needs N >= 2g - 1")
        .require(delta_nonzero, "Δ_N is not certified nonzero");
    r.value = value;
    r
}

/// The unconditional bound ((N-N_0)(N-𝒟_N) + Σ N_γ S_γ)(4g+2d-4) + Σ N_γ δ(γ)
/// on |X[N] - R|.
pub fn bound_worst(g: usize, lv: &Levels) -> BoundReport {
    let (g_i, d_i) = (g as i64, lv.d as i64);
    let head = ((lv.n - lv.n0) * (lv.n - lv.dn)) as i64;
    let classes: i64 = (1..lv.d).map(|gm| (lv.n_gamma[gm] * lv.s_gamma[gm]) as i64).sum();
    let poles: i64 = (1..lv.d).map(|gm| (lv.n_gamma[gm] * lv.delta_gamma[gm]) as i64).sum();
    BoundReport::new("worst", Scope::OutsideRamification)
        .input("g", g)
        .input("d", lv.d)
        .input("N", lv.n)
        .extra("weight", int(head + classes))
        .value(int((head + classes) * (4 * g_i + 2 * d_i - 4) + poles))
}

/// Genus-two trigonal bound on |X[N]|:
/// 3N²/2 + 3N - ½(N-⌊N/3⌋-2)Σ(r-e) - ½⌊N/3⌋Σ(v(z_1)+v(z_2)) + 8.
pub fn bound_genus2(profile: &RamificationProfile, n: usize, delta_nonzero: bool) -> Result<BoundReport> {
    profile.validate()?;
    let n_i = n as i64;
    let third = n_i / 3;
    let vz: i64 = if profile.d == 3 { profile.sum_vz(1) + profile.sum_vz(2) } else { 0 };
    let outside = frac(3 * n_i * n_i, 2) + int(3 * n_i)
        - frac((n_i - third - 2) * profile.sum_r_minus_e(), 2)
        - frac(third * vz, 2);
    Ok(BoundReport::new("genus2", Scope::All)
        .input("g", profile.g)
        .input("d", profile.d)
        .input("N", n)
        .input("delta_nonzero", delta_nonzero)
        .input("profile_hash", profile_hash(profile))
        .extra("outside_ramification", outside.clone())
        .extra("pareschi", frac(3 * n_i * n_i, 2))
        .value(outside + int(8))
        .require(profile.g == 2 && profile.d == 3, "needs genus 2 with a degree-3 map")
        .require(n >= 3, "needs N >= 3")
        .require(delta_nonzero, "Δ_N is not certified nonzero")
        .require(profile.complete, "profile is incomplete"))
}

fn is_power_of(m: u64, p: u64) -> bool {
    if p < 2 || m == 0 {
        return false;
    }
    let mut m = m;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

/// g(N-1)², or g(N+1)² when Frobenius is purely inseparable on the curve
/// and N-1 is a power of p; no bound is available for (p, N) = (2, 3) then.
pub fn bound_old(g: usize, n: usize, p: u64, purely_inseparable: bool) -> BoundReport {
    let (g_i, n_i) = (g as i64, n as i64);
    let exceptional = purely_inseparable && n >= 2 && is_power_of(n as u64 - 1, p);
    let value = if exceptional { g_i * (n_i + 1) * (n_i + 1) } else { g_i * (n_i - 1) * (n_i - 1) };
    BoundReport::new("old", Scope::All)
        .input("g", g)
        .input("N", n)
        .input("p", p)
        .input("purely_inseparable", purely_inseparable)
        .input("branch", if exceptional { "N-1 is a power of p" } else { "generic" })
        .value(int(value))
        .require(n >= 3, "needs N >= 3; X[2] holds every Weierstrass point of a hyperelliptic curve")
        .require(!(exceptional && p == 2 && n == 3), "no bound for (p, N) = (2, 3) in the inseparable case")
}

/// Points of order d: at most 2(g + d - 1)/(d - 1).
pub fn bound_dtorsion(g: usize, d: usize) -> BoundReport {
    let mut r = BoundReport::new("d_torsion", Scope::All).input("g", g).input("d", d).require(d >= 2, "needs d >= 2");
    if d >= 2 {
        r.value = Some(frac(2 * (g + d - 1) as i64, (d - 1) as i64));
    }
    r
}

/// Bounds violated by the counts |X[N]| = `total` and |X[N] - R| = `outside`.
pub fn violations(reports: &[BoundReport], total: usize, outside: usize) -> Vec<&BoundReport> {
    reports
        .iter()
        .filter(|r| {
            !r.admits(match r.scope {
                Scope::All => total,
                Scope::OutsideRamification => outside,
            })
        })
        .collect()
}

/// Every bound that can be evaluated for a curve at level N. Minors are
/// computed directly; `profile` is needed for the ramification-dependent
/// forms and `purely_inseparable` is the externally supplied flag.
pub fn level_bounds<F: Field>(
    curve: &Curve<F>,
    profile: Option<&RamificationProfile>,
    n: usize,
    purely_inseparable: bool,
) -> Result<Vec<BoundReport>> {
    let sg = SemigroupData::new(curve.a(), curve.b(), n);
    let lv = Levels::from_semigroup(&sg);
    let g = sg.genus;
    let mut out = Vec::new();
    let delta_nonzero = n >= 2 && !delta(curve, n)?.is_zero();
    out.push(bound_simplified(g, n, delta_nonzero));
    out.push(bound_worst(g, &lv));
    out.push(bound_old(g, n, curve.field().characteristic(), purely_inseparable));
    if n == lv.d {
        out.push(bound_dtorsion(g, lv.d));
    }
    if n < 2 {
        return Ok(out);
    }
    if lv.d == 2 {
        out.push(hyperelliptic_worst(g, n));
    }
    for r in 0..=n - lv.dn {
        let s = lv.selector(r)?;
        let nonzero = !minor_prime(curve, n, &s)?.is_zero();
        if lv.d == 2 {
            out.push(bound_hyperelliptic(g, &lv, &s, nonzero)?);
        }
        if let Some(prof) = profile {
            out.push(bound_main(prof, &lv, &s, nonzero)?);
            if prof.is_tame() {
                out.push(bound_tame(prof, &lv, &s, nonzero)?);
            }
        }
    }
    if let Some(prof) = profile {
        if prof.g == 2 && prof.d == 3 {
            out.push(bound_genus2(prof, n, delta_nonzero)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::ProfilePoint;

    fn sg_levels(a: usize, b: usize, n: usize) -> Levels {
        Levels::from_semigroup(&SemigroupData::new(a, b, n))
    }

    fn hyper_profile(g: usize, branch: usize) -> RamificationProfile {
        // Tame double cover: 2g+1 finite branch points plus infinity.
        let mut points: Vec<ProfilePoint> = (0..branch)
            .map(|k| ProfilePoint { label: format!("w{k}"), count: 1, e: 2, r: 2, vz: vec![0, 1] })
            .collect();
        points.push(ProfilePoint { label: "infinity".into(), count: 1, e: 2, r: 2, vz: vec![0, -(2 * g as i64 + 1)] });
        RamificationProfile { g, d: 2, delta_gamma: vec![0, 2 * g + 1], points, complete: true }
    }

    #[test]
    fn a_s_for_leftmost_minors() {
        let lv = sg_levels(3, 10, 10);
        assert_eq!((lv.n0, lv.n_gamma.clone()), (4, vec![4, 1, 0]));
        let s: Vec<usize> = (1..=lv.dn).collect();
        assert_eq!(a_s(&lv, &s).unwrap(), int(4));
        for g in 2..5 {
            for n in 2 * g + 1..2 * g + 8 {
                let lv = sg_levels(2, 2 * g + 1, n);
                let s: Vec<usize> = (1..=lv.dn).collect();
                assert_eq!(a_s(&lv, &s).unwrap(), int((lv.n0 * lv.n_gamma[1]) as i64));
            }
        }
    }

    #[test]
    fn a_s_at_rightmost_selector() {
        // Direct evaluation of the definition gives (𝒟_N-N_0)(N-𝒟_N) + Σ N_γ S_{γ-1}.
        for (a, b, n) in [(3, 10, 10), (3, 4, 9), (2, 5, 8), (3, 5, 12)] {
            let lv = sg_levels(a, b, n);
            let s = lv.selector(0).unwrap();
            let classes: usize = (1..a).map(|gm| lv.n_gamma[gm] * lv.s_gamma[gm - 1]).sum();
            let expect = (lv.dn - lv.n0) * (lv.n - lv.dn) + classes;
            assert_eq!(a_s(&lv, &s).unwrap(), int(expect as i64));
        }
        let lv = sg_levels(3, 10, 10);
        assert_eq!(a_s(&lv, &lv.selector(0).unwrap()).unwrap(), int(9));
    }

    #[test]
    fn simplified_examples() {
        assert_eq!(bound_simplified(3, 10, true).value, Some(frac(1066, 3)));
        assert_eq!(bound_simplified(3, 10, true).integer_bound(), Some(BigInt::from(355)));
        assert_eq!(bound_simplified(2, 3, true).value, Some(int(53)));
        assert!(!bound_simplified(3, 4, true).is_valid());
        assert!(!bound_simplified(3, 10, false).is_valid());
    }

    #[test]
    fn old_and_d_torsion_examples() {
        assert_eq!(bound_old(2, 5, 7, false).value, Some(int(32)));
        assert_eq!(bound_old(2, 5, 2, true).value, Some(int(72)));
        assert!(!bound_old(2, 3, 2, true).is_valid());
        assert!(bound_old(2, 3, 3, true).is_valid());
        assert_eq!(bound_dtorsion(3, 3).value, Some(int(5)));
        assert_eq!(bound_dtorsion(2, 2).value, Some(int(6)));
    }

    #[test]
    fn hyperelliptic_remark_values() {
        for g in 1..6 {
            for n in 2 * g + 1..2 * g + 10 {
                let lv = sg_levels(2, 2 * g + 1, n);
                let s = lv.selector(0).unwrap();
                let h = bound_hyperelliptic(g, &lv, &s, true).unwrap();
                assert_eq!(h.value, hyperelliptic_worst(g, n).value, "g={g} N={n}");
            }
            assert_eq!(hyperelliptic_worst(g, 2 * g + 1).value, Some(int(8 * (g * g) as i64)));
        }
    }

    #[test]
    fn tame_hyperelliptic_collapses_to_4g_a_s() {
        for g in 2..5 {
            let prof = hyper_profile(g, 2 * g + 1);
            for n in 2 * g + 1..2 * g + 6 {
                let lv = Levels::from_profile(&prof, n).unwrap();
                for r in 0..=lv.n - lv.dn {
                    let s = lv.selector(r).unwrap();
                    let main = bound_main(&prof, &lv, &s, true).unwrap();
                    let tame = bound_tame(&prof, &lv, &s, true).unwrap();
                    let hyp = bound_hyperelliptic(g, &lv, &s, true).unwrap();
                    assert_eq!(main.value, hyp.value);
                    assert_eq!(tame.value, hyp.value);
                }
            }
        }
    }

    #[test]
    fn worst_dominates_main_at_rightmost_selector() {
        let prof = hyper_profile(2, 5);
        for n in 5..12 {
            let lv = Levels::from_profile(&prof, n).unwrap();
            let main = bound_main(&prof, &lv, &lv.selector(0).unwrap(), true).unwrap();
            assert!(bound_worst(2, &lv).value.unwrap() >= main.value.unwrap());
        }
    }

    #[test]
    fn worst_on_genus_nine_level_ten() {
        // N_0 = 4, 𝒟_10 = 5, N_1 = 1, S_1 = 5, δ(1) = 10, weight 4g+2d-4 = 38.
        let lv = sg_levels(3, 10, 10);
        assert_eq!(bound_worst(9, &lv).value, Some(int((6 * 5 + 5) * 38 + 10)));
    }

    #[test]
    fn genus_two_tame_profile() {
        // Degree-3 map with ρ = 8 simple branch points, tame; z_1, z_2 regular
        // away from infinity, where they have poles of orders 4 and 8.
        let mut points: Vec<ProfilePoint> =
            (0..6).map(|k| ProfilePoint { label: format!("b{k}"), count: 1, e: 2, r: 2, vz: vec![0, 0, 0] }).collect();
        points.push(ProfilePoint { label: "infinity".into(), count: 1, e: 3, r: 3, vz: vec![0, -4, -8] });
        let prof = RamificationProfile { g: 2, d: 3, delta_gamma: vec![0, 4, 8], points, complete: true };
        let b = bound_genus2(&prof, 9, true).unwrap();
        // Σ(r-e) = 0 and Σ(v(z_1)+v(z_2)) = -12: 243/2 + 27 + 18 + 8.
        assert_eq!(b.value, Some(frac(243, 2) + int(27 + 18 + 8)));
        assert_eq!(b.extras["pareschi"], frac(243, 2));
        assert!(!bound_genus2(&prof, 2, true).unwrap().is_valid());
    }

    #[test]
    fn inapplicable_reports_carry_a_reason() {
        let prof = hyper_profile(2, 5);
        let lv = Levels::from_profile(&prof, 6).unwrap();
        let s = lv.selector(0).unwrap();
        let b = bound_main(&prof, &lv, &s, false).unwrap();
        assert!(matches!(b.applicability, Applicability::Inapplicable(_)));
        assert!(b.admits(1_000_000));
        assert_eq!(b.integer_bound(), None);
        assert!(b.to_json()["applicability"]["inapplicable"].is_string());
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let lv = sg_levels(3, 4, 6);
        assert!(a_s(&lv, &[1, 2]).is_err());
        assert!(Levels::new(3, &[0, 5, 8], 6).is_err());
        assert!(Levels::new(3, &[1, 4, 8], 6).is_err());
    }
}
