//! Batch commands behind the `cabtorsion` binary. Each command returns a
//! [`Report`]; the binary only parses flags and prints.

use std::ops::RangeInclusive;

use serde_json::{json, Value};

use crate::bounds::{
    bound_dtorsion, bound_genus2, bound_hyperelliptic, bound_main, bound_old, bound_simplified, bound_tame,
    bound_worst, hyperelliptic_worst, level_bounds, violations, BoundReport, Levels,
};
use crate::curve::{AnyCurve, Curve, CurveSpec, SemigroupData};
use crate::error::{invalid, Error, Result};
use crate::exact_arith::{Field, Fq};
use crate::local::{ramification_locus, RamificationProfile, DEFAULT_SERIES_CAP};
use crate::torsion::torsion_points_with;
use crate::wronskian::WronskianReport;

pub mod suite;
mod text;

/// Version of the report layout.
pub const SCHEMA_VERSION: &str = "1";

/// Default degree cap for closure searches.
pub const DEFAULT_EXT_CAP: usize = 8;

/// Exit code when a paper-suite criterion fails.
pub const EXIT_SUITE_FAILURE: i32 = 4;

/// Search limits shared by all commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub ext_cap: usize,
    pub series_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { ext_cap: DEFAULT_EXT_CAP, series_cap: DEFAULT_SERIES_CAP }
    }
}

impl Caps {
    /// Flags win over the spec's overrides, which win over the defaults.
    pub fn resolve(ext_cap: Option<usize>, series_cap: Option<usize>, spec: Option<&CurveSpec>) -> Result<Caps> {
        let ov = spec.map(|s| &s.overrides);
        let caps = Caps {
            ext_cap: ext_cap.or(ov.and_then(|o| o.ext_cap)).unwrap_or(DEFAULT_EXT_CAP),
            series_cap: series_cap.or(ov.and_then(|o| o.series_cap)).unwrap_or(DEFAULT_SERIES_CAP),
        };
        if caps.ext_cap == 0 || caps.series_cap == 0 {
            return invalid("caps must be positive");
        }
        Ok(caps)
    }
}

/// Output format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emit {
    Text,
    Machine,
}

/// The document produced by every command.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub caps: Caps,
    /// Nonzero when the command completed but reports a failure.
    pub exit_code: i32,
    /// Replaces the full text dump when set; machine output is unaffected.
    pub summary: Option<String>,
}

impl Report {
    fn new(command: &str, inputs: Value, results: Value, caps: Caps) -> Self {
        Report {
            command: command.into(),
            inputs: stringify(inputs),
            results: stringify(results),
            caps,
            exit_code: 0,
            summary: None,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "conventions": conventions(self.caps),
            "version": { "schema": SCHEMA_VERSION, "crate": env!("CARGO_PKG_VERSION") },
        })
    }

    pub fn render(&self, emit: Emit) -> String {
        match emit {
            Emit::Machine => serde_json::to_string_pretty(&self.to_json()).expect("report serializes"),
            Emit::Text => self.summary.clone().unwrap_or_else(|| text::render(&self.to_json())),
        }
    }
}

fn conventions(caps: Caps) -> Value {
    json!({
        "basis": "unscaled monomials x^i y^j, j < a, ordered by pole order a*i + b*j",
        "row_order": "residue classes of the pole order mod a in increasing order, then ascending powers of x",
        "selectors": "1-based column indices",
        "numbers": "exact integers and num/den strings",
        "ext_cap": caps.ext_cap.to_string(),
        "series_cap": caps.series_cap.to_string(),
    })
}

/// Replace every JSON number by its decimal string.
fn stringify(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stringify(v))).collect()),
        other => other,
    }
}

fn spec_inputs(spec: &CurveSpec, curve: &AnyCurve) -> Value {
    json!({
        "equation": curve.equation(),
        "p": spec.p,
        "ext_degree": spec.ext_degree,
        "a": spec.a,
        "b": spec.b,
    })
}

fn finite(curve: &AnyCurve, what: &str) -> Result<Curve<Fq>> {
    match curve {
        AnyCurve::Finite(c) => Ok(c.clone()),
        AnyCurve::Rational(_) => invalid(format!("{what} needs a finite base field")),
    }
}

/// Genus, gaps and the ramification locus of x with the Riemann–Hurwitz check.
pub fn cmd_analyze(spec: &CurveSpec, caps: Caps) -> Result<Report> {
    let curve = spec.build()?;
    let sg = SemigroupData::new(curve.a(), curve.b(), 0);
    let mut results = json!({
        "genus": curve.genus(),
        "characteristic": curve.characteristic(),
        "gaps": sg.gaps,
    });
    if let AnyCurve::Finite(c) = &curve {
        let ram = ramification_locus(c, caps.ext_cap, caps.series_cap)?;
        results["ramification"] = ram.profile.to_json_value();
        results["skipped_degrees"] = json!(ram.skipped_degrees);
        results["riemann_hurwitz"] = match ram.profile.check_riemann_hurwitz() {
            Ok(rh) => json!({
                "sum_r_minus_1": rh.lhs,
                "two_g_plus_d_minus_1": rh.rhs,
                "holds": rh.holds,
                "rho": rh.rho,
                "rho_bound_holds": rh.rho_bound_holds,
            }),
            Err(e) => json!({ "unavailable": e.to_string() }),
        };
    }
    Ok(Report::new("analyze", spec_inputs(spec, &curve), results, caps))
}

fn wronskian_json<F: Field>(curve: &Curve<F>, n: usize, r: Option<usize>) -> Result<Value> {
    let mut rep = WronskianReport::compute(curve, n)?;
    if let Some(r) = r {
        if r > n - rep.dn {
            return Err(Error::Inapplicable(format!("r = {r} exceeds N - D_N = {} at N = {n}", n - rep.dn)));
        }
        rep.minors.retain(|m| m.r == r);
        rep.leading.retain(|m| m.r == r);
    }
    Ok(serde_json::to_value(rep).expect("wronskian report serializes"))
}

/// Δ_N, the truncated minors and the leading-coefficient certificates.
pub fn cmd_delta(spec: &CurveSpec, levels: RangeInclusive<usize>, r: Option<usize>, caps: Caps) -> Result<Report> {
    let curve = spec.build()?;
    let mut out = Vec::new();
    for n in levels.clone() {
        out.push(match &curve {
            AnyCurve::Finite(c) => wronskian_json(c, n, r)?,
            AnyCurve::Rational(c) => wronskian_json(c, n, r)?,
        });
    }
    let mut inputs = spec_inputs(spec, &curve);
    inputs["N_range"] = json!([levels.start(), levels.end()]);
    inputs["r"] = json!(r);
    Ok(Report::new("delta", inputs, json!({ "levels": out }), caps))
}

fn bounds_json(reports: &[BoundReport]) -> Value {
    Value::Array(reports.iter().map(BoundReport::to_json).collect())
}

/// X[N] with Frobenius orbits, verification tags and the bound check.
pub fn cmd_torsion(spec: &CurveSpec, n: usize, purely_inseparable: bool, caps: Caps) -> Result<Report> {
    let any = spec.build()?;
    let curve = finite(&any, "torsion")?;
    let ram = ramification_locus(&curve, caps.ext_cap, caps.series_cap)?;
    let rep = torsion_points_with(&curve, &ram, n, caps.ext_cap, caps.series_cap)?;
    if !rep.is_complete() {
        return Err(Error::CapExceeded(format!(
            "closed points of degrees {:?} exceed the extension cap {}",
            rep.skipped_degrees, caps.ext_cap
        )));
    }
    let bounds = level_bounds(&curve, Some(&ram.profile), n, purely_inseparable)?;
    let total = rep.count();
    let outside = rep.points.iter().filter(|p| !p.in_ramification_locus).count();
    let bad: Vec<&str> = violations(&bounds, total, outside).iter().map(|b| b.formula).collect();
    let mut inputs = spec_inputs(spec, &any);
    inputs["N"] = json!(n);
    inputs["purely_inseparable"] = json!(purely_inseparable);
    let results = json!({
        "torsion": rep.to_json(),
        "outside_ramification": outside,
        "bounds": bounds_json(&bounds),
        "violated_bounds": bad,
    });
    let mut report = Report::new("torsion", inputs, results, caps);
    if !bad.is_empty() {
        report.exit_code = 1;
    }
    Ok(report)
}

/// Where `bounds` takes its data from.
#[derive(Clone, Debug)]
pub enum BoundSource {
    Curve(CurveSpec),
    Profile(RamificationProfile),
}

/// Flags for `bounds` that the data cannot supply.
#[derive(Clone, Copy, Debug, Default)]
pub struct BoundFlags {
    pub purely_inseparable: bool,
    /// Characteristic for profile input (curve input reads it from the spec).
    pub p: Option<u64>,
    /// Certificate that Δ_N ≠ 0 for profile input.
    pub delta_nonzero: bool,
}

/// All bounds at each level in the range.
pub fn cmd_bounds(
    source: &BoundSource,
    levels: RangeInclusive<usize>,
    flags: BoundFlags,
    caps: Caps,
) -> Result<Report> {
    let mut out = Vec::new();
    let inputs = match source {
        BoundSource::Curve(spec) => {
            let any = spec.build()?;
            let profile = match &any {
                AnyCurve::Finite(c) => Some(ramification_locus(c, caps.ext_cap, caps.series_cap)?.profile),
                AnyCurve::Rational(_) => None,
            };
            for n in levels.clone() {
                let b = match &any {
                    AnyCurve::Finite(c) => level_bounds(c, profile.as_ref(), n, flags.purely_inseparable)?,
                    AnyCurve::Rational(c) => level_bounds(c, None, n, flags.purely_inseparable)?,
                };
                out.push(json!({ "N": n, "bounds": bounds_json(&b) }));
            }
            let mut inputs = spec_inputs(spec, &any);
            inputs["profile"] = profile.map_or(Value::Null, |p| p.to_json_value());
            inputs
        }
        BoundSource::Profile(prof) => {
            prof.validate()?;
            let p = flags.p.ok_or_else(|| Error::Invalid("profile input needs --p for the characteristic".into()))?;
            for n in levels.clone() {
                out.push(json!({ "N": n, "bounds": bounds_json(&profile_bounds(prof, n, p, flags)?) }));
            }
            json!({ "profile": prof.to_json_value(), "p": p, "delta_nonzero": flags.delta_nonzero })
        }
    };
    let mut inputs = inputs;
    inputs["N_range"] = json!([levels.start(), levels.end()]);
    inputs["purely_inseparable"] = json!(flags.purely_inseparable);
    Ok(Report::new("bounds", inputs, json!({ "levels": out }), caps))
}

/// Bounds from a manual profile: the minor bounds use Δ_N, certified by flag.
fn profile_bounds(prof: &RamificationProfile, n: usize, p: u64, flags: BoundFlags) -> Result<Vec<BoundReport>> {
    let lv = Levels::from_profile(prof, n)?;
    let mut out = vec![
        bound_simplified(prof.g, n, flags.delta_nonzero),
        bound_worst(prof.g, &lv),
        bound_old(prof.g, n, p, flags.purely_inseparable),
    ];
    if n == prof.d {
        out.push(bound_dtorsion(prof.g, prof.d));
    }
    if lv.dn <= n {
        let s: Vec<usize> = (1..=lv.dn).collect();
        out.push(bound_main(prof, &lv, &s, flags.delta_nonzero)?);
        if prof.is_tame() {
            out.push(bound_tame(prof, &lv, &s, flags.delta_nonzero)?);
        }
        if prof.d == 2 {
            out.push(bound_hyperelliptic(prof.g, &lv, &s, flags.delta_nonzero)?);
        }
    }
    if prof.d == 2 {
        out.push(hyperelliptic_worst(prof.g, n));
    }
    if prof.g == 2 && prof.d == 3 {
        out.push(bound_genus2(prof, n, flags.delta_nonzero)?);
    }
    Ok(out)
}

/// Point count over the degree-m extension, including infinity.
pub fn cmd_count(spec: &CurveSpec, m: usize, caps: Caps) -> Result<Report> {
    let any = spec.build()?;
    let curve = finite(&any, "count")?;
    let count = curve.count_points(m)?;
    let mut inputs = spec_inputs(spec, &any);
    inputs["m"] = json!(m);
    let q = curve.field().order();
    let results = json!({
        "field_order": format!("{q}^{m}"),
        "count": count,
        "affine": count - 1,
    });
    Ok(Report::new("count", inputs, results, caps))
}

/// Run every acceptance criterion on the built-in corpus.
pub fn cmd_paper_suite(caps: Caps) -> Result<Report> {
    let outcomes = suite::run_all(caps)?;
    let all_pass = outcomes.iter().all(|c| c.pass());
    let results = json!({
        "criteria": outcomes.iter().map(suite::Outcome::to_json).collect::<Vec<_>>(),
        "passed": outcomes.iter().filter(|c| c.pass()).count(),
        "total": outcomes.len(),
        "all_pass": all_pass,
    });
    let mut report = Report::new("paper-suite", json!({}), results, caps);
    let mut lines: String = outcomes.iter().map(|c| c.line() + "\n").collect();
    lines.push_str(&format!("{}/{} criteria pass\n", outcomes.iter().filter(|c| c.pass()).count(), outcomes.len()));
    report.summary = Some(lines);
    if !all_pass {
        report.exit_code = EXIT_SUITE_FAILURE;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartic(p: u64) -> CurveSpec {
        CurveSpec::prime(p, 3, 4, &[(0, 3, 1), (0, 1, -1), (4, 0, -1)])
    }

    #[test]
    fn numbers_become_strings() {
        let v = stringify(json!({ "a": 1, "b": [2, { "c": -3 }], "d": "x", "e": null }));
        assert_eq!(v, json!({ "a": "1", "b": ["2", { "c": "-3" }], "d": "x", "e": null }));
    }

    #[test]
    fn report_has_the_fixed_top_level_keys() {
        let r = cmd_count(&quartic(7), 1, Caps::default()).unwrap();
        let v = r.to_json();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["command", "inputs", "results", "conventions", "version"]);
        assert_eq!(v["results"]["count"], "8");
    }

    #[test]
    fn caps_resolution_order() {
        let mut spec = quartic(7);
        spec.overrides.ext_cap = Some(3);
        assert_eq!(Caps::resolve(None, None, Some(&spec)).unwrap().ext_cap, 3);
        assert_eq!(Caps::resolve(Some(5), None, Some(&spec)).unwrap().ext_cap, 5);
        assert_eq!(Caps::resolve(None, None, None).unwrap(), Caps::default());
        assert!(Caps::resolve(Some(0), None, None).is_err());
    }

    #[test]
    fn rational_curves_reject_finite_only_commands() {
        let spec = quartic(0);
        assert_eq!(cmd_count(&spec, 1, Caps::default()).unwrap_err().exit_code(), 1);
        let d = cmd_delta(&spec, 4..=4, None, Caps::default()).unwrap();
        assert_eq!(d.results["levels"][0]["delta_is_zero"], false);
    }

    #[test]
    fn out_of_range_r_is_inapplicable() {
        let e = cmd_delta(&quartic(7), 4..=4, Some(5), Caps::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn tight_cap_exhausts() {
        let caps = Caps { ext_cap: 1, series_cap: DEFAULT_SERIES_CAP };
        let e = cmd_torsion(&quartic(7), 4, false, caps).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }
}
