use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{BiPoly, CabCurve, Curve};
use crate::error::{invalid, Error, Result};
use crate::exact_arith::{ext_field_create, parse_rational, Field, Fq, Q};
use crate::poly::UniPoly;

/// A coefficient in a curve spec file: an integer, an exact rational
/// string such as "-3/4", or the coordinate list of an extension element
/// (low to high over the prime field).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpecCoeff {
    Int(i64),
    Text(String),
    Digits(Vec<i64>),
}

/// Lower-order correction to z_γ: the listed terms are added to y^{j(γ)}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZCorrection {
    pub gamma: usize,
    pub terms: Vec<(usize, usize, SpecCoeff)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub z_corrections: Vec<ZCorrection>,
    /// Apply the char-2 hyperelliptic correction to z_1.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub char2_correction: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series_cap: Option<usize>,
}

/// On-disk curve description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    /// Characteristic; 0 means the rationals.
    pub p: u64,
    #[serde(default = "one")]
    pub ext_degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext_modulus: Option<Vec<u64>>,
    pub a: usize,
    pub b: usize,
    pub terms: Vec<(usize, usize, SpecCoeff)>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub overrides: Overrides,
}

fn one() -> usize {
    1
}

fn is_default(o: &Overrides) -> bool {
    *o == Overrides::default()
}

/// A validated curve over either supported kind of base field.
#[derive(Clone, Debug)]
pub enum AnyCurve {
    Finite(Curve<Fq>),
    Rational(Curve<Q>),
}

impl AnyCurve {
    pub fn genus(&self) -> usize {
        match self {
            AnyCurve::Finite(c) => c.genus(),
            AnyCurve::Rational(c) => c.genus(),
        }
    }

    pub fn a(&self) -> usize {
        match self {
            AnyCurve::Finite(c) => c.a(),
            AnyCurve::Rational(c) => c.a(),
        }
    }

    pub fn b(&self) -> usize {
        match self {
            AnyCurve::Finite(c) => c.b(),
            AnyCurve::Rational(c) => c.b(),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            AnyCurve::Finite(c) => c.field().p(),
            AnyCurve::Rational(_) => 0,
        }
    }

    pub fn equation(&self) -> String {
        match self {
            AnyCurve::Finite(c) => c.equation(),
            AnyCurve::Rational(c) => c.equation(),
        }
    }
}

impl CurveSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("curve spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Spec for a curve over a prime field with integer coefficients.
    pub fn prime(p: u64, a: usize, b: usize, terms: &[(usize, usize, i64)]) -> Self {
        CurveSpec {
            p,
            ext_degree: 1,
            ext_modulus: None,
            a,
            b,
            terms: terms.iter().map(|&(i, j, c)| (i, j, SpecCoeff::Int(c))).collect(),
            overrides: Overrides::default(),
        }
    }

    pub fn field(&self) -> Result<Fq> {
        if self.p == 0 {
            return invalid("the rationals are not a finite field");
        }
        match &self.ext_modulus {
            Some(m) => {
                if m.len() != self.ext_degree + 1 {
                    return invalid(format!(
                        "ext_modulus has {} coefficients, expected {}",
                        m.len(),
                        self.ext_degree + 1
                    ));
                }
                Fq::with_modulus(self.p, m)
            }
            None => ext_field_create(self.p, self.ext_degree),
        }
    }

    pub fn build(&self) -> Result<AnyCurve> {
        if self.p == 0 {
            if self.ext_degree != 1 || self.ext_modulus.is_some() {
                return invalid("extensions of the rationals are not supported");
            }
            if self.overrides.char2_correction {
                return invalid("char2_correction needs characteristic 2");
            }
            let terms = self.convert_terms(&self.terms, q_coeff)?;
            let curve = CabCurve::new(&Q, self.a, self.b, &terms)?;
            let curve = self.apply_corrections(curve, q_coeff)?;
            return Ok(AnyCurve::Rational(curve));
        }
        let field = self.field()?;
        let terms = self.convert_terms(&self.terms, |c| fq_coeff(&field, c))?;
        let mut curve = CabCurve::new(&field, self.a, self.b, &terms)?;
        curve = self.apply_corrections(curve, |c| fq_coeff(&field, c))?;
        if self.overrides.char2_correction {
            let s = curve.hyperelliptic_char2_correction()?;
            let mut corr = curve.z_corrections().to_vec();
            corr[1] = curve.reduce(s);
            curve = curve.with_z_corrections(corr)?;
        }
        Ok(AnyCurve::Finite(curve))
    }

    fn convert_terms<E>(
        &self,
        terms: &[(usize, usize, SpecCoeff)],
        conv: impl Fn(&SpecCoeff) -> Result<E>,
    ) -> Result<Vec<(usize, usize, E)>> {
        terms
            .iter()
            .enumerate()
            .map(|(k, (i, j, c))| {
                conv(c).map(|e| (*i, *j, e)).map_err(|e| Error::Invalid(format!("term {k} (x^{i} y^{j}): {e}")))
            })
            .collect()
    }

    fn apply_corrections<F: Field>(
        &self,
        curve: Curve<F>,
        conv: impl Fn(&SpecCoeff) -> Result<F::Elem>,
    ) -> Result<Curve<F>> {
        if self.overrides.z_corrections.is_empty() {
            return Ok(curve);
        }
        let field = curve.field().clone();
        let mut corr: Vec<BiPoly<F>> = vec![Vec::new(); curve.a()];
        for zc in &self.overrides.z_corrections {
            if zc.gamma >= curve.a() {
                return invalid(format!("z correction class {} out of range", zc.gamma));
            }
            let terms = self.convert_terms(&zc.terms, &conv)?;
            let mut p = vec![UniPoly::zero(&field); curve.a()];
            for (i, j, c) in terms {
                if j >= curve.a() {
                    return invalid(format!("z correction term y^{j} not reduced"));
                }
                p[j] = &p[j] + &UniPoly::monomial(&field, c, i);
            }
            corr[zc.gamma] = p;
        }
        curve.with_z_corrections(corr)
    }

    /// Canonical form: coefficients reduced, like terms merged, zero terms
    /// dropped, sorted by (j, i).
    pub fn canonical(&self) -> Result<CurveSpec> {
        let mut out = self.clone();
        out.terms = match self.build()? {
            AnyCurve::Finite(c) => canonical_terms(&c, |f, e| {
                if f.is_prime_field() {
                    SpecCoeff::Int(*e as i64)
                } else {
                    SpecCoeff::Digits(f.digits(*e).iter().map(|d| *d as i64).collect())
                }
            }),
            AnyCurve::Rational(c) => canonical_terms(&c, |_, e: &BigRational| {
                if e.is_integer() {
                    if let Ok(v) = i64::try_from(e.numer().clone()) {
                        return SpecCoeff::Int(v);
                    }
                }
                SpecCoeff::Text(format!("{}/{}", e.numer(), e.denom()))
            }),
        };
        Ok(out)
    }
}

fn canonical_terms<F: Field>(
    c: &CabCurve<F>,
    fmt: impl Fn(&F, &F::Elem) -> SpecCoeff,
) -> Vec<(usize, usize, SpecCoeff)> {
    let mut out = Vec::new();
    for (j, row) in c.f().iter().enumerate() {
        for (i, e) in row.coeffs().iter().enumerate() {
            if !c.field().is_zero(e) {
                out.push((i, j, fmt(c.field(), e)));
            }
        }
    }
    out
}

fn q_coeff(c: &SpecCoeff) -> Result<BigRational> {
    match c {
        SpecCoeff::Int(v) => Ok(BigRational::from_integer(BigInt::from(*v))),
        SpecCoeff::Text(s) => parse_rational(s),
        SpecCoeff::Digits(_) => invalid("coordinate lists need a finite extension field"),
    }
}

fn fq_coeff(field: &Fq, c: &SpecCoeff) -> Result<u64> {
    match c {
        SpecCoeff::Int(v) => Ok(field.from_i64(*v)),
        SpecCoeff::Text(s) => {
            let r = parse_rational(s)?;
            field
                .from_rational(&r)
                .ok_or_else(|| Error::Invalid(format!("denominator of {s} vanishes mod {}", field.p())))
        }
        SpecCoeff::Digits(ds) => {
            if ds.len() > field.degree() {
                return invalid(format!(
                    "coordinate list of length {} exceeds extension degree {}",
                    ds.len(),
                    field.degree()
                ));
            }
            let reduced: Vec<u64> = ds.iter().map(|d| d.rem_euclid(field.p() as i64) as u64).collect();
            Ok(field.from_digits(&reduced))
        }
    }
}
