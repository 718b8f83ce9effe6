//! Wronskian matrices of Hasse-Schmidt derivatives of the basis of L(N[∞]),
//! their maximal minors, pointwise rank, and the leading-coefficient
//! certificates for nonvanishing minors.
//!
//! Row convention: the stacked variants list classes γ = 0, ..., a-1 in
//! order and, inside a class, ascending powers of x. Minor signs refer to
//! this order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::curve::{eval_bipoly_at, map_bipoly, BiPoly, Curve, FFElem, Point, SemigroupData};
use crate::error::{invalid, Error, Result};
use crate::exact_arith::{embedding, format_rational, gen_binomial, linalg, Field, Fq, Q};
use crate::hasse_schmidt::{d_of_bipoly, d_of_y_power_over_fy, d_poly};
use crate::local::z_gamma;
use crate::poly::UniPoly;

/// Which of the three equivalent matrices to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    /// Rows y_1, ..., y_𝒟 in increasing pole order; entry (i, j) = D_{j-1}(y_i).
    M,
    /// Rows x^i z_γ in stacked order; a row permutation of `M`.
    NStacked,
    /// Rows (i, γ) in stacked order; entry (i, j) = D_{j-i}(z_γ), zero for j < i.
    NPrime,
}

/// A row of a Wronskian matrix: entry in column c is D_{c - shift}(u).
#[derive(Clone, Debug)]
struct RowSpec<F: Field> {
    u: BiPoly<F>,
    shift: usize,
}

fn class_of(sg: &SemigroupData, j: usize) -> usize {
    (sg.b * j) % sg.a
}

fn times_x_power<F: Field>(u: &BiPoly<F>, i: usize) -> BiPoly<F> {
    if i == 0 {
        return u.clone();
    }
    let field = u[0].field();
    let xi = UniPoly::monomial(field, field.one(), i);
    u.iter().map(|c| c * &xi).collect()
}

fn row_specs<F: Field>(curve: &Curve<F>, sg: &SemigroupData, variant: Variant) -> Vec<RowSpec<F>> {
    match variant {
        Variant::M => sg
            .basis
            .iter()
            .map(|&(i, j)| RowSpec { u: times_x_power(&z_gamma(curve, class_of(sg, j)), i), shift: 0 })
            .collect(),
        Variant::NStacked => sg
            .rows
            .iter()
            .map(|&(i, j)| RowSpec { u: times_x_power(&z_gamma(curve, class_of(sg, j)), i), shift: 0 })
            .collect(),
        Variant::NPrime => {
            sg.rows.iter().map(|&(i, j)| RowSpec { u: z_gamma(curve, class_of(sg, j)), shift: i }).collect()
        }
    }
}

fn check_level(sg: &SemigroupData, r: usize) -> Result<()> {
    if sg.n < 2 {
        return invalid(format!("level N = {} must be at least 2", sg.n));
    }
    if r > sg.n - sg.dn {
        return invalid(format!("truncation r = {r} exceeds N - 𝒟_N = {} at N = {}", sg.n - sg.dn, sg.n));
    }
    Ok(())
}

/// A Wronskian matrix with `r` rightmost columns removed.
#[derive(Clone, Debug)]
pub struct WronskianMatrix<F: Field> {
    curve: Curve<F>,
    sg: SemigroupData,
    variant: Variant,
    r: usize,
    entries: Vec<Vec<FFElem<F>>>,
}

impl<F: Field> WronskianMatrix<F> {
    pub fn build(curve: &Curve<F>, n: usize, variant: Variant, r: usize) -> Result<Self> {
        let sg = SemigroupData::new(curve.a(), curve.b(), n);
        check_level(&sg, r)?;
        let cols = n - r;
        let entries =
            row_specs(curve, &sg, variant)
                .iter()
                .map(|row| {
                    (0..cols)
                        .map(|c| {
                            if c < row.shift {
                                FFElem::zero(curve)
                            } else {
                                d_of_bipoly(curve, c - row.shift, &row.u)
                            }
                        })
                        .collect()
                })
                .collect();
        Ok(WronskianMatrix { curve: curve.clone(), sg, variant, r, entries })
    }

    pub fn curve(&self) -> &Curve<F> {
        &self.curve
    }

    pub fn semigroup(&self) -> &SemigroupData {
        &self.sg
    }

    pub fn n(&self) -> usize {
        self.sg.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.sg.n - self.r
    }

    pub fn entries(&self) -> &[Vec<FFElem<F>>] {
        &self.entries
    }

    /// The maximal minor on the columns `s` (1-based, strictly increasing).
    pub fn minor(&self, s: &[usize]) -> Result<FFElem<F>> {
        validate_selector(s, self.rows(), self.cols())?;
        let m = self.entries.iter().map(|row| s.iter().map(|&c| row[c - 1].clone()).collect()).collect();
        Ok(det_elems(&self.curve, m))
    }

    /// Rank over the function field.
    pub fn generic_rank(&self) -> usize {
        rank_elems(self.entries.clone())
    }
}

pub(crate) fn validate_selector(s: &[usize], rows: usize, cols: usize) -> Result<()> {
    if s.len() != rows {
        return invalid(format!("selector has {} columns, expected {rows}", s.len()));
    }
    if s.first().is_some_and(|&c| c == 0) || s.last().is_some_and(|&c| c > cols) {
        return invalid(format!("selector {s:?} leaves the range 1..={cols}"));
    }
    if s.windows(2).any(|w| w[0] >= w[1]) {
        return invalid(format!("selector {s:?} is not strictly increasing"));
    }
    Ok(())
}

/// Pivot preference: smallest y-degree, then smallest total x-degree.
fn cost<F: Field>(u: &FFElem<F>) -> (usize, i64) {
    let ydeg = u.num().iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    let xdeg: i64 = u.num().iter().map(|c| c.degree().max(0)).sum::<i64>() + u.den().degree();
    (ydeg, xdeg)
}

/// Determinant over the function field by Gaussian elimination with the
/// cheapest available pivot in each column.
pub fn det_elems<F: Field>(curve: &Curve<F>, mut m: Vec<Vec<FFElem<F>>>) -> FFElem<F> {
    let n = m.len();
    let mut acc = FFElem::one(curve);
    for k in 0..n {
        let Some(p) = (k..n).filter(|&i| !m[i][k].is_zero()).min_by_key(|&i| cost(&m[i][k])) else {
            return FFElem::zero(curve);
        };
        if p != k {
            m.swap(p, k);
            acc = acc.neg_elem();
        }
        acc = &acc * &m[k][k];
        eliminate_below(&mut m, k, k);
    }
    acc
}

/// Clear column `c` below row `k` using the pivot m[k][c].
fn eliminate_below<F: Field>(m: &mut [Vec<FFElem<F>>], k: usize, c: usize) {
    let inv = m[k][c].inv().expect("pivot is nonzero");
    let cols = m[k].len();
    let (top, bottom) = m.split_at_mut(k + 1);
    let pivot_row = &top[k];
    for row in bottom.iter_mut() {
        if row[c].is_zero() {
            continue;
        }
        let factor = &row[c] * &inv;
        for j in c + 1..cols {
            if !pivot_row[j].is_zero() {
                row[j] = &row[j] - &(&factor * &pivot_row[j]);
            }
        }
        row[c] = FFElem::zero(pivot_row[c].curve());
    }
}

/// Rank over the function field.
pub fn rank_elems<F: Field>(mut m: Vec<Vec<FFElem<F>>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| cost(&m[i][c])) else {
            continue;
        };
        m.swap(p, rank);
        eliminate_below(&mut m, rank, c);
        rank += 1;
    }
    rank
}

/// Columns s^{(r)} (1-based): the identity on the first N_0 positions,
/// then shifted right by N - 𝒟_N - r.
pub fn selector_r(sg: &SemigroupData, r: usize) -> Result<Vec<usize>> {
    check_level(sg, r)?;
    let shift = sg.n - sg.dn - r;
    Ok((1..=sg.dn).map(|i| if i <= sg.n0 { i } else { i + shift }).collect())
}

/// Block of the D_{c-i}(z_γ) matrix on classes γ >= 1 and the given
/// 0-based columns.
fn lower_block<F: Field>(curve: &Curve<F>, sg: &SemigroupData, cols: &[usize]) -> Vec<Vec<FFElem<F>>> {
    row_specs(curve, sg, Variant::NPrime)
        .into_iter()
        .skip(sg.n0)
        .map(|row| {
            cols.iter()
                .map(|&c| if c < row.shift { FFElem::zero(curve) } else { d_of_bipoly(curve, c - row.shift, &row.u) })
                .collect()
        })
        .collect()
}

/// Π'_{N,s} via the block structure of the D_{j-i}(z_γ) matrix: its class-0
/// rows are the unit vectors e_1, ..., e_{N_0}.
pub fn minor_prime<F: Field>(curve: &Curve<F>, n: usize, s: &[usize]) -> Result<FFElem<F>> {
    let sg = SemigroupData::new(curve.a(), curve.b(), n);
    check_level(&sg, 0)?;
    validate_selector(s, sg.dn, n)?;
    if s[..sg.n0].iter().enumerate().any(|(i, &c)| c != i + 1) {
        return Ok(FFElem::zero(curve));
    }
    let cols: Vec<usize> = s[sg.n0..].iter().map(|c| c - 1).collect();
    Ok(det_elems(curve, lower_block(curve, &sg, &cols)))
}

/// Δ_N, the leftmost maximal minor.
pub fn delta<F: Field>(curve: &Curve<F>, n: usize) -> Result<FFElem<F>> {
    let sg = SemigroupData::new(curve.a(), curve.b(), n);
    minor_prime(curve, n, &(1..=sg.dn).collect::<Vec<_>>())
}

/// Π_{N,s^{(r)}}.
pub fn minor_r<F: Field>(curve: &Curve<F>, n: usize, r: usize) -> Result<FFElem<F>> {
    let sg = SemigroupData::new(curve.a(), curve.b(), n);
    minor_prime(curve, n, &selector_r(&sg, r)?)
}

/// Rank over the function field of the matrix with r columns removed.
pub fn generic_rank<F: Field>(curve: &Curve<F>, n: usize, r: usize) -> Result<usize> {
    let sg = SemigroupData::new(curve.a(), curve.b(), n);
    check_level(&sg, r)?;
    let cols: Vec<usize> = (sg.n0..n - r).collect();
    Ok(sg.n0 + rank_elems(lower_block(curve, &sg, &cols)))
}

/// Whether (N-r)_*X lies in W_r^-, i.e. the truncated matrix is rank deficient.
pub fn containment_flag<F: Field>(curve: &Curve<F>, n: usize, r: usize) -> Result<bool> {
    let sg = SemigroupData::new(curve.a(), curve.b(), n);
    Ok(generic_rank(curve, n, r)? < sg.dn)
}

/// Exact evaluation of Wronskian matrices at affine points of one extension
/// field, using D_k(y^j) = P_{j,k} / f_y^{2k-1}.
pub struct PointEvaluator {
    ext: Fq,
    sg: SemigroupData,
    fy: BiPoly<Fq>,
    /// dy[j][k]: numerator of D_k(y^j) over f_y^{max(2k-1, 0)}.
    dy: Vec<Vec<BiPoly<Fq>>>,
    /// Per row: shift and dcoef[j][l] = D_l of the y^j coefficient.
    rows: Vec<(usize, Vec<Vec<UniPoly<Fq>>>)>,
}

impl PointEvaluator {
    pub fn new(curve: &Curve<Fq>, n: usize, variant: Variant, ext: &Fq) -> Result<Self> {
        let sg = SemigroupData::new(curve.a(), curve.b(), n);
        check_level(&sg, 0)?;
        let emb = embedding(curve.field(), ext)?;
        let map = |p: &UniPoly<Fq>| p.map_field(ext, |c| emb.map(c));
        let dy = (0..curve.a())
            .map(|j| (0..n).map(|k| map_bipoly(&d_of_y_power_over_fy(curve, j, k), ext)).collect())
            .collect::<Result<_>>()?;
        let rows = row_specs(curve, &sg, variant)
            .into_iter()
            .map(|row| {
                let dcoef = row.u.iter().map(|c| (0..n).map(|l| map(&d_poly(c, l))).collect()).collect();
                (row.shift, dcoef)
            })
            .collect();
        Ok(PointEvaluator { ext: ext.clone(), sg, fy: map_bipoly(curve.fy(), ext)?, dy, rows })
    }

    pub fn field(&self) -> &Fq {
        &self.ext
    }

    pub fn semigroup(&self) -> &SemigroupData {
        &self.sg
    }

    /// The matrix with r columns removed, evaluated at p. Fails when p is a
    /// ramified affine point, where f_y vanishes.
    pub fn matrix_at(&self, p: &Point, r: usize) -> Result<Vec<Vec<u64>>> {
        check_level(&self.sg, r)?;
        if p.field() != &self.ext {
            return invalid("point lies in a different extension than the evaluator");
        }
        let e = &self.ext;
        let (x0, y0) = (p.x(), p.y());
        let fy0 = eval_bipoly_at(&self.fy, &x0, &y0);
        let Some(fy_inv) = e.inv(&fy0) else {
            return Err(Error::Inapplicable(format!(
                "f_y vanishes at ({}, {}): the point is ramified",
                e.fmt_elem(&x0),
                e.fmt_elem(&y0)
            )));
        };
        let n = self.sg.n;
        let vals: Vec<Vec<u64>> = self
            .dy
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(k, num)| {
                        let v = eval_bipoly_at(num, &x0, &y0);
                        e.mul(&v, &e.pow(&fy_inv, (2 * k as u64).saturating_sub(1)))
                    })
                    .collect()
            })
            .collect();
        let cols = n - r;
        Ok(self
            .rows
            .iter()
            .map(|(shift, dcoef)| {
                (0..cols)
                    .map(|c| {
                        if c < *shift {
                            return e.zero();
                        }
                        let k = c - shift;
                        let mut acc = e.zero();
                        for (j, dc) in dcoef.iter().enumerate() {
                            for l in 0..=k {
                                let cl = dc[l].eval(&x0);
                                if cl != 0 {
                                    acc = e.add(&acc, &e.mul(&cl, &vals[j][k - l]));
                                }
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect())
    }

    /// Rank of the evaluated matrix with r columns removed.
    pub fn rank_at(&self, p: &Point, r: usize) -> Result<usize> {
        Ok(linalg::rank(&self.ext, self.matrix_at(p, r)?))
    }
}

/// Rank of the stacked Wronskian matrix at an unramified affine point.
pub fn rank_at(curve: &Curve<Fq>, n: usize, r: usize, p: &Point) -> Result<usize> {
    PointEvaluator::new(curve, n, Variant::NStacked, p.field())?.rank_at(p, r)
}

/// Closed form for det (C(x_i, l + j - 1))_{i,j=1..n}.
pub fn binom_vandermonde_det(xs: &[BigRational], l: u64) -> BigRational {
    let n = xs.len();
    let mut acc = BigRational::one();
    for x in xs {
        acc *= gen_binomial(x, l);
    }
    for i in 0..n {
        for j in i + 1..n {
            acc *= &xs[j] - &xs[i];
        }
    }
    for j in 1..n {
        let base = BigRational::from_integer(BigInt::from(l + j as u64));
        for _ in 0..n - j {
            acc /= &base;
        }
    }
    acc
}

/// The same determinant by elimination.
pub fn binom_matrix_det(xs: &[BigRational], l: u64) -> BigRational {
    let m = xs.iter().map(|x| (0..xs.len() as u64).map(|j| gen_binomial(x, l + j)).collect()).collect();
    linalg::det(&Q, m)
}

/// det(L_{N,r}): the leading-coefficient determinant attached to Π_{N,s^{(r)}}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingCoeff {
    pub n: usize,
    pub r: usize,
    /// N_0 + N - 𝒟_N - r, the lowest binomial index.
    pub r_prime: u64,
    /// δ/a for the pole orders δ ≤ N not divisible by a.
    pub xs: Vec<BigRational>,
    pub value: BigRational,
}

pub fn leading_coeff_det(sg: &SemigroupData, r: usize) -> Result<LeadingCoeff> {
    check_level(sg, r)?;
    let a = BigInt::from(sg.a);
    let xs: Vec<BigRational> =
        sg.delta.iter().filter(|&&d| d % sg.a != 0).map(|&d| BigRational::new(BigInt::from(d), a.clone())).collect();
    let r_prime = (sg.n0 + sg.n - sg.dn - r) as u64;
    let value = binom_vandermonde_det(&xs, r_prime);
    Ok(LeadingCoeff { n: sg.n, r, r_prime, xs, value })
}

impl LeadingCoeff {
    /// Reduction into a field of characteristic p. Unavailable when p
    /// divides a or a denominator of the value.
    pub fn reduce_into<F: Field>(&self, field: &F, a: usize) -> Result<F::Elem> {
        let p = field.characteristic();
        if p != 0 && (a as u64).is_multiple_of(p) {
            return Err(Error::Inapplicable(format!("characteristic {p} divides a = {a}")));
        }
        field
            .from_rational(&self.value)
            .ok_or_else(|| Error::Inapplicable(format!("characteristic {p} divides the denominator of det L")))
    }

    /// Whether the value certifies Π_{N,s^{(r)}} ≠ 0 over `field`: needs
    /// p = 0 or p > N, p not dividing a, and a nonzero reduction.
    pub fn certifies<F: Field>(&self, field: &F, a: usize) -> bool {
        let p = field.characteristic();
        if p != 0 && p as usize <= self.n {
            return false;
        }
        self.reduce_into(field, a).is_ok_and(|v| !field.is_zero(&v))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MinorRecord {
    pub r: usize,
    pub selector: Vec<usize>,
    pub is_zero: bool,
    pub generic_rank: usize,
    /// (N - r)_*X ⊆ W_r^-.
    pub contained: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeadingRecord {
    pub r: usize,
    pub r_prime: u64,
    pub value: String,
    pub reduced: Option<String>,
    pub certifies: bool,
    pub note: Option<String>,
}

/// Summary of the minors and rank conditions at level N.
#[derive(Clone, Debug, Serialize)]
pub struct WronskianReport {
    pub n: usize,
    pub dn: usize,
    pub n0: usize,
    pub delta_is_zero: bool,
    pub delta: String,
    pub minors: Vec<MinorRecord>,
    pub leading: Vec<LeadingRecord>,
}

impl WronskianReport {
    pub fn compute<F: Field>(curve: &Curve<F>, n: usize) -> Result<Self> {
        let sg = SemigroupData::new(curve.a(), curve.b(), n);
        check_level(&sg, 0)?;
        let d = delta(curve, n)?;
        let field = curve.field();
        let mut minors = Vec::new();
        let mut leading = Vec::new();
        for r in 0..=n - sg.dn {
            let pi = minor_r(curve, n, r)?;
            let rank = generic_rank(curve, n, r)?;
            minors.push(MinorRecord {
                r,
                selector: selector_r(&sg, r)?,
                is_zero: pi.is_zero(),
                generic_rank: rank,
                contained: rank < sg.dn,
            });
            let lc = leading_coeff_det(&sg, r)?;
            let (reduced, note) = match lc.reduce_into(field, sg.a) {
                Ok(v) => (Some(field.fmt_elem(&v)), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let p = field.characteristic();
            let note = note.or_else(|| {
                (p != 0 && p as usize <= n)
                    .then(|| format!("characteristic {p} <= N: value computed, no conclusion drawn"))
            });
            leading.push(LeadingRecord {
                r,
                r_prime: lc.r_prime,
                value: format_rational(&lc.value),
                reduced,
                certifies: lc.certifies(field, sg.a),
                note,
            });
        }
        Ok(WronskianReport {
            n,
            dn: sg.dn,
            n0: sg.n0,
            delta_is_zero: d.is_zero(),
            delta: d.to_string(),
            minors,
            leading,
        })
    }
}
