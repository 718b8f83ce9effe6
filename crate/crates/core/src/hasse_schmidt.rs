//! The standard Hasse–Schmidt derivation d/dx on k(x) and its extension to
//! the function field of a C_ab curve.
//!
//! D_n(y) is found by applying D_n to f(x, y) = 0: the only unknown term
//! is f_y * D_n(y), everything else involves D_k(y) with k < n. Numerators
//! are kept in k[x, y]/(f) over powers of f_y, so D_n(y) = P_n / f_y^{2n-1}.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::curve::{BiPoly, CabCurve, Curve, FFElem};
use crate::exact_arith::Field;
use crate::poly::UniPoly;

/// Per-curve derivative tables. Entries depend only on the curve, so the
/// order in which levels are requested does not change them.
pub struct HsMemo<F: Field> {
    /// P_n for n >= 1 (index 0 unused).
    p: Vec<BiPoly<F>>,
    /// full[m][k]: numerator of D_k(y^m) over f_y^{2k-1} (k >= 1).
    full: Vec<Vec<BiPoly<F>>>,
    /// Powers f_y^e reduced mod f.
    fy_pow: Vec<BiPoly<F>>,
    /// (B, N) with f_y * B = N(x) in k[x, y]/(f).
    fy_inv: Option<(BiPoly<F>, UniPoly<F>)>,
    /// Cached D_k(y^m) as (numerator, denominator).
    dym: HashMap<(usize, usize), (BiPoly<F>, UniPoly<F>)>,
}

impl<F: Field> Default for HsMemo<F> {
    fn default() -> Self {
        HsMemo { p: vec![Vec::new()], full: Vec::new(), fy_pow: Vec::new(), fy_inv: None, dym: HashMap::new() }
    }
}

/// C(m, n) for any integer m, as a field element.
pub fn binomial_in<F: Field>(field: &F, m: i64, n: u64) -> F::Elem {
    let b = if m >= 0 {
        if (n as i64) > m {
            return field.zero();
        }
        num_integer::binomial(BigInt::from(m), BigInt::from(n))
    } else {
        // C(m, n) = (-1)^n C(n - m - 1, n)
        let v = num_integer::binomial(BigInt::from(n as i64 - m - 1), BigInt::from(n));
        if n % 2 == 1 {
            -v
        } else {
            v
        }
    };
    field.from_rational(&BigRational::from_integer(b)).expect("integers reduce")
}

/// D_n(x^m) = C(m, n) x^{m-n}, returned as (coefficient, exponent).
pub fn d_rational<F: Field>(field: &F, n: u64, m: i64) -> (F::Elem, i64) {
    (binomial_in(field, m, n), m - n as i64)
}

/// D_n of a polynomial in x.
pub fn d_poly<F: Field>(p: &UniPoly<F>, n: usize) -> UniPoly<F> {
    let field = p.field();
    if n == 0 {
        return p.clone();
    }
    let c = p.coeffs();
    if c.len() <= n {
        return UniPoly::zero(field);
    }
    let out = (n..c.len()).map(|i| field.mul(&c[i], &binomial_in(field, i as i64, n as u64))).collect();
    UniPoly::new(field, out)
}

/// Numerators (n_0, ..., n_k) with D_j(1/q) = n_j / q^{j+1}.
pub fn d_reciprocal_numerators<F: Field>(q: &UniPoly<F>, k: usize) -> Vec<UniPoly<F>> {
    let field = q.field();
    let dq: Vec<UniPoly<F>> = (0..=k).map(|j| d_poly(q, j)).collect();
    let mut qpow = vec![UniPoly::one(field)];
    for j in 1..=k {
        qpow.push(&qpow[j - 1] * q);
    }
    let mut nums = vec![UniPoly::one(field)];
    for j in 1..=k {
        let mut s = UniPoly::zero(field);
        for (l, nl) in nums.iter().enumerate() {
            s = &s + &(&(nl * &qpow[j - 1 - l]) * &dq[j - l]);
        }
        nums.push(-&s);
    }
    nums
}

fn scale_bi<F: Field>(u: &BiPoly<F>, s: &F::Elem) -> BiPoly<F> {
    u.iter().map(|c| c.scale(s)).collect()
}

fn add_bi<F: Field>(u: &BiPoly<F>, v: &BiPoly<F>) -> BiPoly<F> {
    let n = u.len().max(v.len());
    (0..n)
        .map(|i| match (u.get(i), v.get(i)) {
            (Some(a), Some(b)) => a + b,
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

fn poly_times_bi<F: Field>(p: &UniPoly<F>, u: &BiPoly<F>) -> BiPoly<F> {
    u.iter().map(|c| p * c).collect()
}

impl<F: Field> CabCurve<F> {
    fn y_power(&self, m: usize) -> BiPoly<F> {
        let mut v = vec![UniPoly::zero(self.field()); m + 1];
        v[m] = UniPoly::one(self.field());
        self.reduce(v)
    }

    fn fy_power(memo: &mut HsMemo<F>, curve: &CabCurve<F>, e: usize) -> BiPoly<F> {
        if memo.fy_pow.is_empty() {
            memo.fy_pow.push(curve.y_power(0));
        }
        while memo.fy_pow.len() <= e {
            let next = curve.mul_reduced(memo.fy_pow.last().unwrap(), curve.fy());
            memo.fy_pow.push(next);
        }
        memo.fy_pow[e].clone()
    }

    /// Make sure P_k and the D_k(y^m) numerators exist for k <= n.
    fn extend_tables(&self, memo: &mut HsMemo<F>, n: usize) {
        let a = self.a();
        let field = self.field();
        if memo.full.is_empty() {
            // Level 0 is y^m itself.
            memo.full = (0..=a).map(|m| vec![self.y_power(m)]).collect();
        }
        let zero = self.reduce(Vec::new());
        while memo.p.len() <= n {
            let level = memo.p.len();
            // Numerators over f_y^{2 level - 2} of D_level(y^m) with the
            // D_level(y) contribution removed.
            let mut tilde: Vec<BiPoly<F>> = vec![zero.clone(), zero.clone()];
            for m in 2..=a {
                let mut acc = self.mul_reduced(&self.y_power(1), &tilde[m - 1]);
                for l in 1..level {
                    let term = self.mul_reduced(&memo.p[l], &memo.full[m - 1][level - l]);
                    acc = add_bi(&acc, &term);
                }
                tilde.push(acc);
            }
            let mut rest = zero.clone();
            for (m, fm) in self.f().iter().enumerate() {
                rest = add_bi(&rest, &poly_times_bi(fm, &tilde[m]));
                for l in 1..=level {
                    let dl = d_poly(fm, l);
                    if dl.is_zero() {
                        continue;
                    }
                    let k = level - l;
                    let (num, lift) = if k == 0 {
                        (memo.full[m][0].clone(), 2 * level - 2)
                    } else {
                        (memo.full[m][k].clone(), 2 * l - 1)
                    };
                    let lifted = self.mul_reduced(&num, &Self::fy_power(memo, self, lift));
                    rest = add_bi(&rest, &poly_times_bi(&dl, &lifted));
                }
            }
            let pn = self.reduce(scale_bi(&rest, &field.from_i64(-1)));
            for (m, t) in tilde.iter().enumerate() {
                let mut full = self.mul_reduced(self.fy(), t);
                if m >= 1 {
                    let coeff = field.from_i64(m as i64);
                    let lin = scale_bi(&self.mul_reduced(&self.y_power(m - 1), &pn), &coeff);
                    full = add_bi(&full, &lin);
                }
                memo.full[m].push(self.reduce(full));
            }
            memo.p.push(pn);
        }
    }
}

/// Numerator P_n of D_n(y) = P_n / f_y^{2n-1}, for n >= 1.
pub fn d_y_numerator<F: Field>(curve: &Curve<F>, n: usize) -> BiPoly<F> {
    assert!(n >= 1, "P_n is defined for n >= 1");
    let mut memo = curve.hs.lock().unwrap();
    curve.extend_tables(&mut memo, n);
    memo.p[n].clone()
}

/// D_k(y^m) for 0 <= m <= a.
pub fn d_of_y_power<F: Field>(curve: &Curve<F>, m: usize, k: usize) -> FFElem<F> {
    let (num, den) = {
        let mut memo = curve.hs.lock().unwrap();
        if let Some(hit) = memo.dym.get(&(m, k)) {
            hit.clone()
        } else {
            curve.extend_tables(&mut memo, k);
            let num = memo.full[m][k].clone();
            let entry = if k == 0 {
                (num, UniPoly::one(curve.field()))
            } else {
                if memo.fy_inv.is_none() {
                    let inv = FFElem::from_bipoly(curve, curve.fy().clone()).inv().expect("f_y is nonzero");
                    memo.fy_inv = Some((inv.num().clone(), inv.den().clone()));
                }
                let (b, nrm) = memo.fy_inv.clone().unwrap();
                let e = 2 * k as u64 - 1;
                let mut bpow = curve.reduce(vec![UniPoly::one(curve.field())]);
                for _ in 0..e {
                    bpow = curve.mul_reduced(&bpow, &b);
                }
                (curve.mul_reduced(&num, &bpow), nrm.pow(e))
            };
            memo.dym.insert((m, k), entry.clone());
            entry
        }
    };
    FFElem::normalized(curve, num, den)
}

/// Numerator of D_k(y^m) over f_y^{max(2k-1, 0)}, a polynomial in x and y.
pub fn d_of_y_power_over_fy<F: Field>(curve: &Curve<F>, m: usize, k: usize) -> BiPoly<F> {
    let mut memo = curve.hs.lock().unwrap();
    curve.extend_tables(&mut memo, k);
    memo.full[m][k].clone()
}

/// D_n(y).
pub fn d_of_y<F: Field>(curve: &Curve<F>, n: usize) -> FFElem<F> {
    d_of_y_power(curve, 1, n)
}

/// D_n of a polynomial in x and y.
pub fn d_of_bipoly<F: Field>(curve: &Curve<F>, n: usize, u: &BiPoly<F>) -> FFElem<F> {
    let u = curve.reduce(u.clone());
    let mut acc = FFElem::zero(curve);
    for (j, c) in u.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for l in 0..=n {
            let dc = d_poly(c, l);
            if dc.is_zero() {
                continue;
            }
            let term = if j == 0 {
                if l == n {
                    FFElem::from_poly(curve, dc)
                } else {
                    continue;
                }
            } else {
                d_of_y_power(curve, j, n - l).mul_poly(&dc)
            };
            acc = &acc + &term;
        }
    }
    acc
}

/// D_0(u), ..., D_n(u) for an arbitrary function-field element.
pub fn derivatives<F: Field>(u: &FFElem<F>, n: usize) -> Vec<FFElem<F>> {
    let curve = u.curve();
    let dnum: Vec<FFElem<F>> = (0..=n).map(|k| d_of_bipoly(curve, k, u.num())).collect();
    if u.den().is_one() {
        return dnum;
    }
    let q = u.den();
    let rnum = d_reciprocal_numerators(q, n);
    let mut qpow = vec![q.clone()];
    for k in 1..=n {
        qpow.push(&qpow[k - 1] * q);
    }
    let drec: Vec<FFElem<F>> = (0..=n)
        .map(|k| FFElem::new(curve, vec![rnum[k].clone()], qpow[k].clone()).expect("nonzero denominator"))
        .collect();
    (0..=n)
        .map(|k| {
            let mut acc = FFElem::zero(curve);
            for l in 0..=k {
                acc = &acc + &(&dnum[l] * &drec[k - l]);
            }
            acc
        })
        .collect()
}

/// D_n(u).
pub fn d_of_elem<F: Field>(n: usize, u: &FFElem<F>) -> FFElem<F> {
    if u.den().is_one() {
        return d_of_bipoly(u.curve(), n, u.num());
    }
    derivatives(u, n).pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{Fq, Q};
    use proptest::prelude::*;

    fn quartic<F: Field>(field: &F) -> Curve<F> {
        let m1 = field.from_i64(-1);
        CabCurve::new(field, 3, 4, &[(0, 3, field.one()), (0, 1, m1.clone()), (4, 0, m1)]).unwrap()
    }

    fn elem<F: Field>(c: &Curve<F>, terms: &[(i64, usize, usize)], den: &[i64]) -> FFElem<F> {
        let f = c.field();
        let mut num = vec![UniPoly::zero(f); c.a()];
        for &(k, i, j) in terms {
            num[j] = &num[j] + &UniPoly::monomial(f, f.from_i64(k), i);
        }
        FFElem::new(c, num, UniPoly::from_i64s(f, den)).unwrap()
    }

    #[test]
    fn rational_rule() {
        let (c, e) = d_rational(&Q, 2, 4);
        assert_eq!((c, e), (Q.from_i64(6), 2));
        let f3 = Fq::prime(3).unwrap();
        assert_eq!(d_rational(&f3, 2, 4).0, 0);
        assert_eq!(d_rational(&Q, 1, -1), (Q.from_i64(-1), -2));
    }

    #[test]
    fn first_derivative_by_implicit_differentiation() {
        let c = quartic(&Q);
        let fy = elem(&c, &[(3, 0, 2), (-1, 0, 0)], &[1]);
        let expect = elem(&c, &[(4, 3, 0)], &[1]).div(&fy).unwrap();
        assert_eq!(d_of_y(&c, 1), expect);
    }

    fn second_derivative_matches<F: Field>(field: &F) -> bool {
        let c = quartic(field);
        let fy = elem(&c, &[(3, 0, 2), (-1, 0, 0)], &[1]);
        let num = elem(&c, &[(18, 2, 2), (6, 6, 1), (6, 2, 0)], &[1]);
        d_of_y(&c, 2) == num.div(&fy.pow(3)).unwrap()
    }

    #[test]
    fn second_derivative_closed_form() {
        assert!(second_derivative_matches(&Q));
        assert!(second_derivative_matches(&Fq::prime(7).unwrap()));
    }

    #[test]
    fn characteristic_three_values() {
        let f3 = Fq::prime(3).unwrap();
        let c = quartic(&f3);
        assert!(d_of_y(&c, 2).is_zero());
        // -(x^9 + x): the general D_3 y formula reduced mod 3.
        assert_eq!(d_of_y(&c, 3), elem(&c, &[(-1, 9, 0), (-1, 1, 0)], &[1]));
    }

    #[test]
    fn denominators_divide_fy_powers() {
        let f7 = Fq::prime(7).unwrap();
        let c = quartic(&f7);
        let fy = FFElem::from_bipoly(&c, c.fy().clone());
        for n in 1..=6 {
            let cleared = &d_of_y(&c, n) * &fy.pow(2 * n as u64 - 1);
            assert!(cleared.is_polynomial(), "n = {n}");
        }
    }

    #[test]
    fn derivative_of_one_and_x() {
        let c = quartic(&Q);
        for n in 1..5 {
            assert!(d_of_elem(n, &FFElem::one(&c)).is_zero());
        }
        assert!(d_of_elem(1, &FFElem::x(&c)).is_one());
        assert!(d_of_elem(2, &FFElem::x(&c)).is_zero());
        let inv_x = FFElem::x(&c).inv().unwrap();
        let expect = FFElem::x(&c).pow(2).inv().unwrap().neg_elem();
        assert_eq!(d_of_elem(1, &inv_x), expect);
    }

    #[test]
    fn leibniz_on_products_with_x() {
        // D_3(x y) = x D_3 y + D_2 y.
        let f7 = Fq::prime(7).unwrap();
        let c = quartic(&f7);
        let xy = FFElem::monomial(&c, 1, 1, 1);
        let expect = &(&FFElem::x(&c) * &d_of_y(&c, 3)) + &d_of_y(&c, 2);
        assert_eq!(d_of_elem(3, &xy), expect);
    }

    fn small_elem() -> impl Strategy<Value = (Vec<(i64, usize, usize)>, Vec<i64>)> {
        (proptest::collection::vec((-3i64..4, 0usize..4, 0usize..3), 1..4), proptest::collection::vec(-2i64..3, 1..3))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn leibniz_and_iterativity((t1, d1) in small_elem(), (t2, d2) in small_elem()) {
            let f11 = Fq::prime(11).unwrap();
            let c = quartic(&f11);
            prop_assume!(d1.iter().any(|v| *v != 0) && d2.iter().any(|v| *v != 0));
            let u = elem(&c, &t1, &d1);
            let v = elem(&c, &t2, &d2);
            let du = derivatives(&u, 4);
            let dv = derivatives(&v, 4);
            let duv = derivatives(&(&u * &v), 4);
            for n in 0..=4 {
                let mut s = FFElem::zero(&c);
                for l in 0..=n {
                    s = &s + &(&du[l] * &dv[n - l]);
                }
                prop_assert_eq!(&duv[n], &s);
            }
            // D_1(D_2 u) = 3 D_3 u
            let lhs = d_of_elem(1, &du[2]);
            prop_assert_eq!(lhs, du[3].scale(&3));
        }
    }
}
