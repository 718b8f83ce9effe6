//! Acceptance run: one PASS/FAIL line per criterion, then the forced values
//! behind every criterion that cannot pass as stated, each computed by an
//! oracle in this file.
//!
//! The process fails when a criterion outcome differs from the expectation
//! below. Three criteria are expected to FAIL: their stated values are refuted
//! by the forced-value checks that follow the criterion lines.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cabtorsion::cli::suite::{self, SuiteOptions};
use cabtorsion::cli::Caps;
use cabtorsion::curve::{FFElem, Point};
use cabtorsion::exact_arith::{ext_field_create, Field, Fq};
use cabtorsion::hasse_schmidt::d_of_y;
use cabtorsion::local::ramification_locus;
use cabtorsion::torsion::torsion_points_with;
use cabtorsion::wronskian::{binom_vandermonde_det, delta};

use common::*;

/// Wall-clock budgets per criterion; the whole run must finish in 10 minutes.
const BUDGETS: [(usize, Duration); 3] =
    [(1, Duration::from_secs(1)), (2, Duration::from_secs(60)), (3, Duration::from_secs(300))];
const TOTAL_BUDGET: Duration = Duration::from_secs(600);

/// A forced-value check: a summary on success, the discrepancy otherwise.
type Oracle = fn() -> Result<String, String>;

/// Failing checks each refuted criterion must report, and nothing else.
fn expected_failures(id: usize) -> BTreeSet<String> {
    let names: Vec<String> = match id {
        1 => vec!["D_3 y = x^9 + x over F_3".into()],
        2 => vec!["|X[4]| = 28 in char 7".into()],
        3 => ["a=0", "a=1"]
            .iter()
            .flat_map(|a| {
                ["Delta_12 = 0", "Delta_13 = 0", "Delta_14 = 0", "Delta_15 = (D_6 y)^2"].map(|c| format!("{a}: {c}"))
            })
            .collect(),
        _ => vec![],
    };
    names.into_iter().collect()
}

fn quartic() -> Terms {
    vec![(0, 3, 1), (0, 1, -1), (4, 0, -1)]
}

fn genus_nine(a: i64) -> Terms {
    vec![(0, 3, 1), (1, 0, -1), (5, 0, -a), (10, 0, -1)]
}

fn lib_value(e: &FFElem<Fq>, k: &Fq, pt: (u64, u64)) -> u64 {
    e.eval_at(&Point::new(k, pt.0, pt.1)).unwrap().expect("finite at the point")
}

/// Over F_3, D_3 y = -(x^9 + x) at every point of y^3 - y = x^4 over F_27, and
/// this differs from x^9 + x.
fn char3_third_derivative() -> Result<String, String> {
    let k = ext_field_create(3, 3).unwrap();
    let terms = quartic();
    let curve = finite_curve(3, 3, 4, &terms);
    let d3 = d_of_y(&curve, 3);
    let mut differs = false;
    for pt in affine_points(&k, &terms) {
        let taylor = expand_y(&k, &terms, pt.0, pt.1, 4).c[3];
        let x9_plus_x = k.add(&k.pow(&pt.0, 9), &pt.0);
        if taylor != k.neg(&x9_plus_x) || lib_value(&d3, &k, pt) != taylor {
            return Err(format!("mismatch at {pt:?}"));
        }
        differs |= taylor != x9_plus_x;
    }
    if !differs {
        return Err("sign is not observable over F_27".into());
    }
    Ok("D_3 y = -(x^9 + x) = 2x^9 + 2x at every point over F_27".into())
}

/// Points of X[4] - R by the Taylor-rank oracle over F_{p^k}, plus infinity.
fn quartic_x4(p: u64, k: usize) -> usize {
    let f = ext_field_create(p, k).unwrap();
    let terms = quartic();
    1 + affine_points(&f, &terms)
        .into_iter()
        .filter(|&pt| unramified(&f, &terms, pt.0, pt.1) && in_torsion(&f, &terms, 3, 4, 4, pt))
        .count()
}

fn library_x4(p: u64) -> (usize, usize) {
    let curve = finite_curve(p, 3, 4, &quartic());
    let caps = Caps::default();
    let ram = ramification_locus(&curve, caps.ext_cap, caps.series_cap).unwrap();
    let rep = torsion_points_with(&curve, &ram, 4, caps.ext_cap, caps.series_cap).unwrap();
    assert!(rep.is_complete());
    (rep.count(), rep.points.iter().map(|t| t.degree).max().unwrap_or(1))
}

/// |X[4]| is 28 in char 3 but 12 in char 7: every point is defined over F_81
/// resp. F_49, where the Taylor oracle finds the same count.
fn quartic_torsion_counts() -> Result<String, String> {
    let (lib3, deg3) = library_x4(3);
    let (lib7, deg7) = library_x4(7);
    let (oracle3, oracle7) = (quartic_x4(3, 4), quartic_x4(7, 2));
    if (lib3, oracle3, lib7, oracle7) != (28, 28, 12, 12) || 4 % deg3 != 0 || 2 % deg7 != 0 {
        return Err(format!("char 3: {lib3}/{oracle3}, char 7: {lib7}/{oracle7}"));
    }
    Ok("|X[4]| = 28 in char 3 and 12 in char 7, matching the Taylor oracle over F_81 and F_49".into())
}

/// On y^3 = x + a x^5 + x^10 over F_5, Delta_12 = D_5 y, Delta_13 = (D_5 y)^2 - D_4 y D_6 y
/// and Delta_15 = (D_6 y)^2 - D_5 y D_7 y up to one global sign, all nonzero,
/// and D_5 y D_7 y is not identically zero.
fn genus_nine_minors(a: i64) -> Result<String, String> {
    let k = ext_field_create(5, 2).unwrap();
    let terms = genus_nine(a);
    let curve = finite_curve(5, 3, 10, &terms);
    let lib: Vec<FFElem<Fq>> = [12, 13, 15].iter().map(|&n| delta(&curve, n).unwrap()).collect();
    let mut signs: Vec<BTreeSet<bool>> = vec![BTreeSet::new(); 3];
    let (mut nonzero, mut d5d7) = ([false; 3], false);
    let mut points = 0;
    for pt in affine_points(&k, &terms) {
        if !unramified(&k, &terms, pt.0, pt.1) {
            continue;
        }
        points += 1;
        let d = expand_y(&k, &terms, pt.0, pt.1, 8).c;
        let oracle = [
            d[5],
            k.sub(&k.mul(&d[5], &d[5]), &k.mul(&d[4], &d[6])),
            k.sub(&k.mul(&d[6], &d[6]), &k.mul(&d[5], &d[7])),
        ];
        for i in 0..3 {
            let v = lib_value(&lib[i], &k, pt);
            if v == oracle[i] && v == k.neg(&v) {
                continue;
            }
            if v == oracle[i] {
                signs[i].insert(true);
            } else if v == k.neg(&oracle[i]) {
                signs[i].insert(false);
            } else {
                return Err(format!("a={a}: minor {i} disagrees at {pt:?}"));
            }
            nonzero[i] |= !k.is_zero(&v);
        }
        d5d7 |= !k.is_zero(&k.mul(&d[5], &d[7]));
    }
    if points == 0 || signs.iter().any(|s| s.len() > 1) || !nonzero.iter().all(|&b| b) || !d5d7 {
        return Err(format!("a={a}: points {points}, signs {signs:?}, nonzero {nonzero:?}, D5 D7 {d5d7}"));
    }
    Ok("Delta_12, Delta_13, Delta_15 match D_5, D_5^2 - D_4 D_6, D_6^2 - D_5 D_7 and are nonzero".into())
}

/// Brute-force count of y^2 + y = x^5 over F_{2^m}, including infinity.
fn supersingular_count(m: usize) -> usize {
    let k = ext_field_create(2, m).unwrap();
    1 + affine_points(&k, &vec![(0, 2, 1), (0, 1, 1), (5, 0, -1)]).len()
}

fn supersingular_identity() -> Result<String, String> {
    let curve = finite_curve(2, 2, 5, &vec![(0, 2, 1), (0, 1, 1), (5, 0, -1)]);
    let mut hits = Vec::new();
    for t in 1..=4usize {
        let count = supersingular_count(2 * t);
        if curve.count_points(2 * t).unwrap() as usize != count {
            return Err(format!("library count differs over F_2^{}", 2 * t));
        }
        let n = (1usize << t) + 1;
        if count == n * n + 2 * (n - 1) {
            hits.push(t);
        }
    }
    if hits.is_empty() {
        return Err("no t <= 4 satisfies the identity".into());
    }
    Ok(format!("count over F_2^(2t) equals N^2 + 2(N - 1) for t in {hits:?}"))
}

fn binomial(x: &BigRational, m: u64) -> BigRational {
    (0..m).fold(BigRational::one(), |acc, i| acc * (x - BigRational::from_integer(i.into())))
        / BigRational::from_integer((1..=m).product::<u64>().into())
}

fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut acc = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return BigRational::zero() };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        acc *= &m[c][c];
        let (top, bottom) = m.split_at_mut(c + 1);
        let pivot = &top[c];
        for row in bottom.iter_mut() {
            let f = &row[c] / &pivot[c];
            for (x, pv) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x -= &f * pv;
            }
        }
    }
    acc
}

/// Closed form against elimination on [C(x_i, l + j)] for 200 random instances.
fn vandermonde_closed_form() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let n = rng.gen_range(1..=5);
        let l = rng.gen_range(0..=4u64);
        let xs: Vec<BigRational> = (0..n)
            .map(|_| BigRational::new(BigInt::from(rng.gen_range(-20..=20)), BigInt::from(rng.gen_range(1..=6))))
            .collect();
        let m = xs.iter().map(|x| (0..n as u64).map(|j| binomial(x, l + j)).collect()).collect();
        if det(m) != binom_vandermonde_det(&xs, l) {
            return Err(format!("mismatch at xs = {xs:?}, l = {l}"));
        }
    }
    Ok("200 instances agree".into())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let opts = SuiteOptions::full(Caps::default());
    let mut unexpected = Vec::new();
    println!("acceptance criteria");
    for &(id, _, _) in suite::CRITERIA.iter() {
        let outcome = suite::run(id, &opts);
        let elapsed = Duration::from_millis(outcome.elapsed_ms as u64);
        let budget = BUDGETS.iter().find(|b| b.0 == id).map(|b| b.1);
        let in_budget = budget.is_none_or(|b| elapsed <= b);
        let mut line = outcome.line();
        if !in_budget {
            line = format!("FAIL [{id:>2}] {} over budget: {elapsed:?} > {:?}", outcome.title, budget.unwrap());
        }
        println!("{line}  ({} ms)", outcome.elapsed_ms);
        let failed: BTreeSet<String> = outcome.failures().map(|c| c.name.clone()).collect();
        if failed != expected_failures(id) || !in_budget {
            unexpected.push(id);
        }
    }

    println!("forced values");
    let oracles: [(&str, Oracle); 6] = [
        ("third derivative over F_3", char3_third_derivative),
        ("X[4] in characteristics 3 and 7", quartic_torsion_counts),
        ("genus-9 minors, a=0", || genus_nine_minors(0)),
        ("genus-9 minors, a=1", || genus_nine_minors(1)),
        ("maximal-curve count", supersingular_identity),
        ("binomial Vandermonde", vandermonde_closed_form),
    ];
    let mut oracle_failures = 0;
    for (name, f) in oracles {
        match f() {
            Ok(msg) => println!("ok   {name}: {msg}"),
            Err(msg) => {
                oracle_failures += 1;
                println!("BAD  {name}: {msg}");
            }
        }
    }
    let total = start.elapsed();
    println!("total {:.1} s (budget {} s)", total.as_secs_f64(), TOTAL_BUDGET.as_secs());
    if !unexpected.is_empty() || oracle_failures > 0 || total > TOTAL_BUDGET {
        println!("unexpected criterion outcomes: {unexpected:?}; oracle failures: {oracle_failures}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
