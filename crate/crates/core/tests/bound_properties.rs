//! Invariants of the cardinality bounds on tame superelliptic profiles
//! y^a = h(x) with deg h = b squarefree: infinity and the b roots of h are the
//! ramified points, all with e = r = a.

use num_rational::BigRational;
use proptest::prelude::*;

use cabtorsion::bounds::{a_s, bound_main, bound_simplified, bound_tame, bound_worst, Levels};
use cabtorsion::curve::SemigroupData;
use cabtorsion::local::{ProfilePoint, RamificationProfile};

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// (a, b) coprime with 2 <= a < b.
fn cab_pair() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=5, 3usize..=13).prop_filter("coprime, a < b", |&(a, b)| a < b && gcd(a, b) == 1)
}

/// j(gamma): the power of y whose pole order b j is congruent to gamma mod a.
fn y_power(a: usize, b: usize, gamma: usize) -> usize {
    (0..a).find(|j| (b * j) % a == gamma).unwrap()
}

fn superelliptic_profile(a: usize, b: usize) -> RamificationProfile {
    let js: Vec<usize> = (0..a).map(|g| y_power(a, b, g)).collect();
    let point = |label: &str, count: usize, vz: Vec<i64>| ProfilePoint { label: label.into(), count, e: a, r: a, vz };
    RamificationProfile {
        g: (a - 1) * (b - 1) / 2,
        d: a,
        delta_gamma: js.iter().map(|j| b * j).collect(),
        points: vec![
            point("infinity", 1, js.iter().map(|&j| -((b * j) as i64)).collect()),
            point("roots", b, js.iter().map(|&j| j as i64).collect()),
        ],
        complete: true,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn profile_satisfies_riemann_hurwitz((a, b) in cab_pair()) {
        let rh = superelliptic_profile(a, b).check_riemann_hurwitz().unwrap();
        prop_assert!(rh.holds);
        prop_assert!(rh.rho_bound_holds);
    }

    #[test]
    fn levels_agree_with_the_semigroup((a, b) in cab_pair(), extra in 0usize..12) {
        let prof = superelliptic_profile(a, b);
        let n = 2 * prof.g + extra;
        let from_profile = Levels::from_profile(&prof, n).unwrap();
        let from_semigroup = Levels::from_semigroup(&SemigroupData::new(a, b, n));
        prop_assert_eq!(&from_profile, &from_semigroup);
        prop_assert_eq!(from_profile.n_gamma.iter().sum::<usize>(), from_profile.dn);
    }

    #[test]
    fn selectors_are_admissible((a, b) in cab_pair(), extra in 0usize..12) {
        let prof = superelliptic_profile(a, b);
        let n = 2 * prof.g + extra;
        let lv = Levels::from_profile(&prof, n).unwrap();
        for r in 0..=n - lv.dn {
            let s = lv.selector(r).unwrap();
            prop_assert_eq!(s.len(), lv.dn);
            prop_assert!(s.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(s[0] >= 1 && *s.last().unwrap() <= n);
            prop_assert!(a_s(&lv, &s).unwrap() >= BigRational::from_integer(0.into()));
        }
        prop_assert!(lv.selector(n - lv.dn + 1).is_err());
    }

    #[test]
    fn main_bound_equals_tame_bound_when_tame((a, b) in cab_pair(), extra in 0usize..12) {
        let prof = superelliptic_profile(a, b);
        let n = 2 * prof.g + extra;
        let lv = Levels::from_profile(&prof, n).unwrap();
        for r in 0..=n - lv.dn {
            let s = lv.selector(r).unwrap();
            let main = bound_main(&prof, &lv, &s, true).unwrap();
            let tame = bound_tame(&prof, &lv, &s, true).unwrap();
            prop_assert_eq!(&main.value, &tame.value);
        }
    }

    #[test]
    fn worst_case_dominates_the_rightmost_selector((a, b) in cab_pair(), extra in 0usize..12) {
        let prof = superelliptic_profile(a, b);
        let n = 2 * prof.g + extra;
        let lv = Levels::from_profile(&prof, n).unwrap();
        let main = bound_main(&prof, &lv, &lv.selector(0).unwrap(), true).unwrap();
        let worst = bound_worst(prof.g, &lv);
        prop_assert!(main.value.unwrap() <= worst.value.unwrap());
    }

    #[test]
    fn simplified_bound_grows_with_the_level(g in 2usize..20, n in 1usize..60) {
        let lo = bound_simplified(g, 2 * g - 1 + n, true).value.unwrap();
        let hi = bound_simplified(g, 2 * g + n, true).value.unwrap();
        prop_assert!(lo < hi);
    }
}
