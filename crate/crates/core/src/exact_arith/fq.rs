use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, RngCore};

use super::Field;
use crate::error::{invalid, Error, Result};
use crate::poly::UniPoly;

const MAX_DEGREE: usize = 63;
const TABLE_LIMIT: u64 = 1 << 16;

/// Finite field F_{p^k}. Elements are packed as base-p integers
/// `sum c_i p^i` where `c_i` are the coefficients of the residue class
/// modulo `modulus` (low-to-high).
#[derive(Clone)]
pub struct Fq(Arc<FqInner>);

struct FqInner {
    p: u64,
    k: usize,
    q: u64,
    /// Monic, length k+1. For k = 1 this is `x`.
    modulus: Vec<u64>,
    /// Discrete log tables for small extension fields.
    tables: Option<LogTables>,
}

struct LogTables {
    exp: Vec<u64>,
    log: Vec<u32>,
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Fq {}

impl std::hash::Hash for Fq {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "F{}", self.0.p)
        } else {
            write!(f, "F{}^{}{:?}", self.0.p, self.0.k, self.0.modulus)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn canonical_cache() -> &'static Mutex<HashMap<(u64, usize), Fq>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Fq>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The canonical field of order p^k: its modulus is the first monic
/// irreducible of degree k when polynomials are ordered by the integer
/// `sum c_i p^i` of their lower coefficients. Results are cached.
pub fn ext_field_create(p: u64, k: usize) -> Result<Fq> {
    if !is_prime(p) || p >= 1 << 31 {
        return invalid(format!("{p} is not a supported prime"));
    }
    if k == 0 {
        return invalid("extension degree must be at least 1");
    }
    if (k as f64) * (p as f64).log2() > 62.0 || k > MAX_DEGREE {
        return invalid(format!("F_{p}^{k} is too large for packed elements"));
    }
    if let Some(f) = canonical_cache().lock().unwrap().get(&(p, k)) {
        return Ok(f.clone());
    }
    let field = if k == 1 {
        Fq::build(p, vec![0, 1])
    } else {
        let base = ext_field_create(p, 1)?;
        let count = p.pow(k as u32);
        let mut found = None;
        for idx in 0..count {
            let mut coeffs = digits_of(idx, p, k);
            coeffs.push(1);
            let poly = UniPoly::new(&base, coeffs.clone());
            if poly.is_irreducible() {
                found = Some(coeffs);
                break;
            }
        }
        Fq::build(p, found.expect("irreducible polynomials exist in every degree"))
    };
    let mut cache = canonical_cache().lock().unwrap();
    Ok(cache.entry((p, k)).or_insert(field).clone())
}

fn digits_of(mut a: u64, p: u64, k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(k + 1);
    for _ in 0..k {
        out.push(a % p);
        a /= p;
    }
    out
}

impl Fq {
    /// Prime field F_p.
    pub fn prime(p: u64) -> Result<Fq> {
        ext_field_create(p, 1)
    }

    /// Extension with an explicit monic modulus (low-to-high, leading 1 included).
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Fq> {
        let base = Fq::prime(p)?;
        if modulus.len() < 2 || *modulus.last().unwrap() % p != 1 {
            return invalid("extension modulus must be monic of degree >= 1");
        }
        let reduced: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        if reduced.len() == 2 {
            return Ok(base);
        }
        let k = reduced.len() - 1;
        if (k as f64) * (p as f64).log2() > 62.0 {
            return invalid(format!("F_{p}^{k} is too large for packed elements"));
        }
        if !UniPoly::new(&base, reduced.clone()).is_irreducible() {
            return invalid(format!("modulus {reduced:?} is reducible over F_{p}"));
        }
        let canon = ext_field_create(p, k)?;
        if canon.0.modulus == reduced {
            return Ok(canon);
        }
        Ok(Fq::build(p, reduced))
    }

    fn build(p: u64, modulus: Vec<u64>) -> Fq {
        let k = modulus.len() - 1;
        let q = p.pow(k as u32);
        let mut f = Fq(Arc::new(FqInner { p, k, q, modulus, tables: None }));
        if k > 1 && q <= TABLE_LIMIT {
            let tables = f.build_tables();
            Arc::get_mut(&mut f.0).unwrap().tables = Some(tables);
        }
        f
    }

    fn build_tables(&self) -> LogTables {
        let q = self.0.q;
        let order = q - 1;
        let mut prime_factors = Vec::new();
        let mut m = order;
        let mut d = 2;
        while d * d <= m {
            if m.is_multiple_of(d) {
                prime_factors.push(d);
                while m.is_multiple_of(d) {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            prime_factors.push(m);
        }
        let gen = (2..q).find(|&g| prime_factors.iter().all(|&l| self.pow_slow(g, order / l) != 1)).unwrap_or(1);
        let mut exp = vec![0u64; order as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u64;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = cur;
            log[cur as usize] = i as u32;
            cur = self.mul_slow(cur, gen);
        }
        LogTables { exp, log }
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> usize {
        self.0.k
    }

    /// Number of elements.
    pub fn order(&self) -> u64 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.k == 1
    }

    /// Coefficients of `a` in the power basis, low-to-high, length k.
    pub fn digits(&self, a: u64) -> Vec<u64> {
        digits_of(a, self.0.p, self.0.k)
    }

    pub fn from_digits(&self, ds: &[u64]) -> u64 {
        let mut acc = 0u64;
        for &d in ds.iter().rev() {
            acc = acc * self.0.p + d % self.0.p;
        }
        acc
    }

    /// The class of `x` modulo the defining polynomial (0 for prime fields,
    /// whose modulus is `x`).
    pub fn generator(&self) -> u64 {
        if self.0.k == 1 {
            0
        } else {
            self.0.p
        }
    }

    pub fn frobenius(&self, a: u64) -> u64 {
        self.pow(&a, self.0.p)
    }

    /// All elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.0.q
    }

    fn add_digits(&self, mut a: u64, mut b: u64, negate_b: bool) -> u64 {
        let p = self.0.p;
        let mut acc = 0u64;
        let mut scale = 1u64;
        for _ in 0..self.0.k {
            let da = a % p;
            let db = b % p;
            a /= p;
            b /= p;
            let s = if negate_b { (da + p - db) % p } else { (da + db) % p };
            acc += s * scale;
            scale = scale.wrapping_mul(p);
        }
        acc
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let p = self.0.p;
        let k = self.0.k;
        let mut da = [0u64; MAX_DEGREE + 1];
        let mut db = [0u64; MAX_DEGREE + 1];
        let (mut x, mut y) = (a, b);
        for i in 0..k {
            da[i] = x % p;
            x /= p;
            db[i] = y % p;
            y /= p;
        }
        let mut prod = [0u64; 2 * MAX_DEGREE + 2];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        let m = &self.0.modulus;
        for i in (k..2 * k - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                prod[i - k + j] = (prod[i - k + j] + (p - c) * m[j]) % p;
            }
        }
        let mut acc = 0u64;
        for i in (0..k).rev() {
            acc = acc * p + prod[i];
        }
        acc
    }

    fn pow_slow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }
}

impl Field for Fq {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.0.p
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.0.p as i64) as u64
    }

    fn from_rational(&self, r: &BigRational) -> Option<u64> {
        let p = BigInt::from(self.0.p);
        let num = r.numer().mod_floor(&p).to_u64()?;
        let den = r.denom().mod_floor(&p).to_u64()?;
        self.inv(&den).map(|d| self.mul(&num, &d))
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        if self.0.k == 1 {
            let s = a + b;
            if s >= self.0.p {
                s - self.0.p
            } else {
                s
            }
        } else {
            self.add_digits(*a, *b, false)
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if self.0.k == 1 {
            if a >= b {
                a - b
            } else {
                a + self.0.p - b
            }
        } else {
            self.add_digits(*a, *b, true)
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        self.sub(&0, a)
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        if self.0.k == 1 {
            return a * b % self.0.p;
        }
        if *a == 0 || *b == 0 {
            return 0;
        }
        match &self.0.tables {
            Some(t) => {
                let order = self.0.q - 1;
                let e = (t.log[*a as usize] as u64 + t.log[*b as usize] as u64) % order;
                t.exp[e as usize]
            }
            None => self.mul_slow(*a, *b),
        }
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        if self.0.k == 1 {
            let (mut r0, mut r1) = (self.0.p as i64, *a as i64);
            let (mut t0, mut t1) = (0i64, 1i64);
            while r1 != 0 {
                let qt = r0 / r1;
                (r0, r1) = (r1, r0 - qt * r1);
                (t0, t1) = (t1, t0 - qt * t1);
            }
            return Some(t0.rem_euclid(self.0.p as i64) as u64);
        }
        if let Some(t) = &self.0.tables {
            let order = self.0.q - 1;
            let l = t.log[*a as usize] as u64;
            return Some(t.exp[((order - l) % order) as usize]);
        }
        Some(self.pow(a, self.0.q - 2))
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn random(&self, rng: &mut dyn RngCore) -> u64 {
        rng.gen_range(0..self.0.q)
    }

    fn to_json(&self, a: &u64) -> serde_json::Value {
        if self.0.k == 1 {
            serde_json::Value::String(a.to_string())
        } else {
            serde_json::Value::Array(
                self.digits(*a).into_iter().map(|d| serde_json::Value::String(d.to_string())).collect(),
            )
        }
    }

    fn fmt_elem(&self, a: &u64) -> String {
        if self.0.k == 1 {
            a.to_string()
        } else {
            format!("{:?}", self.digits(*a))
        }
    }
}

/// Ring embedding of a smaller finite field into a larger one of the same
/// characteristic.
#[derive(Clone, Debug)]
pub struct Embedding {
    src: Fq,
    dst: Fq,
    /// Images of the power basis 1, x, ..., x^{k-1} of the source.
    images: Vec<u64>,
}

impl Embedding {
    pub fn src(&self) -> &Fq {
        &self.src
    }

    pub fn dst(&self) -> &Fq {
        &self.dst
    }

    pub fn map(&self, a: &u64) -> u64 {
        if self.src.is_prime_field() {
            return *a;
        }
        let mut acc = 0u64;
        for (d, img) in self.src.digits(*a).iter().zip(&self.images) {
            if *d != 0 {
                acc = self.dst.add(&acc, &self.dst.mul(d, img));
            }
        }
        acc
    }
}

/// Keyed by (p, source modulus, target modulus).
type EmbeddingCache = Mutex<HashMap<(u64, Vec<u64>, Vec<u64>), Arc<Embedding>>>;

fn embedding_cache() -> &'static EmbeddingCache {
    static CACHE: OnceLock<EmbeddingCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Embedding `src -> dst`; the generator of `src` goes to the numerically
/// smallest root of its modulus in `dst`.
pub fn embedding(src: &Fq, dst: &Fq) -> Result<Arc<Embedding>> {
    if src.p() != dst.p() || !dst.degree().is_multiple_of(src.degree()) {
        return Err(Error::Invalid(format!("cannot embed {src:?} into {dst:?}")));
    }
    let key = (src.p(), src.modulus().to_vec(), dst.modulus().to_vec());
    if let Some(e) = embedding_cache().lock().unwrap().get(&key) {
        return Ok(e.clone());
    }
    let images = if src.is_prime_field() {
        vec![1]
    } else if src == dst {
        (0..src.degree()).map(|i| dst.pow(&dst.generator(), i as u64)).collect()
    } else {
        let modulus = UniPoly::new(dst, src.modulus().to_vec());
        let mut roots = modulus.roots();
        roots.sort_unstable();
        let theta = roots[0];
        (0..src.degree()).map(|i| dst.pow(&theta, i as u64)).collect()
    };
    let e = Arc::new(Embedding { src: src.clone(), dst: dst.clone(), images });
    embedding_cache().lock().unwrap().insert(key, e.clone());
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn f4_modulus_is_x2_x_1() {
        let f = ext_field_create(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn canonical_field_is_cached_and_deterministic() {
        let a = ext_field_create(5, 4).unwrap();
        let b = ext_field_create(5, 4).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        let base = Fq::prime(5).unwrap();
        assert!(UniPoly::new(&base, a.modulus().to_vec()).is_irreducible());
    }

    #[test]
    fn rejects_non_prime_and_zero_degree() {
        assert!(ext_field_create(6, 1).is_err());
        assert!(ext_field_create(5, 0).is_err());
    }

    #[test]
    fn field_axioms_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, k) in [(7u64, 1usize), (2, 5), (3, 4), (5, 3), (5, 8)] {
            let f = ext_field_create(p, k).unwrap();
            for _ in 0..2000 {
                let a = f.random(&mut rng);
                let b = f.random(&mut rng);
                let c = f.random(&mut rng);
                assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
                assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
                assert_eq!(f.sub(&f.add(&a, &b), &b), a);
                if a != 0 {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
                }
            }
        }
    }

    #[test]
    fn tables_agree_with_schoolbook() {
        let f = ext_field_create(7, 2).unwrap();
        for a in f.elements() {
            for b in [0, 1, 3, 17, 48] {
                assert_eq!(f.mul(&a, &b), f.mul_slow(a, b));
            }
        }
    }

    #[test]
    fn frobenius_is_automorphism_of_order_k() {
        let f = ext_field_create(3, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let a = f.random(&mut rng);
            let b = f.random(&mut rng);
            assert_eq!(f.frobenius(f.mul(&a, &b)), f.mul(&f.frobenius(a), &f.frobenius(b)));
            assert_eq!(f.frobenius(f.add(&a, &b)), f.add(&f.frobenius(a), &f.frobenius(b)));
            let mut c = a;
            for _ in 0..5 {
                c = f.frobenius(c);
            }
            assert_eq!(c, a);
        }
    }

    #[test]
    fn f4_generator_has_order_3_in_f16() {
        let f4 = ext_field_create(2, 2).unwrap();
        let f16 = ext_field_create(2, 4).unwrap();
        let e = embedding(&f4, &f16).unwrap();
        let g = e.map(&f4.generator());
        assert_ne!(g, 1);
        assert_eq!(f16.pow(&g, 3), 1);
    }

    #[test]
    fn embedding_is_ring_homomorphism() {
        let src = ext_field_create(5, 2).unwrap();
        let dst = ext_field_create(5, 4).unwrap();
        let e = embedding(&src, &dst).unwrap();
        assert_eq!(e.map(&3), 3);
        assert_eq!(e.map(&0), 0);
        assert_eq!(e.map(&1), 1);
        for a in src.elements() {
            for b in [2u64, 7, 13, 24] {
                assert_eq!(e.map(&src.mul(&a, &b)), dst.mul(&e.map(&a), &e.map(&b)));
                assert_eq!(e.map(&src.add(&a, &b)), dst.add(&e.map(&a), &e.map(&b)));
            }
        }
    }

    #[test]
    fn prime_into_extension_is_identity_on_constants() {
        let f5 = Fq::prime(5).unwrap();
        let big = ext_field_create(5, 4).unwrap();
        let e = embedding(&f5, &big).unwrap();
        assert_eq!(e.map(&3), 3);
        assert!(embedding(&ext_field_create(5, 3).unwrap(), &big).is_err());
    }

    #[test]
    fn custom_modulus_validated() {
        assert!(Fq::with_modulus(2, &[1, 0, 1]).is_err());
        let f = Fq::with_modulus(3, &[1, 0, 1]).unwrap();
        assert_eq!(f.order(), 9);
    }
}
