//! Factorization over finite fields: squarefree decomposition, distinct-degree
//! and equal-degree (Cantor–Zassenhaus) splitting, and root finding.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::UniPoly;
use crate::error::{Error, Result};
use crate::exact_arith::{embedding, Field, Fq};

/// Fields up to this size are searched for roots by direct evaluation.
pub const EXHAUSTIVE_ROOT_LIMIT: u64 = 1 << 12;

impl UniPoly<Fq> {
    /// Monic squarefree part (product of the distinct monic irreducible factors).
    pub fn squarefree_part(&self) -> UniPoly<Fq> {
        let mut acc = UniPoly::one(self.field());
        for (g, _) in self.squarefree_decomposition() {
            acc = &acc * &g;
        }
        acc
    }

    /// Pairs (g_i, i) with self = lc * prod g_i^i, each g_i squarefree and
    /// pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly<Fq>, usize)> {
        let f = self.monic();
        if f.degree() <= 0 {
            return Vec::new();
        }
        let field = f.field().clone();
        let p = field.p() as usize;
        let mut out = Vec::new();
        let mut c = f.gcd(&f.derivative());
        let mut w = f.exact_div(&c);
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.exact_div(&y);
            if !fac.is_one() {
                out.push((fac, i));
            }
            w = y;
            c = c.exact_div(&w);
            i += 1;
        }
        if !c.is_one() {
            // c is a p-th power: take coefficient-wise p-th roots.
            let root_exp = field.order() / field.p();
            let coeffs = c.coeffs();
            let mut r = Vec::with_capacity(coeffs.len() / p + 1);
            let mut j = 0;
            while j < coeffs.len() {
                r.push(field.pow(&coeffs[j], root_exp));
                j += p;
            }
            let root = UniPoly::new(&field, r);
            for (g, m) in root.squarefree_decomposition() {
                out.push((g, m * p));
            }
        }
        out.sort_by_key(|a| a.1);
        out
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// pairs (g, d) where g is the product of all irreducible factors of degree d.
    pub fn distinct_degree(&self) -> Vec<(UniPoly<Fq>, usize)> {
        let field = self.field().clone();
        let q = field.order();
        let x = UniPoly::x(&field);
        let mut f = self.monic();
        let mut out = Vec::new();
        let mut h = x.rem(&f);
        let mut d = 1;
        while f.degree() >= 2 * d as i64 {
            h = h.powmod(q, &f);
            let g = f.gcd(&(&h - &x));
            if !g.is_one() {
                f = f.exact_div(&g);
                h = h.rem(&f);
                out.push((g, d));
            }
            d += 1;
        }
        if f.degree() > 0 {
            let deg = f.deg().unwrap();
            out.push((f, deg));
        }
        out
    }

    /// Split a monic squarefree product of irreducibles of degree d.
    pub fn equal_degree(&self, d: usize) -> Vec<UniPoly<Fq>> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + d as u64);
        let mut out = Vec::new();
        self.equal_degree_rec(d, &mut rng, &mut out);
        out.sort_by(poly_order);
        out
    }

    fn equal_degree_rec(&self, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<UniPoly<Fq>>) {
        let n = self.deg().unwrap_or(0);
        if n == d {
            out.push(self.monic());
            return;
        }
        if n == 0 {
            return;
        }
        let field = self.field().clone();
        let q = field.order();
        loop {
            let a = UniPoly::new(&field, (0..n).map(|_| field.random(rng)).collect());
            if a.degree() <= 0 {
                continue;
            }
            let b = if field.p() == 2 {
                // Absolute trace down to F_2: sum of a^{2^i}, i < k*d.
                let steps = field.degree() * d;
                let mut t = a.rem(self);
                let mut acc = t.clone();
                for _ in 1..steps {
                    t = (&t * &t).rem(self);
                    acc = &acc + &t;
                }
                acc
            } else {
                // a^{(q^d-1)/2} = (prod_{i<d} a^{q^i})^{(q-1)/2}.
                let mut t = a.rem(self);
                let mut norm = t.clone();
                for _ in 1..d {
                    t = t.powmod(q, self);
                    norm = (&norm * &t).rem(self);
                }
                &norm.powmod((q - 1) / 2, self) - &UniPoly::one(&field)
            };
            let g = self.gcd(&b);
            if g.degree() > 0 && g.degree() < n as i64 {
                let other = self.exact_div(&g);
                g.equal_degree_rec(d, rng, out);
                other.equal_degree_rec(d, rng, out);
                return;
            }
        }
    }

    /// Monic irreducible factors with multiplicities, sorted by degree then
    /// coefficients.
    pub fn factor(&self) -> Vec<(UniPoly<Fq>, usize)> {
        let mut out = Vec::new();
        for (g, m) in self.squarefree_decomposition() {
            for (h, d) in g.distinct_degree() {
                for irr in h.equal_degree(d) {
                    out.push((irr, m));
                }
            }
        }
        out.sort_by(|a, b| poly_order(&a.0, &b.0));
        out
    }

    /// Irreducible-factor degrees with multiplicity: degree -> count.
    pub fn factor_degrees(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for (g, m) in self.squarefree_decomposition() {
            for (h, d) in g.distinct_degree() {
                *out.entry(d).or_insert(0) += m * (h.deg().unwrap() / d);
            }
        }
        out
    }

    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.deg() else { return false };
        if n == 0 {
            return false;
        }
        if !self.gcd(&self.derivative()).is_one() {
            return false;
        }
        let dd = self.distinct_degree();
        dd.len() == 1 && dd[0].1 == n
    }

    /// Distinct roots in the coefficient field, ascending.
    pub fn roots(&self) -> Vec<u64> {
        if self.is_zero() {
            return Vec::new();
        }
        let field = self.field().clone();
        let f = self.monic();
        if f.degree() <= 0 {
            return Vec::new();
        }
        let mut roots = if field.order() <= EXHAUSTIVE_ROOT_LIMIT {
            field.elements().filter(|x| f.eval(x) == 0).collect::<Vec<_>>()
        } else {
            let x = UniPoly::x(&field);
            let split = f.gcd(&(&x.powmod(field.order(), &f) - &x));
            if split.degree() <= 0 {
                Vec::new()
            } else {
                split.equal_degree(1).iter().map(|l| field.neg(&l.coeff(0))).collect()
            }
        };
        roots.sort_unstable();
        roots.dedup();
        roots
    }

    /// Distinct roots lying in the extension `target`, ascending.
    pub fn roots_in_field(&self, target: &Fq) -> Result<Vec<u64>> {
        let emb = embedding(self.field(), target)?;
        Ok(self.map_field(target, |c| emb.map(c)).roots())
    }

    /// Roots in the field of degree `deg` over this polynomial's field,
    /// refusing degrees above `cap`.
    pub fn roots_in_extension(&self, deg: usize, cap: usize) -> Result<(Fq, Vec<u64>)> {
        if deg > cap {
            return Err(Error::CapExceeded(format!("extension of degree {deg} exceeds cap {cap}")));
        }
        let base = self.field();
        let target = crate::exact_arith::ext_field_create(base.p(), base.degree() * deg)?;
        let roots = self.roots_in_field(&target)?;
        Ok((target, roots))
    }
}

/// Total order used for deterministic output: degree, then coefficients from
/// the top.
pub fn poly_order(a: &UniPoly<Fq>, b: &UniPoly<Fq>) -> std::cmp::Ordering {
    a.degree().cmp(&b.degree()).then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}
