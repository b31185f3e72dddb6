//! Exact PBW normal form in U(g) for split sl(n).

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::{One, Zero};

use super::hpoly::HPoly;
use crate::error::{Error, Result};
use crate::lie::LieAlgebraData;
use crate::rational::Q;

/// Exponent vector indexed by position in the PBW order of the owning algebra.
pub type Monomial = Vec<u8>;

/// Element of U(g): canonical sparse map from ordered monomials to coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PbwElement {
    pub terms: BTreeMap<Monomial, Q>,
}

pub fn mono_degree(m: &[u8]) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

impl PbwElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_term(m: Monomial, c: Q) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_scaled(&mut self, o: &Self, s: &Q) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(o, &Q::one());
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(o, &-Q::one());
        r
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut r = Self::zero();
        r.add_scaled(self, s);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Filtration degree (0 for the zero element).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| mono_degree(m)).max().unwrap_or(0)
    }

    pub fn coeff(&self, m: &[u8]) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }
}

/// Limits guarding exact computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum filtration degree of any product.
    pub max_degree: usize,
    /// Maximum stored entries in exact elimination.
    pub max_entries: usize,
    /// Maximum cached straightening results.
    pub max_cache: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_degree: 12,
            max_entries: 20_000_000,
            max_cache: 4_000_000,
        }
    }
}

impl Limits {
    /// Derives limits from a memory budget in bytes (rough per-entry cost).
    pub fn from_memory_bytes(bytes: u64) -> Self {
        let per_entry = 96u64;
        let entries = (bytes / per_entry).max(1000) as usize;
        Limits {
            max_entries: entries,
            max_cache: (entries / 8).max(1000),
            ..Default::default()
        }
    }
}

/// U(g) with a fixed PBW order of the Lie algebra basis.
#[derive(Debug)]
pub struct PbwAlgebra {
    pub lie: LieAlgebraData,
    /// `order[p]` = Lie basis index at PBW position p.
    pub order: Vec<usize>,
    /// Inverse of `order`.
    pub position: Vec<usize>,
    /// Brackets in position coordinates.
    brackets: Vec<Vec<Vec<(usize, Q)>>>,
    pub limits: Limits,
    cache: Mutex<HashMap<(usize, Monomial), PbwElement>>,
}

impl Clone for PbwAlgebra {
    fn clone(&self) -> Self {
        Self::with_order(self.lie.clone(), self.order.clone(), self.limits).expect("valid order")
    }
}

impl PbwAlgebra {
    /// Default order: the Lie basis order (n+ by height, Cartan, n-).
    pub fn new(lie: LieAlgebraData, limits: Limits) -> Self {
        let order = (0..lie.dim_g).collect();
        Self::with_order(lie, order, limits).expect("identity order")
    }

    pub fn with_order(lie: LieAlgebraData, order: Vec<usize>, limits: Limits) -> Result<Self> {
        let d = lie.dim_g;
        let mut position = vec![usize::MAX; d];
        for (p, &a) in order.iter().enumerate() {
            if a >= d || position[a] != usize::MAX {
                return Err(Error::Argument(
                    "PBW order is not a permutation of the basis".into(),
                ));
            }
            position[a] = p;
        }
        if order.len() != d {
            return Err(Error::Argument("PBW order has wrong length".into()));
        }
        let brackets = (0..d)
            .map(|p| {
                (0..d)
                    .map(|q| {
                        lie.bracket(order[p], order[q])
                            .iter()
                            .map(|(c, v)| (position[*c], v.clone()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(PbwAlgebra {
            lie,
            order,
            position,
            brackets,
            limits,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn dim(&self) -> usize {
        self.lie.dim_g
    }

    pub fn one(&self) -> PbwElement {
        PbwElement::from_term(vec![0; self.dim()], Q::one())
    }

    pub fn scalar(&self, c: Q) -> PbwElement {
        PbwElement::from_term(vec![0; self.dim()], c)
    }

    /// Generator X_a for a Lie basis index a.
    pub fn generator(&self, a: usize) -> PbwElement {
        let mut m = vec![0; self.dim()];
        m[self.position[a]] = 1;
        PbwElement::from_term(m, Q::one())
    }

    /// Element of g given by dense Lie coordinates.
    pub fn from_lie(&self, coords: &[Q]) -> PbwElement {
        let mut e = PbwElement::zero();
        for (a, c) in coords.iter().enumerate() {
            e.add_scaled(&self.generator(a), c);
        }
        e
    }

    /// Lie basis indices of the monomial's factors, left to right.
    pub fn word(&self, m: &[u8]) -> Vec<usize> {
        let mut w = Vec::new();
        for (p, &e) in m.iter().enumerate() {
            for _ in 0..e {
                w.push(self.order[p]);
            }
        }
        w
    }

    pub fn is_positive_pos(&self, p: usize) -> bool {
        self.lie.is_positive(self.order[p])
    }

    pub fn is_cartan_pos(&self, p: usize) -> bool {
        self.lie.is_cartan(self.order[p])
    }

    pub fn is_negative_pos(&self, p: usize) -> bool {
        self.lie.is_negative(self.order[p])
    }

    /// X_{order[g]} * m, straightened (g is a position).
    fn left_mul_pos(&self, g: usize, m: &Monomial) -> Result<PbwElement> {
        let first = m.iter().position(|&e| e > 0);
        let direct = |m: &Monomial| -> Result<PbwElement> {
            if mono_degree(m) + 1 > self.limits.max_degree {
                return Err(Error::Resource(format!(
                    "PBW product exceeds degree bound {}",
                    self.limits.max_degree
                )));
            }
            let mut out = m.clone();
            out[g] = out[g]
                .checked_add(1)
                .ok_or_else(|| Error::Resource("exponent overflow".into()))?;
            Ok(PbwElement::from_term(out, Q::one()))
        };
        let f = match first {
            None => return direct(m),
            Some(f) if g <= f => return direct(m),
            Some(f) => f,
        };
        let key = (g, m.clone());
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        // X_g X_f M' = X_f (X_g M') + [X_g, X_f] M'
        let mut rest = m.clone();
        rest[f] -= 1;
        let inner = self.left_mul_pos(g, &rest)?;
        let mut out = PbwElement::zero();
        for (mono, c) in &inner.terms {
            out.add_scaled(&self.left_mul_pos(f, mono)?, c);
        }
        for (c, k) in &self.brackets[g][f] {
            out.add_scaled(&self.left_mul_pos(*c, &rest)?, k);
        }
        let mut cache = self.cache.lock().unwrap();
        if cache.len() < self.limits.max_cache {
            cache.insert(key, out.clone());
        }
        Ok(out)
    }

    /// Left multiplication by a Lie basis vector.
    pub fn left_mul_generator(&self, a: usize, x: &PbwElement) -> Result<PbwElement> {
        let g = self.position[a];
        let mut out = PbwElement::zero();
        for (m, c) in &x.terms {
            out.add_scaled(&self.left_mul_pos(g, m)?, c);
        }
        Ok(out)
    }

    /// Product of a word of Lie basis vectors with an element.
    pub fn word_times(&self, word: &[usize], x: &PbwElement) -> Result<PbwElement> {
        let mut cur = x.clone();
        for &a in word.iter().rev() {
            cur = self.left_mul_generator(a, &cur)?;
        }
        Ok(cur)
    }

    /// a * b in normal form.
    pub fn mul(&self, a: &PbwElement, b: &PbwElement) -> Result<PbwElement> {
        if a.degree() + b.degree() > self.limits.max_degree {
            return Err(Error::Resource(format!(
                "product degree {} exceeds bound {}",
                a.degree() + b.degree(),
                self.limits.max_degree
            )));
        }
        let mut out = PbwElement::zero();
        for (m, c) in &a.terms {
            let w = self.word(m);
            out.add_scaled(&self.word_times(&w, b)?, c);
        }
        Ok(out)
    }

    pub fn pow(&self, a: &PbwElement, k: usize) -> Result<PbwElement> {
        let mut out = self.one();
        for _ in 0..k {
            out = self.mul(&out, a)?;
        }
        Ok(out)
    }

    pub fn commutator(&self, a: &PbwElement, b: &PbwElement) -> Result<PbwElement> {
        Ok(self.mul(a, b)?.sub(&self.mul(b, a)?))
    }

    /// Rewrites an element of another PBW order into this one.
    pub fn convert_from(&self, other: &PbwAlgebra, x: &PbwElement) -> Result<PbwElement> {
        let mut out = PbwElement::zero();
        for (m, c) in &x.terms {
            let w = other.word(m);
            out.add_scaled(&self.word_times(&w, &self.one())?, c);
        }
        Ok(out)
    }

    /// Degree in the n+ generators of a monomial.
    pub fn positive_degree(&self, m: &[u8]) -> usize {
        m.iter()
            .enumerate()
            .filter(|(p, _)| self.is_positive_pos(*p))
            .map(|(_, &e)| e as usize)
            .sum()
    }

    pub fn negative_degree(&self, m: &[u8]) -> usize {
        m.iter()
            .enumerate()
            .filter(|(p, _)| self.is_negative_pos(*p))
            .map(|(_, &e)| e as usize)
            .sum()
    }

    /// Cartan positions, ordered h_1, ..., h_{n-1}.
    pub fn cartan_positions(&self) -> Vec<usize> {
        self.lie.cartan_range().map(|a| self.position[a]).collect()
    }

    /// Embeds a polynomial in h_1..h_{n-1} into U(g).
    pub fn from_hpoly(&self, p: &HPoly) -> PbwElement {
        let cp = self.cartan_positions();
        let mut out = PbwElement::zero();
        for (e, c) in &p.terms {
            let mut m = vec![0u8; self.dim()];
            for (k, &x) in e.iter().enumerate() {
                m[cp[k]] = x as u8;
            }
            out.add_term(m, c.clone());
        }
        out
    }

    /// Reads an element supported on Cartan monomials as a polynomial.
    pub fn to_hpoly(&self, x: &PbwElement) -> Result<HPoly> {
        let cp = self.cartan_positions();
        let mut p = HPoly::zero(cp.len());
        for (m, c) in &x.terms {
            if m.iter()
                .enumerate()
                .any(|(pos, &e)| e > 0 && !self.is_cartan_pos(pos))
            {
                return Err(Error::Argument("element is not in U(h)".into()));
            }
            p.add_term(cp.iter().map(|&pos| m[pos] as u32).collect(), c.clone());
        }
        Ok(p)
    }

    /// Human-readable form such as `(1/2)*H1^2 + (1/1)*E12*F12`.
    pub fn display(&self, x: &PbwElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.terms
            .iter()
            .map(|(m, c)| {
                let f: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(p, &e)| {
                        let l = self.lie.basis[self.order[p]].label();
                        if e == 1 {
                            l
                        } else {
                            format!("{l}^{e}")
                        }
                    })
                    .collect();
                let c = crate::rational::to_str(c);
                if f.is_empty() {
                    c
                } else {
                    format!("({c})*{}", f.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Entry point mirroring the straightening product.
pub fn pbw_multiply(alg: &PbwAlgebra, a: &PbwElement, b: &PbwElement) -> Result<PbwElement> {
    alg.mul(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::build_split_sl;
    use crate::rational::q;

    fn sl2() -> PbwAlgebra {
        PbwAlgebra::new(build_split_sl(2).unwrap(), Limits::default())
    }

    #[test]
    fn sl2_basic_products() {
        let a = sl2();
        let (e, h, f) = (a.generator(0), a.generator(1), a.generator(2));
        let ef = a.mul(&e, &f).unwrap();
        assert_eq!(ef, PbwElement::from_term(vec![1, 0, 1], q(1)));
        let fe = a.mul(&f, &e).unwrap();
        assert_eq!(fe, ef.sub(&h));
        assert_eq!(a.commutator(&h, &e).unwrap(), e.scale(&q(2)));
    }

    #[test]
    fn degree_guard() {
        let a = PbwAlgebra::new(
            build_split_sl(2).unwrap(),
            Limits {
                max_degree: 3,
                ..Default::default()
            },
        );
        let e = a.generator(0);
        let e2 = a.mul(&e, &e).unwrap();
        assert!(matches!(a.mul(&e2, &e2), Err(Error::Resource(_))));
    }

    #[test]
    fn filtration_of_commutators() {
        let a = PbwAlgebra::new(build_split_sl(3).unwrap(), Limits::default());
        for x in 0..8 {
            for y in 0..8 {
                let gx = a.generator(x);
                let gy = a.mul(&a.generator(y), &a.generator((y + 3) % 8)).unwrap();
                let c = a.commutator(&gx, &gy).unwrap();
                assert!(c.is_zero() || c.degree() <= 2);
            }
        }
    }

    #[test]
    fn order_conversion_round_trip() {
        let lie = build_split_sl(3).unwrap();
        let a = PbwAlgebra::new(lie.clone(), Limits::default());
        let b =
            PbwAlgebra::with_order(lie, vec![2, 1, 0, 3, 4, 7, 6, 5], Limits::default()).unwrap();
        let x = a
            .mul(
                &a.generator(7),
                &a.mul(&a.generator(0), &a.generator(3)).unwrap(),
            )
            .unwrap();
        let y = b.convert_from(&a, &x).unwrap();
        assert_eq!(a.convert_from(&b, &y).unwrap(), x);
    }
}
