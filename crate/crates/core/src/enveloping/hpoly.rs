//! Polynomials in the Cartan generators h_1, ..., h_{n-1} (the commutative algebra U(h)).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{self, Q};

/// Sparse polynomial; keys are exponent vectors of length `rank`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HPoly {
    pub rank: usize,
    pub terms: BTreeMap<Vec<u32>, Q>,
}

impl HPoly {
    pub fn zero(rank: usize) -> Self {
        HPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(rank: usize, c: Q) -> Self {
        let mut p = Self::zero(rank);
        p.add_term(vec![0; rank], c);
        p
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, Q::one())
    }

    pub fn var(rank: usize, k: usize) -> Self {
        let mut e = vec![0; rank];
        e[k] = 1;
        let mut p = Self::zero(rank);
        p.add_term(e, Q::one());
        p
    }

    /// sum_k c_k h_k + c0.
    pub fn linear(coeffs: &[Q], c0: Q) -> Self {
        let rank = coeffs.len();
        let mut p = Self::constant(rank, c0);
        for (k, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; rank];
            e[k] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut p = Self::zero(self.rank);
        if s.is_zero() {
            return p;
        }
        for (e, c) in &self.terms {
            p.terms.insert(e.clone(), c * s);
        }
        p
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero(self.rank);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut p = Self::one(self.rank);
        for _ in 0..k {
            p = p.mul(self);
        }
        p
    }

    /// Substitutes h_k -> images[k] (an algebra homomorphism of U(h)).
    pub fn substitute(&self, images: &[HPoly]) -> Self {
        let mut out = Self::zero(self.rank);
        for (e, c) in &self.terms {
            let mut t = Self::constant(self.rank, c.clone());
            for (k, &ek) in e.iter().enumerate() {
                if ek > 0 {
                    t = t.mul(&images[k].pow(ek));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Evaluates at a point of h* given by the values lambda(h_k).
    pub fn eval(&self, point: &[Q]) -> Q {
        let mut s = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, &ek) in e.iter().enumerate() {
                for _ in 0..ek {
                    t *= &point[k];
                }
            }
            s += t;
        }
        s
    }
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(k, &x)| {
                        if x == 1 {
                            format!("h{}", k + 1)
                        } else {
                            format!("h{}^{}", k + 1, x)
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    rational::to_str(c)
                } else {
                    format!("({})*{}", rational::to_str(c), vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Image of h_k under the permutation `w` of diagonal entries, in h-coordinates.
pub fn weyl_image_of_var(n: usize, w: &[usize], k: usize) -> Vec<Q> {
    // h_k = e_k - e_{k+1}; w e_i = e_{w(i)}.
    let mut diag = vec![Q::zero(); n];
    diag[w[k]] += Q::one();
    diag[w[k + 1]] -= Q::one();
    let mut acc = Q::zero();
    diag[..n - 1]
        .iter()
        .map(|d| {
            acc += d;
            acc.clone()
        })
        .collect()
}

/// Action of a permutation of diagonal entries on U(h).
pub fn weyl_act(p: &HPoly, n: usize, w: &[usize]) -> HPoly {
    let images: Vec<HPoly> = (0..n - 1)
        .map(|k| HPoly::linear(&weyl_image_of_var(n, w, k), Q::zero()))
        .collect();
    p.substitute(&images)
}

/// Invariance under all adjacent transpositions (which generate S_n).
pub fn is_weyl_invariant(p: &HPoly, n: usize) -> bool {
    (0..n - 1).all(|i| {
        let mut w: Vec<usize> = (0..n).collect();
        w.swap(i, i + 1);
        &weyl_act(p, n, &w) == p
    })
}
