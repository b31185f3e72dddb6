//! Exponential polynomials sum c t^k e^{mu t} in one and two variables, and the
//! closed-form integration rules the kernel recursions are built from.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents closer than MU_TOL * (1 + |mu|) are treated as equal.
pub const MU_TOL: f64 = 1e-9;

pub fn same_exponent(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= MU_TOL * (1.0 + a.norm().max(b.norm()))
}

pub fn is_zero_exponent(w: Complex64) -> bool {
    w.norm() <= MU_TOL
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// One term c t^k e^{mu t}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpTerm {
    pub k: u32,
    pub mu: Complex64,
    pub c: Complex64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpPoly {
    pub terms: Vec<ExpTerm>,
}

/// Groups terms whose integer keys agree and whose exponents are equal up to MU_TOL.
fn merge<K, T, E, A>(terms: Vec<T>, key: K, exps: E, add: A) -> Vec<T>
where
    K: Fn(&T) -> (u32, u32),
    E: Fn(&T) -> (Complex64, Complex64),
    A: Fn(&mut T, &T),
{
    let mut out: Vec<T> = Vec::new();
    let mut buckets: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
    for t in terms {
        let b = buckets.entry(key(&t)).or_default();
        let (m1, n1) = exps(&t);
        let hit = b.iter().copied().find(|&i| {
            let (m2, n2) = exps(&out[i]);
            same_exponent(m1, m2) && same_exponent(n1, n2)
        });
        match hit {
            Some(i) => add(&mut out[i], &t),
            None => {
                b.push(out.len());
                out.push(t);
            }
        }
    }
    out
}

fn cmp_c(a: Complex64, b: Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    pub fn term(k: u32, mu: Complex64, coeff: Complex64) -> Self {
        Self::from_terms(vec![ExpTerm { k, mu, c: coeff }])
    }

    pub fn constant(coeff: Complex64) -> Self {
        Self::term(0, Complex64::new(0.0, 0.0), coeff)
    }

    /// e^{mu t}.
    pub fn exp(mu: Complex64) -> Self {
        Self::term(0, mu, c(1.0))
    }

    pub fn from_terms(terms: Vec<ExpTerm>) -> Self {
        let mut terms = merge(
            terms,
            |t| (t.k, 0),
            |t| (t.mu, Complex64::new(0.0, 0.0)),
            |a, b| a.c += b.c,
        );
        terms.retain(|t| t.c != Complex64::new(0.0, 0.0));
        terms.sort_by(|a, b| a.k.cmp(&b.k).then(cmp_c(a.mu, b.mu)));
        ExpPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.iter().map(|t| t.c.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &ExpPoly) -> ExpPoly {
        Self::from_terms(self.terms.iter().chain(&other.terms).copied().collect())
    }

    pub fn sub(&self, other: &ExpPoly) -> ExpPoly {
        self.add(&other.scale(c(-1.0)))
    }

    pub fn scale(&self, s: Complex64) -> ExpPoly {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| ExpTerm { c: t.c * s, ..*t })
                .collect(),
        )
    }

    /// Multiplies by e^{nu t}.
    pub fn shift(&self, nu: Complex64) -> ExpPoly {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| ExpTerm {
                    mu: t.mu + nu,
                    ..*t
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &ExpPoly) -> ExpPoly {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                out.push(ExpTerm {
                    k: a.k + b.k,
                    mu: a.mu + b.mu,
                    c: a.c * b.c,
                });
            }
        }
        Self::from_terms(out)
    }

    pub fn derivative(&self) -> ExpPoly {
        let mut out = Vec::with_capacity(2 * self.len());
        for t in &self.terms {
            out.push(ExpTerm {
                k: t.k,
                mu: t.mu,
                c: t.c * t.mu,
            });
            if t.k > 0 {
                out.push(ExpTerm {
                    k: t.k - 1,
                    mu: t.mu,
                    c: t.c * t.k as f64,
                });
            }
        }
        Self::from_terms(out)
    }

    /// (d/dt - lambda) applied once.
    pub fn apply_shifted_derivative(&self, lambda: Complex64) -> ExpPoly {
        self.derivative().sub(&self.scale(lambda))
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|x| x.c * t.powi(x.k as i32) * (x.mu * t).exp())
            .sum()
    }

    /// Drops terms below `rel * max_coeff`.
    pub fn pruned(&self, rel: f64) -> ExpPoly {
        let cut = rel * self.max_coeff();
        ExpPoly {
            terms: self
                .terms
                .iter()
                .filter(|t| t.c.norm() > cut)
                .copied()
                .collect(),
        }
    }

    /// Smallest Re(mu) over the terms; +inf for the zero polynomial.
    pub fn min_growth(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.mu.re)
            .fold(f64::INFINITY, f64::min)
    }

    /// Integrand e^{weight r} p(r) in r.
    pub(crate) fn as_term3(&self, weight: Complex64) -> Vec<Term3> {
        self.terms
            .iter()
            .map(|x| Term3 {
                a: 0,
                p: x.k,
                b: 0,
                mu: Complex64::new(0.0, 0.0),
                omega: x.mu + weight,
                nu: Complex64::new(0.0, 0.0),
                c: x.c,
            })
            .collect()
    }
}

/// Which integral `integrate_exp_poly` computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegralKind {
    /// int_{-inf}^t e^{nu s} p(s) ds
    LowerTail,
    /// int_t^0 e^{nu s} p(s) ds
    Finite,
}

pub fn integrate_exp_poly(p: &ExpPoly, kind: IntegralKind, weight: Complex64) -> Result<ExpPoly> {
    let (lo, hi) = match kind {
        IntegralKind::LowerTail => (Limit::NegInf, Limit::T),
        IntegralKind::Finite => (Limit::T, Limit::Zero),
    };
    Ok(integrate_r(&p.as_term3(weight), lo, hi)?.to_univariate())
}

/// One term c t^a s^b e^{mu t + nu s}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpTerm2 {
    pub a: u32,
    pub b: u32,
    pub mu: Complex64,
    pub nu: Complex64,
    pub c: Complex64,
}

/// Exponential polynomial in (t, s).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpPoly2 {
    pub terms: Vec<ExpTerm2>,
}

impl ExpPoly2 {
    pub fn zero() -> Self {
        ExpPoly2::default()
    }

    pub fn term(a: u32, b: u32, mu: Complex64, nu: Complex64, coeff: Complex64) -> Self {
        Self::from_terms(vec![ExpTerm2 {
            a,
            b,
            mu,
            nu,
            c: coeff,
        }])
    }

    pub fn from_terms(terms: Vec<ExpTerm2>) -> Self {
        let mut terms = merge(terms, |t| (t.a, t.b), |t| (t.mu, t.nu), |x, y| x.c += y.c);
        terms.retain(|t| t.c != Complex64::new(0.0, 0.0));
        terms.sort_by(|x, y| {
            x.a.cmp(&y.a)
                .then(x.b.cmp(&y.b))
                .then(cmp_c(x.mu, y.mu))
                .then(cmp_c(x.nu, y.nu))
        });
        ExpPoly2 { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ExpPoly2) -> ExpPoly2 {
        Self::from_terms(self.terms.iter().chain(&other.terms).copied().collect())
    }

    pub fn scale(&self, s: Complex64) -> ExpPoly2 {
        Self::from_terms(
            self.terms
                .iter()
                .map(|x| ExpTerm2 { c: x.c * s, ..*x })
                .collect(),
        )
    }

    /// Multiplies by e^{mu t + nu s}.
    pub fn shift(&self, mu: Complex64, nu: Complex64) -> ExpPoly2 {
        Self::from_terms(
            self.terms
                .iter()
                .map(|x| ExpTerm2 {
                    mu: x.mu + mu,
                    nu: x.nu + nu,
                    ..*x
                })
                .collect(),
        )
    }

    pub fn eval(&self, t: f64, s: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|x| x.c * t.powi(x.a as i32) * s.powi(x.b as i32) * (x.mu * t + x.nu * s).exp())
            .sum()
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.iter().map(|t| t.c.norm()).fold(0.0, f64::max)
    }

    /// Drops the s variable; only meaningful when no term depends on s.
    pub fn to_univariate(&self) -> ExpPoly {
        debug_assert!(self
            .terms
            .iter()
            .all(|x| x.b == 0 && is_zero_exponent(x.nu)));
        ExpPoly::from_terms(
            self.terms
                .iter()
                .map(|x| ExpTerm {
                    k: x.a,
                    mu: x.mu,
                    c: x.c,
                })
                .collect(),
        )
    }

    /// This polynomial read in (r, s), times e^{weight r}, as an integrand in r.
    pub(crate) fn as_r_integrand(&self, weight: Complex64) -> Vec<Term3> {
        let zero = Complex64::new(0.0, 0.0);
        self.terms
            .iter()
            .map(|y| Term3 {
                a: 0,
                p: y.a,
                b: y.b,
                mu: zero,
                omega: y.mu + weight,
                nu: y.nu,
                c: y.c,
            })
            .collect()
    }
}

/// Product of x(t, r) and y(r, s) as integrands in r.
pub(crate) fn product_tr_rs(x: &ExpPoly2, y: &ExpPoly2) -> Vec<Term3> {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for u in &x.terms {
        for v in &y.terms {
            out.push(Term3 {
                a: u.a,
                p: u.b + v.a,
                b: v.b,
                mu: u.mu,
                omega: u.nu + v.mu,
                nu: v.nu,
                c: u.c * v.c,
            });
        }
    }
    out
}

/// Product of x(t, s) and p(s), integrated over s.
pub(crate) fn product_ts_s(x: &ExpPoly2, p: &ExpPoly) -> Vec<Term3> {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(x.len() * p.len());
    for u in &x.terms {
        for v in &p.terms {
            out.push(Term3 {
                a: u.a,
                p: u.b + v.k,
                b: 0,
                mu: u.mu,
                omega: u.nu + v.mu,
                nu: zero,
                c: u.c * v.c,
            });
        }
    }
    out
}

/// c t^a r^p s^b e^{mu t + omega r + nu s}; r is the integration variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Term3 {
    pub a: u32,
    pub p: u32,
    pub b: u32,
    pub mu: Complex64,
    pub omega: Complex64,
    pub nu: Complex64,
    pub c: Complex64,
}

/// Integration limits for r.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    NegInf,
    T,
    S,
    Zero,
}

/// Antiderivative of r^p e^{omega r} as (q, coeff) pairs of r^q e^{omega' r}; returns omega'.
pub fn antiderivative(p: u32, omega: Complex64) -> (Vec<(u32, Complex64)>, Complex64) {
    if is_zero_exponent(omega) {
        return (
            vec![(p + 1, c(1.0 / (p as f64 + 1.0)))],
            Complex64::new(0.0, 0.0),
        );
    }
    // e^{wr} sum_q (-1)^{p-q} p!/q! w^{-(p-q+1)} r^q
    let inv = omega.inv();
    let mut out = Vec::with_capacity(p as usize + 1);
    let mut coeff = inv;
    for q in (0..=p).rev() {
        out.push((q, coeff));
        coeff = -coeff * q as f64 * inv;
    }
    out.reverse();
    (out, omega)
}

/// int_lo^hi of the terms in r, as a polynomial in (t, s).
pub(crate) fn integrate_r(terms: &[Term3], lo: Limit, hi: Limit) -> Result<ExpPoly2> {
    let mut out = Vec::with_capacity(terms.len() * 4);
    for x in terms {
        let (anti, w) = antiderivative(x.p, x.omega);
        for (lim, sign) in [(hi, 1.0), (lo, -1.0)] {
            match lim {
                Limit::NegInf => {
                    if x.omega.re <= MU_TOL {
                        return Err(Error::Domain(format!(
                            "integral from -inf diverges: r-exponent {} has non-positive real part",
                            x.omega
                        )));
                    }
                }
                Limit::Zero => {
                    if let Some((_, g0)) = anti.iter().find(|(q, _)| *q == 0) {
                        out.push(ExpTerm2 {
                            a: x.a,
                            b: x.b,
                            mu: x.mu,
                            nu: x.nu,
                            c: x.c * g0 * sign,
                        });
                    }
                }
                Limit::T => {
                    for &(q, g) in &anti {
                        out.push(ExpTerm2 {
                            a: x.a + q,
                            b: x.b,
                            mu: x.mu + w,
                            nu: x.nu,
                            c: x.c * g * sign,
                        });
                    }
                }
                Limit::S => {
                    for &(q, g) in &anti {
                        out.push(ExpTerm2 {
                            a: x.a,
                            b: x.b + q,
                            mu: x.mu,
                            nu: x.nu + w,
                            c: x.c * g * sign,
                        });
                    }
                }
            }
        }
    }
    Ok(ExpPoly2::from_terms(out))
}
