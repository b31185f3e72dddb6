//! Independent oracles shared by the integration tests: word straightening in U(g),
//! undetermined coefficients for constant-coefficient ODEs with exp-poly right-hand sides,
//! and composite Gauss-Legendre.
#![allow(dead_code)]

use std::collections::BTreeMap;

use gauss_quad::GaussLegendre;
use horokit_core::enveloping::PbwElement;
use horokit_core::lie::LieAlgebraData;
use horokit_core::rational::Q;
use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;

pub type Terms = Vec<(u32, Complex64, Complex64)>;

pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn eval(terms: &Terms, t: f64) -> Complex64 {
    terms
        .iter()
        .map(|&(k, mu, c)| c * t.powi(k as i32) * (mu * t).exp())
        .sum()
}

/// i-th derivative at 0 of sum c t^k e^{mu t}.
pub fn deriv_at_zero(terms: &Terms, i: u32) -> Complex64 {
    let mut out = cx(0.0, 0.0);
    for &(k, mu, c) in terms {
        if i >= k {
            let binom = factorial(i) / (factorial(k) * factorial(i - k));
            out += c * binom * factorial(k) * mu.powu(i - k);
        }
    }
    out
}

/// Coefficients of prod_i (x + mu - lambda_i), lowest first.
fn shifted_char_poly(lambdas: &[Complex64], mu: Complex64) -> Vec<Complex64> {
    let mut p = vec![cx(1.0, 0.0)];
    for l in lambdas {
        let mut next = vec![cx(0.0, 0.0); p.len() + 1];
        for (d, c) in p.iter().enumerate() {
            next[d + 1] += c;
            next[d] += c * (mu - l);
        }
        p = next;
    }
    p
}

/// A particular solution of prod (d/dt - lambda_i) y = sum c t^k e^{mu t}: for each mu,
/// y = e^{mu t} r(t) with P(D + mu) r = q solved from the top degree down.
pub fn particular(lambdas: &[Complex64], rhs: &Terms) -> Terms {
    let mut out = Terms::new();
    let mut groups: Vec<(Complex64, Vec<Complex64>)> = Vec::new();
    for &(k, mu, c) in rhs {
        let g = match groups
            .iter_mut()
            .position(|(m, _)| (*m - mu).norm() < 1e-12)
        {
            Some(i) => &mut groups[i].1,
            None => {
                groups.push((mu, Vec::new()));
                &mut groups.last_mut().unwrap().1
            }
        };
        if g.len() <= k as usize {
            g.resize(k as usize + 1, cx(0.0, 0.0));
        }
        g[k as usize] += c;
    }
    for (mu, q) in groups {
        let a = shifted_char_poly(lambdas, mu);
        let nu = a.iter().position(|c| c.norm() > 1e-13).unwrap();
        let deg = q.len() - 1;
        let mut r = vec![cx(0.0, 0.0); deg + nu + 1];
        for m in (0..=deg).rev() {
            // sum_{n >= nu} a_n r_{m+n} (m+n)!/m! = q_m
            let mut acc = q[m];
            for n in nu + 1..a.len() {
                if m + n < r.len() {
                    acc -= a[n] * r[m + n] * (factorial((m + n) as u32) / factorial(m as u32));
                }
            }
            r[m + nu] = acc / (a[nu] * (factorial((m + nu) as u32) / factorial(m as u32)));
        }
        for (k, c) in r.into_iter().enumerate() {
            if c.norm() > 0.0 {
                out.push((k as u32, mu, c));
            }
        }
    }
    out
}

/// Composite 20-point Gauss-Legendre over [a, b] with `pieces` panels.
pub fn gl<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, pieces: usize) -> Complex64 {
    let rule = GaussLegendre::new(20).unwrap();
    let h = (b - a) / pieces as f64;
    let mut out = cx(0.0, 0.0);
    for p in 0..pieces {
        let (lo, hi) = (a + p as f64 * h, a + (p + 1) as f64 * h);
        out += cx(
            rule.integrate(lo, hi, |x| f(x).re),
            rule.integrate(lo, hi, |x| f(x).im),
        );
    }
    out
}

/// Random ODE instance: lambda_i with |lambda| <= 10 and pairwise separation >= 0.5, beta away
/// from every Re(lambda), psi decaying faster than e^{beta t}, and a solution made of the
/// particular solution plus homogeneous terms for the lambda with Re >= beta.
pub struct Instance {
    pub lambdas: Vec<Complex64>,
    pub beta: f64,
    pub psi: Terms,
    pub truth: Terms,
}

fn in_disc<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    loop {
        let z = cx(
            rng.gen_range(-radius..radius),
            rng.gen_range(-radius..radius),
        );
        if z.norm() <= radius {
            return z;
        }
    }
}

pub fn random_instance<R: Rng>(rng: &mut R, max_w: usize) -> Instance {
    'retry: loop {
        let w = rng.gen_range(1..=max_w);
        let mut lambdas: Vec<Complex64> = Vec::new();
        while lambdas.len() < w {
            let l = in_disc(rng, 10.0);
            if lambdas.iter().all(|m| (*m - l).norm() >= 0.5) {
                lambdas.push(l);
            }
        }
        let beta = rng.gen_range(0.2..4.0);
        if lambdas.iter().any(|l| (l.re - beta).abs() < 0.25) {
            continue;
        }
        let mut psi = Terms::new();
        for _ in 0..rng.gen_range(1..=3) {
            let mu = cx(beta + rng.gen_range(0.3..4.0), rng.gen_range(-3.0..3.0));
            if lambdas.iter().any(|l| (*l - mu).norm() < 0.5) {
                continue 'retry;
            }
            psi.push((
                rng.gen_range(0..=2),
                mu,
                cx(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            ));
        }
        let mut truth = particular(&lambdas, &psi);
        for l in lambdas.iter().filter(|l| l.re >= beta) {
            truth.push((
                0,
                *l,
                cx(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            ));
        }
        return Instance {
            lambdas,
            beta,
            psi,
            truth,
        };
    }
}

impl Instance {
    pub fn boundary(&self) -> Vec<Complex64> {
        (0..=self.lambdas.len() as u32)
            .map(|i| deriv_at_zero(&self.truth, i))
            .collect()
    }
}

/// Independent straightening: rewrite words by adjacent swaps until sorted.
pub fn straighten(lie: &LieAlgebraData, words: BTreeMap<Vec<usize>, Q>) -> BTreeMap<Vec<usize>, Q> {
    let mut todo = words;
    let mut done: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
    while let Some((w, c)) = todo.pop_first() {
        if c.is_zero() {
            continue;
        }
        match (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) {
            None => *done.entry(w).or_insert_with(Q::zero) += c,
            Some(i) => {
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                *todo.entry(swapped).or_insert_with(Q::zero) += &c;
                for (k, v) in lie.bracket(w[i], w[i + 1]) {
                    let mut nw = w[..i].to_vec();
                    nw.push(*k);
                    nw.extend_from_slice(&w[i + 2..]);
                    *todo.entry(nw).or_insert_with(Q::zero) += &c * v;
                }
            }
        }
    }
    done.retain(|_, v| !v.is_zero());
    done
}

pub fn to_pbw(lie: &LieAlgebraData, m: BTreeMap<Vec<usize>, Q>) -> PbwElement {
    let mut e = PbwElement::zero();
    for (w, c) in m {
        let mut exps = vec![0u8; lie.dim_g];
        for a in w {
            exps[a] += 1;
        }
        e.add_term(exps, c);
    }
    e
}
