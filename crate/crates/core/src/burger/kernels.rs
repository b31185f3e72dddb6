//! The kernels F(lambda, beta; t, s) and F_i(lambda, beta; t) expressing a solution of
//! prod_i (d/dt - lambda_i) I = psi on t <= 0 through psi and the derivatives I^{(i)}(0).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::exppoly::{integrate_r, product_tr_rs, product_ts_s, ExpPoly, ExpPoly2, Limit};
use super::lambda::LambdaSpec;
use crate::error::{Error, Result};

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A function of (t, s) given by one exponential polynomial on s <= t and another on s > t.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiecewiseKernel2 {
    pub below: ExpPoly2,
    pub above: ExpPoly2,
}

impl PiecewiseKernel2 {
    pub fn eval(&self, t: f64, s: f64) -> Complex64 {
        if s <= t {
            self.below.eval(t, s)
        } else {
            self.above.eval(t, s)
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        PiecewiseKernel2 {
            below: self.below.scale(c),
            above: self.above.scale(c),
        }
    }

    pub fn shift(&self, mu: Complex64, nu: Complex64) -> Self {
        PiecewiseKernel2 {
            below: self.below.shift(mu, nu),
            above: self.above.shift(mu, nu),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        PiecewiseKernel2 {
            below: self.below.add(&other.below),
            above: self.above.add(&other.above),
        }
    }

    pub fn num_terms(&self) -> usize {
        self.below.len() + self.above.len()
    }

    /// int_{-inf}^0 K(t, s) p(s) ds.
    pub fn apply(&self, p: &ExpPoly) -> Result<ExpPoly> {
        let lower = integrate_r(&product_ts_s(&self.below, p), Limit::NegInf, Limit::T)?;
        let upper = integrate_r(&product_ts_s(&self.above, p), Limit::T, Limit::Zero)?;
        Ok(lower.add(&upper).to_univariate())
    }

    /// (t, s) -> int_{-inf}^0 self(t, r) other(r, s) dr.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let bb = product_tr_rs(&self.below, &other.below);
        let ba = product_tr_rs(&self.below, &other.above);
        let ab = product_tr_rs(&self.above, &other.below);
        let aa = product_tr_rs(&self.above, &other.above);
        // s <= t: r < s < t, s < r < t, r > t
        let below = integrate_r(&ba, Limit::NegInf, Limit::S)?
            .add(&integrate_r(&bb, Limit::S, Limit::T)?)
            .add(&integrate_r(&ab, Limit::T, Limit::Zero)?);
        // s > t: r < t < s, t < r < s, r > s
        let above = integrate_r(&ba, Limit::NegInf, Limit::T)?
            .add(&integrate_r(&aa, Limit::T, Limit::S)?)
            .add(&integrate_r(&ab, Limit::S, Limit::Zero)?);
        Ok(PiecewiseKernel2 { below, above })
    }
}

/// F and F_0..F_W for one LambdaSpec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Burger1Kernels {
    pub spec: LambdaSpec,
    pub f: PiecewiseKernel2,
    pub fi: Vec<ExpPoly>,
}

/// Coefficients of prod_{k >= i+1} (Y - lambda_k^+), lowest degree first, padded to len w + 1.
fn boundary_poly(plus: &[Complex64], i: usize, w: usize) -> Vec<Complex64> {
    let mut p = vec![cx(1.0)];
    for l in &plus[i..] {
        let mut next = vec![ZERO; p.len() + 1];
        for (d, c) in p.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= c * l;
        }
        p = next;
    }
    p.resize(w + 1, ZERO);
    p
}

/// Phi_0 on s <= t for m_1 > 0: nested integrals over s <= r_2 <= ... <= r_{m_1} <= t.
fn phi0(minus: &[Complex64]) -> Result<PiecewiseKernel2> {
    let mut h = ExpPoly2::term(0, 0, ZERO, ZERO, cx(1.0));
    for k in 1..minus.len() {
        h = integrate_r(
            &h.as_r_integrand(minus[k - 1] - minus[k]),
            Limit::S,
            Limit::T,
        )?;
    }
    let below = h.shift(minus[minus.len() - 1], -minus[0]);
    Ok(PiecewiseKernel2 {
        below,
        above: ExpPoly2::zero(),
    })
}

/// Phi_{i+1}(t, s) = -int_t^0 e^{kappa r} Phi_i(r, s) dr.
fn phi_step(phi: &PiecewiseKernel2, kappa: Complex64) -> Result<PiecewiseKernel2> {
    let a = phi.below.as_r_integrand(kappa);
    let b = phi.above.as_r_integrand(kappa);
    let below = integrate_r(&a, Limit::T, Limit::Zero)?.scale(cx(-1.0));
    let above = integrate_r(&b, Limit::T, Limit::S)?
        .add(&integrate_r(&a, Limit::S, Limit::Zero)?)
        .scale(cx(-1.0));
    Ok(PiecewiseKernel2 { below, above })
}

/// Builds F and F_i by the recursions in Phi_i and Pi_{i,j}.
pub fn burger1_kernels(spec: &LambdaSpec) -> Result<Burger1Kernels> {
    let (m1, m2, w) = (spec.m1(), spec.m2(), spec.w());
    if w == 0 {
        return Err(Error::Argument("W must be positive".into()));
    }
    let plus = &spec.plus;
    let constant = |c: Complex64| ExpPoly::constant(c);
    let (mut phi, mut pi, start) = if m1 > 0 {
        (phi0(&spec.minus)?, vec![ExpPoly::zero(); w + 1], 0)
    } else {
        let phi1 = PiecewiseKernel2 {
            below: ExpPoly2::zero(),
            above: ExpPoly2::term(0, 0, ZERO, -plus[0], cx(-1.0)),
        };
        (
            phi1,
            boundary_poly(plus, 1, w)
                .into_iter()
                .map(constant)
                .collect(),
            1,
        )
    };
    for i in start..m2 {
        let prev = if i == 0 { ZERO } else { plus[i - 1] };
        let kappa = prev - plus[i];
        phi = phi_step(&phi, kappa)?;
        let p_next = boundary_poly(plus, i + 1, w);
        let mut next = Vec::with_capacity(w + 1);
        for (j, pij) in pi.iter().enumerate() {
            let tail = integrate_r(&pij.as_term3(kappa), Limit::T, Limit::Zero)?.to_univariate();
            next.push(constant(p_next[j]).sub(&tail));
        }
        pi = next;
    }
    let last = if m2 > 0 { plus[m2 - 1] } else { ZERO };
    let f = phi.shift(last, ZERO);
    let fi = pi.iter().map(|p| p.shift(last)).collect();
    Ok(Burger1Kernels {
        spec: spec.clone(),
        f,
        fi,
    })
}

pub fn kernel_f(spec: &LambdaSpec) -> Result<PiecewiseKernel2> {
    Ok(burger1_kernels(spec)?.f)
}

pub fn kernel_fi(spec: &LambdaSpec) -> Result<Vec<ExpPoly>> {
    Ok(burger1_kernels(spec)?.fi)
}

/// int_{-inf}^0 F(t, s) psi(s) ds + sum_i F_i(t) boundary[i].
pub fn burger1_reconstruct(
    spec: &LambdaSpec,
    psi: &ExpPoly,
    boundary: &[Complex64],
) -> Result<ExpPoly> {
    spec.validate()?;
    let gamma = psi.min_growth();
    if gamma <= spec.beta {
        return Err(Error::Domain(format!(
            "psi grows like e^({gamma} t), need gamma > beta = {}",
            spec.beta
        )));
    }
    if boundary.len() != spec.w() + 1 {
        return Err(Error::Argument(format!(
            "expected {} boundary values, got {}",
            spec.w() + 1,
            boundary.len()
        )));
    }
    let k = burger1_kernels(spec)?;
    reconstruct_with(&k, psi, boundary)
}

pub fn reconstruct_with(
    k: &Burger1Kernels,
    psi: &ExpPoly,
    boundary: &[Complex64],
) -> Result<ExpPoly> {
    let mut out = k.f.apply(psi)?;
    for (fi, b) in k.fi.iter().zip(boundary) {
        out = out.add(&fi.scale(*b));
    }
    Ok(out)
}

/// prod_i (d/dt - lambda_i) p.
pub fn apply_ode(lambdas: &[Complex64], p: &ExpPoly) -> ExpPoly {
    lambdas
        .iter()
        .fold(p.clone(), |acc, l| acc.apply_shifted_derivative(*l))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeResidual {
    pub max_abs: f64,
    pub scale: f64,
    pub relative: f64,
}

/// Residual of prod (d/dt - lambda_i) I - psi in the exp-poly algebra, coefficientwise.
pub fn ode_residual(lambdas: &[Complex64], i: &ExpPoly, psi: &ExpPoly) -> OdeResidual {
    let lhs = apply_ode(lambdas, i);
    let scale = lhs.max_coeff().max(psi.max_coeff()).max(f64::MIN_POSITIVE);
    let max_abs = lhs.sub(psi).max_coeff();
    OdeResidual {
        max_abs,
        scale,
        relative: max_abs / scale,
    }
}

/// Checks e^{-lambda_i^- r} prod_{j>i} (d/dr - lambda_j^-) prod_k (d/dr - lambda_k^+) I(r) -> 0 as
/// r -> -inf for every i, ignoring terms below `rel` of the largest coefficient.
pub fn vanishes_at_minus_infinity(spec: &LambdaSpec, i: &ExpPoly, rel: f64) -> bool {
    let mut base = apply_ode(&spec.plus, i);
    for idx in (0..spec.m1()).rev() {
        let proj = base.shift(-spec.minus[idx]);
        let cut = rel * proj.max_coeff().max(i.max_coeff());
        if proj
            .terms
            .iter()
            .any(|x| x.c.norm() > cut && x.mu.re <= 0.0)
        {
            return false;
        }
        base = base.apply_shifted_derivative(spec.minus[idx]);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::super::lambda::order_lambda;
    use super::*;

    #[test]
    fn single_minus_is_indicator() {
        let k = burger1_kernels(&order_lambda(&[cx(0.0)], 0.5)).unwrap();
        assert_eq!(k.f.eval(-1.0, -2.0), cx(1.0));
        assert_eq!(k.f.eval(-2.0, -1.0), ZERO);
        assert!(k.fi.iter().all(|p| p.is_zero()));
    }

    #[test]
    fn single_plus() {
        let k = burger1_kernels(&order_lambda(&[cx(1.0)], 0.5)).unwrap();
        assert!((k.f.eval(-2.0, -1.0) - cx(-(-1.0f64).exp())).norm() < 1e-15);
        assert_eq!(k.f.eval(-1.0, -2.0), ZERO);
        assert!((k.fi[0].eval(-1.5) - cx((-1.5f64).exp())).norm() < 1e-15);
        assert!(k.fi[1].is_zero());
    }

    #[test]
    fn boundary_poly_coefficients() {
        let p = boundary_poly(&[cx(2.0), cx(3.0)], 0, 3);
        assert_eq!(p, vec![cx(6.0), cx(-5.0), cx(1.0), ZERO]);
        assert_eq!(boundary_poly(&[cx(2.0)], 1, 1), vec![cx(1.0), ZERO]);
    }

    #[test]
    fn zero_data() {
        let spec = order_lambda(&[cx(0.3), cx(2.0)], 1.0);
        let r = burger1_reconstruct(&spec, &ExpPoly::zero(), &[ZERO; 3]).unwrap();
        assert!(r.max_coeff() < 1e-15);
    }

    #[test]
    fn slow_psi_is_domain_error() {
        let spec = order_lambda(&[cx(0.3)], 1.0);
        let psi = ExpPoly::exp(cx(0.8));
        assert!(matches!(
            burger1_reconstruct(&spec, &psi, &[ZERO; 2]),
            Err(Error::Domain(_))
        ));
    }
}
