//! Splitting the spectral parameters lambda_1..lambda_W at a threshold beta.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaSpec {
    pub beta: f64,
    /// Re < beta, by descending real part.
    pub minus: Vec<Complex64>,
    /// Re >= beta, by descending real part.
    pub plus: Vec<Complex64>,
}

fn descending(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im))
}

/// Ties Re(lambda) = beta go to the plus side.
pub fn order_lambda(lambdas: &[Complex64], beta: f64) -> LambdaSpec {
    let mut sorted = lambdas.to_vec();
    sorted.sort_by(descending);
    let (plus, minus): (Vec<_>, Vec<_>) = sorted.into_iter().partition(|l| l.re >= beta);
    LambdaSpec { beta, minus, plus }
}

impl LambdaSpec {
    pub fn m1(&self) -> usize {
        self.minus.len()
    }

    pub fn m2(&self) -> usize {
        self.plus.len()
    }

    pub fn w(&self) -> usize {
        self.minus.len() + self.plus.len()
    }

    /// max_i |lambda_i|.
    pub fn lambda_inf(&self) -> f64 {
        self.minus
            .iter()
            .chain(&self.plus)
            .map(|l| l.norm())
            .fold(0.0, f64::max)
    }

    pub fn lambdas(&self) -> Vec<Complex64> {
        self.minus.iter().chain(&self.plus).copied().collect()
    }

    /// m_0 = max(0, m_1 - 1).
    pub fn m0(&self) -> usize {
        self.m1().saturating_sub(1)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::Argument(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        if self.w() == 0 {
            return Err(Error::Argument("empty lambda multiset".into()));
        }
        if self
            .minus
            .iter()
            .chain(&self.plus)
            .any(|l| !l.re.is_finite() || !l.im.is_finite())
        {
            return Err(Error::Argument("non-finite lambda".into()));
        }
        if let Some(l) = self.minus.iter().find(|l| l.re >= self.beta) {
            return Err(Error::Argument(format!(
                "lambda {l} has Re >= beta but sits in the minus part"
            )));
        }
        if let Some(l) = self.plus.iter().find(|l| l.re < self.beta) {
            return Err(Error::Argument(format!(
                "lambda {l} has Re < beta but sits in the plus part"
            )));
        }
        let sorted = |v: &[Complex64]| v.windows(2).all(|w| w[0].re >= w[1].re);
        if !sorted(&self.minus) || !sorted(&self.plus) {
            return Err(Error::Argument(
                "lambda parts are not ordered by descending real part".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn splits() {
        let s = order_lambda(&[cx(0.0, 0.0), cx(2.0, 0.0)], 1.0);
        assert_eq!(
            (s.minus.clone(), s.plus.clone()),
            (vec![cx(0.0, 0.0)], vec![cx(2.0, 0.0)])
        );
        s.validate().unwrap();
        let s = order_lambda(&[cx(1.0, 5.0), cx(1.0, -5.0)], 0.5);
        assert_eq!((s.m1(), s.m2()), (0, 2));
    }

    #[test]
    fn tie_goes_plus() {
        let s = order_lambda(&[cx(0.5, 0.0)], 0.5);
        assert_eq!(s.m2(), 1);
    }

    #[test]
    fn permutation_invariant() {
        let a = [cx(3.0, 1.0), cx(-1.0, 0.0), cx(0.2, 2.0), cx(3.0, -1.0)];
        let mut b = a;
        b.reverse();
        assert_eq!(order_lambda(&a, 0.5), order_lambda(&b, 0.5));
    }

    #[test]
    fn rejects_misplaced() {
        let s = LambdaSpec {
            beta: 1.0,
            minus: vec![cx(2.0, 0.0)],
            plus: vec![],
        };
        assert!(s.validate().is_err());
    }
}
