//! Iterated kernels: repeated substitution of the one-step representation over multi-indices
//! of generators with weights alpha_j, following a schedule of thresholds beta.

use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exppoly::ExpPoly;
use super::kernels::{burger1_kernels, Burger1Kernels, PiecewiseKernel2};
use super::lambda::order_lambda;
use crate::error::{Error, Result};
use crate::rational::{self, q, Q};

/// Cap on d^{k_0}.
pub const MAX_MULTI_INDICES: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct BurgerSchedule {
    pub alpha: Q,
    pub eta: Q,
    pub k0: usize,
    /// (alpha(k0+1) - 2 eta) / (4(k0 - 1)) for k0 >= 2.
    pub eps_inner: Option<Q>,
    /// delta_l = l(alpha/2 - eps_inner), l = 0..k0-1.
    pub deltas: Vec<Q>,
    /// beta at each substitution level, innermost first; the last one is eta.
    pub betas: Vec<Q>,
    /// Decay rate of psi at each level.
    pub gammas: Vec<Q>,
}

fn k0_of(alpha: &Q, eta: &Q) -> Result<usize> {
    if alpha >= &(q(2) * eta) {
        Ok(1)
    } else if alpha > eta {
        Ok(2)
    } else {
        let r = (q(2) * eta / alpha).floor().to_integer();
        r.to_usize()
            .filter(|&k| k <= 64)
            .ok_or_else(|| Error::Resource(format!("k0 = {r} is too large")))
    }
}

impl BurgerSchedule {
    pub fn new(alpha: Q, eta: Q) -> Result<Self> {
        if !alpha.is_positive() || !eta.is_positive() {
            return Err(Error::Argument("alpha and eta must be positive".into()));
        }
        let k0 = k0_of(&alpha, &eta)?;
        let half = &alpha / q(2);
        let eps_inner =
            (k0 >= 2).then(|| (&alpha * q(k0 as i64 + 1) - q(2) * &eta) / q(4 * (k0 as i64 - 1)));
        let step = eps_inner
            .as_ref()
            .map(|e| &half - e)
            .unwrap_or_else(Q::zero);
        let deltas: Vec<Q> = (0..k0).map(|l| &step * q(l as i64)).collect();
        let (betas, gammas) = if k0 == 1 {
            (vec![eta.clone()], vec![alpha.clone()])
        } else if alpha > eta {
            let b1 = &eta - &alpha / q(4);
            (vec![b1, eta.clone()], vec![alpha.clone(), &eta + &half])
        } else {
            let mut betas: Vec<Q> = (0..k0 - 1).map(|l| &deltas[l] + &half).collect();
            betas.push(eta.clone());
            let gammas = deltas.iter().map(|d| d + &alpha).collect();
            (betas, gammas)
        };
        Ok(BurgerSchedule {
            alpha,
            eta,
            k0,
            eps_inner,
            deltas,
            betas,
            gammas,
        })
    }

    /// The uniform-in-H schedule (alpha, eta) = (eps, 1).
    pub fn uniform(eps: Q) -> Result<Self> {
        Self::new(eps, q(1))
    }

    pub fn from_f64(alpha: f64, eta: f64) -> Result<Self> {
        Self::new(rational::from_f64(alpha)?, rational::from_f64(eta)?)
    }

    /// delta_{k0-1} + alpha > eta, and delta_l + alpha/2 < eta for all l when alpha <= eta.
    pub fn identities_hold(&self) -> bool {
        let half = &self.alpha / q(2);
        let top = self.deltas.last().cloned().unwrap_or_else(Q::zero);
        if self.k0 >= 2 && &top + &self.alpha <= self.eta {
            return false;
        }
        if self.alpha <= self.eta && self.deltas.iter().any(|d| d + &half >= self.eta) {
            return false;
        }
        self.betas
            .iter()
            .zip(&self.gammas)
            .all(|(b, g)| b.is_positive() && b < g)
    }

    pub fn validate(&self) -> Result<()> {
        let fresh = Self::new(self.alpha.clone(), self.eta.clone())?;
        if &fresh != self {
            return Err(Error::Argument(
                "schedule fields do not match (alpha, eta)".into(),
            ));
        }
        if !self.identities_hold() {
            return Err(Error::Invariant("schedule identities fail".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> ScheduleJson {
        let s = rational::to_str;
        ScheduleJson {
            alpha: s(&self.alpha),
            eta: s(&self.eta),
            k0: self.k0,
            eps_inner: self.eps_inner.as_ref().map(s),
            deltas: self.deltas.iter().map(s).collect(),
            betas: self.betas.iter().map(s).collect(),
            gammas: self.gammas.iter().map(s).collect(),
        }
    }

    pub fn from_json(j: &ScheduleJson) -> Result<Self> {
        let p = rational::parse;
        let sched = BurgerSchedule {
            alpha: p(&j.alpha)?,
            eta: p(&j.eta)?,
            k0: j.k0,
            eps_inner: j.eps_inner.as_deref().map(p).transpose()?,
            deltas: j.deltas.iter().map(|x| p(x)).collect::<Result<_>>()?,
            betas: j.betas.iter().map(|x| p(x)).collect::<Result<_>>()?,
            gammas: j.gammas.iter().map(|x| p(x)).collect::<Result<_>>()?,
        };
        sched.validate()?;
        Ok(sched)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleJson {
    pub alpha: String,
    pub eta: String,
    pub k0: usize,
    pub eps_inner: Option<String>,
    pub deltas: Vec<String>,
    pub betas: Vec<String>,
    pub gammas: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CKernel {
    /// Generator indices j_1..j_l of X_{j_1} ... X_{j_l}.
    pub index: Vec<usize>,
    pub kernel: PiecewiseKernel2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DKernels {
    pub index: Vec<usize>,
    /// D_{j,i} for i = 0..W.
    pub kernels: Vec<ExpPoly>,
}

/// C_k (|k| = k0) and D_{j,i} (|j| <= k0 - 1) of the iterated representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Burger2Kernels {
    pub schedule: ScheduleJson,
    pub lambdas: Vec<Complex64>,
    pub weights: Vec<f64>,
    pub c: Vec<CKernel>,
    pub d: Vec<DKernels>,
}

impl Burger2Kernels {
    pub fn w(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambda_inf(&self) -> f64 {
        self.lambdas.iter().map(|l| l.norm()).fold(0.0, f64::max)
    }
}

fn weight_key(weights: &[f64], index: &[usize]) -> Vec<u64> {
    index.iter().map(|&j| weights[j].to_bits()).collect()
}

/// -F(t, r) e^{alpha_j r}.
fn step_kernel(k: &Burger1Kernels, alpha_j: f64) -> PiecewiseKernel2 {
    k.f.scale(Complex64::new(-1.0, 0.0))
        .shift(Complex64::new(0.0, 0.0), Complex64::new(alpha_j, 0.0))
}

pub fn burger2_coefficients(
    lambdas: &[Complex64],
    weights: &[f64],
    schedule: &BurgerSchedule,
) -> Result<Burger2Kernels> {
    schedule
        .validate()
        .map_err(|e| Error::Argument(format!("inconsistent schedule: {e}")))?;
    if lambdas.is_empty() {
        return Err(Error::Argument("W must be positive".into()));
    }
    let alpha = rational::to_f64(&schedule.alpha);
    let d = weights.len();
    if d == 0 {
        return Err(Error::Argument("need at least one generator".into()));
    }
    if let Some(w) = weights
        .iter()
        .find(|&&w| !(w.is_finite() && w >= alpha * (1.0 - 1e-12)))
    {
        return Err(Error::Argument(format!(
            "generator weight {w} is below alpha = {alpha}"
        )));
    }
    let k0 = schedule.k0;
    let count = (0..k0)
        .try_fold(1usize, |acc, _| acc.checked_mul(d))
        .filter(|&c| c <= MAX_MULTI_INDICES);
    if count.is_none() {
        return Err(Error::Resource(format!(
            "{d}^{k0} multi-indices exceed the cap {MAX_MULTI_INDICES}"
        )));
    }

    let levels: Vec<Burger1Kernels> = schedule
        .betas
        .iter()
        .map(|b| burger1_kernels(&order_lambda(lambdas, rational::to_f64(b))))
        .collect::<Result<_>>()?;

    // level 1
    let mut a: Vec<(Vec<usize>, PiecewiseKernel2)> = (0..d)
        .map(|j| (vec![j], step_kernel(&levels[0], weights[j])))
        .collect();
    let mut b: Vec<(Vec<usize>, Vec<ExpPoly>)> = vec![(vec![], levels[0].fi.clone())];

    for lev in &levels[1..] {
        let steps: Vec<PiecewiseKernel2> = weights.iter().map(|&w| step_kernel(lev, w)).collect();
        let mut jobs: Vec<(Vec<usize>, usize, usize)> = Vec::with_capacity(a.len() * d);
        for (ai, (m, _)) in a.iter().enumerate() {
            for j in 0..d {
                let mut idx = m.clone();
                idx.push(j);
                jobs.push((idx, ai, j));
            }
        }
        // kernels depend on the index only through its weights
        let mut unique: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut reps: Vec<(usize, usize)> = Vec::new();
        let slot: Vec<usize> = jobs
            .iter()
            .map(|(idx, ai, j)| {
                *unique.entry(weight_key(weights, idx)).or_insert_with(|| {
                    reps.push((*ai, *j));
                    reps.len() - 1
                })
            })
            .collect();
        let built: Vec<PiecewiseKernel2> = reps
            .par_iter()
            .map(|&(ai, j)| steps[j].compose(&a[ai].1))
            .collect::<Result<_>>()?;
        let next_a = jobs
            .into_iter()
            .zip(slot)
            .map(|((idx, _, _), s)| (idx, built[s].clone()))
            .collect();

        let mut next_b = vec![(vec![], lev.fi.clone())];
        let applied: Vec<(Vec<usize>, Vec<ExpPoly>)> = b
            .par_iter()
            .flat_map_iter(|(l, fis)| (0..d).map(move |j| (l, fis, j)))
            .map(|(l, fis, j)| {
                let mut idx = l.clone();
                idx.push(j);
                let ks = fis
                    .iter()
                    .map(|p| steps[j].apply(p))
                    .collect::<Result<Vec<_>>>()?;
                Ok((idx, ks))
            })
            .collect::<Result<_>>()?;
        next_b.extend(applied);
        a = next_a;
        b = next_b;
    }
    b.sort_by(|x, y| x.0.len().cmp(&y.0.len()).then(x.0.cmp(&y.0)));
    Ok(Burger2Kernels {
        schedule: schedule.to_json(),
        lambdas: lambdas.to_vec(),
        weights: weights.to_vec(),
        c: a.into_iter()
            .map(|(index, kernel)| CKernel { index, kernel })
            .collect(),
        d: b.into_iter()
            .map(|(index, kernels)| DKernels { index, kernels })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn case_split() {
        assert_eq!(BurgerSchedule::new(q(1), qf(1, 2)).unwrap().k0, 1);
        assert_eq!(BurgerSchedule::new(qf(3, 4), qf(1, 2)).unwrap().k0, 2);
        let s = BurgerSchedule::new(qf(3, 10), qf(1, 2)).unwrap();
        assert_eq!(s.k0, 3);
        assert_eq!(s.eps_inner, Some(qf(1, 5) / q(8)));
        assert!(s.identities_hold());
        assert_eq!(s.betas.len(), 3);
        assert_eq!(BurgerSchedule::uniform(qf(1, 3)).unwrap().k0, 6);
    }

    #[test]
    fn tampered_schedule_rejected() {
        let mut s = BurgerSchedule::new(qf(3, 10), qf(1, 2)).unwrap();
        s.k0 = 2;
        assert!(s.validate().is_err());
        let w = [0.3];
        assert!(matches!(
            burger2_coefficients(&[Complex64::new(0.0, 0.0)], &w, &s),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn json_roundtrip() {
        let s = BurgerSchedule::new(qf(1, 5), q(1)).unwrap();
        assert_eq!(BurgerSchedule::from_json(&s.to_json()).unwrap(), s);
    }
}
