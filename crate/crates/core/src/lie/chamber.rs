//! Weyl chambers, eps-regular components and the eps-decomposition.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::roots::RestrictedRootSystem;
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{self, q, Q};

/// An element of the diagonal Cartan subalgebra with cached data.
#[derive(Debug, Clone, PartialEq)]
pub struct ChamberVector {
    /// Diagonal entries (trace zero).
    pub h: Vec<Q>,
    /// alpha_j(H) for the simple roots.
    pub root_values: Vec<Q>,
    pub norm_killing_sq: Q,
    pub norm_killing: f64,
    /// max_j |alpha_j(H)|.
    pub norm_inf: Q,
}

impl ChamberVector {
    pub fn new(rs: &RestrictedRootSystem, h: Vec<Q>) -> Result<Self> {
        if h.len() != rs.n {
            return Err(Error::Argument(format!(
                "expected {} diagonal entries, got {}",
                rs.n,
                h.len()
            )));
        }
        let tr: Q = h.iter().sum();
        if !tr.is_zero() {
            return Err(Error::Argument("diagonal element is not traceless".into()));
        }
        let root_values = rs.simple_values(&h);
        let norm_killing_sq = rs.norm_sq(&h);
        let norm_killing = rational::to_f64(&norm_killing_sq).sqrt();
        let norm_inf = root_values
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Q::zero);
        Ok(ChamberVector {
            h,
            root_values,
            norm_killing_sq,
            norm_killing,
            norm_inf,
        })
    }

    /// H = sum_j x_j H^j.
    pub fn from_simple_values(rs: &RestrictedRootSystem, x: &[Q]) -> Result<Self> {
        if x.len() != rs.rank() {
            return Err(Error::Argument("wrong number of simple-root values".into()));
        }
        Self::new(rs, rs.from_simple_values(x))
    }

    pub fn in_closed_chamber(&self) -> bool {
        self.root_values.iter().all(|v| !v.is_negative())
    }

    pub fn in_open_chamber(&self) -> bool {
        self.root_values.iter().all(|v| v.is_positive())
    }

    /// alpha(H) > 0 implies alpha(H) >= eps ||H|| for every simple alpha.
    pub fn in_eps_chamber(&self, eps: &Q) -> bool {
        let bound = eps * eps * &self.norm_killing_sq;
        self.in_closed_chamber()
            && self
                .root_values
                .iter()
                .all(|v| v.is_zero() || &(v * v) >= &bound)
    }

    pub fn wall_set(&self) -> Vec<usize> {
        (0..self.root_values.len())
            .filter(|&j| self.root_values[j].is_zero())
            .collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.h.iter().map(rational::to_f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Outside,
    NotEpsRegular,
    /// H lies in the component a+_{eps,F} with this wall set F (0-based simple roots).
    Component(Vec<usize>),
}

/// Locates H in the decomposition of the closed eps-chamber into components.
pub fn chamber_classify(h: &ChamberVector, eps: &Q) -> Classification {
    if !h.in_closed_chamber() {
        Classification::Outside
    } else if h.in_eps_chamber(eps) {
        Classification::Component(h.wall_set())
    } else {
        Classification::NotEpsRegular
    }
}

/// Constants with D' ||Y||_inf <= ||Y|| <= D ||Y||_inf for the Killing norm.
#[derive(Debug, Clone, PartialEq)]
pub struct NormConstants {
    /// max of ||Y||^2 over ||Y||_inf = 1.
    pub d_sq: Q,
    /// min of ||Y||^2 over ||Y||_inf = 1.
    pub d_prime_sq: Q,
    /// Rational upper bound for D.
    pub d: Q,
    /// Rational lower bound for D'.
    pub d_prime: Q,
    /// c = D^2 / D' computed from the bounds (so it is an upper bound for the true c).
    pub c: Q,
    /// True when D, D' come from exact optimisation rather than sampling.
    pub exact: bool,
}

fn gram(rs: &RestrictedRootSystem) -> Vec<Vec<Q>> {
    let r = rs.rank();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| rs.killing(&rs.coweights[i], &rs.coweights[j]))
                .collect()
        })
        .collect()
}

fn quad(g: &[Vec<Q>], y: &[Q]) -> Q {
    let mut s = Q::zero();
    for i in 0..y.len() {
        for j in 0..y.len() {
            s += &g[i][j] * &y[i] * &y[j];
        }
    }
    s
}

fn exact_extrema(g: &[Vec<Q>]) -> (Q, Q) {
    let r = g.len();
    // Max of a convex quadratic on the cube is attained at a vertex.
    let mut max = Q::zero();
    for mask in 0..(1u32 << r) {
        let y: Vec<Q> = (0..r)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    -Q::one()
                } else {
                    Q::one()
                }
            })
            .collect();
        max = max.max(quad(g, &y));
    }
    // Min over the boundary: some coordinate is +-1 (by symmetry +1); enumerate active sets.
    let mut min: Option<Q> = None;
    for face in 0..r {
        let others: Vec<usize> = (0..r).filter(|&i| i != face).collect();
        let patterns = 3usize.pow(others.len() as u32);
        for pat in 0..patterns {
            let mut y = vec![Q::zero(); r];
            y[face] = Q::one();
            let mut free = Vec::new();
            let mut p = pat;
            for &o in &others {
                match p % 3 {
                    0 => free.push(o),
                    1 => y[o] = Q::one(),
                    _ => y[o] = -Q::one(),
                }
                p /= 3;
            }
            if !free.is_empty() {
                let a: Vec<Vec<Q>> = free
                    .iter()
                    .map(|&i| free.iter().map(|&j| g[i][j].clone()).collect())
                    .collect();
                let b: Vec<Q> = free
                    .iter()
                    .map(|&i| {
                        -(0..r)
                            .filter(|j| !free.contains(j))
                            .map(|j| &g[i][j] * &y[j])
                            .sum::<Q>()
                    })
                    .collect();
                let Some(sol) = linalg::solve(&a, &b) else {
                    continue;
                };
                if sol.iter().any(|v| v.abs() > Q::one()) {
                    continue;
                }
                for (&i, v) in free.iter().zip(sol) {
                    y[i] = v;
                }
            }
            let val = quad(g, &y);
            min = Some(match min {
                Some(m) if m <= val => m,
                _ => val,
            });
        }
    }
    (max, min.unwrap_or_else(Q::zero))
}

fn sampled_extrema(g: &[Vec<Q>]) -> (Q, Q) {
    let r = g.len();
    let gf: Vec<Vec<f64>> = g
        .iter()
        .map(|row| row.iter().map(rational::to_f64).collect())
        .collect();
    let m = 9usize;
    let grid: Vec<f64> = (0..m)
        .map(|i| -1.0 + 2.0 * i as f64 / (m - 1) as f64)
        .collect();
    let (mut max, mut min) = (0.0f64, f64::INFINITY);
    for face in 0..r {
        for sign in [1.0, -1.0] {
            let count = m.pow((r - 1) as u32);
            for idx in 0..count {
                let mut y = vec![0.0; r];
                y[face] = sign;
                let mut k = idx;
                for (i, yi) in y.iter_mut().enumerate() {
                    if i == face {
                        continue;
                    }
                    *yi = grid[k % m];
                    k /= m;
                }
                let v: f64 = (0..r)
                    .map(|i| (0..r).map(|j| gf[i][j] * y[i] * y[j]).sum::<f64>())
                    .sum();
                max = max.max(v);
                min = min.min(v);
            }
        }
    }
    // 1% margin on the norms, i.e. 1.01^2 on the squares.
    let margin = 1.01f64 * 1.01;
    (
        rational::from_f64(max * margin).unwrap(),
        rational::from_f64(min / margin).unwrap(),
    )
}

/// Norm-equivalence constants between the Killing norm and the sup-norm in the coweight basis.
pub fn norm_constants(rs: &RestrictedRootSystem) -> NormConstants {
    let g = gram(rs);
    let exact = rs.n <= 4;
    let (d_sq, d_prime_sq) = if exact {
        exact_extrema(&g)
    } else {
        sampled_extrema(&g)
    };
    let d = rational::sqrt_bounds(&d_sq).1;
    let d_prime = rational::sqrt_bounds(&d_prime_sq).0;
    let c = &d * &d / &d_prime;
    NormConstants {
        d_sq,
        d_prime_sq,
        d,
        d_prime,
        c,
        exact,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsDecomposition {
    pub h_eps: ChamberVector,
    pub j_eps: ChamberVector,
    pub c: Q,
    /// Coordinates moved into J (0-based simple-root indices); empty if H was already eps-regular.
    pub f: Vec<usize>,
    pub already_regular: bool,
    /// Whether eps < min(1, 1/(2c)), the range in which 1 - c eps >= 1/2.
    pub in_uniform_range: bool,
}

impl EpsDecomposition {
    /// Checks H = H_eps + J_eps, H_eps eps-regular, J_eps in the closed chamber and
    /// ||H_eps|| >= (1 - c eps)||H||, all in exact arithmetic.
    pub fn verify(&self, h: &ChamberVector, eps: &Q) -> Result<()> {
        let sum: Vec<Q> = self
            .h_eps
            .h
            .iter()
            .zip(&self.j_eps.h)
            .map(|(a, b)| a + b)
            .collect();
        if sum != h.h {
            return Err(Error::Invariant("H != H_eps + J_eps".into()));
        }
        if !self.h_eps.in_eps_chamber(eps) {
            return Err(Error::Invariant(
                "H_eps not in the closed eps-chamber".into(),
            ));
        }
        if !self.j_eps.in_closed_chamber() {
            return Err(Error::Invariant("J_eps not in the closed chamber".into()));
        }
        let factor = Q::one() - &self.c * eps;
        if factor.is_positive()
            && self.h_eps.norm_killing_sq < &factor * &factor * &h.norm_killing_sq
        {
            return Err(Error::Invariant("||H_eps|| < (1 - c eps)||H||".into()));
        }
        Ok(())
    }
}

/// Splits H into an eps-regular part and a remainder in the closed chamber.
pub fn epsilon_decompose(
    rs: &RestrictedRootSystem,
    nc: &NormConstants,
    h: &ChamberVector,
    eps: &Q,
) -> Result<EpsDecomposition> {
    if !eps.is_positive() {
        return Err(Error::Argument("eps must be positive".into()));
    }
    if !h.in_closed_chamber() {
        return Err(Error::Argument(
            "H is outside the closed positive chamber".into(),
        ));
    }
    let in_uniform_range = eps < &Q::one() && eps * q(2) * &nc.c < Q::one();
    let zero = ChamberVector::new(rs, vec![Q::zero(); rs.n])?;
    if h.in_eps_chamber(eps) {
        return Ok(EpsDecomposition {
            h_eps: h.clone(),
            j_eps: zero,
            c: nc.c.clone(),
            f: Vec::new(),
            already_regular: true,
            in_uniform_range,
        });
    }
    let delta = &nc.d * eps * &h.norm_inf;
    let x = &h.root_values;
    let f: Vec<usize> = (0..x.len()).filter(|&j| x[j] < delta).collect();
    let mut xh = x.clone();
    let mut xj = vec![Q::zero(); x.len()];
    for &j in &f {
        xj[j] = x[j].clone();
        xh[j] = Q::zero();
    }
    Ok(EpsDecomposition {
        h_eps: ChamberVector::from_simple_values(rs, &xh)?,
        j_eps: ChamberVector::from_simple_values(rs, &xj)?,
        c: nc.c.clone(),
        f,
        already_regular: false,
        in_uniform_range,
    })
}

/// Largest eps (as a rational lower bound) in the uniform range min(1, 1/(2c)).
pub fn uniform_eps_bound(nc: &NormConstants) -> Q {
    let b = Q::one() / (q(2) * &nc.c);
    if b > Q::one() {
        Q::one()
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::algebra::build_split_sl;
    use crate::lie::roots::restricted_root_system;
    use crate::rational::qf;

    fn rs(n: usize) -> RestrictedRootSystem {
        restricted_root_system(&build_split_sl(n).unwrap()).unwrap()
    }

    #[test]
    fn sl3_constants() {
        let r = rs(3);
        let nc = norm_constants(&r);
        assert_eq!(nc.d_sq, q(12));
        assert_eq!(nc.d_prime_sq, q(3));
        assert!(nc.exact);
        let c = rational::to_f64(&nc.c);
        assert!((c - 12.0 / 3f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn sampled_bounds_are_conservative() {
        let r = rs(4);
        let g = gram(&r);
        let (emax, emin) = exact_extrema(&g);
        let (smax, smin) = sampled_extrema(&g);
        assert!(smax >= emax);
        assert!(smin <= emin);
    }

    #[test]
    fn classify_examples() {
        let r2 = rs(2);
        let h = ChamberVector::new(&r2, vec![q(1), q(-1)]).unwrap();
        let eps = rational::from_f64(2.0 / h.norm_killing).unwrap() * qf(999, 1000);
        assert_eq!(
            chamber_classify(&h, &eps),
            Classification::Component(vec![])
        );

        let r3 = rs(3);
        let h = ChamberVector::from_simple_values(&r3, &[q(0), q(1)]).unwrap();
        assert_eq!(
            chamber_classify(&h, &qf(1, 10)),
            Classification::Component(vec![0])
        );
        // alpha_1(H) small relative to ||H||.
        let h = ChamberVector::from_simple_values(&r3, &[qf(1, 1000), q(1)]).unwrap();
        assert_eq!(
            chamber_classify(&h, &qf(1, 10)),
            Classification::NotEpsRegular
        );
        let h = ChamberVector::from_simple_values(&r3, &[q(-1), q(1)]).unwrap();
        assert_eq!(chamber_classify(&h, &qf(1, 10)), Classification::Outside);
    }

    #[test]
    fn decompose_examples() {
        let r3 = rs(3);
        let nc = norm_constants(&r3);
        let eps = qf(1, 10);
        let h = ChamberVector::from_simple_values(&r3, &[q(1), qf(1, 1000)]).unwrap();
        let d = epsilon_decompose(&r3, &nc, &h, &eps).unwrap();
        assert_eq!(d.f, vec![1]);
        assert_eq!(d.j_eps.root_values, vec![q(0), qf(1, 1000)]);
        assert!(!d.in_uniform_range);
        d.verify(&h, &eps).unwrap();

        let h = ChamberVector::from_simple_values(&r3, &[q(1), q(1)]).unwrap();
        let d = epsilon_decompose(&r3, &nc, &h, &eps).unwrap();
        assert!(d.already_regular && d.h_eps == h);

        let r2 = rs(2);
        let nc2 = norm_constants(&r2);
        let e = uniform_eps_bound(&nc2) * qf(1, 2);
        let h = ChamberVector::new(&r2, vec![q(3), q(-3)]).unwrap();
        let d = epsilon_decompose(&r2, &nc2, &h, &e).unwrap();
        assert!(d.j_eps.h.iter().all(|v| v.is_zero()));

        let bad = ChamberVector::from_simple_values(&r3, &[q(-1), q(1)]).unwrap();
        assert!(epsilon_decompose(&r3, &nc, &bad, &eps).is_err());
    }
}
