//! Restricted roots of split sl(n) with respect to the diagonal Cartan subalgebra.

use num_traits::{One, Signed, Zero};

use super::algebra::{dense, LieAlgebraData};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{q, Q};

/// A root as a functional on diagonal matrices: lambda(diag(d)) = sum_i coeffs[i] d_i.
#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    pub coeffs: Vec<Q>,
    pub multiplicity: usize,
    /// Indices (into the algebra basis) spanning the root space.
    pub space: Vec<usize>,
}

impl Root {
    pub fn eval(&self, diag: &[Q]) -> Q {
        self.coeffs.iter().zip(diag).map(|(c, d)| c * d).sum()
    }

    fn is_positive(&self) -> bool {
        self.coeffs
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_positive())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedRootSystem {
    pub n: usize,
    /// Basis of the Cartan subalgebra as indices into the algebra basis.
    pub cartan_basis: Vec<usize>,
    pub roots: Vec<Root>,
    pub positive_roots: Vec<usize>,
    /// Simple roots ordered alpha_1, ..., alpha_{n-1}.
    pub simple_roots: Vec<usize>,
    /// Dual basis H^j (alpha_i(H^j) = delta_ij) as diagonal entries.
    pub coweights: Vec<Vec<Q>>,
    /// Coefficients of each positive root in the simple roots.
    pub simple_expansion: Vec<Vec<Q>>,
}

impl RestrictedRootSystem {
    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn simple(&self, j: usize) -> &Root {
        &self.roots[self.simple_roots[j]]
    }

    pub fn simple_values(&self, diag: &[Q]) -> Vec<Q> {
        (0..self.rank())
            .map(|j| self.simple(j).eval(diag))
            .collect()
    }

    /// Sum_j x_j H^j.
    pub fn from_simple_values(&self, x: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.n];
        for (xj, hj) in x.iter().zip(&self.coweights) {
            for (o, h) in out.iter_mut().zip(hj) {
                *o += xj * h;
            }
        }
        out
    }

    /// Killing form on diagonal elements: B(X, Y) = 2n sum_i x_i y_i.
    pub fn killing(&self, x: &[Q], y: &[Q]) -> Q {
        let s: Q = x.iter().zip(y).map(|(a, b)| a * b).sum();
        q(2 * self.n as i64) * s
    }

    pub fn norm_sq(&self, x: &[Q]) -> Q {
        self.killing(x, x)
    }

    /// rho as a functional on diagonal entries (half sum of positive roots).
    pub fn rho(&self) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.n];
        for &p in &self.positive_roots {
            let r = &self.roots[p];
            for (o, c) in out.iter_mut().zip(&r.coeffs) {
                *o += q(r.multiplicity as i64) * c;
            }
        }
        out.iter().map(|v| v / q(2)).collect()
    }
}

/// Decomposes the algebra into joint ad-eigenspaces of the diagonal subalgebra.
pub fn restricted_root_system(alg: &LieAlgebraData) -> Result<RestrictedRootSystem> {
    let n = alg.n;
    let d = alg.dim_g;
    let cartan: Vec<usize> = alg.cartan_range().collect();
    // ad(h_k) must be diagonal in the basis; read off eigenvalues.
    let mut eig: Vec<Vec<Q>> = vec![Vec::new(); d];
    for &hk in &cartan {
        for x in 0..d {
            let col = dense(alg.bracket(hk, x), d);
            for (y, v) in col.iter().enumerate() {
                if y != x && !v.is_zero() {
                    return Err(Error::Invariant(
                        "ad(h) not diagonal in the root basis".into(),
                    ));
                }
            }
            eig[x].push(col[x].clone());
        }
    }
    // Convert eigenvalue vectors on h_1..h_{n-1} to zero-sum functionals on diagonal entries:
    // lambda_k - lambda_{k+1} = v_k, sum lambda = 0.
    let mut a = Vec::new();
    for k in 0..n - 1 {
        let mut row = vec![Q::zero(); n];
        row[k] = Q::one();
        row[k + 1] = -Q::one();
        a.push(row);
    }
    a.push(vec![Q::one(); n]);
    let mut roots: Vec<Root> = Vec::new();
    for x in 0..d {
        if eig[x].iter().all(|v| v.is_zero()) {
            continue;
        }
        let mut b = eig[x].clone();
        b.push(Q::zero());
        let coeffs =
            linalg::solve(&a, &b).ok_or_else(|| Error::Invariant("root solve failed".into()))?;
        match roots.iter_mut().find(|r| r.coeffs == coeffs) {
            Some(r) => {
                r.multiplicity += 1;
                r.space.push(x);
            }
            None => roots.push(Root {
                coeffs,
                multiplicity: 1,
                space: vec![x],
            }),
        }
    }
    let positive_roots: Vec<usize> = (0..roots.len())
        .filter(|&i| roots[i].is_positive())
        .collect();
    let is_sum = |i: usize| {
        positive_roots.iter().any(|&a| {
            positive_roots.iter().any(|&b| {
                roots[a]
                    .coeffs
                    .iter()
                    .zip(&roots[b].coeffs)
                    .map(|(x, y)| x + y)
                    .collect::<Vec<_>>()
                    == roots[i].coeffs
            })
        })
    };
    let mut simple_roots: Vec<usize> = positive_roots
        .iter()
        .copied()
        .filter(|&i| !is_sum(i))
        .collect();
    let lead = |i: &usize| {
        roots[*i]
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(0)
    };
    simple_roots.sort_by_key(lead);
    if simple_roots.len() != n - 1 {
        return Err(Error::Invariant("wrong number of simple roots".into()));
    }
    // Dual basis: alpha_i(H^j) = delta_ij and trace zero.
    let mut sa: Vec<Vec<Q>> = simple_roots
        .iter()
        .map(|&s| roots[s].coeffs.clone())
        .collect();
    sa.push(vec![Q::one(); n]);
    let mut coweights = Vec::new();
    for j in 0..n - 1 {
        let mut b = vec![Q::zero(); n];
        b[j] = Q::one();
        coweights.push(
            linalg::solve(&sa, &b)
                .ok_or_else(|| Error::Invariant("coweight solve failed".into()))?,
        );
    }
    // Expansion of positive roots in simple roots, via evaluation on the coweights.
    let simple_expansion: Vec<Vec<Q>> = positive_roots
        .iter()
        .map(|&p| coweights.iter().map(|h| roots[p].eval(h)).collect())
        .collect();
    for e in &simple_expansion {
        if e.iter().any(|c| c.is_negative() || !c.is_integer()) {
            return Err(Error::Invariant(
                "positive root not a nonnegative integer combination".into(),
            ));
        }
    }
    Ok(RestrictedRootSystem {
        n,
        cartan_basis: cartan,
        roots,
        positive_roots,
        simple_roots,
        coweights,
        simple_expansion,
    })
}
