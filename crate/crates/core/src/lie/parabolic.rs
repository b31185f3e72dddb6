//! Standard parabolic subalgebras P_F = N_F A_F M_F.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::algebra::LieAlgebraData;
use super::roots::RestrictedRootSystem;
use crate::error::{Error, Result};
use crate::rational::{self, q, Q};

#[derive(Debug, Clone, PartialEq)]
pub struct ParabolicData {
    /// Simple-root indices (0-based) in F.
    pub subset_f: Vec<usize>,
    /// Basis of n_F: algebra basis indices, in algebra order.
    pub n_basis: Vec<usize>,
    /// Root index of each n_F basis vector.
    pub n_roots: Vec<usize>,
    /// Basis of a_F as diagonal entries (the coweights H^j, j not in F).
    pub a_basis: Vec<Vec<Q>>,
    /// Basis of m_F as dense algebra coordinates.
    pub m_basis: Vec<Vec<Q>>,
    /// rho_F evaluated on a_basis.
    pub rho: Vec<Q>,
    /// rho_F as a functional on diagonal entries (half sum of the n_F roots).
    pub rho_functional: Vec<Q>,
    /// beta_j evaluated on a_basis, one row per n_F basis vector.
    pub weights: Vec<Vec<Q>>,
}

fn in_span_of_f(rs: &RestrictedRootSystem, pos_idx: usize, f: &[usize]) -> bool {
    rs.simple_expansion[pos_idx]
        .iter()
        .enumerate()
        .all(|(j, c)| c.is_zero() || f.contains(&j))
}

pub fn parabolic_from_subset(
    alg: &LieAlgebraData,
    rs: &RestrictedRootSystem,
    f: &[usize],
) -> Result<ParabolicData> {
    let r = rs.rank();
    if let Some(bad) = f.iter().find(|&&j| j >= r) {
        return Err(Error::Argument(format!(
            "simple-root index {bad} out of range (rank {r})"
        )));
    }
    let mut subset_f: Vec<usize> = f.to_vec();
    subset_f.sort_unstable();
    subset_f.dedup();

    let mut n_pairs = Vec::new();
    let mut m_basis = Vec::new();
    for (pi, &p) in rs.positive_roots.iter().enumerate() {
        let root = &rs.roots[p];
        if in_span_of_f(rs, pi, &subset_f) {
            let neg = rs.roots.iter().position(|x| {
                x.coeffs
                    .iter()
                    .zip(&root.coeffs)
                    .all(|(a, b)| a == &-b.clone())
            });
            for &x in &root.space {
                m_basis.push(alg.unit(x));
            }
            if let Some(ni) = neg {
                for &x in &rs.roots[ni].space {
                    m_basis.push(alg.unit(x));
                }
            }
        } else {
            for &x in &root.space {
                n_pairs.push((x, p));
            }
        }
    }
    n_pairs.sort_unstable();
    for &j in &subset_f {
        // Coroot h_j is Killing-orthogonal to a_F.
        let mut v = vec![Q::zero(); alg.dim_g];
        v[rs.cartan_basis[j]] = Q::one();
        m_basis.push(v);
    }
    let a_basis: Vec<Vec<Q>> = (0..r)
        .filter(|j| !subset_f.contains(j))
        .map(|j| rs.coweights[j].clone())
        .collect();

    let mut rho_functional = vec![Q::zero(); rs.n];
    for &(_, p) in &n_pairs {
        for (o, c) in rho_functional.iter_mut().zip(&rs.roots[p].coeffs) {
            *o += c;
        }
    }
    for v in rho_functional.iter_mut() {
        *v /= q(2);
    }
    let eval = |coeffs: &[Q], h: &[Q]| -> Q { coeffs.iter().zip(h).map(|(a, b)| a * b).sum() };
    let rho = a_basis.iter().map(|h| eval(&rho_functional, h)).collect();
    let weights = n_pairs
        .iter()
        .map(|&(_, p)| a_basis.iter().map(|h| rs.roots[p].eval(h)).collect())
        .collect();
    let out = ParabolicData {
        subset_f,
        n_basis: n_pairs.iter().map(|p| p.0).collect(),
        n_roots: n_pairs.iter().map(|p| p.1).collect(),
        a_basis,
        m_basis,
        rho,
        rho_functional,
        weights,
    };
    out.check_eigen(alg)?;
    Ok(out)
}

impl ParabolicData {
    /// [H, X_j] = beta_j(H) X_j for every a_F basis vector H, exactly.
    pub fn check_eigen(&self, alg: &LieAlgebraData) -> Result<()> {
        for (ai, h) in self.a_basis.iter().enumerate() {
            let mut hv = vec![Q::zero(); alg.dim_g];
            for (k, c) in alg.cartan_coords(h).into_iter().enumerate() {
                hv[alg.cartan_range().start + k] = c;
            }
            for (j, &x) in self.n_basis.iter().enumerate() {
                let lhs = alg.bracket_vec(&hv, &alg.unit(x));
                let mut rhs = alg.unit(x);
                for v in rhs.iter_mut() {
                    *v *= &self.weights[j][ai];
                }
                if lhs != rhs {
                    return Err(Error::Invariant(format!(
                        "ad eigenvalue mismatch for X_{j} and a-basis {ai}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim_a(&self) -> usize {
        self.a_basis.len()
    }

    pub fn dim_n(&self) -> usize {
        self.n_basis.len()
    }

    /// rho_F evaluated on an arbitrary diagonal element.
    pub fn rho_at(&self, h: &[Q]) -> Q {
        self.rho_functional.iter().zip(h).map(|(a, b)| a * b).sum()
    }

    pub fn to_json(&self, alg: &LieAlgebraData) -> ParabolicJson {
        let strs = |v: &[Q]| v.iter().map(rational::to_str).collect::<Vec<_>>();
        ParabolicJson {
            n: alg.n,
            subset_f: self.subset_f.clone(),
            n_basis: self.n_basis.iter().map(|&x| alg.basis[x].label()).collect(),
            a_basis: self.a_basis.iter().map(|h| strs(h)).collect(),
            m_basis: self.m_basis.iter().map(|h| strs(h)).collect(),
            rho: strs(&self.rho),
            weights: self.weights.iter().map(|w| strs(w)).collect(),
        }
    }
}

/// Checks the nesting property for F1 subset of F2.
pub fn check_nesting(p1: &ParabolicData, p2: &ParabolicData) -> Result<()> {
    if !p1.subset_f.iter().all(|j| p2.subset_f.contains(j)) {
        return Err(Error::Argument(
            "first subset is not contained in the second".into(),
        ));
    }
    for h in &p2.a_basis {
        // a_{F2} inside a_{F1}: every alpha in F1 vanishes on h, and rho agrees.
        if p1.rho_at(h) != p2.rho_at(h) {
            return Err(Error::Invariant("rho restriction mismatch".into()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParabolicJson {
    pub n: usize,
    pub subset_f: Vec<usize>,
    pub n_basis: Vec<String>,
    pub a_basis: Vec<Vec<String>>,
    pub m_basis: Vec<Vec<String>>,
    pub rho: Vec<String>,
    pub weights: Vec<Vec<String>>,
}

impl ParabolicJson {
    /// Rebuilds the parabolic from `n` and `subset_f`, then checks the stored data matches.
    pub fn validate(&self) -> Result<ParabolicData> {
        let alg = super::algebra::build_split_sl(self.n)?;
        let rs = super::roots::restricted_root_system(&alg)?;
        let p = parabolic_from_subset(&alg, &rs, &self.subset_f)?;
        if &p.to_json(&alg) != self {
            return Err(Error::Invariant(
                "serialized parabolic does not match its subset".into(),
            ));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::algebra::build_split_sl;
    use crate::lie::roots::restricted_root_system;

    fn setup(n: usize) -> (LieAlgebraData, RestrictedRootSystem) {
        let g = build_split_sl(n).unwrap();
        let rs = restricted_root_system(&g).unwrap();
        (g, rs)
    }

    #[test]
    fn sl2_minimal() {
        let (g, rs) = setup(2);
        let p = parabolic_from_subset(&g, &rs, &[]).unwrap();
        assert_eq!(p.n_basis, vec![0]);
        assert_eq!(p.rho_at(&[q(1), q(-1)]), q(1));
    }

    #[test]
    fn sl3_cases() {
        let (g, rs) = setup(3);
        let p = parabolic_from_subset(&g, &rs, &[]).unwrap();
        assert_eq!(p.rho_functional, vec![q(1), q(0), q(-1)]);
        let p2 = parabolic_from_subset(&g, &rs, &[1]).unwrap();
        assert_eq!((p2.dim_a(), p2.dim_n()), (1, 2));
        let all = parabolic_from_subset(&g, &rs, &[0, 1]).unwrap();
        assert_eq!((all.dim_a(), all.dim_n()), (0, 0));
        assert_eq!(all.m_basis.len(), 8);
        check_nesting(&p, &p2).unwrap();
        check_nesting(&p2, &all).unwrap();
        assert!(parabolic_from_subset(&g, &rs, &[2]).is_err());
    }

    #[test]
    fn json_validate() {
        let (g, rs) = setup(4);
        let p = parabolic_from_subset(&g, &rs, &[0, 2]).unwrap();
        let j = p.to_json(&g);
        let s = serde_json::to_string(&j).unwrap();
        let back: ParabolicJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.validate().unwrap(), p);
    }
}
