//! Center of U(g) by exact nullspace, and the Harish-Chandra map.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::hpoly::{is_weyl_invariant, HPoly};
use super::pbw::{Monomial, PbwAlgebra, PbwElement};
use crate::error::{Error, Result};
use crate::lie::BasisKind;
use crate::linalg::{self, SparseRow};
use crate::rational::Q;

/// Keeps the monomials with no n+ and no n- factors.
pub fn hc_project(alg: &PbwAlgebra, a: &PbwElement) -> PbwElement {
    let mut out = PbwElement::zero();
    for (m, c) in &a.terms {
        if m.iter()
            .enumerate()
            .all(|(p, &e)| e == 0 || alg.is_cartan_pos(p))
        {
            out.add_term(m.clone(), c.clone());
        }
    }
    out
}

/// sigma: h -> h + delta(h) 1, extended to U(h). `delta[k]` is delta(h_k).
pub fn delta_shift(p: &HPoly, delta: &[Q]) -> HPoly {
    let images: Vec<HPoly> = (0..p.rank)
        .map(|k| HPoly::var(p.rank, k).add(&HPoly::constant(p.rank, delta[k].clone())))
        .collect();
    p.substitute(&images)
}

/// rho(h_k) for k = 1..n-1 (equal to 1 for every simple coroot of sl(n)).
pub fn rho_on_cartan(alg: &PbwAlgebra) -> Vec<Q> {
    let n = alg.lie.n;
    // rho(diag(d)) = sum_i ((n+1)/2 - i) d_i, so rho(h_k) = 1.
    let rho: Vec<Q> = (1..=n)
        .map(|i| Q::new(((n + 1) as i64 - 2 * i as i64).into(), 2.into()))
        .collect();
    (1..n).map(|k| &rho[k - 1] - &rho[k]).collect()
}

/// Harish-Chandra map gamma = sigma o Proj_h.
pub fn harish_chandra(alg: &PbwAlgebra, z: &PbwElement) -> Result<HPoly> {
    let p = alg.to_hpoly(&hc_project(alg, z))?;
    Ok(delta_shift(&p, &rho_on_cartan(alg)))
}

#[derive(Debug, Clone)]
pub struct CenterBasis {
    pub m: usize,
    pub elements: Vec<PbwElement>,
    pub gamma: Vec<HPoly>,
}

/// Root weight (integer vector on diagonal entries) of the generator at each PBW position.
fn position_weights(alg: &PbwAlgebra) -> Vec<Vec<i64>> {
    let n = alg.lie.n;
    (0..alg.dim())
        .map(|p| {
            let mut w = vec![0i64; n];
            match alg.lie.basis[alg.order[p]] {
                BasisKind::Positive { i, j } => {
                    w[i - 1] += 1;
                    w[j - 1] -= 1;
                }
                BasisKind::Negative { i, j } => {
                    w[i - 1] -= 1;
                    w[j - 1] += 1;
                }
                BasisKind::Cartan { .. } => {}
            }
            w
        })
        .collect()
}

/// All monomials of degree <= m and weight zero, in increasing degree.
pub fn weight_zero_monomials(alg: &PbwAlgebra, m: usize) -> Vec<Monomial> {
    let weights = position_weights(alg);
    let d = alg.dim();
    let n = alg.lie.n;
    let mut out = Vec::new();
    let mut cur = vec![0u8; d];
    fn rec(
        p: usize,
        left: usize,
        cur: &mut Vec<u8>,
        wsum: &mut Vec<i64>,
        weights: &[Vec<i64>],
        out: &mut Vec<Monomial>,
    ) {
        if p == cur.len() {
            if wsum.iter().all(|&x| x == 0) {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=left {
            cur[p] = e as u8;
            for (s, w) in wsum.iter_mut().zip(&weights[p]) {
                *s += e as i64 * w;
            }
            rec(p + 1, left - e, cur, wsum, weights, out);
            for (s, w) in wsum.iter_mut().zip(&weights[p]) {
                *s -= e as i64 * w;
            }
        }
        cur[p] = 0;
    }
    let mut wsum = vec![0i64; n];
    rec(0, m, &mut cur, &mut wsum, &weights, &mut out);
    out.sort_by_key(|mono| (super::pbw::mono_degree(mono), mono.clone()));
    out
}

/// Lie indices of the Chevalley generators e_i = E_{i,i+1}, f_i = F_{i,i+1}.
pub fn chevalley_generators(alg: &PbwAlgebra) -> Vec<usize> {
    let n = alg.lie.n;
    let mut g = Vec::new();
    for i in 1..n {
        g.push(
            alg.lie
                .index_of(BasisKind::Positive { i, j: i + 1 })
                .unwrap(),
        );
        g.push(
            alg.lie
                .index_of(BasisKind::Negative { i, j: i + 1 })
                .unwrap(),
        );
    }
    g
}

/// Spanning set of Z(g) intersected with U^m(g).
pub fn center_basis(alg: &PbwAlgebra, m: usize) -> Result<CenterBasis> {
    if m > alg.limits.max_degree {
        return Err(Error::Resource(format!(
            "center degree {m} above bound {}",
            alg.limits.max_degree
        )));
    }
    let cols = weight_zero_monomials(alg, m);
    let gens = chevalley_generators(alg);
    // Weight-zero elements already commute with h; commuting with e_i, f_i suffices.
    let mut rows: BTreeMap<(usize, Monomial), SparseRow> = BTreeMap::new();
    for (gi, &g) in gens.iter().enumerate() {
        let x = alg.generator(g);
        for (ci, mono) in cols.iter().enumerate() {
            let mm = PbwElement::from_term(mono.clone(), Q::from_integer(1.into()));
            let c = alg.mul(&x, &mm)?.sub(&alg.mul(&mm, &x)?);
            for (res, v) in c.terms {
                rows.entry((gi, res)).or_default().insert(ci, v);
            }
        }
    }
    let ns = linalg::nullspace(
        rows.into_values().collect(),
        cols.len(),
        alg.limits.max_entries,
    )?;
    let mut elements = Vec::new();
    for v in ns {
        let mut z = PbwElement::zero();
        for (ci, c) in v.into_iter().enumerate() {
            if !c.is_zero() {
                z.add_term(cols[ci].clone(), c);
            }
        }
        elements.push(z);
    }
    elements.sort_by_key(|z| (z.degree(), z.terms.len()));
    let gamma = elements
        .iter()
        .map(|z| harish_chandra(alg, z))
        .collect::<Result<Vec<_>>>()?;
    let cb = CenterBasis { m, elements, gamma };
    cb.check(alg)?;
    Ok(cb)
}

impl CenterBasis {
    /// Centrality against every basis vector of g and Weyl invariance of gamma-images.
    pub fn check(&self, alg: &PbwAlgebra) -> Result<()> {
        for (i, z) in self.elements.iter().enumerate() {
            for a in 0..alg.dim() {
                let x = alg.generator(a);
                if !alg.commutator(&x, z)?.is_zero() {
                    return Err(Error::Invariant(format!(
                        "center element {i} fails to commute with generator {a}"
                    )));
                }
            }
        }
        for (i, g) in self.gamma.iter().enumerate() {
            if !is_weyl_invariant(g, alg.lie.n) {
                return Err(Error::Invariant(format!(
                    "gamma image {i} is not Weyl invariant"
                )));
            }
        }
        Ok(())
    }

    /// Solves gamma(Z) = target within the span; `None` if the target is not reached.
    pub fn gamma_inverse(&self, target: &HPoly) -> Option<PbwElement> {
        let mut keys: BTreeSet<Vec<u32>> = target.terms.keys().cloned().collect();
        for g in &self.gamma {
            keys.extend(g.terms.keys().cloned());
        }
        let keys: Vec<Vec<u32>> = keys.into_iter().collect();
        let a: Vec<Vec<Q>> = keys
            .iter()
            .map(|k| {
                self.gamma
                    .iter()
                    .map(|g| g.terms.get(k).cloned().unwrap_or_else(Q::zero))
                    .collect()
            })
            .collect();
        let b: Vec<Q> = keys
            .iter()
            .map(|k| target.terms.get(k).cloned().unwrap_or_else(Q::zero))
            .collect();
        if self.gamma.is_empty() {
            return if target.is_zero() {
                Some(PbwElement::zero())
            } else {
                None
            };
        }
        let x = linalg::solve(&a, &b)?;
        let mut z = PbwElement::zero();
        for (c, e) in x.iter().zip(&self.elements) {
            z.add_scaled(e, c);
        }
        Some(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enveloping::pbw::Limits;
    use crate::lie::build_split_sl;
    use crate::rational::{q, qf};

    fn sl(n: usize) -> PbwAlgebra {
        PbwAlgebra::new(build_split_sl(n).unwrap(), Limits::default())
    }

    fn casimir_sl2(a: &PbwAlgebra) -> PbwElement {
        let (e, h, f) = (a.generator(0), a.generator(1), a.generator(2));
        let h2 = a.mul(&h, &h).unwrap().scale(&qf(1, 2));
        h2.add(&a.mul(&e, &f).unwrap()).add(&a.mul(&f, &e).unwrap())
    }

    #[test]
    fn casimir_projection() {
        let a = sl2_alg();
        let c = casimir_sl2(&a);
        let h = a.generator(1);
        let expect = a.mul(&h, &h).unwrap().scale(&qf(1, 2)).sub(&h);
        assert_eq!(hc_project(&a, &c), expect);
        let h3 = a.pow(&h, 3).unwrap();
        assert_eq!(hc_project(&a, &h3), h3);
        assert!(hc_project(&a, &a.mul(&a.generator(0), &a.generator(2)).unwrap()).is_zero());
        // gamma(C) = (h^2 - 1)/2
        let g = harish_chandra(&a, &c).unwrap();
        let hv = HPoly::var(1, 0);
        assert_eq!(g, hv.mul(&hv).sub(&HPoly::one(1)).scale(&qf(1, 2)));
    }

    fn sl2_alg() -> PbwAlgebra {
        sl(2)
    }

    #[test]
    fn shift_examples() {
        let h = HPoly::var(1, 0);
        assert_eq!(delta_shift(&h, &[q(1)]), h.add(&HPoly::one(1)));
        assert_eq!(delta_shift(&HPoly::one(1), &[q(1)]), HPoly::one(1));
        let p = h
            .pow(3)
            .add(&h.scale(&q(-2)))
            .add(&HPoly::constant(1, qf(3, 7)));
        assert_eq!(delta_shift(&delta_shift(&p, &[qf(5, 3)]), &[qf(-5, 3)]), p);
    }

    #[test]
    fn sl2_center() {
        let a = sl2_alg();
        let cb1 = center_basis(&a, 1).unwrap();
        assert_eq!(cb1.elements.len(), 1);
        let cb2 = center_basis(&a, 2).unwrap();
        assert_eq!(cb2.elements.len(), 2);
        let c = casimir_sl2(&a);
        let gc = harish_chandra(&a, &c).unwrap();
        assert_eq!(cb2.gamma_inverse(&gc).unwrap(), c);
    }

    #[test]
    fn sl3_center_degree3() {
        let a = sl(3);
        let cb = center_basis(&a, 3).unwrap();
        // 1, C2, C3
        assert_eq!(cb.elements.len(), 3);
        let degs: Vec<usize> = cb.elements.iter().map(|z| z.degree()).collect();
        assert_eq!(degs, vec![0, 2, 3]);
    }
}
