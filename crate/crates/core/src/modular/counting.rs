//! Integer points of the upper unipotent group of SL(n, Z), n = 2, 3, in a box scaled by
//! e^{lambda(H)} per positive root.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Upper limit on e^{2 rho(H)}.
pub const MAX_SCALED_VOLUME: f64 = 1e9;

/// Relative slack on box radii, so that e^{ln 10} still admits 10.
const RADIUS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeCount {
    pub n: usize,
    pub h: Vec<f64>,
    pub entry_count: u64,
    pub exp_count: u64,
    pub e2rho: f64,
    pub entry_ratio: f64,
    pub exp_ratio: f64,
}

/// e^{h_i - h_j} with the slack applied.
pub fn root_radius(h: &[f64], i: usize, j: usize) -> f64 {
    (h[i] - h[j]).exp() * (1.0 + RADIUS_SLACK)
}

/// Number of integers m with |m - c| <= r.
pub fn integers_within(c: f64, r: f64) -> u64 {
    let (lo, hi) = ((c - r).ceil(), (c + r).floor());
    if hi < lo {
        0
    } else {
        (hi - lo) as u64 + 1
    }
}

pub fn unipotent_lattice_count(n: usize, h: &[f64]) -> Result<LatticeCount> {
    if n != 2 && n != 3 {
        return Err(Error::Argument(format!(
            "lattice counting supports n = 2, 3, got {n}"
        )));
    }
    if h.len() != n || h.iter().any(|x| !x.is_finite()) {
        return Err(Error::Argument(format!(
            "H must have {n} finite diagonal entries"
        )));
    }
    let scale = 1.0 + h.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if h.iter().sum::<f64>().abs() > 1e-9 * scale {
        return Err(Error::Argument("H is not traceless".into()));
    }
    if h.windows(2).any(|w| w[0] < w[1] - 1e-12 * scale) {
        return Err(Error::Argument(
            "H is not in the closed positive chamber".into(),
        ));
    }
    let two_rho: f64 = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| h[i] - h[j])
        .sum();
    let e2rho = two_rho.exp();
    if e2rho > MAX_SCALED_VOLUME {
        return Err(Error::Resource(format!(
            "e^(2 rho(H)) = {e2rho:e} exceeds {MAX_SCALED_VOLUME:e}"
        )));
    }
    let (entry_count, exp_count) = if n == 2 {
        let c = integers_within(0.0, root_radius(h, 0, 1));
        (c, c)
    } else {
        let (r12, r13, r23) = (
            root_radius(h, 0, 1),
            root_radius(h, 0, 2),
            root_radius(h, 1, 2),
        );
        let entry =
            integers_within(0.0, r12) * integers_within(0.0, r13) * integers_within(0.0, r23);
        // exp(x12 E12 + x13 E13 + x23 E23) has (1,3) entry x13 + x12 x23 / 2.
        let (m12, m23) = (r12.floor() as i64, r23.floor() as i64);
        let exp: u64 = (-m12..=m12)
            .into_par_iter()
            .map(|a| {
                (-m23..=m23)
                    .map(|b| integers_within(a as f64 * b as f64 / 2.0, r13))
                    .sum::<u64>()
            })
            .sum();
        (entry, exp)
    };
    Ok(LatticeCount {
        n,
        h: h.to_vec(),
        entry_count,
        exp_count,
        e2rho,
        entry_ratio: entry_count as f64 / e2rho,
        exp_ratio: exp_count as f64 / e2rho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_examples() {
        let c = unipotent_lattice_count(2, &[0.0, 0.0]).unwrap();
        assert_eq!((c.entry_count, c.exp_count, c.entry_ratio), (3, 3, 3.0));
        let h = 10f64.ln() / 2.0;
        let c = unipotent_lattice_count(2, &[h, -h]).unwrap();
        assert_eq!(c.entry_count, 21);
        assert!((c.entry_ratio - 2.1).abs() < 1e-12);
    }

    #[test]
    fn sl3_entry_example() {
        let c = unipotent_lattice_count(3, &[1.0, 0.0, -1.0]).unwrap();
        assert_eq!(c.entry_count, 375);
        assert!((c.entry_ratio - 375.0 / 4f64.exp()).abs() < 1e-12);
        assert!((c.entry_ratio - 6.87).abs() < 0.01);
    }

    #[test]
    fn argument_and_resource_errors() {
        assert!(matches!(
            unipotent_lattice_count(4, &[0.0; 4]),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            unipotent_lattice_count(3, &[-1.0, 0.0, 1.0]),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            unipotent_lattice_count(3, &[1.0, 0.0, 0.0]),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            unipotent_lattice_count(3, &[6.0, 0.0, -6.0]),
            Err(Error::Resource(_))
        ));
    }
}
