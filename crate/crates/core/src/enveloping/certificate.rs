//! Certificates of H^W + sum_i Z_i H^i in n U(g), with Z_i central.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::center::{center_basis, harish_chandra, hc_project, CenterBasis};
use super::hpoly::{is_weyl_invariant, HPoly};
use super::pbw::{PbwAlgebra, PbwElement};
use crate::error::{Error, Result};
use crate::lie::{chamber_classify, ChamberVector, Classification, RestrictedRootSystem};
use crate::rational::{self, Q};

/// Coefficients of p_H(x) = prod_w (x - (wH + rho(H))) over the S_n-orbit of H.
#[derive(Debug, Clone, PartialEq)]
pub struct HPolyData {
    pub w_h: usize,
    /// J_0, ..., J_{W_H - 1}.
    pub j: Vec<HPoly>,
    pub rho_h: Q,
    /// Distinct permutations of the diagonal of H.
    pub orbit: Vec<Vec<Q>>,
}

fn next_permutation(v: &mut [Q]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn cartan_coords(diag: &[Q]) -> Vec<Q> {
    let mut acc = Q::zero();
    diag[..diag.len() - 1]
        .iter()
        .map(|d| {
            acc += d;
            acc.clone()
        })
        .collect()
}

/// rho(H) for sl(n): sum_i ((n+1)/2 - i) d_i.
pub fn rho_of(diag: &[Q]) -> Q {
    let n = diag.len() as i64;
    diag.iter()
        .enumerate()
        .map(|(i, d)| Q::new((n + 1 - 2 * (i as i64 + 1)).into(), 2.into()) * d)
        .sum()
}

pub fn hpoly_coefficients(h: &ChamberVector) -> Result<HPolyData> {
    let n = h.h.len();
    let rank = n - 1;
    let mut perm = h.h.clone();
    perm.sort();
    let mut orbit = vec![perm.clone()];
    while next_permutation(&mut perm) {
        orbit.push(perm.clone());
    }
    let rho_h = rho_of(&h.h);
    // coefficient list of a polynomial in x with U(h) coefficients, lowest degree first
    let mut p = vec![HPoly::one(rank)];
    for wh in &orbit {
        let a = HPoly::linear(&cartan_coords(wh), rho_h.clone());
        let mut next = vec![HPoly::zero(rank); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(&a));
        }
        p = next;
    }
    let w_h = orbit.len();
    let j: Vec<HPoly> = p[..w_h].to_vec();
    for (i, ji) in j.iter().enumerate() {
        if !is_weyl_invariant(ji, n) {
            return Err(Error::Invariant(format!("J_{i} is not Weyl invariant")));
        }
    }
    let data = HPolyData {
        w_h,
        j,
        rho_h,
        orbit,
    };
    if !data.eval_at_sigma_h(h).is_zero() {
        return Err(Error::Invariant("p_H(sigma(H)) != 0".into()));
    }
    Ok(data)
}

impl HPolyData {
    /// p_H(sigma(H)) in U(h).
    pub fn eval_at_sigma_h(&self, h: &ChamberVector) -> HPoly {
        let sigma_h = HPoly::linear(&cartan_coords(&h.h), self.rho_h.clone());
        let rank = sigma_h.rank;
        let mut acc = sigma_h.pow(self.w_h as u32);
        let mut pw = HPoly::one(rank);
        for ji in &self.j {
            acc = acc.add(&ji.mul(&pw));
            pw = pw.mul(&sigma_h);
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LieIdentityCertificate {
    pub h: ChamberVector,
    pub w_h: usize,
    /// Z_0, ..., Z_{W_H}; the last entry is 1.
    pub z: Vec<PbwElement>,
    pub p: PbwElement,
    /// One entry per positive-root basis vector X_j (Lie basis indices 0..d), with P = sum X_j U_j.
    pub u: Vec<PbwElement>,
    pub center_degree: usize,
    pub verified: bool,
}

/// H as an element of U(g).
pub fn h_element(alg: &PbwAlgebra, h: &[Q]) -> PbwElement {
    let mut coords = vec![Q::zero(); alg.dim()];
    for (k, c) in cartan_coords(h).into_iter().enumerate() {
        coords[alg.lie.cartan_range().start + k] = c;
    }
    alg.from_lie(&coords)
}

/// PBW order with the n_F generators (positive roots not vanishing on H) first.
fn adapted_order(
    alg: &PbwAlgebra,
    rs: &RestrictedRootSystem,
    h: &ChamberVector,
) -> (Vec<usize>, Vec<bool>) {
    let d = alg.lie.num_positive();
    let vanish: Vec<bool> = (0..d)
        .map(|x| {
            let r = rs
                .roots
                .iter()
                .find(|r| r.space.contains(&x))
                .expect("positive root");
            r.eval(&h.h).is_zero()
        })
        .collect();
    let mut order: Vec<usize> = (0..d).filter(|&x| !vanish[x]).collect();
    order.extend((0..d).filter(|&x| vanish[x]));
    order.extend(d..alg.dim());
    (order, vanish)
}

/// Builds and verifies the certificate for H, using a precomputed center basis if given.
pub fn lie_identity_certificate_with(
    alg: &PbwAlgebra,
    rs: &RestrictedRootSystem,
    h: &ChamberVector,
    center: Option<&CenterBasis>,
) -> Result<LieIdentityCertificate> {
    if !h.in_closed_chamber() {
        return Err(Error::Argument(
            "H is outside the closed positive chamber".into(),
        ));
    }
    let hp = hpoly_coefficients(h)?;
    let w = hp.w_h;
    let owned;
    let cb = match center {
        Some(cb) if cb.m >= w => cb,
        _ => {
            owned = center_basis(alg, w)?;
            &owned
        }
    };
    let mut z = Vec::with_capacity(w + 1);
    for (i, ji) in hp.j.iter().enumerate() {
        let zi = cb.gamma_inverse(ji).ok_or_else(|| {
            Error::Resource(format!(
                "no central preimage of J_{i} in degree <= {}; raise the center degree",
                cb.m
            ))
        })?;
        z.push(zi);
    }
    z.push(alg.one());
    let p = assemble_p(alg, &h.h, &z)?;

    let (order, vanish) = adapted_order(alg, rs, h);
    let adapted = PbwAlgebra::with_order(alg.lie.clone(), order.clone(), alg.limits)?;
    let pa = adapted.convert_from(alg, &p)?;
    let d = alg.lie.num_positive();
    let mut ua = vec![PbwElement::zero(); d];
    for (m, c) in &pa.terms {
        let lead = m.iter().position(|&e| e > 0);
        let Some(pos) = lead.filter(|&pos| pos < d && !vanish[order[pos]]) else {
            return Err(Error::Invariant("P has a monomial outside n_F U(g)".into()));
        };
        let mut rest = m.clone();
        rest[pos] -= 1;
        ua[order[pos]].add_term(rest, c.clone());
    }
    let u = ua
        .iter()
        .map(|x| alg.convert_from(&adapted, x))
        .collect::<Result<Vec<_>>>()?;
    let mut cert = LieIdentityCertificate {
        h: h.clone(),
        w_h: w,
        z,
        p,
        u,
        center_degree: cb.m,
        verified: false,
    };
    verify_certificate(alg, rs, &cert)?;
    cert.verified = true;
    Ok(cert)
}

pub fn lie_identity_certificate(
    alg: &PbwAlgebra,
    rs: &RestrictedRootSystem,
    h: &ChamberVector,
) -> Result<LieIdentityCertificate> {
    lie_identity_certificate_with(alg, rs, h, None)
}

/// sum_i Z_i H^i.
pub fn assemble_p(alg: &PbwAlgebra, h: &[Q], z: &[PbwElement]) -> Result<PbwElement> {
    let he = h_element(alg, h);
    let mut p = PbwElement::zero();
    let mut hp = alg.one();
    for zi in z {
        p = p.add(&alg.mul(zi, &hp)?);
        hp = alg.mul(&hp, &he)?;
    }
    Ok(p)
}

/// Re-checks every certificate invariant from scratch.
pub fn verify_certificate(
    alg: &PbwAlgebra,
    rs: &RestrictedRootSystem,
    c: &LieIdentityCertificate,
) -> Result<()> {
    let fail = |s: &str| Err(Error::Invariant(s.to_string()));
    let h = ChamberVector::new(rs, c.h.h.clone())?;
    if !h.in_closed_chamber() {
        return fail("H outside the closed chamber");
    }
    let hp = hpoly_coefficients(&h)?;
    if hp.w_h != c.w_h {
        return fail("W_H differs from the orbit size");
    }
    if c.z.len() != c.w_h + 1 || c.z[c.w_h] != alg.one() {
        return fail("Z must have W_H + 1 entries ending with 1");
    }
    let all = c.z.iter().chain(std::iter::once(&c.p)).chain(c.u.iter());
    for e in all {
        if e.terms.values().any(|v| v.is_zero()) || e.terms.keys().any(|m| m.len() != alg.dim()) {
            return fail("non-canonical element");
        }
    }
    for (i, zi) in c.z.iter().enumerate() {
        for a in 0..alg.dim() {
            if !alg.commutator(&alg.generator(a), zi)?.is_zero() {
                return Err(Error::Invariant(format!("Z_{i} is not central")));
            }
        }
        if i < c.w_h && harish_chandra(alg, zi)? != hp.j[i] {
            return Err(Error::Invariant(format!("gamma(Z_{i}) != J_{i}")));
        }
    }
    if assemble_p(alg, &h.h, &c.z)? != c.p {
        return fail("P differs from sum Z_i H^i");
    }
    if c.p.terms.keys().any(|m| alg.positive_degree(m) == 0) {
        return fail("P has a monomial of zero n+ degree");
    }
    if !hc_project(alg, &c.p).is_zero() {
        return fail("Proj_h(P) != 0");
    }
    let d = alg.lie.num_positive();
    if c.u.len() != d {
        return fail("wrong number of U_j");
    }
    let mut sum = PbwElement::zero();
    for (j, uj) in c.u.iter().enumerate() {
        let root = rs
            .roots
            .iter()
            .find(|r| r.space.contains(&j))
            .expect("positive root");
        if root.eval(&h.h).is_zero() && !uj.is_zero() {
            return Err(Error::Invariant(format!(
                "U_{j} nonzero although beta_j(H) = 0"
            )));
        }
        sum = sum.add(&alg.left_mul_generator(j, uj)?);
    }
    if sum != c.p {
        return fail("sum X_j U_j != P");
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub algebra: String,
    pub basis_order: Vec<String>,
    pub h: Vec<String>,
    pub w_h: usize,
    pub center_degree: usize,
    pub z: Vec<Vec<TermJson>>,
    pub p: Vec<TermJson>,
    pub u: Vec<Vec<TermJson>>,
    pub verified: bool,
}

fn elem_to_json(e: &PbwElement) -> Vec<TermJson> {
    e.terms
        .iter()
        .map(|(m, c)| TermJson {
            exponents: m.iter().map(|&x| x as u32).collect(),
            coeff: rational::to_str(c),
        })
        .collect()
}

fn elem_from_json(t: &[TermJson], dim: usize) -> Result<PbwElement> {
    let mut out = PbwElement::zero();
    for term in t {
        if term.exponents.len() != dim {
            return Err(Error::Argument("exponent vector has wrong length".into()));
        }
        let m: Vec<u8> = term
            .exponents
            .iter()
            .map(|&x| u8::try_from(x).map_err(|_| Error::Argument("exponent too large".into())))
            .collect::<Result<_>>()?;
        let c = rational::parse(&term.coeff)?;
        if c.is_zero() {
            return Err(Error::Invariant("zero coefficient stored".into()));
        }
        if out.terms.insert(m, c).is_some() {
            return Err(Error::Invariant("duplicate monomial".into()));
        }
    }
    Ok(out)
}

impl LieIdentityCertificate {
    pub fn to_json(&self, alg: &PbwAlgebra) -> CertificateJson {
        CertificateJson {
            algebra: format!("sl{}", alg.lie.n),
            basis_order: alg
                .order
                .iter()
                .map(|&a| alg.lie.basis[a].label())
                .collect(),
            h: self.h.h.iter().map(rational::to_str).collect(),
            w_h: self.w_h,
            center_degree: self.center_degree,
            z: self.z.iter().map(elem_to_json).collect(),
            p: elem_to_json(&self.p),
            u: self.u.iter().map(elem_to_json).collect(),
            verified: self.verified,
        }
    }

    /// Parses a certificate; the caller must run `verify_certificate`.
    pub fn from_json(
        j: &CertificateJson,
        alg: &PbwAlgebra,
        rs: &RestrictedRootSystem,
    ) -> Result<Self> {
        let expected = format!("sl{}", alg.lie.n);
        let labels: Vec<String> = alg
            .order
            .iter()
            .map(|&a| alg.lie.basis[a].label())
            .collect();
        if j.algebra != expected || j.basis_order != labels {
            return Err(Error::Argument(
                "certificate algebra or basis order mismatch".into(),
            ));
        }
        let h =
            j.h.iter()
                .map(|s| rational::parse(s))
                .collect::<Result<Vec<_>>>()?;
        let dim = alg.dim();
        Ok(LieIdentityCertificate {
            h: ChamberVector::new(rs, h)?,
            w_h: j.w_h,
            z: j.z
                .iter()
                .map(|t| elem_from_json(t, dim))
                .collect::<Result<_>>()?,
            p: elem_from_json(&j.p, dim)?,
            u: j.u
                .iter()
                .map(|t| elem_from_json(t, dim))
                .collect::<Result<_>>()?,
            center_degree: j.center_degree,
            verified: j.verified,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub samples: usize,
    pub w_h: Vec<usize>,
    pub w_h_constant: bool,
    /// Samples lie on one affine line; then exact divided differences are tested.
    pub collinear: bool,
    /// Largest |divided difference| of order W_H + 1 over all coefficients (collinear case).
    pub max_divided_difference: f64,
    /// max |coefficient| / (1 + ||H||^W_H) over samples.
    pub growth_constant: f64,
    pub coherent: bool,
}

/// Coefficient map keyed by (slot, monomial); slot 0..=W are Z_i, then U_j.
fn coefficient_map(c: &LieIdentityCertificate) -> BTreeMap<(usize, Vec<u8>), Q> {
    let mut out = BTreeMap::new();
    for (slot, e) in c.z.iter().chain(c.u.iter()).enumerate() {
        for (m, v) in &e.terms {
            out.insert((slot, m.clone()), v.clone());
        }
    }
    out
}

/// Checks that H -> Z_i(H), U_j(H) behave polynomially on one wall component.
pub fn continuity_spotcheck(
    alg: &PbwAlgebra,
    rs: &RestrictedRootSystem,
    f: &[usize],
    samples: &[ChamberVector],
    eps: &Q,
) -> Result<ContinuityReport> {
    if samples.is_empty() {
        return Err(Error::Argument("no samples".into()));
    }
    let mut fs: Vec<usize> = f.to_vec();
    fs.sort_unstable();
    for s in samples {
        match chamber_classify(s, eps) {
            Classification::Component(g) if g == fs => {}
            other => {
                return Err(Error::Argument(format!(
                    "sample not in the component for F = {fs:?}: {other:?}"
                )));
            }
        }
    }
    let w0 = hpoly_coefficients(&samples[0])?.w_h;
    let cb = center_basis(alg, w0)?;
    let certs = samples
        .iter()
        .map(|s| lie_identity_certificate_with(alg, rs, s, Some(&cb)))
        .collect::<Result<Vec<_>>>()?;
    let w_h: Vec<usize> = certs.iter().map(|c| c.w_h).collect();
    let w_h_constant = w_h.iter().all(|&w| w == w0);
    let maps: Vec<_> = certs.iter().map(coefficient_map).collect();
    let mut keys: Vec<(usize, Vec<u8>)> = maps.iter().flat_map(|m| m.keys().cloned()).collect();
    keys.sort();
    keys.dedup();

    let mut growth = 0f64;
    for (c, m) in certs.iter().zip(&maps) {
        let scale = 1.0 + c.h.norm_killing.powi(c.w_h as i32);
        for v in m.values() {
            growth = growth.max(rational::to_f64(&v.abs()) / scale);
        }
    }

    // Collinearity: H_k = H_0 + tau_k * D.
    let base = &samples[0].h;
    let dir = samples
        .iter()
        .map(|s| sub(&s.h, base))
        .find(|v| v.iter().any(|x| !x.is_zero()));
    let mut taus = vec![Q::zero()];
    let mut collinear = true;
    if let Some(dir) = &dir {
        let piv = dir.iter().position(|x| !x.is_zero()).unwrap();
        for s in &samples[1..] {
            let diff = sub(&s.h, base);
            let tau = &diff[piv] / &dir[piv];
            if diff.iter().zip(dir).any(|(a, b)| a != &(&tau * b)) {
                collinear = false;
                break;
            }
            taus.push(tau);
        }
        let mut sorted = taus.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != taus.len() {
            collinear = false;
        }
    } else {
        taus = vec![Q::zero(); samples.len()];
        collinear = samples.len() == 1;
    }
    let mut max_dd = 0f64;
    let mut dd_zero = true;
    if collinear && samples.len() > w0 + 1 {
        for key in &keys {
            let vals: Vec<Q> = maps
                .iter()
                .map(|m| m.get(key).cloned().unwrap_or_else(Q::zero))
                .collect();
            let dd = divided_difference(&taus, &vals, w0 + 1);
            for v in dd {
                if !v.is_zero() {
                    dd_zero = false;
                    max_dd = max_dd.max(rational::to_f64(&v.abs()));
                }
            }
        }
    }
    let coherent = w_h_constant && growth.is_finite() && (!collinear || dd_zero);
    Ok(ContinuityReport {
        samples: samples.len(),
        w_h,
        w_h_constant,
        collinear,
        max_divided_difference: max_dd,
        growth_constant: growth,
        coherent,
    })
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// All divided differences of the given order over consecutive windows.
fn divided_difference(x: &[Q], y: &[Q], order: usize) -> Vec<Q> {
    let mut cur: Vec<Q> = y.to_vec();
    for k in 1..=order {
        if cur.len() < 2 {
            return Vec::new();
        }
        cur = (0..cur.len() - 1)
            .map(|i| (&cur[i + 1] - &cur[i]) / (&x[i + k] - &x[i]))
            .collect();
    }
    cur
}
