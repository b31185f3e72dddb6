//! Split sl(n, R) with exact structure constants.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, q, Q};

/// Kind of a basis vector of sl(n). Indices are 1-based like matrix entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisKind {
    /// E_ij with i < j.
    Positive { i: usize, j: usize },
    /// h_k = E_kk - E_{k+1,k+1}.
    Cartan { k: usize },
    /// F_ij = E_ji with i < j.
    Negative { i: usize, j: usize },
}

impl BasisKind {
    pub fn label(&self) -> String {
        match *self {
            BasisKind::Positive { i, j } => format!("E{i}{j}"),
            BasisKind::Cartan { k } => format!("H{k}"),
            BasisKind::Negative { i, j } => format!("F{i}{j}"),
        }
    }
}

/// Sparse linear combination of basis vectors.
pub type Combo = Vec<(usize, Q)>;

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraData {
    pub n: usize,
    pub dim_g: usize,
    pub basis: Vec<BasisKind>,
    /// `structure_constants[a][b]` = [X_a, X_b] as a sparse combination.
    pub structure_constants: Vec<Vec<Combo>>,
    /// Image of each basis vector under X -> -X^T.
    pub theta: Vec<Combo>,
    /// B(X_a, X_b) = 2n tr(X_a X_b).
    pub killing: Vec<Vec<Q>>,
}

pub const MAX_N: usize = 6;

/// Basis in the order: positive roots by height, Cartan, negative roots by height.
pub fn basis_order(n: usize) -> Vec<BasisKind> {
    let mut pos = Vec::new();
    for h in 1..n {
        for i in 1..=n - h {
            pos.push((i, i + h));
        }
    }
    let mut out: Vec<BasisKind> = pos
        .iter()
        .map(|&(i, j)| BasisKind::Positive { i, j })
        .collect();
    out.extend((1..n).map(|k| BasisKind::Cartan { k }));
    out.extend(pos.iter().map(|&(i, j)| BasisKind::Negative { i, j }));
    out
}

type Dense = Vec<Vec<Q>>;

fn zero_matrix(n: usize) -> Dense {
    vec![vec![Q::zero(); n]; n]
}

fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut c = zero_matrix(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    c[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    c
}

impl LieAlgebraData {
    pub fn index_of(&self, kind: BasisKind) -> Option<usize> {
        self.basis.iter().position(|b| *b == kind)
    }

    pub fn num_positive(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// Index range of the Cartan block.
    pub fn cartan_range(&self) -> std::ops::Range<usize> {
        let p = self.num_positive();
        p..p + self.n - 1
    }

    pub fn is_positive(&self, a: usize) -> bool {
        a < self.num_positive()
    }

    pub fn is_cartan(&self, a: usize) -> bool {
        self.cartan_range().contains(&a)
    }

    pub fn is_negative(&self, a: usize) -> bool {
        a >= self.num_positive() + self.n - 1
    }

    /// Matrix of a basis vector.
    pub fn matrix(&self, a: usize) -> Dense {
        let mut m = zero_matrix(self.n);
        match self.basis[a] {
            BasisKind::Positive { i, j } => m[i - 1][j - 1] = Q::one(),
            BasisKind::Negative { i, j } => m[j - 1][i - 1] = Q::one(),
            BasisKind::Cartan { k } => {
                m[k - 1][k - 1] = Q::one();
                m[k][k] = -Q::one();
            }
        }
        m
    }

    /// Matrix of a dense coordinate vector.
    pub fn matrix_of(&self, coords: &[Q]) -> Dense {
        let mut m = zero_matrix(self.n);
        for (a, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let ma = self.matrix(a);
            for i in 0..self.n {
                for j in 0..self.n {
                    if !ma[i][j].is_zero() {
                        m[i][j] += c * &ma[i][j];
                    }
                }
            }
        }
        m
    }

    /// Coordinates of a traceless matrix in the basis.
    pub fn coords_of_matrix(&self, m: &Dense) -> Result<Vec<Q>> {
        let n = self.n;
        let trace: Q = (0..n).map(|i| m[i][i].clone()).sum();
        if !trace.is_zero() {
            return Err(Error::Argument("matrix is not traceless".into()));
        }
        let mut out = vec![Q::zero(); self.dim_g];
        for (a, kind) in self.basis.iter().enumerate() {
            out[a] = match *kind {
                BasisKind::Positive { i, j } => m[i - 1][j - 1].clone(),
                BasisKind::Negative { i, j } => m[j - 1][i - 1].clone(),
                BasisKind::Cartan { k } => (0..k).map(|i| m[i][i].clone()).sum(),
            };
        }
        Ok(out)
    }

    /// Coordinates of a traceless diagonal element given by its diagonal entries.
    pub fn cartan_coords(&self, diag: &[Q]) -> Vec<Q> {
        let mut acc = Q::zero();
        let mut out = Vec::with_capacity(self.n - 1);
        for d in &diag[..self.n - 1] {
            acc += d;
            out.push(acc.clone());
        }
        out
    }

    /// [X_a, X_b].
    pub fn bracket(&self, a: usize, b: usize) -> &Combo {
        &self.structure_constants[a][b]
    }

    /// Bracket of two dense coordinate vectors.
    pub fn bracket_vec(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim_g];
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                for (c, k) in self.bracket(a, b) {
                    out[*c] += xa * yb * k;
                }
            }
        }
        out
    }

    pub fn unit(&self, a: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim_g];
        v[a] = Q::one();
        v
    }

    /// Checks antisymmetry, Jacobi, theta^2 = id and theta-invariance of B.
    pub fn check_invariants(&self) -> Result<()> {
        let d = self.dim_g;
        for a in 0..d {
            for b in 0..d {
                let ab = dense(self.bracket(a, b), d);
                let ba = dense(self.bracket(b, a), d);
                if ab.iter().zip(&ba).any(|(x, y)| x != &-y.clone()) {
                    return Err(Error::Invariant(format!("antisymmetry fails at ({a},{b})")));
                }
            }
        }
        for a in 0..d {
            for b in a + 1..d {
                for c in b + 1..d {
                    let mut total = vec![Q::zero(); d];
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        let yz = dense(self.bracket(y, z), d);
                        let t = self.bracket_vec(&self.unit(x), &yz);
                        for i in 0..d {
                            total[i] += &t[i];
                        }
                    }
                    if total.iter().any(|v| !v.is_zero()) {
                        return Err(Error::Invariant(format!("Jacobi fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        for a in 0..d {
            let ta = dense(&self.theta[a], d);
            let tta = self.apply_theta(&ta);
            if tta != self.unit(a) {
                return Err(Error::Invariant(format!("theta^2 != id at {a}")));
            }
        }
        for a in 0..d {
            for b in 0..d {
                let ta = dense(&self.theta[a], d);
                let tb = dense(&self.theta[b], d);
                if self.killing_vec(&ta, &tb) != self.killing[a][b] {
                    return Err(Error::Invariant(format!(
                        "B(theta X, theta Y) != B(X, Y) at ({a},{b})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply_theta(&self, x: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim_g];
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (c, k) in &self.theta[a] {
                out[*c] += xa * k;
            }
        }
        out
    }

    pub fn killing_vec(&self, x: &[Q], y: &[Q]) -> Q {
        let mut s = Q::zero();
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                if !self.killing[a][b].is_zero() {
                    s += xa * yb * &self.killing[a][b];
                }
            }
        }
        s
    }
}

pub(crate) fn dense(c: &Combo, d: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); d];
    for (i, x) in c {
        v[*i] += x;
    }
    v
}

fn sparse(v: &[Q]) -> Combo {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// Builds split sl(n, R), 2 <= n <= 6.
pub fn build_split_sl(n: usize) -> Result<LieAlgebraData> {
    if !(2..=MAX_N).contains(&n) {
        return Err(Error::Config(format!(
            "sl(n) requires 2 <= n <= {MAX_N}, got {n}"
        )));
    }
    let basis = basis_order(n);
    let dim_g = basis.len();
    debug_assert_eq!(dim_g, n * n - 1);
    let mut alg = LieAlgebraData {
        n,
        dim_g,
        basis,
        structure_constants: Vec::new(),
        theta: Vec::new(),
        killing: Vec::new(),
    };
    let mats: Vec<Dense> = (0..dim_g).map(|a| alg.matrix(a)).collect();
    let mut sc = vec![vec![Vec::new(); dim_g]; dim_g];
    for a in 0..dim_g {
        for b in 0..dim_g {
            let ab = matmul(&mats[a], &mats[b]);
            let ba = matmul(&mats[b], &mats[a]);
            let comm: Dense = ab
                .iter()
                .zip(&ba)
                .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
                .collect();
            sc[a][b] = sparse(&alg.coords_of_matrix(&comm)?);
        }
    }
    let theta = (0..dim_g)
        .map(|a| {
            let m = &mats[a];
            let t: Dense = (0..n)
                .map(|i| (0..n).map(|j| -m[j][i].clone()).collect())
                .collect();
            alg.coords_of_matrix(&t).map(|c| sparse(&c))
        })
        .collect::<Result<Vec<_>>>()?;
    let two_n = q(2 * n as i64);
    let killing = (0..dim_g)
        .map(|a| {
            (0..dim_g)
                .map(|b| {
                    let p = matmul(&mats[a], &mats[b]);
                    let tr: Q = (0..n).map(|i| p[i][i].clone()).sum();
                    &two_n * tr
                })
                .collect()
        })
        .collect();
    alg.structure_constants = sc;
    alg.theta = theta;
    alg.killing = killing;
    Ok(alg)
}

/// JSON form with rationals as `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieAlgebraJson {
    pub n: usize,
    pub dim_g: usize,
    pub basis: Vec<String>,
    /// (a, b, c, coefficient of X_c in [X_a, X_b]).
    pub structure_constants: Vec<(usize, usize, usize, String)>,
    pub theta: Vec<(usize, usize, String)>,
    pub killing: Vec<(usize, usize, String)>,
}

impl LieAlgebraData {
    pub fn to_json(&self) -> LieAlgebraJson {
        let mut sc = Vec::new();
        for a in 0..self.dim_g {
            for b in 0..self.dim_g {
                for (c, v) in &self.structure_constants[a][b] {
                    sc.push((a, b, *c, rational::to_str(v)));
                }
            }
        }
        let theta = (0..self.dim_g)
            .flat_map(|a| {
                self.theta[a]
                    .iter()
                    .map(move |(c, v)| (a, *c, rational::to_str(v)))
            })
            .collect();
        let mut killing = Vec::new();
        for a in 0..self.dim_g {
            for b in 0..self.dim_g {
                if !self.killing[a][b].is_zero() {
                    killing.push((a, b, rational::to_str(&self.killing[a][b])));
                }
            }
        }
        LieAlgebraJson {
            n: self.n,
            dim_g: self.dim_g,
            basis: self.basis.iter().map(|b| b.label()).collect(),
            structure_constants: sc,
            theta,
            killing,
        }
    }

    /// Rebuilds from JSON and checks the result equals a freshly built algebra.
    pub fn from_json(j: &LieAlgebraJson) -> Result<Self> {
        let alg = build_split_sl(j.n)?;
        let d = alg.dim_g;
        let idx = |i: usize| {
            if i < d {
                Ok(i)
            } else {
                Err(Error::Argument(format!("basis index {i} out of range")))
            }
        };
        let mut sc = vec![vec![Vec::new(); d]; d];
        for (a, b, c, v) in &j.structure_constants {
            sc[idx(*a)?][idx(*b)?].push((idx(*c)?, rational::parse(v)?));
        }
        let mut theta = vec![Vec::new(); d];
        for (a, c, v) in &j.theta {
            theta[idx(*a)?].push((idx(*c)?, rational::parse(v)?));
        }
        let mut killing = vec![vec![Q::zero(); d]; d];
        for (a, b, v) in &j.killing {
            killing[idx(*a)?][idx(*b)?] = rational::parse(v)?;
        }
        let parsed = LieAlgebraData {
            n: j.n,
            dim_g: j.dim_g,
            basis: alg.basis.clone(),
            structure_constants: sc,
            theta,
            killing,
        };
        let labels: Vec<String> = alg.basis.iter().map(|b| b.label()).collect();
        if parsed != alg || labels != j.basis {
            return Err(Error::Invariant(
                "serialized algebra does not match sl(n) structure".into(),
            ));
        }
        Ok(parsed)
    }
}
