//! Explicit matrix representation of parafermion modes via Jordan-Wigner.
//!
//! Every operator in PF(D, 2n) maps to a monomial matrix (one nonzero entry
//! per column), so products and adjoints are stored exactly in that form and
//! only the code projector is expanded into a dense matrix.

use std::collections::{HashSet, VecDeque};
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::code::{CodeError, PfCode, Validity};
use crate::pf::{PfError, PfOperator};

pub const DEFAULT_DIM_CAP: usize = 2048;
pub const DEFAULT_GROUP_CAP: usize = 1 << 16;
pub const EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("Hilbert space dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: u128, cap: usize },
    #[error("stabilizer group has more than {0} elements")]
    GroupCap(usize),
    #[error("operator acts on {found} modes, representation has {expected}")]
    Mismatch { expected: usize, found: usize },
    #[error("code is not valid: {0}")]
    Invalid(Validity),
    #[error("generator {0} has no definite eigenphase on the state")]
    Degenerate(usize),
    #[error("projector vanishes")]
    EmptyCodespace,
    #[error(transparent)]
    Pf(#[from] PfError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// `M |c> = phase[c] |target[c]>`.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    target: Vec<usize>,
    phase: Vec<Complex64>,
}

impl Monomial {
    pub fn identity(dim: usize) -> Self {
        Self {
            target: (0..dim).collect(),
            phase: vec![Complex64::new(1.0, 0.0); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.target.len()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            target: self.target.clone(),
            phase: self.phase.iter().map(|p| p * s).collect(),
        }
    }

    /// `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        let (target, phase) = other
            .target
            .iter()
            .zip(&other.phase)
            .map(|(&t, &p)| (self.target[t], self.phase[t] * p))
            .unzip();
        Self { target, phase }
    }

    pub fn pow(&self, e: u64) -> Self {
        (0..e).fold(Self::identity(self.dim()), |acc, _| acc.mul(self))
    }

    pub fn adjoint(&self) -> Self {
        let mut target = vec![0; self.dim()];
        let mut phase = vec![Complex64::default(); self.dim()];
        for (c, (&t, &p)) in self.target.iter().zip(&self.phase).enumerate() {
            target[t] = c;
            phase[t] = p.conj();
        }
        Self { target, phase }
    }

    pub fn trace(&self) -> Complex64 {
        self.target
            .iter()
            .zip(&self.phase)
            .enumerate()
            .filter(|(c, (&t, _))| *c == t)
            .map(|(_, (_, &p))| p)
            .sum()
    }

    /// Max-abs entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.target
            .iter()
            .zip(&self.phase)
            .zip(other.target.iter().zip(&other.phase))
            .map(|((&ta, &pa), (&tb, &pb))| {
                if ta == tb {
                    (pa - pb).norm()
                } else {
                    pa.norm().max(pb.norm())
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Dense {
        let n = self.dim();
        let mut d = Dense::zeros(n);
        for (c, (&t, &p)) in self.target.iter().zip(&self.phase).enumerate() {
            d.data[t * n + c] = p;
        }
        d
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); v.len()];
        for (c, (&t, &p)) in self.target.iter().zip(&self.phase).enumerate() {
            out[t] += p * v[c];
        }
        out
    }
}

/// Row-major square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl Dense {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::default(); dim * dim],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.get(r, c).conj();
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, c)).collect()
    }

    /// `m * self` for a monomial `m`.
    pub fn left_mul(&self, m: &Monomial) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for (r, (&t, &p)) in m.target.iter().zip(&m.phase).enumerate() {
            for c in 0..n {
                out.data[t * n + c] += p * self.data[r * n + c];
            }
        }
        out
    }
}

fn root(modulus: u64, k: u64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / modulus as f64)
}

/// Shift and clock matrices: `X|j> = |j+1>`, `Z|j> = w^j |j>`.
pub fn clock_ops(modulus: u64) -> (Monomial, Monomial) {
    let d = modulus as usize;
    let x = Monomial {
        target: (0..d).map(|j| (j + 1) % d).collect(),
        phase: vec![Complex64::new(1.0, 0.0); d],
    };
    let z = Monomial {
        target: (0..d).collect(),
        phase: (0..modulus).map(|j| root(modulus, j)).collect(),
    };
    (x, z)
}

/// Tensor product of single-qudit monomials, site 0 most significant.
fn kron(modulus: u64, sites: &[Monomial]) -> Monomial {
    let d = modulus as usize;
    let n = sites.len();
    let dim = d.pow(n as u32);
    let mut target = vec![0; dim];
    let mut phase = vec![Complex64::new(1.0, 0.0); dim];
    for c in 0..dim {
        let mut rest = c;
        let mut t = 0;
        let mut stride = 1;
        for op in sites.iter().rev() {
            let digit = rest % d;
            rest /= d;
            t += op.target[digit] * stride;
            phase[c] *= op.phase[digit];
            stride *= d;
        }
        target[c] = t;
    }
    Monomial { target, phase }
}

/// Jordan-Wigner parafermion modes on `n` clock qudits.
#[derive(Clone, Debug)]
pub struct JwRep {
    modulus: u64,
    n: usize,
    modes: Vec<Monomial>,
}

impl JwRep {
    pub fn new(modulus: u64, n: usize) -> Result<Self, OracleError> {
        Self::with_cap(modulus, n, DEFAULT_DIM_CAP)
    }

    /// `g_{2j-1} = (prod_{k<j} X_k) Z_j`,
    /// `g_{2j} = w_{2D}^{D-1} (prod_{k<j} X_k) Z_j X_j`.
    pub fn with_cap(modulus: u64, n: usize, cap: usize) -> Result<Self, OracleError> {
        if modulus < 2 {
            return Err(PfError::InvalidModulus(modulus).into());
        }
        let dim = (modulus as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if dim > cap as u128 {
            return Err(OracleError::DimensionCap { dim, cap });
        }
        let (x, z) = clock_ops(modulus);
        let id = Monomial::identity(modulus as usize);
        let zx = z.mul(&x);
        let half = root(2 * modulus, modulus - 1);
        let mut modes = Vec::with_capacity(2 * n);
        for j in 0..n {
            let mut sites: Vec<Monomial> = (0..n)
                .map(|k| if k < j { x.clone() } else { id.clone() })
                .collect();
            sites[j] = z.clone();
            modes.push(kron(modulus, &sites));
            sites[j] = zx.clone();
            modes.push(kron(modulus, &sites).scale(half));
        }
        Ok(Self { modulus, n, modes })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        (self.modulus as usize).pow(self.n as u32)
    }

    pub fn modes(&self) -> &[Monomial] {
        &self.modes
    }

    /// `w_{2D}^mu g_1^{a_1} ... g_2n^{a_2n}`.
    pub fn op_matrix(&self, a: &PfOperator) -> Result<Monomial, OracleError> {
        if a.num_modes() != self.modes.len() || a.modulus() != self.modulus {
            return Err(OracleError::Mismatch {
                expected: self.modes.len(),
                found: a.num_modes(),
            });
        }
        let mut m = Monomial::identity(self.dim());
        for (g, &e) in self.modes.iter().zip(a.alpha()) {
            if e != 0 {
                m = m.mul(&g.pow(e));
            }
        }
        Ok(m.scale(root(2 * self.modulus, a.mu())))
    }

    /// `Q = prod_j g_{2j-1}^dagger g_{2j}`.
    pub fn charge_operator(&self) -> Monomial {
        self.modes
            .chunks(2)
            .fold(Monomial::identity(self.dim()), |acc, p| acc.mul(&p[0].adjoint()).mul(&p[1]))
    }

    /// Every element of the stabilizer group, found by closure under the generators.
    pub fn group_elements(&self, code: &PfCode, cap: usize) -> Result<Vec<PfOperator>, OracleError> {
        let id = PfOperator::identity(code.modulus(), code.num_modes())?;
        let mut seen: HashSet<PfOperator> = HashSet::from([id.clone()]);
        let mut order = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(s) = queue.pop_front() {
            for g in code.generators() {
                let t = s.multiply(g)?;
                if seen.insert(t.clone()) {
                    if seen.len() > cap {
                        return Err(OracleError::GroupCap(cap));
                    }
                    order.push(t.clone());
                    queue.push_back(t);
                }
            }
        }
        Ok(order)
    }

    /// Codespace projector `P = |S|^-1 sum_s s` and its trace.
    pub fn projector(&self, code: &PfCode) -> Result<(Dense, f64), OracleError> {
        let v = code.validate();
        if !v.is_valid() {
            return Err(OracleError::Invalid(v));
        }
        let elements = self.group_elements(code, DEFAULT_GROUP_CAP)?;
        let w = 1.0 / elements.len() as f64;
        let n = self.dim();
        let mut p = Dense::zeros(n);
        for s in &elements {
            let m = self.op_matrix(s)?;
            for (c, (&t, &ph)) in m.target.iter().zip(&m.phase).enumerate() {
                p.data[t * n + c] += ph * w;
            }
        }
        let tr = p.trace().re;
        Ok((p, tr))
    }

    /// Syndrome of `e` read off as the eigenphases of the generators on
    /// `e |psi>` for a codeword `|psi>` taken from the projector.
    pub fn syndrome_sim(&self, code: &PfCode, projector: &Dense, e: &PfOperator) -> Result<Vec<u64>, OracleError> {
        let best = (0..projector.dim)
            .max_by(|&a, &b| projector.get(a, a).re.total_cmp(&projector.get(b, b).re))
            .ok_or(OracleError::EmptyCodespace)?;
        let psi = projector.column(best);
        if psi.iter().map(|z| z.norm_sqr()).sum::<f64>() < EPS {
            return Err(OracleError::EmptyCodespace);
        }
        let phi = self.op_matrix(e)?.apply(&psi);
        let norm: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
        let d = self.modulus;
        code.generators()
            .iter()
            .enumerate()
            .map(|(j, g)| {
                let gphi = self.op_matrix(g)?.apply(&phi);
                let lambda: Complex64 = phi.iter().zip(&gphi).map(|(a, b)| a.conj() * b).sum::<Complex64>() / norm;
                let resid: f64 = phi
                    .iter()
                    .zip(&gphi)
                    .map(|(a, b)| (b - lambda * a).norm_sqr())
                    .sum();
                if resid > 1e-12 * norm.max(1.0) || (lambda.norm() - 1.0).abs() > 1e-6 {
                    return Err(OracleError::Degenerate(j));
                }
                let k = (lambda.arg() * d as f64 / (2.0 * PI)).round() as i64;
                Ok(k.rem_euclid(d as i64) as u64)
            })
            .collect()
    }
}

/// One line of an oracle report.
#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub max_error: f64,
    pub passed: bool,
}

impl CheckLine {
    fn new(name: impl Into<String>, max_error: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            max_error,
            passed: max_error < tol,
        }
    }
}

/// Clock relations and the Jordan-Wigner mode relations, including the
/// charge relation `g^a Q = w^{charge(a)} Q g^a` on every single mode.
pub fn relation_suite(modulus: u64, n: usize) -> Result<Vec<CheckLine>, OracleError> {
    let (x, z) = clock_ops(modulus);
    let id1 = Monomial::identity(modulus as usize);
    let w = root(modulus, 1);
    let mut out = vec![
        CheckLine::new("ZX = wXZ", z.mul(&x).max_abs_diff(&x.mul(&z).scale(w)), EPS),
        CheckLine::new("X^D = Z^D = 1", x.pow(modulus).max_abs_diff(&id1).max(z.pow(modulus).max_abs_diff(&id1)), EPS),
    ];
    let rep = JwRep::new(modulus, n)?;
    let id = Monomial::identity(rep.dim());
    let modes = rep.modes();
    let mut pow_err: f64 = 0.0;
    let mut unit_err: f64 = 0.0;
    let mut comm_err: f64 = 0.0;
    for (j, g) in modes.iter().enumerate() {
        pow_err = pow_err.max(g.pow(modulus).max_abs_diff(&id));
        unit_err = unit_err.max(g.mul(&g.adjoint()).max_abs_diff(&id));
        for h in &modes[j + 1..] {
            comm_err = comm_err.max(g.mul(h).max_abs_diff(&h.mul(g).scale(w)));
        }
    }
    out.push(CheckLine::new("g_j^D = 1", pow_err, EPS));
    out.push(CheckLine::new("g_j unitary", unit_err, EPS));
    out.push(CheckLine::new("g_j g_k = w g_k g_j (j<k)", comm_err, EPS));
    let q = rep.charge_operator();
    let mut q_err: f64 = 0.0;
    for j in 1..=2 * n {
        let op = PfOperator::mode(modulus, 2 * n, j, 1)?;
        let m = rep.op_matrix(&op)?;
        q_err = q_err.max(m.mul(&q).max_abs_diff(&q.mul(&m).scale(root(modulus, op.charge()))));
    }
    out.push(CheckLine::new("g^a Q = w^charge Q g^a", q_err, EPS));
    Ok(out)
}

/// Random operator with uniformly drawn phase and exponents.
pub fn random_operator<R: Rng>(rng: &mut R, modulus: u64, num_modes: usize) -> PfOperator {
    let mu = rng.gen_range(0..2 * modulus);
    let alpha = (0..num_modes).map(|_| rng.gen_range(0..modulus)).collect();
    PfOperator::new(modulus, mu, alpha).expect("residues in range")
}

/// Compares matrix products, inverses and charges against the algebra on
/// `cases` seeded random pairs.
pub fn homomorphism_suite(modulus: u64, n: usize, cases: usize, seed: u64) -> Result<Vec<CheckLine>, OracleError> {
    let rep = JwRep::new(modulus, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = rep.charge_operator();
    let (mut mul_err, mut inv_err, mut charge_err): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..cases {
        let a = random_operator(&mut rng, modulus, 2 * n);
        let b = random_operator(&mut rng, modulus, 2 * n);
        let (ma, mb) = (rep.op_matrix(&a)?, rep.op_matrix(&b)?);
        mul_err = mul_err.max(ma.mul(&mb).max_abs_diff(&rep.op_matrix(&a.multiply(&b)?)?));
        inv_err = inv_err.max(rep.op_matrix(&a.inverse())?.max_abs_diff(&ma.adjoint()));
        charge_err = charge_err.max(ma.mul(&q).max_abs_diff(&q.mul(&ma).scale(root(modulus, a.charge()))));
    }
    Ok(vec![
        CheckLine::new(format!("multiply ({cases} pairs)"), mul_err, EPS),
        CheckLine::new(format!("inverse = adjoint ({cases})"), inv_err, EPS),
        CheckLine::new(format!("charge relation ({cases})"), charge_err, EPS),
    ])
}

/// Projector identities and trace for a code.
pub fn projector_suite(code: &PfCode) -> Result<Vec<CheckLine>, OracleError> {
    let rep = JwRep::new(code.modulus(), code.n())?;
    let (p, tr) = rep.projector(code)?;
    let elements = rep.group_elements(code, DEFAULT_GROUP_CAP)?;
    let w = 1.0 / elements.len() as f64;
    let mut p2 = Dense::zeros(p.dim);
    for s in &elements {
        let sp = p.left_mul(&rep.op_matrix(s)?);
        for (acc, v) in p2.data.iter_mut().zip(&sp.data) {
            *acc += v * w;
        }
    }
    let dim = code.codespace_dim()? as f64;
    Ok(vec![
        CheckLine::new("P^2 = P", p2.max_abs_diff(&p), EPS * p.dim as f64),
        CheckLine::new("P = P^dagger", p.adjoint().max_abs_diff(&p), EPS * p.dim as f64),
        CheckLine::new(format!("tr P = {dim}"), (tr - dim).abs(), 1e-6),
    ])
}
