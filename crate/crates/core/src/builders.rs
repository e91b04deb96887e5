//! Code constructions and converters.
//!
//! Every builder returns a code that passes [`PfCode::validate`]; generator
//! phases come from normal-ordered products and are re-solved with
//! [`PfCode::canonical_phases`] whenever the tracked phases leave a scalar in
//! the group.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{CodeError, ModeLayout, PfCode};
use crate::distance::Colex;
use crate::pf::{PfError, PfOperator};
use crate::zmod::{reduce_i128, ZModError, ZModMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Pf(#[from] PfError),
    #[error(transparent)]
    ZMod(#[from] ZModError),
    #[error("qudit check rows {0} and {1} do not commute")]
    NonCommutingRows(usize, usize),
    #[error("expected modulus {expected}, found {found}")]
    WrongModulus { expected: u64, found: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid toric parameters: {0}")]
    Toric(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

/// One check `X^x Z^z` of a qudit stabilizer code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuditRow {
    pub x: Vec<u64>,
    pub z: Vec<u64>,
}

/// Qudit stabilizer code given by its `(X | Z)` exponent rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuditCheckMatrix {
    modulus: u64,
    num_qudits: usize,
    rows: Vec<QuditRow>,
}

impl QuditCheckMatrix {
    pub fn new(modulus: u64, num_qudits: usize, rows: Vec<QuditRow>) -> Result<Self, BuildError> {
        if modulus < 2 {
            return Err(ZModError::InvalidModulus(modulus).into());
        }
        for r in &rows {
            for part in [&r.x, &r.z] {
                if part.len() != num_qudits {
                    return Err(ZModError::DimensionMismatch {
                        expected: num_qudits,
                        found: part.len(),
                    }
                    .into());
                }
                if let Some(&value) = part.iter().find(|&&v| v >= modulus) {
                    return Err(ZModError::EntryOutOfRange { value, modulus }.into());
                }
            }
        }
        Ok(Self {
            modulus,
            num_qudits,
            rows,
        })
    }

    /// Builds rows from signed exponents, reducing modulo `D`.
    pub fn from_signed(modulus: u64, rows: &[(Vec<i64>, Vec<i64>)]) -> Result<Self, BuildError> {
        let num_qudits = rows.first().map_or(0, |r| r.0.len());
        let red = |v: &[i64]| v.iter().map(|&e| reduce_i128(e as i128, modulus)).collect();
        Self::new(
            modulus,
            num_qudits,
            rows.iter().map(|(x, z)| QuditRow { x: red(x), z: red(z) }).collect(),
        )
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn num_qudits(&self) -> usize {
        self.num_qudits
    }

    pub fn rows(&self) -> &[QuditRow] {
        &self.rows
    }

    /// `x.z' - z.x' mod D`; zero iff the two Weyl operators commute.
    pub fn symplectic(&self, a: &QuditRow, b: &QuditRow) -> u64 {
        let d = self.modulus as i128;
        let dot = |u: &[u64], v: &[u64]| u.iter().zip(v).map(|(&p, &q)| p as i128 * q as i128).sum::<i128>();
        (dot(&a.x, &b.z) - dot(&a.z, &b.x)).rem_euclid(d) as u64
    }

    pub fn check_commuting(&self) -> Result<(), BuildError> {
        for i in 0..self.rows.len() {
            for j in i + 1..self.rows.len() {
                if self.symplectic(&self.rows[i], &self.rows[j]) != 0 {
                    return Err(BuildError::NonCommutingRows(i, j));
                }
            }
        }
        Ok(())
    }

    /// Rows as `(x | z)` vectors of length `2n`.
    pub fn matrix(&self) -> ZModMatrix {
        let rows: Vec<Vec<u64>> = self
            .rows
            .iter()
            .map(|r| r.x.iter().chain(&r.z).copied().collect())
            .collect();
        ZModMatrix::from_rows(self.modulus, 2 * self.num_qudits, &rows).expect("rows are residues")
    }

    pub fn group_order(&self) -> u128 {
        self.matrix().span_order()
    }

    pub fn codespace_dim(&self) -> Result<u128, BuildError> {
        let power = (self.modulus as u128)
            .checked_pow(self.num_qudits as u32)
            .ok_or(CodeError::Overflow)?;
        let order = self.group_order();
        if power % order != 0 {
            return Err(CodeError::NonIntegral { power, order }.into());
        }
        Ok(power / order)
    }

    pub fn logical_qudits(&self) -> Result<Option<u32>, BuildError> {
        Ok(crate::code::integral_log(self.codespace_dim()?, self.modulus))
    }

    /// Minimum weight of a Weyl operator that commutes with every row but is
    /// not in the row span, searched up to `cap` qudits.
    pub fn distance(&self, cap: usize) -> Option<(usize, QuditRow)> {
        let d = self.modulus;
        let n = self.num_qudits;
        let span = self.matrix().howell();
        let nonzero: Vec<(u64, u64)> = (0..d)
            .flat_map(|u| (0..d).map(move |v| (u, v)))
            .filter(|&p| p != (0, 0))
            .collect();
        for w in 1..=cap.min(n) {
            for support in Colex::new(n, w) {
                let mut choice = vec![0usize; w];
                loop {
                    let mut cand = QuditRow {
                        x: vec![0; n],
                        z: vec![0; n],
                    };
                    for (&q, &c) in support.iter().zip(&choice) {
                        cand.x[q] = nonzero[c].0;
                        cand.z[q] = nonzero[c].1;
                    }
                    if self.rows.iter().all(|r| self.symplectic(r, &cand) == 0) {
                        let v: Vec<u64> = cand.x.iter().chain(&cand.z).copied().collect();
                        if !span.contains(&v).expect("same width") {
                            return Some((w, cand));
                        }
                    }
                    let mut t = w;
                    loop {
                        if t == 0 {
                            break;
                        }
                        t -= 1;
                        choice[t] += 1;
                        if choice[t] < nonzero.len() {
                            break;
                        }
                        choice[t] = 0;
                        if t == 0 {
                            t = usize::MAX;
                            break;
                        }
                    }
                    if t == usize::MAX || w == 0 {
                        break;
                    }
                }
            }
        }
        None
    }
}

fn finalize(code: PfCode) -> Result<PfCode, BuildError> {
    if code.validate().phase_ok {
        Ok(code)
    } else {
        Ok(code.canonical_phases()?)
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|i| i * i <= p).all(|i| p % i != 0)
}

/// Places a 4-mode exponent pattern on site `site` of a `num_modes` system.
fn site_operator(modulus: u64, num_modes: usize, site: usize, pattern: [i64; 4]) -> Result<PfOperator, PfError> {
    let mut alpha = vec![0i64; num_modes];
    alpha[4 * site..4 * site + 4].copy_from_slice(&pattern);
    PfOperator::from_signed(modulus, 0, &alpha)
}

/// `prod_i ops[i]^{exps[i]}` in order, with exponents taken mod D.
fn ordered_product(identity: PfOperator, factors: &[(PfOperator, i64)]) -> PfOperator {
    factors.iter().fold(identity, |acc, (op, e)| {
        let e = reduce_i128(*e as i128, op.modulus());
        acc.multiply(&op.pow(e)).expect("same group")
    })
}

/// The chain code whose stabilizers are the bond terms `g_{2j}^dagger g_{2j+1}`,
/// `j = 1..n-1`, on `2n` modes.
pub fn build_clock_chain(modulus: u64, n: usize) -> Result<PfCode, BuildError> {
    if n < 2 {
        return Err(BuildError::Parameter(format!("chain needs n >= 2, got {n}")));
    }
    let m = 2 * n;
    let gens = (1..n)
        .map(|j| {
            let mut alpha = vec![0u64; m];
            alpha[2 * j - 1] = modulus - 1;
            alpha[2 * j] = 1;
            PfOperator::new(modulus, 0, alpha)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PfCode::new(modulus, m, gens)?.canonical_phases()?)
}

/// End-mode logicals of the chain: `g_1`, `g_2n`, and the parity-preserving
/// combinations `g_1^dagger g_2n` and `g_1 g_2n^dagger`.
pub fn clock_chain_logicals(modulus: u64, n: usize) -> Result<[PfOperator; 4], BuildError> {
    let m = 2 * n;
    let g1 = PfOperator::mode(modulus, m, 1, 1)?;
    let gl = PfOperator::mode(modulus, m, m, 1)?;
    let a = g1.inverse().multiply(&gl)?;
    let b = g1.multiply(&gl.inverse())?;
    Ok([g1, gl, a, b])
}

/// Site operators of the four-mode qudit embedding: `(X, Z, Q)` exponent patterns.
pub const EMBED_X: [i64; 4] = [-1, 0, 1, 0];
pub const EMBED_Z: [i64; 4] = [-1, 1, 0, 0];
pub const EMBED_Q: [i64; 4] = [-1, 1, -1, 1];

/// Embedded `X~_site` and `Z~_site` on `4 * num_qudits` modes (0-based site).
pub fn embedded_weyl(modulus: u64, num_qudits: usize, site: usize) -> Result<(PfOperator, PfOperator), BuildError> {
    let m = 4 * num_qudits;
    Ok((
        site_operator(modulus, m, site, EMBED_X)?,
        site_operator(modulus, m, site, EMBED_Z)?,
    ))
}

/// Maps an `n`-qudit code onto `4n` parafermion modes, four modes per qudit.
///
/// Generators are the site stabilizers `Q~_j` followed by every check row
/// mapped to `prod_j X~_j^{x_j} Z~_j^{z_j}`.
pub fn embed_qudit_code(q: &QuditCheckMatrix) -> Result<PfCode, BuildError> {
    q.check_commuting()?;
    let d = q.modulus();
    let n = q.num_qudits();
    if n == 0 {
        return Err(BuildError::Parameter("qudit code has no qudits".into()));
    }
    let m = 4 * n;
    let mut gens = (0..n)
        .map(|j| site_operator(d, m, j, EMBED_Q))
        .collect::<Result<Vec<_>, _>>()?;
    let sites = (0..n)
        .map(|j| embedded_weyl(d, n, j))
        .collect::<Result<Vec<_>, _>>()?;
    for row in q.rows() {
        let mut factors = Vec::with_capacity(2 * n);
        for (j, (x, z)) in sites.iter().enumerate() {
            factors.push((x.clone(), row.x[j] as i64));
            factors.push((z.clone(), row.z[j] as i64));
        }
        gens.push(ordered_product(PfOperator::identity(d, m)?, &factors));
    }
    finalize(PfCode::new(d, m, gens)?)
}

/// CSS check matrix `(S Lambda, 0; 0, S)` on `2n` qudits.
pub fn double_to_css(code: &PfCode) -> Result<QuditCheckMatrix, BuildError> {
    code.require_valid()?;
    let m = code.num_modes();
    let s = code.stabilizer_matrix();
    let check = code.check_matrix();
    let mut rows = Vec::with_capacity(2 * s.rows());
    for r in check.row_iter() {
        rows.push(QuditRow {
            x: r.to_vec(),
            z: vec![0; m],
        });
    }
    for r in s.row_iter() {
        rows.push(QuditRow {
            x: vec![0; m],
            z: r.to_vec(),
        });
    }
    QuditCheckMatrix::new(code.modulus(), m, rows)
}

/// Reads a D=3 operator's doubled exponents as an element of PF(6, 2n).
pub fn lift_doubled(op3: &PfOperator) -> Result<PfOperator, BuildError> {
    if op3.modulus() != 3 {
        return Err(BuildError::WrongModulus {
            expected: 3,
            found: op3.modulus(),
        });
    }
    let alpha: Vec<u64> = op3.alpha().iter().map(|&a| (2 * a) % 6).collect();
    Ok(PfOperator::new(6, 0, alpha)?)
}

/// Doubles a D=3 code into PF(6, 2n): cube pairs `g_{2j-1}^3 g_{2j}^3`
/// followed by the squares of the original generators.
pub fn double_code_d6(code3: &PfCode) -> Result<PfCode, BuildError> {
    if code3.modulus() != 3 {
        return Err(BuildError::WrongModulus {
            expected: 3,
            found: code3.modulus(),
        });
    }
    let m = code3.num_modes();
    let mut gens = Vec::new();
    for j in 0..m / 2 {
        let mut alpha = vec![0u64; m];
        alpha[2 * j] = 3;
        alpha[2 * j + 1] = 3;
        gens.push(PfOperator::new(6, 0, alpha)?);
    }
    for g in code3.generators() {
        gens.push(lift_doubled(g)?);
    }
    Ok(PfCode::new(6, m, gens)?.canonical_phases()?)
}

/// Parameters of the parafermion toric code: `D = p^(2l)` on an `a x b` torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricSpec {
    pub p: u64,
    pub l: u32,
    pub a: usize,
    pub b: usize,
}

impl ToricSpec {
    pub fn modulus(&self) -> Result<u64, BuildError> {
        self.p
            .checked_pow(2 * self.l)
            .ok_or_else(|| BuildError::Toric("p^(2l) overflows".into()))
    }

    /// `p^l`, the charge of a single embedded `X~` or `Z~`.
    pub fn root(&self) -> u64 {
        self.p.pow(self.l)
    }

    pub fn num_qudits(&self) -> usize {
        2 * self.a * self.b
    }

    pub fn num_modes(&self) -> usize {
        8 * self.a * self.b
    }

    /// Qudit index of the horizontal edge leaving vertex `(x, y)` eastwards.
    pub fn h_edge(&self, x: usize, y: usize) -> usize {
        (y % self.b) * 2 * self.a + (x % self.a)
    }

    /// Qudit index of the vertical edge leaving vertex `(x, y)` northwards.
    pub fn v_edge(&self, x: usize, y: usize) -> usize {
        (y % self.b) * 2 * self.a + self.a + (x % self.a)
    }

    /// Star at vertex `(x, y)`: `(qudit, sign)` for east, west, north, south edges.
    pub fn star(&self, x: usize, y: usize) -> [(usize, i64); 4] {
        let (a, b) = (self.a, self.b);
        [
            (self.h_edge(x, y), 1),
            (self.h_edge(x + a - 1, y), -1),
            (self.v_edge(x, y), 1),
            (self.v_edge(x, y + b - 1), -1),
        ]
    }

    /// Plaquette with lower-left vertex `(x, y)`: south, east, north, west edges.
    pub fn plaquette(&self, x: usize, y: usize) -> [(usize, i64); 4] {
        [
            (self.h_edge(x, y), 1),
            (self.v_edge(x + 1, y), 1),
            (self.h_edge(x, y + 1), -1),
            (self.v_edge(x, y), -1),
        ]
    }

    /// Doubled lattice coordinates of a qudit: edges sit between vertices.
    pub fn qudit_coords(&self, q: usize) -> [i64; 2] {
        let y = q / (2 * self.a);
        let r = q % (2 * self.a);
        if r < self.a {
            [2 * r as i64 + 1, 2 * y as i64]
        } else {
            [2 * (r - self.a) as i64, 2 * y as i64 + 1]
        }
    }
}

/// A toric code with its loop logicals.
#[derive(Clone, Debug)]
pub struct ToricCode {
    pub spec: ToricSpec,
    pub code: PfCode,
    /// All star operators (including the dependent one that is not a generator).
    pub stars: Vec<PfOperator>,
    pub plaquettes: Vec<PfOperator>,
    pub horizontal: Vec<PfOperator>,
    pub vertical: Vec<PfOperator>,
}

/// Site patterns for the toric embedding with `r = p^l`:
/// `X~ = g1^{r-1} g3`, `Z~ = g1^{r-1} g2`, and the unique (up to powers)
/// charge-zero four-mode operator commuting with both,
/// `Q~ = g1^{-1} g2^{r+1} g3^{-(r+1)} g4`.
pub fn toric_site_patterns(root: u64) -> ([i64; 4], [i64; 4], [i64; 4]) {
    let r = root as i64;
    ([r - 1, 0, 1, 0], [r - 1, 1, 0, 0], [-1, r + 1, -(r + 1), 1])
}

pub fn build_toric(spec: ToricSpec) -> Result<ToricCode, BuildError> {
    if !is_prime(spec.p) {
        return Err(BuildError::NotPrime(spec.p));
    }
    if spec.l == 0 {
        return Err(BuildError::Toric("l must be at least 1".into()));
    }
    if spec.a < 2 || spec.b < 2 {
        return Err(BuildError::Toric(format!(
            "lattice sides must be at least 2, got {} x {}",
            spec.a, spec.b
        )));
    }
    let d = spec.modulus()?;
    let nq = spec.num_qudits();
    let m = spec.num_modes();
    let (xp, zp, qp) = toric_site_patterns(spec.root());
    let xs = (0..nq)
        .map(|j| site_operator(d, m, j, xp))
        .collect::<Result<Vec<_>, _>>()?;
    let zs = (0..nq)
        .map(|j| site_operator(d, m, j, zp))
        .collect::<Result<Vec<_>, _>>()?;
    let id = PfOperator::identity(d, m)?;

    let mut stars = Vec::with_capacity(spec.a * spec.b);
    let mut plaquettes = Vec::with_capacity(spec.a * spec.b);
    for y in 0..spec.b {
        for x in 0..spec.a {
            let f: Vec<(PfOperator, i64)> = spec.star(x, y).iter().map(|&(q, s)| (xs[q].clone(), s)).collect();
            stars.push(ordered_product(id.clone(), &f));
            let f: Vec<(PfOperator, i64)> = spec
                .plaquette(x, y)
                .iter()
                .map(|&(q, s)| (zs[q].clone(), s))
                .collect();
            plaquettes.push(ordered_product(id.clone(), &f));
        }
    }
    for (i, s) in stars.iter().enumerate() {
        for (j, p) in plaquettes.iter().enumerate() {
            if !s.commutes_with(p)? {
                return Err(BuildError::Toric(format!("star {i} and plaquette {j} do not commute")));
            }
        }
    }

    let mut gens = (0..nq)
        .map(|j| site_operator(d, m, j, qp))
        .collect::<Result<Vec<_>, _>>()?;
    gens.extend(stars[..stars.len() - 1].iter().cloned());
    gens.extend(plaquettes[..plaquettes.len() - 1].iter().cloned());
    let layout = ModeLayout::new(
        (0..m)
            .map(|mode| spec.qudit_coords(mode / 4).to_vec())
            .collect(),
    )?;
    let code = finalize(PfCode::new(d, m, gens)?.with_layout(layout)?)?;

    // Loop families: horizontal loops live on one row of edges, vertical loops
    // on one column. Each family is solved for centralizer elements supported
    // there and reduced modulo the stabilizer.
    let row_h: Vec<usize> = (0..spec.a).map(|x| spec.h_edge(x, 0)).collect();
    let row_v: Vec<usize> = (0..spec.a).map(|x| spec.v_edge(x, 0)).collect();
    let col_v: Vec<usize> = (0..spec.b).map(|y| spec.v_edge(0, y)).collect();
    let col_h: Vec<usize> = (0..spec.b).map(|y| spec.h_edge(0, y)).collect();
    let mut horizontal = supported_logicals(&code, &row_h)?;
    horizontal.extend(supported_logicals(&code, &row_v)?);
    let mut vertical = supported_logicals(&code, &col_v)?;
    vertical.extend(supported_logicals(&code, &col_h)?);

    Ok(ToricCode {
        spec,
        code,
        stars,
        plaquettes,
        horizontal,
        vertical,
    })
}

/// Generators of the logicals supported on the given qudits (four modes each),
/// independent modulo the stabilizer and each other.
pub fn supported_logicals(code: &PfCode, qudits: &[usize]) -> Result<Vec<PfOperator>, BuildError> {
    let d = code.modulus();
    let m = code.num_modes();
    let modes: Vec<usize> = qudits.iter().flat_map(|&q| 4 * q..4 * q + 4).collect();
    let check = code.check_matrix();
    let rows: Vec<Vec<u64>> = modes
        .iter()
        .map(|&mode| (0..check.rows()).map(|g| check.get(g, mode)).collect())
        .collect();
    let system = ZModMatrix::from_rows(d, check.rows(), &rows)?;
    let stab = code.stabilizer_matrix();
    let mut span_rows = stab.to_rows();
    let mut span = stab.howell();
    let mut out = Vec::new();
    for x in system.kernel_basis().howell_form().row_iter() {
        let mut alpha = vec![0u64; m];
        for (&mode, &v) in modes.iter().zip(x) {
            alpha[mode] = v;
        }
        if span.contains(&alpha)? {
            continue;
        }
        span_rows.push(alpha.clone());
        span = ZModMatrix::from_rows(d, m, &span_rows)?.howell();
        out.push(PfOperator::new(d, 0, alpha)?);
    }
    Ok(out)
}

/// The 8-mode D=3 code with generators `g1^-1 g2 g4^-1 g6`, `g2^-1 g3 g5^-1 g7`,
/// `g3^-1 g4 g6^-1 g8`.
pub fn code_8_1_3_d3() -> PfCode {
    let rows: [[i64; 8]; 3] = [
        [-1, 1, 0, -1, 0, 1, 0, 0],
        [0, -1, 1, 0, -1, 0, 1, 0],
        [0, 0, -1, 1, 0, -1, 0, 1],
    ];
    signed_code(3, &rows)
}

/// The 6-mode D=7 code with generators `g1 g2 g5^5` and `g1 g4^5 g6`.
pub fn code_6_1_3_d7() -> PfCode {
    let rows: [[i64; 6]; 2] = [[1, 1, 0, 0, 5, 0], [1, 0, 0, 5, 0, 1]];
    signed_code(7, &rows)
}

fn signed_code<const M: usize>(modulus: u64, rows: &[[i64; M]]) -> PfCode {
    let gens = rows
        .iter()
        .map(|r| PfOperator::from_signed(modulus, 0, r).expect("valid exponents"))
        .collect();
    PfCode::new(modulus, M, gens)
        .and_then(|c| c.canonical_phases())
        .expect("known code")
}

/// The cyclic five-qudit code with checks `X Z Z^-1 X^-1 I` and its shifts.
pub fn five_qudit_code(modulus: u64) -> Result<QuditCheckMatrix, BuildError> {
    let x = [1i64, 0, 0, -1, 0];
    let z = [0i64, 1, -1, 0, 0];
    let rows: Vec<(Vec<i64>, Vec<i64>)> = (0..4)
        .map(|s| {
            let rot = |v: &[i64; 5]| (0..5).map(|i| v[(i + 5 - s) % 5]).collect();
            (rot(&x), rot(&z))
        })
        .collect();
    let q = QuditCheckMatrix::from_signed(modulus, &rows)?;
    q.check_commuting()?;
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn majorana_chain_gets_phase_i() {
        let c = build_clock_chain(2, 2).unwrap();
        assert_eq!(c.generators().len(), 1);
        let g = &c.generators()[0];
        assert_eq!(g.alpha(), &[0, 1, 1, 0]);
        assert_eq!(g.mu(), 1);
        assert!(c.validate().is_valid());
        assert_eq!(c.logical_qudits().unwrap(), Some(1));
    }

    #[test]
    fn chain_logicals_are_parity_preserving_pairs() {
        let [g1, gl, a, b] = clock_chain_logicals(3, 4).unwrap();
        assert_eq!(g1.charge(), 1);
        assert_eq!(gl.charge(), 1);
        assert_eq!(a.charge(), 0);
        assert_eq!(b.charge(), 0);
        let c = build_clock_chain(3, 4).unwrap();
        for op in [&g1, &gl, &a, &b] {
            assert!(c.is_logical(op).unwrap());
        }
    }

    #[test]
    fn chain_rejects_short() {
        assert!(matches!(build_clock_chain(3, 1), Err(BuildError::Parameter(_))));
    }

    #[test]
    fn embedded_site_algebra() {
        for d in 2..=7u64 {
            let (x1, z1) = embedded_weyl(d, 2, 0).unwrap();
            let (x2, z2) = embedded_weyl(d, 2, 1).unwrap();
            // Z X = w X Z on the same site, commuting across sites
            assert_eq!(z1.commutation_exponent(&x1).unwrap(), 1);
            assert_eq!(z1.commutation_exponent(&x2).unwrap(), 0);
            assert_eq!(x1.commutation_exponent(&z2).unwrap(), 0);
            assert_eq!(x1.commutation_exponent(&x2).unwrap(), 0);
            assert!(x1.pow(d).is_scalar());
            assert!(z2.pow(d).is_scalar());
            assert_eq!(x1.charge(), 0);
            assert_eq!(z1.charge(), 0);
        }
    }

    #[test]
    fn single_qudit_embedding() {
        let q = QuditCheckMatrix::new(3, 1, vec![]).unwrap();
        let c = embed_qudit_code(&q).unwrap();
        assert_eq!(c.num_modes(), 4);
        assert_eq!(c.generators().len(), 1);
        assert_eq!(c.generators()[0].alpha(), &[2, 1, 2, 1]);
        assert_eq!(c.codespace_dim().unwrap(), 3);
        let (x, z) = embedded_weyl(3, 1, 0).unwrap();
        assert!(c.is_logical(&x).unwrap());
        assert!(c.is_logical(&z).unwrap());
    }

    #[test]
    fn embedding_rejects_noncommuting_rows() {
        let q = QuditCheckMatrix::from_signed(3, &[(vec![1], vec![0]), (vec![0], vec![1])]).unwrap();
        assert_eq!(embed_qudit_code(&q), Err(BuildError::NonCommutingRows(0, 1)));
    }

    #[test]
    fn toric_site_patterns_commute() {
        for (p, l) in [(2u64, 1u32), (3, 1), (2, 2)] {
            let r = p.pow(l);
            let d = r * r;
            let (xp, zp, qp) = toric_site_patterns(r);
            let mk = |pat: [i64; 4]| PfOperator::from_signed(d, 0, &pat).unwrap();
            let (x, z, q) = (mk(xp), mk(zp), mk(qp));
            assert_eq!(z.commutation_exponent(&x).unwrap(), 1);
            assert_eq!(q.commutation_exponent(&x).unwrap(), 0);
            assert_eq!(q.commutation_exponent(&z).unwrap(), 0);
            assert_eq!(q.charge(), 0);
            assert_eq!(x.charge(), r % d);
        }
    }

    #[test]
    fn toric_rejects_bad_parameters() {
        assert!(matches!(
            build_toric(ToricSpec { p: 4, l: 1, a: 2, b: 2 }),
            Err(BuildError::NotPrime(4))
        ));
        assert!(matches!(
            build_toric(ToricSpec { p: 2, l: 1, a: 1, b: 2 }),
            Err(BuildError::Toric(_))
        ));
        assert!(matches!(
            build_toric(ToricSpec { p: 2, l: 0, a: 2, b: 2 }),
            Err(BuildError::Toric(_))
        ));
    }

    #[test]
    fn d6_doubling_requires_d3() {
        let c = build_clock_chain(5, 2).unwrap();
        assert!(matches!(double_code_d6(&c), Err(BuildError::WrongModulus { .. })));
    }

    #[test]
    fn qudit_distance_of_repetition_like_code() {
        // Z1 Z2^-1 on two qutrits: X1 X2 is logical with weight 2, Z1 has weight 1.
        let q = QuditCheckMatrix::from_signed(3, &[(vec![0, 0], vec![1, -1])]).unwrap();
        let (w, op) = q.distance(2).unwrap();
        assert_eq!(w, 1);
        assert_eq!(op.x.iter().chain(&op.z).filter(|&&e| e != 0).count(), 1);
        assert_eq!(q.logical_qudits().unwrap(), Some(1));
    }
}
