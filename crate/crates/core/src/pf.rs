//! Phase-tracked arithmetic in the parafermion group PF(D, 2n).
//!
//! An element is `w2^mu * g_1^a_1 * ... * g_2n^a_2n` in normal order, where
//! `w2 = exp(i*pi/D)` is a primitive 2D-th root of unity, so the parafermion
//! root `w = exp(2*pi*i/D)` is `w2^2`. Modes obey `g_j^D = 1` and
//! `g_j g_k = w g_k g_j` for `j < k`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::zmod::{reduce_i128, ZModMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PfError {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("number of modes must be even and at least 2, got {0}")]
    InvalidModeCount(usize),
    #[error("phase exponent {mu} out of range for modulus {modulus} (must be < {})", 2 * modulus)]
    PhaseOutOfRange { mu: u64, modulus: u64 },
    #[error("exponent {value} at mode {mode} out of range for modulus {modulus}")]
    ExponentOutOfRange { mode: usize, value: u64, modulus: u64 },
    #[error("operators live in different groups: PF({0}, {1}) vs PF({2}, {3})")]
    Mismatch(u64, usize, u64, usize),
    #[error("mode index {index} outside 1..={num_modes}")]
    ModeOutOfRange { index: usize, num_modes: usize },
    #[error("cannot parse operator: {0}")]
    Parse(String),
}

/// An element of PF(D, 2n).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PfOperator {
    modulus: u64,
    mu: u64,
    alpha: Vec<u64>,
}

fn check_group(modulus: u64, num_modes: usize) -> Result<(), PfError> {
    if modulus < 2 {
        return Err(PfError::InvalidModulus(modulus));
    }
    if num_modes < 2 || num_modes % 2 != 0 {
        return Err(PfError::InvalidModeCount(num_modes));
    }
    Ok(())
}

impl PfOperator {
    pub fn new(modulus: u64, mu: u64, alpha: Vec<u64>) -> Result<Self, PfError> {
        check_group(modulus, alpha.len())?;
        if mu >= 2 * modulus {
            return Err(PfError::PhaseOutOfRange { mu, modulus });
        }
        if let Some((i, &value)) = alpha.iter().enumerate().find(|(_, &a)| a >= modulus) {
            return Err(PfError::ExponentOutOfRange {
                mode: i + 1,
                value,
                modulus,
            });
        }
        Ok(Self { modulus, mu, alpha })
    }

    /// Builds an operator from signed exponents, reducing everything.
    pub fn from_signed(modulus: u64, mu: i64, alpha: &[i64]) -> Result<Self, PfError> {
        check_group(modulus, alpha.len())?;
        Ok(Self {
            modulus,
            mu: reduce_i128(mu as i128, 2 * modulus),
            alpha: alpha.iter().map(|&a| reduce_i128(a as i128, modulus)).collect(),
        })
    }

    pub fn identity(modulus: u64, num_modes: usize) -> Result<Self, PfError> {
        check_group(modulus, num_modes)?;
        Ok(Self {
            modulus,
            mu: 0,
            alpha: vec![0; num_modes],
        })
    }

    /// `g_index^exponent` with a 1-based mode index.
    pub fn mode(modulus: u64, num_modes: usize, index: usize, exponent: i64) -> Result<Self, PfError> {
        let mut op = Self::identity(modulus, num_modes)?;
        if index == 0 || index > num_modes {
            return Err(PfError::ModeOutOfRange { index, num_modes });
        }
        op.alpha[index - 1] = reduce_i128(exponent as i128, modulus);
        Ok(op)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn num_modes(&self) -> usize {
        self.alpha.len()
    }

    pub fn mu(&self) -> u64 {
        self.mu
    }

    pub fn alpha(&self) -> &[u64] {
        &self.alpha
    }

    pub fn with_phase(&self, mu: u64) -> Self {
        Self {
            modulus: self.modulus,
            mu: mu % (2 * self.modulus),
            alpha: self.alpha.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.mu == 0 && self.alpha.iter().all(|&a| a == 0)
    }

    /// True when the exponent vector vanishes (the operator is a pure phase).
    pub fn is_scalar(&self) -> bool {
        self.alpha.iter().all(|&a| a == 0)
    }

    fn check_same_group(&self, other: &Self) -> Result<(), PfError> {
        if self.modulus != other.modulus || self.alpha.len() != other.alpha.len() {
            return Err(PfError::Mismatch(
                self.modulus,
                self.alpha.len(),
                other.modulus,
                other.alpha.len(),
            ));
        }
        Ok(())
    }

    /// `c` such that `self * other = w^c * other * self`.
    pub fn commutation_exponent(&self, other: &Self) -> Result<u64, PfError> {
        self.check_same_group(other)?;
        Ok(commutation(&self.alpha, &other.alpha, self.modulus))
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool, PfError> {
        Ok(self.commutation_exponent(other)? == 0)
    }

    /// Normal-ordered product `self * other`.
    pub fn multiply(&self, other: &Self) -> Result<Self, PfError> {
        self.check_same_group(other)?;
        let d = self.modulus;
        let s = reorder_count(&self.alpha, &other.alpha);
        let two_d = 2 * d as i128;
        let mu = (self.mu as i128 + other.mu as i128 - 2 * s).rem_euclid(two_d) as u64;
        let alpha = self
            .alpha
            .iter()
            .zip(&other.alpha)
            .map(|(&a, &b)| (a + b) % d)
            .collect();
        Ok(Self {
            modulus: d,
            mu,
            alpha,
        })
    }

    pub fn inverse(&self) -> Self {
        let d = self.modulus;
        let neg: Vec<u64> = self.alpha.iter().map(|&a| (d - a) % d).collect();
        let s = reorder_count(&self.alpha, &neg);
        let mu = (2 * s - self.mu as i128).rem_euclid(2 * d as i128) as u64;
        Self {
            modulus: d,
            mu,
            alpha: neg,
        }
    }

    pub fn pow(&self, exponent: u64) -> Self {
        let mut result = Self {
            modulus: self.modulus,
            mu: 0,
            alpha: vec![0; self.alpha.len()],
        };
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                result = result.multiply(&base).expect("same group");
            }
            e >>= 1;
            if e > 0 {
                base = base.multiply(&base).expect("same group");
            }
        }
        result
    }

    /// Z_D charge: the sum of exponents. Zero iff the operator preserves parity.
    pub fn charge(&self) -> u64 {
        charge(&self.alpha, self.modulus)
    }

    pub fn weight(&self) -> usize {
        self.alpha.iter().filter(|&&a| a != 0).count()
    }

    /// 1-based indices of the modes acted on.
    pub fn support(&self) -> Vec<usize> {
        support(&self.alpha)
    }

    /// Index span `max - min + 1` of the support; 0 for scalars.
    pub fn diameter(&self) -> usize {
        let s = self.support();
        match (s.first(), s.last()) {
            (Some(lo), Some(hi)) => hi - lo + 1,
            _ => 0,
        }
    }

    /// Parses the text form written by `Display`, e.g. `w^3 g1^2 g2 g6`.
    ///
    /// Factors are multiplied left to right, so out-of-order input such as
    /// `g2 g1` is normal-ordered with the corresponding phase. Exponents may
    /// be negative; `1` or an empty string denotes the identity.
    pub fn parse(text: &str, modulus: u64, num_modes: usize) -> Result<Self, PfError> {
        let mut acc = Self::identity(modulus, num_modes)?;
        for token in text.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
            if token == "1" {
                continue;
            }
            let (base, exp) = match token.split_once('^') {
                Some((b, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| PfError::Parse(format!("bad exponent in `{token}`")))?;
                    (b, e)
                }
                None => (token, 1),
            };
            let factor = if base == "w" {
                let mut op = Self::identity(modulus, num_modes)?;
                op.mu = reduce_i128(exp as i128, 2 * modulus);
                op
            } else if let Some(idx) = base.strip_prefix('g') {
                let index: usize = idx
                    .parse()
                    .map_err(|_| PfError::Parse(format!("bad mode index in `{token}`")))?;
                Self::mode(modulus, num_modes, index, exp)?
            } else {
                return Err(PfError::Parse(format!("unknown factor `{token}`")));
            };
            acc = acc.multiply(&factor)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for PfOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.mu {
            0 => {}
            1 => parts.push("w".to_string()),
            m => parts.push(format!("w^{m}")),
        }
        for (i, &a) in self.alpha.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(format!("g{}", i + 1)),
                a => parts.push(format!("g{}^{}", i + 1, a)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

impl fmt::Debug for PfOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PfOperator(D={}: {})", self.modulus, self)
    }
}

/// `sum_{i > j} a_i b_j` as an exact integer: the number of elementary swaps
/// needed to bring `g^a g^b` into normal order.
fn reorder_count(a: &[u64], b: &[u64]) -> i128 {
    let mut prefix_b: i128 = 0;
    let mut s: i128 = 0;
    for (&ai, &bi) in a.iter().zip(b) {
        s += ai as i128 * prefix_b;
        prefix_b += bi as i128;
    }
    s
}

/// `a Lambda b^T mod d` with `Lambda_ij = sgn(j - i)`, in linear time.
pub fn commutation(a: &[u64], b: &[u64], d: u64) -> u64 {
    let total_b: i128 = b.iter().map(|&x| x as i128).sum();
    let mut before: i128 = 0;
    let mut c: i128 = 0;
    for (&ai, &bi) in a.iter().zip(b) {
        let after = total_b - before - bi as i128;
        c += ai as i128 * (after - before);
        before += bi as i128;
    }
    reduce_i128(c, d)
}

pub fn charge(alpha: &[u64], d: u64) -> u64 {
    (alpha.iter().map(|&a| a as u128).sum::<u128>() % d as u128) as u64
}

pub fn support(alpha: &[u64]) -> Vec<usize> {
    alpha
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .map(|(i, _)| i + 1)
        .collect()
}

/// The antisymmetric form `Lambda_ij = sgn(j - i)` with -1 stored as D-1.
pub fn lambda_matrix(modulus: u64, num_modes: usize) -> ZModMatrix {
    let mut m = ZModMatrix::zeros(modulus, num_modes, num_modes);
    for i in 0..num_modes {
        for j in 0..num_modes {
            if j > i {
                m.set(i, j, 1);
            } else if j < i {
                m.set(i, j, modulus - 1);
            }
        }
    }
    m
}

/// `alpha * Lambda` as a residue row.
pub fn lambda_row(alpha: &[u64], d: u64) -> Vec<u64> {
    // (alpha Lambda)_j = sum_{i<j} alpha_i - sum_{i>j} alpha_i
    let total: i128 = alpha.iter().map(|&x| x as i128).sum();
    let mut before: i128 = 0;
    alpha
        .iter()
        .map(|&a| {
            let after = total - before - a as i128;
            let v = reduce_i128(before - after, d);
            before += a as i128;
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(d: u64, mu: u64, alpha: &[u64]) -> PfOperator {
        PfOperator::new(d, mu, alpha.to_vec()).unwrap()
    }

    #[test]
    fn defining_relation_exponent() {
        let g1 = PfOperator::mode(3, 4, 1, 1).unwrap();
        let g2 = PfOperator::mode(3, 4, 2, 1).unwrap();
        assert_eq!(g1.commutation_exponent(&g2).unwrap(), 1);
        assert_eq!(g2.commutation_exponent(&g1).unwrap(), 2);
        assert_eq!(g1.commutation_exponent(&g1).unwrap(), 0);
    }

    #[test]
    fn eight_mode_generators_commute() {
        let a = op(3, 0, &[2, 1, 0, 2, 0, 1, 0, 0]);
        let b = op(3, 0, &[0, 2, 1, 0, 2, 0, 1, 0]);
        assert_eq!(a.commutation_exponent(&b).unwrap(), 0);
    }

    #[test]
    fn one_swap_product() {
        let g1 = PfOperator::mode(3, 4, 1, 1).unwrap();
        let g2 = PfOperator::mode(3, 4, 2, 1).unwrap();
        let p = g2.multiply(&g1).unwrap();
        assert_eq!(p, op(3, 4, &[1, 1, 0, 0]));
        let id = PfOperator::identity(3, 4).unwrap();
        assert_eq!(id.multiply(&g2).unwrap(), g2);
    }

    #[test]
    fn inverse_and_power() {
        let g1 = PfOperator::mode(3, 4, 1, 1).unwrap();
        assert_eq!(g1.inverse(), op(3, 0, &[2, 0, 0, 0]));
        assert!(g1.pow(3).is_identity());
        assert!(g1.pow(0).is_identity());
        let id = PfOperator::identity(3, 4).unwrap();
        assert_eq!(id.inverse(), id);
        let a = op(3, 0, &[2, 1, 0, 2, 0, 1, 0, 0]);
        assert_eq!(a.pow(2), a.multiply(&a).unwrap());
        assert!(a.multiply(&a.inverse()).unwrap().is_identity());
    }

    #[test]
    fn charge_weight_support_diameter() {
        assert_eq!(op(3, 0, &[2, 1, 0, 2, 0, 1, 0, 0]).charge(), 0);
        let l = op(3, 0, &[0, 2, 2, 0, 0, 1, 0, 0]);
        assert_eq!(l.charge(), 2);
        assert_eq!(l.weight(), 3);
        assert_eq!(l.support(), vec![2, 3, 6]);
        assert_eq!(l.diameter(), 5);
        let id = PfOperator::identity(3, 8).unwrap();
        assert_eq!((id.weight(), id.diameter(), id.charge()), (0, 0, 0));
        assert_eq!(op(3, 0, &[1, 0, 0, 0, 0, 0, 0, 1]).diameter(), 8);
    }

    #[test]
    fn text_round_trip() {
        let a = op(5, 3, &[2, 1, 0, 0, 0, 4]);
        assert_eq!(a.to_string(), "w^3 g1^2 g2 g6^4");
        assert_eq!(PfOperator::parse(&a.to_string(), 5, 6).unwrap(), a);
        assert_eq!(PfOperator::parse("1", 5, 6).unwrap().to_string(), "1");
        assert_eq!(PfOperator::parse("g1^-1", 5, 6).unwrap(), op(5, 0, &[4, 0, 0, 0, 0, 0]));
        // out-of-order factors pick up the reordering phase
        assert_eq!(PfOperator::parse("g2 g1", 3, 4).unwrap(), op(3, 4, &[1, 1, 0, 0]));
        assert!(PfOperator::parse("x3", 3, 4).is_err());
        assert!(PfOperator::parse("g9", 3, 4).is_err());
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(PfOperator::new(3, 0, vec![0; 3]), Err(PfError::InvalidModeCount(3))));
        assert!(matches!(PfOperator::new(3, 6, vec![0; 2]), Err(PfError::PhaseOutOfRange { .. })));
        assert!(matches!(PfOperator::new(3, 0, vec![3, 0]), Err(PfError::ExponentOutOfRange { .. })));
        let a = PfOperator::identity(3, 4).unwrap();
        let b = PfOperator::identity(5, 4).unwrap();
        assert!(a.multiply(&b).is_err());
    }

    #[test]
    fn lambda_row_matches_matrix() {
        let alpha = [2u64, 1, 0, 2, 0, 1, 0, 0];
        let lam = lambda_matrix(3, 8);
        assert_eq!(lambda_row(&alpha, 3), lam.left_mul_vec(&alpha).unwrap());
        for i in 0..8 {
            assert_eq!(lam.get(i, i), 0);
            for j in 0..8 {
                assert_eq!((lam.get(i, j) + lam.get(j, i)) % 3, 0);
            }
        }
    }
}
