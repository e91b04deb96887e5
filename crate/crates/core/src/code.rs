//! Parafermion stabilizer codes: validation, group and codespace orders,
//! centralizer and logical operators, distance, `l_con` and syndromes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distance::LogicalFinder;
use crate::pf::{self, lambda_row, PfError, PfOperator};
use crate::zmod::{reduce_i128, ZModError, ZModMatrix};

/// Default ceiling on the mode count for which a full distance search runs
/// without an explicit weight cap.
pub const FULL_SEARCH_MODES: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error(transparent)]
    Pf(#[from] PfError),
    #[error(transparent)]
    ZMod(#[from] ZModError),
    #[error("invalid stabilizer code: {0}")]
    Invalid(Validity),
    #[error("codespace dimension is not integral: D^n = {power} is not divisible by |S| = {order}")]
    NonIntegral { power: u128, order: u128 },
    #[error("D^n overflows 128 bits")]
    Overflow,
    #[error("code has {num_modes} modes; an explicit weight cap is required above {FULL_SEARCH_MODES}")]
    CapRequired { num_modes: usize },
    #[error("code encodes nothing: there are no logical operators")]
    NoLogicals,
    #[error("no consistent phase assignment exists for these generators")]
    NoPhaseAssignment,
    #[error("bad mode layout: {0}")]
    Layout(String),
}

/// The three defining conditions of a parafermion stabilizer group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validity {
    pub abelian: bool,
    pub parity_ok: bool,
    pub phase_ok: bool,
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        self.abelian && self.parity_ok && self.phase_ok
    }
}

impl std::fmt::Display for Validity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut problems = Vec::new();
        if !self.abelian {
            problems.push("generators do not pairwise commute");
        }
        if !self.parity_ok {
            problems.push("a generator is not parity-preserving (nonzero Z_D charge)");
        }
        if !self.phase_ok {
            problems.push("the group contains a nontrivial multiple of the identity");
        }
        if problems.is_empty() {
            write!(f, "valid")
        } else {
            write!(f, "{}", problems.join("; "))
        }
    }
}

/// Integer coordinates for every mode, used by `l_con`.
///
/// Diameter of a mode set is the Chebyshev extent `max_k (max - min) + 1`
/// of its coordinates, which reduces to the index span on the default chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeLayout {
    coords: Vec<Vec<i64>>,
}

impl ModeLayout {
    pub fn new(coords: Vec<Vec<i64>>) -> Result<Self, CodeError> {
        let dim = coords.first().map_or(1, Vec::len);
        if dim == 0 {
            return Err(CodeError::Layout("coordinates must have at least one axis".into()));
        }
        if coords.iter().any(|c| c.len() != dim) {
            return Err(CodeError::Layout("all coordinates must have the same length".into()));
        }
        Ok(Self { coords })
    }

    pub fn chain(num_modes: usize) -> Self {
        Self {
            coords: (0..num_modes).map(|i| vec![i as i64]).collect(),
        }
    }

    pub fn coords(&self) -> &[Vec<i64>] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.first().map_or(1, Vec::len)
    }

    /// Diameter of a set of 0-based mode indices.
    pub fn diameter(&self, modes: &[usize]) -> usize {
        if modes.is_empty() {
            return 0;
        }
        (0..self.dim())
            .map(|k| {
                let vals = modes.iter().map(|&m| self.coords[m][k]);
                let lo = vals.clone().min().unwrap();
                let hi = vals.max().unwrap();
                (hi - lo) as usize + 1
            })
            .max()
            .unwrap()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistanceOutcome {
    /// Exact minimum weight with the first logical found at that weight.
    Exact { distance: usize, witness: PfOperator },
    /// No logical of weight up to `cap`; the distance is a lower bound.
    AboveCap { cap: usize },
}

impl DistanceOutcome {
    pub fn exact(&self) -> Option<usize> {
        match self {
            Self::Exact { distance, .. } => Some(*distance),
            Self::AboveCap { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LconWitness {
    pub diameter: usize,
    pub witness: PfOperator,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalInfo {
    pub operator: String,
    pub alpha: Vec<u64>,
    pub charge: u64,
    pub weight: usize,
}

impl LogicalInfo {
    fn from_op(op: &PfOperator) -> Self {
        Self {
            operator: op.to_string(),
            alpha: op.alpha().to_vec(),
            charge: op.charge(),
            weight: op.weight(),
        }
    }
}

/// Computed parameters of a valid code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeReport {
    #[serde(rename = "D")]
    pub modulus: u64,
    pub num_modes: usize,
    pub num_generators: usize,
    pub validity: Validity,
    pub group_order: u128,
    pub codespace_dim: u128,
    pub k: Option<u32>,
    pub distance: Option<DistanceOutcome>,
    /// `None` when no parity-conserving logical exists.
    pub l_con: Option<LconWitness>,
    pub geometry: String,
    pub logical_basis: Vec<LogicalInfo>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReportOptions {
    /// Weight cap for the distance search. `None` means a full search, which is
    /// only allowed up to [`FULL_SEARCH_MODES`] modes; larger codes skip distance.
    pub max_weight: Option<usize>,
    pub skip_distance: bool,
    pub parallel: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfCode {
    modulus: u64,
    num_modes: usize,
    generators: Vec<PfOperator>,
    layout: Option<ModeLayout>,
}

impl PfCode {
    pub fn new(modulus: u64, num_modes: usize, generators: Vec<PfOperator>) -> Result<Self, CodeError> {
        // identity() validates (modulus, num_modes)
        PfOperator::identity(modulus, num_modes)?;
        for g in &generators {
            if g.modulus() != modulus || g.num_modes() != num_modes {
                return Err(PfError::Mismatch(modulus, num_modes, g.modulus(), g.num_modes()).into());
            }
        }
        Ok(Self {
            modulus,
            num_modes,
            generators,
            layout: None,
        })
    }

    /// Convenience constructor from exponent rows with zero phases.
    pub fn from_alpha_rows<R: AsRef<[u64]>>(modulus: u64, num_modes: usize, rows: &[R]) -> Result<Self, CodeError> {
        let gens = rows
            .iter()
            .map(|r| PfOperator::new(modulus, 0, r.as_ref().to_vec()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(modulus, num_modes, gens)
    }

    pub fn with_layout(mut self, layout: ModeLayout) -> Result<Self, CodeError> {
        if layout.coords.len() != self.num_modes {
            return Err(CodeError::Layout(format!(
                "layout has {} entries for {} modes",
                layout.coords.len(),
                self.num_modes
            )));
        }
        self.layout = Some(layout);
        Ok(self)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    /// Half the mode count.
    pub fn n(&self) -> usize {
        self.num_modes / 2
    }

    pub fn generators(&self) -> &[PfOperator] {
        &self.generators
    }

    pub fn layout(&self) -> Option<&ModeLayout> {
        self.layout.as_ref()
    }

    /// The matrix whose rows are the generator exponent vectors.
    pub fn stabilizer_matrix(&self) -> ZModMatrix {
        let rows: Vec<&[u64]> = self.generators.iter().map(PfOperator::alpha).collect();
        ZModMatrix::from_rows(self.modulus, self.num_modes, &rows).expect("generators are well formed")
    }

    /// `S * Lambda`: row `j` gives the syndrome contribution of each mode for generator `j`.
    pub fn check_matrix(&self) -> ZModMatrix {
        let rows: Vec<Vec<u64>> = self
            .generators
            .iter()
            .map(|g| lambda_row(g.alpha(), self.modulus))
            .collect();
        ZModMatrix::from_rows(self.modulus, self.num_modes, &rows).expect("residues")
    }

    pub fn validate(&self) -> Validity {
        let d = self.modulus;
        let abelian = self.generators.iter().enumerate().all(|(i, a)| {
            self.generators[i + 1..]
                .iter()
                .all(|b| pf::commutation(a.alpha(), b.alpha(), d) == 0)
        });
        let parity_ok = self.generators.iter().all(|g| g.charge() == 0);
        let powers_ok = self.generators.iter().all(|g| g.pow(d).is_identity());
        let relations_ok = powers_ok
            && self
                .stabilizer_matrix()
                .kernel_basis()
                .row_iter()
                .all(|x| self.relation_product(x).is_identity());
        Validity {
            abelian,
            parity_ok,
            phase_ok: relations_ok,
        }
    }

    /// `prod_i g_i^{x_i}` in generator order.
    fn relation_product(&self, x: &[u64]) -> PfOperator {
        let mut acc = PfOperator::identity(self.modulus, self.num_modes).expect("checked at construction");
        for (g, &e) in self.generators.iter().zip(x) {
            if e != 0 {
                acc = acc.multiply(&g.pow(e)).expect("same group");
            }
        }
        acc
    }

    pub fn require_valid(&self) -> Result<(), CodeError> {
        let v = self.validate();
        if v.is_valid() {
            Ok(())
        } else {
            Err(CodeError::Invalid(v))
        }
    }

    /// `D^n` as an exact integer.
    pub fn full_dimension(&self) -> Result<u128, CodeError> {
        (self.modulus as u128)
            .checked_pow(self.n() as u32)
            .ok_or(CodeError::Overflow)
    }

    pub fn group_order(&self) -> Result<u128, CodeError> {
        self.require_valid()?;
        Ok(self.stabilizer_matrix().howell().order()?)
    }

    pub fn codespace_dim(&self) -> Result<u128, CodeError> {
        let order = self.group_order()?;
        let power = self.full_dimension()?;
        if power % order != 0 {
            return Err(CodeError::NonIntegral { power, order });
        }
        Ok(power / order)
    }

    /// `log_D |C_S|` when it is an integer.
    pub fn logical_qudits(&self) -> Result<Option<u32>, CodeError> {
        Ok(integral_log(self.codespace_dim()?, self.modulus))
    }

    pub fn centralizer_basis(&self) -> Result<ZModMatrix, CodeError> {
        self.require_valid()?;
        Ok(self.check_matrix().transpose().kernel_basis())
    }

    fn check_operator(&self, a: &PfOperator) -> Result<(), CodeError> {
        if a.modulus() != self.modulus || a.num_modes() != self.num_modes {
            return Err(PfError::Mismatch(self.modulus, self.num_modes, a.modulus(), a.num_modes()).into());
        }
        Ok(())
    }

    pub fn is_logical(&self, a: &PfOperator) -> Result<bool, CodeError> {
        self.check_operator(a)?;
        self.require_valid()?;
        let commutes = self
            .generators
            .iter()
            .all(|g| pf::commutation(g.alpha(), a.alpha(), self.modulus) == 0);
        Ok(commutes && !self.stabilizer_matrix().span_membership(a.alpha())?)
    }

    /// Component `j` is the commutation exponent of generator `j` with `e`.
    pub fn syndrome(&self, e: &PfOperator) -> Result<Vec<u64>, CodeError> {
        self.check_operator(e)?;
        Ok(self
            .generators
            .iter()
            .map(|g| pf::commutation(g.alpha(), e.alpha(), self.modulus))
            .collect())
    }

    pub fn logical_finder(&self) -> LogicalFinder {
        LogicalFinder::new(&self.stabilizer_matrix())
    }

    /// Exact distance by increasing-weight enumeration.
    ///
    /// With `cap = None` the search is exhaustive, which requires at most
    /// [`FULL_SEARCH_MODES`] modes.
    pub fn distance(&self, cap: Option<usize>) -> Result<DistanceOutcome, CodeError> {
        self.distance_with(cap, true)
    }

    pub fn distance_with(&self, cap: Option<usize>, parallel: bool) -> Result<DistanceOutcome, CodeError> {
        self.require_valid()?;
        let cap = match cap {
            Some(c) => c.min(self.num_modes),
            None if self.num_modes <= FULL_SEARCH_MODES => self.num_modes,
            None => return Err(CodeError::CapRequired { num_modes: self.num_modes }),
        };
        let finder = self.logical_finder();
        if !finder.has_logicals() {
            return Err(CodeError::NoLogicals);
        }
        Ok(match finder.min_weight(cap, parallel) {
            Some((distance, alpha)) => DistanceOutcome::Exact {
                distance,
                witness: PfOperator::new(self.modulus, 0, alpha)?,
            },
            None => DistanceOutcome::AboveCap { cap },
        })
    }

    /// Minimum diameter of a parity-conserving logical, or `None` if none exists.
    ///
    /// Scans windows (boxes of side `L` in the layout) for increasing `L` and
    /// solves for charge-zero centralizer elements supported in each window.
    pub fn l_con(&self) -> Result<Option<LconWitness>, CodeError> {
        self.require_valid()?;
        let d = self.modulus;
        let chain;
        let layout = match &self.layout {
            Some(l) => l,
            None => {
                chain = ModeLayout::chain(self.num_modes);
                &chain
            }
        };
        let stab = self.stabilizer_matrix().howell();
        let check = self.check_matrix();
        let dim = layout.dim();
        let lo: Vec<i64> = (0..dim)
            .map(|k| layout.coords.iter().map(|c| c[k]).min().unwrap_or(0))
            .collect();
        let hi: Vec<i64> = (0..dim)
            .map(|k| layout.coords.iter().map(|c| c[k]).max().unwrap_or(0))
            .collect();
        let max_side = (0..dim).map(|k| hi[k] - lo[k] + 1).max().unwrap_or(1);

        for side in 1..=max_side {
            let mut origins: Vec<Vec<i64>> = vec![vec![]];
            for k in 0..dim {
                let top = (hi[k] - side + 1).max(lo[k]);
                origins = origins
                    .into_iter()
                    .flat_map(|o| {
                        (lo[k]..=top).map(move |x| {
                            let mut o = o.clone();
                            o.push(x);
                            o
                        })
                    })
                    .collect();
            }
            let mut seen = std::collections::HashSet::new();
            for origin in origins {
                let modes: Vec<usize> = (0..self.num_modes)
                    .filter(|&m| {
                        layout.coords[m]
                            .iter()
                            .zip(&origin)
                            .all(|(&c, &o)| c >= o && c < o + side)
                    })
                    .collect();
                if modes.is_empty() || !seen.insert(modes.clone()) {
                    continue;
                }
                // Columns: one per generator (commutation) plus the charge.
                let rows: Vec<Vec<u64>> = modes
                    .iter()
                    .map(|&m| {
                        let mut r: Vec<u64> = (0..check.rows()).map(|g| check.get(g, m)).collect();
                        r.push(1);
                        r
                    })
                    .collect();
                let system = ZModMatrix::from_rows(d, check.rows() + 1, &rows)?;
                for x in system.kernel_basis().row_iter() {
                    let mut alpha = vec![0u64; self.num_modes];
                    for (&m, &v) in modes.iter().zip(x) {
                        alpha[m] = v;
                    }
                    if !stab.contains(&alpha)? {
                        let support: Vec<usize> = (0..self.num_modes).filter(|&m| alpha[m] != 0).collect();
                        return Ok(Some(LconWitness {
                            diameter: layout.diameter(&support),
                            witness: PfOperator::new(d, 0, alpha)?,
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Generators of the quotient centralizer / stabilizer, each the
    /// lexicographically smallest element of its coset.
    pub fn logical_basis(&self) -> Result<Vec<PfOperator>, CodeError> {
        let centralizer = self.centralizer_basis()?;
        let stab = self.stabilizer_matrix();
        let mut kept: Vec<Vec<u64>> = Vec::new();
        let mut span = stab.howell();
        for row in centralizer.howell_form().row_iter() {
            if span.contains(row)? {
                continue;
            }
            let rep = stab.howell().reduce(row)?;
            kept.push(rep.clone());
            let mut all = stab.to_rows();
            all.extend(kept.iter().cloned());
            span = ZModMatrix::from_rows(self.modulus, self.num_modes, &all)?.howell();
        }
        kept.into_iter()
            .map(|a| PfOperator::new(self.modulus, 0, a).map_err(CodeError::from))
            .collect()
    }

    /// Re-solves every generator phase so the group contains no nontrivial
    /// scalar. Generators with a zero exponent vector are pure phases and are
    /// kept as given.
    pub fn canonical_phases(&self) -> Result<PfCode, CodeError> {
        let d = self.modulus;
        let two_d = 2 * d;
        let alpha_level = Validity {
            abelian: self.validate_abelian(),
            parity_ok: self.generators.iter().all(|g| g.charge() == 0),
            phase_ok: true,
        };
        if !alpha_level.is_valid() {
            return Err(CodeError::Invalid(alpha_level));
        }
        let bare: Vec<PfOperator> = self.generators.iter().map(|g| g.with_phase(0)).collect();
        let unknowns: Vec<usize> = (0..bare.len()).filter(|&i| !bare[i].is_scalar()).collect();
        let column = |i: usize| unknowns.iter().position(|&u| u == i);

        // Each equation is (coefficients over unknowns, right-hand side) mod 2D.
        let mut equations: Vec<(Vec<u64>, u64)> = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            match column(i) {
                Some(c) => {
                    let e = bare[i].pow(d).mu();
                    let mut coeffs = vec![0u64; unknowns.len()];
                    coeffs[c] = d % two_d;
                    equations.push((coeffs, (two_d - e) % two_d));
                }
                None => {
                    if (g.mu() * d) % two_d != 0 {
                        return Err(CodeError::NoPhaseAssignment);
                    }
                }
            }
        }
        for x in self.stabilizer_matrix().kernel_basis().row_iter() {
            let mut f = 0i128;
            let mut coeffs = vec![0u64; unknowns.len()];
            let mut acc = PfOperator::identity(d, self.num_modes)?;
            for (i, &xi) in x.iter().enumerate() {
                if xi == 0 {
                    continue;
                }
                acc = acc.multiply(&bare[i].pow(xi))?;
                match column(i) {
                    Some(c) => coeffs[c] = xi % two_d,
                    None => f += xi as i128 * self.generators[i].mu() as i128,
                }
            }
            f += acc.mu() as i128;
            equations.push((coeffs, reduce_i128(-f, two_d)));
        }

        let mu = if unknowns.is_empty() {
            if equations.iter().any(|(_, rhs)| *rhs != 0) {
                return Err(CodeError::NoPhaseAssignment);
            }
            Vec::new()
        } else {
            // Solve mu * A^T = b as a left system.
            let a_t: Vec<Vec<u64>> = (0..unknowns.len())
                .map(|c| equations.iter().map(|(co, _)| co[c]).collect())
                .collect();
            let b: Vec<u64> = equations.iter().map(|(_, r)| *r).collect();
            let m = ZModMatrix::from_rows(two_d, equations.len(), &a_t)?;
            m.solve_left(&b)?.ok_or(CodeError::NoPhaseAssignment)?
        };

        let mut gens = self.generators.clone();
        for (c, &i) in unknowns.iter().enumerate() {
            gens[i] = bare[i].with_phase(mu[c]);
        }
        Ok(PfCode {
            modulus: d,
            num_modes: self.num_modes,
            generators: gens,
            layout: self.layout.clone(),
        })
    }

    fn validate_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, a)| {
            self.generators[i + 1..]
                .iter()
                .all(|b| pf::commutation(a.alpha(), b.alpha(), self.modulus) == 0)
        })
    }

    pub fn report(&self, opts: ReportOptions) -> Result<CodeReport, CodeError> {
        let validity = self.validate();
        if !validity.is_valid() {
            return Err(CodeError::Invalid(validity));
        }
        let group_order = self.group_order()?;
        let codespace_dim = self.codespace_dim()?;
        let k = integral_log(codespace_dim, self.modulus);
        let distance = if opts.skip_distance || codespace_dim == 1 {
            None
        } else {
            match self.distance_with(opts.max_weight, opts.parallel) {
                Ok(d) => Some(d),
                Err(CodeError::CapRequired { .. }) => None,
                Err(e) => return Err(e),
            }
        };
        let l_con = self.l_con()?;
        let logical_basis = self.logical_basis()?.iter().map(LogicalInfo::from_op).collect();
        let geometry = match &self.layout {
            None => "chain (index span)".to_string(),
            Some(l) => format!("layout ({}-d Chebyshev extent)", l.dim()),
        };
        Ok(CodeReport {
            modulus: self.modulus,
            num_modes: self.num_modes,
            num_generators: self.generators.len(),
            validity,
            group_order,
            codespace_dim,
            k,
            distance,
            l_con,
            geometry,
            logical_basis,
        })
    }
}

/// `log_base(value)` when `value` is an exact power of `base`.
pub fn integral_log(value: u128, base: u64) -> Option<u32> {
    let base = base as u128;
    let mut v = value;
    let mut k = 0;
    while v > 1 {
        if v % base != 0 {
            return None;
        }
        v /= base;
        k += 1;
    }
    (v == 1).then_some(k)
}
