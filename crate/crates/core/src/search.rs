//! Exhaustive and randomized search for small parafermion codes.
//!
//! Candidates are nonzero parity-zero exponent vectors in lexicographic order.
//! Generator tuples are built depth-first with increasing candidate indices
//! (or, with symmetry reduction, as reduced row-echelon bases), pruning on the
//! first failed commutation. The first-generator choice partitions the work;
//! partitions run in fixed-size batches and merge in order, so every count,
//! digest and hit list is independent of the thread count.

use std::collections::HashSet;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{CodeError, PfCode};
use crate::distance::{binomial, LogicalFinder};
use crate::pf::{commutation, PfOperator};
use crate::zmod::ZModMatrix;

const BATCH: usize = 64;
const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("number of modes must be even and positive, got {0}")]
    OddModes(usize),
    #[error("target distance must be at least 1")]
    ZeroDistance,
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("generator_count is required for composite D = {0}")]
    GeneratorCountRequired(u64),
    #[error("target k = {k} leaves no stabilizer on {n} qudits")]
    BadTarget { k: u32, n: usize },
    #[error("search space too large: {0} candidate vectors")]
    TooLarge(u128),
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Randomized { seed: u64, samples: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    #[serde(rename = "D")]
    pub modulus: u64,
    pub num_modes: usize,
    pub target_k: u32,
    pub target_d: usize,
    pub mode: SearchMode,
    /// Number of generators; defaults to `n - k`, which is only meaningful for prime D.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator_count: Option<usize>,
    /// Enumerate reduced row-echelon generator tuples only (prime D).
    #[serde(default)]
    pub symmetry_reduction: bool,
    /// Accept only codes whose distance equals `target_d` (default: at least).
    #[serde(default)]
    pub exact_distance: bool,
    /// Stop after this many distinct hits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_hits: Option<usize>,
    /// Cap on visited search nodes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

impl SearchSpec {
    pub fn exhaustive(modulus: u64, num_modes: usize, target_k: u32, target_d: usize) -> Self {
        Self {
            modulus,
            num_modes,
            target_k,
            target_d,
            mode: SearchMode::Exhaustive,
            generator_count: None,
            symmetry_reduction: false,
            exact_distance: false,
            max_hits: None,
            budget: None,
        }
    }

    fn is_prime_modulus(&self) -> bool {
        let d = self.modulus;
        d >= 2 && (2..).take_while(|i| i * i <= d).all(|i| d % i != 0)
    }

    pub fn check(&self) -> Result<(), SearchError> {
        if self.modulus < 2 {
            return Err(SearchError::InvalidModulus(self.modulus));
        }
        if self.num_modes == 0 || self.num_modes % 2 != 0 {
            return Err(SearchError::OddModes(self.num_modes));
        }
        if self.target_d == 0 {
            return Err(SearchError::ZeroDistance);
        }
        let n = self.num_modes / 2;
        if self.target_k as usize > n {
            return Err(SearchError::BadTarget { k: self.target_k, n });
        }
        if self.generator_count.is_none() && !self.is_prime_modulus() {
            return Err(SearchError::GeneratorCountRequired(self.modulus));
        }
        Ok(())
    }

    pub fn generators(&self) -> usize {
        self.generator_count
            .unwrap_or(self.num_modes / 2 - self.target_k as usize)
    }

    /// Required stabilizer group order `D^(n-k)`.
    fn target_order(&self) -> Option<u128> {
        (self.modulus as u128).checked_pow((self.num_modes / 2 - self.target_k as usize) as u32)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    /// Exhaustive search found hits (possibly stopping early at `max_hits`).
    Found,
    /// Exhaustive search covered the whole space without a hit.
    NoneExists,
    /// The node budget ran out; counts and hits are partial.
    BudgetExceeded,
    /// Randomized sampling finished; says nothing about nonexistence.
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHit {
    pub generators: Vec<PfOperator>,
    pub k: u32,
    pub distance: usize,
    pub key: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCertificate {
    pub spec: SearchSpec,
    pub candidate_vectors: u64,
    /// `C(candidates, generators)`, an upper bound on complete tuples.
    pub estimated_tuples: u128,
    pub nodes_visited: u64,
    pub complete_tuples: u64,
    pub partitions_done: u64,
    pub partitions_total: u64,
    pub stopped_early: bool,
    pub status: SearchStatus,
    /// FNV-1a digest of the visited node sequence.
    pub digest: String,
    pub hits: Vec<SearchHit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub codes: Vec<PfCode>,
    pub certificate: SearchCertificate,
}

/// Key that is equal for two codes iff their stabilizer spans agree.
pub fn canonical_equivalence_key(code: &PfCode) -> String {
    let h = code.stabilizer_matrix().howell_form();
    let mut key = format!("D{}m{}", code.modulus(), code.num_modes());
    for row in h.row_iter() {
        key.push(':');
        let parts: Vec<String> = row.iter().map(u64::to_string).collect();
        key.push_str(&parts.join(","));
    }
    key
}

/// Nonzero parity-zero vectors of `Z_D^m` in lexicographic order.
pub fn candidate_vectors(modulus: u64, num_modes: usize) -> Result<Vec<Vec<u64>>, SearchError> {
    let total = (modulus as u128)
        .checked_pow(num_modes as u32)
        .filter(|&t| t <= 1 << 26)
        .ok_or(SearchError::TooLarge((modulus as u128).saturating_pow(num_modes as u32)))?;
    let mut out = Vec::with_capacity((total / modulus as u128) as usize);
    let mut v = vec![0u64; num_modes];
    for _ in 0..total {
        let mut t = num_modes;
        while t > 0 {
            t -= 1;
            v[t] += 1;
            if v[t] < modulus {
                break;
            }
            v[t] = 0;
        }
        if v.iter().sum::<u64>() % modulus == 0 && v.iter().any(|&x| x != 0) {
            out.push(v.clone());
        }
    }
    Ok(out)
}

struct Engine<'a> {
    spec: &'a SearchSpec,
    cands: &'a [Vec<u64>],
    /// Position of the leading nonzero entry of each candidate.
    leads: Vec<usize>,
    target_order: u128,
    prime: bool,
    g: usize,
}

#[derive(Default)]
struct PartitionResult {
    nodes: u64,
    complete: u64,
    digest: u64,
    hits: Vec<(PfCode, SearchHit)>,
    aborted: bool,
}

fn fnv(mut h: u64, words: &[u64]) -> u64 {
    for w in words {
        for b in w.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(FNV_PRIME);
        }
    }
    h
}

impl<'a> Engine<'a> {
    fn new(spec: &'a SearchSpec, cands: &'a [Vec<u64>]) -> Self {
        let leads = cands
            .iter()
            .map(|v| v.iter().position(|&x| x != 0).unwrap_or(v.len()))
            .collect();
        Self {
            spec,
            cands,
            leads,
            target_order: spec.target_order().unwrap_or(u128::MAX),
            prime: spec.is_prime_modulus(),
            g: spec.generators(),
        }
    }

    fn reduced(&self) -> bool {
        self.spec.symmetry_reduction && self.prime
    }

    /// Echelon condition for appending candidate `c` after `prefix`.
    fn echelon_ok(&self, prefix: &[usize], c: usize) -> bool {
        let v = &self.cands[c];
        let lead = self.leads[c];
        if v[lead] != 1 {
            return false;
        }
        if let Some(&last) = prefix.last() {
            if self.leads[last] >= lead {
                return false;
            }
        }
        prefix
            .iter()
            .all(|&p| v[self.leads[p]] == 0 && self.cands[p][lead] == 0)
    }

    fn commutes_with_prefix(&self, prefix: &[usize], c: usize) -> bool {
        let d = self.spec.modulus;
        prefix
            .iter()
            .all(|&p| commutation(&self.cands[p], &self.cands[c], d) == 0)
    }

    fn run_partition(&self, first: usize, node_limit: u64, max_hits: usize) -> PartitionResult {
        let mut res = PartitionResult {
            digest: FNV_OFFSET,
            ..Default::default()
        };
        let mut seen = HashSet::new();
        let mut prefix = vec![first];
        if self.reduced() && !self.echelon_ok(&[], first) {
            return res;
        }
        self.dfs(&mut prefix, &mut res, &mut seen, node_limit, max_hits);
        res
    }

    fn visit(&self, prefix: &[usize], res: &mut PartitionResult, node_limit: u64) -> bool {
        res.nodes += 1;
        res.digest = fnv(res.digest, &[prefix.len() as u64, *prefix.last().unwrap() as u64]);
        if res.nodes > node_limit {
            res.aborted = true;
        }
        !res.aborted
    }

    fn dfs(
        &self,
        prefix: &mut Vec<usize>,
        res: &mut PartitionResult,
        seen: &mut HashSet<String>,
        node_limit: u64,
        max_hits: usize,
    ) {
        if !self.visit(prefix, res, node_limit) {
            return;
        }
        if self.prime && prefix.len() > 1 && !self.independent(prefix) {
            return;
        }
        if prefix.len() == self.g {
            res.complete += 1;
            if let Some((code, hit)) = self.evaluate(prefix) {
                if seen.insert(hit.key.clone()) {
                    res.hits.push((code, hit));
                }
            }
            return;
        }
        let start = if self.reduced() { 0 } else { prefix.last().unwrap() + 1 };
        for c in start..self.cands.len() {
            if res.aborted || res.hits.len() >= max_hits {
                return;
            }
            if self.reduced() && !self.echelon_ok(prefix, c) {
                continue;
            }
            if !self.commutes_with_prefix(prefix, c) {
                continue;
            }
            prefix.push(c);
            self.dfs(prefix, res, seen, node_limit, max_hits);
            prefix.pop();
        }
    }

    /// For prime D every generator must enlarge the span.
    fn independent(&self, prefix: &[usize]) -> bool {
        if self.reduced() {
            return true;
        }
        let rows: Vec<&Vec<u64>> = prefix.iter().map(|&p| &self.cands[p]).collect();
        let m = ZModMatrix::from_rows(self.spec.modulus, self.spec.num_modes, &rows).expect("residues");
        m.span_order() == (self.spec.modulus as u128).pow(prefix.len() as u32)
    }

    fn evaluate(&self, tuple: &[usize]) -> Option<(PfCode, SearchHit)> {
        let rows: Vec<&Vec<u64>> = tuple.iter().map(|&p| &self.cands[p]).collect();
        let m = ZModMatrix::from_rows(self.spec.modulus, self.spec.num_modes, &rows).expect("residues");
        if m.span_order() != self.target_order {
            return None;
        }
        let finder = LogicalFinder::new(&m);
        if !finder.has_logicals() || finder.has_logical_below(self.spec.target_d, false) {
            return None;
        }
        let code = PfCode::from_alpha_rows(self.spec.modulus, self.spec.num_modes, &rows)
            .ok()?
            .canonical_phases()
            .ok()?;
        let k = code.logical_qudits().ok()??;
        if k != self.spec.target_k {
            return None;
        }
        let (distance, _) = finder.min_weight(self.spec.num_modes, false)?;
        if self.spec.exact_distance && distance != self.spec.target_d {
            return None;
        }
        let hit = SearchHit {
            generators: code.generators().to_vec(),
            k,
            distance,
            key: canonical_equivalence_key(&code),
        };
        Some((code, hit))
    }
}

/// Runs the search described by `spec`. When `canonical` is set the
/// certificate omits wall time so repeated runs are byte-identical.
pub fn find_codes(spec: &SearchSpec, canonical: bool) -> Result<SearchOutcome, SearchError> {
    spec.check()?;
    let started = Instant::now();
    let cands = candidate_vectors(spec.modulus, spec.num_modes)?;
    let g = spec.generators();
    let mut cert = SearchCertificate {
        spec: spec.clone(),
        candidate_vectors: cands.len() as u64,
        estimated_tuples: binomial(cands.len(), g),
        nodes_visited: 0,
        complete_tuples: 0,
        partitions_done: 0,
        partitions_total: cands.len() as u64,
        stopped_early: false,
        status: SearchStatus::NoneExists,
        digest: String::new(),
        hits: Vec::new(),
        wall_time_ms: None,
    };
    let engine = Engine::new(spec, &cands);
    let codes = match spec.mode {
        SearchMode::Exhaustive => exhaustive(&engine, &mut cert),
        SearchMode::Randomized { seed, samples } => randomized(&engine, seed, samples, &mut cert),
    };
    if !canonical {
        cert.wall_time_ms = Some(started.elapsed().as_millis() as u64);
    }
    Ok(SearchOutcome {
        codes,
        certificate: cert,
    })
}

fn exhaustive(engine: &Engine, cert: &mut SearchCertificate) -> Vec<PfCode> {
    let spec = engine.spec;
    let max_hits = spec.max_hits.unwrap_or(usize::MAX);
    let budget = spec.budget.unwrap_or(u64::MAX);
    let mut digest = FNV_OFFSET;
    let mut seen = HashSet::new();
    let mut codes = Vec::new();
    let n = engine.cands.len();
    if engine.g == 0 {
        // Only the trivial stabilizer; evaluate it directly.
        cert.partitions_total = 0;
        if let Some((code, hit)) = engine.evaluate(&[]) {
            codes.push(code);
            cert.hits.push(hit);
        }
        cert.complete_tuples = 1;
        cert.status = if codes.is_empty() {
            SearchStatus::NoneExists
        } else {
            SearchStatus::Found
        };
        cert.digest = format!("{digest:016x}");
        return codes;
    }
    let mut start = 0;
    while start < n {
        let remaining = budget - cert.nodes_visited;
        let end = (start + BATCH).min(n);
        let results: Vec<PartitionResult> = (start..end)
            .into_par_iter()
            .map(|first| engine.run_partition(first, remaining, max_hits))
            .collect();
        for r in results {
            digest = fnv(digest, &[r.digest]);
            cert.nodes_visited += r.nodes;
            cert.complete_tuples += r.complete;
            cert.partitions_done += 1;
            for (code, hit) in r.hits {
                if codes.len() < max_hits && seen.insert(hit.key.clone()) {
                    codes.push(code);
                    cert.hits.push(hit);
                }
            }
            if r.aborted || cert.nodes_visited > budget {
                cert.status = SearchStatus::BudgetExceeded;
                cert.digest = format!("{digest:016x}");
                return codes;
            }
            if codes.len() >= max_hits {
                cert.stopped_early = cert.partitions_done < cert.partitions_total;
                cert.status = SearchStatus::Found;
                cert.digest = format!("{digest:016x}");
                return codes;
            }
        }
        start = end;
    }
    cert.status = if codes.is_empty() {
        SearchStatus::NoneExists
    } else {
        SearchStatus::Found
    };
    cert.digest = format!("{digest:016x}");
    codes
}

fn randomized(engine: &Engine, seed: u64, samples: u64, cert: &mut SearchCertificate) -> Vec<PfCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_hits = engine.spec.max_hits.unwrap_or(usize::MAX);
    let mut digest = FNV_OFFSET;
    let mut seen = HashSet::new();
    let mut codes = Vec::new();
    let n = engine.cands.len();
    cert.partitions_total = 0;
    cert.status = SearchStatus::Sampled;
    if engine.g > n {
        cert.digest = format!("{digest:016x}");
        return codes;
    }
    for _ in 0..samples {
        if codes.len() >= max_hits {
            cert.stopped_early = true;
            break;
        }
        let mut tuple = sample(&mut rng, n, engine.g).into_vec();
        tuple.sort_unstable();
        cert.nodes_visited += 1;
        digest = fnv(digest, &tuple.iter().map(|&t| t as u64).collect::<Vec<_>>());
        let d = engine.spec.modulus;
        let commuting = tuple.iter().enumerate().all(|(i, &a)| {
            tuple[i + 1..]
                .iter()
                .all(|&b| commutation(&engine.cands[a], &engine.cands[b], d) == 0)
        });
        if !commuting {
            continue;
        }
        cert.complete_tuples += 1;
        if let Some((code, hit)) = engine.evaluate(&tuple) {
            if seen.insert(hit.key.clone()) {
                codes.push(code);
                cert.hits.push(hit);
            }
        }
    }
    cert.digest = format!("{digest:016x}");
    codes
}

/// Rough number of distinct stabilizer groups a search can meet; used for
/// the pre-run feasibility line printed by the CLI.
pub fn describe_estimate(spec: &SearchSpec) -> Result<String, SearchError> {
    spec.check()?;
    let d = spec.modulus as u128;
    let m = spec.num_modes as u32;
    let vectors = d.checked_pow(m).map(|t| t / d - 1);
    let g = spec.generators();
    Ok(match vectors {
        Some(v) => format!(
            "{} candidate vectors, at most {} generator tuples of size {}",
            v,
            binomial(v as usize, g),
            g
        ),
        None => "candidate space overflows".to_string(),
    })
}
