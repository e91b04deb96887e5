//! Exhaustive minimum-weight logical operator search.
//!
//! Works purely at the exponent-vector level: a vector is a logical operator
//! when it commutes with every stabilizer row and lies outside the stabilizer
//! span. Supports are enumerated in colexicographic order and exponents in
//! lexicographic order, so the first hit is a reproducible certificate.

use rayon::prelude::*;

use crate::pf::lambda_row;
use crate::zmod::{mul_mod, sub_mod, Howell, ZModMatrix};

/// Iterator over `k`-subsets of `0..n` in colexicographic order.
pub struct Colex {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Colex {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Self { n, current }
    }
}

impl Iterator for Colex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let c = self.current.as_mut().unwrap();
        let k = c.len();
        let mut j = 0;
        while j < k && (if j + 1 < k { c[j] + 1 == c[j + 1] } else { c[j] + 1 == self.n }) {
            j += 1;
        }
        if j == k {
            self.current = None;
        } else {
            c[j] += 1;
            for (i, x) in c.iter_mut().take(j).enumerate() {
                *x = i;
            }
        }
        Some(out)
    }
}

/// Binomial coefficient, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

#[derive(Clone, Debug)]
pub struct LogicalFinder {
    modulus: u64,
    num_modes: usize,
    num_checks: usize,
    /// `multiples[j][e]` is `e` times column `j` of `S * Lambda`.
    multiples: Vec<Vec<Vec<u64>>>,
    stabilizer: Howell,
    has_logicals: bool,
}

impl LogicalFinder {
    pub fn new(stabilizer: &ZModMatrix) -> Self {
        let d = stabilizer.modulus();
        let m = stabilizer.cols();
        let check_rows: Vec<Vec<u64>> = stabilizer.row_iter().map(|r| lambda_row(r, d)).collect();
        let g = check_rows.len();
        let multiples = (0..m)
            .map(|j| {
                (0..d)
                    .map(|e| check_rows.iter().map(|row| mul_mod(row[j], e, d)).collect())
                    .collect()
            })
            .collect();
        let howell = stabilizer.howell();
        let check = ZModMatrix::from_rows(d, m, &check_rows).expect("check rows are residues");
        let centralizer = check.transpose().kernel_basis();
        let has_logicals = centralizer
            .row_iter()
            .any(|r| !howell.contains(r).expect("same width"));
        Self {
            modulus: d,
            num_modes: m,
            num_checks: g,
            multiples,
            stabilizer: howell,
            has_logicals,
        }
    }

    pub fn has_logicals(&self) -> bool {
        self.has_logicals
    }

    pub fn commutes(&self, alpha: &[u64]) -> bool {
        let d = self.modulus;
        let mut syn = vec![0u64; self.num_checks];
        for (j, &a) in alpha.iter().enumerate() {
            if a != 0 {
                for (s, &x) in syn.iter_mut().zip(&self.multiples[j][a as usize]) {
                    *s = (*s + x) % d;
                }
            }
        }
        syn.iter().all(|&s| s == 0)
    }

    pub fn is_logical(&self, alpha: &[u64]) -> bool {
        self.commutes(alpha) && !self.stabilizer.contains(alpha).expect("same width")
    }

    /// First logical (in enumeration order) supported on exactly `support`.
    fn scan_support(&self, support: &[usize]) -> Option<Vec<u64>> {
        let d = self.modulus;
        let w = support.len();
        let g = self.num_checks;
        let mut exps = vec![1u64; w];
        let mut syn = vec![0u64; g];
        for &j in support {
            for (s, &x) in syn.iter_mut().zip(&self.multiples[j][1]) {
                *s = (*s + x) % d;
            }
        }
        loop {
            if syn.iter().all(|&s| s == 0) {
                let mut alpha = vec![0u64; self.num_modes];
                for (&j, &e) in support.iter().zip(&exps) {
                    alpha[j] = e;
                }
                if !self.stabilizer.contains(&alpha).expect("same width") {
                    return Some(alpha);
                }
            }
            // odometer, last position fastest
            let mut t = w;
            loop {
                if t == 0 {
                    return None;
                }
                t -= 1;
                let j = support[t];
                let old = exps[t];
                let new = if old + 1 == d { 1 } else { old + 1 };
                let (a, b) = (&self.multiples[j][old as usize], &self.multiples[j][new as usize]);
                for k in 0..g {
                    syn[k] = (sub_mod(syn[k], a[k], d) + b[k]) % d;
                }
                exps[t] = new;
                if new != 1 {
                    break;
                }
            }
        }
    }

    /// First logical of weight exactly `w`, or `None`.
    pub fn first_of_weight(&self, w: usize, parallel: bool) -> Option<Vec<u64>> {
        let m = self.num_modes;
        if w == 0 || w > m || self.modulus < 2 {
            return None;
        }
        if w == 1 {
            return (0..m).find_map(|j| self.scan_support(&[j]));
        }
        // Blocks share the two largest support elements; blocks in colex order.
        let blocks: Vec<(usize, usize)> = (w - 1..m)
            .flat_map(|top| (w - 2..top).map(move |second| (top, second)))
            .collect();
        let scan_block = |&(top, second): &(usize, usize)| {
            Colex::new(second, w - 2).find_map(|mut low| {
                low.push(second);
                low.push(top);
                self.scan_support(&low)
            })
        };
        if parallel {
            blocks.par_iter().find_map_first(scan_block)
        } else {
            blocks.iter().find_map(scan_block)
        }
    }

    /// Minimum weight logical up to `cap`, with the first witness found.
    pub fn min_weight(&self, cap: usize, parallel: bool) -> Option<(usize, Vec<u64>)> {
        if !self.has_logicals {
            return None;
        }
        (1..=cap.min(self.num_modes)).find_map(|w| self.first_of_weight(w, parallel).map(|a| (w, a)))
    }

    /// True when some logical of weight below `bound` exists.
    pub fn has_logical_below(&self, bound: usize, parallel: bool) -> bool {
        self.has_logicals && (1..bound.min(self.num_modes + 1)).any(|w| self.first_of_weight(w, parallel).is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_order_and_count() {
        let all: Vec<Vec<usize>> = Colex::new(4, 2).collect();
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(Colex::new(7, 3).count() as u128, binomial(7, 3));
        assert_eq!(Colex::new(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(Colex::new(2, 3).count(), 0);
    }

    #[test]
    fn blocks_preserve_colex_order() {
        // Flattening the (top, second) blocks must reproduce Colex exactly.
        let (m, w) = (7, 4);
        let mut flat = Vec::new();
        for top in w - 1..m {
            for second in w - 2..top {
                for mut low in Colex::new(second, w - 2) {
                    low.push(second);
                    low.push(top);
                    flat.push(low);
                }
            }
        }
        assert_eq!(flat, Colex::new(m, w).collect::<Vec<_>>());
    }

    #[test]
    fn chain_has_weight_one_logical() {
        // D=3, single stabilizer g2^2 g3 on four modes: g1 is logical.
        let s = ZModMatrix::from_rows(3, 4, &[[0u64, 2, 1, 0]]).unwrap();
        let f = LogicalFinder::new(&s);
        assert!(f.has_logicals());
        assert_eq!(f.min_weight(4, false), Some((1, vec![1, 0, 0, 0])));
    }

    #[test]
    fn full_rank_stabilizer_has_no_logicals() {
        // One qudit worth of modes fully stabilized: g1^2 g2 alone on two modes.
        let s = ZModMatrix::from_rows(3, 2, &[[2u64, 1]]).unwrap();
        let f = LogicalFinder::new(&s);
        assert!(!f.has_logicals());
        assert_eq!(f.min_weight(2, true), None);
    }
}
