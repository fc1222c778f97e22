//! Conditional probability tables ("boxes") for one, two and three parties,
//! each party having a binary input and a binary output.
//!
//! Rows index inputs and columns index outputs in dictionary order: for three
//! parties row `4*i1 + 2*i2 + i3` and column `4*o1 + 2*o2 + o3`; for two
//! parties row `2*i + i'` and column `2*o + o'`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entries down to `-NEG_TOL` are accepted and clamped to zero.
pub const NEG_TOL: f64 = 1e-12;
/// Row sums must lie within this distance of one.
pub const NORM_TOL: f64 = 1e-9;
/// Tolerance on the sum of mixing weights.
pub const WEIGHT_TOL: f64 = 1e-12;

/// Row index of a three-party input triple.
#[inline]
pub fn index3(a: u8, b: u8, c: u8) -> usize {
    4 * a as usize + 2 * b as usize + c as usize
}

/// Row index of a two-party input pair.
#[inline]
pub fn index2(a: u8, b: u8) -> usize {
    2 * a as usize + b as usize
}

fn validate<const N: usize>(mut rows: [[f64; N]; N], tol: f64) -> Result<[[f64; N]; N]> {
    let norm_tol = tol.max(NORM_TOL);
    for (r, row) in rows.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "non-finite entry at row {r}, column {c}"
                )));
            }
            if *v < -tol {
                return Err(Error::NegativeProbability { row: r, col: c, value: *v });
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > norm_tol {
            return Err(Error::NotNormalized { row: r, sum });
        }
    }
    Ok(rows)
}

/// Shared access to the flat row-major table of a box.
pub trait ProbTable: Sized + Clone {
    /// Number of parties.
    const PARTIES: usize;
    /// Rows (= columns) of the table.
    const SIZE: usize = 1 << Self::PARTIES;

    fn flat(&self) -> &[f64];

    /// Builds from a flat row-major slice, validating with `tol`.
    fn from_flat(values: &[f64], tol: f64) -> Result<Self>;
}

/// Single-party response table `p(o | i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Box1 {
    probs: [[f64; 2]; 2],
}

impl Box1 {
    pub fn new(rows: [[f64; 2]; 2]) -> Result<Self> {
        Ok(Self { probs: validate(rows, NEG_TOL)? })
    }

    pub fn p(&self, o: u8, i: u8) -> f64 {
        self.probs[i as usize][o as usize]
    }

    pub fn rows(&self) -> &[[f64; 2]; 2] {
        &self.probs
    }
}

/// Two-party box `p(o o' | i i')`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Box2 {
    probs: [[f64; 4]; 4],
}

impl Box2 {
    pub fn new(rows: [[f64; 4]; 4]) -> Result<Self> {
        Self::with_tol(rows, NEG_TOL)
    }

    pub fn with_tol(rows: [[f64; 4]; 4], tol: f64) -> Result<Self> {
        Ok(Self { probs: validate(rows, tol)? })
    }

    pub fn uniform() -> Self {
        Self { probs: [[0.25; 4]; 4] }
    }

    /// `p(o o' | i i')`.
    pub fn p(&self, o: u8, o2: u8, i: u8, i2: u8) -> f64 {
        self.probs[index2(i, i2)][index2(o, o2)]
    }

    pub fn rows(&self) -> &[[f64; 4]; 4] {
        &self.probs
    }

    pub fn no_signaling(&self, tol: f64) -> NsReport {
        ns_report(2, self.flat(), tol)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(self.flat(), other.flat())
    }
}

impl ProbTable for Box2 {
    const PARTIES: usize = 2;

    fn flat(&self) -> &[f64] {
        self.probs.as_flattened()
    }

    fn from_flat(values: &[f64], tol: f64) -> Result<Self> {
        if values.len() != 16 {
            return Err(Error::Shape(format!("expected 16 entries, got {}", values.len())));
        }
        let mut rows = [[0.0; 4]; 4];
        rows.as_flattened_mut().copy_from_slice(values);
        Self::with_tol(rows, tol)
    }
}

/// Three-party box `p(o1 o2 o3 | i1 i2 i3)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Box3 {
    probs: [[f64; 8]; 8],
}

/// Validates an 8x8 table. Entries in `[-tol, 0)` are clamped to zero; row
/// sums must be within `max(tol, NORM_TOL)` of one.
pub fn make_box3(rows: [[f64; 8]; 8], tol: f64) -> Result<Box3> {
    Ok(Box3 { probs: validate(rows, tol)? })
}

impl Box3 {
    pub fn new(rows: [[f64; 8]; 8]) -> Result<Self> {
        make_box3(rows, NEG_TOL)
    }

    pub fn uniform() -> Self {
        Self { probs: [[0.125; 8]; 8] }
    }

    /// `p(o1 o2 o3 | i1 i2 i3)`.
    pub fn p(&self, outs: [u8; 3], ins: [u8; 3]) -> f64 {
        self.probs[index3(ins[0], ins[1], ins[2])][index3(outs[0], outs[1], outs[2])]
    }

    pub fn rows(&self) -> &[[f64; 8]; 8] {
        &self.probs
    }

    /// Party 1 responding with `first`, parties 2 and 3 sharing `rest`.
    pub fn product(first: &Box1, rest: &Box2) -> Self {
        let mut probs = [[0.0; 8]; 8];
        for ins in 0..8u8 {
            let (i1, i2, i3) = (ins >> 2, (ins >> 1) & 1, ins & 1);
            for outs in 0..8u8 {
                let (o1, o2, o3) = (outs >> 2, (outs >> 1) & 1, outs & 1);
                probs[ins as usize][outs as usize] = first.p(o1, i1) * rest.p(o2, o3, i2, i3);
            }
        }
        Self { probs }
    }

    pub fn no_signaling(&self, tol: f64) -> NsReport {
        no_signaling_check(self, tol)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(self.flat(), other.flat())
    }
}

impl ProbTable for Box3 {
    const PARTIES: usize = 3;

    fn flat(&self) -> &[f64] {
        self.probs.as_flattened()
    }

    fn from_flat(values: &[f64], tol: f64) -> Result<Self> {
        if values.len() != 64 {
            return Err(Error::Shape(format!("expected 64 entries, got {}", values.len())));
        }
        let mut rows = [[0.0; 8]; 8];
        rows.as_flattened_mut().copy_from_slice(values);
        make_box3(rows, tol)
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Outcome of a no-signaling check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NsReport {
    pub is_ns: bool,
    /// Largest spread of any marginal across the inputs it must not depend on.
    pub max_violation: f64,
    /// Party (1-based) whose marginal carries the largest violation, when the
    /// worst offending subset is a single party.
    pub violating_party: Option<usize>,
    /// Worst offending subset of parties (1-based), if any violation is nonzero.
    pub violating_subset: Option<Vec<usize>>,
}

pub fn no_signaling_check(b: &Box3, tol: f64) -> NsReport {
    ns_report(3, b.flat(), tol)
}

/// Scans every non-empty proper subset `S` of the parties and measures how
/// much the marginal on `S` moves when only the inputs outside `S` change.
fn ns_report(parties: usize, flat: &[f64], tol: f64) -> NsReport {
    let size = 1usize << parties;
    debug_assert_eq!(flat.len(), size * size);
    // party k (0-based) sits at bit parties-1-k
    let bit = |k: usize| 1usize << (parties - 1 - k);

    let mut subsets: Vec<usize> = (1..size - 1).collect();
    subsets.sort_by_key(|m| (m.count_ones(), *m));

    let mut worst = 0.0f64;
    let mut worst_mask = None;
    for mask in subsets {
        let set_bits: usize = (0..parties).filter(|k| mask & (1 << k) != 0).map(bit).sum();
        let mut spread = 0.0f64;
        for o_s in 0..size {
            if o_s & !set_bits != 0 {
                continue;
            }
            for i_s in 0..size {
                if i_s & !set_bits != 0 {
                    continue;
                }
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for i_c in 0..size {
                    if i_c & set_bits != 0 {
                        continue;
                    }
                    let row = i_s | i_c;
                    let m: f64 = (0..size)
                        .filter(|o_c| o_c & set_bits == 0)
                        .map(|o_c| flat[row * size + (o_s | o_c)])
                        .sum();
                    lo = lo.min(m);
                    hi = hi.max(m);
                }
                spread = spread.max(hi - lo);
            }
        }
        if spread > worst {
            worst = spread;
            worst_mask = Some(mask);
        }
    }

    let subset = worst_mask.map(|m| {
        (0..parties).filter(|k| m & (1 << k) != 0).map(|k| k + 1).collect::<Vec<_>>()
    });
    let violating_party = subset.as_ref().and_then(|s| (s.len() == 1).then(|| s[0]));
    NsReport {
        is_ns: worst <= tol,
        max_violation: worst,
        violating_party,
        violating_subset: subset,
    }
}

/// Entrywise convex combination.
pub fn mix<B: ProbTable>(boxes: &[B], weights: &[f64]) -> Result<B> {
    if boxes.is_empty() || boxes.len() != weights.len() {
        return Err(Error::BadWeights(format!(
            "{} boxes but {} weights",
            boxes.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0)) {
        return Err(Error::BadWeights(format!("negative or non-finite weight {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::BadWeights(format!("weights sum to {total}")));
    }
    let n = B::SIZE * B::SIZE;
    let mut acc = vec![0.0; n];
    for (b, &w) in boxes.iter().zip(weights) {
        for (a, v) in acc.iter_mut().zip(b.flat()) {
            *a += w * v;
        }
    }
    B::from_flat(&acc, NEG_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deterministic_o3_eq_i2() -> Box3 {
        let mut rows = [[0.0; 8]; 8];
        for ins in 0..8u8 {
            let i2 = (ins >> 1) & 1;
            rows[ins as usize][index3(0, 0, i2)] = 1.0;
        }
        Box3::new(rows).unwrap()
    }

    #[test]
    fn uniform_box_is_valid() {
        let b = make_box3([[0.125; 8]; 8], NEG_TOL).unwrap();
        assert_eq!(b, Box3::uniform());
        assert!(b.no_signaling(1e-12).is_ns);
    }

    #[test]
    fn ghz_matrix_literal_is_valid() {
        let ap = (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 4.0;
        let am = (1.0 - std::f64::consts::FRAC_1_SQRT_2) / 4.0;
        let a = [2.0 * ap, 2.0 * am, 0.0, 0.0, 0.0, 0.0, 2.0 * am, 2.0 * ap];
        let b = [ap, am, ap, am, am, ap, am, ap];
        let c = [ap, am, am, ap, ap, am, am, ap];
        let d = [ap, am, am, ap, am, ap, ap, am];
        let e = [am, ap, ap, am, ap, am, am, ap];
        let mut rows = [a, a, b, b, c, c, d, e];
        for row in rows.iter_mut() {
            for v in row.iter_mut() {
                *v /= 2.0;
            }
        }
        let g = make_box3(rows, NEG_TOL).unwrap();
        assert!((g.rows()[0][0] - 0.4267766953).abs() < 1e-10);
    }

    #[test]
    fn row_summing_past_one_is_rejected() {
        let mut rows = [[0.125; 8]; 8];
        rows[3][0] += 0.1;
        assert!(matches!(make_box3(rows, NEG_TOL), Err(Error::NotNormalized { row: 3, .. })));
    }

    #[test]
    fn tiny_negative_is_clamped_large_is_rejected() {
        let mut rows = [[0.125; 8]; 8];
        rows[0][0] = 0.25 + 1e-17;
        rows[0][1] = -1e-17;
        rows[0][2] = 0.125;
        let b = make_box3(rows, NEG_TOL).unwrap();
        assert_eq!(b.rows()[0][1], 0.0);

        let mut rows = [[0.125; 8]; 8];
        rows[2][0] = 0.375;
        rows[2][1] = -1e-6;
        rows[2][2] = 1e-6;
        assert!(matches!(
            make_box3(rows, NEG_TOL),
            Err(Error::NegativeProbability { row: 2, col: 1, .. })
        ));
    }

    #[test]
    fn signaling_to_party_three_is_detected() {
        let r = deterministic_o3_eq_i2().no_signaling(1e-12);
        assert!(!r.is_ns);
        assert!((r.max_violation - 1.0).abs() < 1e-15);
        assert_eq!(r.violating_party, Some(3));
    }

    #[test]
    fn pairwise_only_signaling_reports_subset() {
        // o1 xor o3 = i2 with uniform single-party marginals
        let mut rows = [[0.0; 8]; 8];
        for ins in 0..8u8 {
            let i2 = (ins >> 1) & 1;
            for o1 in 0..2u8 {
                rows[ins as usize][index3(o1, 0, o1 ^ i2)] = 0.5;
            }
        }
        let r = Box3::new(rows).unwrap().no_signaling(1e-12);
        assert!(!r.is_ns);
        assert_eq!(r.violating_party, None);
        assert_eq!(r.violating_subset, Some(vec![1, 3]));
    }

    #[test]
    fn mix_rejects_bad_weights() {
        let u = Box3::uniform();
        assert!(matches!(mix(&[u.clone(), u.clone()], &[0.5, 0.6]), Err(Error::BadWeights(_))));
        assert!(matches!(mix(&[u.clone(), u.clone()], &[1.5, -0.5]), Err(Error::BadWeights(_))));
        assert!(matches!(mix(&[u.clone()], &[0.5, 0.5]), Err(Error::BadWeights(_))));
        assert!(matches!(mix::<Box3>(&[], &[]), Err(Error::BadWeights(_))));
    }

    #[test]
    fn mix_identity_and_idempotence() {
        let d = deterministic_o3_eq_i2();
        assert_eq!(mix(&[d.clone()], &[1.0]).unwrap(), d);
        assert!(mix(&[d.clone(), d.clone()], &[0.5, 0.5]).unwrap().max_abs_diff(&d) < 1e-15);
    }

    #[test]
    fn product_factorizes() {
        let p1 = Box1::new([[0.25, 0.75], [1.0, 0.0]]).unwrap();
        let b = Box3::product(&p1, &Box2::uniform());
        assert!((b.p([1, 0, 1], [0, 1, 1]) - 0.75 * 0.25).abs() < 1e-15);
        assert!(b.no_signaling(1e-12).is_ns);
    }

    #[test]
    fn from_flat_checks_length() {
        assert!(matches!(Box3::from_flat(&[0.0; 63], NEG_TOL), Err(Error::Shape(_))));
        assert!(matches!(Box2::from_flat(&[0.25; 15], NEG_TOL), Err(Error::Shape(_))));
    }
}
