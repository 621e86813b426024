//! `Z/4`-valued quadratic refinements of `Z/2` pairings and their Brown
//! invariants.
//!
//! A form of rank `b` stores the pairing as one bitmask row per basis vector
//! and the refinement on the basis. Values on other vectors follow from
//! `phi(x + y) = phi(x) + phi(y) + 2 B(x, y)`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{self, Execution};

/// Largest rank a form may have.
pub const MAX_FORM_RANK: usize = 64;
/// Largest rank whose Gauss sum is enumerated.
pub const MAX_GAUSS_RANK: usize = 30;
const GRAY_BLOCK_BITS: usize = 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("pairing is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("entry ({0},{1}) of the pairing is not 0 or 1")]
    NotBinary(usize, usize),
    #[error("phi({index}) = {phi} does not have the parity of B({index},{index}) = {diagonal}")]
    ParityViolation { index: usize, phi: u8, diagonal: u8 },
    #[error("rank {rank} exceeds the limit {max}")]
    RankTooLarge { rank: usize, max: usize },
    #[error("Gauss sum {re} + {im}i is not 2^(b/2) times an eighth root of unity")]
    DegenerateForm { re: i64, im: i64 },
    #[error("new basis vectors are linearly dependent")]
    NotInvertible,
    #[error("sigma - e = {0} is odd")]
    OddDifference(i64),
    #[error("parity error: {0}")]
    ParityError(String),
}

/// Pairing plus refinement on a basis.
///
/// Invariants: the pairing is symmetric and `phi[i] = B(i,i) mod 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    rows: Vec<u64>,
    phi: Vec<u8>,
}

/// JSON shape of a form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormData {
    pub rank: usize,
    pub bilinear: Vec<Vec<u8>>,
    pub phi: Vec<u8>,
}

fn check_rank(rank: usize) -> Result<(), FormError> {
    if rank > MAX_FORM_RANK {
        return Err(FormError::RankTooLarge {
            rank,
            max: MAX_FORM_RANK,
        });
    }
    Ok(())
}

fn bit(row: u64, j: usize) -> u8 {
    ((row >> j) & 1) as u8
}

impl QuadraticForm {
    /// Builds a form from a 0/1 matrix and basis values (taken mod 4).
    pub fn new(bilinear: &[Vec<u8>], phi: &[u8]) -> Result<Self, FormError> {
        let rank = bilinear.len();
        check_rank(rank)?;
        let mut rows = Vec::with_capacity(rank);
        for (i, row) in bilinear.iter().enumerate() {
            if row.len() != rank {
                return Err(FormError::DimensionMismatch {
                    expected: rank,
                    got: row.len(),
                });
            }
            let mut mask = 0u64;
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => mask |= 1 << j,
                    _ => return Err(FormError::NotBinary(i, j)),
                }
            }
            rows.push(mask);
        }
        QuadraticForm::from_rows(rows, phi)
    }

    /// Builds a form from bitmask rows (`rows[i] >> j & 1 = B(i,j)`).
    pub fn from_rows(rows: Vec<u64>, phi: &[u8]) -> Result<Self, FormError> {
        let rank = rows.len();
        check_rank(rank)?;
        if phi.len() != rank {
            return Err(FormError::DimensionMismatch {
                expected: rank,
                got: phi.len(),
            });
        }
        if let Some(wide) = rows.iter().find(|&&r| rank < 64 && r >> rank != 0) {
            return Err(FormError::DimensionMismatch {
                expected: rank,
                got: 64 - wide.leading_zeros() as usize,
            });
        }
        for i in 0..rank {
            for j in 0..i {
                if bit(rows[i], j) != bit(rows[j], i) {
                    return Err(FormError::NotSymmetric(i, j));
                }
            }
        }
        let phi: Vec<u8> = phi.iter().map(|p| p % 4).collect();
        for (i, &p) in phi.iter().enumerate() {
            let diagonal = bit(rows[i], i);
            if p % 2 != diagonal {
                return Err(FormError::ParityViolation {
                    index: i,
                    phi: p,
                    diagonal,
                });
            }
        }
        Ok(QuadraticForm { rows, phi })
    }

    pub fn from_data(data: &FormData) -> Result<Self, FormError> {
        if data.bilinear.len() != data.rank {
            return Err(FormError::DimensionMismatch {
                expected: data.rank,
                got: data.bilinear.len(),
            });
        }
        QuadraticForm::new(&data.bilinear, &data.phi)
    }

    pub fn to_data(&self) -> FormData {
        let rank = self.rank();
        FormData {
            rank,
            bilinear: self
                .rows
                .iter()
                .map(|&r| (0..rank).map(|j| bit(r, j)).collect())
                .collect(),
            phi: self.phi.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn phi(&self) -> &[u8] {
        &self.phi
    }

    fn span_mask(&self) -> u64 {
        if self.rank() >= 64 {
            !0
        } else {
            (1u64 << self.rank()) - 1
        }
    }

    /// `B(x, y)` for bitmask vectors; bits beyond the rank are ignored.
    pub fn pairing(&self, x: u64, y: u64) -> u8 {
        let mut acc = 0u32;
        let mut rest = x & self.span_mask();
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            acc += (self.rows[i] & y).count_ones();
            rest &= rest - 1;
        }
        (acc % 2) as u8
    }

    /// `phi(x)` for a bitmask vector; bits beyond the rank are ignored.
    pub fn value(&self, x: u64) -> u8 {
        let x = x & self.span_mask();
        let mut acc = 0u32;
        let mut rest = x;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            acc += u32::from(self.phi[i]);
            // Pairs i < j, each counted once.
            let above = if i + 1 >= 64 { 0 } else { x & (!0u64 << (i + 1)) };
            acc += 2 * (self.rows[i] & above).count_ones();
            rest &= rest - 1;
        }
        (acc % 4) as u8
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &QuadraticForm) -> Result<Self, FormError> {
        let shift = self.rank();
        check_rank(shift + other.rank())?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().map(|r| r << shift));
        let mut phi = self.phi.clone();
        phi.extend_from_slice(&other.phi);
        QuadraticForm::from_rows(rows, &phi)
    }

    /// The same form written in the basis `new_basis` (bitmask coordinates
    /// in the current basis).
    pub fn change_basis(&self, new_basis: &[u64]) -> Result<Self, FormError> {
        let rank = self.rank();
        if new_basis.len() != rank {
            return Err(FormError::DimensionMismatch {
                expected: rank,
                got: new_basis.len(),
            });
        }
        if let Some(wide) = new_basis.iter().find(|&&v| rank < 64 && v >> rank != 0) {
            return Err(FormError::DimensionMismatch {
                expected: rank,
                got: 64 - wide.leading_zeros() as usize,
            });
        }
        if gf2_rank(new_basis) != rank {
            return Err(FormError::NotInvertible);
        }
        let rows = new_basis
            .iter()
            .map(|&v| {
                new_basis
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, &w)| acc | (u64::from(self.pairing(v, w)) << j))
            })
            .collect();
        let phi: Vec<u8> = new_basis.iter().map(|&v| self.value(v)).collect();
        QuadraticForm::from_rows(rows, &phi)
    }
}

/// Rank over `Z/2` of a list of bitmask vectors.
pub fn gf2_rank(vectors: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let mut x = v;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// `phi(x)` for a 0/1 coordinate vector.
pub fn evaluate_form(q: &QuadraticForm, x: &[u8]) -> Result<u8, FormError> {
    if x.len() != q.rank() {
        return Err(FormError::DimensionMismatch {
            expected: q.rank(),
            got: x.len(),
        });
    }
    let mask = x
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &v)| acc | (u64::from(v & 1) << i));
    Ok(q.value(mask))
}

/// Exact Gaussian integer `re + im i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub fn norm(self) -> i128 {
        i128::from(self.re) * i128::from(self.re) + i128::from(self.im) * i128::from(self.im)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BrownResult {
    /// Residue mod 8.
    pub beta: u8,
    pub gauss_sum: GaussianInt,
}

/// Counts of `phi = 0, 1, 2, 3` over the vectors `base ^ y`, `y` ranging
/// over the low `bits` coordinates.
fn gray_block(q: &QuadraticForm, base: u64, bits: usize) -> [u64; 4] {
    let mut counts = [0u64; 4];
    let mut x = base;
    let mut phi = q.value(x);
    counts[phi as usize] += 1;
    for k in 1u64..(1u64 << bits) {
        let i = k.trailing_zeros() as usize;
        // phi(x + e_i) = phi(x) + phi(e_i) + 2 B(x, e_i), in either direction.
        let cross = ((q.rows[i] & x).count_ones() % 2) as u8;
        phi = (phi + q.phi[i] + 2 * cross) % 4;
        x ^= 1 << i;
        counts[phi as usize] += 1;
    }
    counts
}

/// `sum_x i^phi(x)` over all `2^b` vectors.
pub fn gauss_sum(q: &QuadraticForm, exec: Execution) -> Result<GaussianInt, FormError> {
    let rank = q.rank();
    if rank > MAX_GAUSS_RANK {
        return Err(FormError::RankTooLarge {
            rank,
            max: MAX_GAUSS_RANK,
        });
    }
    let low = rank.min(GRAY_BLOCK_BITS);
    let blocks = 1u64 << (rank - low);
    let per_block = exec::map_range(exec, 0..blocks, |hi| gray_block(q, hi << low, low));
    let mut counts = [0i64; 4];
    for block in per_block {
        for (c, b) in counts.iter_mut().zip(block) {
            *c += b as i64;
        }
    }
    Ok(GaussianInt {
        re: counts[0] - counts[2],
        im: counts[1] - counts[3],
    })
}

/// Reads `beta` off an exact Gauss sum of a rank-`b` form.
pub fn beta_from_sum(rank: usize, sum: GaussianInt) -> Result<u8, FormError> {
    let degenerate = Err(FormError::DegenerateForm {
        re: sum.re,
        im: sum.im,
    });
    if rank.is_multiple_of(2) {
        let s = 1i64 << (rank / 2);
        match (sum.re, sum.im) {
            (re, 0) if re == s => Ok(0),
            (0, im) if im == s => Ok(2),
            (re, 0) if re == -s => Ok(4),
            (0, im) if im == -s => Ok(6),
            _ => degenerate,
        }
    } else {
        let t = 1i64 << (rank / 2);
        match (sum.re / t, sum.im / t, sum.re % t == 0 && sum.im % t == 0) {
            (1, 1, true) => Ok(1),
            (-1, 1, true) => Ok(3),
            (-1, -1, true) => Ok(5),
            (1, -1, true) => Ok(7),
            _ => degenerate,
        }
    }
}

/// Brown invariant of a non-degenerate form.
pub fn brown(q: &QuadraticForm, exec: Execution) -> Result<BrownResult, FormError> {
    let gauss_sum = gauss_sum(q, exec)?;
    Ok(BrownResult {
        beta: beta_from_sum(q.rank(), gauss_sum)?,
        gauss_sum,
    })
}

/// Brown invariants of every refinement allowed by `phi_choices`.
pub fn enumerate_betas(
    rows: &[u64],
    phi_choices: &[Vec<u8>],
    exec: Execution,
) -> Result<BTreeSet<u8>, FormError> {
    if phi_choices.len() != rows.len() {
        return Err(FormError::DimensionMismatch {
            expected: rows.len(),
            got: phi_choices.len(),
        });
    }
    for (i, choices) in phi_choices.iter().enumerate() {
        let diagonal = bit(rows[i], i);
        if let Some(&bad) = choices.iter().find(|&&p| p % 2 != diagonal) {
            return Err(FormError::ParityViolation {
                index: i,
                phi: bad % 4,
                diagonal,
            });
        }
    }
    let mut betas = BTreeSet::new();
    let mut pick = vec![0usize; rows.len()];
    if phi_choices.iter().any(Vec::is_empty) {
        return Ok(betas);
    }
    loop {
        let phi: Vec<u8> = pick.iter().zip(phi_choices).map(|(&k, c)| c[k]).collect();
        let q = QuadraticForm::from_rows(rows.to_vec(), &phi)?;
        betas.insert(brown(&q, exec)?.beta);
        // Odometer over the Cartesian product.
        let mut i = 0;
        loop {
            if i == pick.len() {
                return Ok(betas);
            }
            pick[i] += 1;
            if pick[i] < phi_choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GmStatus {
    Consistent,
    Contradiction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GmVerdict {
    /// Residue mod 8 that `beta` would have to take.
    pub required: u8,
    pub status: GmStatus,
}

/// `sigma - e = 2 beta mod 16` against the admissible `beta` values.
pub fn guillou_marin_check(
    sigma: i64,
    e: i64,
    beta_set: &BTreeSet<u8>,
) -> Result<GmVerdict, FormError> {
    let diff = sigma - e;
    if diff % 2 != 0 {
        return Err(FormError::OddDifference(diff));
    }
    let required = (diff / 2).rem_euclid(8) as u8;
    let status = if beta_set.contains(&required) {
        GmStatus::Consistent
    } else {
        GmStatus::Contradiction
    };
    Ok(GmVerdict { required, status })
}

/// `(e + 2 chi) mod 4`.
pub fn yamada_residue(e: i64, chi: i64) -> u8 {
    (e + 2 * chi).rem_euclid(4) as u8
}

/// Whether `(e, chi)` satisfies `e + 2 chi = q mod 4` for the class residue `q`.
pub fn yamada_consistent(e: i64, chi: i64, q: u8) -> bool {
    yamada_residue(e, chi) == q % 4
}

/// `-(m+1)^2 mod 8`, the `beta` forced for the ellipsoid cover.
pub fn ellipsoid_gm_residue(m: i64) -> Result<u8, FormError> {
    if m % 2 == 0 {
        return Err(FormError::ParityError(format!("degree {m} is even")));
    }
    let r = i128::from(m) + 1;
    Ok((-(r * r)).rem_euclid(8) as u8)
}

/// Built-in pairings with their admissible refinement values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// `RP^2`: one generator with odd self-pairing.
    Rp2,
    /// Klein bottle: generators `a`, `b` with `a.a = a.b = 1`, `b.b = 0`.
    Klein,
}

impl Preset {
    pub fn rows(self) -> Vec<u64> {
        match self {
            Preset::Rp2 => vec![0b1],
            Preset::Klein => vec![0b11, 0b01],
        }
    }

    pub fn phi_choices(self) -> Vec<Vec<u8>> {
        match self {
            Preset::Rp2 => vec![vec![1, 3]],
            Preset::Klein => vec![vec![1, 3], vec![0, 2]],
        }
    }

    pub fn betas(self, exec: Execution) -> BTreeSet<u8> {
        enumerate_betas(&self.rows(), &self.phi_choices(), exec)
            .expect("preset choices respect the refinement parity")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein(pa: u8, pb: u8) -> QuadraticForm {
        QuadraticForm::new(&[vec![1, 1], vec![1, 0]], &[pa, pb]).unwrap()
    }

    #[test]
    fn evaluation() {
        let q = klein(1, 0);
        assert_eq!(evaluate_form(&q, &[0, 0]), Ok(0));
        assert_eq!(evaluate_form(&q, &[1, 1]), Ok(3));
        assert_eq!(evaluate_form(&q, &[1, 0]), Ok(1));
        assert_eq!(evaluate_form(&q, &[0, 1]), Ok(0));
        assert!(evaluate_form(&q, &[1]).is_err());
    }

    #[test]
    fn klein_sums() {
        let r = brown(&klein(1, 0), Execution::Sequential).unwrap();
        assert_eq!((r.gauss_sum, r.beta), (GaussianInt { re: 2, im: 0 }, 0));
        let r = brown(&klein(3, 2), Execution::Sequential).unwrap();
        assert_eq!((r.gauss_sum, r.beta), (GaussianInt { re: 0, im: -2 }, 6));
    }

    #[test]
    fn rank_zero() {
        let q = QuadraticForm::new(&[], &[]).unwrap();
        let r = brown(&q, Execution::Sequential).unwrap();
        assert_eq!((r.gauss_sum, r.beta), (GaussianInt { re: 1, im: 0 }, 0));
    }

    #[test]
    fn preset_betas() {
        let e = Execution::Sequential;
        assert_eq!(Preset::Klein.betas(e), BTreeSet::from([0, 2, 6]));
        assert_eq!(Preset::Rp2.betas(e), BTreeSet::from([1, 7]));
        let hyperbolic = enumerate_betas(&[0b10, 0b01], &[vec![0], vec![0]], e).unwrap();
        assert_eq!(hyperbolic, BTreeSet::from([0]));
    }

    #[test]
    fn parity_is_enforced() {
        assert!(matches!(
            QuadraticForm::new(&[vec![1]], &[2]),
            Err(FormError::ParityViolation { .. })
        ));
        assert!(matches!(
            enumerate_betas(&[0b1], &[vec![1, 2]], Execution::Sequential),
            Err(FormError::ParityViolation { .. })
        ));
        assert!(matches!(
            QuadraticForm::new(&[vec![0, 1], vec![0, 0]], &[0, 0]),
            Err(FormError::NotSymmetric(1, 0))
        ));
    }

    #[test]
    fn degenerate_sum_is_reported() {
        let q = QuadraticForm::new(&[vec![0]], &[0]).unwrap();
        assert!(matches!(
            brown(&q, Execution::Sequential),
            Err(FormError::DegenerateForm { re: 2, im: 0 })
        ));
    }

    #[test]
    fn guillou_marin() {
        let rp2 = BTreeSet::from([1, 7]);
        let klein = BTreeSet::from([0, 2, 6]);
        let v = guillou_marin_check(1, 7, &rp2).unwrap();
        assert_eq!((v.required, v.status), (5, GmStatus::Contradiction));
        let v = guillou_marin_check(1, 9, &klein).unwrap();
        assert_eq!((v.required, v.status), (4, GmStatus::Contradiction));
        let v = guillou_marin_check(0, 0, &BTreeSet::from([0])).unwrap();
        assert_eq!(v.status, GmStatus::Consistent);
        assert_eq!(guillou_marin_check(1, 0, &rp2), Err(FormError::OddDifference(1)));
    }

    #[test]
    fn yamada() {
        assert_eq!(yamada_residue(25, -10), 1);
        assert!(yamada_consistent(25, 0, 1));
        assert_eq!(yamada_residue(3, 1), 1);
        assert_eq!(yamada_residue(0, 0), 0);
    }

    #[test]
    fn ellipsoid_residues() {
        assert_eq!(ellipsoid_gm_residue(1), Ok(4));
        assert_eq!(ellipsoid_gm_residue(3), Ok(0));
        assert_eq!(ellipsoid_gm_residue(5), Ok(4));
        assert!(ellipsoid_gm_residue(2).is_err());
    }

    #[test]
    fn polarization_is_consistent_exhaustively() {
        // Every pair of vectors of a rank-6 form.
        let q = klein(1, 2)
            .direct_sum(&klein(3, 0))
            .and_then(|q| q.direct_sum(&klein(1, 0)))
            .unwrap();
        let n = 1u64 << q.rank();
        for x in 0..n {
            assert_eq!(q.value(x) % 2, q.pairing(x, x));
            for y in 0..n {
                let lhs = q.value(x ^ y);
                let rhs = (q.value(x) + q.value(y) + 2 * q.pairing(x, y)) % 4;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn json_shape_round_trip() {
        let q = klein(3, 2);
        assert_eq!(QuadraticForm::from_data(&q.to_data()).unwrap(), q);
    }

    #[test]
    fn chunked_sum_matches_sequential() {
        let mut q = klein(1, 2);
        for k in 0..8 {
            let next = if k % 2 == 0 { klein(3, 0) } else { klein(1, 0) };
            q = q.direct_sum(&next).unwrap();
        }
        assert_eq!(q.rank(), 18);
        assert_eq!(
            gauss_sum(&q, Execution::Sequential),
            gauss_sum(&q, Execution::Parallel)
        );
    }
}
