//! The non-orientable genus function `g~` of `CP²`: the largest Euler
//! characteristic of a non-orientable closed surface with a given normal
//! Euler number.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::exec::Execution;
use crate::quad_forms::{guillou_marin_check, GmVerdict, Preset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenusError {
    #[error("out of domain: {0}")]
    OutOfDomain(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GenusStatus {
    Exact,
    /// Realised by a construction; equality is conjectural.
    LowerBoundOnly,
}

/// Invariant: `value <= 1`; `LowerBoundOnly` exactly on odd arguments `>= 11`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GenusValue {
    pub value: i64,
    pub status: GenusStatus,
}

impl GenusValue {
    fn exact(value: i64) -> Self {
        GenusValue {
            value,
            status: GenusStatus::Exact,
        }
    }
}

pub fn genus_tilde(m: i64) -> GenusValue {
    if m < 0 {
        let k = -m;
        return GenusValue::exact(2 - (k + k % 2) / 2);
    }
    match m {
        0 | 1 | 4 | 5 => GenusValue::exact(0),
        2 | 3 => GenusValue::exact(1),
        7 => GenusValue::exact(-1),
        9 => GenusValue::exact(-2),
        _ => {
            let k = m / 4;
            match m % 4 {
                0 => GenusValue::exact(4 - 2 * k),
                2 => GenusValue::exact(3 - 2 * k),
                1 => GenusValue {
                    value: 2 - 2 * k,
                    status: GenusStatus::LowerBoundOnly,
                },
                _ => GenusValue {
                    value: 1 - 2 * k,
                    status: GenusStatus::LowerBoundOnly,
                },
            }
        }
    }
}

/// `g~(m)` for every `m` in `lo..=hi`.
pub fn genus_table(lo: i64, hi: i64) -> Vec<(i64, GenusValue)> {
    (lo..=hi).map(|m| (m, genus_tilde(m))).collect()
}

/// Normal Euler numbers a closed non-orientable surface with Euler
/// characteristic `chi` can have in `S^4`: `2chi - 4, 2chi, ..., 4 - 2chi`.
pub fn whitney_massey_admissible(chi: i64) -> Result<Vec<i64>, GenusError> {
    if chi >= 2 {
        return Err(GenusError::OutOfDomain(format!(
            "a non-orientable surface has Euler characteristic <= 1, got {chi}"
        )));
    }
    Ok((0..3 - chi).map(|i| 2 * chi - 4 + 4 * i).collect())
}

/// Building blocks for surfaces in `CP²`, joined by small tubes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Piece {
    /// Surface in a 4-ball: connected sum of `genus` projective planes with
    /// the given normal Euler number.
    Local { genus: u32, self_int: i64 },
    /// A complex line: sphere with `e = +1`.
    Line,
    /// A conic: sphere with `e = +4`.
    Conic,
    /// The fixed locus of conjugation: projective plane with `e = -1`.
    StandardRp2,
}

impl Piece {
    pub fn chi(self) -> i64 {
        match self {
            Piece::Local { genus, .. } => 2 - i64::from(genus),
            Piece::Line | Piece::Conic => 2,
            Piece::StandardRp2 => 1,
        }
    }

    pub fn euler(self) -> i64 {
        match self {
            Piece::Local { self_int, .. } => self_int,
            Piece::Line => 1,
            Piece::Conic => 4,
            Piece::StandardRp2 => -1,
        }
    }
}

/// A surface assembled from pieces; tubing `n` pieces together costs
/// `2(n - 1)` in Euler characteristic and leaves `e` additive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Construction {
    pub pieces: Vec<Piece>,
    pub achieved_e: i64,
    pub achieved_chi: i64,
}

impl Construction {
    fn tube(pieces: Vec<Piece>) -> Self {
        let n = pieces.len() as i64;
        Construction {
            achieved_e: pieces.iter().map(|p| p.euler()).sum(),
            achieved_chi: pieces.iter().map(|p| p.chi()).sum::<i64>() - 2 * (n - 1),
            pieces,
        }
    }

    /// The local piece, if any.
    pub fn local(&self) -> Option<(u32, i64)> {
        self.pieces.iter().find_map(|p| match *p {
            Piece::Local { genus, self_int } => Some((genus, self_int)),
            _ => None,
        })
    }

    /// Every local piece's `(e, chi)` is Whitney–Massey admissible.
    pub fn local_admissible(&self) -> bool {
        self.pieces.iter().all(|p| match *p {
            Piece::Local { self_int, .. } => whitney_massey_admissible(p.chi())
                .map(|range| range.contains(&self_int))
                .unwrap_or(false),
            _ => true,
        })
    }
}

fn local(genus: i64, self_int: i64) -> Piece {
    Piece::Local {
        genus: u32::try_from(genus).expect("construction genus is non-negative"),
        self_int,
    }
}

/// A surface with normal Euler number `e_target` and Euler characteristic
/// `g~(e_target)` (the proven lower bound where `g~` is not known exactly).
pub fn plan_construction(e_target: i64) -> Construction {
    let m = e_target;
    let pieces = if m < 0 {
        let k = -m;
        let p = k / 2;
        if k % 2 == 0 {
            vec![local(p, -2 * p)]
        } else {
            vec![local(p + 1, -2 * (p + 1)), Piece::Line]
        }
    } else {
        let k = m / 4;
        match (m, m % 4) {
            (0, _) => vec![local(2, 0)],
            (1, _) => vec![local(2, 0), Piece::Line],
            (2, _) => vec![local(1, 2)],
            (3, _) => vec![Piece::Conic, Piece::StandardRp2],
            (4, _) => vec![local(2, 4)],
            (_, 0) => vec![local(2 * (k - 1), 4 * (k - 1)), Piece::Conic],
            (_, 2) => vec![local(2 * k - 1, 4 * k - 2), Piece::Conic],
            (_, 1) => vec![local(2 * k, 4 * k), Piece::Line],
            _ => vec![local(2 * k + 1, 4 * k + 2), Piece::Line],
        }
    };
    Construction::tube(pieces)
}

/// Guillou–Marin test for a characteristic surface (odd `e`) in `CP²` with
/// `chi = 1` or `chi = 0`, using the projective-plane and Klein-bottle
/// refinement tables. `None` when neither table applies.
pub fn gm_obstruction(e: i64, chi: i64) -> Option<GmVerdict> {
    const SIGMA_CP2: i64 = 1;
    if e % 2 == 0 {
        return None;
    }
    let betas: BTreeSet<u8> = match chi {
        1 => Preset::Rp2.betas(Execution::Sequential),
        0 => Preset::Klein.betas(Execution::Sequential),
        _ => return None,
    };
    guillou_marin_check(SIGMA_CP2, e, &betas).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad_forms::{yamada_consistent, GmStatus};

    #[test]
    fn special_values() {
        let expected = [(0, 0), (1, 0), (2, 1), (3, 1), (4, 0), (5, 0), (7, -1), (9, -2)];
        for (m, v) in expected {
            assert_eq!(genus_tilde(m), GenusValue::exact(v), "m = {m}");
        }
    }

    #[test]
    fn formula_values() {
        assert_eq!(genus_tilde(-5), GenusValue::exact(-1));
        assert_eq!(genus_tilde(8), GenusValue::exact(0));
        assert_eq!(genus_tilde(6), GenusValue::exact(1));
        assert_eq!(genus_tilde(10), GenusValue::exact(-1));
        assert_eq!(genus_tilde(13).value, -4);
        assert_eq!(genus_tilde(13).status, GenusStatus::LowerBoundOnly);
        assert_eq!(genus_tilde(11).value, -3);
        assert_eq!(genus_tilde(15).value, -5);
    }

    #[test]
    fn whitney_massey() {
        assert_eq!(whitney_massey_admissible(1).unwrap(), vec![-2, 2]);
        assert_eq!(whitney_massey_admissible(0).unwrap(), vec![-4, 0, 4]);
        assert_eq!(whitney_massey_admissible(-1).unwrap(), vec![-6, -2, 2, 6]);
        assert!(whitney_massey_admissible(2).is_err());
    }

    #[test]
    fn constructions() {
        let c = plan_construction(8);
        assert_eq!(c.local(), Some((2, 4)));
        assert_eq!(c.pieces[1], Piece::Conic);
        assert_eq!((c.achieved_e, c.achieved_chi), (8, 0));
        let c = plan_construction(-5);
        assert_eq!(c.local(), Some((3, -6)));
        assert_eq!((c.achieved_e, c.achieved_chi), (-5, -1));
        let c = plan_construction(2);
        assert_eq!(c.pieces, vec![local(1, 2)]);
        assert_eq!((c.achieved_e, c.achieved_chi), (2, 1));
        let c = plan_construction(3);
        assert_eq!((c.achieved_e, c.achieved_chi), (3, 1));
    }

    #[test]
    fn constructions_reach_the_table() {
        for m in -60..=60 {
            let c = plan_construction(m);
            assert_eq!((c.achieved_e, c.achieved_chi), (m, genus_tilde(m).value), "m = {m}");
            assert!(c.local_admissible(), "m = {m}");
        }
    }

    #[test]
    fn upper_bounds_at_seven_and_nine() {
        // chi = 1 at e = 7 and chi = 0 at e = 9 are excluded by Guillou–Marin.
        assert_eq!(gm_obstruction(7, 1).unwrap().status, GmStatus::Contradiction);
        assert_eq!(gm_obstruction(9, 0).unwrap().status, GmStatus::Contradiction);
        // The remaining candidates fail the Yamada parity.
        assert!(!yamada_consistent(7, 0, 1));
        assert!(!yamada_consistent(9, 1, 1));
        // Realised values pass both tests.
        assert_eq!(gm_obstruction(5, 0).unwrap().status, GmStatus::Consistent);
        assert_eq!(gm_obstruction(3, 1).unwrap().status, GmStatus::Consistent);
        assert!(gm_obstruction(4, 0).is_none());
    }
}
