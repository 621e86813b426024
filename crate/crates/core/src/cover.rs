//! Euler characteristics, normal Euler numbers and signatures under 2-fold
//! branched covers.
//!
//! Normal Euler numbers are carried in half-units ([`HalfInteger`]) because
//! the quotient of a real curve by complex conjugation has a half-integral
//! relative Euler number.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::curve::{CurveAmbient, CurveSpec, Degree, SpecError};
use crate::genus::genus_tilde;
use num_traits::ToPrimitive;

/// Largest degree (or bidegree entry) the 64-bit pipeline accepts.
pub const MAX_DEGREE: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("parity error: {0}")]
    ParityError(String),
    #[error("signature 2 sigma - e/2 is not an integer for e = {0}")]
    NonIntegerSignature(HalfInteger),
    #[error("halving {0} leaves the half-integers")]
    NonHalfInteger(HalfInteger),
    #[error("degree {0} exceeds the supported maximum {MAX_DEGREE}")]
    DegreeTooLarge(String),
    #[error("b2 and the signature have different parity (b2 = {b2}, sigma = {sigma})")]
    InconsistentSplit { b2: i64, sigma: i64 },
    #[error(transparent)]
    Spec(#[from] SpecError),
}

/// `twice / 2`, exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger {
    twice: i64,
}

impl HalfInteger {
    pub const ZERO: HalfInteger = HalfInteger { twice: 0 };

    pub fn from_int(n: i64) -> Self {
        HalfInteger { twice: 2 * n }
    }

    pub fn from_half_units(twice: i64) -> Self {
        HalfInteger { twice }
    }

    pub fn half_units(self) -> i64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn to_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.twice / 2)
    }
}

impl std::ops::Add for HalfInteger {
    type Output = HalfInteger;
    fn add(self, rhs: HalfInteger) -> HalfInteger {
        HalfInteger {
            twice: self.twice + rhs.twice,
        }
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_integer() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{}/2", self.twice),
        }
    }
}

impl Serialize for HalfInteger {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.to_integer() {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_str(&self.to_string()),
        }
    }
}

/// Euler characteristic and normal Euler number of a surface in a 4-manifold.
///
/// Closed surfaces have integral `e`; closed orientable ones have even `chi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceData {
    pub chi: i64,
    pub e: HalfInteger,
    pub orientable: bool,
    pub closed: bool,
}

impl SurfaceData {
    pub fn closed(chi: i64, e: i64, orientable: bool) -> Self {
        SurfaceData {
            chi,
            e: HalfInteger::from_int(e),
            orientable,
            closed: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftRelation {
    /// The surface meets the branch locus transversely; its preimage double
    /// covers it.
    Transverse,
    /// The surface lies in the branch locus.
    InBranchLocus,
}

/// Normal Euler number of the preimage surface in the double cover.
pub fn lift_euler(e_base: HalfInteger, relation: LiftRelation) -> Result<HalfInteger, CoverError> {
    match relation {
        LiftRelation::Transverse => Ok(HalfInteger::from_half_units(2 * e_base.twice)),
        LiftRelation::InBranchLocus if e_base.twice % 2 == 0 => {
            Ok(HalfInteger::from_half_units(e_base.twice / 2))
        }
        LiftRelation::InBranchLocus => Err(CoverError::NonHalfInteger(e_base)),
    }
}

/// `chi` of the double cover of a base with characteristic `chi_base`
/// branched along a surface with characteristic `chi_branch`.
pub fn riemann_hurwitz_chi(chi_base: i64, chi_branch: i64) -> i64 {
    2 * chi_base - chi_branch
}

/// `sigma(Y) = 2 sigma(X) - e(X, A)/2`.
pub fn hirzebruch_signature(sigma_base: i64, e_branch: HalfInteger) -> Result<i64, CoverError> {
    if e_branch.twice % 4 != 0 {
        return Err(CoverError::NonIntegerSignature(e_branch));
    }
    Ok(2 * sigma_base - e_branch.twice / 4)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingSign {
    Positive,
    Negative,
}

/// Smoothing a transverse double point lowers `chi` by one and moves `e` by
/// `+-2`. The result is treated as non-orientable.
pub fn smooth_crossings(s: SurfaceData, signs: &[CrossingSign]) -> SurfaceData {
    let shift: i64 = signs
        .iter()
        .map(|sign| match sign {
            CrossingSign::Positive => 2,
            CrossingSign::Negative => -2,
        })
        .sum();
    if signs.is_empty() {
        return s;
    }
    SurfaceData {
        chi: s.chi - signs.len() as i64,
        e: s.e + HalfInteger::from_int(shift),
        orientable: false,
        closed: s.closed,
    }
}

fn require_odd_positive(m: i64, what: &str) -> Result<(), CoverError> {
    if m < 1 || m % 2 == 0 {
        return Err(CoverError::ParityError(format!("{what} needs an odd positive degree, got {m}")));
    }
    Ok(())
}

/// Arnold surface of an odd-degree plane curve with `chi(F) = chi_f`.
pub fn arnold_surface_odd(m: i64, chi_f: i64) -> Result<SurfaceData, CoverError> {
    require_odd_positive(m, "the Arnold surface")?;
    Ok(SurfaceData::closed(chi_f - m + 1, m * m - 2, false))
}

/// Normal Euler number of the Arnold surface in `S^4` for degree `2k`,
/// given `chi` of the non-orientable half `RP^2_+`.
pub fn arnold_surface_even(k: i64, chi_rp2_plus: i64) -> Result<HalfInteger, CoverError> {
    if k < 1 {
        return Err(CoverError::ParityError(format!("half-degree must be positive, got {k}")));
    }
    Ok(HalfInteger::from_int(2 * k * k - 2 * chi_rp2_plus))
}

/// Self-intersection of the lift of a region surface with characteristic
/// `chi_region`.
pub fn region_surface_euler(chi_region: i64) -> i64 {
    -4 * chi_region
}

/// One stage of the pipeline, for display.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineStep {
    pub label: &'static str,
    pub chi: i64,
    pub e: HalfInteger,
}

/// Invariants along the chain curve, Arnold surface, smoothed surface,
/// double cover.
///
/// `b2_plus + b2_minus = b2 = chi_y - 2` and `b2_plus - b2_minus = sigma_y`,
/// assuming `b1 = b3 = 0` for the cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub chi_f: i64,
    pub e_f: i64,
    pub chi_a: i64,
    pub e_a: HalfInteger,
    pub chi_x: i64,
    pub e_x: HalfInteger,
    pub chi_y: i64,
    pub sigma_y: i64,
    pub b2: i64,
    pub b2_plus: i64,
    pub b2_minus: i64,
    pub steps: Vec<PipelineStep>,
}

/// Everything the generic pipeline needs about one ambient.
struct AmbientData {
    chi_f: i64,
    e_f: i64,
    /// Points of the branch sphere where the quotient meets it.
    branch_points: i64,
    /// The half of the lifted branch sphere glued to the quotient.
    half_piece: (i64, i64),
    /// The surface added before smoothing and its crossings with the
    /// Arnold surface.
    partner: (i64, i64),
    crossings: i64,
    /// Quotient 4-manifold the final cover branches over.
    base: (i64, i64),
}

fn small(n: &num_bigint::BigUint) -> Result<i64, CoverError> {
    n.to_u64()
        .filter(|&v| v <= MAX_DEGREE)
        .map(|v| v as i64)
        .ok_or_else(|| CoverError::DegreeTooLarge(n.to_string()))
}

fn ambient_data(spec: &CurveSpec) -> Result<AmbientData, CoverError> {
    spec.validate()?;
    match (&spec.ambient, &spec.degree) {
        (CurveAmbient::ProjectivePlane, Degree::Single(m)) => {
            let m = small(m)?;
            require_odd_positive(m, "the plane pipeline")?;
            let chi_f = if spec.orientable {
                -m * m + 3 * m
            } else {
                match &spec.chi_f {
                    Some(chi) => chi
                        .to_i64()
                        .ok_or_else(|| CoverError::DegreeTooLarge(chi.to_string()))?,
                    None => genus_tilde(m * m).value,
                }
            };
            Ok(AmbientData {
                chi_f,
                e_f: m * m,
                branch_points: m,
                // Half of the sphere over the conic, inside the quotient of
                // CP^2 by conjugation.
                half_piece: (1, -2),
                // The lifted real plane, meeting the Arnold surface along
                // the lifted real curve.
                partner: (1, 1),
                crossings: m,
                // CPbar^2 as the quotient of S^4 branched over the sphere
                // with e = +2.
                base: (3, -1),
            })
        }
        (CurveAmbient::Hyperboloid, Degree::Bi(a, b)) => {
            let (a, b) = (small(a)?, small(b)?);
            if a % 2 == 0 || b % 2 == 0 {
                return Err(CoverError::ParityError(format!(
                    "the hyperboloid pipeline needs odd bidegree, got ({a},{b})"
                )));
            }
            Ok(AmbientData {
                chi_f: -2 * a * b + 2 * a + 2 * b,
                e_f: 2 * a * b,
                branch_points: a + b,
                half_piece: (0, 0),
                partner: (0, 2),
                crossings: a + b,
                base: (4, -2),
            })
        }
        (CurveAmbient::Ellipsoid, Degree::Single(m)) => {
            let m = small(m)?;
            require_odd_positive(m, "the ellipsoid pipeline")?;
            Ok(AmbientData {
                chi_f: 2 - 2 * (m - 1) * (m - 1),
                e_f: 2 * m * m,
                branch_points: 2 * m,
                half_piece: (2, -4),
                partner: (0, 2),
                crossings: 2 * m,
                base: (6, -4),
            })
        }
        _ => Err(SpecError::InvalidSpec("ambient and degree kind disagree".into()).into()),
    }
}

/// Runs the full chain for a curve and reports every invariant.
pub fn pipeline(spec: &CurveSpec) -> Result<CoverReport, CoverError> {
    let d = ambient_data(spec)?;
    let mut steps = Vec::new();
    let curve = PipelineStep {
        label: "curve F",
        chi: d.chi_f,
        e: HalfInteger::from_int(d.e_f),
    };
    steps.push(curve.clone());

    // Quotient by conjugation: half of everything.
    if d.chi_f % 2 != 0 {
        return Err(CoverError::ParityError(format!(
            "chi(F) = {} must be even to pass to the quotient",
            d.chi_f
        )));
    }
    let quotient = PipelineStep {
        label: "quotient F/conj",
        chi: d.chi_f / 2,
        e: HalfInteger::from_half_units(d.e_f),
    };
    steps.push(quotient.clone());

    // Closure in the next cover: branched at the real points over the
    // branch sphere.
    let closure = PipelineStep {
        label: "closure of the quotient",
        chi: riemann_hurwitz_chi(quotient.chi, d.branch_points),
        e: lift_euler(quotient.e, LiftRelation::Transverse)?,
    };
    steps.push(closure.clone());

    let arnold = PipelineStep {
        label: "Arnold surface",
        chi: closure.chi + d.half_piece.0,
        e: closure.e + HalfInteger::from_int(d.half_piece.1),
    };
    steps.push(arnold.clone());

    let union = PipelineStep {
        label: "immersed union",
        chi: arnold.chi + d.partner.0 - d.crossings,
        e: arnold.e + HalfInteger::from_int(d.partner.1),
    };
    steps.push(union.clone());

    let smoothed = smooth_crossings(
        SurfaceData {
            chi: union.chi,
            e: union.e,
            orientable: false,
            closed: true,
        },
        &vec![CrossingSign::Positive; d.crossings as usize],
    );
    steps.push(PipelineStep {
        label: "smoothed surface X",
        chi: smoothed.chi,
        e: smoothed.e,
    });

    let (chi_base, sigma_base) = d.base;
    let chi_y = riemann_hurwitz_chi(chi_base, smoothed.chi);
    let sigma_y = hirzebruch_signature(sigma_base, smoothed.e)?;
    let b2 = chi_y - 2;
    if (b2 + sigma_y) % 2 != 0 {
        return Err(CoverError::InconsistentSplit { b2, sigma: sigma_y });
    }
    Ok(CoverReport {
        chi_f: d.chi_f,
        e_f: d.e_f,
        chi_a: arnold.chi,
        e_a: arnold.e,
        chi_x: smoothed.chi,
        e_x: smoothed.e,
        chi_y,
        sigma_y,
        b2,
        b2_plus: (b2 + sigma_y) / 2,
        b2_minus: (b2 - sigma_y) / 2,
        steps,
    })
}
