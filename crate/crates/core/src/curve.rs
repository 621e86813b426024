//! Numerical data of the curve under test.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scheme::Ambient;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveAmbient {
    ProjectivePlane,
    Hyperboloid,
    Ellipsoid,
}

impl fmt::Display for CurveAmbient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveAmbient::ProjectivePlane => "cp2",
            CurveAmbient::Hyperboloid => "hyperboloid",
            CurveAmbient::Ellipsoid => "ellipsoid",
        })
    }
}

/// Degree `m` in the plane or on the ellipsoid, bidegree `(a, b)` on the
/// hyperboloid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Degree {
    Single(BigUint),
    Bi(BigUint, BigUint),
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Single(m) => write!(f, "{m}"),
            Degree::Bi(a, b) => write!(f, "({a},{b})"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("invalid curve: {0}")]
    InvalidSpec(String),
    #[error("a non-orientable curve needs its Euler characteristic (or extremal mode)")]
    MissingChi,
}

/// The flexible curve being tested.
///
/// `chi_f` is required for non-orientable curves unless `extremal_chi` is
/// set, in which case the extremal value `g~(m^2)` is substituted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSpec {
    pub ambient: CurveAmbient,
    pub degree: Degree,
    pub orientable: bool,
    pub chi_f: Option<BigInt>,
    pub q_flexible: bool,
    pub extremal_chi: bool,
}

impl CurveSpec {
    /// An orientable, Q-flexible plane curve of degree `m`.
    pub fn plane(m: u64) -> Self {
        CurveSpec {
            ambient: CurveAmbient::ProjectivePlane,
            degree: Degree::Single(BigUint::from(m)),
            orientable: true,
            chi_f: None,
            q_flexible: true,
            extremal_chi: false,
        }
    }

    pub fn plane_nonorientable(m: u64, chi_f: Option<i64>) -> Self {
        CurveSpec {
            orientable: false,
            chi_f: chi_f.map(BigInt::from),
            extremal_chi: chi_f.is_none(),
            ..CurveSpec::plane(m)
        }
    }

    pub fn hyperboloid(a: u64, b: u64) -> Self {
        CurveSpec {
            ambient: CurveAmbient::Hyperboloid,
            degree: Degree::Bi(BigUint::from(a), BigUint::from(b)),
            ..CurveSpec::plane(1)
        }
    }

    pub fn ellipsoid(m: u64) -> Self {
        CurveSpec {
            ambient: CurveAmbient::Ellipsoid,
            ..CurveSpec::plane(m)
        }
    }

    pub fn single_degree(&self) -> Option<&BigUint> {
        match &self.degree {
            Degree::Single(m) => Some(m),
            Degree::Bi(..) => None,
        }
    }

    pub fn bidegree(&self) -> Option<(&BigUint, &BigUint)> {
        match &self.degree {
            Degree::Bi(a, b) => Some((a, b)),
            Degree::Single(_) => None,
        }
    }

    /// Odd single degree (the plane curves carrying a pseudo-line).
    pub fn is_odd_degree(&self) -> bool {
        self.single_degree().is_some_and(|m| m.is_odd())
    }

    /// Scheme ambient matching this curve.
    pub fn scheme_ambient(&self) -> Ambient {
        match self.ambient {
            CurveAmbient::ProjectivePlane if self.is_odd_degree() => Ambient::ProjectivePlaneOdd,
            CurveAmbient::ProjectivePlane => Ambient::ProjectivePlaneEven,
            CurveAmbient::Hyperboloid => Ambient::Hyperboloid,
            CurveAmbient::Ellipsoid => Ambient::Ellipsoid,
        }
    }

    /// Shape checks that do not depend on any bound.
    pub fn validate(&self) -> Result<(), SpecError> {
        let invalid = |msg: String| Err(SpecError::InvalidSpec(msg));
        match (&self.ambient, &self.degree) {
            (CurveAmbient::Hyperboloid, Degree::Bi(a, b)) => {
                if a.is_zero() || b.is_zero() {
                    return invalid(format!("bidegree ({a},{b}) must be positive"));
                }
            }
            (CurveAmbient::Hyperboloid, Degree::Single(_)) => {
                return invalid("the hyperboloid takes a bidegree".into());
            }
            (_, Degree::Bi(..)) => {
                return invalid(format!("the {} takes a single degree", self.ambient));
            }
            (_, Degree::Single(m)) => {
                if m.is_zero() {
                    return invalid("degree must be positive".into());
                }
            }
        }
        if self.orientable {
            if self.chi_f.is_some() || self.extremal_chi {
                return invalid("Euler characteristic options apply to non-orientable curves".into());
            }
            return Ok(());
        }
        if self.ambient != CurveAmbient::ProjectivePlane {
            return invalid("non-orientable curves are only modelled in the projective plane".into());
        }
        match &self.chi_f {
            Some(chi) if chi.is_odd() => {
                invalid(format!("a non-orientable flexible curve has even Euler characteristic, got {chi}"))
            }
            Some(chi) if chi > &BigInt::zero() => {
                invalid(format!("a non-orientable surface has Euler characteristic <= 0 here, got {chi}"))
            }
            Some(_) => Ok(()),
            None if self.extremal_chi => Ok(()),
            None => Err(SpecError::MissingChi),
        }
    }

    /// Degree as a small integer, when it fits.
    pub fn degree_u64(&self) -> Option<u64> {
        self.single_degree().and_then(ToPrimitive::to_u64)
    }
}
