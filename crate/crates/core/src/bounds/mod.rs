//! Closed-form upper bounds on oval counts, evaluated exactly.

pub mod number_theory;

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::exec::{self, Execution};
pub use number_theory::{factorize, is_prime, largest_prime_power, p_adic_valuation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("cannot factor {0}: no prime factor below the trial limit and too large to certify")]
    FactorizationLimit(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BoundKind {
    /// `(m-1)^2/4` for Q-flexible curves.
    S,
    /// `(m-3)^2/4 + (m^2 - h^2)/(4h^2)`.
    VZ,
    /// `(m-1)(m-3)/4`.
    Zvonilov,
    /// `(ab+1)/2` on the hyperboloid.
    Hyperboloid,
    /// `(m^2+1)/2` on the ellipsoid.
    Ellipsoid,
    /// `-chi/2 - (m^2-1)/4 + m` for non-orientable flexible curves.
    NonOrientable,
    /// `g + 1` components.
    HarnackOrientable,
    /// `3 - chi` components.
    HarnackNonOrientable,
}

impl BoundKind {
    pub fn id(self) -> &'static str {
        match self {
            BoundKind::S => "S",
            BoundKind::VZ => "VZ",
            BoundKind::Zvonilov => "Zvonilov",
            BoundKind::Hyperboloid => "Hyperboloid",
            BoundKind::Ellipsoid => "Ellipsoid",
            BoundKind::NonOrientable => "NOVZ",
            BoundKind::HarnackOrientable => "Harnack",
            BoundKind::HarnackNonOrientable => "HarnackNonOrientable",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// A bound together with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    S { m: BigInt },
    VZ { m: BigInt },
    Zvonilov { m: BigInt },
    Hyperboloid { a: BigInt, b: BigInt },
    Ellipsoid { m: BigInt },
    NonOrientable { m: BigInt, chi: BigInt },
    HarnackOrientable { m: BigInt },
    HarnackNonOrientable { chi: BigInt },
}

impl Bound {
    pub fn kind(&self) -> BoundKind {
        match self {
            Bound::S { .. } => BoundKind::S,
            Bound::VZ { .. } => BoundKind::VZ,
            Bound::Zvonilov { .. } => BoundKind::Zvonilov,
            Bound::Hyperboloid { .. } => BoundKind::Hyperboloid,
            Bound::Ellipsoid { .. } => BoundKind::Ellipsoid,
            Bound::NonOrientable { .. } => BoundKind::NonOrientable,
            Bound::HarnackOrientable { .. } => BoundKind::HarnackOrientable,
            Bound::HarnackNonOrientable { .. } => BoundKind::HarnackNonOrientable,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundValue {
    pub value: BigRational,
    pub kind: BoundKind,
    pub note: String,
}

fn ratio(num: BigInt, den: i64) -> BigRational {
    BigRational::new(num, BigInt::from(den))
}

fn require_odd(m: &BigInt, min: i64, what: &str) -> Result<(), BoundsError> {
    if m.is_even() || m < &BigInt::from(min) {
        return Err(BoundsError::OutOfDomain(format!(
            "{what} needs an odd degree >= {min}, got {m}"
        )));
    }
    Ok(())
}

fn magnitude(m: &BigInt) -> BigUint {
    m.magnitude().clone()
}

/// `S(m) = (m-1)^2/4`; an integer for odd `m`.
pub fn s_bound(m: &BigInt) -> Result<BigRational, BoundsError> {
    require_odd(m, 1, "S")?;
    let v = ratio((m - 1) * (m - 1), 4);
    assert!(v.is_integer(), "S(m) is integral for odd m");
    Ok(v)
}

pub fn vz_bound(m: &BigInt) -> Result<BigRational, BoundsError> {
    require_odd(m, 3, "VZ")?;
    let h = BigInt::from(largest_prime_power(&magnitude(m))?);
    let h2 = &h * &h;
    let first = ratio((m - 3) * (m - 3), 4);
    let second = BigRational::new(m * m - &h2, 4 * h2);
    Ok(first + second)
}

pub fn zvonilov_bound(m: &BigInt) -> Result<BigRational, BoundsError> {
    require_odd(m, 1, "Zvonilov")?;
    Ok(ratio((m - 1) * (m - 3), 4))
}

pub fn evaluate_bound(bound: &Bound) -> Result<BoundValue, BoundsError> {
    let kind = bound.kind();
    let mut note = String::new();
    let value = match bound {
        Bound::S { m } => {
            note.push_str("l0 + l- for Q-flexible curves of odd degree");
            s_bound(m)?
        }
        Bound::VZ { m } => {
            note.push_str("l0 + l- for flexible curves of odd degree");
            vz_bound(m)?
        }
        Bound::Zvonilov { m } => {
            note.push_str("l0 + l-; requires an additional genericity condition independent of Q-flexibility");
            zvonilov_bound(m)?
        }
        Bound::Hyperboloid { a, b } => {
            if a.is_even() || b.is_even() || !a.is_positive() || !b.is_positive() {
                return Err(BoundsError::OutOfDomain(format!(
                    "hyperboloid bound needs odd positive bidegree, got ({a},{b})"
                )));
            }
            note.push_str("l0 + l- on the hyperboloid");
            ratio(a * b + 1, 2)
        }
        Bound::Ellipsoid { m } => {
            require_odd(m, 1, "ellipsoid bound")?;
            note.push_str("regions of non-positive Euler characteristic on the ellipsoid");
            ratio(m * m + 1, 2)
        }
        Bound::NonOrientable { m, chi } => {
            require_odd(m, 1, "non-orientable bound")?;
            if chi.is_odd() || chi > &BigInt::one() {
                return Err(BoundsError::OutOfDomain(format!(
                    "a non-orientable flexible curve has even Euler characteristic <= 0, got {chi}"
                )));
            }
            let v = BigRational::from_integer(-chi) / BigInt::from(2)
                - ratio(m * m - 1, 4)
                + BigRational::from_integer(m.clone());
            note.push_str("l0 + l- for non-orientable Q-flexible curves");
            if v.is_negative() {
                note.push_str("; negative: no such curve exists");
            }
            v
        }
        Bound::HarnackOrientable { m } => {
            if !m.is_positive() {
                return Err(BoundsError::OutOfDomain(format!("degree must be positive, got {m}")));
            }
            note.push_str("b0 <= g + 1");
            ratio((m - 1) * (m - 2), 2) + BigRational::one()
        }
        Bound::HarnackNonOrientable { chi } => {
            if chi > &BigInt::one() {
                return Err(BoundsError::OutOfDomain(format!(
                    "a non-orientable surface has Euler characteristic <= 1, got {chi}"
                )));
            }
            note.push_str("b0 <= 3 - chi");
            BigRational::from_integer(3 - chi)
        }
    };
    Ok(BoundValue { value, kind, note })
}

/// Closed form of `VZ(m) - S(m) = ((m/h)^2 - 4m + 7)/4`.
pub fn vz_minus_s(m: &BigInt) -> Result<BigRational, BoundsError> {
    require_odd(m, 3, "VZ - S")?;
    let h = BigInt::from(largest_prime_power(&magnitude(m))?);
    let q = m / &h;
    Ok(ratio(&q * &q - 4 * m + 7, 4))
}

/// One term of the sequence `m_p = 1287 * 429^(12p+1)` with its divisibility
/// certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MpCertificate {
    pub p: u32,
    pub m: BigUint,
    pub nu5_of_m_plus_2: u64,
    pub nu7_of_m_plus_2: u64,
    pub h: BigUint,
    pub vz_minus_s: BigRational,
}

impl MpCertificate {
    /// Both 5 and 7 divide `m + 2`.
    pub fn divisible(&self) -> bool {
        self.nu5_of_m_plus_2 >= 1 && self.nu7_of_m_plus_2 >= 1
    }
}

pub fn mp_value(p: u32) -> BigUint {
    BigUint::from(1287u32) * BigUint::from(429u32).pow(12 * p + 1)
}

pub fn mp_sequence(p: u32) -> Result<MpCertificate, BoundsError> {
    let m = mp_value(p);
    let m2 = &m + 2u32;
    let five = BigUint::from(5u32);
    let seven = BigUint::from(7u32);
    let signed = BigInt::from_biguint(Sign::Plus, m.clone());
    Ok(MpCertificate {
        p,
        nu5_of_m_plus_2: p_adic_valuation(&five, &m2)?,
        nu7_of_m_plus_2: p_adic_valuation(&seven, &m2)?,
        h: largest_prime_power(&m)?,
        vz_minus_s: vz_minus_s(&signed)?,
        m,
    })
}

/// `VZ`, `S` and Zvonilov side by side for one odd degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompareRow {
    pub m: BigInt,
    pub h: BigUint,
    pub vz: BigRational,
    pub s: BigRational,
    pub zvonilov: BigRational,
}

impl CompareRow {
    pub fn min(&self) -> &BigRational {
        [&self.vz, &self.s, &self.zvonilov]
            .into_iter()
            .min()
            .expect("three values")
    }
}

pub fn compare_row(m: &BigInt) -> Result<CompareRow, BoundsError> {
    Ok(CompareRow {
        m: m.clone(),
        h: largest_prime_power(&magnitude(m))?,
        vz: vz_bound(m)?,
        s: s_bound(m)?,
        zvonilov: zvonilov_bound(m)?,
    })
}

/// Rows for every odd `m` in `lo..=hi` with `m >= 3`.
pub fn compare_range(lo: u64, hi: u64, exec: Execution) -> Result<Vec<CompareRow>, BoundsError> {
    let start = lo.max(3);
    if start > hi {
        return Ok(Vec::new());
    }
    exec::map_range(exec, start..hi + 1, |m| {
        (m % 2 == 1).then(|| compare_row(&BigInt::from(m)))
    })
    .into_iter()
    .flatten()
    .collect()
}

/// `p/q`, or just `p` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Largest integer not exceeding `r`, saturated into `i128`.
pub fn floor_i128(r: &BigRational) -> i128 {
    r.floor().to_integer().to_i128().unwrap_or(if r.is_negative() {
        i128::MIN
    } else {
        i128::MAX
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn value(b: Bound) -> BigRational {
        evaluate_bound(&b).unwrap().value
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(int(n), int(d))
    }

    #[test]
    fn bound_values() {
        assert_eq!(value(Bound::S { m: int(7) }), r(9, 1));
        assert_eq!(value(Bound::VZ { m: int(15) }), r(38, 1));
        assert_eq!(value(Bound::Hyperboloid { a: int(1), b: int(1) }), r(1, 1));
        assert_eq!(
            value(Bound::NonOrientable {
                m: int(5),
                chi: int(-10)
            }),
            r(4, 1)
        );
        assert_eq!(value(Bound::HarnackOrientable { m: int(7) }), r(16, 1));
        assert_eq!(value(Bound::HarnackNonOrientable { chi: int(-10) }), r(13, 1));
        assert_eq!(value(Bound::Zvonilov { m: int(7) }), r(6, 1));
        assert_eq!(value(Bound::Ellipsoid { m: int(3) }), r(5, 1));
    }

    #[test]
    fn domains() {
        assert!(evaluate_bound(&Bound::S { m: int(4) }).is_err());
        assert!(evaluate_bound(&Bound::VZ { m: int(1) }).is_err());
        assert!(evaluate_bound(&Bound::Hyperboloid { a: int(2), b: int(1) }).is_err());
        assert!(evaluate_bound(&Bound::NonOrientable {
            m: int(5),
            chi: int(-3)
        })
        .is_err());
        let neg = evaluate_bound(&Bound::NonOrientable {
            m: int(9),
            chi: int(0),
        })
        .unwrap();
        assert!(neg.value.is_negative());
        assert!(neg.note.contains("negative"));
    }

    #[test]
    fn vz_minus_s_values() {
        assert_eq!(vz_minus_s(&int(7)).unwrap(), r(-5, 1));
        assert_eq!(vz_minus_s(&int(9)).unwrap(), r(-7, 1));
        assert!(vz_minus_s(&int(552_123)).unwrap() > r(2_000_000, 1));
    }

    #[test]
    fn mp_zero() {
        let c = mp_sequence(0).unwrap();
        assert_eq!(c.m, BigUint::from(552_123u32));
        assert!(c.divisible());
        assert_eq!(c.h, BigUint::from(169u32));
    }

    #[test]
    fn compare_rows() {
        let rows = compare_range(7, 9, Execution::Sequential).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].vz.clone(), rows[0].s.clone()), (r(4, 1), r(9, 1)));
        assert_eq!(rows[1].min(), &r(9, 1));
        assert_eq!(format_rational(&r(3, 2)), "3/2");
        assert_eq!(format_rational(&r(-4, 1)), "-4");
    }
}
