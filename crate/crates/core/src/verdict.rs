//! Evaluates every applicable constraint for a curve and a scheme.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{evaluate_bound, format_rational, Bound, BoundsError};
use crate::curve::{CurveAmbient, CurveSpec, Degree, SpecError};
use crate::exec::{self, Execution};
use crate::genus::{genus_tilde, GenusStatus};
use crate::scheme::{classify_regions, format_scheme, Ambient, RealScheme, RegionStats};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerdictError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("a {scheme} scheme does not fit a {spec} curve")]
    AmbientMismatch { spec: String, scheme: Ambient },
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintId {
    Harnack,
    HarnackNonOrientable,
    VZ,
    Zvonilov,
    S,
    NonOrientable,
    Hyperboloid,
    Ellipsoid,
    /// Exactly one pseudo-line iff the degree is odd.
    StructuralJ,
    /// The torus-curve copies fit the bidegree.
    StructuralTorus,
}

impl ConstraintId {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintId::Harnack => "Harnack",
            ConstraintId::HarnackNonOrientable => "HarnackNonOrientable",
            ConstraintId::VZ => "VZ",
            ConstraintId::Zvonilov => "Zvonilov",
            ConstraintId::S => "S",
            ConstraintId::NonOrientable => "NOVZ",
            ConstraintId::Hyperboloid => "Hyperboloid",
            ConstraintId::Ellipsoid => "Ellipsoid",
            ConstraintId::StructuralJ => "structural-J",
            ConstraintId::StructuralTorus => "structural-torus",
        }
    }

    /// Constraints on `l0 + l-` (as opposed to component counts and
    /// structure).
    pub fn is_region_bound(self) -> bool {
        matches!(
            self,
            ConstraintId::VZ
                | ConstraintId::Zvonilov
                | ConstraintId::S
                | ConstraintId::NonOrientable
                | ConstraintId::Hyperboloid
                | ConstraintId::Ellipsoid
        )
    }

    fn is_structural(self) -> bool {
        matches!(self, ConstraintId::StructuralJ | ConstraintId::StructuralTorus)
    }
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Equality,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Overall {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintRecord {
    pub id: ConstraintId,
    pub bound: BigRational,
    pub observed: u64,
    pub status: Status,
    pub note: Option<String>,
}

/// Invariant: `overall` is `Fail` iff some record fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub spec: CurveSpec,
    pub scheme: String,
    pub stats: RegionStats,
    pub b0: u64,
    pub records: Vec<ConstraintRecord>,
    pub notes: Vec<String>,
    pub overall: Overall,
}

impl Verdict {
    /// Smallest bound on `l0 + l-` among the applicable region bounds.
    pub fn combined_bound(&self) -> Option<&BigRational> {
        self.records
            .iter()
            .filter(|r| r.id.is_region_bound())
            .map(|r| &r.bound)
            .min()
    }

    pub fn record(&self, id: ConstraintId) -> Option<&ConstraintRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn report(&self) -> VerdictReport {
        VerdictReport {
            spec: SpecView::new(&self.spec),
            scheme: self.scheme.clone(),
            stats: StatsView {
                l: self.stats.total_ovals,
                l_plus: self.stats.l_plus,
                l_zero: self.stats.l_zero,
                l_minus: self.stats.l_minus,
                exterior: self.stats.exterior_count,
                chi_j: self.stats.chi_j,
                b0: self.b0,
            },
            constraints: self
                .records
                .iter()
                .map(|r| ConstraintView {
                    id: r.id.as_str(),
                    bound: format_rational(&r.bound),
                    observed: r.observed,
                    status: r.status,
                    note: r.note.clone(),
                })
                .collect(),
            notes: self.notes.clone(),
            overall: self.overall,
            combined_bound: self.combined_bound().map(format_rational),
        }
    }
}

/// Serialisable form of a [`Verdict`].
#[derive(Clone, Debug, Serialize)]
pub struct VerdictReport {
    pub spec: SpecView,
    pub scheme: String,
    pub stats: StatsView,
    pub constraints: Vec<ConstraintView>,
    pub notes: Vec<String>,
    pub overall: Overall,
    pub combined_bound: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecView {
    pub ambient: CurveAmbient,
    pub degree: String,
    pub orientable: bool,
    pub chi_f: Option<String>,
    pub q_flexible: bool,
    pub extremal_chi: bool,
}

impl SpecView {
    pub fn new(spec: &CurveSpec) -> Self {
        SpecView {
            ambient: spec.ambient,
            degree: spec.degree.to_string(),
            orientable: spec.orientable,
            chi_f: spec.chi_f.as_ref().map(ToString::to_string),
            q_flexible: spec.q_flexible,
            extremal_chi: spec.extremal_chi,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StatsView {
    pub l: usize,
    pub l_plus: usize,
    pub l_zero: usize,
    pub l_minus: usize,
    pub exterior: usize,
    pub chi_j: Option<i64>,
    pub b0: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintView {
    pub id: &'static str,
    pub bound: String,
    pub observed: u64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn odd_degree_at_least_3(spec: &CurveSpec) -> bool {
    spec.is_odd_degree() && spec.single_degree().is_some_and(|m| m >= &BigUint::from(3u32))
}

/// Constraint ids whose hypotheses the curve meets, in a fixed order.
pub fn applicable_bounds(spec: &CurveSpec) -> Result<Vec<ConstraintId>, VerdictError> {
    spec.validate()?;
    let mut ids = Vec::new();
    match spec.ambient {
        CurveAmbient::ProjectivePlane if spec.orientable => {
            ids.push(ConstraintId::Harnack);
            if spec.is_odd_degree() {
                if odd_degree_at_least_3(spec) {
                    ids.push(ConstraintId::VZ);
                }
                ids.push(ConstraintId::Zvonilov);
                if spec.q_flexible {
                    ids.push(ConstraintId::S);
                }
                ids.push(ConstraintId::StructuralJ);
            }
        }
        CurveAmbient::ProjectivePlane => {
            ids.push(ConstraintId::HarnackNonOrientable);
            if spec.is_odd_degree() {
                if spec.q_flexible {
                    ids.push(ConstraintId::NonOrientable);
                }
                ids.push(ConstraintId::StructuralJ);
            }
        }
        CurveAmbient::Hyperboloid => {
            let odd = spec
                .bidegree()
                .is_some_and(|(a, b)| a.bit(0) && b.bit(0));
            if odd && spec.q_flexible {
                ids.push(ConstraintId::Hyperboloid);
            }
            ids.push(ConstraintId::StructuralTorus);
        }
        CurveAmbient::Ellipsoid => {
            if spec.is_odd_degree() && spec.q_flexible {
                ids.push(ConstraintId::Ellipsoid);
            }
        }
    }
    Ok(ids)
}

/// Euler characteristic of the curve surface for the bounds that need it,
/// with a note when it rests on the conjectural part of the `g~` table.
fn effective_chi(spec: &CurveSpec) -> Result<(BigInt, Option<String>), VerdictError> {
    if let Some(chi) = &spec.chi_f {
        return Ok((chi.clone(), None));
    }
    let m = spec
        .degree_u64()
        .and_then(|m| i64::try_from(m).ok())
        .filter(|&m| m <= 3_000_000_000)
        .ok_or_else(|| SpecError::InvalidSpec("degree too large for extremal mode".into()))?;
    let g = genus_tilde(m * m);
    let note = (g.status == GenusStatus::LowerBoundOnly).then(|| {
        format!(
            "extremal chi = g~({}) = {} assumes the lower bound for g~ is attained (conjectural)",
            m * m,
            g.value
        )
    });
    Ok((BigInt::from(g.value), note))
}

fn status(id: ConstraintId, bound: &BigRational, observed: u64) -> Status {
    let obs = BigRational::from_integer(BigInt::from(observed));
    if id.is_structural() {
        return if &obs == bound { Status::Pass } else { Status::Fail };
    }
    match obs.cmp(bound) {
        std::cmp::Ordering::Greater => Status::Fail,
        std::cmp::Ordering::Equal => Status::Equality,
        std::cmp::Ordering::Less => Status::Pass,
    }
}

/// Number of violated ruling-intersection conditions for the torus curves.
fn torus_violations(spec: &CurveSpec, scheme: &RealScheme) -> u64 {
    let (Some((a, b)), Some(t)) = (spec.bidegree(), scheme.torus()) else {
        return 0;
    };
    let need_a = BigUint::from(t.copies) * BigUint::from(t.alpha.unsigned_abs());
    let need_b = BigUint::from(t.copies) * BigUint::from(t.beta.unsigned_abs());
    u64::from(&need_a > a) + u64::from(&need_b > b)
}

fn big(n: &BigUint) -> BigInt {
    BigInt::from(n.clone())
}

/// Compares the scheme against every applicable constraint.
pub fn check(spec: &CurveSpec, scheme: &RealScheme) -> Result<Verdict, VerdictError> {
    let ids = applicable_bounds(spec)?;
    let expected = spec.scheme_ambient();
    let fits = scheme.ambient() == expected
        // An odd-degree curve drawn without its pseudo-line fails the
        // structural check instead of being rejected.
        || (expected == Ambient::ProjectivePlaneOdd
            && scheme.ambient() == Ambient::ProjectivePlaneEven);
    if !fits {
        return Err(VerdictError::AmbientMismatch {
            spec: format!("{} degree {}", spec.ambient, spec.degree),
            scheme: scheme.ambient(),
        });
    }

    let stats = classify_regions(scheme);
    let b0 = scheme.component_count();
    let regions = stats.non_positive() as u64;
    let mut notes = Vec::new();
    let chi = if spec.orientable {
        None
    } else {
        let (chi, note) = effective_chi(spec)?;
        notes.extend(note);
        Some(chi)
    };
    let chi_value = || chi.clone().expect("non-orientable specs carry chi");
    let degree = || match &spec.degree {
        Degree::Single(m) => big(m),
        Degree::Bi(..) => BigInt::zero(),
    };

    let mut records = Vec::new();
    for id in ids {
        let (bound, observed, note) = match id {
            ConstraintId::Harnack => {
                let v = evaluate_bound(&Bound::HarnackOrientable { m: degree() })?;
                (v.value, b0, None)
            }
            ConstraintId::HarnackNonOrientable => {
                let v = evaluate_bound(&Bound::HarnackNonOrientable { chi: chi_value() })?;
                (v.value, b0, None)
            }
            ConstraintId::VZ => (evaluate_bound(&Bound::VZ { m: degree() })?.value, regions, None),
            ConstraintId::S => (evaluate_bound(&Bound::S { m: degree() })?.value, regions, None),
            ConstraintId::Zvonilov => {
                let v = evaluate_bound(&Bound::Zvonilov { m: degree() })?;
                (v.value, regions, Some(v.note))
            }
            ConstraintId::NonOrientable => {
                let v = evaluate_bound(&Bound::NonOrientable {
                    m: degree(),
                    chi: chi_value(),
                })?;
                (v.value, regions, None)
            }
            ConstraintId::Hyperboloid => {
                let (a, b) = spec.bidegree().expect("hyperboloid specs carry a bidegree");
                let v = evaluate_bound(&Bound::Hyperboloid { a: big(a), b: big(b) })?;
                (v.value, regions, None)
            }
            ConstraintId::Ellipsoid => {
                let v = evaluate_bound(&Bound::Ellipsoid { m: degree() })?;
                (v.value, regions, None)
            }
            ConstraintId::StructuralJ => (
                BigRational::from_integer(BigInt::from(1)),
                u64::from(scheme.pseudo_line()),
                Some("an odd-degree curve has exactly one pseudo-line".to_string()),
            ),
            ConstraintId::StructuralTorus => (
                BigRational::zero(),
                torus_violations(spec, scheme),
                Some("copies * |alpha| <= a and copies * |beta| <= b (violations counted)".to_string()),
            ),
        };
        let status = status(id, &bound, observed);
        if id == ConstraintId::S && status == Status::Equality {
            notes.push("equality in S(m) implies the curve is of type I".into());
        }
        records.push(ConstraintRecord {
            id,
            bound,
            observed,
            status,
            note,
        });
    }
    let overall = if records.iter().any(|r| r.status == Status::Fail) {
        Overall::Fail
    } else {
        Overall::Pass
    };
    Ok(Verdict {
        spec: spec.clone(),
        scheme: format_scheme(scheme),
        stats,
        b0,
        records,
        notes,
        overall,
    })
}

/// [`check`] over many schemes, preserving order.
pub fn check_batch(
    spec: &CurveSpec,
    schemes: &[RealScheme],
    exec: Execution,
) -> Vec<Result<Verdict, VerdictError>> {
    exec::map_slice(exec, schemes, |s| check(spec, s))
}

/// Degree as `i64` for callers that have already validated it.
pub fn degree_i64(spec: &CurveSpec) -> Option<i64> {
    spec.single_degree().and_then(ToPrimitive::to_i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::parse_scheme;

    fn odd(text: &str) -> RealScheme {
        parse_scheme(text, Ambient::ProjectivePlaneOdd).unwrap()
    }

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn applicable_sets() {
        use ConstraintId::*;
        assert_eq!(
            applicable_bounds(&CurveSpec::plane(7)).unwrap(),
            vec![Harnack, VZ, Zvonilov, S, StructuralJ]
        );
        assert_eq!(
            applicable_bounds(&CurveSpec::hyperboloid(1, 1)).unwrap(),
            vec![Hyperboloid, StructuralTorus]
        );
        assert_eq!(applicable_bounds(&CurveSpec::plane(2)).unwrap(), vec![Harnack]);
        assert_eq!(
            applicable_bounds(&CurveSpec::plane_nonorientable(5, None)).unwrap(),
            vec![HarnackNonOrientable, NonOrientable, StructuralJ]
        );
    }

    #[test]
    fn septic_example_passes() {
        let v = check(&CurveSpec::plane(7), &odd("<J + 2 + 1<1>>")).unwrap();
        assert_eq!(v.overall, Overall::Pass);
        assert_eq!(v.b0, 5);
        assert_eq!(v.record(ConstraintId::Harnack).unwrap().bound, r(16));
        assert_eq!(v.stats.non_positive(), 1);
        assert_eq!(v.combined_bound(), Some(&r(4)));
        assert!(v.records.iter().all(|rec| rec.status == Status::Pass));
        assert!(v.record(ConstraintId::Zvonilov).unwrap().note.is_some());
    }

    #[test]
    fn cubic_with_five_ovals_fails_harnack() {
        let v = check(&CurveSpec::plane(3), &odd("<J + 5>")).unwrap();
        assert_eq!(v.overall, Overall::Fail);
        let h = v.record(ConstraintId::Harnack).unwrap();
        assert_eq!((h.observed, h.bound.clone(), h.status), (6, r(2), Status::Fail));
    }

    #[test]
    fn extremal_quintic() {
        let v = check(&CurveSpec::plane_nonorientable(5, None), &odd("<J>")).unwrap();
        assert_eq!(v.record(ConstraintId::NonOrientable).unwrap().bound, r(4));
        assert_eq!(v.record(ConstraintId::HarnackNonOrientable).unwrap().bound, r(13));
        assert!(v.notes.iter().any(|n| n.contains("conjectural")));
    }

    #[test]
    fn equality_with_s_is_flagged() {
        // m = 5: S = 4, realised by four nests.
        let v = check(&CurveSpec::plane(5), &odd("<J + 4<1>>")).unwrap();
        assert_eq!(v.record(ConstraintId::S).unwrap().status, Status::Equality);
        assert!(v.notes.iter().any(|n| n.contains("type I")));
    }

    #[test]
    fn parity_mismatches() {
        let even = parse_scheme("<3>", Ambient::ProjectivePlaneEven).unwrap();
        let v = check(&CurveSpec::plane(3), &even).unwrap();
        assert_eq!(v.record(ConstraintId::StructuralJ).unwrap().status, Status::Fail);
        assert_eq!(v.overall, Overall::Fail);
        assert!(matches!(
            check(&CurveSpec::plane(4), &odd("<J>")),
            Err(VerdictError::AmbientMismatch { .. })
        ));
    }

    #[test]
    fn missing_chi() {
        let spec = CurveSpec {
            extremal_chi: false,
            ..CurveSpec::plane_nonorientable(5, None)
        };
        assert_eq!(
            check(&spec, &odd("<J>")),
            Err(VerdictError::Spec(SpecError::MissingChi))
        );
    }

    #[test]
    fn hyperboloid_torus_check() {
        let s = parse_scheme("<3(1,1): 1 | | >", Ambient::Hyperboloid).unwrap();
        let v = check(&CurveSpec::hyperboloid(1, 1), &s).unwrap();
        assert_eq!(v.record(ConstraintId::StructuralTorus).unwrap().observed, 2);
        assert_eq!(v.overall, Overall::Fail);
        let v = check(&CurveSpec::hyperboloid(3, 3), &s).unwrap();
        assert_eq!(v.overall, Overall::Pass);
    }

    #[test]
    fn report_serialises() {
        let v = check(&CurveSpec::plane(7), &odd("<J + 2 + 1<1>>")).unwrap();
        let report = v.report();
        assert_eq!(report.constraints.len(), 5);
        assert_eq!(report.combined_bound.as_deref(), Some("4"));
    }
}
