use super::{Ambient, Forest, RealScheme, SchemeError, TorusClass};

/// Preimage of a real scheme in the double cover of the ambient quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftedScheme {
    /// Sphere over the projective plane: each hemisphere carries a copy of
    /// the oval forest; the pseudo-line lifts to the single equator-like
    /// circle.
    Projective {
        hemispheres: [Forest; 2],
        non_doubled: usize,
    },
    /// Torus over the torus: every curve copy and every zone is doubled.
    /// `lifted_class` is the class of one lifted copy in the basis
    /// `(1,1), (1,-1)` of the index-two subgroup.
    Torus {
        class: TorusClass,
        lifted_class: (i64, i64),
        copies: u64,
        zones: Vec<Forest>,
        non_doubled: usize,
    },
}

impl LiftedScheme {
    pub fn oval_count(&self) -> usize {
        match self {
            LiftedScheme::Projective { hemispheres, .. } => {
                hemispheres.iter().map(Forest::oval_count).sum()
            }
            LiftedScheme::Torus { zones, .. } => zones.iter().map(Forest::oval_count).sum(),
        }
    }

    pub fn non_doubled(&self) -> usize {
        match self {
            LiftedScheme::Projective { non_doubled, .. }
            | LiftedScheme::Torus { non_doubled, .. } => *non_doubled,
        }
    }
}

pub fn lift_real_scheme(scheme: &RealScheme) -> Result<LiftedScheme, SchemeError> {
    match scheme.ambient() {
        Ambient::ProjectivePlaneOdd => Ok(LiftedScheme::Projective {
            hemispheres: [scheme.forest().clone(), scheme.forest().clone()],
            non_doubled: 1,
        }),
        Ambient::Hyperboloid => {
            let class = scheme.torus().expect("hyperboloid scheme carries a torus class");
            // Both entries odd, so alpha + beta and alpha - beta are even.
            let lifted_class = ((class.alpha + class.beta) / 2, (class.alpha - class.beta) / 2);
            let mut zones = scheme.zones().to_vec();
            zones.extend_from_slice(scheme.zones());
            Ok(LiftedScheme::Torus {
                class,
                lifted_class,
                copies: 2 * class.copies,
                zones,
                non_doubled: 0,
            })
        }
        other => Err(SchemeError::UnsupportedAmbient(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::parse_scheme;

    #[test]
    fn pseudo_line_alone() {
        let s = parse_scheme("<J>", Ambient::ProjectivePlaneOdd).unwrap();
        let l = lift_real_scheme(&s).unwrap();
        assert_eq!(l.oval_count(), 0);
        assert_eq!(l.non_doubled(), 1);
    }

    #[test]
    fn hemispheres_copy_the_forest() {
        let s = parse_scheme("<J + 2 + 1<1>>", Ambient::ProjectivePlaneOdd).unwrap();
        match lift_real_scheme(&s).unwrap() {
            LiftedScheme::Projective {
                hemispheres,
                non_doubled,
            } => {
                assert_eq!(hemispheres[0].items_text(), "1<1> + 2");
                assert_eq!(hemispheres[0], hemispheres[1]);
                assert_eq!(non_doubled, 1);
            }
            other => panic!("unexpected lift {other:?}"),
        }
    }

    #[test]
    fn torus_copies_double() {
        let s = parse_scheme("<1(1,1): 1>", Ambient::Hyperboloid).unwrap();
        match lift_real_scheme(&s).unwrap() {
            LiftedScheme::Torus {
                copies,
                zones,
                lifted_class,
                non_doubled,
                ..
            } => {
                assert_eq!(copies, 2);
                assert_eq!(zones, vec![Forest::empties(1), Forest::empties(1)]);
                assert_eq!(lifted_class, (1, 0));
                assert_eq!(non_doubled, 0);
            }
            other => panic!("unexpected lift {other:?}"),
        }
    }

    #[test]
    fn ellipsoid_unsupported() {
        let s = parse_scheme("<1>", Ambient::Ellipsoid).unwrap();
        assert_eq!(
            lift_real_scheme(&s),
            Err(SchemeError::UnsupportedAmbient(Ambient::Ellipsoid))
        );
    }
}
