use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use flexcurve_core::bounds::{largest_prime_power, mp_value, s_bound, vz_bound, vz_minus_s};
use flexcurve_core::cover::{lift_euler, pipeline, HalfInteger, LiftRelation};
use flexcurve_core::genus::{genus_tilde, whitney_massey_admissible};
use flexcurve_core::quad_forms::{
    brown, evaluate_form, gauss_sum, gf2_rank, yamada_residue, QuadraticForm,
};
use flexcurve_core::scheme::{
    classify_regions, format_scheme, lift_real_scheme, parse_scheme, LiftedScheme, RegionId,
    TorusClass,
};
use flexcurve_core::verdict::{check, ConstraintId, Status};
use flexcurve_core::{Ambient, CurveSpec, Execution, Forest, OvalNode, RealScheme};

/// Forest from a parent table: entry `i` is 0 for a root or `j + 1` for a
/// child of node `j < i`.
fn build_forest(parents: &[usize]) -> Forest {
    fn node(i: usize, parents: &[usize]) -> OvalNode {
        let kids = (i + 1..parents.len())
            .filter(|&k| parents[k] == i + 1)
            .map(|k| node(k, parents))
            .collect();
        OvalNode::nest(kids)
    }
    Forest::new(
        (0..parents.len())
            .filter(|&i| parents[i] == 0)
            .map(|i| node(i, parents))
            .collect(),
    )
}

fn forest_strategy(max: usize) -> impl Strategy<Value = Forest> {
    prop::collection::vec(any::<prop::sample::Index>(), 0..=max).prop_map(|picks| {
        let parents: Vec<usize> = picks
            .iter()
            .enumerate()
            .map(|(i, ix)| ix.index(i + 1))
            .collect();
        build_forest(&parents)
    })
}

fn hyperboloid_strategy() -> impl Strategy<Value = RealScheme> {
    (0i64..5, 1u64..4, prop::collection::vec(forest_strategy(6), 3)).prop_map(|(b, copies, zones)| {
        let zones = zones.into_iter().take(copies as usize).collect();
        RealScheme::hyperboloid(TorusClass { alpha: 1, beta: 2 * b - 3, copies }, zones).unwrap()
    })
}

fn scheme_strategy() -> impl Strategy<Value = RealScheme> {
    prop_oneof![
        forest_strategy(12).prop_map(RealScheme::projective_odd),
        forest_strategy(12).prop_map(RealScheme::projective_even),
        forest_strategy(12).prop_map(RealScheme::ellipsoid),
        hyperboloid_strategy(),
    ]
}

/// Inserts an empty oval as a new root (`slot = 0`) or inside the preorder
/// node `slot - 1`.
fn add_empty_oval(forest: &Forest, slot: usize) -> Forest {
    fn rebuild(node: &OvalNode, slot: usize, counter: &mut usize) -> OvalNode {
        let here = *counter;
        *counter += 1;
        let mut kids: Vec<OvalNode> = node.children().iter().map(|c| rebuild(c, slot, counter)).collect();
        if here + 1 == slot {
            kids.push(OvalNode::empty());
        }
        OvalNode::nest(kids)
    }
    let mut counter = 0;
    let mut roots: Vec<OvalNode> = forest.roots().iter().map(|r| rebuild(r, slot, &mut counter)).collect();
    if slot == 0 {
        roots.push(OvalNode::empty());
    }
    Forest::new(roots)
}

fn nonsingular_form() -> impl Strategy<Value = QuadraticForm> {
    (1usize..=12)
        .prop_flat_map(|rank| {
            (
                Just(rank),
                prop::collection::vec(any::<bool>(), rank * (rank + 1) / 2),
                prop::collection::vec(any::<bool>(), rank),
            )
        })
        .prop_filter_map("singular", |(rank, bits, lifts)| {
            let mut rows = vec![0u64; rank];
            let mut it = bits.into_iter();
            for i in 0..rank {
                for j in i..rank {
                    if it.next().unwrap() {
                        rows[i] |= 1 << j;
                        rows[j] |= 1 << i;
                    }
                }
            }
            if gf2_rank(&rows) != rank {
                return None;
            }
            let phi: Vec<u8> = (0..rank)
                .map(|i| ((rows[i] >> i) & 1) as u8 + 2 * u8::from(lifts[i]))
                .collect();
            QuadraticForm::from_rows(rows, &phi).ok()
        })
}

fn invertible_basis(rank: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..1u64 << rank, rank).prop_filter("singular", move |b| gf2_rank(b) == rank)
}

fn bits(x: u64, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((x >> i) & 1) as u8).collect()
}

proptest! {
    #[test]
    fn scheme_round_trip(s in scheme_strategy()) {
        let text = format_scheme(&s);
        prop_assert_eq!(parse_scheme(&text, s.ambient()).unwrap(), s);
    }

    #[test]
    fn region_partition(s in prop_oneof![
        forest_strategy(14).prop_map(RealScheme::projective_odd),
        hyperboloid_strategy(),
    ]) {
        let st = classify_regions(&s);
        let nodes: Vec<&OvalNode> = if s.ambient() == Ambient::Hyperboloid {
            s.zones().iter().flat_map(Forest::preorder).collect()
        } else {
            s.forest().preorder()
        };
        prop_assert_eq!(st.l_plus + st.l_zero + st.l_minus, st.total_ovals);
        for (id, chi) in &st.region_chis {
            if let RegionId::Oval(i) = id {
                let node = nodes[*i];
                prop_assert!(*chi <= 1);
                prop_assert_eq!(*chi == 1, node.is_empty());
            }
        }
        if s.ambient() == Ambient::ProjectivePlaneOdd {
            prop_assert_eq!(st.chi_j, Some(1 - st.exterior_count as i64));
        }
    }

    #[test]
    fn lift_doubles(s in prop_oneof![
        forest_strategy(14).prop_map(RealScheme::projective_odd),
        hyperboloid_strategy(),
    ]) {
        let lifted = lift_real_scheme(&s).unwrap();
        prop_assert_eq!(lifted.oval_count(), 2 * s.oval_count());
        match lifted {
            LiftedScheme::Projective { hemispheres, non_doubled } => {
                prop_assert_eq!(&hemispheres[0], s.forest());
                prop_assert_eq!(&hemispheres[1], s.forest());
                prop_assert_eq!(non_doubled, 1);
            }
            LiftedScheme::Torus { non_doubled, .. } => prop_assert_eq!(non_doubled, 0),
        }
    }

    #[test]
    fn vz_minus_s_identity(k in 1u64..5000) {
        let m = BigInt::from(2 * k + 1);
        let diff = vz_bound(&m).unwrap() - s_bound(&m).unwrap();
        prop_assert_eq!(vz_minus_s(&m).unwrap(), diff);
    }

    #[test]
    fn h_divides_m(m in 2u64..10_000_000) {
        let big = BigUint::from(m);
        let h = largest_prime_power(&big).unwrap();
        prop_assert!((&big % &h).is_zero());
        let rest = &big / &h;
        prop_assert_eq!(num_integer::Integer::gcd(&rest, &h), BigUint::from(1u32));
    }

    #[test]
    fn prime_power_vz(p in prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23]), e in 1u32..5) {
        let m = BigInt::from(p.pow(e));
        let vz = vz_bound(&m).unwrap();
        let want = BigRational::new((&m - 3) * (&m - 3), BigInt::from(4));
        prop_assert_eq!(&vz, &want);
        prop_assert!(vz < s_bound(&m).unwrap());
    }

    #[test]
    fn lift_composition(twice in -10_000i64..10_000) {
        let x = HalfInteger::from_half_units(twice);
        let up = lift_euler(x, LiftRelation::Transverse).unwrap();
        prop_assert_eq!(lift_euler(up, LiftRelation::InBranchLocus).unwrap(), x);
    }

    #[test]
    fn cp2_pipeline_closed_forms(k in 1i64..500) {
        let m = 2 * k + 1;
        let r = pipeline(&CurveSpec::plane(m as u64)).unwrap();
        prop_assert_eq!(r.b2_plus, (m - 1).pow(2) / 4);
        prop_assert_eq!(r.b2_minus, (3 * m * m + 2 * m + 7) / 4);
        prop_assert_eq!(r.b2_plus + r.b2_minus, m * m + 2);
        prop_assert_eq!(r.b2_plus - r.b2_minus, r.sigma_y);
        let no = pipeline(&CurveSpec::plane_nonorientable(m as u64, Some(-m * m + 3 * m))).unwrap();
        prop_assert_eq!(no.b2_plus, r.b2_plus);
    }

    #[test]
    fn gauss_sum_modulus(q in nonsingular_form()) {
        let s = gauss_sum(&q, Execution::Sequential).unwrap();
        prop_assert_eq!(s.norm(), 1i128 << q.rank());
        prop_assert_eq!(gauss_sum(&q, Execution::Parallel).unwrap(), s);
    }

    #[test]
    fn brown_direct_sum(a in nonsingular_form(), b in nonsingular_form()) {
        let sum = a.direct_sum(&b).unwrap();
        let ba = brown(&a, Execution::Sequential).unwrap().beta;
        let bb = brown(&b, Execution::Sequential).unwrap().beta;
        prop_assert_eq!(brown(&sum, Execution::Sequential).unwrap().beta, (ba + bb) % 8);
    }

    #[test]
    fn brown_basis_change(
        (q, basis) in nonsingular_form().prop_flat_map(|q| {
            let r = q.rank();
            (Just(q), invertible_basis(r))
        })
    ) {
        let moved = q.change_basis(&basis).unwrap();
        let n = q.rank();
        for x in 0u64..1 << n {
            let image = (0..n).filter(|&i| x >> i & 1 == 1).fold(0, |acc, i| acc ^ basis[i]);
            prop_assert_eq!(
                evaluate_form(&moved, &bits(x, n)).unwrap(),
                evaluate_form(&q, &bits(image, n)).unwrap()
            );
        }
        prop_assert_eq!(
            brown(&moved, Execution::Sequential).unwrap().beta,
            brown(&q, Execution::Sequential).unwrap().beta
        );
    }

    #[test]
    fn refinement_parity(q in nonsingular_form()) {
        let n = q.rank();
        for x in 0u64..1 << n {
            prop_assert_eq!(q.value(x) % 2, q.pairing(x, x));
        }
    }

    #[test]
    fn whitney_massey_shape(chi in -200i64..=1) {
        let range = whitney_massey_admissible(chi).unwrap();
        prop_assert_eq!(range.len() as i64, 3 - chi);
        let mut mirrored: Vec<i64> = range.iter().map(|e| -e).collect();
        mirrored.reverse();
        prop_assert_eq!(mirrored, range);
    }

    #[test]
    fn adding_an_empty_oval(forest in forest_strategy(12), pick in any::<prop::sample::Index>()) {
        let slot = pick.index(forest.oval_count() + 1);
        let bigger = add_empty_oval(&forest, slot);
        let (before, after) = (RealScheme::projective_odd(forest), RealScheme::projective_odd(bigger));
        prop_assert!(after.component_count() >= before.component_count());
        let np = |s: &RealScheme| classify_regions(s).non_positive() as i64;
        let delta = np(&after) - np(&before);
        prop_assert!((0..=1).contains(&delta));
    }

    #[test]
    fn combined_bound_is_the_minimum(k in 1u64..60, forest in forest_strategy(10)) {
        let m = 2 * k + 1;
        let v = check(&CurveSpec::plane(m), &RealScheme::projective_odd(forest)).unwrap();
        let bounds: Vec<&BigRational> = v.records.iter().filter(|r| r.id.is_region_bound()).map(|r| &r.bound).collect();
        let min = bounds.iter().copied().fold(None::<&BigRational>, |acc, b| Some(acc.map_or(b, |a| a.min(b))));
        prop_assert_eq!(v.combined_bound(), min);
    }
}

#[test]
fn equality_with_s_is_reported() {
    for m in [5u64, 7, 9, 11] {
        let s = s_bound(&BigInt::from(m)).unwrap();
        let n: usize = s.to_integer().try_into().unwrap();
        let scheme = parse_scheme(&format!("<J + {n}<1>>"), Ambient::ProjectivePlaneOdd).unwrap();
        let v = check(&CurveSpec::plane(m), &scheme).unwrap();
        assert_eq!(v.record(ConstraintId::S).unwrap().status, Status::Equality, "m = {m}");
        assert!(v.notes.iter().any(|n| n.contains("type I")), "m = {m}");
    }
}

#[test]
fn mp_plus_two_divisible_by_35() {
    for p in 0..=3 {
        let m = mp_value(p);
        assert!(((m + 2u32) % 35u32).is_zero(), "p = {p}");
    }
}

#[test]
fn genus_yamada_parity() {
    for e in (1..=200i64).step_by(2) {
        let g = genus_tilde(e).value;
        let want_even = e % 4 == 1;
        assert_eq!(g % 2 == 0, want_even, "e = {e}");
        assert_eq!(yamada_residue(e, g), 1, "e = {e}");
    }
}

#[test]
fn genus_on_squares() {
    for m in 2..=60i64 {
        let g = genus_tilde(m * m).value;
        if m % 2 == 0 && m >= 4 {
            assert_eq!(2 * g, 8 - m * m, "m = {m}");
        } else if m % 2 == 1 && m >= 3 {
            assert!(2 * g >= 5 - m * m, "m = {m}");
        }
    }
}

#[test]
fn extremal_bound_is_m_minus_one() {
    let j = parse_scheme("<J>", Ambient::ProjectivePlaneOdd).unwrap();
    for m in (3..=99u64).step_by(2) {
        let v = check(&CurveSpec::plane_nonorientable(m, None), &j).unwrap();
        let bound = &v.record(ConstraintId::NonOrientable).unwrap().bound;
        assert_eq!(*bound, BigRational::from_integer(BigInt::from(m - 1)), "m = {m}");
    }
}
