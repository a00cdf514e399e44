//! Section spaces, valuation ideals, Okounkov bodies and concave transforms
//! checked against closed forms on the reference models.

use num::{One, Signed};
use proptest::prelude::*;
use vanseq::algebra::rat::{int, rat};
use vanseq::algebra::{MultiPoly, QuadExt, Rat};
use vanseq::okounkov::{concave_transform, flag_nu, okounkov_points};
use vanseq::valuation::monomial_colength;
use vanseq::{vanishing_sequence, SectionModel, Valuation};

fn models() -> Vec<SectionModel> {
    vec![
        SectionModel::proj_line(1),
        SectionModel::proj_line(3),
        SectionModel::proj_plane(1),
        SectionModel::proj_plane(2),
        SectionModel::blowup(rat(1, 2)).unwrap(),
        SectionModel::blowup(rat(1, 3)).unwrap(),
        SectionModel::blowup(int(0)).unwrap(),
    ]
}

#[test]
fn section_dimension_matches_closed_form() {
    for model in models() {
        for m in 1..=16u32 {
            if model.check_level(m).is_err() {
                continue;
            }
            let space = model.section_basis(m).unwrap();
            assert_eq!(space.dim(), model.h0_closed_form(m).unwrap(), "{model:?} at m = {m}");
        }
    }
}

#[test]
fn asymptotic_volume_of_surfaces() {
    // 2 N_m / m^2 - vol = (3 - lambda)/m + 2/m^2 exactly, so the 1/m term
    // alone is bounded by 3/m and the whole gap by 3/m + 2/m^2.
    for (model, vol) in [
        (SectionModel::proj_plane(1), int(1)),
        (SectionModel::blowup(rat(1, 2)).unwrap(), rat(3, 4)),
        (SectionModel::blowup(rat(1, 3)).unwrap(), rat(8, 9)),
    ] {
        assert_eq!(model.volume(), vol);
        for m in [6u32, 12, 24, 48, 96] {
            let n = model.h0_closed_form(m).unwrap();
            let m_r = int(m as i64);
            let gap = Rat::new((2 * n as i64).into(), (m as i64 * m as i64).into()) - &vol;
            assert!(gap.is_positive(), "{model:?}, m = {m}");
            assert!(gap <= int(3) / &m_r + int(2) / (&m_r * &m_r), "{model:?}, m = {m}: gap {gap}");
        }
    }
    // and the 3/m tolerance alone is met once the lower-order term is absorbed
    let blowup = SectionModel::blowup(rat(1, 2)).unwrap();
    for m in [4u32, 8, 16, 32] {
        let n = blowup.h0_closed_form(m).unwrap();
        let gap = Rat::new((2 * n as i64).into(), (m as i64 * m as i64).into()) - rat(3, 4);
        assert!(gap <= rat(3, m as i64), "m = {m}: gap {gap}");
    }
}

fn random_section(basis: &[MultiPoly], coeffs: &[i64]) -> MultiPoly {
    let mut s = MultiPoly::zero(basis[0].nvars());
    for (b, c) in basis.iter().zip(coeffs.iter().cycle()) {
        s.add_scaled(b, &int(*c));
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn products_land_in_the_sum_level(
        lambda in prop::sample::select(vec![rat(1, 2), rat(1, 3), int(0)]),
        ms in prop::sample::select(vec![(2u32, 2u32), (2, 4), (4, 2), (3, 3), (6, 2)]),
        c1 in prop::collection::vec(-3i64..4, 1..6),
        c2 in prop::collection::vec(-3i64..4, 1..6),
    ) {
        let model = SectionModel::blowup(lambda).unwrap();
        let (m, mp) = ms;
        prop_assume!(model.check_level(m).is_ok() && model.check_level(mp).is_ok());
        let a = model.section_basis(m).unwrap();
        let b = model.section_basis(mp).unwrap();
        let prod = &random_section(&a.basis, &c1) * &random_section(&b.basis, &c2);
        let sum = model.section_basis(m + mp).unwrap();
        prop_assert!(sum.contains(&prod));
    }

    #[test]
    fn flag_values_and_valuations_add_on_products(
        c1 in prop::collection::vec(-3i64..4, 1..8),
        c2 in prop::collection::vec(-3i64..4, 1..8),
        cx in -2i64..3,
        cy in -2i64..3,
    ) {
        let model = SectionModel::blowup(rat(1, 2)).unwrap();
        let v = Valuation::ord_at(&[int(cx), int(cy)]).unwrap();
        let s = random_section(&model.section_basis(2).unwrap().basis, &c1);
        let t = random_section(&model.section_basis(4).unwrap().basis, &c2);
        prop_assume!(!s.is_zero() && !t.is_zero());
        let st = &s * &t;
        let nu_sum: Vec<u32> = flag_nu(&s).unwrap().iter().zip(flag_nu(&t).unwrap()).map(|(a, b)| a + b).collect();
        prop_assert_eq!(flag_nu(&st).unwrap(), nu_sum);
        let vs = v.evaluate(&s, &model, 2).unwrap();
        let vt = v.evaluate(&t, &model, 4).unwrap();
        prop_assert_eq!(v.evaluate(&st, &model, 6).unwrap(), vs.add(&vt));
    }
}

#[test]
fn monomial_colength_is_monotone_and_compatible_with_products() {
    for weights in [[int(1), int(1)], [int(2), int(3)], [rat(1, 2), int(1)]] {
        let w: Vec<QuadExt> = weights.iter().cloned().map(QuadExt::rational).collect();
        let mut last = 0;
        for m in 1..=30i64 {
            let c = monomial_colength(&w, &QuadExt::rational(int(m)));
            assert!(c >= last, "{weights:?}: colength dropped at m = {m}");
            last = c;
        }
        // minimal generators of a_m are monomials of weight >= m; their
        // products have weight >= m + m'
        let weight = |e: &[u32]| &weights[0] * int(e[0] as i64) + &weights[1] * int(e[1] as i64);
        let generators = |m: i64| -> Vec<[u32; 2]> {
            (0..=12u32)
                .flat_map(|i| (0..=12u32).map(move |j| [i, j]))
                .filter(|e| weight(e) >= int(m))
                .collect()
        };
        for m in 1..=4i64 {
            for mp in 1..=4i64 {
                for a in generators(m) {
                    for b in generators(mp) {
                        assert!(weight(&[a[0] + b[0], a[1] + b[1]]) >= int(m + mp));
                    }
                }
            }
        }
    }
}

#[test]
fn colength_bounds_the_section_count() {
    // A section vanishing to order above a_max is zero, so H^0 injects into
    // O / a_{a_max + 1}.
    let plane = SectionModel::proj_plane(1);
    for weights in [[int(1), int(1)], [int(1), int(2)], [int(2), int(3)]] {
        let v = Valuation::monomial(&weights, &[int(0), int(0)]).unwrap();
        for m in [2u32, 4, 8, 16] {
            let seq = vanishing_sequence(&plane, m, &v).unwrap();
            let a_max = seq.a_max().as_rational().unwrap().to_integer();
            let bound = v.colength(a_max.try_into().map(|a: u32| a + 1).unwrap(), m + 1).unwrap();
            assert!(seq.len() <= bound, "{weights:?}, m = {m}: N_m = {} > {bound}", seq.len());
        }
    }
}

#[test]
fn okounkov_points_count_sections() {
    for model in models() {
        for m in 1..=8u32 {
            if model.check_level(m).is_err() {
                continue;
            }
            let body = okounkov_points(&model, m).unwrap();
            assert_eq!(body.points.len(), model.h0_closed_form(m).unwrap(), "{model:?}, m = {m}");
        }
    }
}

fn transform_cases() -> Vec<(SectionModel, Valuation)> {
    vec![
        (SectionModel::proj_plane(1), Valuation::ord_at(&[int(1), int(1)]).unwrap()),
        (SectionModel::proj_plane(1), Valuation::monomial(&[int(1), int(2)], &[int(0), int(0)]).unwrap()),
        (SectionModel::blowup(rat(1, 2)).unwrap(), Valuation::ord_at(&[int(1), int(1)]).unwrap()),
    ]
}

#[test]
fn concave_transform_is_superadditive_across_levels() {
    for (model, v) in transform_cases() {
        let table = |m: u32| concave_transform(&model, m, &v).unwrap();
        for (m, mp) in [(2u32, 2u32), (2, 4), (4, 4)] {
            let (a, b, ab) = (table(m), table(mp), table(m + mp));
            for (alpha, ga) in &a.values {
                for (beta, gb) in &b.values {
                    let sum: Vec<u32> = alpha.iter().zip(beta).map(|(x, y)| x + y).collect();
                    let gab = ab.get(&sum).expect("sum of lattice points is a lattice point");
                    let lhs = ga.scale(&int(m as i64)) + gb.scale(&int(mp as i64));
                    assert!(lhs <= gab.scale(&int((m + mp) as i64)), "{model:?}, {v:?} at {alpha:?} + {beta:?}");
                }
            }
        }
    }
}

#[test]
fn concave_transform_refines_monotonically() {
    for (model, v) in transform_cases() {
        for m in [2u32, 4] {
            let coarse = concave_transform(&model, m, &v).unwrap();
            let fine = concave_transform(&model, 2 * m, &v).unwrap();
            for (alpha, g) in &coarse.values {
                let doubled: Vec<u32> = alpha.iter().map(|a| 2 * a).collect();
                assert!(fine.get(&doubled).unwrap() >= g, "{model:?}, m = {m}, alpha = {alpha:?}");
            }
        }
    }
}

#[test]
fn concave_transform_is_nonnegative_and_bounded_by_its_limit() {
    let plane = SectionModel::proj_plane(1);
    let v = Valuation::ord_at(&[int(1), int(1)]).unwrap();
    for m in [3u32, 6, 9] {
        let t = concave_transform(&plane, m, &v).unwrap();
        for (alpha, g) in &t.values {
            let limit = Rat::one() - rat(alpha[0] as i64, m as i64);
            let g = g.as_rational().unwrap();
            assert!(!g.is_negative() && *g <= limit, "m = {m}, alpha = {alpha:?}");
        }
    }
}
