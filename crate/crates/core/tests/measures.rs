//! Limit measures, restricted volumes and extremal functions against their
//! closed forms.

use num::{One, Signed, Zero};
use vanseq::algebra::rat::{abs, int, rat};
use vanseq::algebra::Rat;
use vanseq::convex::{conical_test, default_tol, direction_grid, extremal_function, ConicalConfig, ConicalVerdict, ConvexBody};
use vanseq::measures::restricted_volume_empirical;
use vanseq::{empirical_measure, vanishing_sequence, Cdf, Divisor, ReferenceCdf, SectionModel, Valuation};

fn references() -> Vec<ReferenceCdf> {
    let mut out = Vec::new();
    for d in [int(1), int(2), rat(7, 3)] {
        out.push(ReferenceCdf::curve_uniform(d).unwrap());
    }
    for c in [[int(0), int(1), int(1)], [int(1), int(-1), int(0)], [int(0), int(1), int(0)], [int(0), int(1), int(3)], [rat(1, 2), int(2), int(-1)]] {
        out.push(ReferenceCdf::simplex_linear_form(c).unwrap());
    }
    for l in [int(0), rat(1, 3), rat(1, 2), rat(9, 10)] {
        out.push(ReferenceCdf::blowup_exceptional(l).unwrap());
    }
    out
}

#[test]
fn reference_measures_are_probability_measures() {
    for r in references() {
        assert_eq!(r.total_mass(), Rat::one(), "{:?}", r.kind);
        let (lo, hi) = r.support();
        assert!(r.cdf_left(lo).is_zero() && r.cdf(hi) == Rat::one(), "{:?}", r.kind);
        // nondecreasing, with nonnegative density, on a fine grid
        let steps = 40;
        let mut last = Rat::zero();
        for k in 0..=steps {
            let t = lo + (hi - lo) * rat(k, steps);
            assert!(!r.density(&t).is_negative(), "{:?} at {t}", r.kind);
            assert!(r.cdf(&t) >= last);
            last = r.cdf(&t);
        }
    }
}

#[test]
fn empirical_support_lies_in_the_reference_support() {
    let cases = [
        (SectionModel::proj_line(2), Valuation::ord_at(&[int(0)]).unwrap()),
        (SectionModel::proj_plane(1), Valuation::ord_at(&[int(0), int(0)]).unwrap()),
        (SectionModel::proj_plane(1), Valuation::ord_at(&[int(1), int(1)]).unwrap()),
        (SectionModel::proj_plane(1), Valuation::PrimeDivisor(Divisor::FlagLine)),
        (SectionModel::blowup(rat(1, 2)).unwrap(), Valuation::PrimeDivisor(Divisor::ExceptionalF)),
    ];
    for (model, v) in cases {
        let reference = vanseq::measures::golden_reference(&model, &v).unwrap();
        let (lo, hi) = reference.support();
        for m in [2u32, 4, 8] {
            let emp = empirical_measure(&vanishing_sequence(&model, m, &v).unwrap()).unwrap();
            let (a, b) = emp.support().unwrap();
            assert!(lo <= a && b <= hi, "{model:?}, {v:?}, m = {m}: [{a}, {b}] not in [{lo}, {hi}]");
        }
    }
}

#[test]
fn arc_measures_lose_mass_near_the_origin() {
    let plane = SectionModel::proj_plane(1);
    let arc = Valuation::arc_exp();
    let mass = |m: u32| {
        let emp = empirical_measure(&vanishing_sequence(&plane, m, &arc).unwrap()).unwrap();
        emp.mass_in(&int(0), &int(4))
    };
    let (m4, m8) = (mass(4), mass(8));
    assert_eq!(m4, Rat::one());
    assert!(m8 < m4, "mass in [0,4]: m = 4 gives {m4}, m = 8 gives {m8}");
}

#[test]
fn exceptional_density_is_rebuilt_from_restricted_volumes() {
    let f = Valuation::PrimeDivisor(Divisor::ExceptionalF);
    for lambda in [rat(1, 2), rat(1, 3)] {
        let model = SectionModel::blowup(lambda.clone()).unwrap();
        let reference = ReferenceCdf::blowup_exceptional(lambda.clone()).unwrap();
        let vol = model.volume();
        for m in [6u32, 12, 24] {
            let mut worst = Rat::zero();
            for j in 0..m as i64 {
                let t = rat(j, m as i64);
                if t >= Rat::one() - &lambda {
                    break;
                }
                let rv = restricted_volume_empirical(&model, &f, m, &t).unwrap();
                let rebuilt = int(2) * rv / &vol;
                worst = worst.max(abs(&(rebuilt - reference.density(&t))));
            }
            // the rank count lags the restricted volume by exactly 1/m, which
            // the density scales by 2/vol(L)
            let bound = int(2) / (int(m as i64) * &vol);
            assert_eq!(worst, bound, "lambda = {lambda}, m = {m}");
        }
    }
}

fn triangle() -> ConvexBody {
    ConvexBody::standard_simplex(2).unwrap()
}

#[test]
fn extremal_function_on_a_polytope() {
    let body = triangle();
    let tol = default_tol();
    let p = vec![rat(1, 4), rat(1, 4)];
    assert_eq!(extremal_function(&body, &p, &p, &tol).unwrap().value, Rat::one());
    // every boundary point is invisible from an interior pole
    for k in 0..=8i64 {
        let s = rat(k, 8);
        for x in [vec![s.clone(), int(0)], vec![int(0), s.clone()], vec![s.clone(), Rat::one() - &s]] {
            assert!(extremal_function(&body, &p, &x, &tol).unwrap().value.is_zero(), "x = {x:?}");
        }
    }
    // concave along segments
    for (a, b) in [
        (vec![int(0), int(0)], vec![rat(1, 2), rat(1, 2)]),
        (vec![rat(1, 8), rat(3, 4)], vec![rat(3, 4), rat(1, 10)]),
        (vec![rat(1, 4), rat(1, 4)], vec![int(1), int(0)]),
    ] {
        let e = |x: &[Rat]| extremal_function(&body, &p, x, &tol).unwrap().value;
        for k in 0..=10i64 {
            let s = rat(k, 10);
            let x: Vec<Rat> = a.iter().zip(&b).map(|(u, v)| u * (Rat::one() - &s) + v * &s).collect();
            let chord = e(&a) * (Rat::one() - &s) + e(&b) * &s;
            assert!(e(&x) >= chord - int(2) * &tol, "segment {a:?} -> {b:?} at s = {s}");
        }
    }
}

#[test]
fn polytope_vertices_are_conical() {
    let cfg = ConicalConfig::default();
    for body in [triangle(), ConvexBody::standard_simplex(3).unwrap()] {
        let dim = body.vertices().unwrap()[0].len();
        let directions = direction_grid(dim, 4);
        for v in body.vertices().unwrap().to_vec() {
            let report = conical_test(&body, &v, &directions, &cfg).unwrap();
            assert_eq!(report.verdict, ConicalVerdict::Conical, "vertex {v:?}");
        }
    }
}
