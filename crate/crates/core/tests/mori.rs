mod support;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toric::birational::{blow_up_curve, star_subdivision};
use toric::fan::projective_space;
use toric::gallery::{get_fan, hirzebruch, xab};
use toric::mori::{classify_contraction, is_projective, ContractionKind, MoriCone};
use toric::Rational;

#[test]
fn f1_has_two_extremal_classes_on_three_walls() {
    let f1 = hirzebruch(1);
    let cone = MoriCone::new(&f1).unwrap();
    assert_eq!(cone.generators().len(), 3);
    assert_eq!(cone.extremal_generators().unwrap().len(), 2);
    let extremal_walls = f1
        .walls()
        .unwrap()
        .iter()
        .filter(|w| cone.is_extremal(w).unwrap())
        .count();
    assert_eq!(extremal_walls, 3);
    // The section ⟨(0,-1)⟩ is fiber + exceptional curve.
    let section = f1.wall(&[3]).unwrap();
    let combo = cone
        .decomposition(&section)
        .unwrap()
        .expect("section is not extremal");
    assert_eq!(combo.len(), 2);
    assert!(combo
        .iter()
        .all(|(_, l)| *l == Rational::from_integer(1.into())));
}

#[test]
fn projective_space_has_one_class() {
    for n in 1..=4 {
        let p = projective_space(n);
        assert_eq!(MoriCone::new(&p).unwrap().generators().len(), 1);
        let v = is_projective(&p).unwrap();
        assert!(v.projective && v.verify(&p).unwrap());
    }
}

#[test]
fn fiber_of_oda_blowup_is_not_extremal() {
    let oda = get_fan("oda3", &[]).unwrap();
    for c in &oda.notes.distinguished_walls {
        let rec = blow_up_curve(&oda.fan, c).unwrap();
        let cone = MoriCone::new(&rec.result).unwrap();
        for w in &rec.exceptional_walls {
            assert!(!cone.is_extremal(w).unwrap());
        }
    }
}

#[test]
fn contraction_examples() {
    let p2 = projective_space(2);
    let info = classify_contraction(&p2, &p2.wall(&[0]).unwrap()).unwrap();
    assert_eq!(info.kind, ContractionKind::Fibration { base_dim: 0 });
    let f1 = hirzebruch(1);
    let info = classify_contraction(&f1, &f1.wall(&[1]).unwrap()).unwrap();
    assert_eq!(
        info.kind,
        ContractionKind::Birational {
            exceptional_dim: 1,
            image_dim: 0,
            fiber_dim: 1,
            divisorial: true
        }
    );
    let p1p1 = get_fan("p1xp1", &[]).unwrap().fan;
    let info = classify_contraction(&p1p1, &p1p1.wall(&[0]).unwrap()).unwrap();
    assert_eq!(info.kind, ContractionKind::Fibration { base_dim: 1 });
    let section = f1.wall(&[3]).unwrap();
    assert!(classify_contraction(&f1, &section).is_err());
}

#[test]
fn contractions_of_extremal_walls_satisfy_their_bounds() {
    for f in [
        get_fan("oda3", &[]).unwrap().fan,
        xab(0, 0),
        xab(1, -1),
        projective_space(3),
    ] {
        let cone = MoriCone::new(&f).unwrap();
        let n = f.dim();
        for rel in cone.relations() {
            let Ok(info) = cone.classify_contraction(&rel.wall) else {
                continue;
            };
            assert!(info.alpha <= info.beta && info.beta < n);
            match info.kind {
                ContractionKind::Fibration { base_dim } => {
                    assert!(info.alpha == 0 && base_dim == info.beta)
                }
                ContractionKind::Birational {
                    exceptional_dim,
                    image_dim,
                    fiber_dim,
                    divisorial,
                } => {
                    assert!(info.alpha > 0);
                    assert_eq!(exceptional_dim, n - info.alpha);
                    assert_eq!(image_dim, info.beta - info.alpha);
                    assert_eq!(fiber_dim, n - info.beta);
                    assert_eq!(divisorial, info.alpha == 1);
                }
            }
        }
    }
}

#[test]
fn non_extremal_generators_are_certified() {
    for f in [
        get_fan("oda3", &[]).unwrap().fan,
        xab(0, 0),
        xab(2, 1),
        hirzebruch(2),
    ] {
        let cone = MoriCone::new(&f).unwrap();
        for g in cone.generators() {
            if let Some(combo) = cone.decomposition(&g.walls[0]).unwrap() {
                let mut sum = vec![Rational::from_integer(0.into()); f.num_rays()];
                for (c, l) in &combo {
                    assert!(*l > Rational::from_integer(0.into()));
                    for (s, x) in sum.iter_mut().zip(c.coords()) {
                        *s += l * Rational::from_integer(x.clone());
                    }
                }
                let target: Vec<Rational> = g
                    .class
                    .coords()
                    .iter()
                    .map(|x| Rational::from_integer(x.clone()))
                    .collect();
                assert_eq!(sum, target);
            }
        }
    }
}

#[test]
fn certificates_serialize_as_rational_strings() {
    let oda = get_fan("oda3", &[]).unwrap().fan;
    let json = is_projective(&oda).unwrap().to_json();
    assert_eq!(json["projective"], false);
    for entry in json["certificate"].as_array().unwrap() {
        assert!(entry["y"].as_str().unwrap().contains('/'));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn blowups_of_projective_fans_stay_projective(seed in any::<u64>(), which in 0usize..4, count in 1usize..4) {
        let start = [projective_space(2), projective_space(3), hirzebruch(2), xab(0, 1)][which].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (base, center) in support::random_subdivisions(&start, count, &mut rng) {
            let result = star_subdivision(&base, &center).unwrap().result;
            prop_assert!(is_projective(&base).unwrap().projective);
            prop_assert!(is_projective(&result).unwrap().projective);
        }
    }
}
