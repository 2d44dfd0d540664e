use toric::birational::{blow_down, blow_up_curve};
use toric::gallery::{get_fan, verify_notes, xab, NAMES};
use toric::{Error, Fan};

#[test]
fn every_name_loads() {
    let params: [&[i64]; 6] = [&[3], &[2], &[], &[], &[-2, 3], &[1]];
    for (name, p) in NAMES.iter().zip(params) {
        let e = get_fan(name, p).unwrap();
        assert!(e.fan.validate().is_valid());
        verify_notes(&e).unwrap();
    }
}

#[test]
fn tampered_notes_fail() {
    let mut e = get_fan("oda3", &[]).unwrap();
    e.notes.projective = true;
    assert!(matches!(
        verify_notes(&e),
        Err(Error::InvariantViolation(_))
    ));
    let mut e = get_fan("pn", &[2]).unwrap();
    e.notes.rho = 2;
    assert!(verify_notes(&e).is_err());
    let mut e = get_fan("xab", &[1, 0]).unwrap();
    e.notes.distinguished_walls = vec![e.fan.wall(&[0, 2]).unwrap()];
    assert!(verify_notes(&e).is_err());
}

#[test]
fn fan_file_round_trip() {
    for (name, p) in [
        ("oda3", vec![]),
        ("xab", vec![-3, 2]),
        ("ewald-tower", vec![1]),
    ] {
        let f = get_fan(name, &p).unwrap().fan;
        assert_eq!(Fan::from_json_str(&f.to_json_string()).unwrap(), f);
    }
}

#[test]
fn tower_entry() {
    let e = get_fan("ewald-tower", &[1]).unwrap();
    assert_eq!(
        (e.notes.dim, e.notes.rho, e.notes.projective),
        (4, 4, false)
    );
    assert!(get_fan("ewald-tower", &[-1]).is_err());
}

/// Neighbours of `X_{a,b}` in the grid are one blow-up and one blow-down away.
#[test]
fn grid_neighbours_are_elementary_transformations() {
    for a in -3i64..=3 {
        for b in -3i64..=3 {
            let f = xab(a, b);
            let targets = [(a + 1, b), (a - 1, b), (a, b + 1), (a, b - 1)].map(|(p, q)| xab(p, q));
            let mut reached = [false; 4];
            for w in f.walls().unwrap() {
                let rec = blow_up_curve(&f, &w).unwrap();
                let (e, xt) = (rec.new_ray, &rec.result);
                for r in (0..xt.num_rays()).filter(|&r| r != e) {
                    for o in (0..xt.num_rays()).filter(|&o| o != e && o != r) {
                        let Ok(y) = blow_down(xt, r, &[e, o]) else {
                            continue;
                        };
                        for (k, t) in targets.iter().enumerate() {
                            reached[k] |= !reached[k] && y.is_lattice_isomorphic(t);
                        }
                    }
                }
            }
            assert_eq!(reached, [true; 4], "X_({a},{b})");
        }
    }
}
