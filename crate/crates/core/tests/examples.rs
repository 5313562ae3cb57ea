//! Fixed worked values, each recomputed here by hand-sized arithmetic.

use oddunitary::*;

fn demo() -> (Ring, SpaceConfig) {
    let ring = Ring::modular(5, Involution::Negation).unwrap();
    let cfg = SpaceConfig::with_identity_phi(&ring, 1, 2).unwrap();
    (ring, cfg)
}

fn ints(ring: &Ring, xs: &[i64]) -> Vec<Scalar> {
    xs.iter().map(|&x| ring.int(x)).collect()
}

#[test]
fn alpha_of_demo_vector() {
    let (ring, cfg) = demo();
    let alpha = build_alpha(&cfg, &ints(&ring, &[0, 1, 2])).unwrap();
    assert_eq!(alpha, Matrix::from_ints(&ring, &[&[1, 4, 3], &[0, 1, 0], &[0, 0, 1]]).unwrap());
}

#[test]
fn condition_d_values() {
    let (ring, cfg) = demo();
    assert!(condition_d(&cfg, &ints(&ring, &[0, 1, 2])).unwrap());
    assert!(!condition_d(&cfg, &ints(&ring, &[0, 1, 1])).unwrap());
    assert!(condition_d(&cfg, &ints(&ring, &[0, 0, 0])).unwrap());
}

#[test]
fn forced_first_coordinate() {
    let (ring, cfg) = demo();
    // q(w) = 1 + 4 = 0, so -2 a1 = 0.
    let v = force_condition_d(&cfg, &ints(&ring, &[1, 2])).unwrap();
    assert_eq!(v, ints(&ring, &[0, 1, 2]));
    // q(w) = 1 + 1 = 2, so -2 a1 = 2 and a1 = 4.
    let v = force_condition_d(&cfg, &ints(&ring, &[1, 1])).unwrap();
    assert_eq!(v[0], ring.int(4));
    assert!(condition_d(&cfg, &v).unwrap());
}

#[test]
fn forcing_can_fail() {
    // Over Z with negation, bar(a1) - a1 = -2 a1 is even, and q((1, 0)) = 1.
    let ring = Ring::integers(Involution::Negation).unwrap();
    let cfg = SpaceConfig::with_identity_phi(&ring, 1, 2).unwrap();
    assert_eq!(cfg.q_small(&ints(&ring, &[1, 0])).unwrap(), ring.one());
    assert!(matches!(
        force_condition_d(&cfg, &ints(&ring, &[1, 0])),
        Err(Error::ConditionUnsolvable(_))
    ));
    assert!(force_condition_d(&cfg, &ints(&ring, &[1, 1])).is_ok());
}

#[test]
fn identity_phi_needs_negation() {
    let ring = Ring::modular(5, Involution::Identity).unwrap();
    assert!(matches!(
        SpaceConfig::with_identity_phi(&ring, 1, 2),
        Err(Error::InvalidPhi(_))
    ));
}

#[test]
fn json_round_trips() {
    let (ring, cfg) = demo();
    assert_eq!(SpaceConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    let v = ints(&ring, &[0, 1, 2]);
    let c = conj_l_to_transvection(&cfg, &v).unwrap();
    assert_eq!(ConjugationResult::from_json(&cfg, &c.to_json(&cfg)).unwrap(), c);
    let w = factor_l(&cfg, &v).unwrap();
    assert_eq!(ElementaryWord::from_json(&ring, &w.to_json()).unwrap(), w);
    let l = build_l(&cfg, &v).unwrap();
    assert_eq!(Matrix::from_json(&l.to_json()).unwrap(), l);
}
