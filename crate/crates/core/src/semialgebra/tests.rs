use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::rational::make_rat;

fn q(n: u64, d: u64) -> Rat {
    make_rat(n, d).unwrap()
}

fn e(n: u64, d: u64) -> Element {
    Element::Rational(q(n, d))
}

fn sa(s: &str) -> Semialgebra {
    s.parse().unwrap()
}

fn shown(items: &[Element]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

#[test]
fn descriptor_round_trip() {
    for s in ["nat", "qnn", "exp", "cyclic:2/3", "conducted:2", "conducted:1/2"] {
        assert_eq!(sa(s).to_string(), s);
    }
    assert!("cyclic:1".parse::<Semialgebra>().is_err());
    assert!("cyclic:0".parse::<Semialgebra>().is_err());
    assert!("ring".parse::<Semialgebra>().is_err());
}

#[test]
fn membership_examples() {
    assert!(sa("cyclic:2/3").contains(&e(4, 3)).unwrap());
    assert!(!sa("cyclic:2/3").contains(&e(1, 3)).unwrap());
    assert!(!sa("conducted:2").contains(&e(3, 2)).unwrap());
    assert!(sa("qnn").contains(&e(3, 7)).unwrap());
    assert!(!sa("nat").contains(&e(3, 7)).unwrap());
    assert!(sa("nat").contains(&Element::ExpSum(ExpSum::one())).is_err());
}

#[test]
fn composite_denominator_below_one_is_inconclusive_when_unfound() {
    let s = sa("cyclic:5/6");
    let b = Bounds::default().with_max_exp(2).with_max_count(10);
    let err = s.contains_within(&e(5, 1296), &b).unwrap_err();
    assert!(err.is_inconclusive());
    assert!(s.contains_within(&e(25, 36), &b).unwrap());
}

#[test]
fn additive_atom_examples() {
    assert!(sa("cyclic:2/3").is_add_atom(&e(4, 9)).unwrap());
    assert!(!sa("conducted:2").is_add_atom(&e(2, 1)).unwrap());
    assert!(sa("conducted:2").is_add_atom(&e(9, 4)).unwrap());
    assert!(sa("nat").is_add_atom(&e(1, 1)).unwrap());
    assert!(!sa("nat").is_add_atom(&e(2, 1)).unwrap());
    assert!(!sa("cyclic:3").is_add_atom(&e(9, 1)).unwrap());
    assert!(!sa("cyclic:1/2").is_add_atom(&e(1, 2)).unwrap());
    assert!(!sa("qnn").is_add_atom(&e(1, 2)).unwrap());
    assert!(sa("conducted:1").is_add_atom(&e(3, 2)).unwrap());
    assert!(!sa("conducted:1/2").is_add_atom(&e(3, 2)).unwrap());
    let exp = sa("exp");
    assert!(exp.is_add_atom(&"e:{1/2:1}".parse().unwrap()).unwrap());
    assert!(!exp.is_add_atom(&"e:{1/2:2}".parse().unwrap()).unwrap());
    assert!(matches!(sa("conducted:2").is_add_atom(&e(3, 2)), Err(Error::Domain(_))));
}

#[test]
fn multiplicative_atom_examples() {
    assert!(sa("conducted:2").is_mult_atom(&e(7, 2)).unwrap());
    assert!(!sa("conducted:2").is_mult_atom(&e(9, 2)).unwrap());
    assert!(sa("conducted:2").is_mult_atom(&e(2, 1)).unwrap());
    assert!(sa("nat").is_mult_atom(&e(7, 1)).unwrap());
    assert!(!sa("nat").is_mult_atom(&e(8, 1)).unwrap());
    assert!(sa("cyclic:2/3").is_mult_atom(&e(2, 3)).unwrap());
    assert!(!sa("cyclic:2/3").is_mult_atom(&e(4, 9)).unwrap());
    assert!(!sa("cyclic:2/3").is_mult_atom(&e(2, 1)).unwrap());
    assert!(sa("cyclic:2/3").is_mult_atom(&e(3, 1)).unwrap());
    assert!(sa("cyclic:1/2").is_mult_atom(&e(3, 4)).unwrap());
    assert!(!sa("cyclic:1/2").is_mult_atom(&e(9, 4)).unwrap());
    assert!(!sa("conducted:1").is_mult_atom(&e(3, 1)).unwrap());
    assert!(sa("nat").is_mult_atom(&e(0, 1)).is_err());
}

#[test]
fn unit_examples() {
    assert!(sa("cyclic:1/2").is_mult_unit(&e(1, 2)).unwrap());
    assert!(sa("cyclic:1/2").is_mult_unit(&e(8, 1)).unwrap());
    assert!(!sa("cyclic:1/2").is_mult_unit(&e(3, 1)).unwrap());
    assert!(!sa("cyclic:2/3").is_mult_unit(&e(2, 3)).unwrap());
    assert!(sa("qnn").is_mult_unit(&e(5, 7)).unwrap());
    assert!(sa("conducted:1/3").is_mult_unit(&e(5, 7)).unwrap());
    assert!(!sa("conducted:2").is_mult_unit(&e(5, 2)).unwrap());
    for (s, reduced) in [("cyclic:1/2", false), ("cyclic:1/3", false), ("cyclic:2/3", true), ("cyclic:3/2", true), ("cyclic:5/4", true)] {
        assert_eq!(sa(s).is_reduced(), reduced, "{s}");
    }
}

#[test]
fn digits_reject_other_kinds() {
    assert!(sa("cyclic:3/2").canonical_digits(&q(3, 1)).is_ok());
    assert!(sa("cyclic:5/6").canonical_digits(&q(5, 6)).is_err());
    assert!(sa("nat").canonical_digits(&q(5, 1)).is_err());
}

#[test]
fn additive_factorization_examples() {
    let b = Bounds::default();
    let f = sa("nat").add_factorizations(&e(3, 1), &b).unwrap();
    assert!(f.complete);
    assert_eq!(f.items.iter().map(ToString::to_string).collect::<Vec<_>>(), ["3*(1)"]);

    let f = sa("cyclic:3/2").add_factorizations(&e(3, 1), &b).unwrap();
    assert!(f.complete);
    assert_eq!(f.items.iter().map(ToString::to_string).collect::<Vec<_>>(), ["3*(1)", "2*(3/2)"]);

    let f = sa("cyclic:2/3").add_factorizations(&e(0, 1), &b).unwrap();
    assert_eq!(f.items, vec![Factorization::empty(Mode::Additive)]);

    let f = sa("qnn").add_factorizations(&e(1, 2), &b).unwrap();
    assert!(f.items.is_empty() && f.complete);

    let x: Element = "e:{0:2,1/3:1}".parse().unwrap();
    let f = sa("exp").add_factorizations(&x, &b).unwrap();
    assert_eq!(f.items.len(), 1);
    assert_eq!(f.items[0].len(), 3);
}

#[test]
fn length_set_examples() {
    let b = Bounds::default();
    assert_eq!(sa("nat").add_length_set(&e(5, 1), &b).unwrap(), (BTreeSet::from([5]), true));
    assert_eq!(sa("cyclic:3/2").add_length_set(&e(3, 1), &b).unwrap(), (BTreeSet::from([2, 3]), true));
    let b8 = b.with_max_len(8);
    let (lens, complete) = sa("cyclic:2/3").add_length_set(&e(4, 3), &b8).unwrap();
    assert_eq!(lens, (2..=8).collect());
    assert!(!complete);
    let (lens, _) = sa("cyclic:2/3").add_length_set(&e(4, 3), &b.with_max_len(10)).unwrap();
    assert_eq!(lens, (2..=10).collect());
}

#[test]
fn expansion_closure_is_complete_for_small_digits() {
    let f = sa("cyclic:2/3").add_factorizations(&e(1, 1), &Bounds::default()).unwrap();
    assert!(f.complete);
    assert_eq!(f.items.len(), 1);
}

#[test]
fn divisor_examples() {
    let b = Bounds::default();
    let d = sa("nat").add_divisors(&e(2, 1), &b).unwrap();
    assert!(d.complete);
    assert_eq!(shown(&d.items), ["0", "1", "2"]);

    let d = sa("cyclic:3/2").add_divisors(&e(3, 2), &b).unwrap();
    assert!(d.complete);
    assert_eq!(shown(&d.items), ["0", "3/2"]);

    let d = sa("conducted:2").add_divisors(&e(5, 1), &b.with_max_den(4)).unwrap();
    assert!(!d.complete);
    assert_eq!(shown(&d.items), ["0", "1", "2", "9/4", "7/3", "5/2", "8/3", "11/4", "3", "4", "5"]);

    let d = sa("nat").mult_divisors(&e(12, 1), &b).unwrap();
    assert!(d.complete);
    assert_eq!(shown(&d.items), ["1", "2", "3", "4", "6", "12"]);

    let d = sa("cyclic:2/3").mult_divisors(&e(2, 3), &b).unwrap();
    assert!(d.complete);
    assert_eq!(shown(&d.items), ["2/3", "1"]);

    let d = sa("conducted:2").mult_divisors(&e(9, 2), &b.with_max_den(8)).unwrap();
    assert!(!d.complete);
    assert_eq!(shown(&d.items), ["1", "2", "9/4", "9/2"]);

    let d = sa("cyclic:3/2").mult_divisors(&e(9, 4), &b).unwrap();
    assert!(d.complete);
    assert_eq!(shown(&d.items), ["1", "3/2", "9/4"]);
}

#[test]
fn multiplicative_factorization_examples() {
    let b = Bounds::default();
    let f = sa("nat").mult_factorizations(&e(12, 1), &b).unwrap();
    assert!(f.complete);
    assert_eq!(f.items.iter().map(ToString::to_string).collect::<Vec<_>>(), ["2*(2) * 3"]);

    let f = sa("cyclic:2/3").mult_factorizations(&e(4, 9), &b).unwrap();
    assert!(f.complete);
    assert_eq!(f.items.iter().map(ToString::to_string).collect::<Vec<_>>(), ["2*(2/3)"]);

    let f = sa("cyclic:1/2").mult_factorizations(&e(9, 4), &b).unwrap();
    assert!(f.complete);
    assert_eq!(f.items.iter().map(ToString::to_string).collect::<Vec<_>>(), ["2*(3)"]);

    let x: Element = "e:{1:1}".parse().unwrap();
    let f = sa("exp").mult_factorizations(&x, &b.with_max_den(5)).unwrap();
    let lens: BTreeSet<u64> = f.items.iter().map(Factorization::len).collect();
    assert_eq!(lens, BTreeSet::from([2, 3, 5]));
    assert!(!f.complete);

    let multi: Element = "e:{0:1,1:1}".parse().unwrap();
    assert!(matches!(sa("exp").mult_factorizations(&multi, &b), Err(Error::Unsupported(_))));
    assert!(sa("nat").mult_factorizations(&e(0, 1), &b).is_err());
    let unit = sa("nat").mult_factorizations(&e(1, 1), &b).unwrap();
    assert_eq!(unit.items, vec![Factorization::empty(Mode::Multiplicative)]);
}

#[test]
fn conducted_multiplicative_factorizations_below_square() {
    let f = sa("conducted:2").mult_factorizations(&e(7, 2), &Bounds::default()).unwrap();
    assert!(f.complete);
    assert_eq!(f.items.len(), 1);
    let f = sa("conducted:3").mult_factorizations(&e(8, 1), &Bounds::default()).unwrap();
    assert!(f.complete);
    assert_eq!(f.items.iter().map(ToString::to_string).collect::<Vec<_>>(), ["3*(2)"]);
}

#[test]
fn accp_examples() {
    let b = Bounds::default().with_depth(5);
    let r = accp_probe(&sa("cyclic:2/3"), Mode::Additive, &e(2, 1), &b).unwrap();
    assert_eq!(r.outcome, AccpOutcome::Chain);
    assert_eq!(shown(&r.chain), ["2", "4/3", "8/9", "16/27", "32/81", "64/243"]);
    assert_eq!(shown(&r.cofactors), ["2/3", "4/9", "8/27", "16/81", "32/243"]);

    let r = accp_probe(&sa("nat"), Mode::Additive, &e(5, 1), &b).unwrap();
    assert_eq!(r.outcome, AccpOutcome::NoneFound);
    assert_eq!(r.longest.len(), 5);

    let r = accp_probe(&sa("cyclic:2/3"), Mode::Multiplicative, &e(4, 9), &b.with_depth(3)).unwrap();
    assert_eq!(r.outcome, AccpOutcome::NoneFound);
}

#[test]
fn listed_atoms_follow_height_order() {
    let b = Bounds::default().with_max_den(3);
    let l = sa("conducted:2").list_atoms(Mode::Additive, &b, &q(3, 1)).unwrap();
    assert_eq!(shown(&l.items), ["1", "5/2", "7/3", "8/3"]);
    let l = sa("cyclic:2/3").list_atoms(Mode::Additive, &b.with_max_exp(3), &q(1, 1)).unwrap();
    assert_eq!(shown(&l.items), ["1", "2/3", "4/9", "8/27"]);
}

fn cyclic_member(max_exp: u32) -> impl Strategy<Value = Rat> {
    prop::collection::vec(0u64..3, (max_exp + 1) as usize).prop_map(|cs| {
        cs.iter().enumerate().map(|(i, &c)| q(2, 3).pow(i as u32) * Rat::int(c)).sum()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclic_membership_is_closed(x in cyclic_member(5), y in cyclic_member(5)) {
        let s = sa("cyclic:2/3");
        prop_assert!(s.contains(&Element::Rational(&x + &y)).unwrap());
        prop_assert!(s.contains(&Element::Rational(&x * &y)).unwrap());
    }

    #[test]
    fn conducted_membership_is_closed(a in 0u64..40, b in 1u64..9, c in 0u64..40, d in 1u64..9) {
        let s = sa("conducted:3/2");
        let (x, y) = (q(a, b), q(c, d));
        prop_assume!(s.contains(&Element::Rational(x.clone())).unwrap());
        prop_assume!(s.contains(&Element::Rational(y.clone())).unwrap());
        prop_assert!(s.contains(&Element::Rational(&x + &y)).unwrap());
        prop_assert!(s.contains(&Element::Rational(&x * &y)).unwrap());
    }

    #[test]
    fn digits_reconstruct(x in cyclic_member(6)) {
        let s = sa("cyclic:2/3");
        let digits = s.canonical_digits(&x).unwrap();
        let back: Rat = digits.iter().enumerate().map(|(i, c)| q(2, 3).pow(i as u32) * Rat::from(c.clone())).sum();
        prop_assert_eq!(back, x);
        prop_assert!(digits.iter().skip(1).all(|c| *c < 3u32.into()));
    }

    #[test]
    fn factorizations_evaluate_to_target(x in cyclic_member(3)) {
        let s = sa("cyclic:2/3");
        let el = Element::Rational(x);
        let b = Bounds::default().with_max_len(9);
        for f in s.add_factorizations(&el, &b).unwrap().items {
            prop_assert_eq!(f.value().unwrap(), el.clone());
            for (a, _) in &f.atoms {
                prop_assert!(s.is_add_atom(a).unwrap());
            }
        }
    }

    #[test]
    fn large_generator_lemma_equivalence(k in 0u64..6, j in 0u32..4) {
        let s = sa("cyclic:3/2");
        let x = Element::Rational(Rat::int(k) + q(3, 2).pow(j));
        let b = Bounds::default();
        let divs = s.add_divisors(&x, &b).unwrap();
        let facts = s.add_factorizations(&x, &b).unwrap();
        prop_assert!(divs.complete && facts.complete);
        for f in &facts.items {
            prop_assert_eq!(f.value().unwrap(), x.clone());
        }
        for f in s.mult_factorizations(&x, &b).unwrap().items {
            prop_assert_eq!(f.value().unwrap(), x.clone());
        }
    }
}
