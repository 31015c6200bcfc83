//! Conducted semialgebras `Q_r`.
//!
//! For `r > 1`, `Q_r = ℕ₀ ∪ ℚ≥r`; `Q_1 = {0} ∪ ℚ≥1`; for `r < 1` the
//! semiring is all of ℚ≥0.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{search, sorted_factorizations, Element, Factorization, Mode, Semialgebra};
use crate::enumeration::{Bounds, Enumeration};
use crate::error::Result;
use crate::primes;
use crate::rational::Rat;

fn below_one(r: &Rat) -> bool {
    *r < Rat::one()
}

pub(crate) fn contains(r: &Rat, q: &Rat) -> bool {
    below_one(r) || q.is_integer() || q >= r
}

pub(crate) fn is_add_atom(r: &Rat, q: &Rat) -> bool {
    if below_one(r) {
        return false;
    }
    let upper = r + &Rat::one();
    if r.is_one() {
        return *q >= Rat::one() && *q < upper;
    }
    q.is_one() || (q >= r && *q < upper && *q != Rat::int(r.ceil()))
}

fn is_long_atom(r: &Rat, q: &Rat) -> bool {
    !q.is_one() && is_add_atom(r, q)
}

pub(crate) fn is_mult_unit(r: &Rat, q: &Rat) -> bool {
    !q.is_zero() && (below_one(r) || q.is_one())
}

pub(crate) fn is_mult_atom(r: &Rat, q: &Rat) -> bool {
    if *r <= Rat::one() || q.is_one() || q.is_zero() {
        return false;
    }
    let r2 = r * r;
    if *q >= r2 {
        return false;
    }
    let in_range = *q >= *r || (q.is_integer() && primes::is_prime(&q.numer()));
    if !in_range {
        return false;
    }
    let top = q.floor().to_u64().expect("q < r^2 fits in 64 bits");
    primes::primes_up_to(top).into_iter().all(|p| {
        let cof = q.checked_div(&Rat::int(p)).expect("p > 0");
        !(cof > Rat::one() && contains(r, &cof))
    })
}

/// Exact when `x <= 2r`: at most one summand differs from 1, except for
/// `x = 2r = r + r`. Otherwise a knapsack over the atoms with denominator at
/// most `max_den`.
pub(crate) fn add_factorizations(r: &Rat, x: &Rat, bounds: &Bounds) -> Result<Enumeration<Factorization>> {
    let b = *bounds;
    if below_one(r) {
        return Ok(Enumeration::new(Vec::new(), true, b));
    }
    let one = || Element::Rational(Rat::one());
    let two_r = r + r;
    if *x <= two_r {
        let mut items = Vec::new();
        if x.is_integer() {
            items.push(Factorization::new(Mode::Additive, [(one(), x.to_u64().expect("small integer"))]));
        }
        let top = x.floor().to_u64().expect("x <= 2r");
        for k in 0..=top {
            let q = x.checked_sub(&Rat::int(k)).expect("k <= x");
            if is_long_atom(r, &q) {
                items.push(Factorization::new(Mode::Additive, [(one(), k), (Element::Rational(q), 1)]));
            }
        }
        if *x == two_r && is_long_atom(r, r) {
            items.push(Factorization::new(Mode::Additive, [(Element::Rational(r.clone()), 2)]));
        }
        return Ok(Enumeration::new(sorted_factorizations(items), true, b));
    }
    let atoms = atoms_up_to(r, x, b.max_den);
    let found = search::knapsack(&atoms, x, None, b.max_count);
    let items = found
        .solutions
        .into_iter()
        .map(|c| Factorization::new(Mode::Additive, atoms.iter().cloned().map(Element::Rational).zip(c)))
        .collect();
    Ok(Enumeration::new(sorted_factorizations(items), false, b))
}

/// Additive atoms `<= x` with denominator `<= max_den`, ascending.
fn atoms_up_to(r: &Rat, x: &Rat, max_den: u64) -> Vec<Rat> {
    let hi = (r + &Rat::one()).min(x.clone());
    let mut v: Vec<Rat> = search::rationals_between(r, &hi, max_den).into_iter().filter(|q| is_add_atom(r, q)).collect();
    if !r.is_one() && Rat::one() <= *x {
        v.insert(0, Rat::one());
    }
    v
}

/// Exact when `x <= 2r`, where one of `d` and `x - d` must be an integer.
pub(crate) fn add_divisors(r: &Rat, x: &Rat, bounds: &Bounds) -> Enumeration<Element> {
    let b = *bounds;
    let two_r = r + r;
    let mut set = BTreeSet::new();
    let complete = !below_one(r) && *x <= two_r;
    if complete {
        let top = x.floor().to_u64().expect("x <= 2r");
        for k in 0..=top {
            let k = Rat::int(k);
            let rest = x.checked_sub(&k).expect("k <= x");
            if contains(r, &rest) {
                set.insert(k);
                set.insert(rest);
            }
        }
        if *x == two_r {
            set.insert(r.clone());
        }
    } else {
        let max_den = BigUint::from(b.max_den);
        for d in search::rationals_between(&Rat::zero(), x, b.max_den) {
            let rest = x.checked_sub(&d).expect("d <= x");
            if contains(r, &d) && contains(r, &rest) && rest.denom() <= max_den {
                set.insert(d);
            }
            if set.len() >= b.max_count {
                break;
            }
        }
    }
    Enumeration::new(set.into_iter().map(Element::Rational).collect(), complete, b)
}

/// Exact when `x <= r^2`, where one of `y` and `x / y` must be an integer.
pub(crate) fn mult_divisors(sa: &Semialgebra, r: &Rat, x: &Rat, bounds: &Bounds) -> Enumeration<Element> {
    let b = *bounds;
    if below_one(r) {
        let items = sa.scan_mult_divisors(x, bounds).into_iter().map(Element::Rational).collect();
        return Enumeration::new(items, false, b);
    }
    let r2 = r * r;
    let mut set = BTreeSet::new();
    let complete = *x <= r2;
    if complete {
        let top = x.floor().to_u64().expect("x <= r^2");
        for k in 1..=top {
            let k = Rat::int(k);
            let cof = x.checked_div(&k).expect("k > 0");
            if contains(r, &cof) {
                set.insert(k);
                set.insert(cof);
            }
        }
        if *x == r2 {
            set.insert(r.clone());
        }
    } else {
        // Every nonzero member is at least 1, so divisors lie in [1, x].
        let max_den = BigUint::from(b.max_den);
        for y in search::rationals_between(&Rat::one(), x, b.max_den) {
            if !contains(r, &y) {
                continue;
            }
            let cof = x.checked_div(&y).expect("y >= 1");
            if contains(r, &cof) && cof.denom() <= max_den {
                set.insert(y);
            }
            if set.len() >= b.max_count {
                break;
            }
        }
    }
    Enumeration::new(set.into_iter().map(Element::Rational).collect(), complete, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::make_rat;

    fn q(n: u64, d: u64) -> Rat {
        make_rat(n, d).unwrap()
    }

    #[test]
    fn membership_of_q2() {
        let r = q(2, 1);
        assert!(!contains(&r, &q(3, 2)));
        assert!(contains(&r, &q(1, 1)));
        assert!(contains(&r, &q(9, 4)));
        assert!(contains(&q(1, 2), &q(1, 7)));
        assert!(!contains(&q(1, 1), &q(1, 2)));
    }

    #[test]
    fn additive_atoms_of_q2() {
        let r = q(2, 1);
        assert!(is_add_atom(&r, &q(1, 1)));
        assert!(!is_add_atom(&r, &q(2, 1)));
        assert!(is_add_atom(&r, &q(9, 4)));
        assert!(!is_add_atom(&r, &q(3, 1)));
        let r = q(5, 2);
        assert!(is_add_atom(&r, &q(5, 2)));
        assert!(!is_add_atom(&r, &q(3, 1)));
        assert!(is_add_atom(&r, &q(17, 5)));
    }

    #[test]
    fn multiplicative_atoms_of_q2() {
        let r = q(2, 1);
        for (n, d, want) in [(7, 2, true), (9, 2, false), (2, 1, true), (3, 1, true), (4, 1, false), (5, 2, true)] {
            assert_eq!(is_mult_atom(&r, &q(n, d)), want, "{n}/{d}");
        }
    }

    #[test]
    fn exact_short_factorizations() {
        let r = q(5, 2);
        let f = add_factorizations(&r, &q(5, 1), &Bounds::default()).unwrap();
        assert!(f.complete);
        let shown: Vec<String> = f.items.iter().map(|z| z.to_string()).collect();
        assert_eq!(shown, vec!["5*(1)", "2*(5/2)"]);
    }

    #[test]
    fn divisors_of_5_in_q2() {
        let d = add_divisors(&q(2, 1), &q(5, 1), &Bounds::default().with_max_den(4));
        let got: Vec<String> = d.items.iter().map(|e| e.to_string()).collect();
        assert_eq!(got, ["0", "1", "2", "9/4", "7/3", "5/2", "8/3", "11/4", "3", "4", "5"]);
        assert!(!d.complete);
    }
}
