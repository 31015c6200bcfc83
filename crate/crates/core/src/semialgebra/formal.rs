//! Formal exponential sums `Σ c_i e^{q_i}` with exponents in the Puiseux
//! monoid `M = ⟨1/p : p prime⟩`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{integer_divisors, search, sorted_factorizations, Element, Factorization, Mode};
use crate::enumeration::{Bounds, Enumeration};
use crate::error::{Error, Result};
use crate::primes;
use crate::rational::Rat;

/// Membership in `M = ⟨1/p : p prime⟩`.
///
/// With `q = N/D`, `D` must be squarefree. The `1/p`-coefficient of any
/// representation is congruent to `r_p = N (D/p)^{-1} mod p`, so `q` lies in
/// `M` exactly when `q - Σ r_p/p` is nonnegative.
pub fn mem_m(q: &Rat) -> bool {
    if q.is_integer() {
        return true;
    }
    let n = q.numer();
    let d = q.denom();
    if !primes::is_squarefree(&d) {
        return false;
    }
    let mut floor = Rat::zero();
    for (p, _) in primes::factorize(&d) {
        let cofactor = &d / &p;
        let inv = (&cofactor % &p).modinv(&p).expect("squarefree denominator");
        let r_p = (&n * inv) % &p;
        floor = floor + Rat::new(r_p, p).expect("prime is nonzero");
    }
    *q >= floor
}

/// A finite sum of exponentials with positive integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExpSum {
    terms: BTreeMap<Rat, BigUint>,
}

impl ExpSum {
    pub fn new(terms: impl IntoIterator<Item = (Rat, BigUint)>) -> Result<ExpSum> {
        let mut map: BTreeMap<Rat, BigUint> = BTreeMap::new();
        for (q, c) in terms {
            if c.is_zero() {
                continue;
            }
            if !mem_m(&q) {
                return Err(Error::domain(format!("exponent {q} is not in <1/p : p prime>")));
            }
            *map.entry(q).or_default() += c;
        }
        Ok(ExpSum { terms: map })
    }

    /// `c e^q`; `q` must lie in `M`.
    pub fn single(q: Rat, c: impl Into<BigUint>) -> Result<ExpSum> {
        ExpSum::new([(q, c.into())])
    }

    pub fn one() -> ExpSum {
        ExpSum { terms: [(Rat::zero(), BigUint::one())].into_iter().collect() }
    }

    pub fn terms(&self) -> &BTreeMap<Rat, BigUint> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == ExpSum::one()
    }

    pub fn is_single_term(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_single_exponential(&self) -> bool {
        self.is_single_term() && self.terms.values().all(BigUint::is_one)
    }

    pub fn add(&self, other: &ExpSum) -> ExpSum {
        let mut terms = self.terms.clone();
        for (q, c) in &other.terms {
            *terms.entry(q.clone()).or_default() += c;
        }
        ExpSum { terms }
    }

    pub fn mul(&self, other: &ExpSum) -> ExpSum {
        let mut terms: BTreeMap<Rat, BigUint> = BTreeMap::new();
        for (q1, c1) in &self.terms {
            for (q2, c2) in &other.terms {
                *terms.entry(q1 + q2).or_default() += c1 * c2;
            }
        }
        ExpSum { terms }
    }

    fn coefficient_sum(&self) -> BigUint {
        self.terms.values().sum()
    }

    fn coefficient_gcd(&self) -> BigUint {
        self.terms.values().fold(BigUint::zero(), |g, c| g.gcd(c))
    }

    /// `self / other` when the quotient lies in the semiring.
    pub fn divide(&self, other: &ExpSum) -> Option<ExpSum> {
        let (lead_q, lead_c) = other.terms.iter().next_back()?;
        let mut rem: BTreeMap<Rat, num_bigint::BigInt> =
            self.terms.iter().map(|(q, c)| (q.clone(), c.clone().into())).collect();
        let mut quot: BTreeMap<Rat, BigUint> = BTreeMap::new();
        let lead_c: num_bigint::BigInt = lead_c.clone().into();
        while let Some((q, c)) = rem.iter().next_back().map(|(q, c)| (q.clone(), c.clone())) {
            if c.is_zero() {
                rem.remove(&q);
                continue;
            }
            let shift = q.checked_sub(lead_q)?;
            if !mem_m(&shift) {
                return None;
            }
            let (k, r) = c.div_rem(&lead_c);
            if !r.is_zero() || k <= num_bigint::BigInt::zero() {
                return None;
            }
            for (oq, oc) in &other.terms {
                let e = rem.entry(oq + &shift).or_default();
                *e -= &k * num_bigint::BigInt::from(oc.clone());
            }
            quot.insert(shift, k.to_biguint().expect("positive"));
        }
        let quot = ExpSum { terms: quot };
        (quot.mul(other) == *self).then_some(quot)
    }

    pub(crate) fn additive_factorization(&self) -> Factorization {
        Factorization::new(
            Mode::Additive,
            self.terms.iter().map(|(q, c)| {
                let atom = ExpSum::single(q.clone(), 1u32).expect("exponent already validated");
                (Element::ExpSum(atom), c.to_u64().expect("coefficient fits in 64 bits"))
            }),
        )
    }

    /// Every sub-sum of the terms.
    pub(crate) fn additive_divisors(&self, bounds: &Bounds) -> Enumeration<Element> {
        let mut acc: Vec<ExpSum> = vec![ExpSum::default()];
        let mut capped = false;
        for (q, c) in &self.terms {
            let c = c.to_u64().unwrap_or(u64::MAX);
            let mut next = Vec::new();
            'outer: for partial in &acc {
                for k in 0..=c {
                    if next.len() >= bounds.max_count {
                        capped = true;
                        break 'outer;
                    }
                    let mut t = partial.clone();
                    if k > 0 {
                        t.terms.insert(q.clone(), BigUint::from(k));
                    }
                    next.push(t);
                }
            }
            acc = next;
        }
        acc.sort();
        Enumeration::new(acc.into_iter().map(Element::ExpSum).collect(), !capped, *bounds)
    }
}

impl fmt::Display for ExpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(q, c)| format!("{q}:{c}")).collect();
        write!(f, "e:{{{}}}", parts.join(","))
    }
}

impl FromStr for ExpSum {
    type Err = Error;
    fn from_str(s: &str) -> Result<ExpSum> {
        let body = s
            .trim()
            .strip_prefix("e:")
            .and_then(|b| b.trim().strip_prefix('{'))
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("expected e:{{q:c,...}}, got {s:?}")))?;
        let mut terms = Vec::new();
        for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (q, c) = part.split_once(':').ok_or_else(|| Error::Parse(format!("bad term {part:?}")))?;
            let q: Rat = q.trim().parse()?;
            let c: BigUint = c.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))?;
            terms.push((q, c));
        }
        ExpSum::new(terms)
    }
}

impl Serialize for ExpSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn prime_reciprocal(q: &Rat) -> bool {
    q.numer().is_one() && primes::is_prime(&q.denom())
}

/// Primes dividing some exponent denominator, plus one prime dividing none.
/// Divisibility by `e^{1/p}` is the same for every prime of the second kind.
fn shift_primes(x: &ExpSum) -> Vec<BigUint> {
    let mut set: BTreeSet<BigUint> = BTreeSet::new();
    for q in x.terms.keys() {
        set.extend(primes::factorize(&q.denom()).into_iter().map(|(p, _)| p));
    }
    let mut p = BigUint::from(2u32);
    while set.contains(&p) {
        p += 1u32;
        while !primes::is_prime(&p) {
            p += 1u32;
        }
    }
    set.insert(p);
    set.into_iter().collect()
}

fn shifted_by(x: &ExpSum, p: &BigUint) -> bool {
    let step = Rat::new(1u32, p.clone()).expect("prime");
    x.terms.keys().all(|q| q.checked_sub(&step).is_some_and(|s| mem_m(&s)))
}

pub(crate) fn is_mult_atom(x: &ExpSum, bounds: &Bounds) -> Result<bool> {
    if x.is_one() {
        return Ok(false);
    }
    if x.is_single_term() {
        let (q, c) = x.terms.iter().next().expect("one term");
        return Ok((q.is_zero() && primes::is_prime(c)) || (c.is_one() && prime_reciprocal(q)));
    }
    if !x.coefficient_gcd().is_one() {
        return Ok(false);
    }
    if shift_primes(x).iter().any(|p| shifted_by(x, p)) {
        return Ok(false);
    }
    // With a prime coefficient sum, one factor would be a single exponential,
    // which the shift test rules out.
    if primes::is_prime(&x.coefficient_sum()) {
        return Ok(true);
    }
    if binomial_divisor(x, bounds).is_some() {
        return Ok(false);
    }
    Err(Error::inconclusive(format!("no proper divisor of {x} found within bounds")))
}

/// Searches divisors `a + b e^t` with `t` a difference of exponents of `x`.
fn binomial_divisor(x: &ExpSum, bounds: &Bounds) -> Option<ExpSum> {
    let exps: Vec<&Rat> = x.terms.keys().collect();
    let cmax = x.terms.values().max().and_then(|c| c.to_u64()).unwrap_or(1).min(bounds.max_count as u64);
    let mut shifts = BTreeSet::new();
    for a in &exps {
        for b in &exps {
            if let Some(t) = b.checked_sub(a) {
                if !t.is_zero() && mem_m(&t) {
                    shifts.insert(t);
                }
            }
        }
    }
    for t in shifts {
        for a in 1..=cmax {
            for b in 1..=cmax {
                let y = ExpSum::new([(Rat::zero(), BigUint::from(a)), (t.clone(), BigUint::from(b))]).ok()?;
                if let Some(z) = x.divide(&y) {
                    if !z.is_one() {
                        return Some(y);
                    }
                }
            }
        }
    }
    None
}

/// Exponent part of the divisors of `e^q`: `q'` in `M` with `q - q'` in `M`.
/// For `q < 1` every such `q'` has denominator dividing that of `q`.
fn exponent_divisors(q: &Rat, bounds: &Bounds) -> (Vec<Rat>, bool) {
    let candidates = if *q < Rat::one() {
        let d = q.denom();
        let top = (q * &Rat::int(d.clone())).floor().to_u64().expect("q < 1");
        let dd = d.to_u64().expect("small denominator");
        ((0..=top).map(|k| Rat::new(k, dd).expect("d >= 1")).collect::<Vec<_>>(), true)
    } else {
        (search::rationals_between(&Rat::zero(), q, bounds.max_den), false)
    };
    let (cands, complete) = candidates;
    let mut v: Vec<Rat> = cands
        .into_iter()
        .filter(|s| mem_m(s) && q.checked_sub(s).is_some_and(|t| mem_m(&t)))
        .collect();
    v.sort();
    v.dedup();
    (v, complete)
}

pub(crate) fn mult_divisors(x: &ExpSum, bounds: &Bounds) -> Result<Enumeration<Element>> {
    if !x.is_single_term() {
        return Err(Error::Unsupported("multiplicative divisors of multi-term sums".into()));
    }
    let (q, c) = x.terms.iter().next().expect("one term");
    let (exps, complete) = exponent_divisors(q, bounds);
    let mut items = Vec::new();
    for k in integer_divisors(c) {
        for s in &exps {
            items.push(Element::ExpSum(ExpSum::single(s.clone(), k.clone())?));
            if items.len() >= bounds.max_count {
                return Ok(Enumeration::new(items, false, *bounds));
            }
        }
    }
    items.sort();
    Ok(Enumeration::new(items, complete, *bounds))
}

/// Factorizations of `c e^q`: the prime factorization of `c` times a
/// factorization of `q` over the atoms `1/p`, `p <= max_den`.
pub(crate) fn mult_factorizations(x: &ExpSum, bounds: &Bounds) -> Result<Enumeration<Factorization>> {
    if !x.is_single_term() {
        return Err(Error::Unsupported("multiplicative factorizations of multi-term sums".into()));
    }
    let (q, c) = x.terms.iter().next().expect("one term");
    let prime_part: Vec<(Element, u64)> = primes::factorize(c)
        .into_iter()
        .map(|(p, e)| (Element::ExpSum(ExpSum::single(Rat::zero(), p).expect("0 in M")), e as u64))
        .collect();
    let ps = primes::primes_up_to(bounds.max_den);
    let mut atoms: Vec<Rat> = ps.iter().map(|&p| Rat::new(1u32, p).expect("prime")).collect();
    atoms.sort();
    let found = search::knapsack(&atoms, q, None, bounds.max_count);
    let den_primes_covered = primes::factorize(&q.denom()).iter().all(|(p, _)| *p <= BigUint::from(bounds.max_den));
    let complete = *q < Rat::one() && den_primes_covered && !found.truncated;
    let items = found
        .solutions
        .into_iter()
        .map(|counts| {
            let exp_part = atoms
                .iter()
                .zip(counts)
                .map(|(a, k)| (Element::ExpSum(ExpSum::single(a.clone(), 1u32).expect("1/p in M")), k));
            Factorization::new(Mode::Multiplicative, prime_part.iter().cloned().chain(exp_part))
        })
        .collect();
    Ok(Enumeration::new(sorted_factorizations(items), complete, *bounds))
}

pub(crate) fn list_atoms(mode: Mode, bounds: &Bounds, max_value: &Rat) -> Result<Enumeration<Element>> {
    let mut items = Vec::new();
    match mode {
        Mode::Additive => {
            let mut exps: Vec<Rat> =
                search::rationals_between(&Rat::zero(), max_value, bounds.max_den).into_iter().filter(mem_m).collect();
            exps.sort_by_key(|q| q.height_key());
            for q in exps {
                items.push(Element::ExpSum(ExpSum::single(q, 1u32)?));
            }
        }
        Mode::Multiplicative => {
            let cap = max_value.floor().to_u64().unwrap_or(u64::MAX);
            for p in primes::primes_up_to(cap) {
                items.push(Element::ExpSum(ExpSum::single(Rat::zero(), p)?));
            }
            for p in primes::primes_up_to(bounds.max_den) {
                items.push(Element::ExpSum(ExpSum::single(Rat::new(1u32, p)?, 1u32)?));
            }
        }
    }
    items.truncate(bounds.max_count);
    Ok(Enumeration::new(items, false, *bounds))
}
