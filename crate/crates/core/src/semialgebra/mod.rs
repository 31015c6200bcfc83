//! The five supported information semialgebras and their additive and
//! multiplicative factorization engines.
//!
//! Every rational semialgebra is a subsemiring of ℚ≥0 and its elements are
//! carried as [`Rat`]. The formal exponential semialgebra carries finite sums
//! of exponentials [`ExpSum`].

mod accp;
mod conducted;
mod cyclic;
mod formal;
pub mod search;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

pub use accp::{accp_probe, AccpOutcome, AccpReport};
pub use cyclic::{Cyclic, CyclicKind};
pub use formal::{mem_m, ExpSum};

use crate::enumeration::{Bounds, Enumeration};
use crate::error::{Error, Result};
use crate::primes;
use crate::rational::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[serde(rename = "add")]
    Additive,
    #[serde(rename = "mult")]
    Multiplicative,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "add" | "additive" => Ok(Mode::Additive),
            "mult" | "mul" | "multiplicative" => Ok(Mode::Multiplicative),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

/// Descriptor of one of the supported semialgebras.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Semialgebra {
    /// ℕ₀
    Nat,
    /// The semiring generated by the powers of one positive rational `r != 1`.
    Cyclic(Cyclic),
    /// The semiring generated by the rationals `>= r`.
    Conducted(Rat),
    /// ℚ≥0
    NonnegRationals,
    /// Finite sums of `e^q`, `q` in the monoid generated by `1/p`, `p` prime.
    FormalExp,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Rational(Rat),
    ExpSum(ExpSum),
}

impl Element {
    pub fn rational(&self) -> Result<&Rat> {
        match self {
            Element::Rational(q) => Ok(q),
            Element::ExpSum(_) => Err(Error::domain("expected a rational element")),
        }
    }

    pub fn exp_sum(&self) -> Result<&ExpSum> {
        match self {
            Element::ExpSum(e) => Ok(e),
            Element::Rational(_) => Err(Error::domain("expected a formal exponential element")),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Rational(q) => q.is_zero(),
            Element::ExpSum(e) => e.is_zero(),
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        match (self, other) {
            (Element::Rational(a), Element::Rational(b)) => Ok(Element::Rational(a + b)),
            (Element::ExpSum(a), Element::ExpSum(b)) => Ok(Element::ExpSum(a.add(b))),
            _ => Err(Error::domain("mixed element types")),
        }
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        match (self, other) {
            (Element::Rational(a), Element::Rational(b)) => Ok(Element::Rational(a * b)),
            (Element::ExpSum(a), Element::ExpSum(b)) => Ok(Element::ExpSum(a.mul(b))),
            _ => Err(Error::domain("mixed element types")),
        }
    }
}

impl From<Rat> for Element {
    fn from(q: Rat) -> Element {
        Element::Rational(q)
    }
}

impl From<ExpSum> for Element {
    fn from(e: ExpSum) -> Element {
        Element::ExpSum(e)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Rational(q) => write!(f, "{q}"),
            Element::ExpSum(e) => write!(f, "{e}"),
        }
    }
}

impl FromStr for Element {
    type Err = Error;
    fn from_str(s: &str) -> Result<Element> {
        let s = s.trim();
        if s.starts_with("e:") {
            Ok(Element::ExpSum(s.parse()?))
        } else {
            Ok(Element::Rational(s.parse()?))
        }
    }
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A multiset of atoms, kept as `(atom, multiplicity)` pairs sorted by atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    pub atoms: Vec<(Element, u64)>,
    pub mode: Mode,
}

impl Factorization {
    pub fn new(mode: Mode, atoms: impl IntoIterator<Item = (Element, u64)>) -> Factorization {
        let mut map: BTreeMap<Element, u64> = BTreeMap::new();
        for (a, c) in atoms {
            if c > 0 {
                *map.entry(a).or_default() += c;
            }
        }
        Factorization { atoms: map.into_iter().collect(), mode }
    }

    pub fn empty(mode: Mode) -> Factorization {
        Factorization { atoms: Vec::new(), mode }
    }

    pub fn len(&self) -> u64 {
        self.atoms.iter().map(|(_, c)| c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Atoms in ascending order, repeated by multiplicity.
    pub fn expanded(&self) -> impl Iterator<Item = &Element> {
        self.atoms.iter().flat_map(|(a, c)| std::iter::repeat_n(a, *c as usize))
    }

    /// Sum or product of the atoms, according to the mode.
    pub fn value(&self) -> Result<Element> {
        let mut it = self.expanded();
        let first = match it.next() {
            Some(a) => a.clone(),
            None => {
                return Ok(match (self.mode, self.atoms.first()) {
                    (Mode::Additive, _) => Element::Rational(Rat::zero()),
                    (Mode::Multiplicative, _) => Element::Rational(Rat::one()),
                })
            }
        };
        it.try_fold(first, |acc, a| match self.mode {
            Mode::Additive => acc.add(a),
            Mode::Multiplicative => acc.mul(a),
        })
    }
}

impl Ord for Factorization {
    fn cmp(&self, other: &Self) -> Ordering {
        self.expanded().cmp(other.expanded()).then(self.mode.cmp(&other.mode))
    }
}

impl PartialOrd for Factorization {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = match self.mode {
            Mode::Additive => " + ",
            Mode::Multiplicative => " * ",
        };
        if self.atoms.is_empty() {
            return write!(f, "()");
        }
        let parts: Vec<String> = self
            .atoms
            .iter()
            .map(|(a, c)| if *c == 1 { format!("{a}") } else { format!("{c}*({a})") })
            .collect();
        write!(f, "{}", parts.join(sep))
    }
}

impl Serialize for Factorization {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(Serialize)]
        struct Entry<'a> {
            atom: &'a Element,
            count: u64,
        }
        let atoms: Vec<Entry> = self.atoms.iter().map(|(a, c)| Entry { atom: a, count: *c }).collect();
        let mut st = s.serialize_struct("Factorization", 3)?;
        st.serialize_field("atoms", &atoms)?;
        st.serialize_field("length", &self.len())?;
        st.serialize_field("mode", &self.mode)?;
        st.end()
    }
}

pub(crate) fn sorted_factorizations(mut items: Vec<Factorization>) -> Vec<Factorization> {
    items.sort();
    items.dedup();
    items
}

fn length_set(e: &Enumeration<Factorization>) -> (BTreeSet<u64>, bool) {
    (e.items.iter().map(Factorization::len).collect(), e.complete)
}

impl Semialgebra {
    pub fn cyclic(r: Rat) -> Result<Semialgebra> {
        Ok(Semialgebra::Cyclic(Cyclic::new(r)?))
    }

    pub fn conducted(r: Rat) -> Semialgebra {
        Semialgebra::Conducted(r)
    }

    pub fn is_formal(&self) -> bool {
        matches!(self, Semialgebra::FormalExp)
    }

    /// Whether 0 is the only additive unit and 1 the only multiplicative unit.
    pub fn is_reduced(&self) -> bool {
        match self {
            Semialgebra::Nat | Semialgebra::FormalExp => true,
            Semialgebra::Cyclic(c) => c.is_reduced(),
            Semialgebra::Conducted(r) => *r >= Rat::one(),
            Semialgebra::NonnegRationals => false,
        }
    }

    fn check_kind(&self, x: &Element) -> Result<()> {
        match (self.is_formal(), x) {
            (true, Element::ExpSum(_)) | (false, Element::Rational(_)) => Ok(()),
            (true, _) => Err(Error::domain("formal exponential semialgebra expects e:{...} elements")),
            (false, _) => Err(Error::domain("rational semialgebra expects rational elements")),
        }
    }

    fn require_member(&self, x: &Element) -> Result<()> {
        if self.contains(x)? {
            Ok(())
        } else {
            Err(Error::domain(format!("{x} is not in {self}")))
        }
    }

    pub fn contains(&self, x: &Element) -> Result<bool> {
        self.contains_within(x, &Bounds::default())
    }

    /// Membership test; only a cyclic semialgebra with composite denominator
    /// and generator below 1 can return `Inconclusive`.
    pub fn contains_within(&self, x: &Element, bounds: &Bounds) -> Result<bool> {
        self.check_kind(x)?;
        match (self, x) {
            (Semialgebra::FormalExp, Element::ExpSum(_)) => Ok(true),
            (_, Element::Rational(q)) => self.contains_rat(q, bounds),
            _ => unreachable!(),
        }
    }

    pub(crate) fn contains_rat(&self, q: &Rat, bounds: &Bounds) -> Result<bool> {
        match self {
            Semialgebra::Nat => Ok(q.is_integer()),
            Semialgebra::NonnegRationals => Ok(true),
            Semialgebra::Conducted(r) => Ok(conducted::contains(r, q)),
            Semialgebra::Cyclic(c) => c.contains(q, bounds),
            Semialgebra::FormalExp => Err(Error::domain("rational element in formal exponential semialgebra")),
        }
    }

    /// Membership where an inconclusive answer counts as "no".
    pub(crate) fn surely_contains(&self, q: &Rat, bounds: &Bounds) -> bool {
        matches!(self.contains_rat(q, bounds), Ok(true))
    }

    pub fn is_add_atom(&self, x: &Element) -> Result<bool> {
        self.check_kind(x)?;
        if let (Semialgebra::Cyclic(c), Element::Rational(q)) = (self, x) {
            if c.is_add_atom(q) {
                return Ok(true);
            }
        }
        self.require_member(x)?;
        match (self, x) {
            (Semialgebra::Nat, Element::Rational(q)) => Ok(q.is_one()),
            (Semialgebra::NonnegRationals, _) => Ok(false),
            (Semialgebra::Cyclic(c), Element::Rational(q)) => Ok(c.is_add_atom(q)),
            (Semialgebra::Conducted(r), Element::Rational(q)) => Ok(conducted::is_add_atom(r, q)),
            (Semialgebra::FormalExp, Element::ExpSum(e)) => Ok(e.is_single_exponential()),
            _ => unreachable!(),
        }
    }

    pub fn is_mult_unit(&self, x: &Element) -> Result<bool> {
        self.check_kind(x)?;
        if x.is_zero() {
            return Ok(false);
        }
        match (self, x) {
            (Semialgebra::Nat, Element::Rational(q)) => Ok(q.is_one()),
            (Semialgebra::NonnegRationals, _) => Ok(true),
            (Semialgebra::Cyclic(c), Element::Rational(q)) => c.is_mult_unit(q),
            (Semialgebra::Conducted(r), Element::Rational(q)) => Ok(conducted::is_mult_unit(r, q)),
            (Semialgebra::FormalExp, Element::ExpSum(e)) => Ok(e.is_one()),
            _ => unreachable!(),
        }
    }

    pub fn is_mult_atom(&self, x: &Element) -> Result<bool> {
        self.is_mult_atom_within(x, &Bounds::default())
    }

    pub fn is_mult_atom_within(&self, x: &Element, bounds: &Bounds) -> Result<bool> {
        self.check_kind(x)?;
        if x.is_zero() {
            return Err(Error::domain("0 is excluded from multiplicative questions"));
        }
        self.require_member(x)?;
        match (self, x) {
            (Semialgebra::Nat, Element::Rational(q)) => Ok(primes::is_prime(&q.numer())),
            (Semialgebra::NonnegRationals, _) => Ok(false),
            (Semialgebra::Cyclic(c), Element::Rational(q)) => c.is_mult_atom(self, q, bounds),
            (Semialgebra::Conducted(r), Element::Rational(q)) => Ok(conducted::is_mult_atom(r, q)),
            (Semialgebra::FormalExp, Element::ExpSum(e)) => formal::is_mult_atom(e, bounds),
            _ => unreachable!(),
        }
    }

    /// Canonical base-`r` digits of a member of a cyclic semialgebra with
    /// prime denominator.
    pub fn canonical_digits(&self, x: &Rat) -> Result<Vec<BigUint>> {
        match self {
            Semialgebra::Cyclic(c) => c.canonical_digits(x),
            _ => Err(Error::domain("canonical digits exist only for cyclic semialgebras")),
        }
    }

    pub fn add_factorizations(&self, x: &Element, bounds: &Bounds) -> Result<Enumeration<Factorization>> {
        self.check_kind(x)?;
        self.require_member(x)?;
        let b = *bounds;
        if x.is_zero() {
            return Ok(Enumeration::new(vec![Factorization::empty(Mode::Additive)], true, b));
        }
        match (self, x) {
            (Semialgebra::Nat, Element::Rational(q)) => Ok(Enumeration::new(
                vec![Factorization::new(Mode::Additive, [(Element::Rational(Rat::one()), ones(q))])],
                true,
                b,
            )),
            (Semialgebra::NonnegRationals, _) => Ok(Enumeration::new(Vec::new(), true, b)),
            (Semialgebra::Cyclic(c), Element::Rational(q)) => c.add_factorizations(q, bounds),
            (Semialgebra::Conducted(r), Element::Rational(q)) => conducted::add_factorizations(r, q, bounds),
            (Semialgebra::FormalExp, Element::ExpSum(e)) => Ok(Enumeration::new(vec![e.additive_factorization()], true, b)),
            _ => unreachable!(),
        }
    }

    pub fn add_length_set(&self, x: &Element, bounds: &Bounds) -> Result<(BTreeSet<u64>, bool)> {
        Ok(length_set(&self.add_factorizations(x, bounds)?))
    }

    /// `{d in S : x - d in S}` within the bounds.
    pub fn add_divisors(&self, x: &Element, bounds: &Bounds) -> Result<Enumeration<Element>> {
        self.check_kind(x)?;
        self.require_member(x)?;
        let b = *bounds;
        match (self, x) {
            (Semialgebra::Nat, Element::Rational(q)) => {
                let n = ones(q);
                Ok(Enumeration::new((0..=n).map(|k| Element::Rational(Rat::int(k))).collect(), true, b))
            }
            (Semialgebra::NonnegRationals, Element::Rational(q)) => {
                if q.is_zero() {
                    return Ok(Enumeration::new(vec![x.clone()], true, b));
                }
                let items = search::rationals_between(&Rat::zero(), q, b.max_den)
                    .into_iter()
                    .filter(|d| q.checked_sub(d).is_some_and(|c| c.denom() <= BigUint::from(b.max_den)))
                    .map(Element::Rational)
                    .collect();
                Ok(Enumeration::new(items, false, b))
            }
            (Semialgebra::Cyclic(c), Element::Rational(q)) => c.add_divisors(self, q, bounds),
            (Semialgebra::Conducted(r), Element::Rational(q)) => Ok(conducted::add_divisors(r, q, bounds)),
            (Semialgebra::FormalExp, Element::ExpSum(e)) => Ok(e.additive_divisors(bounds)),
            _ => unreachable!(),
        }
    }

    /// `{d in S• : x / d in S}` within the bounds.
    pub fn mult_divisors(&self, x: &Element, bounds: &Bounds) -> Result<Enumeration<Element>> {
        self.check_kind(x)?;
        if x.is_zero() {
            return Err(Error::domain("0 is excluded from multiplicative questions"));
        }
        self.require_member(x)?;
        let b = *bounds;
        match (self, x) {
            (Semialgebra::Nat, Element::Rational(q)) => {
                let items = integer_divisors(&q.numer()).into_iter().map(|d| Element::Rational(Rat::int(d))).collect();
                Ok(Enumeration::new(items, true, b))
            }
            (Semialgebra::NonnegRationals, Element::Rational(q)) => {
                Ok(Enumeration::new(self.scan_mult_divisors(q, bounds).into_iter().map(Element::Rational).collect(), false, b))
            }
            (Semialgebra::Cyclic(c), Element::Rational(q)) => c.mult_divisors(self, q, bounds),
            (Semialgebra::Conducted(r), Element::Rational(q)) => Ok(conducted::mult_divisors(self, r, q, bounds)),
            (Semialgebra::FormalExp, Element::ExpSum(e)) => formal::mult_divisors(e, bounds),
            _ => unreachable!(),
        }
    }

    /// Divisors `y = p/q` with `p, q <= max_den * max(1, ceil(x))` and cofactor
    /// denominator `<= max_den`. Always a partial answer.
    pub(crate) fn scan_mult_divisors(&self, x: &Rat, bounds: &Bounds) -> Vec<Rat> {
        let max_den = BigUint::from(bounds.max_den);
        let hi = Rat::int(bounds.max_den) * Rat::int(x.ceil().max(BigUint::one()));
        let lo = Rat::new(1u32, bounds.max_den).expect("max_den >= 1");
        let mut out: Vec<Rat> = search::rationals_between(&lo, &hi, bounds.max_den)
            .into_iter()
            .filter(|y| {
                self.surely_contains(y, bounds)
                    && x.checked_div(y)
                        .is_some_and(|z| z.denom() <= max_den && self.surely_contains(&z, bounds))
            })
            .take(bounds.max_count)
            .collect();
        out.sort();
        out
    }

    pub fn mult_factorizations(&self, x: &Element, bounds: &Bounds) -> Result<Enumeration<Factorization>> {
        self.check_kind(x)?;
        if x.is_zero() {
            return Err(Error::domain("0 is excluded from multiplicative questions"));
        }
        self.require_member(x)?;
        let b = *bounds;
        if self.is_mult_unit(x)? {
            return Ok(Enumeration::new(vec![Factorization::empty(Mode::Multiplicative)], true, b));
        }
        match (self, x) {
            (Semialgebra::Nat, Element::Rational(q)) => {
                let atoms = primes::factorize(&q.numer())
                    .into_iter()
                    .map(|(p, e)| (Element::Rational(Rat::int(p)), e as u64));
                Ok(Enumeration::new(vec![Factorization::new(Mode::Multiplicative, atoms)], true, b))
            }
            (Semialgebra::Cyclic(c), Element::Rational(q)) if c.is_antimatter_additively() => {
                Ok(Enumeration::new(c.unit_absorbing_factorization(q)?.into_iter().collect(), true, b))
            }
            (Semialgebra::Conducted(r), Element::Rational(_)) if r.is_one() => {
                // (Q_1•, ·) has no atoms.
                Ok(Enumeration::new(Vec::new(), true, b))
            }
            (Semialgebra::FormalExp, Element::ExpSum(e)) => formal::mult_factorizations(e, bounds),
            (_, Element::Rational(q)) => self.mult_factorizations_by_divisors(q, bounds),
            _ => unreachable!(),
        }
    }

    /// Depth-first search over the atoms among the multiplicative divisors of `x`.
    fn mult_factorizations_by_divisors(&self, x: &Rat, bounds: &Bounds) -> Result<Enumeration<Factorization>> {
        let divs = self.mult_divisors(&Element::Rational(x.clone()), bounds)?;
        let mut complete = divs.complete;
        let mut atoms = Vec::new();
        for d in &divs.items {
            match self.is_mult_atom_within(d, bounds) {
                Ok(true) => atoms.push(d.rational()?.clone()),
                Ok(false) => {}
                Err(e) if e.is_inconclusive() => complete = false,
                Err(e) => return Err(e),
            }
        }
        let mut out = Vec::new();
        let mut stack = Vec::new();
        let mut truncated = false;
        self.mult_dfs(x, &atoms, 0, bounds, &mut stack, &mut out, &mut truncated);
        let items = out
            .into_iter()
            .map(|fs: Vec<Rat>| Factorization::new(Mode::Multiplicative, fs.into_iter().map(|a| (Element::Rational(a), 1))))
            .collect();
        Ok(Enumeration::new(sorted_factorizations(items), complete && !truncated, *bounds))
    }

    #[allow(clippy::too_many_arguments)]
    fn mult_dfs(
        &self,
        rem: &Rat,
        atoms: &[Rat],
        start: usize,
        bounds: &Bounds,
        stack: &mut Vec<Rat>,
        out: &mut Vec<Vec<Rat>>,
        truncated: &mut bool,
    ) {
        if rem.is_one() {
            out.push(stack.clone());
            return;
        }
        if out.len() >= bounds.max_count || stack.len() >= bounds.max_len.max(64) {
            *truncated = true;
            return;
        }
        for (i, a) in atoms.iter().enumerate().skip(start) {
            let Some(q) = rem.checked_div(a) else { continue };
            if !self.surely_contains(&q, bounds) {
                continue;
            }
            stack.push(a.clone());
            self.mult_dfs(&q, atoms, i, bounds, stack, out, truncated);
            stack.pop();
        }
    }

    pub fn mult_length_set(&self, x: &Element, bounds: &Bounds) -> Result<(BTreeSet<u64>, bool)> {
        Ok(length_set(&self.mult_factorizations(x, bounds)?))
    }

    /// Additive or multiplicative atoms of small height, ordered by
    /// (denominator, numerator). Rational candidates have denominator
    /// `<= max_den` and value `<= max_value`; powers of a cyclic generator stop
    /// at `max_exp`.
    pub fn list_atoms(&self, mode: Mode, bounds: &Bounds, max_value: &Rat) -> Result<Enumeration<Element>> {
        let b = *bounds;
        let by_height = |mut v: Vec<Rat>| {
            v.sort_by_key(|q| q.height_key());
            v.dedup();
            v.into_iter().map(Element::Rational).collect::<Vec<_>>()
        };
        let scan = |pred: &dyn Fn(&Rat) -> Result<bool>, lo: Rat, hi: Rat| -> (Vec<Rat>, bool) {
            let mut clean = true;
            let mut out = Vec::new();
            for q in search::rationals_between(&lo, &hi, b.max_den) {
                if q.is_zero() || !self.surely_contains(&q, &b) {
                    continue;
                }
                match pred(&q) {
                    Ok(true) => out.push(q),
                    Ok(false) => {}
                    Err(_) => clean = false,
                }
            }
            (out, clean)
        };
        match (self, mode) {
            (Semialgebra::FormalExp, _) => formal::list_atoms(mode, bounds, max_value),
            (Semialgebra::Nat, Mode::Additive) => Ok(Enumeration::new(vec![Element::Rational(Rat::one())], true, b)),
            (Semialgebra::NonnegRationals, _) => Ok(Enumeration::new(Vec::new(), true, b)),
            (Semialgebra::Nat, Mode::Multiplicative) => {
                let cap = max_value.floor().try_into().unwrap_or(u64::MAX);
                let v = primes::primes_up_to(cap).into_iter().map(Rat::int).collect();
                Ok(Enumeration::new(by_height(v), false, b))
            }
            (Semialgebra::Cyclic(c), Mode::Additive) => {
                if !c.has_additive_atoms() {
                    return Ok(Enumeration::new(Vec::new(), true, b));
                }
                if c.is_integral() {
                    return Ok(Enumeration::new(vec![Element::Rational(Rat::one())], true, b));
                }
                let v = (0..=b.max_exp).map(|k| c.power(k)).collect();
                Ok(Enumeration::new(by_height(v), false, b))
            }
            (Semialgebra::Conducted(r), Mode::Additive) => {
                if *r < Rat::one() {
                    return Ok(Enumeration::new(Vec::new(), true, b));
                }
                let hi = r + &Rat::one();
                let (v, _) = scan(&|q| Ok(conducted::is_add_atom(r, q)), Rat::one(), hi);
                Ok(Enumeration::new(by_height(v), false, b))
            }
            (Semialgebra::Conducted(r), Mode::Multiplicative) => {
                if *r <= Rat::one() {
                    return Ok(Enumeration::new(Vec::new(), true, b));
                }
                let hi = r * r;
                let (v, _) = scan(&|q| Ok(conducted::is_mult_atom(r, q)), Rat::one(), hi);
                Ok(Enumeration::new(by_height(v), false, b))
            }
            (_, Mode::Multiplicative) => {
                let (v, _) = scan(
                    &|q| self.is_mult_atom_within(&Element::Rational(q.clone()), &b),
                    Rat::zero(),
                    max_value.clone(),
                );
                Ok(Enumeration::new(by_height(v), false, b))
            }
        }
    }
}

fn ones(q: &Rat) -> u64 {
    q.to_u64().expect("integer of machine size")
}

pub(crate) fn integer_divisors(n: &BigUint) -> Vec<BigUint> {
    let mut divs = vec![BigUint::one()];
    for (p, e) in primes::factorize(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigUint::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

impl fmt::Display for Semialgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Semialgebra::Nat => write!(f, "nat"),
            Semialgebra::NonnegRationals => write!(f, "qnn"),
            Semialgebra::FormalExp => write!(f, "exp"),
            Semialgebra::Cyclic(c) => write!(f, "cyclic:{}", c.generator()),
            Semialgebra::Conducted(r) => write!(f, "conducted:{r}"),
        }
    }
}

impl FromStr for Semialgebra {
    type Err = Error;
    fn from_str(s: &str) -> Result<Semialgebra> {
        let s = s.trim();
        match s {
            "nat" => return Ok(Semialgebra::Nat),
            "qnn" => return Ok(Semialgebra::NonnegRationals),
            "exp" => return Ok(Semialgebra::FormalExp),
            _ => {}
        }
        if let Some(r) = s.strip_prefix("cyclic:") {
            let r: Rat = r.parse()?;
            return Semialgebra::cyclic(r).map_err(|e| Error::Parse(e.to_string()));
        }
        if let Some(r) = s.strip_prefix("conducted:") {
            return Ok(Semialgebra::Conducted(r.parse()?));
        }
        Err(Error::Parse(format!("unknown semialgebra {s:?}")))
    }
}

#[cfg(test)]
mod tests;
