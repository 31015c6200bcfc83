use std::collections::{BTreeSet, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{search, sorted_factorizations, Element, Factorization, Mode, Semialgebra};
use crate::enumeration::{Bounds, Enumeration};
use crate::error::{Error, Result};
use crate::primes;
use crate::rational::Rat;

/// Shape of `S_r`, derived from the numerator and denominator of `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CyclicKind {
    /// `d(r) = 1`: the semiring is ℕ₀.
    Integral,
    /// `n(r) = 1`: additively antimatter, multiplicatively not reduced.
    Antimatter,
    /// `d(r)` prime and `n(r) > 1`: canonical digits exist.
    PrimeDen,
    /// `d(r)` composite and `r > 1`.
    Large,
    /// `d(r)` composite and `r < 1`: only bounded searches.
    Open,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cyclic {
    r: Rat,
    n: BigUint,
    d: BigUint,
    kind: CyclicKind,
}

/// Search-node budget per unit of `max_count`.
const NODES_PER_ITEM: usize = 64;

impl Cyclic {
    pub fn new(r: Rat) -> Result<Cyclic> {
        if r.is_zero() || r.is_one() {
            return Err(Error::domain("a cyclic semialgebra needs a generator r > 0 with r != 1"));
        }
        let (n, d) = r.num_den()?;
        let kind = if d.is_one() {
            CyclicKind::Integral
        } else if n.is_one() {
            CyclicKind::Antimatter
        } else if primes::is_prime(&d) {
            CyclicKind::PrimeDen
        } else if n > d {
            CyclicKind::Large
        } else {
            CyclicKind::Open
        };
        Ok(Cyclic { r, n, d, kind })
    }

    pub fn generator(&self) -> &Rat {
        &self.r
    }

    pub fn kind(&self) -> CyclicKind {
        self.kind
    }

    pub fn n_gt_1(&self) -> bool {
        self.n > BigUint::one()
    }

    pub fn d_gt_1(&self) -> bool {
        self.d > BigUint::one()
    }

    pub fn d_prime(&self) -> bool {
        primes::is_prime(&self.d)
    }

    pub fn is_integral(&self) -> bool {
        self.kind == CyclicKind::Integral
    }

    pub fn is_reduced(&self) -> bool {
        self.kind != CyclicKind::Antimatter
    }

    pub fn has_additive_atoms(&self) -> bool {
        self.kind != CyclicKind::Antimatter
    }

    pub(crate) fn is_antimatter_additively(&self) -> bool {
        self.kind == CyclicKind::Antimatter
    }

    fn greater_than_one(&self) -> bool {
        self.n > self.d
    }

    pub fn power(&self, k: u32) -> Rat {
        self.r.pow(k)
    }

    /// `Some(k)` when `q = r^k`.
    pub fn log(&self, q: &Rat) -> Option<u32> {
        if q.is_zero() {
            return None;
        }
        if q.is_one() {
            return Some(0);
        }
        let (num, den) = (q.ratio().numer().magnitude(), q.ratio().denom().magnitude());
        let k = if !self.d.is_one() {
            crate::rational::valuation(den, &self.d)
        } else if !self.n.is_one() {
            crate::rational::valuation(num, &self.n)
        } else {
            return None;
        };
        let k_usize = k as usize;
        (k > 0 && num_traits::pow(self.d.clone(), k_usize) == *den && num_traits::pow(self.n.clone(), k_usize) == *num)
            .then_some(k)
    }

    pub fn contains(&self, x: &Rat, bounds: &Bounds) -> Result<bool> {
        if x.is_integer() {
            return Ok(true);
        }
        match self.kind {
            CyclicKind::Integral => Ok(false),
            CyclicKind::Antimatter => Ok(self.den_within_support(x)),
            CyclicKind::PrimeDen => match self.canonical_digits(x) {
                Ok(_) => Ok(true),
                Err(Error::NotMember(_)) => Ok(false),
                Err(e) => Err(e),
            },
            CyclicKind::Large => {
                if !self.den_within_support(x) {
                    return Ok(false);
                }
                let top = self.top_exponent(x);
                let found = self.digit_search(x, top, None, 1, usize::MAX);
                Ok(!found.solutions.is_empty())
            }
            CyclicKind::Open => {
                if !self.den_within_support(x) {
                    return Ok(false);
                }
                let found = self.digit_search(x, bounds.max_exp, None, 1, bounds.max_count * NODES_PER_ITEM);
                if !found.solutions.is_empty() {
                    Ok(true)
                } else {
                    Err(Error::inconclusive(format!(
                        "no representation of {x} with exponents <= {} in S_{}",
                        bounds.max_exp, self.r
                    )))
                }
            }
        }
    }

    fn den_within_support(&self, x: &Rat) -> bool {
        let mut den = x.denom();
        for (p, _) in primes::factorize(&self.d) {
            while (&den % &p).is_zero() {
                den /= &p;
            }
        }
        den.is_one()
    }

    /// Largest `k` with `r^k <= x`; only meaningful for `r > 1`.
    fn top_exponent(&self, x: &Rat) -> u32 {
        let mut k = 0;
        let mut p = self.r.clone();
        while p <= *x {
            k += 1;
            p = &p * &self.r;
        }
        k
    }

    pub fn canonical_digits(&self, x: &Rat) -> Result<Vec<BigUint>> {
        if self.kind != CyclicKind::PrimeDen {
            return Err(Error::domain(format!("canonical digits need a prime denominator and n(r) > 1, got r = {}", self.r)));
        }
        let not_member = || Error::NotMember(format!("{x} is not in S_{}", self.r));
        let den = x.denom();
        let m = crate::rational::valuation(&den, &self.d);
        if num_traits::pow(self.d.clone(), m as usize) != den {
            return Err(not_member());
        }
        if let Some(digits) = self.small_digits(&x.numer(), m) {
            return digits.ok_or_else(not_member);
        }
        let d = BigInt::from(self.d.clone());
        let n = BigInt::from(self.n.clone());
        let n_inv = (&n % &d).modinv(&d).expect("gcd(n, d) = 1");
        let mut ni = num_traits::pow(n.clone(), m as usize);
        let mut inv = n_inv.modpow(&BigInt::from(m), &d);
        let mut acc = x.ratio().numer().clone();
        let mut digits = vec![BigUint::zero(); m as usize + 1];
        for i in (1..=m).rev() {
            let c = (&acc * &inv).mod_floor(&d);
            acc = (&acc - &c * &ni) / &d;
            if acc.is_negative() {
                return Err(not_member());
            }
            digits[i as usize] = c.to_biguint().expect("residue is nonnegative");
            ni /= &n;
            inv = (inv * &n) % &d;
        }
        digits[0] = acc.to_biguint().expect("checked nonnegative");
        Ok(digits)
    }

    /// Machine-integer version of the digit recursion; `None` on overflow.
    fn small_digits(&self, num: &BigUint, m: u32) -> Option<Option<Vec<BigUint>>> {
        let (n, d, mut acc) = (self.n.to_i128()?, self.d.to_i128()?, num.to_i128()?);
        let mut ni = n.checked_pow(m)?;
        let n_inv = n.rem_euclid(d).extended_gcd(&d).x.rem_euclid(d);
        let mut inv = (0..m).try_fold(1i128, |acc, _| acc.checked_mul(n_inv).map(|v| v % d))?;
        let mut digits = vec![BigUint::zero(); m as usize + 1];
        for i in (1..=m).rev() {
            let c = acc.rem_euclid(d).checked_mul(inv)?.rem_euclid(d);
            acc = acc.checked_sub(c.checked_mul(ni)?)? / d;
            if acc < 0 {
                return Some(None);
            }
            digits[i as usize] = BigUint::from(c as u128);
            ni /= n;
            inv = inv.checked_mul(n)? % d;
        }
        digits[0] = BigUint::from(acc as u128);
        Some(Some(digits))
    }

    pub fn is_add_atom(&self, x: &Rat) -> bool {
        match self.kind {
            CyclicKind::Integral => x.is_one(),
            CyclicKind::Antimatter => false,
            _ => self.log(x).is_some(),
        }
    }

    pub fn is_mult_unit(&self, x: &Rat) -> Result<bool> {
        match self.kind {
            CyclicKind::Antimatter => {
                let supp_r = self.r.support()?;
                Ok(x.support()?.is_subset(&supp_r))
            }
            _ => Ok(x.is_one()),
        }
    }

    pub(crate) fn is_mult_atom(&self, sa: &Semialgebra, x: &Rat, bounds: &Bounds) -> Result<bool> {
        if self.is_mult_unit(x)? {
            return Ok(false);
        }
        match self.kind {
            CyclicKind::Integral => Ok(primes::is_prime(&x.numer())),
            CyclicKind::Antimatter => Ok(self.strip_support(&x.numer()).is_some_and(|p| primes::is_prime(&p))),
            _ => {
                let divs = self.mult_divisors(sa, x, bounds)?;
                let nontrivial = divs.items.iter().any(|y| {
                    let y = y.rational().expect("rational divisor");
                    !y.is_one() && y != x
                });
                if nontrivial {
                    Ok(false)
                } else if divs.complete {
                    Ok(true)
                } else {
                    Err(Error::inconclusive(format!("no proper divisor of {x} found within bounds")))
                }
            }
        }
    }

    /// Numerator with the primes of `r` removed, `None` for zero.
    fn strip_support(&self, n: &BigUint) -> Option<BigUint> {
        if n.is_zero() {
            return None;
        }
        let mut n = n.clone();
        for (p, _) in primes::factorize(&self.d) {
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        Some(n)
    }

    /// The unique factorization of a non-unit up to associates, with the
    /// primes outside `supp(r)` as representatives.
    pub(crate) fn unit_absorbing_factorization(&self, x: &Rat) -> Result<Vec<Factorization>> {
        let core = self.strip_support(&x.numer()).ok_or_else(|| Error::domain("0 has no factorization"))?;
        let atoms = primes::factorize(&core).into_iter().map(|(p, e)| (Element::Rational(Rat::int(p)), e as u64));
        Ok(vec![Factorization::new(Mode::Multiplicative, atoms)])
    }

    pub fn add_factorizations(&self, x: &Rat, bounds: &Bounds) -> Result<Enumeration<Factorization>> {
        let b = *bounds;
        let (solutions, complete) = match self.kind {
            CyclicKind::Integral => {
                let f = Factorization::new(Mode::Additive, [(Element::Rational(Rat::one()), x.to_u64().expect("machine-size integer"))]);
                return Ok(Enumeration::new(vec![f], true, b));
            }
            CyclicKind::Antimatter => return Ok(Enumeration::new(Vec::new(), true, b)),
            CyclicKind::PrimeDen | CyclicKind::Large if self.greater_than_one() => {
                let top = self.top_exponent(x);
                let found = self.digit_search(x, top, None, b.max_count, usize::MAX);
                (found.solutions, !found.truncated)
            }
            CyclicKind::PrimeDen => self.expansion_closure(x, bounds)?,
            _ => {
                let found = self.digit_search(x, b.max_exp, Some(b.max_len), b.max_count, b.max_count * NODES_PER_ITEM);
                (found.solutions, false)
            }
        };
        let items = solutions.into_iter().map(|c| self.digits_to_factorization(&c)).collect();
        Ok(Enumeration::new(sorted_factorizations(items), complete, b))
    }

    fn digits_to_factorization(&self, counts: &[u64]) -> Factorization {
        Factorization::new(
            Mode::Additive,
            counts.iter().enumerate().map(|(i, &c)| (Element::Rational(self.power(i as u32)), c)),
        )
    }

    /// Breadth-first closure of the canonical digits under the move
    /// `n(r) r^i -> d(r) r^(i+1)`. Each move lengthens a factorization by
    /// `d(r) - n(r)` and never lowers an exponent, so the bounded closure is
    /// exact and complete whenever nothing was cut off.
    fn expansion_closure(&self, x: &Rat, bounds: &Bounds) -> Result<(Vec<Vec<u64>>, bool)> {
        let start: Vec<u64> = self
            .canonical_digits(x)?
            .iter()
            .map(|c| c.to_u64().ok_or_else(|| Error::Unsupported("digit exceeds 64 bits".into())))
            .collect::<Result<_>>()?;
        let n = self.n.to_u64().ok_or_else(|| Error::Unsupported("generator too large".into()))?;
        let d = self.d.to_u64().ok_or_else(|| Error::Unsupported("generator too large".into()))?;
        let max_len = bounds.max_len as u64;
        let max_exp = bounds.max_exp as usize;
        let normalize = |mut v: Vec<u64>| {
            while v.len() > 1 && v.last() == Some(&0) {
                v.pop();
            }
            v
        };
        let start = normalize(start);
        let mut complete = true;
        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        if start.iter().sum::<u64>() > max_len || start.len() - 1 > max_exp {
            return Ok((Vec::new(), false));
        }
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            let len: u64 = v.iter().sum();
            for i in 0..v.len() {
                if v[i] < n {
                    continue;
                }
                if len + d - n > max_len || i + 1 > max_exp {
                    complete = false;
                    continue;
                }
                let mut w = v.clone();
                w[i] -= n;
                if i + 1 == w.len() {
                    w.push(0);
                }
                w[i + 1] += d;
                let w = normalize(w);
                if seen.contains(&w) {
                    continue;
                }
                if seen.len() >= bounds.max_count {
                    complete = false;
                    continue;
                }
                seen.insert(w.clone());
                queue.push_back(w);
            }
        }
        Ok((seen.into_iter().collect(), complete))
    }

    /// Digit vectors `(c_0, ..., c_top)` with `sum c_i r^i = x`, searched from
    /// the top exponent down. Below exponent `i` every remainder must lie in
    /// `d^-(i-1) Z`, which fixes `c_i` modulo `d`.
    fn digit_search(&self, x: &Rat, top: u32, max_len: Option<usize>, max_count: usize, node_budget: usize) -> search::Knapsack {
        let mut out = search::Knapsack::default();
        let mut counts = vec![0u64; top as usize + 1];
        let mut nodes = 0usize;
        let powers: Vec<Rat> = (0..=top).map(|k| self.power(k)).collect();
        self.digit_rec(x.clone(), top as usize, 0, &powers, max_len, max_count, node_budget, &mut nodes, &mut counts, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn digit_rec(
        &self,
        rem: Rat,
        i: usize,
        len: usize,
        powers: &[Rat],
        max_len: Option<usize>,
        max_count: usize,
        node_budget: usize,
        nodes: &mut usize,
        counts: &mut Vec<u64>,
        out: &mut search::Knapsack,
    ) {
        if out.solutions.len() >= max_count || *nodes >= node_budget {
            out.truncated = true;
            return;
        }
        *nodes += 1;
        let room = max_len.map(|m| m.saturating_sub(len) as u64);
        if i == 0 {
            if let Some(c) = rem.is_integer().then(|| rem.to_u64()).flatten() {
                if room.is_none_or(|r| c <= r) {
                    counts[0] = c;
                    out.solutions.push(counts.clone());
                    counts[0] = 0;
                } else {
                    out.truncated = true;
                }
            }
            return;
        }
        let di = num_traits::pow(self.d.clone(), i);
        let scaled = &rem * &Rat::int(di);
        if !scaled.is_integer() {
            return;
        }
        let d = &self.d;
        let ni = num_traits::pow(self.n.clone(), i);
        let inv = (&ni % d).modinv(d).expect("gcd(n, d) = 1");
        let first = (scaled.numer() * inv) % d;
        let mut cmax = rem.checked_div(&powers[i]).expect("positive power").floor();
        if let Some(r) = room {
            if cmax > BigUint::from(r) {
                cmax = BigUint::from(r);
                out.truncated = true;
            }
        }
        let mut c = first;
        while c <= cmax {
            let cu = c.to_u64().expect("bounded by max_len or value");
            let next = rem.checked_sub(&(&powers[i] * &Rat::int(cu))).expect("c <= rem / r^i");
            counts[i] = cu;
            self.digit_rec(next, i - 1, len + cu as usize, powers, max_len, max_count, node_budget, nodes, counts, out);
            counts[i] = 0;
            if out.solutions.len() >= max_count || *nodes >= node_budget {
                out.truncated = true;
                return;
            }
            c += d;
        }
    }

    pub(crate) fn add_divisors(&self, sa: &Semialgebra, x: &Rat, bounds: &Bounds) -> Result<Enumeration<Element>> {
        let b = *bounds;
        if self.kind == CyclicKind::Antimatter {
            let items = search::rationals_between(&Rat::zero(), x, b.max_den)
                .into_iter()
                .filter(|y| self.den_within_support(y) && x.checked_sub(y).is_some_and(|z| self.den_within_support(&z)))
                .map(Element::Rational)
                .collect();
            return Ok(Enumeration::new(items, false, b));
        }
        let facts = sa.add_factorizations(&Element::Rational(x.clone()), bounds)?;
        let mut acc = BTreeSet::new();
        let mut capped = false;
        for f in &facts.items {
            let atoms: Vec<Rat> = f.atoms.iter().map(|(a, _)| a.rational().expect("rational atom").clone()).collect();
            let counts: Vec<u64> = f.atoms.iter().map(|(_, c)| *c).collect();
            capped |= search::sub_sums(&atoms, &counts, &mut acc, b.max_count);
            if capped {
                break;
            }
        }
        let items = acc.into_iter().take(b.max_count).map(Element::Rational).collect();
        Ok(Enumeration::new(items, facts.complete && !capped, b))
    }

    pub(crate) fn mult_divisors(&self, sa: &Semialgebra, x: &Rat, bounds: &Bounds) -> Result<Enumeration<Element>> {
        let b = *bounds;
        let wrap = |v: Vec<Rat>, complete: bool| {
            let mut v = v;
            v.sort();
            v.dedup();
            Enumeration::new(v.into_iter().map(Element::Rational).collect(), complete, b)
        };
        match self.kind {
            CyclicKind::Integral => Ok(wrap(super::integer_divisors(&x.numer()).into_iter().map(Rat::int).collect(), true)),
            CyclicKind::Antimatter | CyclicKind::Open => Ok(wrap(sa.scan_mult_divisors(x, bounds), false)),
            _ if self.greater_than_one() => {
                let (members, truncated) = self.members_up_to(x, b.max_count * NODES_PER_ITEM);
                let divs = members
                    .into_iter()
                    .filter(|y| !y.is_zero())
                    .filter(|y| x.checked_div(y).is_some_and(|z| matches!(self.contains(&z, bounds), Ok(true))))
                    .collect();
                Ok(wrap(divs, !truncated))
            }
            _ => self.candidate_form_divisors(x, bounds).map(|(v, c)| wrap(v, c)),
        }
    }

    /// All members in `[0, x]` for `r > 1`.
    fn members_up_to(&self, x: &Rat, node_budget: usize) -> (Vec<Rat>, bool) {
        let top = self.top_exponent(x) as usize;
        let powers: Vec<Rat> = (0..=top as u32).map(|k| self.power(k)).collect();
        let mut acc = BTreeSet::new();
        let mut nodes = 0usize;
        let mut truncated = false;
        let mut stack = vec![(top, Rat::zero())];
        while let Some((i, partial)) = stack.pop() {
            nodes += 1;
            if nodes > node_budget {
                truncated = true;
                break;
            }
            let room = x.checked_sub(&partial).expect("partial <= x");
            if i == 0 {
                let k = room.floor().to_u64().expect("bounded by x");
                acc.extend((0..=k).map(|c| &partial + &Rat::int(c)));
                continue;
            }
            let cmax = room.checked_div(&powers[i]).expect("positive").floor().to_u64().expect("bounded by x");
            for c in 0..=cmax {
                stack.push((i - 1, &partial + &(&powers[i] * &Rat::int(c))));
            }
        }
        (acc.into_iter().collect(), truncated)
    }

    /// Divisors of `x` for `d(r)` prime and `r < 1`.
    ///
    /// Write `e(y)` for minus the `d(r)`-adic valuation of `y`, so that
    /// `e(x) = e(y) + e(x/y)`. A non-integral member with canonical top
    /// exponent `k` has `e = k`, and every member `z` with top exponent `l`
    /// satisfies `z >= r^l`. Hence a divisor is either an integer `y` with
    /// `y <= x / r^max(0, e(x) + v(y))`, the cofactor `x/z` of such an
    /// integer, or a non-integer of the form `b_0 + b_1 r + ... + b_k r^k`,
    /// `1 <= k < e(x)`, `b_i < d(r)` for `i >= 1`, bounded by `x r^(k - e(x))`.
    fn candidate_form_divisors(&self, x: &Rat, bounds: &Bounds) -> Result<(Vec<Rat>, bool)> {
        let member = |z: &Rat| self.canonical_digits(z).is_ok();
        let d = self.d.to_u64().ok_or_else(|| Error::Unsupported("generator too large".into()))?;
        let ex: i64 = if x.is_integer() {
            -(crate::rational::valuation(&x.numer(), &self.d) as i64)
        } else {
            self.canonical_digits(x)?.len() as i64 - 1
        };
        let inv_r = self.r.recip().expect("r > 0");
        let bound_for = |v: i64| x * &inv_r.pow((ex + v).max(0) as u32);
        let mut int_cap = Rat::zero();
        let mut v = 0i64;
        loop {
            let cap = bound_for(v);
            if Rat::int(num_traits::pow(self.d.clone(), v as usize)) > cap {
                break;
            }
            int_cap = int_cap.max(cap);
            v += 1;
        }
        let mut out = BTreeSet::new();
        let top = int_cap.floor().to_u64().ok_or_else(|| Error::Unsupported("divisor bound exceeds 64 bits".into()))?;
        for y in 1..=top {
            let y = Rat::int(y);
            let z = x.checked_div(&y).expect("y > 0");
            if member(&z) {
                out.insert(y);
                out.insert(z);
            }
            if out.len() >= bounds.max_count {
                return Ok((out.into_iter().collect(), false));
            }
        }
        let powers: Vec<Rat> = (0..ex.max(1) as u32).map(|k| self.power(k)).collect();
        for k in 1..ex.max(1) as usize {
            let cap = x.checked_div(&powers[ex as usize - k]).expect("positive power");
            // Odometer over (b_1, ..., b_k) with b_k >= 1.
            let mut b = vec![0u64; k + 1];
            b[k] = 1;
            loop {
                let s: Rat = (1..=k).map(|i| &powers[i] * &Rat::int(b[i])).sum();
                if let Some(room) = cap.checked_sub(&s) {
                    let hi = room.floor().to_u64().unwrap_or(u64::MAX);
                    for b0 in 0..=hi {
                        let y = &s + &Rat::int(b0);
                        if member(&x.checked_div(&y).expect("y > 0")) {
                            out.insert(y);
                            if out.len() >= bounds.max_count {
                                return Ok((out.into_iter().collect(), false));
                            }
                        }
                    }
                }
                let mut i = 1;
                while i <= k {
                    b[i] += 1;
                    if b[i] < d {
                        break;
                    }
                    b[i] = if i == k { 1 } else { 0 };
                    i += 1;
                }
                if i > k {
                    break;
                }
            }
        }
        Ok((out.into_iter().collect(), true))
    }
}
