//! Bounded search kernels shared by the semialgebra engines.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::rational::Rat;

/// Outcome of a knapsack run: multiplicity vectors indexed like the atom list.
#[derive(Debug, Clone, Default)]
pub struct Knapsack {
    pub solutions: Vec<Vec<u64>>,
    /// Set when `max_len` or `max_count` cut the search short.
    pub truncated: bool,
}

/// All multisets of `atoms` (ascending, distinct, positive) summing to `target`.
pub fn knapsack(atoms: &[Rat], target: &Rat, max_len: Option<usize>, max_count: usize) -> Knapsack {
    let mut out = Knapsack::default();
    let mut counts = vec![0u64; atoms.len()];
    if atoms.is_empty() {
        if target.is_zero() {
            out.solutions.push(counts);
        }
        return out;
    }
    knapsack_rec(atoms, atoms.len(), target.clone(), 0, max_len, max_count, &mut counts, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn knapsack_rec(
    atoms: &[Rat],
    upto: usize,
    rem: Rat,
    len: usize,
    max_len: Option<usize>,
    max_count: usize,
    counts: &mut Vec<u64>,
    out: &mut Knapsack,
) {
    if out.solutions.len() >= max_count {
        out.truncated = true;
        return;
    }
    if rem.is_zero() {
        out.solutions.push(counts.clone());
        return;
    }
    let upto = upto.min(atoms.partition_point(|a| *a <= rem));
    if upto == 0 {
        return;
    }
    if max_len.is_some_and(|m| len >= m) {
        out.truncated = true;
        return;
    }
    let i = upto - 1;
    let a = &atoms[i];
    let mut max_c = rem.checked_div(a).expect("positive atom").floor().to_u64().unwrap_or(u64::MAX);
    if let Some(m) = max_len {
        let room = (m - len) as u64;
        if max_c > room {
            max_c = room;
            out.truncated = true;
        }
    }
    for c in (0..=max_c).rev() {
        let used = a * &Rat::int(c);
        let next = rem.checked_sub(&used).expect("c <= rem/a");
        counts[i] = c;
        knapsack_rec(atoms, i, next, len + c as usize, max_len, max_count, counts, out);
        counts[i] = 0;
        if out.truncated && out.solutions.len() >= max_count {
            return;
        }
    }
}

/// Every rational `p/q` in lowest terms with `q <= max_den` and `lo <= p/q <= hi`,
/// ordered by value.
pub fn rationals_between(lo: &Rat, hi: &Rat, max_den: u64) -> Vec<Rat> {
    let mut set = BTreeSet::new();
    if lo > hi {
        return Vec::new();
    }
    for q in 1..=max_den.max(1) {
        let qb = BigUint::from(q);
        let start = (lo * &Rat::int(q)).ceil();
        let end = (hi * &Rat::int(q)).floor();
        let mut p = start;
        while p <= end {
            if p.gcd(&qb).is_one() || (p.is_zero() && q == 1) {
                set.insert(Rat::new(p.clone(), qb.clone()).expect("q >= 1"));
            }
            p += 1u32;
        }
    }
    set.into_iter().collect()
}

/// Sums of all sub-multisets of `atoms` weighted by `counts`, up to `max_count`
/// distinct values. Returns the values and whether the cap was hit.
pub fn sub_sums(atoms: &[Rat], counts: &[u64], acc: &mut BTreeSet<Rat>, max_count: usize) -> bool {
    let mut partial: Vec<Rat> = vec![Rat::zero()];
    for (a, &c) in atoms.iter().zip(counts) {
        if c == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(partial.len() * (c as usize + 1));
        for s in &partial {
            for k in 0..=c {
                next.push(s + &(a * &Rat::int(k)));
            }
        }
        next.sort();
        next.dedup();
        partial = next;
        if partial.len() > max_count {
            return true;
        }
    }
    acc.extend(partial);
    acc.len() > max_count
}
