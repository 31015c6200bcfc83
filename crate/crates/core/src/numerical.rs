//! Membership in submonoids of (ℕ₀, +) given by finitely many generators.
//!
//! Membership is decided through the Apéry set with respect to the smallest
//! generator, computed as shortest paths on residues.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// Largest smallest-generator for which the residue graph is built.
pub const MAX_RESIDUES: u64 = 1 << 22;

#[derive(Debug, Clone)]
pub struct AffineSemigroup {
    gcd: u64,
    modulus: u64,
    /// `apery[k]` is the least element congruent to `k` mod `modulus`, if any.
    apery: Vec<Option<u128>>,
}

impl AffineSemigroup {
    /// `None` when a generator does not fit in 64 bits or the smallest one
    /// exceeds [`MAX_RESIDUES`].
    pub fn new(generators: &[BigUint]) -> Option<AffineSemigroup> {
        let mut gens: Vec<u64> = Vec::with_capacity(generators.len());
        for g in generators {
            let g = g.to_u64()?;
            if g > 0 {
                gens.push(g);
            }
        }
        if gens.is_empty() {
            return Some(AffineSemigroup { gcd: 0, modulus: 1, apery: vec![Some(0)] });
        }
        let gcd = gens.iter().fold(0u64, |a, &b| a.gcd(&b));
        let mut gens: Vec<u64> = gens.iter().map(|g| g / gcd).collect();
        gens.sort_unstable();
        gens.dedup();
        let m = gens[0];
        if m > MAX_RESIDUES {
            return None;
        }
        let mut dist: Vec<Option<u128>> = vec![None; m as usize];
        dist[0] = Some(0);
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u128, 0u64)));
        while let Some(Reverse((w, k))) = heap.pop() {
            if dist[k as usize] != Some(w) {
                continue;
            }
            for &g in &gens[1..] {
                let nw = w + g as u128;
                let nk = ((k as u128 + g as u128) % m as u128) as u64;
                if dist[nk as usize].is_none_or(|old| nw < old) {
                    dist[nk as usize] = Some(nw);
                    heap.push(Reverse((nw, nk)));
                }
            }
        }
        Some(AffineSemigroup { gcd, modulus: m, apery: dist })
    }

    pub fn contains(&self, n: &BigUint) -> bool {
        if n.is_zero() {
            return true;
        }
        if self.gcd == 0 {
            return false;
        }
        let (q, r) = n.div_rem(&BigUint::from(self.gcd));
        if !r.is_zero() {
            return false;
        }
        let k = (&q % self.modulus).to_u64().expect("residue fits");
        match self.apery[k as usize] {
            Some(w) => q >= BigUint::from(w),
            None => false,
        }
    }

    /// Largest integer multiple of the gcd not in the monoid; `None` when the
    /// monoid is trivial or has empty complement.
    pub fn frobenius(&self) -> Option<u128> {
        if self.gcd == 0 || self.modulus == 1 {
            return None;
        }
        let max = self.apery.iter().map(|w| w.expect("gcd-normalized generators reach every residue")).max()?;
        Some((max - self.modulus as u128) * self.gcd as u128)
    }
}
