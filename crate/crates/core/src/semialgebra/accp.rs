use std::collections::HashMap;

use serde::Serialize;

use super::{Element, Mode, Semialgebra};
use crate::enumeration::Bounds;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AccpOutcome {
    Chain,
    NoneFound,
}

/// Result of a search for an ascending chain of principal ideals.
///
/// `chain[k + 1]` properly divides `chain[k]` with cofactor `cofactors[k]`.
/// `NoneFound` is never a proof that the ACCP holds.
#[derive(Debug, Clone, Serialize)]
pub struct AccpReport {
    pub outcome: AccpOutcome,
    pub mode: Mode,
    pub depth: usize,
    pub chain: Vec<Element>,
    pub cofactors: Vec<Element>,
    /// Longest chain seen, reported when the requested depth was not reached.
    pub longest: Vec<Element>,
    pub nodes: usize,
}

struct Probe<'a> {
    sa: &'a Semialgebra,
    mode: Mode,
    bounds: Bounds,
    nodes: usize,
    budget: usize,
    failed: HashMap<Element, usize>,
    longest: Vec<Element>,
}

impl Probe<'_> {
    fn identity(&self, x: &Element) -> bool {
        match self.mode {
            Mode::Additive => x.is_zero(),
            Mode::Multiplicative => self.sa.is_mult_unit(x).unwrap_or(false),
        }
    }

    /// An atom has no proper divisor besides the identity, so it ends a chain.
    fn is_atom(&self, y: &Element) -> bool {
        let r = match self.mode {
            Mode::Additive => self.sa.is_add_atom(y),
            Mode::Multiplicative => self.sa.is_mult_atom_within(y, &self.bounds),
        };
        matches!(r, Ok(true))
    }

    /// Proper divisors of `x` other than the identity: non-atoms first, then
    /// smallest height (denominator ascending), then value descending.
    fn candidates(&self, x: &Element) -> Vec<(Element, Element)> {
        let divs = match self.mode {
            Mode::Additive => self.sa.add_divisors(x, &self.bounds),
            Mode::Multiplicative => self.sa.mult_divisors(x, &self.bounds),
        };
        let Ok(divs) = divs else { return Vec::new() };
        let out: Vec<(Element, Element)> = divs
            .items
            .into_iter()
            .filter(|y| y != x && !self.identity(y))
            .filter_map(|y| {
                let cof = self.cofactor(x, &y)?;
                (!self.identity(&cof)).then_some((y, cof))
            })
            .collect();
        let mut keyed: Vec<(bool, (Element, Element))> = out.into_iter().map(|c| (self.is_atom(&c.0), c)).collect();
        keyed.sort_by(|(ta, (a, _)), (tb, (b, _))| ta.cmp(tb).then_with(|| height(a).cmp(&height(b))).then_with(|| b.cmp(a)));
        keyed.into_iter().map(|(_, c)| c).collect()
    }

    fn cofactor(&self, x: &Element, y: &Element) -> Option<Element> {
        match (self.mode, x, y) {
            (Mode::Additive, Element::Rational(a), Element::Rational(b)) => a.checked_sub(b).map(Element::Rational),
            (Mode::Multiplicative, Element::Rational(a), Element::Rational(b)) => a.checked_div(b).map(Element::Rational),
            (Mode::Additive, Element::ExpSum(a), Element::ExpSum(b)) => {
                let mut rest = a.terms().clone();
                for (q, c) in b.terms() {
                    let e = rest.get_mut(q)?;
                    if *e < *c {
                        return None;
                    }
                    *e -= c;
                }
                rest.retain(|_, c| *c > num_bigint::BigUint::ZERO);
                super::ExpSum::new(rest).ok().map(Element::ExpSum)
            }
            (Mode::Multiplicative, Element::ExpSum(a), Element::ExpSum(b)) => a.divide(b).map(Element::ExpSum),
            _ => None,
        }
    }

    fn search(&mut self, chain: &mut Vec<Element>, cofs: &mut Vec<Element>, need: usize) -> bool {
        if chain.len() > self.longest.len() {
            self.longest = chain.clone();
        }
        if need == 0 {
            return true;
        }
        let x = chain.last().expect("nonempty chain").clone();
        if self.failed.get(&x).is_some_and(|&n| n <= need) {
            return false;
        }
        for (y, cof) in self.candidates(&x) {
            if self.nodes >= self.budget {
                return false;
            }
            self.nodes += 1;
            chain.push(y);
            cofs.push(cof);
            if self.search(chain, cofs, need - 1) {
                return true;
            }
            chain.pop();
            cofs.pop();
        }
        if self.nodes < self.budget {
            let e = self.failed.entry(x).or_insert(need);
            *e = (*e).min(need);
        }
        false
    }
}

fn height(x: &Element) -> (num_bigint::BigUint, usize) {
    match x {
        Element::Rational(q) => (q.denom(), 0),
        Element::ExpSum(e) => {
            let den = e.terms().keys().map(|q| q.denom()).max().unwrap_or_default();
            (den, e.terms().len())
        }
    }
}

/// Backtracking search for `start = x_0, x_1, ..., x_depth` with each `x_{k+1}`
/// a proper divisor of `x_k` by a non-unit cofactor. The identity is never
/// part of a chain. At most `bounds.max_count` candidates are tried.
pub fn accp_probe(sa: &Semialgebra, mode: Mode, start: &Element, bounds: &Bounds) -> Result<AccpReport> {
    if !sa.contains(start)? {
        return Err(crate::error::Error::domain(format!("{start} is not in {sa}")));
    }
    let depth = bounds.depth;
    let mut probe =
        Probe { sa, mode, bounds: *bounds, nodes: 0, budget: bounds.max_count, failed: HashMap::new(), longest: Vec::new() };
    let mut chain = vec![start.clone()];
    let mut cofs = Vec::new();
    let found = !probe.identity(start) && probe.search(&mut chain, &mut cofs, depth);
    let longest = std::mem::take(&mut probe.longest);
    Ok(if found {
        AccpReport { outcome: AccpOutcome::Chain, mode, depth, chain, cofactors: cofs, longest: Vec::new(), nodes: probe.nodes }
    } else {
        AccpReport {
            outcome: AccpOutcome::NoneFound,
            mode,
            depth,
            chain: Vec::new(),
            cofactors: Vec::new(),
            longest,
            nodes: probe.nodes,
        }
    })
}
