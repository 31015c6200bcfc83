use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::{MatrixAtom, UTMatrix};
use crate::enumeration::{Bounds, Enumeration};
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::rational::Rat;
use crate::semialgebra::{Element, Semialgebra};

/// An ordered sequence of matrix atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RigidFactorization {
    pub factors: Vec<MatrixAtom>,
}

impl RigidFactorization {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn product(&self, n: usize) -> UTMatrix {
        self.factors
            .iter()
            .fold(UTMatrix::identity(n), |acc, a| acc.mul(&a.to_matrix(n)).expect("same dimension"))
    }
}

impl Serialize for RigidFactorization {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RigidFactorization", 2)?;
        st.serialize_field("factors", &self.factors)?;
        st.serialize_field("length", &self.factors.len())?;
        st.end()
    }
}

impl std::fmt::Display for RigidFactorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "()");
        }
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" · "))
    }
}

/// `T_n(S)•` for a rational semialgebra `S`.
#[derive(Debug, Clone)]
pub struct TriangularMonoid {
    sa: Semialgebra,
    n: usize,
    exec: Execution,
}

type Branch = (Vec<Vec<MatrixAtom>>, bool);

struct Dfs<'a> {
    monoid: &'a TriangularMonoid,
    bounds: Bounds,
    unit_only: bool,
    /// Whether the length budget is a proven upper bound.
    proven: bool,
    memo: HashMap<(UTMatrix, usize), Branch>,
}

impl Dfs<'_> {
    fn run(&mut self, b: &UTMatrix, budget: usize) -> Result<Branch> {
        if b.is_identity() {
            return Ok((vec![Vec::new()], true));
        }
        if budget == 0 {
            return Ok((Vec::new(), self.proven));
        }
        if let Some(hit) = self.memo.get(&(b.clone(), budget)) {
            return Ok(hit.clone());
        }
        let cands = self.monoid.atom_candidates(b, &self.bounds)?;
        let mut complete = cands.complete;
        let mut out = Vec::new();
        for a in &cands.items {
            if self.unit_only && !a.is_additive() {
                continue;
            }
            let c = match self.monoid.left_divide(a, b) {
                Ok(Some(c)) => c,
                Ok(None) => continue,
                Err(e) if e.is_inconclusive() => {
                    complete = false;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let (tails, sub_complete) = self.run(&c, budget - 1)?;
            complete &= sub_complete;
            for t in tails {
                let mut f = Vec::with_capacity(t.len() + 1);
                f.push(a.clone());
                f.extend(t);
                out.push(f);
                if out.len() >= self.bounds.max_count {
                    complete = false;
                    break;
                }
            }
            if out.len() >= self.bounds.max_count {
                break;
            }
        }
        let res = (out, complete);
        self.memo.insert((b.clone(), budget), res.clone());
        Ok(res)
    }
}

impl TriangularMonoid {
    pub fn new(sa: Semialgebra, n: usize) -> Result<TriangularMonoid> {
        if n == 0 {
            return Err(Error::domain("matrix dimension must be at least 1"));
        }
        if sa.is_formal() {
            return Err(Error::Unsupported("matrix monoids need a rational semialgebra".into()));
        }
        Ok(TriangularMonoid { sa, n, exec: Execution::default() })
    }

    pub fn with_execution(mut self, exec: Execution) -> TriangularMonoid {
        self.exec = exec;
        self
    }

    pub fn semialgebra(&self) -> &Semialgebra {
        &self.sa
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn member(&self, x: &Rat) -> Result<bool> {
        self.sa.contains_within(&Element::Rational(x.clone()), &Bounds::default())
    }

    /// Checks dimension, membership of entries and regularity.
    pub fn check(&self, a: &UTMatrix) -> Result<()> {
        if a.n() != self.n {
            return Err(Error::domain(format!("expected a {0}x{0} matrix, got {1}x{1}", self.n, a.n())));
        }
        for (i, j, x) in a.upper_entries() {
            if !self.member(x)? {
                return Err(Error::domain(format!("entry ({}, {}) = {x} is not in {}", i + 1, j + 1, self.sa)));
            }
        }
        if !a.is_regular() {
            return Err(Error::domain("matrix is not regular (zero on the diagonal)"));
        }
        Ok(())
    }

    pub fn mat_mul(&self, a: &UTMatrix, b: &UTMatrix) -> Result<UTMatrix> {
        if a.n() != self.n || b.n() != self.n {
            return Err(Error::domain("dimension mismatch"));
        }
        a.mul(b)
    }

    fn require_reduced(&self) -> Result<()> {
        if self.sa.is_reduced() {
            Ok(())
        } else {
            Err(Error::domain(format!("{} is not reduced", self.sa)))
        }
    }

    /// Reads `a` as an atom if it has one of the two atom shapes.
    pub fn as_atom(&self, a: &UTMatrix) -> Result<Option<MatrixAtom>> {
        self.check(a)?;
        self.require_reduced()?;
        let off: Vec<(usize, usize, &Rat)> =
            a.upper_entries().filter(|(i, j, x)| if i == j { !x.is_one() } else { !x.is_zero() }).collect();
        let [(i, j, x)] = off.as_slice() else { return Ok(None) };
        let el = Element::Rational((*x).clone());
        let is_atom = if i == j { self.sa.is_mult_atom(&el)? } else { self.sa.is_add_atom(&el)? };
        Ok(is_atom.then(|| {
            if i == j {
                MatrixAtom::Multiplicative { i: *i, a: (*x).clone() }
            } else {
                MatrixAtom::Additive { i: *i, j: *j, a: (*x).clone() }
            }
        }))
    }

    pub fn is_matrix_atom(&self, a: &UTMatrix) -> Result<bool> {
        Ok(self.as_atom(a)?.is_some())
    }

    fn max_add_length(&self, x: &Rat) -> Result<u64> {
        if x.is_integer() && self.atoms_at_least_one() {
            return x.to_u64().ok_or_else(|| Error::inconclusive(format!("{x} is too large for a length")));
        }
        let (lens, complete) = self.sa.add_length_set(&Element::Rational(x.clone()), &Bounds::default())?;
        if !complete {
            return Err(Error::inconclusive(format!("additive length set of {x} is not known to be complete")));
        }
        Ok(lens.into_iter().max().unwrap_or(0))
    }

    /// Integer `x` then has maximal additive length `x`: every atom is at
    /// least 1 and 1 is an atom.
    fn atoms_at_least_one(&self) -> bool {
        match &self.sa {
            Semialgebra::Nat => true,
            Semialgebra::Cyclic(c) => *c.generator() > Rat::one(),
            Semialgebra::Conducted(r) => *r > Rat::one(),
            _ => false,
        }
    }

    /// Sum of the maximal additive lengths of the strictly upper entries.
    pub fn sigma(&self, a: &UTMatrix) -> Result<u64> {
        self.check(a)?;
        a.upper_entries().filter(|(i, j, _)| i < j).map(|(_, _, x)| self.max_add_length(x)).sum()
    }

    /// `sigma(a)` plus the maximal multiplicative length of `det a`: an upper
    /// bound on the length of every rigid factorization.
    pub fn weight(&self, a: &UTMatrix) -> Result<u64> {
        self.check(a)?;
        let det = Element::Rational(a.det());
        let (lens, complete) = self.sa.mult_length_set(&det, &Bounds::default())?;
        if !complete {
            return Err(Error::inconclusive(format!("multiplicative length set of {det} is not known to be complete")));
        }
        Ok(self.sigma(a)? + lens.into_iter().max().unwrap_or(0))
    }

    /// The unique `C` with `B = A C`, when it lies in `T_n(S)•`.
    pub fn left_divide(&self, atom: &MatrixAtom, b: &UTMatrix) -> Result<Option<UTMatrix>> {
        let n = self.n;
        let mut c = b.clone();
        match atom {
            MatrixAtom::Additive { i, j, a } => {
                for col in *j..n {
                    let sub = a * b.get(*j, col);
                    match b.get(*i, col).checked_sub(&sub) {
                        Some(x) => c.set(*i, col, x),
                        None => return Ok(None),
                    }
                }
                for col in *j..n {
                    if !self.member(c.get(*i, col))? {
                        return Ok(None);
                    }
                }
            }
            MatrixAtom::Multiplicative { i, a } => {
                for col in *i..n {
                    let x = b.get(*i, col).checked_div(a).ok_or_else(|| Error::domain("zero atom"))?;
                    if !self.member(&x)? {
                        return Ok(None);
                    }
                    c.set(*i, col, x);
                }
            }
        }
        Ok(Some(c))
    }

    /// Values `a` with `x - a * diag` an additive divisor of `x`. Cyclic
    /// semialgebras with `r < 1` have infinitely many such atoms in general;
    /// there the powers `r^e` with `e <= max_exp` are tried instead.
    fn additive_candidate_values(&self, x: &Rat, diag: &Rat, bounds: &Bounds) -> Result<(Vec<Rat>, bool)> {
        let el = Element::Rational(x.clone());
        if let Semialgebra::Cyclic(c) = &self.sa {
            if *c.generator() < Rat::one() && !self.sa.add_factorizations(&el, bounds)?.complete {
                let mut out = Vec::new();
                for e in 0..=bounds.max_exp {
                    let a = c.power(e);
                    let Some(rest) = x.checked_sub(&(&a * diag)) else { continue };
                    match self.member(&rest) {
                        Ok(true) => out.push(a),
                        Ok(false) => {}
                        Err(e) if e.is_inconclusive() => {}
                        Err(e) => return Err(e),
                    }
                }
                return Ok((out, false));
            }
        }
        let adds = self.sa.add_divisors(&el, bounds)?;
        let mut out: Vec<Rat> = adds
            .items
            .iter()
            .filter(|d| !d.is_zero())
            .filter_map(|d| d.rational().ok()?.checked_div(diag))
            .filter(|a| matches!(self.member(a), Ok(true)))
            .collect();
        out.sort();
        out.dedup();
        Ok((out, adds.complete))
    }

    /// A finite superset of the atoms that left-divide `b`.
    pub fn atom_candidates(&self, b: &UTMatrix, bounds: &Bounds) -> Result<Enumeration<MatrixAtom>> {
        let mut complete = true;
        let mut out = BTreeSet::new();
        let n = self.n;
        let mut note = |r: Result<bool>| -> Result<bool> {
            match r {
                Ok(v) => Ok(v),
                Err(e) if e.is_inconclusive() => {
                    complete = false;
                    Ok(false)
                }
                Err(e) => Err(e),
            }
        };
        for i in 0..n {
            for j in i + 1..n {
                let x = b.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let (values, exact) = self.additive_candidate_values(x, b.get(j, j), bounds)?;
                if !exact {
                    note(Err(Error::inconclusive("")))?;
                }
                for a in values {
                    if note(self.sa.is_add_atom(&Element::Rational(a.clone())))? {
                        out.insert(MatrixAtom::Additive { i, j, a });
                    }
                }
            }
        }
        let det = Element::Rational(b.det());
        if !b.det().is_one() {
            let muls = self.sa.mult_divisors(&det, bounds)?;
            if !muls.complete {
                note(Err(Error::inconclusive("")))?;
            }
            for a in muls.items {
                if note(self.sa.is_mult_atom_within(&a, bounds))? {
                    for i in 0..n {
                        out.insert(MatrixAtom::Multiplicative { i, a: a.rational()?.clone() });
                    }
                }
            }
        }
        Ok(Enumeration::new(out.into_iter().collect(), complete, *bounds))
    }

    /// All rigid factorizations of `b`, in lexicographic order of their atom
    /// sequences. Lengths are capped by `weight(b)` when it is computable and
    /// by `bounds.max_len` otherwise.
    pub fn rigid_factorizations(
        &self,
        b: &UTMatrix,
        bounds: &Bounds,
        unit_triangular_only: bool,
    ) -> Result<Enumeration<RigidFactorization>> {
        self.check(b)?;
        self.require_reduced()?;
        let (budget, proven) = match self.weight(b) {
            Ok(w) => (w as usize, true),
            Err(e) if e.is_inconclusive() => (bounds.max_len, false),
            Err(e) => return Err(e),
        };
        let wrap = |facts: Vec<Vec<MatrixAtom>>, complete: bool| {
            let mut items: Vec<RigidFactorization> = facts.into_iter().map(|factors| RigidFactorization { factors }).collect();
            items.sort();
            items.dedup();
            let complete = complete && items.len() < bounds.max_count;
            items.truncate(bounds.max_count);
            Enumeration::new(items, complete, *bounds)
        };
        if b.is_identity() {
            return Ok(wrap(vec![Vec::new()], true));
        }
        if budget == 0 {
            return Ok(wrap(Vec::new(), proven));
        }
        let cands = self.atom_candidates(b, bounds)?;
        let branches: Vec<Result<Branch>> = self.exec.map(&cands.items, |a| {
            if unit_triangular_only && !a.is_additive() {
                return Ok((Vec::new(), true));
            }
            let c = match self.left_divide(a, b) {
                Ok(Some(c)) => c,
                Ok(None) => return Ok((Vec::new(), true)),
                Err(e) if e.is_inconclusive() => return Ok((Vec::new(), false)),
                Err(e) => return Err(e),
            };
            let mut dfs = Dfs { monoid: self, bounds: *bounds, unit_only: unit_triangular_only, proven, memo: HashMap::new() };
            let (tails, complete) = dfs.run(&c, budget - 1)?;
            let facts = tails
                .into_iter()
                .map(|t| std::iter::once(a.clone()).chain(t).collect())
                .collect();
            Ok((facts, complete))
        });
        let mut complete = cands.complete;
        let mut all = Vec::new();
        for br in branches {
            let (facts, c) = br?;
            complete &= c;
            all.extend(facts);
        }
        Ok(wrap(all, complete))
    }

    pub fn rigid_length_set(&self, b: &UTMatrix, bounds: &Bounds) -> Result<(BTreeSet<usize>, bool)> {
        let e = self.rigid_factorizations(b, bounds, false)?;
        Ok((e.items.iter().map(RigidFactorization::len).collect(), e.complete))
    }

    /// Whether `atom` occurs in some rigid factorization of `b`.
    pub fn divides_up_to_permutation(&self, atom: &MatrixAtom, b: &UTMatrix, bounds: &Bounds) -> Result<bool> {
        self.check(b)?;
        self.require_reduced()?;
        let (budget, proven) = match self.weight(b) {
            Ok(w) => (w as usize, true),
            Err(e) if e.is_inconclusive() => (bounds.max_len, false),
            Err(e) => return Err(e),
        };
        let mut memo = HashMap::new();
        match self.occurs(atom, b, budget, true, proven, bounds, &mut memo)? {
            Some(v) => Ok(v),
            None => Err(Error::inconclusive(format!("could not decide whether {atom} occurs in a factorization of {b}"))),
        }
    }

    /// `Some(true)` if some factorization of `b` within `budget` factors
    /// exists (containing `atom` when `need`), `Some(false)` if none does and
    /// `None` if the search was cut short.
    #[allow(clippy::too_many_arguments)]
    fn occurs(
        &self,
        atom: &MatrixAtom,
        b: &UTMatrix,
        budget: usize,
        need: bool,
        proven: bool,
        bounds: &Bounds,
        memo: &mut HashMap<(UTMatrix, usize, bool), Option<bool>>,
    ) -> Result<Option<bool>> {
        if b.is_identity() {
            return Ok(Some(!need));
        }
        if budget == 0 {
            return Ok(proven.then_some(false));
        }
        let key = (b.clone(), budget, need);
        if let Some(hit) = memo.get(&key) {
            return Ok(*hit);
        }
        let cands = self.atom_candidates(b, bounds)?;
        let mut known = cands.complete;
        let mut found = false;
        for a in &cands.items {
            let c = match self.left_divide(a, b) {
                Ok(Some(c)) => c,
                Ok(None) => continue,
                Err(e) if e.is_inconclusive() => {
                    known = false;
                    continue;
                }
                Err(e) => return Err(e),
            };
            match self.occurs(atom, &c, budget - 1, need && a != atom, proven, bounds, memo)? {
                Some(true) => {
                    found = true;
                    break;
                }
                Some(false) => {}
                None => known = false,
            }
        }
        let res = if found { Some(true) } else { known.then_some(false) };
        memo.insert(key, res);
        Ok(res)
    }

    /// `I + s E_ij` with 1-based `i < j`.
    pub fn embed_additive(&self, s: &Rat, i: usize, j: usize) -> Result<UTMatrix> {
        if !(1 <= i && i < j && j <= self.n) {
            return Err(Error::domain(format!("need 1 <= i < j <= {}, got ({i}, {j})", self.n)));
        }
        if !self.member(s)? {
            return Err(Error::domain(format!("{s} is not in {}", self.sa)));
        }
        let mut m = UTMatrix::identity(self.n);
        m.set(i - 1, j - 1, s.clone());
        Ok(m)
    }

    /// `I + (s - 1) E_ii` with 1-based `i`.
    pub fn embed_multiplicative(&self, s: &Rat, i: usize) -> Result<UTMatrix> {
        if !(1 <= i && i <= self.n) {
            return Err(Error::domain(format!("need 1 <= i <= {}, got {i}", self.n)));
        }
        if s.is_zero() || !self.member(s)? {
            return Err(Error::domain(format!("{s} is not a nonzero element of {}", self.sa)));
        }
        let mut m = UTMatrix::identity(self.n);
        m.set(i - 1, i - 1, s.clone());
        Ok(m)
    }
}
