//! Brute-force oracles and property suites that cross-check the engines.
//!
//! Every check yields a [`CheckReport`]. `Fail` means a concrete violation
//! was found; `Inconclusive` means some oracle could not decide and is never
//! folded into `Pass`.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::enumeration::Bounds;
use crate::error::{Error, Result};
use crate::matrix::{TriangularMonoid, UTMatrix};
use crate::par::Execution;
use crate::rational::Rat;
use crate::semialgebra::{accp_probe, AccpOutcome, Element, Mode, Semialgebra};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check_name: String,
    pub instances_tested: usize,
    pub violations: Vec<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    fn new(name: impl Into<String>) -> CheckReport {
        CheckReport {
            check_name: name.into(),
            instances_tested: 0,
            violations: Vec::new(),
            status: Status::Pass,
            seed: None,
            notes: Vec::new(),
        }
    }

    fn violation(&mut self, v: impl Into<String>) {
        self.violations.push(v.into());
        self.status = Status::Fail;
    }

    fn inconclusive(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
        if self.status == Status::Pass {
            self.status = Status::Inconclusive;
        }
    }

    fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Single-line JSON.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn small_matrix(m: &UTMatrix) -> Result<Vec<Vec<u64>>> {
    m.rows()
        .into_iter()
        .map(|row| {
            row.iter()
                .map(|x| x.to_u64().ok_or_else(|| Error::domain(format!("{x} is not a small natural number"))))
                .collect()
        })
        .collect()
}

/// Solves `B C = A` for upper triangular `C` over ℕ₀.
fn left_quotient(b: &[Vec<u64>], a: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
    let n = a.len();
    let mut c = vec![vec![0u64; n]; n];
    for j in 0..n {
        for i in (0..=j).rev() {
            let mut rest = a[i][j];
            for k in i + 1..=j {
                rest = rest.checked_sub(b[i][k] * c[k][j])?;
            }
            if !rest.is_multiple_of(b[i][i]) {
                return None;
            }
            c[i][j] = rest / b[i][i];
        }
    }
    Some(c)
}

fn is_identity(m: &[Vec<u64>]) -> bool {
    m.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == u64::from(i == j)))
}

/// All regular upper triangular `n × n` matrices over ℕ₀ with entries `<= bound`.
fn nat_matrices(n: usize, bound: u64) -> Vec<Vec<Vec<u64>>> {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let mut out = vec![vec![vec![0u64; n]; n]];
    for &(i, j) in &cells {
        let lo = u64::from(i == j);
        out = out
            .into_iter()
            .flat_map(|m| {
                (lo..=bound).map(move |v| {
                    let mut m = m.clone();
                    m[i][j] = v;
                    m
                })
            })
            .collect();
    }
    out
}

fn to_utmatrix(m: &[Vec<u64>]) -> UTMatrix {
    UTMatrix::from_rows(m.iter().map(|row| row.iter().map(|&x| Rat::int(x)).collect()).collect())
        .expect("upper triangular by construction")
}

/// Whether a regular matrix over ℕ₀ has no factorization `A = B C` with
/// `B, C ≠ I`, by exhaustive search over `B` with entries `<= entry_bound`.
/// Every left divider of `A` has entries bounded by those of `A`, so the
/// search is exact once `entry_bound` reaches the largest entry.
pub fn brute_force_matrix_atom(a: &UTMatrix, entry_bound: u64) -> Result<bool> {
    let a = small_matrix(a)?;
    if a.iter().enumerate().any(|(i, row)| row[i] == 0) {
        return Err(Error::domain("matrix is not regular"));
    }
    if is_identity(&a) {
        return Ok(false);
    }
    let found = nat_matrices(a.len(), entry_bound)
        .into_iter()
        .filter(|b| !is_identity(b))
        .any(|b| left_quotient(&b, &a).is_some_and(|c| !is_identity(&c)));
    Ok(!found)
}

pub fn check_atom_characterization(n: usize, entry_bound: u64) -> CheckReport {
    let mut rep = CheckReport::new(format!("atom_characterization(n={n}, entries<={entry_bound})"));
    let t = TriangularMonoid::new(Semialgebra::Nat, n).expect("n >= 1");
    for m in nat_matrices(n, entry_bound) {
        if is_identity(&m) {
            continue;
        }
        rep.instances_tested += 1;
        let a = to_utmatrix(&m);
        let fast = t.is_matrix_atom(&a);
        let slow = brute_force_matrix_atom(&a, entry_bound);
        match (fast, slow) {
            (Ok(f), Ok(s)) if f == s => {}
            (Ok(f), Ok(s)) => rep.violation(format!("{a}: predicate {f}, exhaustive {s}")),
            (f, s) => rep.inconclusive(format!("{a}: {f:?} / {s:?}")),
        }
    }
    rep
}

/// `is_mult_atom` over ℕ₀ against trial division.
pub fn check_nat_mult_atoms(bound: u64) -> CheckReport {
    let mut rep = CheckReport::new(format!("nat_mult_atoms(<= {bound})"));
    for k in 1..=bound {
        rep.instances_tested += 1;
        let prime = k >= 2 && (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0);
        match Semialgebra::Nat.is_mult_atom(&Element::Rational(Rat::int(k))) {
            Ok(v) if v == prime => {}
            Ok(v) => rep.violation(format!("{k}: predicate {v}, trial division {prime}")),
            Err(e) => rep.inconclusive(format!("{k}: {e}")),
        }
    }
    rep
}

/// Members of `S_r` (`r > 1`) up to `cap`, as sums of powers `r^k <= cap`.
fn cyclic_members_up_to(r: &Rat, cap: &Rat) -> Vec<Rat> {
    let mut powers = vec![Rat::one()];
    while let Some(next) = powers.last().map(|p| p * r).filter(|p| p <= cap) {
        powers.push(next);
    }
    let mut members = BTreeSet::from([Rat::zero()]);
    for p in &powers {
        let mut grown = members.clone();
        let mut frontier: Vec<Rat> = members.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            let y = &x + p;
            if y <= *cap && grown.insert(y.clone()) {
                frontier.push(y);
            }
        }
        members = grown;
    }
    members.into_iter().collect()
}

/// `is_add_atom` on `S_r` with `r > 1` against the definition applied to
/// all members below `cap`.
pub fn check_cyclic_add_atoms(r: &Rat, cap: &Rat) -> CheckReport {
    let mut rep = CheckReport::new(format!("cyclic_add_atoms(r={r}, <= {cap})"));
    let sa = match Semialgebra::cyclic(r.clone()) {
        Ok(sa) => sa,
        Err(e) => {
            rep.inconclusive(e.to_string());
            return rep;
        }
    };
    let members = cyclic_members_up_to(r, cap);
    let set: BTreeSet<&Rat> = members.iter().collect();
    for x in members.iter().filter(|x| !x.is_zero()) {
        rep.instances_tested += 1;
        let splits = members
            .iter()
            .filter(|y| !y.is_zero() && *y < x)
            .any(|y| x.checked_sub(y).is_some_and(|z| set.contains(&z)));
        match sa.is_add_atom(&Element::Rational(x.clone())) {
            Ok(v) if v == !splits => {}
            Ok(v) => rep.violation(format!("{x}: predicate {v}, definition {}", !splits)),
            Err(e) => rep.inconclusive(format!("{x}: {e}")),
        }
    }
    rep
}

fn sigma_nat(t: &TriangularMonoid, a: &UTMatrix) -> Result<u64> {
    t.sigma(a)
}

fn random_nat_matrix(rng: &mut ChaCha8Rng, n: usize, bound: u64) -> UTMatrix {
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Less => Rat::zero(),
                    std::cmp::Ordering::Equal => Rat::int(rng.gen_range(1..=bound)),
                    std::cmp::Ordering::Greater => Rat::int(rng.gen_range(0..=bound)),
                })
                .collect()
        })
        .collect();
    UTMatrix::from_rows(rows).expect("upper triangular by construction")
}

/// `Σ(AB) >= Σ(A) + Σ(B)` on seeded random 2×2 and 3×3 pairs over ℕ₀.
pub fn check_sigma_superadditivity(samples: usize, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new(format!("sigma_superadditivity(samples={samples})"));
    rep.seed = Some(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monoids = [TriangularMonoid::new(Semialgebra::Nat, 2).unwrap(), TriangularMonoid::new(Semialgebra::Nat, 3).unwrap()];
    for k in 0..samples {
        let t = &monoids[k % 2];
        let a = random_nat_matrix(&mut rng, t.n(), 4);
        let b = random_nat_matrix(&mut rng, t.n(), 4);
        rep.instances_tested += 1;
        let ab = a.mul(&b).expect("same dimension");
        match (sigma_nat(t, &ab), sigma_nat(t, &a), sigma_nat(t, &b)) {
            (Ok(s), Ok(sa), Ok(sb)) if s >= sa + sb => {}
            (Ok(s), Ok(sa), Ok(sb)) => rep.violation(format!("A={a}, B={b}: {s} < {sa} + {sb}")),
            _ => rep.inconclusive(format!("A={a}, B={b}: sigma not computable")),
        }
    }
    rep
}

/// Finiteness of divisors, dividing atoms and factorizations agree for each
/// sampled element of `(S, +)`. The atoms dividing `x` are read off the
/// divisors and, separately, off the factorizations; the two must match.
pub fn check_divisor_atom_factorization_equivalence(sa: &Semialgebra, samples: &[Rat], bounds: &Bounds) -> CheckReport {
    let mut rep = CheckReport::new(format!("divisor_atom_factorization_equivalence({sa})"));
    for x in samples {
        rep.instances_tested += 1;
        let el = Element::Rational(x.clone());
        let divs = sa.add_divisors(&el, bounds);
        let facts = sa.add_factorizations(&el, bounds);
        let (divs, facts) = match (divs, facts) {
            (Ok(d), Ok(f)) => (d, f),
            (d, f) => {
                rep.inconclusive(format!("{x}: {:?} / {:?}", d.err(), f.err()));
                continue;
            }
        };
        let mut atoms_from_divs = BTreeSet::new();
        let mut atom_oracle_ok = true;
        for d in &divs.items {
            match sa.is_add_atom(d) {
                Ok(true) => {
                    atoms_from_divs.insert(d.clone());
                }
                Ok(false) => {}
                Err(_) => atom_oracle_ok = false,
            }
        }
        let atoms_from_facts: BTreeSet<Element> = facts.items.iter().flat_map(|f| f.expanded().cloned()).collect();
        let verdicts = [divs.complete && atom_oracle_ok, divs.complete && atom_oracle_ok, facts.complete];
        if verdicts.iter().all(|&v| v) {
            if atoms_from_divs != atoms_from_facts {
                rep.violation(format!(
                    "{x}: atoms dividing via divisors {atoms_from_divs:?} differ from atoms in factorizations {atoms_from_facts:?}"
                ));
            }
        } else if verdicts.iter().any(|&v| v) && facts.complete != divs.complete {
            rep.inconclusive(format!("{x}: divisor set complete = {}, factorization set complete = {}", divs.complete, facts.complete));
        } else {
            rep.inconclusive(format!("{x}: finiteness not decided within bounds"));
        }
    }
    rep
}

/// Whether `S` is known to satisfy the ACCP (additively).
fn accp_expected(sa: &Semialgebra) -> Option<bool> {
    match sa {
        Semialgebra::Nat => Some(true),
        Semialgebra::Cyclic(c) if c.is_reduced() && c.has_additive_atoms() => Some(*c.generator() > Rat::one() || c.is_integral()),
        Semialgebra::Conducted(r) if *r > Rat::one() => Some(true),
        _ => None,
    }
}

/// On each sampled matrix: factorizations multiply back, lengths respect the
/// weight bound, enumeration is complete and nonempty when the entry oracles
/// are, and ACCP probes on the entries behave as the semialgebra predicts.
pub fn check_transfer_diagram(sa: &Semialgebra, samples: &[UTMatrix], bounds: &Bounds) -> CheckReport {
    let mut rep = CheckReport::new(format!("transfer_diagram({sa})"));
    let Some(n) = samples.first().map(UTMatrix::n) else { return rep };
    let t = match TriangularMonoid::new(sa.clone(), n) {
        Ok(t) => t,
        Err(e) => {
            rep.inconclusive(e.to_string());
            return rep;
        }
    };
    let mut entries = BTreeSet::new();
    for b in samples {
        rep.instances_tested += 1;
        let e = match t.rigid_factorizations(b, bounds, false) {
            Ok(e) => e,
            Err(err) => {
                rep.inconclusive(format!("{b}: {err}"));
                continue;
            }
        };
        for f in &e.items {
            if f.product(n) != *b {
                rep.violation(format!("{b}: factorization {f} has a different product"));
            }
        }
        match t.weight(b) {
            Ok(w) => {
                if let Some(f) = e.items.iter().find(|f| f.len() as u64 > w) {
                    rep.violation(format!("{b}: factorization {f} longer than weight {w}"));
                }
                let oracles_complete = b.upper_entries().filter(|(i, j, _)| i < j).all(|(_, _, x)| {
                    sa.add_factorizations(&Element::Rational(x.clone()), bounds).is_ok_and(|f| f.complete)
                }) && sa.mult_factorizations(&Element::Rational(b.det()), bounds).is_ok_and(|f| f.complete);
                if oracles_complete {
                    if e.complete && e.items.is_empty() {
                        rep.violation(format!("{b}: no rigid factorization although every oracle is complete"));
                    } else if !e.complete {
                        rep.inconclusive(format!("{b}: enumeration incomplete"));
                    }
                }
            }
            Err(err) if err.is_inconclusive() => rep.note(format!("{b}: weight not computable")),
            Err(err) => rep.violation(format!("{b}: {err}")),
        }
        entries.extend(b.upper_entries().filter(|(_, _, x)| !x.is_zero()).map(|(_, _, x)| x.clone()));
    }
    let Some(expect_accp) = accp_expected(sa) else {
        rep.note("no ACCP expectation for this semialgebra");
        return rep;
    };
    let mut chain_found = false;
    for x in &entries {
        match accp_probe(sa, Mode::Additive, &Element::Rational(x.clone()), bounds) {
            Ok(r) if r.outcome == AccpOutcome::Chain => {
                chain_found = true;
                if expect_accp {
                    rep.violation(format!("{x}: ascending chain of depth {} in a semialgebra with the ACCP", r.depth));
                }
            }
            Ok(_) => {}
            Err(e) => rep.inconclusive(format!("accp probe from {x}: {e}")),
        }
    }
    if !expect_accp && !chain_found {
        rep.violation(format!("no ascending chain of depth {} found from the sampled entries", bounds.depth));
    }
    rep
}

/// Additive atoms below a bound, counted against a doubled bound. One atom
/// means `S` should behave as ℕ₀; more means the census must grow. The
/// multiplicative census must grow too: by value over ℕ₀, by denominator
/// (values up to 4) otherwise.
pub fn check_atom_census(sa: &Semialgebra, bound: u32) -> CheckReport {
    let mut rep = CheckReport::new(format!("atom_census({sa}, bound={bound})"));
    let b = |k: u32| Bounds::default().with_max_den(u64::from(k)).with_max_exp(k);
    let add = |k: u32| sa.list_atoms(Mode::Additive, &b(k), &Rat::int(k)).map(|e| e.items.len());
    let mult = |k: u32| {
        let (bounds, cap) = if matches!(sa, Semialgebra::Nat) { (b(k), k) } else { (b(2 * k), 4) };
        sa.list_atoms(Mode::Multiplicative, &bounds, &Rat::int(cap)).map(|e| e.items.len())
    };
    match (add(bound), add(2 * bound)) {
        (Ok(0), _) => rep.inconclusive("no additive atoms: antimatter"),
        (Ok(1), Ok(1)) => {
            for den in 1..=4u64 {
                for num in 0..=u64::from(bound) * den {
                    let q = Rat::new(num, den).expect("nonzero denominator");
                    rep.instances_tested += 1;
                    match sa.contains(&Element::Rational(q.clone())) {
                        Ok(v) if v == q.is_integer() => {}
                        Ok(v) => rep.violation(format!("{q}: membership {v} with a single additive atom")),
                        Err(e) => rep.inconclusive(format!("{q}: {e}")),
                    }
                }
            }
            rep.note("one additive atom");
        }
        (Ok(lo), Ok(hi)) => {
            rep.instances_tested += 2;
            rep.note(format!("additive atoms: {lo} at bound {bound}, {hi} at bound {}", 2 * bound));
            if hi <= lo {
                rep.violation(format!("additive census does not grow: {lo} -> {hi}"));
            }
        }
        (lo, hi) => rep.inconclusive(format!("additive census: {lo:?} / {hi:?}")),
    }
    match (mult(bound), mult(2 * bound)) {
        (Ok(lo), Ok(hi)) => {
            rep.instances_tested += 2;
            rep.note(format!("multiplicative atoms: {lo} at bound {bound}, {hi} at bound {}", 2 * bound));
            if hi <= lo && lo > 0 {
                rep.violation(format!("multiplicative census does not grow: {lo} -> {hi}"));
            }
        }
        (lo, hi) => rep.inconclusive(format!("multiplicative census: {lo:?} / {hi:?}")),
    }
    rep
}

fn parse_matrices(list: &[&str]) -> Vec<UTMatrix> {
    list.iter().map(|s| s.parse().expect("valid literal")).collect()
}

fn rat(s: &str) -> Rat {
    s.parse().expect("valid literal")
}

/// Sample matrices per semialgebra for the transfer check.
fn transfer_samples(sa: &Semialgebra) -> Vec<UTMatrix> {
    match sa {
        Semialgebra::Nat => nat_matrices(2, 4).iter().map(|m| to_utmatrix(m)).collect(),
        Semialgebra::Cyclic(_) => {
            let offs = ["0", "2/3", "4/9", "1", "4/3"];
            let diags = ["1", "2/3", "3"];
            let mut v = Vec::new();
            for x in offs {
                for d1 in diags {
                    for d2 in diags {
                        v.push(format!("{d1},{x};0,{d2}"));
                    }
                }
            }
            v.iter().map(|s| s.parse().expect("valid literal")).collect()
        }
        _ => parse_matrices(&["1,2;0,2", "1,3;0,3", "1,4;0,4", "2,1;0,1", "1,5/2;0,1", "3,1;0,2"]),
    }
}

pub const SUITES: &[&str] = &["all", "atoms", "matrices", "sigma", "lemma", "transfer", "census"];

/// Runs a named suite. Checks are independent and run in parallel; reports
/// come back in a fixed order.
pub fn run_suite(name: &str, seed: u64) -> Result<Vec<CheckReport>> {
    type Job = Box<dyn Fn() -> CheckReport + Send + Sync>;
    let mut jobs: Vec<Job> = Vec::new();
    let want = |s: &str| name == "all" || name == s;
    if !SUITES.contains(&name) {
        return Err(Error::Parse(format!("unknown suite {name:?}; expected one of {}", SUITES.join(", "))));
    }
    if want("atoms") {
        jobs.push(Box::new(|| check_nat_mult_atoms(200)));
        jobs.push(Box::new(|| check_cyclic_add_atoms(&rat("3/2"), &rat("6"))));
        jobs.push(Box::new(|| check_cyclic_add_atoms(&rat("5/2"), &rat("10"))));
    }
    if want("matrices") {
        jobs.push(Box::new(|| check_atom_characterization(2, 0)));
        jobs.push(Box::new(|| check_atom_characterization(2, 5)));
        jobs.push(Box::new(|| check_atom_characterization(3, 2)));
    }
    if want("sigma") {
        jobs.push(Box::new(move || check_sigma_superadditivity(500, seed)));
    }
    if want("lemma") {
        jobs.push(Box::new(|| {
            let xs: Vec<Rat> = (1..=20u32).map(Rat::int).collect();
            check_divisor_atom_factorization_equivalence(&Semialgebra::Nat, &xs, &Bounds::default())
        }));
        jobs.push(Box::new(|| {
            let r = rat("3/2");
            let xs: Vec<Rat> = cyclic_members_up_to(&r, &rat("4")).into_iter().filter(|x| !x.is_zero()).take(15).collect();
            check_divisor_atom_factorization_equivalence(&Semialgebra::cyclic(r).unwrap(), &xs, &Bounds::default())
        }));
        jobs.push(Box::new(|| {
            check_divisor_atom_factorization_equivalence(
                &Semialgebra::conducted(rat("2")),
                &[rat("9/2")],
                &Bounds::default().with_max_den(10),
            )
        }));
    }
    if want("transfer") {
        let small = Bounds::default().with_max_len(6).with_max_exp(6).with_max_den(12).with_depth(6).with_max_count(2000);
        for sa in [Semialgebra::Nat, Semialgebra::cyclic(rat("2/3")).unwrap(), Semialgebra::conducted(rat("2"))] {
            jobs.push(Box::new(move || check_transfer_diagram(&sa, &transfer_samples(&sa), &small)));
        }
    }
    if want("census") {
        jobs.push(Box::new(|| check_atom_census(&Semialgebra::Nat, 100)));
        jobs.push(Box::new(|| check_atom_census(&Semialgebra::cyclic(rat("2/3")).unwrap(), 10)));
        jobs.push(Box::new(|| check_atom_census(&Semialgebra::conducted(rat("2")), 8)));
    }
    Ok(Execution::default().map(&jobs, |job| job()))
}

/// Tally of report statuses.
pub fn summarize(reports: &[CheckReport]) -> BTreeMap<&'static str, usize> {
    let mut out = BTreeMap::from([("pass", 0), ("fail", 0), ("inconclusive", 0)]);
    for r in reports {
        let key = match r.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        };
        *out.get_mut(key).expect("all keys present") += 1;
    }
    out
}
