//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semifact::matrix::{MatrixAtom, ProbeBounds, TriangularMonoid, UTMatrix};
use semifact::semialgebra::AccpOutcome;
use semifact::verifier::{self, Status};
use semifact::{accp_probe, Bounds, Element, ExpSum, Mode, Rat, Semialgebra};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn q(s: &str) -> Rat {
    s.parse().unwrap()
}

fn el(x: &Rat) -> Element {
    Element::Rational(x.clone())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `Σ c_i (n/d)^i` from a digit vector.
fn from_digits(r: &Rat, digits: &[u64]) -> Rat {
    let mut p = Rat::one();
    let mut acc = Rat::zero();
    for &c in digits {
        acc = &acc + &(&p * &Rat::int(c));
        p = &p * r;
    }
    acc
}

fn digit_vectors(len: usize, base: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = base.pow(len as u32);
    (0..total).map(move |mut k| {
        (0..len)
            .map(|_| {
                let c = k % base;
                k /= base;
                c
            })
            .collect()
    })
}

fn atom_census() -> Outcome {
    let sa = Semialgebra::cyclic(q("2/3")).unwrap();
    // Σ c_i (2/3)^i = (Σ c_i 2^i 3^(10-i)) / 3^10.
    let weights: Vec<u64> = (0..11u32).map(|i| 2u64.pow(i) * 3u64.pow(10 - i)).collect();
    let scale = 3u64.pow(10);
    let mut atoms = 0;
    let mut members = 0;
    for v in digit_vectors(11, 3) {
        let num: u64 = v.iter().zip(&weights).map(|(c, w)| c * w).sum();
        if num == 0 {
            continue;
        }
        members += 1;
        let x = Rat::new(num, scale).unwrap();
        let is_power = v.iter().sum::<u64>() == 1;
        let got = sa.is_add_atom(&el(&x)).map_err(|e| e.to_string())?;
        ensure(got == is_power, || format!("{x} (digits {v:?}): is_add_atom = {got}"))?;
        atoms += usize::from(got);
    }
    ensure(atoms == 11, || format!("{atoms} atoms"))?;
    Ok(format!("{members} members, atoms exactly (2/3)^0..(2/3)^10"))
}

fn canonical_digits() -> Outcome {
    let sa = Semialgebra::cyclic(q("2/3")).unwrap();
    let r = q("2/3");
    // x * 3^8 = c_0 3^8 + Σ_{i>=1} c_i 2^i 3^(8-i); every tail with c_i < 3 is listed once.
    let weight = |i: u32| 2u64.pow(i) * 3u64.pow(8 - i);
    let tails: Vec<u64> = digit_vectors(8, 3).map(|v| v.iter().zip(1..).map(|(&c, i)| c * weight(i)).sum()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let mut v: Vec<u64> = (0..9).map(|_| rng.gen_range(0..3)).collect();
        v[0] = rng.gen_range(0..6);
        let x = from_digits(&r, &v);
        let digits = sa.canonical_digits(&x).map_err(|e| e.to_string())?;
        let back = from_digits(&r, &digits.iter().map(|d| u64::try_from(d).unwrap()).collect::<Vec<_>>());
        ensure(back == x, || format!("{x}: digits {digits:?} reconstruct {back}"))?;
        let mut expect = v.clone();
        while expect.len() > 1 && expect.last() == Some(&0) {
            expect.pop();
        }
        let got: Vec<u64> = digits.iter().map(|d| u64::try_from(d).unwrap()).collect();
        ensure(got == expect, || format!("{x}: digits {got:?}, built from {expect:?}"))?;
        let scaled = &x * &Rat::int(3u64.pow(8));
        let target = scaled.to_u64().ok_or("scaled value is not an integer")?;
        let reps = tails.iter().filter(|&&t| t <= target && (target - t) % 3u64.pow(8) == 0).count();
        ensure(reps == 1, || format!("{x}: {reps} digit-constrained factorizations"))?;
    }
    Ok("200 random members reconstruct; each has exactly one digit-constrained factorization".into())
}

fn members_below(r: &Rat, cap: &Rat, max_exp: u32) -> Vec<Rat> {
    let powers: Vec<Rat> = (0..=max_exp).map(|k| r.pow(k)).filter(|p| p <= cap).collect();
    let mut seen = BTreeSet::from([Rat::zero()]);
    let mut frontier = vec![Rat::zero()];
    while let Some(x) = frontier.pop() {
        for p in &powers {
            let y = &x + p;
            if y < *cap && seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

fn reducedness() -> Outcome {
    let half = Semialgebra::cyclic(q("1/2")).unwrap();
    ensure(half.is_mult_unit(&el(&q("1/2"))) == Ok(true), || "1/2 is not a unit of S_{1/2}".into())?;
    ensure(!half.is_reduced(), || "S_{1/2} reported reduced".into())?;
    let mut tested = 0;
    for (r, list) in [
        ("2/3", digit_vectors(9, 3).map(|v| from_digits(&q("2/3"), &v)).filter(|x| *x < Rat::int(4u32)).collect::<Vec<_>>()),
        ("3/2", members_below(&q("3/2"), &Rat::int(4u32), 8)),
        ("5/4", members_below(&q("5/4"), &Rat::int(4u32), 8)),
    ] {
        let sa = Semialgebra::cyclic(q(r)).unwrap();
        ensure(sa.is_reduced(), || format!("S_{r} not reduced"))?;
        for x in list.iter().filter(|x| !x.is_zero() && !x.is_one()) {
            tested += 1;
            let unit = sa.is_mult_unit(&el(x)).map_err(|e| e.to_string())?;
            let inverse_in = sa.contains(&el(&x.recip().unwrap())).map_err(|e| e.to_string())?;
            ensure(!unit && !inverse_in, || format!("{x} behaves as a unit of S_{r}"))?;
        }
    }
    Ok(format!("1/2 is a unit of S_{{1/2}}; no unit besides 1 among {tested} members of S_{{2/3}}, S_{{3/2}}, S_{{5/4}}"))
}

fn rationals(max_den: u64, max_value: u64) -> Vec<Rat> {
    let mut out = BTreeSet::new();
    for den in 1..=max_den {
        for num in 0..=max_value * den {
            out.insert(Rat::new(num, den).unwrap());
        }
    }
    out.into_iter().collect()
}

fn conducted_atoms() -> Outcome {
    let r = q("2");
    let sa = Semialgebra::conducted(r.clone());
    let member = |x: &Rat| x.is_integer() || *x >= r;
    // Non-unit members up to 5/2, the largest possible smaller factor below value 5.
    let splitters: Vec<Rat> = rationals(48, 3).into_iter().filter(|a| *a >= r && *a <= q("5/2") && member(a)).collect();
    let mut tested = 0;
    for x in rationals(12, 5).into_iter().filter(|x| !x.is_zero() && member(x)) {
        tested += 1;
        let closed = x.is_one() || (x > r && x < Rat::int(3u32));
        let got = sa.is_add_atom(&el(&x)).map_err(|e| e.to_string())?;
        ensure(got == closed, || format!("additive {x}: predicate {got}, closed form {closed}"))?;
        if x.is_one() {
            continue;
        }
        // x = a b with a, b non-units forces 2 <= a <= x / 2.
        let half = x.checked_div(&r).unwrap();
        let split = splitters.iter().filter(|a| **a <= half).any(|a| member(&x.checked_div(a).unwrap()));
        let got = sa.is_mult_atom(&el(&x)).map_err(|e| e.to_string())?;
        ensure(got == !split, || format!("multiplicative {x}: predicate {got}, scan {}", !split))?;
    }
    for (x, atom) in [("2", true), ("3", true), ("7/2", true), ("4", false), ("9/2", false)] {
        ensure(sa.is_mult_atom(&el(&q(x))) == Ok(atom), || format!("{x}: expected atom = {atom}"))?;
    }
    Ok(format!("{tested} members: additive closed form and multiplicative scan agree"))
}

fn non_ffm_witness() -> Outcome {
    let sa = Semialgebra::conducted(q("2"));
    let x = el(&q("9/2"));
    let mut counts = Vec::new();
    for d in [6, 10, 20] {
        let e = sa.add_factorizations(&x, &Bounds::default().with_max_den(d)).map_err(|e| e.to_string())?;
        ensure(!e.complete, || format!("complete at max_den {d}"))?;
        let pairs: Vec<_> = e.items.iter().filter(|f| f.len() == 2).collect();
        for f in &pairs {
            let parts: Vec<Rat> = f.expanded().map(|a| a.rational().unwrap().clone()).collect();
            let t = parts[0].checked_sub(&q("2")).ok_or_else(|| format!("{f}: first part below 2"))?;
            ensure(t > Rat::zero() && t < q("1/2") && parts[1] == q("5/2").checked_sub(&t).unwrap(), || {
                format!("{f} is not (2 + t) + (5/2 - t)")
            })?;
        }
        counts.push(pairs.len());
    }
    ensure(counts.windows(2).all(|w| w[0] < w[1]), || format!("counts {counts:?} not increasing"))?;
    Ok(format!("length-2 factorizations of 9/2 at max_den 6/10/20: {counts:?}, all incomplete"))
}

fn accp_failure() -> Outcome {
    let b = Bounds::default().with_depth(8);
    let r = q("2/3");
    let sa = Semialgebra::cyclic(r.clone()).unwrap();
    let rep = accp_probe(&sa, Mode::Additive, &el(&q("2")), &b).map_err(|e| e.to_string())?;
    ensure(rep.outcome == AccpOutcome::Chain && rep.chain.len() == 9, || format!("{:?}", rep.outcome))?;
    for (k, x) in rep.chain.iter().enumerate() {
        let rk = r.pow(k as u32);
        let expect = &Rat::int(2u32) * &rk;
        ensure(*x.rational().unwrap() == expect, || format!("x_{k} = {x}"))?;
        let next = &rk * &r;
        ensure(expect == &next + &(&Rat::int(2u32) * &next), || format!("identity fails at k = {k}"))?;
        if k > 0 {
            ensure(rep.chain[k - 1].rational().unwrap() > x.rational().unwrap(), || "chain not strict".into())?;
        }
    }
    for (sa, start) in [("nat", "5"), ("cyclic:3/2", "6"), ("conducted:2", "9/2")] {
        let sa: Semialgebra = sa.parse().unwrap();
        let rep = accp_probe(&sa, Mode::Additive, &el(&q(start)), &b).map_err(|e| e.to_string())?;
        ensure(rep.outcome == AccpOutcome::NoneFound, || format!("{sa}: chain found from {start}"))?;
    }
    Ok("chain 2(2/3)^k for k = 0..8; none found in nat, S_{3/2}, Q_2".into())
}

fn matrix_atoms() -> Outcome {
    let mut tested = 0;
    for (n, bound) in [(2, 5), (3, 2)] {
        let rep = verifier::check_atom_characterization(n, bound);
        ensure(rep.status == Status::Pass, || format!("{}: {:?} {:?}", rep.check_name, rep.status, rep.violations))?;
        tested += rep.instances_tested;
    }
    Ok(format!("is_matrix_atom matches exhaustive search on {tested} matrices"))
}

fn hfm() -> Outcome {
    for sa in ["nat", "conducted:2"] {
        let t = TriangularMonoid::new(sa.parse().unwrap(), 2).unwrap();
        for m in 2..=4u64 {
            let w = t.hfm_counterexample(m).map_err(|e| e.to_string())?;
            ensure(w.short.product(2) == w.matrix && w.long.product(2) == w.matrix, || "products differ".into())?;
            let (lens, complete) = t.rigid_length_set(&w.matrix, &Bounds::default()).map_err(|e| e.to_string())?;
            ensure(complete, || format!("{sa}, m = {m}: enumeration incomplete"))?;
            let gap = lens.iter().any(|a| lens.contains(&(a + m as usize - 1)));
            ensure(gap, || format!("{sa}, m = {m}: lengths {lens:?}"))?;
            let weight = t.weight(&w.matrix).map_err(|e| e.to_string())?;
            ensure(lens.iter().all(|&l| l as u64 <= weight), || format!("{sa}, m = {m}: {lens:?} vs weight {weight}"))?;
        }
    }
    Ok("nat and Q_2, m = 2, 3, 4: complete length sets with gap m - 1, all within the weight".into())
}

fn almost_prime_like() -> Outcome {
    let pb = ProbeBounds::default();
    let t = TriangularMonoid::new("cyclic:2/3".parse().unwrap(), 2).unwrap();
    let a = MatrixAtom::Additive { i: 0, j: 1, a: q("2/3") };
    let rep = t.almost_prime_like_probe(&a, &pb).map_err(|e| e.to_string())?;
    let x: UTMatrix = "2/3,0;0,1".parse().unwrap();
    let y: UTMatrix = "1,1;0,1".parse().unwrap();
    ensure(rep.outcome == "witness" && rep.x == Some(x) && rep.y == Some(y), || format!("{rep:?}"))?;
    let t = TriangularMonoid::new(Semialgebra::Nat, 2).unwrap();
    for a in [MatrixAtom::Additive { i: 0, j: 1, a: Rat::one() }, MatrixAtom::Multiplicative { i: 0, a: q("2") }] {
        let rep = t.almost_prime_like_probe(&a, &pb).map_err(|e| e.to_string())?;
        ensure(rep.outcome == "none_found", || format!("{a}: {rep:?}"))?;
    }
    Ok("witness X = diag(2/3, 1), Y = I + E12 over S_{2/3}; none found for I + E12 and diag(2, 1) over nat".into())
}

fn sigma() -> Outcome {
    let rep = verifier::check_sigma_superadditivity(500, 1);
    ensure(rep.status == Status::Pass, || format!("{:?}", rep.violations))?;
    Ok(format!("{} seeded pairs", rep.instances_tested))
}

fn formal() -> Outcome {
    let sa = Semialgebra::FormalExp;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let exps = ["0", "1/2", "1/3", "2/3", "1", "5/6", "3/2", "7/5"];
    for _ in 0..50 {
        let mut terms: Vec<(Rat, BigUint)> = Vec::new();
        for e in exps {
            if rng.gen_bool(0.5) {
                terms.push((q(e), BigUint::from(rng.gen_range(1..4u32))));
            }
        }
        let x = ExpSum::new(terms.clone()).map_err(|e| e.to_string())?;
        let e = sa.add_factorizations(&Element::ExpSum(x.clone()), &Bounds::default()).map_err(|e| e.to_string())?;
        ensure(e.complete && e.items.len() == 1, || format!("{x}: {} factorizations", e.items.len()))?;
        ensure(e.items[0].value().ok() == Some(Element::ExpSum(x.clone())), || format!("{x}: value differs"))?;
        let expect_divs: u64 = terms.iter().map(|(_, c)| u64::try_from(c).unwrap() + 1).product();
        let divs = sa.add_divisors(&Element::ExpSum(x.clone()), &Bounds::default()).map_err(|e| e.to_string())?;
        ensure(divs.items.len() as u64 == expect_divs, || format!("{x}: {} divisors", divs.items.len()))?;
    }
    let one = Element::ExpSum(ExpSum::single(Rat::one(), 1u32).unwrap());
    let e = sa.mult_factorizations(&one, &Bounds::default().with_max_den(7)).map_err(|e| e.to_string())?;
    let lens: BTreeSet<u64> = e.items.iter().map(|f| f.len()).collect();
    ensure([2, 3, 5, 7].iter().all(|l| lens.contains(l)), || format!("lengths {lens:?}"))?;
    ensure(!e.complete, || "complete".into())?;
    Ok(format!("50 sums factor uniquely; e^1 has lengths {lens:?} at prime bound 7, incomplete"))
}

fn verifier_suite() -> Outcome {
    let reports = verifier::run_suite("all", 1).map_err(|e| e.to_string())?;
    let tally = verifier::summarize(&reports);
    ensure(tally["fail"] == 0, || {
        let failed: Vec<_> = reports.iter().filter(|r| r.status == Status::Fail).map(|r| &r.check_name).collect();
        format!("failing checks {failed:?}")
    })?;
    Ok(format!("{} checks: {} pass, {} inconclusive, 0 fail", reports.len(), tally["pass"], tally["inconclusive"]))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("atom census of S_{2/3}", atom_census, 1),
        ("canonical digits", canonical_digits, 5),
        ("reducedness boundary", reducedness, 2),
        ("conducted atoms", conducted_atoms, 3),
        ("non-FFM witness in Q_2", non_ffm_witness, 3),
        ("ACCP failure", accp_failure, 2),
        ("matrix atom characterization", matrix_atoms, 30),
        ("half-factoriality failure", hfm, 5),
        ("almost prime-like failure", almost_prime_like, 5),
        ("sigma superadditivity", sigma, 5),
        ("formal exponential semialgebra", formal, 2),
        ("verifier suite", verifier_suite, 60),
    ];
    let mut failed = 0;
    for (k, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = check();
        let took = start.elapsed();
        let res = match res {
            Ok(msg) if took > Duration::from_secs(*budget) => Err(format!("{msg}; took {took:.2?}, budget {budget} s")),
            other => other,
        };
        match res {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} ({took:.2?})", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} ({took:.2?})", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
