use serde::Serialize;

use super::{MatrixAtom, RigidFactorization, TriangularMonoid, UTMatrix};
use crate::enumeration::Bounds;
use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::semialgebra::{Element, Mode};

/// Limits for the almost prime-like probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProbeBounds {
    /// Atom values in the pool have denominator at most this.
    pub max_den: u64,
    /// Atom values in the pool are at most this.
    pub max_value: u64,
    /// Pool elements are products of at most this many atoms.
    pub max_factors: usize,
    /// Bounds for each divisibility check.
    pub search: Bounds,
}

impl Default for ProbeBounds {
    fn default() -> Self {
        ProbeBounds { max_den: 9, max_value: 3, max_factors: 2, search: Bounds::default().with_max_len(8) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AplReport {
    pub atom: MatrixAtom,
    /// `"witness"` or `"none_found"`.
    pub outcome: &'static str,
    pub x: Option<UTMatrix>,
    pub y: Option<UTMatrix>,
    pub pool_size: usize,
    pub pairs_checked: usize,
    /// Pairs skipped because a divisibility check was inconclusive.
    pub inconclusive: usize,
}

/// `A = [[1, m], [0, m]]` with two rigid factorizations whose lengths differ
/// by `m - 1`.
#[derive(Debug, Clone, Serialize)]
pub struct HfmWitness {
    pub m: u64,
    pub matrix: UTMatrix,
    pub long: RigidFactorization,
    pub short: RigidFactorization,
}

impl TriangularMonoid {
    /// Atoms with small values, multiplicative before additive, then by
    /// position, then by value.
    fn atom_pool(&self, pb: &ProbeBounds) -> Result<Vec<MatrixAtom>> {
        let n = self.n();
        let cap = Rat::int(pb.max_value);
        let b = Bounds::default().with_max_den(pb.max_den);
        let values = |mode| -> Result<Vec<Rat>> {
            let mut v: Vec<Rat> = self
                .semialgebra()
                .list_atoms(mode, &b, &cap)?
                .items
                .into_iter()
                .filter_map(|e| e.rational().ok().cloned())
                .filter(|q| *q <= cap && q.denom() <= pb.max_den.into())
                .collect();
            v.sort();
            v.dedup();
            Ok(v)
        };
        let mut pool = Vec::new();
        let mults = values(Mode::Multiplicative)?;
        for i in 0..n {
            pool.extend(mults.iter().map(|a| MatrixAtom::Multiplicative { i, a: a.clone() }));
        }
        let adds = values(Mode::Additive)?;
        for i in 0..n {
            for j in i + 1..n {
                pool.extend(adds.iter().map(|a| MatrixAtom::Additive { i, j, a: a.clone() }));
            }
        }
        Ok(pool)
    }

    fn probe_pool(&self, pb: &ProbeBounds) -> Result<Vec<UTMatrix>> {
        let n = self.n();
        let atoms: Vec<UTMatrix> = self.atom_pool(pb)?.iter().map(|a| a.to_matrix(n)).collect();
        let mut layer: Vec<UTMatrix> = atoms.clone();
        let mut pool: Vec<UTMatrix> = Vec::new();
        for k in 1..=pb.max_factors.max(1) {
            for m in &layer {
                if !pool.contains(m) {
                    pool.push(m.clone());
                }
            }
            if k == pb.max_factors.max(1) {
                break;
            }
            layer = layer.iter().flat_map(|x| atoms.iter().map(move |a| x.mul(a).expect("same dimension"))).collect();
        }
        Ok(pool)
    }

    /// Searches for `X`, `Y` in a small pool with `atom |_p XY` while
    /// `atom` divides neither `X` nor `Y` up to permutation. A witness shows
    /// `atom` is not almost prime-like; `none_found` proves nothing.
    pub fn almost_prime_like_probe(&self, atom: &MatrixAtom, pb: &ProbeBounds) -> Result<AplReport> {
        let n = self.n();
        if !self.is_matrix_atom(&atom.to_matrix(n))? {
            return Err(Error::domain(format!("{atom} is not a matrix atom")));
        }
        let pool = self.probe_pool(pb)?;
        let mut report = AplReport {
            atom: atom.clone(),
            outcome: "none_found",
            x: None,
            y: None,
            pool_size: pool.len(),
            pairs_checked: 0,
            inconclusive: 0,
        };
        let divides = |m: &UTMatrix| self.divides_up_to_permutation(atom, m, &pb.search);
        let mut not_dividing: Vec<Option<Option<bool>>> = vec![None; pool.len()];
        let mut free = |k: usize| -> Result<Option<bool>> {
            if let Some(v) = not_dividing[k] {
                return Ok(v);
            }
            let v = match divides(&pool[k]) {
                Ok(v) => Some(!v),
                Err(e) if e.is_inconclusive() => None,
                Err(e) => return Err(e),
            };
            not_dividing[k] = Some(v);
            Ok(v)
        };
        for xi in 0..pool.len() {
            for yi in 0..pool.len() {
                report.pairs_checked += 1;
                let (Some(nx), Some(ny)) = (free(xi)?, free(yi)?) else {
                    report.inconclusive += 1;
                    continue;
                };
                if !(nx && ny) {
                    continue;
                }
                match divides(&pool[xi].mul(&pool[yi])?) {
                    Ok(true) => {
                        report.outcome = "witness";
                        report.x = Some(pool[xi].clone());
                        report.y = Some(pool[yi].clone());
                        return Ok(report);
                    }
                    Ok(false) => {}
                    Err(e) if e.is_inconclusive() => report.inconclusive += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(report)
    }

    /// `U = I + E_12` and `D = diag(1, m)` give `D U^m = U D`.
    pub fn hfm_counterexample(&self, m: u64) -> Result<HfmWitness> {
        if self.n() != 2 {
            return Err(Error::domain("the construction lives in dimension 2"));
        }
        if m < 2 {
            return Err(Error::domain("m must be at least 2"));
        }
        let sa = self.semialgebra();
        let one = Element::Rational(Rat::one());
        if !sa.is_add_atom(&one)? {
            return Err(Error::Unsupported(format!("1 is not an additive atom of {sa}")));
        }
        let mm = Element::Rational(Rat::int(m));
        if !sa.contains(&mm)? {
            return Err(Error::domain(format!("{m} is not in {sa}")));
        }
        let facts = sa.mult_factorizations(&mm, &Bounds::default())?;
        let f = facts
            .items
            .first()
            .ok_or_else(|| Error::Unsupported(format!("no multiplicative factorization of {m} found")))?;
        let d: Vec<MatrixAtom> = f
            .expanded()
            .map(|e| Ok(MatrixAtom::Multiplicative { i: 1, a: e.rational()?.clone() }))
            .collect::<Result<_>>()?;
        let u = MatrixAtom::Additive { i: 0, j: 1, a: Rat::one() };
        let long = RigidFactorization {
            factors: d.iter().cloned().chain(std::iter::repeat_n(u.clone(), m as usize)).collect(),
        };
        let short = RigidFactorization { factors: std::iter::once(u).chain(d).collect() };
        let matrix = long.product(2);
        debug_assert_eq!(matrix, short.product(2));
        Ok(HfmWitness { m, matrix, long, short })
    }
}
