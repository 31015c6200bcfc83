//! Upper triangular matrices over a rational semialgebra and the monoids
//! `T_n(S)•` and `U_n(S)`.

mod monoid;
mod probes;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use monoid::{RigidFactorization, TriangularMonoid};
pub use probes::{AplReport, HfmWitness, ProbeBounds};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// An `n × n` upper triangular matrix with nonnegative rational entries,
/// stored row-major with explicit zeros below the diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UTMatrix {
    n: usize,
    entries: Vec<Rat>,
}

impl UTMatrix {
    pub fn identity(n: usize) -> UTMatrix {
        let mut m = UTMatrix { n, entries: vec![Rat::zero(); n * n] };
        for i in 0..n {
            m.entries[i * n + i] = Rat::one();
        }
        m
    }

    /// Builds a matrix from rows; rejects non-square input and nonzero
    /// entries below the diagonal.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<UTMatrix> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::domain("matrices must have dimension at least 1"));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::domain("matrix is not square"));
            }
            for (j, x) in row.into_iter().enumerate() {
                if j < i && !x.is_zero() {
                    return Err(Error::domain(format!("entry ({}, {}) below the diagonal is nonzero", i + 1, j + 1)));
                }
                entries.push(x);
            }
        }
        Ok(UTMatrix { n, entries })
    }

    pub fn diagonal(diag: &[Rat]) -> UTMatrix {
        let n = diag.len();
        let mut m = UTMatrix::identity(n);
        for (i, d) in diag.iter().enumerate() {
            m.entries[i * n + i] = d.clone();
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.n + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, x: Rat) {
        self.entries[i * self.n + j] = x;
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        self.entries.chunks(self.n).map(<[Rat]>::to_vec).collect()
    }

    /// Entries on and above the diagonal.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        (0..self.n).flat_map(move |i| (i..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    pub fn is_regular(&self) -> bool {
        (0..self.n).all(|i| !self.get(i, i).is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == UTMatrix::identity(self.n)
    }

    pub fn is_diagonal(&self) -> bool {
        self.upper_entries().all(|(i, j, x)| i == j || x.is_zero())
    }

    pub fn is_unit_triangular(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i).is_one())
    }

    /// Product of the diagonal entries.
    pub fn det(&self) -> Rat {
        (0..self.n).map(|i| self.get(i, i)).product()
    }

    pub fn mul(&self, other: &UTMatrix) -> Result<UTMatrix> {
        if self.n != other.n {
            return Err(Error::domain(format!("dimension mismatch: {} vs {}", self.n, other.n)));
        }
        let n = self.n;
        let mut out = UTMatrix { n, entries: vec![Rat::zero(); n * n] };
        for i in 0..n {
            for j in i..n {
                let s: Rat = (i..=j).map(|k| self.get(i, k) * other.get(k, j)).sum();
                out.entries[i * n + j] = s;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for UTMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .chunks(self.n)
            .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

impl FromStr for UTMatrix {
    type Err = Error;
    /// Rows separated by `;`, entries by `,`, e.g. `1,3;0,2`.
    fn from_str(s: &str) -> Result<UTMatrix> {
        let rows = s
            .trim()
            .split(';')
            .map(|row| row.split(',').map(|x| x.trim().parse::<Rat>()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        UTMatrix::from_rows(rows).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Serialize for UTMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A matrix atom: `I + a E_ij` with `i < j` and `a` an additive atom, or
/// `I + (a - 1) E_ii` with `a` a multiplicative atom. Positions are 0-based;
/// text and JSON use 1-based positions.
///
/// The derived order puts additive atoms first, then compares positions
/// row-major, then values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatrixAtom {
    Additive { i: usize, j: usize, a: Rat },
    Multiplicative { i: usize, a: Rat },
}

impl MatrixAtom {
    pub fn value(&self) -> &Rat {
        match self {
            MatrixAtom::Additive { a, .. } | MatrixAtom::Multiplicative { a, .. } => a,
        }
    }

    pub fn position(&self) -> (usize, usize) {
        match self {
            MatrixAtom::Additive { i, j, .. } => (*i, *j),
            MatrixAtom::Multiplicative { i, .. } => (*i, *i),
        }
    }

    pub fn is_additive(&self) -> bool {
        matches!(self, MatrixAtom::Additive { .. })
    }

    pub fn to_matrix(&self, n: usize) -> UTMatrix {
        let mut m = UTMatrix::identity(n);
        let (i, j) = self.position();
        m.set(i, j, self.value().clone());
        m
    }
}

impl fmt::Display for MatrixAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixAtom::Additive { i, j, a } => write!(f, "I+({a})E{}{}", i + 1, j + 1),
            MatrixAtom::Multiplicative { i, a } => write!(f, "D{}({a})", i + 1),
        }
    }
}

impl Serialize for MatrixAtom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let (i, j) = self.position();
        let mut st = s.serialize_struct("MatrixAtom", 3)?;
        st.serialize_field("type", if self.is_additive() { "add" } else { "mult" })?;
        st.serialize_field("pos", &[i + 1, j + 1])?;
        st.serialize_field("atom", &self.value().to_string())?;
        st.end()
    }
}
