use alloc::string::String;
use alloc::vec::Vec;

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::fparith::{Elem, Field};

/// Which way the semilinearity twists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// v -> M * v^(p): additive, tau(a v) = a^p tau(v).
    Frobenius,
    /// v -> (M * v)^(1/p): additive, kappa(a v) = a^(1/p) kappa(v).
    Cartier,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Frobenius => Direction::Cartier,
            Direction::Cartier => Direction::Frobenius,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Frobenius => "frobenius",
            Direction::Cartier => "cartier",
        }
    }

    pub fn from_name(s: &str) -> Option<Direction> {
        match s {
            "frobenius" => Some(Direction::Frobenius),
            "cartier" => Some(Direction::Cartier),
            _ => None,
        }
    }
}

/// A p-linear or p^{-1}-linear endomorphism of F_q^dim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearOperator {
    field: Field,
    matrix: Matrix,
    direction: Direction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StableRank {
    pub rank: usize,
    /// Least e with rank(M_e) = rank(M_{e+1}).
    pub index: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Nilpotence {
    pub nilpotent: bool,
    /// Least e with M_e = 0, when nilpotent.
    pub index: Option<u32>,
}

/// Flat interchange form of an operator: field data plus row-major entries
/// as packed field elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorRecord {
    pub p: u64,
    pub e: u32,
    /// Modulus coefficients, constant term first.
    pub modulus: Vec<u32>,
    pub dim: usize,
    pub direction: String,
    pub entries: Vec<u32>,
}

impl SemilinearOperator {
    pub fn new(field: &Field, matrix: Matrix, direction: Direction) -> Result<SemilinearOperator> {
        if !matrix.is_square() {
            return Err(Error::OutOfRange("operator matrix must be square".into()));
        }
        Ok(SemilinearOperator { field: field.clone(), matrix, direction })
    }

    pub fn zero(field: &Field, dim: usize, direction: Direction) -> SemilinearOperator {
        SemilinearOperator { field: field.clone(), matrix: Matrix::zeros(dim, dim), direction }
    }

    pub fn identity(field: &Field, dim: usize, direction: Direction) -> SemilinearOperator {
        SemilinearOperator { field: field.clone(), matrix: Matrix::identity(dim), direction }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        match self.direction {
            Direction::Frobenius => {
                let tw: Vec<Elem> = v.iter().map(|&a| f.frobenius(a, 1)).collect();
                self.matrix.apply(f, &tw)
            }
            Direction::Cartier => self.matrix.apply(f, v).into_iter().map(|a| f.p_root(a)).collect(),
        }
    }

    /// Matrix of the e-fold composite. Frobenius: M M^(p) ... M^(p^{e-1}),
    /// so that tau^e(v) = M_e v^(p^e). Cartier: M^(p^{e-1}) ... M^(p) M, so
    /// that kappa^e(v) = (M_e v)^(1/p^e). e = 0 gives the identity.
    pub fn twisted_iterate(&self, e: u32) -> Matrix {
        let f = &self.field;
        let mut acc = Matrix::identity(self.dim());
        let mut twisted = self.matrix.clone();
        for _ in 0..e {
            acc = match self.direction {
                Direction::Frobenius => acc.mul(f, &twisted),
                Direction::Cartier => twisted.mul(f, &acc),
            };
            twisted = twisted.twist(f, 1);
        }
        acc
    }

    /// Ranks of M_1, M_2, ... up to and including M_{upto}.
    pub fn iterate_ranks(&self, upto: u32) -> Vec<usize> {
        let f = &self.field;
        let mut out = Vec::new();
        let mut acc = Matrix::identity(self.dim());
        let mut twisted = self.matrix.clone();
        for _ in 0..upto {
            acc = match self.direction {
                Direction::Frobenius => acc.mul(f, &twisted),
                Direction::Cartier => twisted.mul(f, &acc),
            };
            twisted = twisted.twist(f, 1);
            out.push(acc.rank(f));
        }
        out
    }

    pub fn stable_rank(&self) -> StableRank {
        // the rank can drop at most dim times, so dim + 1 iterates suffice
        let ranks = self.iterate_ranks(self.dim() as u32 + 2);
        for e in 0..ranks.len() - 1 {
            if ranks[e] == ranks[e + 1] {
                return StableRank { rank: ranks[e], index: e as u32 + 1 };
            }
        }
        unreachable!("rank sequence stabilizes within dim + 1 steps")
    }

    pub fn is_nilpotent(&self) -> Nilpotence {
        let f = &self.field;
        let mut acc = Matrix::identity(self.dim());
        let mut twisted = self.matrix.clone();
        for e in 1..=(self.dim().max(1) as u32) {
            acc = match self.direction {
                Direction::Frobenius => acc.mul(f, &twisted),
                Direction::Cartier => twisted.mul(f, &acc),
            };
            if acc.is_zero() {
                return Nilpotence { nilpotent: true, index: Some(e) };
            }
            twisted = twisted.twist(f, 1);
        }
        Nilpotence { nilpotent: false, index: None }
    }

    /// The dual operator on the dual space: transpose, opposite direction.
    /// If tau(v) = M v^(p) then <kappa(phi), v> = <phi, tau(v)>^(1/p) with
    /// kappa(phi) = (M^T phi)^(1/p), and symmetrically.
    pub fn dualize(&self) -> SemilinearOperator {
        SemilinearOperator {
            field: self.field.clone(),
            matrix: self.matrix.transpose(),
            direction: self.direction.flip(),
        }
    }

    pub fn direct_sum(&self, other: &SemilinearOperator) -> Result<SemilinearOperator> {
        if self.field != other.field || self.direction != other.direction {
            return Err(Error::Mismatch("direct sum needs the same field and direction"));
        }
        Ok(SemilinearOperator {
            field: self.field.clone(),
            matrix: self.matrix.block_diag(&other.matrix),
            direction: self.direction,
        })
    }

    /// The same operator in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix) -> Result<SemilinearOperator> {
        let f = &self.field;
        let inv = p.inverse(f).ok_or(Error::NotUnit("basis change matrix".into()))?;
        let matrix = match self.direction {
            Direction::Frobenius => inv.mul(f, &self.matrix).mul(f, &p.twist(f, 1)),
            Direction::Cartier => inv.twist(f, 1).mul(f, &self.matrix).mul(f, p),
        };
        Ok(SemilinearOperator { field: f.clone(), matrix, direction: self.direction })
    }

    pub fn to_record(&self) -> OperatorRecord {
        OperatorRecord {
            p: self.field.characteristic(),
            e: self.field.degree(),
            modulus: self.field.modulus().to_vec(),
            dim: self.dim(),
            direction: self.direction.name().into(),
            entries: self.matrix.entries().iter().map(|a| a.0).collect(),
        }
    }

    pub fn from_record(rec: &OperatorRecord) -> Result<SemilinearOperator> {
        let modulus: Vec<u64> = rec.modulus.iter().map(|&c| c as u64).collect();
        let field = Field::with_modulus(rec.p, &modulus)?;
        if rec.entries.len() != rec.dim * rec.dim {
            return Err(Error::OutOfRange("entry count does not match dim".into()));
        }
        if rec.entries.iter().any(|&a| a as u64 >= field.order()) {
            return Err(Error::OutOfRange("entry outside the field".into()));
        }
        let direction = Direction::from_name(&rec.direction)
            .ok_or_else(|| Error::OutOfRange(alloc::format!("direction {:?}", rec.direction)))?;
        let matrix = Matrix::from_row_major(rec.dim, rec.dim, rec.entries.iter().map(|&a| Elem(a)).collect());
        SemilinearOperator::new(&field, matrix, direction)
    }
}

/// e-fold composite matrix; see [`SemilinearOperator::twisted_iterate`].
pub fn twisted_iterate(op: &SemilinearOperator, e: u32) -> Matrix {
    op.twisted_iterate(e)
}

pub fn stable_rank(op: &SemilinearOperator) -> StableRank {
    op.stable_rank()
}

pub fn is_nilpotent(op: &SemilinearOperator) -> Nilpotence {
    op.is_nilpotent()
}

pub fn dualize(op: &SemilinearOperator) -> SemilinearOperator {
    op.dualize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn trivial_cases() {
        let f = Field::prime(3).unwrap();
        let z = SemilinearOperator::zero(&f, 3, Direction::Frobenius);
        assert_eq!(z.stable_rank(), StableRank { rank: 0, index: 1 });
        assert_eq!(z.twisted_iterate(1), Matrix::zeros(3, 3));
        let id = SemilinearOperator::identity(&f, 4, Direction::Frobenius);
        assert_eq!(id.stable_rank(), StableRank { rank: 4, index: 1 });
        assert_eq!(id.twisted_iterate(5), Matrix::identity(4));
        assert_eq!(id.dualize(), SemilinearOperator::identity(&f, 4, Direction::Cartier));
        assert_eq!(z.dualize().matrix(), z.matrix());
    }

    #[test]
    fn strictly_upper_triangular_is_nilpotent() {
        let f = Field::prime(5).unwrap();
        let m = Matrix::from_rows(vec![vec![Elem::ZERO, f.from_int(3)], vec![Elem::ZERO, Elem::ZERO]]);
        let op = SemilinearOperator::new(&f, m, Direction::Frobenius).unwrap();
        let n = op.is_nilpotent();
        assert!(n.nilpotent);
        assert!(n.index.unwrap() <= 2);
    }

    #[test]
    fn nonzero_scalar_over_f4_is_not_nilpotent() {
        let f = Field::new(2, 2).unwrap();
        for c in f.elements().skip(1) {
            let op = SemilinearOperator::new(&f, Matrix::from_rows(vec![vec![c]]), Direction::Frobenius).unwrap();
            assert_eq!(op.is_nilpotent(), Nilpotence { nilpotent: false, index: None });
        }
    }

    #[test]
    fn record_round_trip() {
        let f = Field::new(3, 2).unwrap();
        let m = Matrix::from_rows(vec![vec![f.element(4), f.element(0)], vec![f.element(8), f.element(1)]]);
        let op = SemilinearOperator::new(&f, m, Direction::Cartier).unwrap();
        assert_eq!(SemilinearOperator::from_record(&op.to_record()).unwrap(), op);
    }

    #[test]
    fn non_square_rejected() {
        let f = Field::prime(2).unwrap();
        assert!(SemilinearOperator::new(&f, Matrix::zeros(1, 2), Direction::Frobenius).is_err());
    }
}
