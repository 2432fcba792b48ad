//! Twisted linear algebra over F_q.

mod matrix;
mod operator;

pub use matrix::Matrix;
pub use operator::{
    dualize, is_nilpotent, stable_rank, twisted_iterate, Direction, Nilpotence, OperatorRecord, SemilinearOperator,
    StableRank,
};
