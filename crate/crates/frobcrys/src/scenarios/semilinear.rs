use frobcrys_core::fparith::{Elem, Field};
use frobcrys_core::semilinalg::{Direction, Matrix, SemilinearOperator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{field, input, operator_json, start, RunOptions};
use crate::config::common::one;
use crate::error::{CliResult, Context};
use crate::report::Report;

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct Params {
    p: u64,
    #[serde(default = "one")]
    e: u32,
    #[serde(default = "frobenius")]
    direction: String,
    /// Rows of packed field elements in [0, p^e).
    #[serde(default)]
    matrix: Option<Vec<Vec<u64>>>,
    #[serde(default)]
    random: Option<RandomParams>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RandomParams {
    count: usize,
    max_dim: usize,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct Expect {
    nilpotent: Option<bool>,
    index: Option<u32>,
    stable_rank: Option<usize>,
    oracle_agrees: Option<bool>,
}

fn frobenius() -> String {
    "frobenius".into()
}

/// Iterates the operator on each basis vector up to dim steps: (rank of the
/// dim-th iterate, least e >= 1 with a zero iterate).
pub fn brute_force(op: &SemilinearOperator) -> (usize, Option<u32>) {
    let n = op.dim();
    let steps = n.max(1) as u32;
    let mut vecs: Vec<Vec<Elem>> = (0..n)
        .map(|j| {
            let mut v = vec![Elem::ZERO; n];
            v[j] = Elem::ONE;
            v
        })
        .collect();
    let mut first_zero = None;
    let mut rank = n;
    for e in 1..=steps {
        vecs = vecs.iter().map(|v| op.apply(v)).collect();
        let m = Matrix::from_columns(n, &vecs);
        if first_zero.is_none() && m.is_zero() {
            first_zero = Some(e);
        }
        if e == n as u32 || n == 0 {
            rank = m.rank(op.field());
        }
    }
    (rank, first_zero)
}

fn random_operator(rng: &mut ChaCha8Rng, f: &Field, max_dim: usize) -> SemilinearOperator {
    let dim = rng.gen_range(1..=max_dim.max(1));
    let data = (0..dim * dim)
        .map(|_| if rng.gen_bool(0.5) { Elem::ZERO } else { f.element(rng.gen_range(0..f.order())) })
        .collect();
    let dir = if rng.gen_bool(0.5) { Direction::Frobenius } else { Direction::Cartier };
    SemilinearOperator::new(f, Matrix::from_row_major(dim, dim, data), dir).expect("square")
}

pub fn run(text: &str, opts: RunOptions) -> CliResult<Report> {
    let (doc, mut report) = start::<Params, Expect>(text, opts)?;
    let p = &doc.params;
    let f = field(p.p, p.e)?;
    let expect = doc.expect.unwrap_or(Expect { nilpotent: None, index: None, stable_rank: None, oracle_agrees: None });
    report.provenance("example", "semilinear operators: nilpotence and stable rank of twisted iterates");
    let direction =
        Direction::from_name(&p.direction).ok_or_else(|| input("params.direction", "expected frobenius or cartier"))?;
    if p.matrix.is_none() && p.random.is_none() {
        return Err(input("params", "give a matrix, a random block, or both"));
    }
    if let Some(rows) = &p.matrix {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(input(&format!("params.matrix[{i}]"), "matrix must be square"));
            }
            for (j, &x) in row.iter().enumerate() {
                if x >= f.order() {
                    return Err(input(&format!("params.matrix[{i}][{j}]"), "entry outside [0, p^e)"));
                }
                data.push(f.element(x));
            }
        }
        let op = SemilinearOperator::new(&f, Matrix::from_row_major(n, n, data), direction).at("params.matrix")?;
        let nil = op.is_nilpotent();
        let sr = op.stable_rank();
        let (brute_rank, brute_index) = brute_force(&op);
        let agrees = brute_rank == sr.rank && brute_index == nil.index;
        report.verdict("nilpotent", nil.nilpotent);
        report.verdict("index", nil.index);
        report.verdict("stable_rank", sr.rank);
        report.verdict("stabilization_index", sr.index);
        report.verdict("iterate_ranks", op.iterate_ranks(op.dim() as u32 + 1));
        report.verdict("dual_nilpotent", op.dualize().is_nilpotent().nilpotent);
        report.verdict("oracle_agrees", agrees);
        report.witness("operator", operator_json(&op));
        report.witness("dual", operator_json(&op.dualize()));
        report.expect("nilpotent", expect.nilpotent, nil.nilpotent);
        report.expect("index", expect.index, nil.index);
        report.expect("stable_rank", expect.stable_rank, sr.rank);
        if p.random.is_none() {
            report.expect("oracle_agrees", expect.oracle_agrees, agrees);
        }
    }
    if let Some(r) = &p.random {
        let seed = doc.seed.unwrap_or(0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut nilpotent = 0;
        let mut disagreements = Vec::new();
        for k in 0..r.count {
            let op = random_operator(&mut rng, &f, r.max_dim);
            let (rank, index) = brute_force(&op);
            let nil = op.is_nilpotent();
            if nil.nilpotent {
                nilpotent += 1;
            }
            if rank != op.stable_rank().rank || index != nil.index {
                disagreements.push(json!({ "sample": k, "operator": operator_json(&op) }));
            }
        }
        report.verdict("random_samples", r.count);
        report.verdict("random_nilpotent", nilpotent);
        report.verdict("random_oracle_agrees", disagreements.is_empty());
        report.witness("random_disagreements", disagreements.clone());
        report.expect("oracle_agrees", expect.oracle_agrees, disagreements.is_empty());
    }
    Ok(report)
}
