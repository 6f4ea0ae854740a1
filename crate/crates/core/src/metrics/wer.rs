//! Word error rate via minimal edit alignment.

use super::MetricError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WerBreakdown {
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
    pub wer: f64,
}

impl WerBreakdown {
    pub fn errors(&self) -> usize {
        self.substitutions + self.deletions + self.insertions
    }
}

/// Minimal-edit alignment with unit costs. Ties in the backtrace prefer
/// substitution over insertion over deletion.
pub fn wer<T: PartialEq>(reference: &[T], hypothesis: &[T]) -> Result<WerBreakdown, MetricError> {
    if reference.is_empty() {
        return Err(MetricError::EmptyReference);
    }
    let n = reference.len();
    let m = hypothesis.len();

    #[derive(Clone, Copy, PartialEq)]
    enum Op {
        Start,
        Keep,
        Substitute,
        Insert,
        Delete,
    }

    let mut cost = vec![vec![0usize; m + 1]; n + 1];
    let mut op = vec![vec![Op::Start; m + 1]; n + 1];
    for i in 1..=n {
        cost[i][0] = i;
        op[i][0] = Op::Delete;
    }
    for j in 1..=m {
        cost[0][j] = j;
        op[0][j] = Op::Insert;
    }
    for i in 1..=n {
        for j in 1..=m {
            let hit = reference[i - 1] == hypothesis[j - 1];
            let diag = cost[i - 1][j - 1] + usize::from(!hit);
            let ins = cost[i][j - 1] + 1;
            let del = cost[i - 1][j] + 1;
            // preference order on ties: substitution, insertion, deletion
            let (c, o) = if diag <= ins && diag <= del {
                (diag, if hit { Op::Keep } else { Op::Substitute })
            } else if ins <= del {
                (ins, Op::Insert)
            } else {
                (del, Op::Delete)
            };
            cost[i][j] = c;
            op[i][j] = o;
        }
    }

    let (mut i, mut j) = (n, m);
    let (mut subs, mut dels, mut inss) = (0usize, 0usize, 0usize);
    while i > 0 || j > 0 {
        match op[i][j] {
            Op::Keep => {
                i -= 1;
                j -= 1;
            }
            Op::Substitute => {
                subs += 1;
                i -= 1;
                j -= 1;
            }
            Op::Insert => {
                inss += 1;
                j -= 1;
            }
            Op::Delete => {
                dels += 1;
                i -= 1;
            }
            Op::Start => unreachable!("backtrace escaped the table"),
        }
    }

    Ok(WerBreakdown {
        substitutions: subs,
        deletions: dels,
        insertions: inss,
        wer: (subs + dels + inss) as f64 / n as f64,
    })
}
