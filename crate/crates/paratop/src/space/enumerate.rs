//! Exhaustive enumeration of labeled topologies on small carriers.
//!
//! Labeled topologies on `n` points correspond bijectively to preorders:
//! reflexive, transitive relations encoded here as candidate
//! minimal-neighborhood rows. Every assignment of the `n(n-1)`
//! off-diagonal bits is scanned and kept when transitivity holds.

use super::{FiniteSpace, Point, PointSet, SpaceError, MAX_ENUMERATION};

const NAMES: [&str; MAX_ENUMERATION] = ["a", "b", "c", "d", "e"];

/// Iterator over every labeled topology on an `n`-point carrier, in a
/// fixed order (the enumeration index is stable across runs).
#[derive(Debug)]
pub struct SpaceEnumerator {
    n: usize,
    points: Vec<Point>,
    next_code: u64,
    limit: u64,
}

/// All labeled topologies on `{a, b, …}` with `n ≤ 5` points.
pub fn enumerate_spaces(n: usize) -> Result<SpaceEnumerator, SpaceError> {
    if n == 0 {
        return Err(SpaceError::EmptyCarrier);
    }
    if n > MAX_ENUMERATION {
        return Err(SpaceError::CarrierTooLarge {
            size: n,
            max: MAX_ENUMERATION,
        });
    }
    Ok(SpaceEnumerator {
        n,
        points: NAMES[..n].iter().map(Point::new).collect(),
        next_code: 0,
        limit: 1u64 << (n * (n - 1)),
    })
}

impl SpaceEnumerator {
    fn decode(&self, code: u64) -> Vec<PointSet> {
        let mut rows = Vec::with_capacity(self.n);
        let mut bit = 0;
        for x in 0..self.n {
            let mut row = PointSet::singleton(x);
            for y in 0..self.n {
                if y != x {
                    if code & (1u64 << bit) != 0 {
                        row.insert(y);
                    }
                    bit += 1;
                }
            }
            rows.push(row);
        }
        rows
    }

    fn transitive(rows: &[PointSet]) -> bool {
        rows.iter()
            .all(|&row| row.iter().all(|y| rows[y].is_subset(row)))
    }
}

impl Iterator for SpaceEnumerator {
    type Item = FiniteSpace;

    fn next(&mut self) -> Option<FiniteSpace> {
        while self.next_code < self.limit {
            let rows = self.decode(self.next_code);
            self.next_code += 1;
            if Self::transitive(&rows) {
                let space = FiniteSpace::build(self.points.clone(), rows)
                    .expect("reflexive transitive rows form a valid table");
                return Some(space);
            }
        }
        None
    }
}
