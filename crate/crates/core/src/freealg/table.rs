use std::collections::BTreeMap;

use crate::grading::Grade;

use super::enumerate::visit_monomials;
use super::{AlgebraContext, FreeAlgError};

/// Sort key of a table entry: charge first, then grading, then degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TableKey {
    pub charge: u64,
    pub grade: Grade,
    pub degree: i64,
}

/// Dimensions of the free algebra per (charge, grading, degree), within cutoffs.
/// Absent keys have dimension zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PoincareTable {
    pub max_degree: i64,
    pub max_charge: u64,
    entries: BTreeMap<TableKey, u64>,
}

impl PoincareTable {
    pub fn dimension(&self, grade: &Grade, degree: i64, charge: u64) -> u64 {
        let key = TableKey { charge, grade: grade.clone(), degree };
        self.entries.get(&key).copied().unwrap_or(0)
    }

    /// Nonzero entries in sorted order.
    pub fn entries(&self) -> impl Iterator<Item = (&TableKey, u64)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn poincare_table(ctx: &AlgebraContext, max_degree: i64, max_charge: u64) -> Result<PoincareTable, FreeAlgError> {
    let mut entries: BTreeMap<TableKey, u64> = BTreeMap::new();
    visit_monomials(ctx, max_degree, max_charge, |_, degree, charge, grade| {
        let key = TableKey { charge, grade: grade.clone(), degree };
        *entries.entry(key).or_default() += 1;
    })?;
    Ok(PoincareTable { max_degree, max_charge, entries })
}
