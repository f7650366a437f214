//! Incremental sparse echelon form over GF(q).

use std::collections::{BTreeMap, HashMap};

use crate::field::{FieldElem, FieldSpec};

/// A basis kept in echelon form: each stored row is monic at its pivot
/// column and zero to the left of it. Rows are sparse and sorted by column.
#[derive(Debug, Clone)]
pub struct FqEchelon {
    field: FieldSpec,
    rows: HashMap<usize, Vec<(usize, FieldElem)>>,
}

impl FqEchelon {
    pub fn new(field: FieldSpec) -> Self {
        FqEchelon { field, rows: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Eliminates pivots from `v` until its leading column has none.
    /// Returns the residue, empty when `v` lies in the span.
    fn reduce(&self, input: impl IntoIterator<Item = (usize, FieldElem)>) -> BTreeMap<usize, FieldElem> {
        let f = &self.field;
        let mut v: BTreeMap<usize, FieldElem> = BTreeMap::new();
        for (c, x) in input {
            accumulate(f, &mut v, c, x);
        }
        while let Some((&c, &x)) = v.first_key_value() {
            let Some(row) = self.rows.get(&c) else { break };
            let factor = f.neg(x);
            for &(rc, rx) in row {
                accumulate(f, &mut v, rc, f.mul(factor, rx));
            }
        }
        v
    }

    pub fn contains(&self, v: impl IntoIterator<Item = (usize, FieldElem)>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the basis; returns whether the rank grew.
    pub fn insert(&mut self, v: impl IntoIterator<Item = (usize, FieldElem)>) -> bool {
        let residue = self.reduce(v);
        let Some((&lead, &x)) = residue.first_key_value() else {
            return false;
        };
        let inv = self.field.inv(x).expect("nonzero leading entry");
        let row = residue.into_iter().map(|(c, y)| (c, self.field.mul(inv, y))).collect();
        self.rows.insert(lead, row);
        true
    }
}

fn accumulate(f: &FieldSpec, v: &mut BTreeMap<usize, FieldElem>, c: usize, x: FieldElem) {
    if x.is_zero() {
        return;
    }
    let e = v.entry(c).or_insert(FieldElem::ZERO);
    *e = f.add(*e, x);
    if e.is_zero() {
        v.remove(&c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_membership_over_gf4() {
        let f = FieldSpec::with_order(4).unwrap();
        let a = f.elem(2);
        let mut e = FqEchelon::new(f.clone());
        assert!(e.insert([(0, FieldElem::ONE), (1, a)]));
        assert!(e.insert([(1, FieldElem::ONE), (2, FieldElem::ONE)]));
        // a*(row0) + row1 combination
        let comb = [(0, a), (1, f.add(f.mul(a, a), FieldElem::ONE)), (2, FieldElem::ONE)];
        assert!(e.contains(comb));
        assert!(!e.insert(comb));
        assert!(!e.contains([(2, FieldElem::ONE)]));
        assert_eq!(e.rank(), 2);
    }
}
