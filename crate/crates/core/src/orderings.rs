//! Row and column orderings of a partially filled array.
//!
//! An ordering of a row is a cyclic sequence of its filled entries. The row
//! ordering `ω_r` is the permutation of `E(A)` sending each entry to its
//! successor in its row's cycle, and `ω_c` does the same for columns. Entries
//! of a valid (quasi-)Heffter array are pairwise distinct, so both maps are
//! stored as permutations of entry values.

use thiserror::Error;

use crate::algebra::{Element, FieldSpec};
use crate::heffter::PartiallyFilledArray;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderingError {
    #[error("array is not totally filled")]
    NotTotallyFilled,
    #[error("ell = {ell} must be smaller than the row count {m}")]
    BadEll { ell: usize, m: usize },
    #[error("entry {0} occurs more than once in the array")]
    DuplicateEntry(Element),
    #[error("{line} ordering does not permute exactly the entries of that line")]
    DomainMismatch { line: String },
}

/// Cyclic orderings of every row and every column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderingPair {
    q: usize,
    entries: Vec<Element>,
    /// value -> position in `entries`
    slot: Vec<Option<u32>>,
    row_orders: Vec<Vec<Element>>,
    col_orders: Vec<Vec<Element>>,
    omega_r: Permutation,
    omega_r_inv: Permutation,
    omega_c: Permutation,
}

impl OrderingPair {
    /// Orderings given by explicit cyclic sequences per row and column. Each
    /// sequence must list exactly the filled entries of its line.
    pub fn new(
        array: &PartiallyFilledArray,
        row_orders: Vec<Vec<Element>>,
        col_orders: Vec<Vec<Element>>,
    ) -> Result<Self, OrderingError> {
        let q = array.field().q() as usize;
        let entries: Vec<Element> = array.entries().map(|(_, x)| x).collect();
        let mut slot = vec![None; q];
        for (i, &x) in entries.iter().enumerate() {
            if slot[x.index()].replace(i as u32).is_some() {
                return Err(OrderingError::DuplicateEntry(x));
            }
        }
        if row_orders.len() != array.rows() || col_orders.len() != array.cols() {
            return Err(OrderingError::DomainMismatch { line: "array".into() });
        }
        let cycles = |orders: &[Vec<Element>], expected: &dyn Fn(usize) -> Vec<Element>, kind: &str| {
            let mut out = Vec::with_capacity(orders.len());
            for (i, order) in orders.iter().enumerate() {
                let mut got = order.clone();
                let mut want = expected(i);
                got.sort();
                want.sort();
                if got != want {
                    return Err(OrderingError::DomainMismatch { line: format!("{kind} {i}") });
                }
                out.push(order.iter().map(|x| slot[x.index()].expect("entry")).collect::<Vec<u32>>());
            }
            Ok(out)
        };
        let row_cycles = cycles(&row_orders, &|r| array.row_entries(r), "row")?;
        let col_cycles = cycles(&col_orders, &|c| array.col_entries(c), "column")?;
        let n = entries.len();
        let omega_r = Permutation::from_cycles(n, &row_cycles).expect("rows partition E(A)");
        let omega_c = Permutation::from_cycles(n, &col_cycles).expect("columns partition E(A)");
        let omega_r_inv = omega_r.inverse();
        Ok(OrderingPair { q, entries, slot, row_orders, col_orders, omega_r, omega_r_inv, omega_c })
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    pub fn contains(&self, x: Element) -> bool {
        self.slot.get(x.index()).is_some_and(Option::is_some)
    }

    pub fn row_orders(&self) -> &[Vec<Element>] {
        &self.row_orders
    }

    pub fn col_orders(&self) -> &[Vec<Element>] {
        &self.col_orders
    }

    /// `ω_r(x)` for an entry `x`.
    pub fn omega_r(&self, x: Element) -> Option<Element> {
        self.via(&self.omega_r, x)
    }

    /// `ω_c(x)` for an entry `x`.
    pub fn omega_c(&self, x: Element) -> Option<Element> {
        self.via(&self.omega_c, x)
    }

    /// `ω_r^{-1}(x)` for an entry `x`.
    pub fn omega_r_inv(&self, x: Element) -> Option<Element> {
        self.via(&self.omega_r_inv, x)
    }

    /// Length of the row cycle containing `x`.
    pub fn row_len(&self, x: Element) -> Option<usize> {
        self.row_orders.iter().find(|r| r.contains(&x)).map(Vec::len)
    }

    /// Length of the column cycle containing `x`.
    pub fn col_len(&self, x: Element) -> Option<usize> {
        self.col_orders.iter().find(|c| c.contains(&x)).map(Vec::len)
    }

    fn via(&self, perm: &Permutation, x: Element) -> Option<Element> {
        let i = self.slot.get(x.index()).copied().flatten()?;
        Some(self.entries[perm.apply(i) as usize])
    }

    /// `ω_c ∘ ω_r` as a permutation of entry positions.
    pub fn composition(&self) -> Permutation {
        self.omega_c.compose(&self.omega_r)
    }

    /// Compatible when `ω_c ∘ ω_r` is a single cycle through all of `E(A)`.
    pub fn is_compatible(&self) -> bool {
        let comp = self.composition();
        comp.is_empty() || comp.cycle_of(0).len() == comp.len()
    }

    /// Both orderings simple: every row and column cycle has distinct partial
    /// sums when read from its stored starting point.
    pub fn is_simple(&self, field: &FieldSpec) -> bool {
        self.row_orders.iter().chain(&self.col_orders).all(|o| is_simple(field, o))
    }

    /// `ω_r` as a permutation of the field's elements, fixing non-entries.
    pub fn omega_r_on_field(&self) -> Permutation {
        self.lift(&self.omega_r)
    }

    /// `ω_c` as a permutation of the field's elements, fixing non-entries.
    pub fn omega_c_on_field(&self) -> Permutation {
        self.lift(&self.omega_c)
    }

    fn lift(&self, perm: &Permutation) -> Permutation {
        let mut images: Vec<u32> = (0..self.q as u32).collect();
        for (i, x) in self.entries.iter().enumerate() {
            images[x.index()] = self.entries[perm.apply(i as u32) as usize].value();
        }
        Permutation::from_images(images).expect("lift of a permutation")
    }
}

/// Natural orderings: every column top to bottom; rows `0..m-ell` left to
/// right and the last `ell` rows right to left.
pub fn natural_orderings(array: &PartiallyFilledArray, ell: usize) -> Result<OrderingPair, OrderingError> {
    if !array.is_totally_filled() {
        return Err(OrderingError::NotTotallyFilled);
    }
    let m = array.rows();
    if ell >= m {
        return Err(OrderingError::BadEll { ell, m });
    }
    let rows = (0..m)
        .map(|r| {
            let mut row = array.row_entries(r);
            if r >= m - ell {
                row.reverse();
            }
            row
        })
        .collect();
    let cols = (0..array.cols()).map(|c| array.col_entries(c)).collect();
    OrderingPair::new(array, rows, cols)
}

/// An ordering is simple when its partial sums are pairwise distinct.
pub fn is_simple(field: &FieldSpec, ordering: &[Element]) -> bool {
    let mut seen = vec![false; field.q() as usize];
    let mut s = Element::ZERO;
    for &t in ordering {
        s = field.add(s, t);
        if std::mem::replace(&mut seen[s.index()], true) {
            return false;
        }
    }
    true
}

/// Globally simple: the natural left-to-right order of each row and the
/// top-to-bottom order of each column are simple.
pub fn check_globally_simple(array: &PartiallyFilledArray) -> bool {
    let f = array.field();
    (0..array.rows()).all(|r| is_simple(f, &array.row_entries(r)))
        && (0..array.cols()).all(|c| is_simple(f, &array.col_entries(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heffter::build_rank_one_canonical;

    fn example_array() -> PartiallyFilledArray {
        build_rank_one_canonical(&FieldSpec::prime(31).unwrap(), 3, 5).unwrap()
    }

    fn els(v: &[u32]) -> Vec<Element> {
        v.iter().map(|&x| Element(x)).collect()
    }

    #[test]
    fn natural_orderings_with_ell_zero() {
        let pair = natural_orderings(&example_array(), 0).unwrap();
        assert_eq!(pair.omega_r(Element(1)), Some(Element(2)));
        assert_eq!(pair.omega_r(Element(16)), Some(Element(1)));
        assert_eq!(pair.omega_c(Element(28)), Some(Element(16)));
        assert_eq!(pair.omega_r_inv(Element(1)), Some(Element(16)));
        assert_eq!(pair.omega_r(Element(3)), None);
    }

    #[test]
    fn ell_reverses_trailing_rows() {
        let pair = natural_orderings(&example_array(), 1).unwrap();
        assert_eq!(pair.row_orders()[2], els(&[28, 14, 7, 19, 25]));
        assert_eq!(pair.omega_r(Element(25)), Some(Element(28)));
        assert_eq!(pair.omega_r(Element(14)), Some(Element(7)));
        assert_eq!(natural_orderings(&example_array(), 3), Err(OrderingError::BadEll { ell: 3, m: 3 }));
    }

    #[test]
    fn partial_sum_simplicity() {
        let f = FieldSpec::prime(31).unwrap();
        assert!(is_simple(&f, &els(&[1, 2, 4, 8, 16])));
        assert!(!is_simple(&f, &els(&[1, 30, 2, 29])));
        assert!(is_simple(&f, &els(&[7])));
    }

    #[test]
    fn globally_simple_arrays() {
        assert!(check_globally_simple(&example_array()));
        let f43 = FieldSpec::prime(43).unwrap();
        assert!(check_globally_simple(&build_rank_one_canonical(&f43, 3, 7).unwrap()));

        // every reordering of a row of A_{3,5} stays simple, so use A_{3,11}
        let f67 = FieldSpec::prime(67).unwrap();
        let mut a = build_rank_one_canonical(&f67, 3, 11).unwrap();
        assert_eq!(a.row_entries(0), els(&[1, 9, 14, 59, 62, 22, 64, 40, 25, 24, 15]));
        assert!(check_globally_simple(&a));
        for (c, x) in [1, 9, 14, 59, 62, 40, 25, 15, 22, 64, 24].into_iter().enumerate() {
            a.set(0, c, Some(Element(x)));
        }
        assert!(!check_globally_simple(&a));
    }

    #[test]
    fn compatibility() {
        let pair = natural_orderings(&example_array(), 0).unwrap();
        assert!(pair.is_compatible());
        assert_eq!(pair.composition().cycles().len(), 1);

        // 3×3: gcd(3 - 0, 3) = 3; the composition splits into three cycles
        let f = FieldSpec::prime(19).unwrap();
        let a = PartiallyFilledArray::filled(f, &[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]).unwrap();
        let pair = natural_orderings(&a, 0).unwrap();
        assert!(!pair.is_compatible());
        assert_eq!(pair.composition().cycles().len(), 3);

        let f = FieldSpec::prime(11).unwrap();
        let row = PartiallyFilledArray::filled(f, &[vec![1, 2, 3, 4, 5]]).unwrap();
        assert!(natural_orderings(&row, 0).unwrap().is_compatible());
    }

    #[test]
    fn compatibility_ignores_labels() {
        // same shape, different values: the answer depends only on positions
        let f = FieldSpec::prime(31).unwrap();
        let a = PartiallyFilledArray::filled(
            f,
            &[vec![3, 6, 9, 12, 15], vec![18, 21, 24, 27, 30], vec![2, 5, 8, 11, 14]],
        )
        .unwrap();
        for ell in 0..3 {
            assert_eq!(
                natural_orderings(&a, ell).unwrap().is_compatible(),
                natural_orderings(&example_array(), ell).unwrap().is_compatible()
            );
        }
    }

    #[test]
    fn explicit_orderings_must_match_lines() {
        let a = example_array();
        let mut rows: Vec<Vec<Element>> = (0..3).map(|r| a.row_entries(r)).collect();
        let cols: Vec<Vec<Element>> = (0..5).map(|c| a.col_entries(c)).collect();
        rows[0][0] = Element(5);
        assert!(matches!(OrderingPair::new(&a, rows, cols), Err(OrderingError::DomainMismatch { .. })));

        let mut dup = a.clone();
        dup.set(0, 0, Some(Element(2)));
        assert_eq!(natural_orderings(&dup, 0), Err(OrderingError::DuplicateEntry(Element(2))));

        let mut holey = a.clone();
        holey.set(1, 1, None);
        assert_eq!(natural_orderings(&holey, 0), Err(OrderingError::NotTotallyFilled));
    }
}
