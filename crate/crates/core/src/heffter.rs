//! Partially filled arrays over the additive group of a finite field,
//! the Heffter and quasi-Heffter conditions, and the rank-one construction
//! `a[i][j] = ε^i · ξ^j` for odd coprime `m, n`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{gcd, AlgebraError, Element, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeffterError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("{which} = {value} has order {found}, expected {expected}")]
    WrongOrder { which: &'static str, value: Element, found: u64, expected: u64 },
    #[error("field order {q} is not 2*{m}*{n}+1")]
    GroupMismatch { q: u32, m: usize, n: usize },
    #[error("array is not totally filled")]
    NotTotallyFilled,
    #[error("constructed array failed validation: {0}")]
    ValidationFailed(String),
    #[error("array parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Row and column position of a cell, zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

/// An `m × n` grid of optional field elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartiallyFilledArray {
    field: FieldSpec,
    m: usize,
    n: usize,
    cells: Vec<Option<Element>>,
}

impl PartiallyFilledArray {
    /// An array from its rows. All rows must have the same length and every
    /// element must belong to `field`.
    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Option<Element>>>) -> Result<Self, HeffterError> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if m == 0 || n == 0 {
            return Err(HeffterError::BadParameters("array must have at least one row and column".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(HeffterError::BadParameters("rows have different lengths".into()));
        }
        let cells: Vec<Option<Element>> = rows.into_iter().flatten().collect();
        for x in cells.iter().flatten() {
            field.element(x.value() as u64)?;
        }
        Ok(PartiallyFilledArray { field, m, n, cells })
    }

    /// A totally filled array from integer encodings.
    pub fn filled(field: FieldSpec, rows: &[Vec<u32>]) -> Result<Self, HeffterError> {
        let rows = rows.iter().map(|r| r.iter().map(|&x| Some(Element(x))).collect()).collect();
        PartiallyFilledArray::from_rows(field, rows)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Option<Element> {
        self.cells[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Option<Element>) {
        self.cells[row * self.n + col] = value;
    }

    pub fn is_totally_filled(&self) -> bool {
        self.cells.iter().all(Option::is_some)
    }

    /// `E(A)`: filled entries in row-major order, with their cells.
    pub fn entries(&self) -> impl Iterator<Item = (Cell, Element)> + '_ {
        self.cells.iter().enumerate().filter_map(move |(i, x)| {
            x.map(|x| (Cell { row: i / self.n, col: i % self.n }, x))
        })
    }

    /// Filled entries of one row, left to right.
    pub fn row_entries(&self, row: usize) -> Vec<Element> {
        (0..self.n).filter_map(|c| self.get(row, c)).collect()
    }

    /// Filled entries of one column, top to bottom.
    pub fn col_entries(&self, col: usize) -> Vec<Element> {
        (0..self.m).filter_map(|r| self.get(r, col)).collect()
    }

    pub fn transpose(&self) -> PartiallyFilledArray {
        let rows = (0..self.n).map(|c| (0..self.m).map(|r| self.get(r, c)).collect()).collect();
        PartiallyFilledArray::from_rows(self.field.clone(), rows).expect("transpose keeps shape valid")
    }

    /// The fill counts `(h, k)` when every row holds `h` and every column `k`
    /// filled cells.
    pub fn shape(&self) -> Option<HeffterShape> {
        let h = self.row_entries(0).len();
        let k = self.col_entries(0).len();
        let uniform = (0..self.m).all(|r| self.row_entries(r).len() == h)
            && (0..self.n).all(|c| self.col_entries(c).len() == k);
        uniform.then_some(HeffterShape { m: self.m, n: self.n, h, k, v: self.field.q() as usize })
    }
}

/// Text format: the field header, then one line per row of whitespace
/// separated encodings, `-` for an empty cell.
impl fmt::Display for PartiallyFilledArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.field.header())?;
        for r in 0..self.m {
            let row: Vec<String> = (0..self.n)
                .map(|c| self.get(r, c).map_or_else(|| "-".to_string(), |x| x.to_string()))
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for PartiallyFilledArray {
    type Err = HeffterError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or(HeffterError::Parse { line: 1, msg: "missing field header".into() })?;
        let field: FieldSpec = header.trim().parse()?;
        let mut rows = Vec::new();
        for (i, line) in lines {
            let row = line
                .split_whitespace()
                .map(|tok| match tok {
                    "-" => Ok(None),
                    _ => tok
                        .parse::<u64>()
                        .map_err(|_| HeffterError::Parse { line: i + 1, msg: format!("bad token {tok:?}") })
                        .and_then(|v| Ok(Some(field.element(v)?))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        PartiallyFilledArray::from_rows(field, rows)
    }
}

/// Dimensions and fill counts of a (quasi-)Heffter array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HeffterShape {
    pub m: usize,
    pub n: usize,
    pub h: usize,
    pub k: usize,
    pub v: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    RowFillCount { row: usize, expected: usize, found: usize },
    ColumnFillCount { col: usize, expected: usize, found: usize },
    ZeroEntry { cell: Cell },
    /// Neither `value` nor its negative appears.
    Uncovered { value: Element },
    /// `value` arises more than once as `±x` for entries `x`.
    MultiplyCovered { value: Element, cells: Vec<Cell> },
    RowSum { row: usize, sum: Element },
    ColumnSum { col: usize, sum: Element },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RowFillCount { row, expected, found } => {
                write!(f, "row {row} has {found} filled cells, expected {expected}")
            }
            Violation::ColumnFillCount { col, expected, found } => {
                write!(f, "column {col} has {found} filled cells, expected {expected}")
            }
            Violation::ZeroEntry { cell } => write!(f, "cell ({}, {}) holds 0", cell.row, cell.col),
            Violation::Uncovered { value } => write!(f, "±{value} never appears"),
            Violation::MultiplyCovered { value, cells } => {
                write!(f, "{value} is covered {} times", cells.len())
            }
            Violation::RowSum { row, sum } => write!(f, "row {row} sums to {sum}"),
            Violation::ColumnSum { col, sum } => write!(f, "column {col} sums to {sum}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub shape: Option<HeffterShape>,
    /// Present only for the full Heffter check.
    pub row_sums: Vec<Element>,
    pub col_sums: Vec<Element>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn summary(&self) -> String {
        if self.ok {
            return "ok".to_string();
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        parts.join("; ")
    }
}

/// Checks constant row/column fill counts and that `±x` over the entries
/// covers every nonzero group element exactly once.
pub fn validate_quasi_heffter(a: &PartiallyFilledArray) -> ValidationReport {
    let mut violations = Vec::new();
    let h = a.row_entries(0).len();
    let k = a.col_entries(0).len();
    for row in 0..a.rows() {
        let found = a.row_entries(row).len();
        if found != h {
            violations.push(Violation::RowFillCount { row, expected: h, found });
        }
    }
    for col in 0..a.cols() {
        let found = a.col_entries(col).len();
        if found != k {
            violations.push(Violation::ColumnFillCount { col, expected: k, found });
        }
    }

    let field = a.field();
    let mut cover: Vec<Vec<Cell>> = vec![Vec::new(); field.q() as usize];
    for (cell, x) in a.entries() {
        if x == Element::ZERO {
            violations.push(Violation::ZeroEntry { cell });
            continue;
        }
        cover[x.index()].push(cell);
        cover[field.neg(x).index()].push(cell);
    }
    for value in field.units() {
        match cover[value.index()].len() {
            0 => violations.push(Violation::Uncovered { value }),
            1 => {}
            _ => violations.push(Violation::MultiplyCovered { value, cells: cover[value.index()].clone() }),
        }
    }

    ValidationReport {
        ok: violations.is_empty(),
        shape: a.shape(),
        row_sums: Vec::new(),
        col_sums: Vec::new(),
        violations,
    }
}

/// The quasi-Heffter check plus vanishing row and column sums.
pub fn validate_heffter(a: &PartiallyFilledArray) -> ValidationReport {
    let mut report = validate_quasi_heffter(a);
    let field = a.field();
    report.row_sums = (0..a.rows()).map(|r| field.sum(a.row_entries(r))).collect();
    report.col_sums = (0..a.cols()).map(|c| field.sum(a.col_entries(c))).collect();
    for (row, &sum) in report.row_sums.iter().enumerate() {
        if sum != Element::ZERO {
            report.violations.push(Violation::RowSum { row, sum });
        }
    }
    for (col, &sum) in report.col_sums.iter().enumerate() {
        if sum != Element::ZERO {
            report.violations.push(Violation::ColumnSum { col, sum });
        }
    }
    report.ok = report.violations.is_empty();
    report
}

/// Checks the parameter conditions of the rank-one construction: `m, n` odd,
/// coprime, at least 3, and `q = 2mn + 1`.
pub fn check_rank_one_parameters(field: &FieldSpec, m: usize, n: usize) -> Result<(), HeffterError> {
    if m < 3 || n < 3 {
        return Err(HeffterError::BadParameters(format!("m = {m} and n = {n} must both be at least 3")));
    }
    if m.is_multiple_of(2) || n.is_multiple_of(2) {
        return Err(HeffterError::BadParameters(format!("m = {m} and n = {n} must both be odd")));
    }
    if gcd(m as u64, n as u64) != 1 {
        return Err(HeffterError::BadParameters(format!("m = {m} and n = {n} are not coprime")));
    }
    if field.q() as u64 != 2 * m as u64 * n as u64 + 1 {
        return Err(HeffterError::GroupMismatch { q: field.q(), m, n });
    }
    Ok(())
}

/// Builds the rank-one array with cells `ε^i ξ^j` (zero-based `i, j`), where
/// `ξ` has order `n` and `ε` has order `m`. The result is checked against
/// the Heffter conditions before it is returned.
pub fn build_rank_one(
    field: &FieldSpec,
    m: usize,
    n: usize,
    xi: Element,
    eps: Element,
) -> Result<PartiallyFilledArray, HeffterError> {
    check_rank_one_parameters(field, m, n)?;
    for (which, value, expected) in [("xi", xi, n as u64), ("eps", eps, m as u64)] {
        let found = field.element_order(value)?;
        if found != expected {
            return Err(HeffterError::WrongOrder { which, value, found, expected });
        }
    }
    let rows: Vec<Vec<Option<Element>>> = (0..m)
        .map(|i| {
            let head = field.pow(eps, i as u64);
            (0..n).map(|j| Some(field.mul(head, field.pow(xi, j as u64)))).collect()
        })
        .collect();
    let array = PartiallyFilledArray::from_rows(field.clone(), rows)?;
    let report = validate_heffter(&array);
    if !report.ok {
        return Err(HeffterError::ValidationFailed(report.summary()));
    }
    Ok(array)
}

/// [`build_rank_one`] with the canonical generators: the smallest elements
/// of order `n` and `m`.
pub fn build_rank_one_canonical(field: &FieldSpec, m: usize, n: usize) -> Result<PartiallyFilledArray, HeffterError> {
    check_rank_one_parameters(field, m, n)?;
    let xi = field.find_element_of_order(n as u64)?;
    let eps = field.find_element_of_order(m as u64)?;
    build_rank_one(field, m, n, xi, eps)
}

/// True when every row is a scalar multiple of one vector, tested through
/// the vanishing of all 2×2 minors against the first row.
pub fn is_rank_one(a: &PartiallyFilledArray) -> Result<bool, HeffterError> {
    if !a.is_totally_filled() {
        return Err(HeffterError::NotTotallyFilled);
    }
    let f = a.field();
    let cell = |r, c| a.get(r, c).expect("totally filled");
    for i in 1..a.rows() {
        for j in 0..a.cols() {
            for jj in j + 1..a.cols() {
                let lhs = f.mul(cell(0, j), cell(i, jj));
                let rhs = f.mul(cell(0, jj), cell(i, j));
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// True when `values` are distinct and form the multiplicative subgroup of
/// order `values.len()`: they contain 1, are closed under products, and each
/// satisfies `x^len = 1`.
pub fn is_multiplicative_subgroup(field: &FieldSpec, values: &[Element]) -> bool {
    let mut member = vec![false; field.q() as usize];
    for &x in values {
        if x == Element::ZERO || member[x.index()] {
            return false;
        }
        member[x.index()] = true;
    }
    let order = values.len() as u64;
    member[1]
        && values.iter().all(|&x| field.pow(x, order) == Element::ONE)
        && values.iter().all(|&x| values.iter().all(|&y| member[field.mul(x, y).index()]))
}
