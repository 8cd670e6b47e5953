use std::fmt::Write;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

/// A CSV table with a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match &r[j] {
                    Cell::Int(v) => *v as f64,
                    Cell::Float(v) => *v,
                    Cell::Text(_) => f64::NAN,
                })
                .collect(),
        )
    }

    /// Header row, then one line per row; floats with 17 significant digits,
    /// LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                match c {
                    Cell::Int(v) => write!(out, "{v}").unwrap(),
                    Cell::Float(v) => write!(out, "{v:.16e}").unwrap(),
                    Cell::Text(s) => out.push_str(s),
                }
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_format() {
        let mut t = Table::new(&["N", "x"]);
        t.push(vec![3usize.into(), (1.0 / 3.0).into()]);
        assert_eq!(t.to_csv(), "N,x\n3,3.3333333333333331e-1\n");
        assert_eq!(t.column("x").unwrap(), vec![1.0 / 3.0]);
    }
}
