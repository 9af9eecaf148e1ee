use std::io::Write;

use crate::error::Result;

/// Numeric table written as CSV with `#` comment lines on top.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    /// Values of the named column, if present.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// Comments, header line, then one line per row with 17 significant
    /// digits. Infinite values are written as `inf`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        for c in &self.comments {
            writeln!(w, "# {c}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        let mut line = String::new();
        for row in &self.rows {
            line.clear();
            for (k, v) in row.iter().enumerate() {
                if k > 0 {
                    line.push(',');
                }
                push_number(&mut line, *v);
            }
            writeln!(w, "{line}")?;
        }
        w.flush()?;
        Ok(())
    }
}

fn push_number(out: &mut String, v: f64) {
    use std::fmt::Write as _;
    if v.is_infinite() {
        out.push_str(if v > 0.0 { "inf" } else { "-inf" });
    } else {
        // sign of zero carries no information here
        let v = if v == 0.0 { 0.0 } else { v };
        write!(out, "{v:.16e}").expect("writing to a String");
    }
}
