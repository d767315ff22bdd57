//! Delimited tables with fixed significant-digit formatting.

use std::io::{self, Write};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Tsv,
}

impl Format {
    fn separator(self) -> &'static str {
        match self {
            Format::Csv => ",",
            Format::Tsv => "\t",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_sig(*x, 9),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn write_to<W: Write + ?Sized>(&self, w: &mut W, format: Format) -> io::Result<()> {
        let sep = format.separator();
        writeln!(w, "{}", self.header.join(sep))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            writeln!(w, "{}", cells.join(sep))?;
        }
        Ok(())
    }

    pub fn render(&self, format: Format) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf, format).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 output")
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

/// `printf("%.{digits}g")`: shortest of fixed or exponent notation with
/// trailing zeros removed.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let p = digits.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (1.0, "1"),
            (0.25, "0.25"),
            (1.0 / 3.0, "0.333333333"),
            (2.0 / 3.0, "0.666666667"),
            (123456789.0, "123456789"),
            (1234567890.0, "1.23456789e+09"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (-0.5, "-0.5"),
            (0.1 + 0.2, "0.3"),
            (9.9999999999, "10"),
            (1e100, "1e+100"),
        ];
        for (x, want) in cases {
            assert_eq!(format_sig(x, 9), want, "{x}");
        }
        assert_eq!(format_sig(f64::NAN, 9), "nan");
        assert_eq!(format_sig(-0.0, 9), "0");
    }

    #[test]
    fn table_layout() {
        let t = Table {
            header: vec!["a".into(), "b".into()],
            rows: vec![vec![Cell::Num(0.5), Cell::Bool(true)], vec![Cell::Num(1.0), Cell::Text("x".into())]],
        };
        assert_eq!(t.render(Format::Csv), "a,b\n0.5,true\n1,x\n");
        assert_eq!(t.render(Format::Tsv), "a\tb\n0.5\ttrue\n1\tx\n");
    }
}
