use kmdual::coxeter::format_word;
use kmdual::LaurentPoly;
use serde_json::Value;

use crate::args::Format;

/// Table cell with plain and LaTeX renderings.
#[derive(Clone, Debug)]
pub struct Cell {
    plain: String,
    latex: String,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        let plain = s.into();
        let latex = escape_latex(&plain);
        Cell { plain, latex }
    }

    pub fn int(n: impl ToString) -> Self {
        let s = n.to_string();
        Cell { latex: format!("${s}$"), plain: s }
    }

    pub fn word(w: &[usize]) -> Self {
        let latex = if w.is_empty() {
            "$e$".to_string()
        } else {
            format!("${}$", w.iter().map(|s| format!("s_{{{s}}}")).collect::<String>())
        };
        Cell { plain: format_word(w), latex }
    }

    pub fn poly(p: &LaurentPoly, var: &str) -> Self {
        Cell { plain: p.render(var), latex: format!("${}$", p.render_latex(var)) }
    }
}

fn escape_latex(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '_' | '%' | '&' | '#' | '$' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            _ => out.push(c),
        }
    }
    out
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("write to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.plain.as_str())).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
    }

    pub fn to_latex(&self) -> String {
        let mut out = format!("\\begin{{tabular}}{{{}}}\n\\hline\n", "l".repeat(self.headers.len()));
        let header: Vec<String> = self.headers.iter().map(|h| escape_latex(h)).collect();
        out.push_str(&format!("{} \\\\\n\\hline\n", header.join(" & ")));
        for row in &self.rows {
            let cells: Vec<&str> = row.iter().map(|c| c.latex.as_str()).collect();
            out.push_str(&format!("{} \\\\\n", cells.join(" & ")));
        }
        out.push_str("\\hline\n\\end{tabular}\n");
        out
    }
}

/// A command's result: its JSON document and tabular view.
#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub table: Table,
    /// Format used regardless of the command-line flags.
    pub forced: Option<Format>,
}

impl Report {
    pub fn new(json: Value, table: Table) -> Self {
        Report { json, table, forced: None }
    }

    pub fn render(&self, format: Format) -> String {
        match self.forced.unwrap_or(format) {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.table.to_csv(),
            Format::Latex => self.table.to_latex(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["w", "P_w", "n"]);
        t.push(vec![Cell::word(&[0, 1]), Cell::poly(&LaurentPoly::from_terms([(-1, 1), (2, 3)]), "v"), Cell::int(2)]);
        t.push(vec![Cell::word(&[]), Cell::text("a,b"), Cell::int(-1)]);
        t
    }

    #[test]
    fn csv_quotes_fields() {
        assert_eq!(sample().to_csv(), "w,P_w,n\ns0s1,3v^2 + v^-1,2\ne,\"a,b\",-1\n");
    }

    #[test]
    fn latex_tabular() {
        let tex = sample().to_latex();
        assert!(tex.starts_with("\\begin{tabular}{lll}\n\\hline\nw & P\\_w & n \\\\\n"));
        assert!(tex.contains("$s_{0}s_{1}$ & $3v^{2} + v^{-1}$ & $2$ \\\\\n"));
        assert!(tex.ends_with("\\end{tabular}\n"));
    }
}
