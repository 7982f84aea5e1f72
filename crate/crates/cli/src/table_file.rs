//! Text format for Cayley tables.
//!
//! UTF-8 text; `#` starts a comment running to the end of the line. The first
//! token is the order `n`, followed by `n * n` whitespace-separated integers
//! in `0..n`, row-major: row `i` lists `i∘0 … i∘(n-1)`.

use std::fmt::Write as _;
use std::path::Path;

use semicover::table::{TableError, MAX_ORDER};
use semicover::CayleyTable;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TableFileError {
    #[error("{line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

fn tokens(input: &str) -> impl Iterator<Item = Token<'_>> {
    input.lines().enumerate().flat_map(|(l, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let mut out = Vec::new();
        let mut start: Option<usize> = None;
        for (i, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push(Token {
                        text: &content[s..i],
                        line: l + 1,
                        col: content[..s].chars().count() + 1,
                    });
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        out
    })
}

fn syntax(tok: &Token<'_>, message: String) -> TableFileError {
    TableFileError::Syntax {
        line: tok.line,
        col: tok.col,
        message,
    }
}

pub fn parse_table(input: &str) -> Result<CayleyTable, TableFileError> {
    let mut toks = tokens(input);
    let first = toks.next().ok_or(TableFileError::Syntax {
        line: 1,
        col: 1,
        message: "missing order".into(),
    })?;
    let order: usize = first
        .text
        .parse()
        .map_err(|_| syntax(&first, format!("invalid order `{}`", first.text)))?;
    if order == 0 {
        return Err(syntax(&first, "order must be positive".into()));
    }
    if order > MAX_ORDER {
        return Err(syntax(&first, format!("order {order} exceeds the maximum {MAX_ORDER}")));
    }
    let mut products = Vec::with_capacity(order * order);
    let mut last = (first.line, first.col);
    for tok in toks {
        if products.len() == order * order {
            return Err(syntax(&tok, format!("unexpected extra entry `{}`", tok.text)));
        }
        let v: usize = tok
            .text
            .parse()
            .map_err(|_| syntax(&tok, format!("invalid entry `{}`", tok.text)))?;
        if v >= order {
            let p = products.len();
            return Err(syntax(
                &tok,
                format!("entry {}*{} = {v} is outside 0..{order}", p / order, p % order),
            ));
        }
        products.push(v);
        last = (tok.line, tok.col);
    }
    if products.len() < order * order {
        return Err(TableFileError::Syntax {
            line: last.0,
            col: last.1,
            message: format!("expected {} entries, found {}", order * order, products.len()),
        });
    }
    Ok(CayleyTable::new(order, products)?)
}

pub fn read_table(path: &Path) -> Result<CayleyTable, TableFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| TableFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_table(&text)
}

pub fn format_table(table: &CayleyTable, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let width = (table.order().saturating_sub(1)).to_string().len();
    let _ = writeln!(out, "{}", table.order());
    for row in table.rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}
