//! Partition codes on the command line: one block label per element,
//! separated by whitespace or commas.

use semicover::PartitionCode;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionArgError {
    #[error("invalid block label `{0}`")]
    BadLabel(String),
    #[error("partition code has {found} labels but the semigroup has order {order}")]
    WrongLength { order: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedCode {
    pub code: PartitionCode,
    /// The input was not in restricted-growth form and has been relabeled.
    pub normalized: bool,
}

pub fn parse_partition_code(text: &str, order: usize) -> Result<ParsedCode, PartitionArgError> {
    let labels = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| PartitionArgError::BadLabel(t.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if labels.len() != order {
        return Err(PartitionArgError::WrongLength {
            order,
            found: labels.len(),
        });
    }
    let raw = PartitionCode(labels);
    let code = raw.normalized();
    Ok(ParsedCode {
        normalized: code != raw,
        code,
    })
}
