//! Plain-text tensor format.
//!
//! Line 1 is the header `m n nnz`; each of the following `nnz` data lines is
//! `i_1 i_2 … i_m value` with 1-based indices and a decimal or scientific
//! value. Lines starting with `#` and blank lines are ignored. Duplicate
//! tuples are summed. Values are written with Rust's shortest round-trip
//! formatting, so write-then-read reproduces a tensor entry-identically.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::scalar::Scalar;
use crate::tensor::{SparseTensor, TensorError};

#[derive(Error, Debug)]
pub enum IoError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: TensorError,
    },
}

fn malformed(line: usize, message: impl Into<String>) -> IoError {
    IoError::Malformed {
        line,
        message: message.into(),
    }
}

/// Reads a tensor from the text format.
pub fn read_tensor<T: Scalar, R: Read>(reader: R) -> Result<SparseTensor<T>, IoError> {
    let buf = BufReader::new(reader);
    let mut header: Option<(usize, usize, usize, usize)> = None; // m, n, nnz, line
    let mut entries: Vec<(Vec<usize>, T)> = Vec::new();
    let mut data_lines = 0usize;
    for (lineno, line) in buf.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        match header {
            None => {
                if tokens.len() != 3 {
                    return Err(malformed(lineno, "header must be `m n nnz`"));
                }
                let m: usize = tokens[0]
                    .parse()
                    .map_err(|_| malformed(lineno, "bad order in header"))?;
                let n: usize = tokens[1]
                    .parse()
                    .map_err(|_| malformed(lineno, "bad dimension in header"))?;
                let nnz: usize = tokens[2]
                    .parse()
                    .map_err(|_| malformed(lineno, "bad entry count in header"))?;
                header = Some((m, n, nnz, lineno));
            }
            Some((m, n, nnz, _)) => {
                if data_lines == nnz {
                    return Err(malformed(
                        lineno,
                        format!("more than the {nnz} entries declared in the header"),
                    ));
                }
                if tokens.len() != m + 1 {
                    return Err(malformed(
                        lineno,
                        format!("expected {m} indices and a value, got {} tokens", tokens.len()),
                    ));
                }
                let mut idx = Vec::with_capacity(m);
                for tok in &tokens[..m] {
                    let i: usize = tok
                        .parse()
                        .map_err(|_| malformed(lineno, format!("bad index `{tok}`")))?;
                    if i < 1 || i > n {
                        return Err(malformed(
                            lineno,
                            format!("index {i} outside 1..={n}"),
                        ));
                    }
                    idx.push(i - 1);
                }
                let value: T = tokens[m]
                    .parse()
                    .map_err(|_| malformed(lineno, format!("bad value `{}`", tokens[m])))?;
                entries.push((idx, value));
                data_lines += 1;
            }
        }
    }
    let (m, n, nnz, header_line) = header.ok_or_else(|| malformed(1, "missing header"))?;
    if data_lines != nnz {
        return Err(malformed(
            header_line,
            format!("header declares {nnz} entries but {data_lines} were found"),
        ));
    }
    SparseTensor::from_entries(m, n, entries).map_err(|source| IoError::Invalid {
        line: header_line,
        source,
    })
}

pub fn read_tensor_file<T: Scalar>(path: impl AsRef<Path>) -> Result<SparseTensor<T>, IoError> {
    read_tensor(File::open(path)?)
}

/// Writes a tensor in the text format with entries in lexicographic order.
pub fn write_tensor<T: Scalar, W: Write>(t: &SparseTensor<T>, writer: W) -> Result<(), IoError> {
    let mut w = BufWriter::new(writer);
    writeln!(w, "{} {} {}", t.order(), t.dim(), t.nnz())?;
    for (idx, v) in t.iter() {
        for i in idx {
            write!(w, "{} ", i + 1)?;
        }
        writeln!(w, "{v}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_tensor_file<T: Scalar>(
    t: &SparseTensor<T>,
    path: impl AsRef<Path>,
) -> Result<(), IoError> {
    write_tensor(t, File::create(path)?)
}
