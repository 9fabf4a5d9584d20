//! Vector stream readers for the text and `FDV1` binary formats.

use std::io::{BufRead, Read};

use super::CliError;

pub const BINARY_MAGIC: &[u8; 4] = b"FDV1";

/// One vector per line; fields split on whitespace or commas. Blank lines
/// and lines starting with `#` are skipped. Yields `(line_number, vector)`.
pub struct TextReader<R> {
    inner: R,
    line_no: usize,
    buf: String,
}

impl<R: BufRead> TextReader<R> {
    pub fn new(inner: R) -> Self {
        Self {
            inner,
            line_no: 0,
            buf: String::new(),
        }
    }
}

impl<R: BufRead> Iterator for TextReader<R> {
    type Item = Result<(usize, Vec<f64>), CliError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            match self.inner.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(CliError::Io(e))),
            }
            self.line_no += 1;
            let line = self.buf.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            return Some(parse_line(line, self.line_no).map(|v| (self.line_no, v)));
        }
    }
}

fn parse_line(line: &str, line_no: usize) -> Result<Vec<f64>, CliError> {
    line.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|f| !f.is_empty())
        .map(|field| match field.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(_) => Err(CliError::Parse {
                line: line_no,
                message: format!("non-finite value {field:?}"),
            }),
            Err(_) => Err(CliError::Parse {
                line: line_no,
                message: format!("cannot parse {field:?} as a number"),
            }),
        })
        .collect()
}

/// `FDV1` | d: u32 LE | vectors of d × f64 LE. Yields `(record_number,
/// vector)` with 1-based record numbers.
pub struct BinaryReader<R> {
    inner: R,
    dim: usize,
    record: usize,
}

impl<R: Read> BinaryReader<R> {
    pub fn new(mut inner: R) -> Result<Self, CliError> {
        let mut header = [0u8; 8];
        inner
            .read_exact(&mut header)
            .map_err(|_| CliError::Binary("missing FDV1 header".into()))?;
        if &header[..4] != BINARY_MAGIC {
            return Err(CliError::Binary("bad magic, expected \"FDV1\"".into()));
        }
        let dim = u32::from_le_bytes(header[4..].try_into().unwrap()) as usize;
        Ok(Self {
            inner,
            dim,
            record: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl<R: Read> Iterator for BinaryReader<R> {
    type Item = Result<(usize, Vec<f64>), CliError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.dim == 0 {
            return None;
        }
        let mut raw = vec![0u8; 8 * self.dim];
        let mut filled = 0;
        while filled < raw.len() {
            match self.inner.read(&mut raw[filled..]) {
                Ok(0) => break,
                Ok(n) => filled += n,
                Err(e) if e.kind() == std::io::ErrorKind::Interrupted => {}
                Err(e) => return Some(Err(CliError::Io(e))),
            }
        }
        if filled == 0 {
            return None;
        }
        self.record += 1;
        if filled < raw.len() {
            return Some(Err(CliError::Parse {
                line: self.record,
                message: format!("truncated record ({filled} of {} bytes)", raw.len()),
            }));
        }
        let v: Vec<f64> = raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        if let Some(pos) = v.iter().position(|x| !x.is_finite()) {
            return Some(Err(CliError::Parse {
                line: self.record,
                message: format!("non-finite value in field {}", pos + 1),
            }));
        }
        Some(Ok((self.record, v)))
    }
}

/// Encodes vectors in the `FDV1` format.
pub fn encode_binary(dim: u32, vectors: &[Vec<f64>]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + vectors.len() * dim as usize * 8);
    out.extend_from_slice(BINARY_MAGIC);
    out.extend_from_slice(&dim.to_le_bytes());
    for v in vectors {
        for x in v {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    out
}
